"""hpk command line: checkers and constructions on JSON inputs.

Exit status: 0 every check passes, 1 usage or input error, 2 a check fails,
3 structural or internal error.
"""

import argparse
import json
import sys

from .errors import (ArgumentError, HPKError, PreconditionError, StabilizationError,
                     StructuralError)
from .io import (EXAMPLES, dumps, example_document, load_json, plain, read_dphi,
                 structure_from_json, structure_to_json)

OK, USAGE, FAILED, INTERNAL = 0, 1, 2, 3
MAX_LISTED = 20

GROUPED = {("liepair", "check"): "liepair-check",
           ("liepair", "cohomology"): "liepair-cohomology",
           ("liepair", "compare-splittings"): "compare-splittings",
           ("fedosov", "compare"): "fedosov-compare",
           ("polyvec", "mc-check"): "polyvec-mc",
           ("polyvec", "extend"): "polyvec-extend"}

DEFAULTS = {"arity_cap": None, "word_cap": 4, "weight_cap": None, "weight": 4,
            "k": None, "format": "json", "threads": None}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def check(name, failures, **extra):
    out = {"check": name, "pass": not failures}
    out.update(extra)
    if failures:
        out["failures"] = failures[:MAX_LISTED]
        out["failure_count"] = len(failures)
    return out


def status_of(report):
    return OK if all(c["pass"] for c in report.get("checks", [])) else FAILED


# -- commands --------------------------------------------------------------

def _pair(path):
    from .liepair import LiePair
    return LiePair.from_json(load_json(path))


def cmd_check_linf(cfg):
    from .linf import DerivedPoissonStructure, check_jacobi, check_leibniz
    s = structure_from_json(load_json(cfg["input"]), cfg["arity_cap"])
    checks = [check("jacobi", check_jacobi(s, word_cap=cfg["word_cap"], threads=cfg["threads"]))]
    if isinstance(s, DerivedPoissonStructure):
        checks.append(check("leibniz", check_leibniz(s, word_cap=cfg["word_cap"],
                                                     threads=cfg["threads"])))
    return {"command": "check-linf", "checks": checks}


def _higher_vanishing(ce, top):
    out = []
    alg = ce.algebra
    for n in range(4, top + 1):
        for w in ce.generator_words(n):
            v = ce.q(n, w)
            if v:
                out.append({"arity": n, "word": [alg.name(x) for x in w],
                            "value": sorted((alg.name(m), c) for m, c in v.items())})
    return out


def cmd_liepair_check(cfg):
    from .liepair import build_lie_pair_algebra
    from .linf import check_jacobi, check_leibniz
    rep = {"command": "liepair-check", "checks": []}
    try:
        pair = _pair(cfg["input"])
    except StructuralError as exc:
        w = exc.witness
        rep["checks"].append(check("subalgebra-closed", [{"detail": str(exc),
                                                           "triple": list(w) if w else None}]))
        return rep
    rep["checks"].append(check("subalgebra-closed", []))
    cap = cfg["arity_cap"] or 5
    ce = build_lie_pair_algebra(pair, arity_cap=cap)
    t = cfg["threads"]
    rep["checks"].append(check("leibniz", check_leibniz(ce, word_cap=cfg["word_cap"], threads=t)))
    rep["checks"].append(check("jacobi", check_jacobi(ce, word_cap=cfg["word_cap"], threads=t)))
    rep["checks"].append(check("higher-brackets-vanish", _higher_vanishing(ce, cap)))
    return rep


def cmd_liepair_cohomology(cfg):
    from .liepair import build_lie_pair_algebra, gerstenhaber_on_cohomology
    pair = _pair(cfg["input"])
    ce = build_lie_pair_algebra(pair, arity_cap=3)
    rep = {"command": "liepair-cohomology", "checks": []}
    try:
        H = gerstenhaber_on_cohomology(ce)
    except StructuralError as exc:
        rep["checks"].append(check("gerstenhaber", [{"detail": str(exc)}]))
        return rep
    alg = ce.algebra
    rep["dimensions"] = {str(d): n for d, n in sorted(H.dims.items())}
    rep["representatives"] = [{"degree": d, "vector": sorted(((alg.name(m), c) for m, c in v.items()),
                                                             key=lambda t: t[0])}
                              for d, v in zip(H.degrees, H.reps)]
    rep["bracket"] = [{"i": i, "j": j, "value": sorted(v.items())} for (i, j), v in sorted(H.bracket.items())]
    rep["product"] = [{"i": i, "j": j, "value": sorted(v.items())} for (i, j), v in sorted(H.product.items())]
    rep["checks"].append(check("gerstenhaber", []))
    return rep


def cmd_compare_splittings(cfg):
    from .linf import check_morphism
    from .liepair import splitting_isomorphism
    pair = _pair(cfg["input"])
    dphi = read_dphi(load_json(cfg["second"]))
    cap = cfg["arity_cap"] or 4
    f, src, dst = splitting_isomorphism(pair, dphi, arity_cap=cap, check=False)
    basis = [m for m in src.algebra.basis() if m]
    checks = [check("first-coefficient-identity", [] if f.first_is_identity(basis) else [{"detail": "f_1 != id"}]),
              check("morphism", check_morphism(f, src, dst, arity_cap=cap, word_cap=cfg["word_cap"],
                                               threads=cfg["threads"]))]
    return {"command": "compare-splittings", "checks": checks}


def cmd_matched_pair(cfg):
    from .liepair import build_matched_pair, matched_pair_from_json, matched_pair_report
    from .linf import check_jacobi, check_leibniz
    a, b, nabla, Delta = matched_pair_from_json(load_json(cfg["input"]))
    rep = {"command": "matched-pair", "checks": []}
    bad = matched_pair_report(a, b, nabla, Delta)
    rep["checks"].append(check("matched-pair-identities", bad))
    if bad:
        return rep
    ce = build_matched_pair(a, b, nabla, Delta, arity_cap=3)
    alg = ce.algebra
    tern = [{"word": [alg.name(x) for x in w], "value": sorted((alg.name(m), c) for m, c in ce.q(3, w).items())}
            for w in ce.generator_words(3) if ce.q(3, w)]
    rep["checks"].append(check("ternary-vanishes", tern))
    rep["checks"].append(check("strict-jacobi", check_jacobi(ce, max_arity=3, word_cap=cfg["word_cap"])))
    rep["checks"].append(check("derivation-differential", check_leibniz(ce, word_cap=cfg["word_cap"],
                                                                        arity_cap=2)))
    return rep


def cmd_fedosov_compare(cfg):
    from .fedosov import ConnectionData, fedosov_transfer_compare
    pair = _pair(cfg["input"])
    conn = ConnectionData.from_json(pair, load_json(cfg["deltaB"])) if cfg.get("deltaB") else None
    N = cfg["weight"]
    cap = cfg["arity_cap"] or 4
    rep = {"command": "fedosov-compare", "weight": N, "arity_cap": cap, "checks": []}
    try:
        r = fedosov_transfer_compare(pair, conn, N=N, arity_cap=cap)
    except StabilizationError as exc:
        rep["checks"].append(check("stable-at-N+1", [{"coefficient": exc.coefficient, "detail": str(exc)}]))
        return rep
    rep["checks"].extend(r["checks"])
    rep["checks"].append(check("agreement", r["diff"]))
    return rep


def _polyvec_structure(cfg):
    from .linf import DerivedPoissonStructure
    from .polyvec import AlgebroidData, algebroid_from_linf, lie_poisson_extend
    doc = load_json(cfg["input"])
    if isinstance(doc, dict) and "fiber" in doc:
        data = AlgebroidData.from_json(doc)
        k = cfg["k"] if cfg["k"] is not None else doc.get("k", 1)
        return lie_poisson_extend(data, k, arity_cap=cfg["arity_cap"] or data.max_arity())
    s = structure_from_json(doc, cfg["arity_cap"])
    if isinstance(s, DerivedPoissonStructure):
        return s
    # an L-infinity algebra: extend it as an algebroid over a point
    data = algebroid_from_linf(s)
    k = cfg["k"] if cfg["k"] is not None else 1
    return lie_poisson_extend(data, k, arity_cap=s.arity_cap)


def cmd_polyvec_mc(cfg):
    from .linf import check_jacobi
    from .polyvec import mc_defect, mc_from_structure
    d = _polyvec_structure(cfg)
    rep = {"command": "polyvec-mc", "k": d.k, "checks": []}
    mc = mc_from_structure(d)
    try:
        defect = mc_defect(mc, max_weight=d.arity_cap)
    except PreconditionError as exc:
        rep["checks"].append(check("Q-square", [{"detail": str(exc)}]))
        return rep
    rep["checks"].append(check("Q-square", []))
    rep["checks"].append(check("maurer-cartan", [{"weight": p, "field": f.describe()}
                                                 for p, f in sorted(defect.items())]))
    rep["checks"].append(check("jacobi", check_jacobi(d, word_cap=cfg["word_cap"], threads=cfg["threads"])))
    return rep


def cmd_polyvec_extend(cfg):
    from .linf import check_jacobi
    d = _polyvec_structure(cfg)
    return {"command": "polyvec-extend", "structure": structure_to_json(d),
            "checks": [check("jacobi", check_jacobi(d, word_cap=cfg["word_cap"], threads=cfg["threads"]))]}


def cmd_transfer(cfg):
    from .linf import check_jacobi
    from .transfer import Contraction, transfer_structure, validate_contraction
    c = Contraction.from_json(load_json(cfg["contraction"]))
    s = structure_from_json(load_json(cfg["structure"]), cfg["arity_cap"], space=c.big)
    cap = cfg["arity_cap"] or 4
    rep = {"command": "transfer", "checks": []}
    bad = validate_contraction(c, semifull=False)
    rep["checks"].append(check("contraction", bad))
    if bad:
        return rep
    try:
        dst, _ = transfer_structure(c, s, cap, check=True)
    except PreconditionError as exc:
        rep["checks"].append(check("precondition", [{"detail": str(exc)}]))
        return rep
    rep["structure"] = structure_to_json(dst)
    rep["checks"].append(check("jacobi", check_jacobi(dst, word_cap=cfg["word_cap"], threads=cfg["threads"])))
    return rep


def cmd_emit_example(cfg):
    return example_document(cfg["name"])


COMMANDS = {"check-linf": cmd_check_linf, "liepair-check": cmd_liepair_check,
            "liepair-cohomology": cmd_liepair_cohomology,
            "compare-splittings": cmd_compare_splittings, "matched-pair": cmd_matched_pair,
            "fedosov-compare": cmd_fedosov_compare, "polyvec-mc": cmd_polyvec_mc,
            "polyvec-extend": cmd_polyvec_extend, "transfer": cmd_transfer}


def build_parser():
    p = Parser(prog="hpk", description="Exact checks for derived Poisson algebras and Lie pairs.")
    p.add_argument("--config", help="JSON file with option defaults; flags override it")
    sub = p.add_subparsers(dest="command", parser_class=Parser)

    def common(sp):
        sp.add_argument("--arity-cap", type=int)
        sp.add_argument("--word-cap", type=int)
        sp.add_argument("--weight-cap", type=int)
        sp.add_argument("--format", choices=["json", "text"])
        sp.add_argument("--threads", type=int)
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        return sp

    for name in ("check-linf", "liepair-check", "liepair-cohomology", "matched-pair"):
        common(sub.add_parser(name)).add_argument("input")
    sp = common(sub.add_parser("compare-splittings"))
    sp.add_argument("input")
    sp.add_argument("second", metavar="phi")
    sp = common(sub.add_parser("fedosov-compare"))
    sp.add_argument("input")
    sp.add_argument("--weight", type=int)
    sp.add_argument("--deltaB")
    for name in ("polyvec-mc", "polyvec-extend"):
        sp = common(sub.add_parser(name))
        sp.add_argument("input")
        sp.add_argument("--k", type=int)
    sp = common(sub.add_parser("transfer"))
    sp.add_argument("--contraction", required=True)
    sp.add_argument("--structure", required=True)
    sp = sub.add_parser("emit-example")
    sp.add_argument("name", choices=EXAMPLES)
    sp.add_argument("-o", "--output")
    return p


def _normalize(argv):
    if len(argv) >= 2 and (argv[0], argv[1]) in GROUPED:
        return [GROUPED[(argv[0], argv[1])]] + argv[2:]
    for i in range(len(argv) - 1):
        if argv[i] == "--config":
            rest = argv[:i] + argv[i + 2:]
            return argv[i:i + 2] + _normalize(rest)
    return argv


def config_from_args(ns):
    cfg = dict(DEFAULTS)
    if ns.config:
        doc = load_json(ns.config)
        if not isinstance(doc, dict):
            raise ArgumentError(f"{ns.config}: expected a JSON object")
        for k, v in doc.items():
            key = k.replace("-", "_")
            if key not in cfg and key not in ("input", "second", "deltaB", "contraction",
                                              "structure", "output", "weight"):
                raise ArgumentError(f"{ns.config}: unknown option {k!r}")
            cfg[key] = v
    for k, v in vars(ns).items():
        if k == "config":
            continue
        if v is not None:
            cfg[k] = v
        else:
            cfg.setdefault(k, None)
    for k in ("arity_cap", "word_cap", "weight_cap", "weight"):
        v = cfg.get(k)
        if v is not None and (not isinstance(v, int) or v < 1):
            raise ArgumentError(f"--{k.replace('_', '-')} must be a positive integer")
    return cfg


def render_text(report):
    lines = []
    for c in report.get("checks", []):
        if c["pass"]:
            lines.append(f"PASS {c['check']}")
        else:
            lines.append(f"FAIL {c['check']} ({c.get('failure_count', 0)} failures)")
            for f in c.get("failures", [])[:3]:
                lines.append("  " + json.dumps(plain(f), ensure_ascii=False))
    return "\n".join(lines) + "\n"


def run(cfg):
    """Execute one command; returns (status, document)."""
    cmd = cfg.get("command")
    if cmd == "emit-example":
        return OK, cmd_emit_example(cfg)
    if cmd not in COMMANDS:
        raise UsageError(f"unknown command {cmd!r}")
    report = COMMANDS[cmd](cfg)
    return status_of(report), report


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(_normalize(argv))
        if not ns.command:
            raise UsageError("hpk: a command is required (try --help)")
        cfg = config_from_args(ns)
        status, doc = run(cfg)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE
    except ArgumentError as exc:
        print(f"hpk: {exc}", file=sys.stderr)
        return USAGE
    except (StructuralError, PreconditionError) as exc:
        print(f"hpk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL
    except HPKError as exc:
        print(f"hpk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL
    text = render_text(doc) if cfg.get("format") == "text" and "checks" in doc else dumps(doc)
    if cfg.get("output"):
        with open(cfg["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
