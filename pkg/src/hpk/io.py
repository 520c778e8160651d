"""JSON input and output: structure files, deterministic dumps and the
shipped example documents."""

import json
from fractions import Fraction

from .algebra import FreeGCA
from .errors import ArgumentError
from .graded import GradedSpace, frac, frac_str
from .linf import (DEFAULT_ARITY_CAP, DerivedPoissonStructure, as_linf, leibniz_structure,
                   spanning_words, table_structure)


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArgumentError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def plain(x):
    """Fractions to "p/q" strings, tuples to lists; dict order is kept."""
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    return x


def dumps(doc):
    return json.dumps(plain(doc), indent=2, ensure_ascii=False) + "\n"


def _vec_json(space, vec):
    return [[space.name(k), frac_str(c)] for k, c in sorted(vec.items(), key=lambda t: space.sort_key(t[0]))]


def _read_vec(space, items, where):
    out = {}
    try:
        for name, c in items:
            if isinstance(space, FreeGCA):
                c0, m = space.parse_monomial(name)
                if c0:
                    out[m] = out.get(m, 0) + c0 * frac(c)
            else:
                k = space.index(name)
                out[k] = out.get(k, 0) + frac(c)
    except (TypeError, ValueError) as exc:
        raise ArgumentError(f"{where}: {exc}") from exc
    return {k: c for k, c in out.items() if c}


def structure_to_json(s, word_cap=None):
    """Sparse tables of q_n on canonical words (generator words for a derived
    Poisson structure)."""
    lin = as_linf(s)
    sp = lin.space
    rows = []
    if isinstance(s, DerivedPoissonStructure) or isinstance(sp, FreeGCA):
        from .polyvec import gen_tuples
        head = {"kind": "derived-poisson", "k": lin.k,
                "generators": sp.gens.to_json(), "weight_cap": sp.weight_cap}
        for n in range(1, lin.arity_cap + 1):
            if not lin.has(n):
                continue
            for t in gen_tuples(sp, n, lin.shift):
                v = lin.q(n, tuple((i,) for i in t))
                if v:
                    rows.append({"arity": n, "word": [sp.gens.names[i] for i in t],
                                 "value": _vec_json(sp, v)})
    else:
        head = {"kind": "linf", "k": lin.k, "space": sp.to_json()}
        for n in range(1, lin.arity_cap + 1):
            if not lin.has(n):
                continue
            for w in spanning_words(sp, n, lin.shift, word_cap=word_cap or n):
                v = lin.q(n, w)
                if v:
                    rows.append({"arity": n, "word": [sp.name(x) for x in w],
                                 "value": _vec_json(sp, v)})
    head["arity_cap"] = lin.arity_cap
    head["brackets"] = rows
    return head


def structure_from_json(doc, arity_cap=None, space=None):
    """LInfStructure on a graded space, or a derived Poisson structure given
    by generator values.  An empty document is the zero structure on the zero
    space."""
    if not isinstance(doc, dict):
        raise ArgumentError("structure: expected a JSON object")
    k = doc.get("k", 1)
    if not isinstance(k, int):
        raise ArgumentError("structure: field 'k' must be an integer")
    rows = doc.get("brackets", [])
    cap = arity_cap or doc.get("arity_cap") or max([r.get("arity", 1) for r in rows] + [DEFAULT_ARITY_CAP])
    kind = doc.get("kind", "derived-poisson" if "generators" in doc else "linf")
    if kind == "derived-poisson":
        try:
            gens = GradedSpace.from_json(doc["generators"])
        except KeyError:
            raise ArgumentError("structure: missing field 'generators'") from None
        alg = FreeGCA(gens, weight_cap=doc.get("weight_cap"))
        tabs = {}
        for pos, r in enumerate(rows):
            where = f"structure: bracket entry #{pos}"
            try:
                word = tuple(gens.index(x) for x in r["word"])
                n = r.get("arity", len(word))
            except (KeyError, TypeError) as exc:
                raise ArgumentError(f"{where}: missing {exc}") from exc
            if n != len(word):
                raise ArgumentError(f"{where}: arity {n} but {len(word)} inputs")
            tabs.setdefault(n, {})[word] = _read_vec(alg, r.get("value", []), where)
        try:
            return leibniz_structure(alg, k, tabs, cap)
        except ArgumentError as exc:
            raise ArgumentError(f"structure: {exc}") from exc
    if kind != "linf":
        raise ArgumentError(f"structure: unknown kind {kind!r}")
    read = GradedSpace.from_json(doc.get("space", {"elements": []}))
    if space is None:
        space = read
    elif read != space:
        raise ArgumentError("structure: space does not match the contraction's big side")
    tabs = {}
    for pos, r in enumerate(rows):
        where = f"structure: bracket entry #{pos}"
        try:
            word = tuple(space.index(x) for x in r["word"])
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"{where}: missing {exc}") from exc
        n = r.get("arity", len(word))
        if n != len(word):
            raise ArgumentError(f"{where}: arity {n} but {len(word)} inputs")
        vec = _read_vec(space, r.get("value", []), where)
        deg = sum(space.degree(x) for x in word) + 1 + (n - 1) * (k - 1)
        if any(space.degree(x) != deg for x in vec):
            raise ArgumentError(f"{where}: value has the wrong degree (expected {deg})")
        tabs.setdefault(n, {})[word] = vec
    try:
        return table_structure(space, k, tabs, cap)
    except ArgumentError as exc:
        raise ArgumentError(f"structure: {exc}") from exc


def read_dphi(doc):
    """Splitting change {b: {a: c}} from {"dphi": {b: [[a, c]]}} or the bare map."""
    if isinstance(doc, dict) and "dphi" in doc:
        doc = doc["dphi"]
    if isinstance(doc, dict) and "splitting_phi" in doc:
        doc = doc["splitting_phi"]
    if not isinstance(doc, dict):
        raise ArgumentError("splitting change: expected an object {b: [[a, c], ...]}")
    out = {}
    for b, vals in doc.items():
        try:
            out[b] = {a: frac(c) for a, c in vals}
        except (TypeError, ValueError) as exc:
            raise ArgumentError(f"splitting change for {b!r}: {exc}") from exc
    return out


EXAMPLES = ("sl2-cartan", "sl3-cartan", "sl2-matched", "abelian")


def example_document(name):
    from . import liepair
    if name == "sl2-cartan":
        return liepair.sl2_pair().to_json()
    if name == "sl3-cartan":
        return liepair.sl3_pair().to_json()
    if name == "abelian":
        return liepair.abelian_pair(2, 1).to_json()
    if name == "sl2-matched":
        a, b, nabla, Delta = liepair.sl2_matched()
        # closure of both summands is checked on the way in
        liepair.build_matched_pair(a, b, nabla, Delta, arity_cap=3)
        return liepair.matched_pair_to_json(a, b, nabla, Delta)
    raise ArgumentError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
