"""Weight-truncated Fedosov construction for a Lie pair over a point.

The big algebra is Lambda(g^*) (x) S(B^*) (x) Lambda(B) on generators
    <a>*   degree 1   (dual of the subalgebra h)
    t_b    degree 1   (dual of the complement, form part)
    y_b    degree 0   (dual of the complement, symmetric part)
    b      degree -1  (vertical vector field d/dy_b)
with weight #t + deg_y.  Monomials of weight above N are zero; every operator
used here except the Schouten bracket keeps that ideal stable, and the
bracket lowers weight by one, which is why transferred brackets are checked
for stability at N + 1.
"""

from fractions import Fraction

from .algebra import FreeGCA, MultiDerivation, apply_linear, derivation
from .errors import ArgumentError, StabilizationError, StructuralError
from .graded import ONE, GradedSpace, frac, frac_str, vadd, vscale
from .liepair import build_lie_pair_algebra
from .linalg import solve
from .linf import DerivedPoissonStructure, LInfStructure
from .transfer import (Contraction, LinearMap, Perturbation, perturb_contraction,
                       transfer_structure, validate_contraction)

# [d/dy_b, y_c] = SCHOUTEN_SIGN * delta_bc in the Gerstenhaber bracket
SCHOUTEN_SIGN = 1
# L_D(d/dy_b) = LIE_SIGN * sum_c d/dy_b(D y_c) d/dy_c
LIE_SIGN = -1


class FedosovAlgebra:
    """Generator bookkeeping for the truncated big algebra."""

    def __init__(self, pair, N):
        if N < 2:
            raise ArgumentError("truncation weight N must be at least 2")
        self.pair = pair
        self.N = N
        g = pair.g
        els, wts = [], []
        self.xi, self.th, self.y, self.dd = {}, {}, {}, {}
        for a in pair.h:
            self.xi[a] = len(els)
            els.append((g.names[a] + "*", 1))
            wts.append(0)
        for b in pair.B:
            self.th[b] = len(els)
            els.append(("t_" + g.names[b], 1))
            wts.append(1)
        for b in pair.B:
            self.y[b] = len(els)
            els.append(("y_" + g.names[b], 0))
            wts.append(1)
        for b in pair.B:
            self.dd[b] = len(els)
            els.append((g.names[b], -1))
            wts.append(0)
        self.gens = GradedSpace(els, weights=wts)
        self.alg = FreeGCA(self.gens, weight_cap=N)
        self.kind = {}
        for d, tag in ((self.xi, "xi"), (self.th, "th"), (self.y, "y"), (self.dd, "dd")):
            for _, i in d.items():
                self.kind[i] = tag

    def form_gens(self):
        """L^* generators in the order (h-duals, complement-duals), with the
        g-index they are dual to."""
        out = [(self.xi[a], a) for a in self.pair.h]
        out += [(self.th[b], b) for b in self.pair.B]
        return out

    def bidegree(self, mono):
        """(p, q, r, s)."""
        p = q = r = s = 0
        for i in mono:
            t = self.kind[i]
            if t == "xi":
                p += 1
            elif t == "th":
                q += 1
            elif t == "y":
                r += 1
            else:
                s += 1
        return p, q, r, s

    def y_degree(self, mono):
        return sum(1 for i in mono if self.kind[i] == "y")


class ConnectionData:
    """Torsion-free L-connection on B extending the Bott action: the Bott part
    is forced by the pair; ``deltaB[(b1, b2)]`` is Delta^B_{b1} b2 in
    B-coordinates.  Default: half the B-bracket."""

    def __init__(self, pair, deltaB=None):
        self.pair = pair
        g = pair.g
        if deltaB is None:
            deltaB = {}
            for b1 in pair.B:
                for b2 in pair.B:
                    v = vscale(pair.bracket_B(b1, b2), Fraction(1, 2))
                    if v:
                        deltaB[(b1, b2)] = v
        self.deltaB = {}
        for (b1, b2), vec in deltaB.items():
            i1 = b1 if isinstance(b1, int) else g.space.index(b1)
            i2 = b2 if isinstance(b2, int) else g.space.index(b2)
            val = {}
            for k, c in vec.items():
                ki = k if isinstance(k, int) else g.space.index(k)
                if ki not in pair.B:
                    raise ArgumentError("Delta^B must take values in the complement")
                if frac(c):
                    val[ki] = frac(c)
            if i1 not in pair.B or i2 not in pair.B:
                raise ArgumentError("Delta^B is defined on complement elements only")
            if val:
                self.deltaB[(i1, i2)] = val
        bad = self.torsion_violation()
        if bad is not None:
            raise StructuralError(f"connection is not torsion free on "
                                  f"({g.names[bad[0]]}, {g.names[bad[1]]})", witness=bad)

    def torsion_violation(self):
        p = self.pair
        for i, b1 in enumerate(p.B):
            for b2 in p.B[i + 1:]:
                v = dict(self.deltaB.get((b1, b2), {}))
                vadd(v, self.deltaB.get((b2, b1), {}), -ONE)
                vadd(v, p.bracket_B(b1, b2), -ONE)
                if v:
                    return (b1, b2)
        return None

    def gamma(self, l, b):
        """nabla_{e_l} b for l an index of g (h element or complement element
        standing for j(l))."""
        if l in self.pair.h:
            return self.pair.bott(l, b)
        return self.deltaB.get((l, b), {})

    def shifted(self, sym):
        """Connection with Delta^B + S for a symmetric S (stays torsion free)."""
        d = {k: dict(v) for k, v in self.deltaB.items()}
        for (b1, b2), vec in sym.items():
            cur = d.setdefault((b1, b2), {})
            vadd(cur, {k: frac(c) for k, c in vec.items()})
        return ConnectionData(self.pair, d)

    def to_json(self):
        g = self.pair.g
        return {"deltaB": [{"x": g.names[b1], "y": g.names[b2],
                            "value": [[g.names[k], frac_str(c)] for k, c in sorted(v.items())]}
                           for (b1, b2), v in sorted(self.deltaB.items())]}

    @classmethod
    def from_json(cls, pair, doc):
        tab = {}
        for pos, e in enumerate(doc.get("deltaB", [])):
            try:
                tab[(e["x"], e["y"])] = {k: frac(c) for k, c in e["value"]}
            except (KeyError, TypeError, ValueError) as exc:
                raise ArgumentError(f"deltaB entry #{pos}: {exc}") from exc
        return cls(pair, tab)


def _lie_structure_constants(pair):
    """[e_i, e_j] in the basis (h, j(B)) as {g-index: coefficient}."""
    g = pair.g
    idx = list(pair.h) + list(pair.B)

    def vec(i):
        return {i: ONE} if i in pair.h else pair.j(i)

    C = {}
    for x, i in enumerate(idx):
        for j in idx[x + 1:]:
            br = g.bracket(vec(i), vec(j))
            coords = dict(pair.pr_h(br))
            vadd(coords, pair.pr_B(br))
            if coords:
                C[(i, j)] = coords
    return idx, C


class FedosovQ:
    """The pieces of Q = -delta + d^nabla + X on the big algebra."""

    def __init__(self, F, conn, X):
        self.F = F
        self.conn = conn
        self.X = X                      # y-generator index -> element
        self.hi = None
        alg = F.alg
        self.delta = derivation(alg, 1, {F.y[b]: {(F.th[b],): ONE} for b in F.pair.B})
        self.kappa = derivation(alg, -1, {F.th[b]: {(F.y[b],): ONE} for b in F.pair.B})
        self.dnabla = _dnabla(F, conn)
        rho = {}
        for i, v in self.dnabla.table.items():
            rho[i[0]] = dict(v)
        for i, v in X.items():
            cur = rho.setdefault(i, {})
            vadd(cur, v)
        self.rho = derivation(alg, 1, {i: v for i, v in rho.items() if v})
        qt = {i[0]: dict(v) for i, v in self.rho.table.items()}
        for i, v in self.delta.table.items():
            cur = qt.setdefault(i[0], {})
            vadd(cur, v, -ONE)
        self.Q = derivation(alg, 1, {i: v for i, v in qt.items() if v})

    def lie(self, which="Q"):
        """L_D for D in {"Q", "rho", "delta"}; the vertical part is read off
        the weight N + 1 solution when available."""
        D = getattr(self, which)
        Dh = getattr(self.hi, which) if self.hi is not None else D
        return lie_derivative(self.F, D, Dh)

    def square_defect(self, memo=False):
        """Q(Q(m)) for every basis monomial, with fresh unmemoized derivations."""
        Q = self.Q.copy(memo=memo)
        out = {}
        for m in self.F.alg.basis():
            v = apply_linear(lambda x: Q(x), Q(m))
            if v:
                out[m] = v
        return out


def _dnabla(F, conn):
    """Covariant derivative: CE differential on forms, dual connection on y."""
    pair = F.pair
    alg = F.alg
    idx, C = _lie_structure_constants(pair)
    dual = {gi: fi for fi, gi in F.form_gens()}
    table = {}
    for fi, gi in F.form_gens():
        v = {}
        for x, i in enumerate(idx):
            for j in idx[x + 1:]:
                c = C.get((i, j), {}).get(gi)
                if c:
                    vadd(v, alg.monomial([dual[i], dual[j]]), -c)
        if v:
            table[fi] = v
    for c in pair.B:
        v = {}
        for l in idx:
            for b in pair.B:
                coef = conn.gamma(l, b).get(c)
                if coef:
                    vadd(v, alg.monomial([dual[l], F.y[b]]), -coef)
        if v:
            table[F.y[c]] = v
    return derivation(alg, 1, table)


def _ydiff(F, b, vec):
    """d/dy_b of an element (an even derivation)."""
    yb = F.y[b]
    out = {}
    for m, c in vec.items():
        n = m.count(yb)
        if n:
            lst = list(m)
            lst.remove(yb)
            vadd(out, {tuple(lst): c * n})
    return out


def lie_derivative(F, D, D_hi=None):
    """L_D on the big algebra for a derivation D of the functions.  d/dy
    lowers weight, so the vertical part uses ``D_hi`` (D known one weight
    further) when given."""
    alg = F.alg
    D_hi = D_hi or D
    table = {}
    for i, v in D.table.items():
        table[i[0]] = dict(v)
    for b in F.pair.B:
        v = {}
        for c in F.pair.B:
            coef = _ydiff(F, b, D_hi((F.y[c],)))
            if coef:
                vadd(v, alg.mul(coef, {(F.dd[c],): ONE}), Fraction(LIE_SIGN))
        if v:
            table[F.dd[b]] = v
    return derivation(alg, D.degree, table)


def build_koszul_contraction(pair, N):
    """(sigma, tau, h) from (big, L_{-delta}) onto (Lambda h^* (x) Lambda B, 0)."""
    F = FedosovAlgebra(pair, N)
    ce = build_lie_pair_algebra(pair)
    return _koszul(F, ce), F, ce


def _koszul(F, ce):
    alg = F.alg
    small = ce.algebra
    delta = derivation(alg, 1, {F.y[b]: {(F.th[b],): ONE} for b in F.pair.B})
    kappa = derivation(alg, -1, {F.th[b]: {(F.y[b],): ONE} for b in F.pair.B})
    to_small = {}
    for a, i in F.xi.items():
        to_small[i] = ce.xi[a]
    for b, i in F.dd.items():
        to_small[i] = ce.bgen[b]
    to_big = {v: k for k, v in to_small.items()}

    def sigma(m):
        if any(i not in to_small for i in m):
            return {}
        return small.monomial([to_small[i] for i in m])

    def tau(m):
        return alg.monomial([to_big[i] for i in m])

    def weight(m):
        p, q, r, s = F.bidegree(m)
        return q + r

    def h(m):
        w = weight(m)
        if w == 0:
            return {}
        return vscale(kappa((m,)[0]), Fraction(1, w))

    d_big = lie_derivative(F, vscale_derivation(delta, -1))  # zero on d/dy
    return Contraction(alg, small, LinearMap(lambda m: d_big(m), 1, "L(-delta)"),
                       LinearMap.zero(1), LinearMap(sigma, 0, "sigma"),
                       LinearMap(tau, 0, "tau"), LinearMap(h, -1, "h"), truncation=F.N)


def vscale_derivation(d, c):
    return derivation(d.alg, d.degree, {i[0]: vscale(v, c) for i, v in d.table.items()})


def solve_x_nabla(pair, conn=None, N=4):
    """Weight-by-weight solution of Q^2 = 0 with h(X) = 0.  Returns FedosovQ."""
    conn = conn or ConnectionData(pair)
    F = FedosovAlgebra(pair, N + 1)
    alg = F.alg
    X = {}
    basis = alg.basis()
    for m in range(1, N + 1):
        fq = FedosovQ(F, conn, X)
        cand = [mo for mo in basis
                if F.y_degree(mo) == m + 1 and sum(1 for i in mo if F.kind[i] in ("xi", "th")) == 1
                and all(F.kind[i] != "dd" for i in mo)]
        cols = []
        for mo in cand:
            col = {}
            for k, c in fq.delta((mo,)[0]).items():
                col[("d", k)] = c
            for k, c in fq.kappa((mo,)[0]).items():
                col[("k", k)] = c
            cols.append(col)
        for c in pair.B:
            yc = F.y[c]
            R = apply_linear(lambda x: fq.rho(x), fq.rho((yc,)))
            vadd(R, apply_linear(lambda x: fq.delta(x), fq.dnabla((yc,))), -ONE)
            vadd(R, fq.dnabla((F.th[c],)), -ONE)
            vadd(R, apply_linear(lambda x: fq.delta(x), X.get(yc, {})), -ONE)
            Rm = {k: v for k, v in R.items() if F.y_degree(k) == m}
            if any(F.y_degree(k) < m for k in R):
                low = min(F.y_degree(k) for k in R)
                raise StructuralError(f"Fedosov equation not solved below y-degree {m} "
                                      f"(residue at degree {low}) for {alg.gens.names[yc]}")
            if not Rm:
                continue
            rhs = {("d", k): v for k, v in Rm.items()}
            x, nullity = solve(cols, rhs, order=_order)
            if nullity:
                raise StructuralError(f"Fedosov correction not unique at y-degree {m + 1}")
            if x is None:
                raise StructuralError(f"Fedosov equation has no solution at y-degree {m + 1} "
                                      f"for {alg.gens.names[yc]}")
            sol = {}
            for j, coef in x.items():
                vadd(sol, {cand[j]: coef})
            viah = {}
            for k, v in Rm.items():
                vadd(viah, _h(F, fq, k), v)
            if sol != viah:
                raise StructuralError("linear solve and homotopy formula disagree")
            cur = X.setdefault(yc, {})
            vadd(cur, sol)
    X = {k: v for k, v in X.items() if v}
    lo = FedosovAlgebra(pair, N)
    out = FedosovQ(lo, conn, {k: {m: c for m, c in v.items() if lo.alg.in_range(m)}
                              for k, v in X.items()})
    out.hi = FedosovQ(F, conn, X)
    return out


def _order(key):
    tag, k = key
    return (tag, len(k), k)


def _h(F, fq, m):
    p, q, r, s = F.bidegree(m)
    w = q + r
    if w == 0:
        return {}
    return vscale(fq.kappa((m,)[0]), Fraction(1, w))


def schouten_structure(F, fq, arity_cap=4):
    """Differential Gerstenhaber algebra on the big algebra: q_1 = L_Q and q_2
    generated by [d/dy_b, y_b]."""
    alg = F.alg
    q1 = fq.lie("Q")
    q2 = MultiDerivation(alg, 2, 0 + 1, 0)
    for b in F.pair.B:
        q2.set((F.dd[b], F.y[b]), {(): Fraction(SCHOUTEN_SIGN)})
    lin = LInfStructure(alg, 1, {1: q1, 2: q2}, arity_cap)
    return DerivedPoissonStructure(alg, lin)


def fedosov_contraction(pair, conn=None, N=4, fq=None):
    """Perturbed contraction (sigma, tau~, h~) of (big, L_Q) onto the Lie-pair
    algebra with differential d^Bott, plus bookkeeping."""
    fq = fq or solve_x_nabla(pair, conn, N)
    F = fq.F
    ce = build_lie_pair_algebra(pair)
    base = _koszul(F, ce)
    lrho = fq.lie("rho")
    pert = Perturbation(LinearMap(lambda m: lrho(m), 1, "L(rho)"))
    c = perturb_contraction(base, pert, truncation=N)
    return c, base, fq, ce


def fedosov_transfer_compare(pair, conn=None, N=4, arity_cap=4, stability=True,
                             validate=True):
    """Transfer the Fedosov Gerstenhaber algebra to the small side and compare
    with the Lie-pair brackets on generators.  Returns a report dict whose
    "diff" list is empty on agreement."""
    c, base, fq, ce = fedosov_contraction(pair, conn, N)
    F = fq.F
    src = schouten_structure(F, fq, arity_cap)
    report = {"weight": N, "arity_cap": arity_cap, "diff": [], "checks": []}
    if validate:
        sq = fq.square_defect()
        report["checks"].append({"check": "Q-square", "pass": not sq})
        rep = validate_contraction(c, semifull=True)
        report["checks"].append({"check": "perturbed-contraction", "pass": not rep})
        if sq or rep:
            raise StructuralError("Fedosov data fails its own invariants",
                                  witness=rep[:3] if rep else sq)
    dst, tau_inf = transfer_structure(c, src, arity_cap, check=False)
    small = ce.algebra
    values = {}
    for n in range(1, arity_cap + 1):
        for w in ce.generator_words(n):
            got = dst.q(n, w)
            want = ce.q(n, w) if n <= ce.arity_cap else {}
            values[(n, w)] = got
            if got != want:
                report["diff"].append({"arity": n, "word": [small.name(x) for x in w],
                                       "transferred": sorted((small.name(k), v) for k, v in got.items()),
                                       "direct": sorted((small.name(k), v) for k, v in want.items())})
    if stability:
        c2, _, fq2, _ = fedosov_contraction(pair, conn, N + 1)
        src2 = schouten_structure(fq2.F, fq2, arity_cap)
        dst2, _ = transfer_structure(c2, src2, arity_cap, check=False)
        for (n, w), v in values.items():
            v2 = dst2.q(n, w)
            if v2 != v:
                name = f"l_{n}({', '.join(small.name(x) for x in w)})"
                raise StabilizationError(f"transferred coefficient {name} changes between "
                                         f"weights {N} and {N + 1}", coefficient=name)
        report["checks"].append({"check": "stable-at-N+1", "pass": True})
    report["transfer"] = dst
    return report
