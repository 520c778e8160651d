"""Lie pairs (g, h) over a point and the degree +1 derived Poisson algebra on
Lambda(h^*) (x) Lambda(B), B = g/h, together with matched pairs, the change of
splitting isomorphism and the Gerstenhaber algebra on cohomology.

Generators of the algebra: one odd generator "<a>*" of degree 1 for each basis
element a of h (the dual coordinate), then the complement basis elements of
degree -1.  In the alternative "dirac" grading both kinds have degree +1 and
the structure is read with k = -1; all signs depend on parities only, so the
two gradings carry the same tables.
"""

from .algebra import FreeGCA
from .errors import ArgumentError, StructuralError
from .graded import ONE, GradedSpace, frac, frac_str, vadd, vscale
from .linf import (Coderivation, DerivedPoissonStructure,
                   check_morphism, cohomology_with_bracket, exp_coderivation,
                   leibniz_structure, poisson_axioms_on_cohomology)
from .algebra import MultiDerivation

LIE_PAIR = "lie-pair"
DIRAC = "dirac"


class LieAlgebra:
    """Finite-dimensional Lie algebra from structure constants.
    ``brackets`` maps an (i, j) index pair to a vector {k: c}."""

    def __init__(self, names, brackets=None, check=True):
        self.space = GradedSpace([(n, 0) for n in names])
        self.names = self.space.names
        n = len(self.names)
        self._br = {}
        for (i, j), vec in (brackets or {}).items():
            i = self._idx(i)
            j = self._idx(j)
            vec = {self._idx(k): frac(c) for k, c in vec.items() if frac(c)}
            if i == j:
                if vec:
                    raise StructuralError(f"[{self.names[i]},{self.names[i]}] must vanish")
                continue
            prev = self._br.get((i, j))
            if prev is not None and prev != vec:
                raise StructuralError(f"inconsistent values for [{self.names[i]},{self.names[j]}]")
            neg = vscale(vec, -1)
            prev = self._br.get((j, i))
            if prev is not None and prev != neg:
                raise StructuralError(f"bracket not antisymmetric on "
                                      f"({self.names[i]},{self.names[j]})")
            if vec:
                self._br[(i, j)] = vec
                self._br[(j, i)] = neg
        self.dim = n
        if check:
            bad = self.jacobi_violation()
            if bad is not None:
                raise StructuralError(f"Jacobi identity fails on {bad}", witness=bad)

    def _idx(self, x):
        return x if isinstance(x, int) else self.space.index(x)

    def br(self, i, j):
        return self._br.get((i, j), {})

    def bracket(self, x, y):
        acc = {}
        for i, a in x.items():
            for j, b in y.items():
                v = self._br.get((i, j))
                if v:
                    vadd(acc, v, a * b)
        return acc

    def jacobi_violation(self):
        n = len(self.names)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    ei, ej, ek = {i: ONE}, {j: ONE}, {k: ONE}
                    v = self.bracket(ei, self.bracket(ej, ek))
                    vadd(v, self.bracket(ej, self.bracket(ek, ei)))
                    vadd(v, self.bracket(ek, self.bracket(ei, ej)))
                    if v:
                        return (self.names[i], self.names[j], self.names[k])
        return None

    def structure_constants(self):
        return {k: dict(v) for k, v in self._br.items() if k[0] < k[1]}

    def to_json(self):
        out = []
        for (i, j), vec in sorted(self.structure_constants().items()):
            out.append({"i": self.names[i], "j": self.names[j],
                        "value": [[self.names[k], frac_str(c)] for k, c in sorted(vec.items())]})
        return {"basis": list(self.names), "brackets": out}

    @classmethod
    def from_json(cls, doc, check=True):
        if "basis" not in doc:
            raise ArgumentError("Lie algebra: missing field 'basis'")
        names = [str(x) for x in doc["basis"]]
        br = {}
        for pos, ent in enumerate(doc.get("brackets", [])):
            try:
                i, j = ent["i"], ent["j"]
                val = {str(k): frac(c) for k, c in ent["value"]}
            except (KeyError, TypeError, ValueError) as exc:
                raise ArgumentError(f"Lie algebra: bad bracket entry #{pos}: {exc}") from exc
            if i not in names or j not in names or any(k not in names for k in val):
                raise ArgumentError(f"Lie algebra: bracket entry #{pos} names an unknown element")
            key = (names.index(i), names.index(j))
            vec = {names.index(k): c for k, c in val.items()}
            if key in br and br[key] != vec:
                raise ArgumentError(f"Lie algebra: duplicate entry for [{i},{j}]")
            br[key] = vec
        return cls(names, br, check=check)

    @classmethod
    def from_matrices(cls, names, mats):
        """Structure constants of the span of the given square matrices (lists
        of rows), which must be linearly independent and closed under the
        commutator."""
        from .linalg import solve
        flat = [{(r, c): frac(x) for r, row in enumerate(m) for c, x in enumerate(row) if frac(x)}
                for m in mats]

        def mm(a, b):
            n = len(a)
            return [[sum(frac(a[r][t]) * frac(b[t][c]) for t in range(n)) for c in range(n)]
                    for r in range(n)]

        br = {}
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                ab, ba = mm(mats[i], mats[j]), mm(mats[j], mats[i])
                com = {(r, c): ab[r][c] - ba[r][c] for r in range(len(ab))
                       for c in range(len(ab)) if ab[r][c] != ba[r][c]}
                x, _ = solve(flat, com)
                if x is None:
                    raise StructuralError(f"matrices not closed under [{names[i]},{names[j]}]")
                if x:
                    br[(i, j)] = x
        return cls(names, br)


def sl_matrices(n):
    """Chevalley basis of sl_n: h1..h_{n-1}, then e_ij, f_ij for i<j."""
    names, mats = [], []

    def unit(r, c):
        m = [[0] * n for _ in range(n)]
        m[r][c] = 1
        return m

    for i in range(n - 1):
        m = [[0] * n for _ in range(n)]
        m[i][i] = 1
        m[i + 1][i + 1] = -1
        names.append(f"h{i + 1}")
        mats.append(m)
    pos = [(i, j) for d in range(1, n) for i in range(n - d) for j in [i + d]]
    for tag, (i, j) in enumerate(pos, start=1):
        names.append(f"e{tag}" if n > 2 else "e")
        mats.append(unit(i, j))
    for tag, (i, j) in enumerate(pos, start=1):
        names.append(f"f{tag}" if n > 2 else "f")
        mats.append(unit(j, i))
    if n == 2:
        names[0] = "h"
    return names, mats, pos


def sl_algebra(n):
    names, mats, _ = sl_matrices(n)
    return LieAlgebra.from_matrices(names, mats)


def positive_roots(n):
    """For sl_n with the Chevalley basis above: (x_alpha, x_-alpha, h_alpha)
    with h_alpha given in the h-basis coordinates."""
    names, mats, pos = sl_matrices(n)
    out = []
    for tag, (i, j) in enumerate(pos):
        e = names[n - 1 + tag]
        f = names[n - 1 + len(pos) + tag]
        # h_alpha = E_ii - E_jj = h_{i+1} + ... + h_j
        coords = {names[t]: ONE for t in range(i, j)}
        out.append((e, f, coords))
    return out


class LiePair:
    """Lie algebra g with subalgebra h (given by basis names) and a splitting
    j(b) = b + phi(b) of g -> g/h, where B is spanned by the remaining basis
    elements and phi: B -> h."""

    def __init__(self, g, sub, phi=None):
        self.g = g
        sub = [str(s) for s in sub]
        for s in sub:
            if s not in g.names:
                raise ArgumentError(f"subalgebra element {s!r} is not in the basis")
        if len(set(sub)) != len(sub):
            raise ArgumentError("repeated subalgebra element")
        self.h = [i for i, n in enumerate(g.names) if n in sub]
        self.B = [i for i, n in enumerate(g.names) if n not in sub]
        hs = set(self.h)
        for x in range(len(self.h)):
            for y in range(x + 1, len(self.h)):
                a1, a2 = self.h[x], self.h[y]
                v = g.br(a1, a2)
                if any(t not in hs for t in v):
                    raise StructuralError(
                        f"subalgebra not closed: [{g.names[a1]},{g.names[a2]}] = "
                        + _fmt_vec(g, v),
                        witness=(g.names[a1], g.names[a2], _fmt_vec(g, v)))
        self.phi = {}
        for b, vec in (phi or {}).items():
            bi = g.space.index(b) if not isinstance(b, int) else b
            if bi not in self.B:
                raise ArgumentError(f"splitting_phi key {g.names[bi]!r} is not a complement element")
            val = {}
            for a, c in vec.items():
                ai = g.space.index(a) if not isinstance(a, int) else a
                if ai not in hs:
                    raise ArgumentError(f"splitting_phi value {g.names[ai]!r} is not in h")
                if frac(c):
                    val[ai] = frac(c)
            if val:
                self.phi[bi] = val

    def with_phi(self, phi):
        return LiePair(self.g, [self.g.names[i] for i in self.h], phi)

    def shifted_by(self, dphi):
        """Pair with splitting j + dphi."""
        new = {self.g.names[b]: {self.g.names[a]: c for a, c in v.items()}
               for b, v in self.phi.items()}
        for b, vec in dphi.items():
            cur = new.setdefault(b, {})
            for a, c in vec.items():
                cur[a] = cur.get(a, 0) + frac(c)
        return self.with_phi(new)

    # splitting maps on g-coordinates
    def j(self, b):
        v = {b: ONE}
        vadd(v, self.phi.get(b, {}))
        return v

    def pr_B(self, x):
        return {b: x[b] for b in self.B if x.get(b)}

    def pr_h(self, x):
        out = {a: x[a] for a in self.h if x.get(a)}
        for b in self.B:
            c = x.get(b)
            if c:
                vadd(out, self.phi.get(b, {}), -c)
        return out

    def bott(self, a, b):
        return self.pr_B(self.g.bracket({a: ONE}, self.j(b)))

    def delta(self, u, a):
        """B-connection on h: pr_h [j u, a]."""
        return self.pr_h(self.g.bracket(self.j(u), {a: ONE}))

    def bracket_B(self, u, v):
        return self.pr_B(self.g.bracket(self.j(u), self.j(v)))

    def beta(self, u, v):
        return self.pr_h(self.g.bracket(self.j(u), self.j(v)))

    def to_json(self):
        doc = self.g.to_json()
        doc["subalgebra"] = [self.g.names[i] for i in self.h]
        if self.phi:
            doc["splitting_phi"] = {self.g.names[b]: [[self.g.names[a], frac_str(c)]
                                                      for a, c in sorted(v.items())]
                                    for b, v in sorted(self.phi.items())}
        return doc

    @classmethod
    def from_json(cls, doc):
        g = LieAlgebra.from_json(doc)
        if "subalgebra" not in doc:
            raise ArgumentError("Lie pair: missing field 'subalgebra'")
        phi = None
        if doc.get("splitting_phi"):
            phi = {b: {a: frac(c) for a, c in vals}
                   for b, vals in doc["splitting_phi"].items()}
        return cls(g, doc["subalgebra"], phi)


def _fmt_vec(g, v):
    if not v:
        return "0"
    return " + ".join(f"{frac_str(c)}*{g.names[k]}" for k, c in sorted(v.items()))


class CEAlgebra(DerivedPoissonStructure):
    """The derived Poisson algebra of a Lie pair, with generator bookkeeping."""

    def __init__(self, pair, algebra, linf, xi, bgen, convention):
        super().__init__(algebra, linf)
        self.pair = pair
        self.xi = xi            # h index -> generator index
        self.bgen = bgen        # B index -> generator index
        self.convention = convention

    def xi_name(self, a):
        return self.algebra.gens.names[self.xi[a]]

    def b_name(self, b):
        return self.algebra.gens.names[self.bgen[b]]

    def generator_words(self, n):
        from itertools import combinations_with_replacement
        gens = range(len(self.algebra.gens))
        return [tuple((i,) for i in w) for w in combinations_with_replacement(gens, n)
                if len(set(w)) == len(w)]


def ce_generators(pair, convention=LIE_PAIR):
    g = pair.g
    bdeg = -1 if convention == LIE_PAIR else 1
    els, xi, bgen = [], {}, {}
    for a in pair.h:
        xi[a] = len(els)
        els.append((g.names[a] + "*", 1))
    for b in pair.B:
        bgen[b] = len(els)
        els.append((g.names[b], bdeg))
    return GradedSpace(els), xi, bgen


def lie_pair_tables(pair, xi, bgen):
    """Generator values of q_1, q_2, q_3 (symmetric convention, k = +1)."""
    g = pair.g
    q1, q2, q3 = {}, {}, {}
    # q_1 on xi: Chevalley-Eilenberg differential of h
    for c in pair.h:
        v = {}
        for x in range(len(pair.h)):
            for y in range(x + 1, len(pair.h)):
                a1, a2 = pair.h[x], pair.h[y]
                coef = g.br(a1, a2).get(c)
                if coef:
                    v[(xi[a1], xi[a2])] = v.get((xi[a1], xi[a2]), 0) - coef
        q1[(xi[c],)] = {m: c_ for m, c_ in v.items() if c_}
    # q_1 on b: sum_a xi_a (x) bott(a, b)
    for b in pair.B:
        v = {}
        for a in pair.h:
            for b2, c in pair.bott(a, b).items():
                vadd(v, {(xi[a], bgen[b2]): c})
        q1[(bgen[b],)] = v
    for x, u in enumerate(pair.B):
        for v_ in pair.B[x + 1:]:
            val = {(bgen[t],): c for t, c in pair.bracket_B(u, v_).items()}
            if val:
                q2[(bgen[u], bgen[v_])] = val
            beta = pair.beta(u, v_)
            for c in pair.h:
                if beta.get(c):
                    q3[(bgen[u], bgen[v_], xi[c])] = {(): beta[c]}
        for c in pair.h:
            # pr_{h^*}(L_u xi_c) = -sum_a <xi_c, Delta_u a> xi_a
            val = {}
            for a in pair.h:
                coef = pair.delta(u, a).get(c)
                if coef:
                    val[(xi[a],)] = -coef
            if val:
                q2[(bgen[u], xi[c])] = val
    return {1: q1, 2: q2, 3: q3}


def build_lie_pair_algebra(pair, convention=LIE_PAIR, arity_cap=5, memo=True):
    if convention not in (LIE_PAIR, DIRAC):
        raise ArgumentError(f"unknown degree convention {convention!r}")
    gens, xi, bgen = ce_generators(pair, convention)
    alg = FreeGCA(gens)
    tables = lie_pair_tables(pair, xi, bgen)
    k = 1 if convention == LIE_PAIR else -1
    d = leibniz_structure(alg, k, tables, arity_cap=arity_cap, memo=memo)
    return CEAlgebra(pair, alg, d.linf, xi, bgen, convention)


# -- matched pairs ---------------------------------------------------------

def _act(table, x, y):
    """Bilinear action from a table {(i, j): {k: c}} on vectors."""
    acc = {}
    for i, a in x.items():
        for j, b in y.items():
            v = table.get((i, j))
            if v:
                vadd(acc, v, a * b)
    return acc


def matched_pair_report(a, b, nabla, Delta):
    """Violations of the matched-pair identities.  ``nabla[(X, Y)]`` is
    nabla_X Y in b, ``Delta[(Y, X)]`` is Delta_Y X in a (index keys)."""
    out = []
    A = range(a.dim)
    Bi = range(b.dim)
    e = lambda i: {i: ONE}

    def nab(x, y):
        return _act(nabla, x, y)

    def dl(y, x):
        return _act(Delta, y, x)

    for X in A:
        for Y1 in Bi:
            for Y2 in Bi:
                lhs = nab(e(X), b.bracket(e(Y1), e(Y2)))
                rhs = b.bracket(nab(e(X), e(Y1)), e(Y2))
                vadd(rhs, b.bracket(e(Y1), nab(e(X), e(Y2))))
                vadd(rhs, nab(dl(e(Y2), e(X)), e(Y1)))
                vadd(rhs, nab(dl(e(Y1), e(X)), e(Y2)), -ONE)
                d = vadd(lhs, rhs, -ONE)
                if d:
                    out.append({"check": "nabla-bracket",
                                "triple": [a.names[X], b.names[Y1], b.names[Y2]],
                                "defect": {b.names[k]: c for k, c in d.items()}})
    for Y in Bi:
        for X1 in A:
            for X2 in A:
                lhs = dl(e(Y), a.bracket(e(X1), e(X2)))
                rhs = a.bracket(dl(e(Y), e(X1)), e(X2))
                vadd(rhs, a.bracket(e(X1), dl(e(Y), e(X2))))
                vadd(rhs, dl(nab(e(X2), e(Y)), e(X1)))
                vadd(rhs, dl(nab(e(X1), e(Y)), e(X2)), -ONE)
                d = vadd(lhs, rhs, -ONE)
                if d:
                    out.append({"check": "Delta-bracket",
                                "triple": [b.names[Y], a.names[X1], a.names[X2]],
                                "defect": {a.names[k]: c for k, c in d.items()}})
    # both actions are representations
    for X1 in A:
        for X2 in A:
            for Y in Bi:
                lhs = nab(a.bracket(e(X1), e(X2)), e(Y))
                rhs = nab(e(X1), nab(e(X2), e(Y)))
                vadd(rhs, nab(e(X2), nab(e(X1), e(Y))), -ONE)
                d = vadd(lhs, rhs, -ONE)
                if d:
                    out.append({"check": "nabla-flat",
                                "triple": [a.names[X1], a.names[X2], b.names[Y]],
                                "defect": {b.names[k]: c for k, c in d.items()}})
    for Y1 in Bi:
        for Y2 in Bi:
            for X in A:
                lhs = dl(b.bracket(e(Y1), e(Y2)), e(X))
                rhs = dl(e(Y1), dl(e(Y2), e(X)))
                vadd(rhs, dl(e(Y2), dl(e(Y1), e(X))), -ONE)
                d = vadd(lhs, rhs, -ONE)
                if d:
                    out.append({"check": "Delta-flat",
                                "triple": [b.names[Y1], b.names[Y2], a.names[X]],
                                "defect": {a.names[k]: c for k, c in d.items()}})
    return out


def matched_sum(a, b, nabla, Delta):
    """The Lie algebra a (+) b with the matched-pair bracket."""
    na = a.dim
    names = list(a.names) + list(b.names)
    if len(set(names)) != len(names):
        raise ArgumentError("matched pair summands must use distinct names")
    br = {}
    for i in range(na):
        for j in range(i + 1, na):
            v = a.br(i, j)
            if v:
                br[(i, j)] = dict(v)
    for i in range(b.dim):
        for j in range(i + 1, b.dim):
            v = b.br(i, j)
            if v:
                br[(na + i, na + j)] = {na + k: c for k, c in v.items()}
    for X in range(na):
        for Y in range(b.dim):
            # [X, Y] = -Delta_Y X + nabla_X Y
            v = vscale(Delta.get((Y, X), {}), -1)
            vadd(v, {na + k: c for k, c in nabla.get((X, Y), {}).items()})
            if v:
                br[(X, na + Y)] = v
    return LieAlgebra(names, br, check=False)


def build_matched_pair(a, b, nabla, Delta, arity_cap=5, memo=True):
    """Derived Poisson algebra of the matched pair; q_3 vanishes."""
    nabla = _index_table(nabla, a, b)
    Delta = _index_table(Delta, b, a)
    rep = matched_pair_report(a, b, nabla, Delta)
    if rep:
        raise StructuralError(f"matched-pair compatibility fails ({rep[0]['check']} on "
                              f"{rep[0]['triple']})", witness=rep)
    L = matched_sum(a, b, nabla, Delta)
    bad = L.jacobi_violation()
    if bad is not None:
        raise StructuralError(f"matched sum fails Jacobi on {bad}", witness=bad)
    pair = LiePair(L, list(a.names))
    return build_lie_pair_algebra(pair, arity_cap=arity_cap, memo=memo)


def _index_table(t, left, right):
    out = {}
    for (x, y), vec in t.items():
        xi = x if isinstance(x, int) else left.space.index(x)
        yi = y if isinstance(y, int) else right.space.index(y)
        val = {}
        for k, c in vec.items():
            ki = k if isinstance(k, int) else right.space.index(k)
            if frac(c):
                val[ki] = frac(c)
        if val:
            out[(xi, yi)] = val
    return out


def matched_pair_from_pair(pair):
    """When the complement B is itself a subalgebra, the (h, B) actions."""
    g = pair.g
    hs, bs = pair.h, pair.B
    a = LieAlgebra([g.names[i] for i in hs],
                   {(x, y): {hs.index(k): c for k, c in g.br(hs[x], hs[y]).items()}
                    for x in range(len(hs)) for y in range(len(hs))
                    if x < y and g.br(hs[x], hs[y])})
    for x in range(len(bs)):
        for y in range(x + 1, len(bs)):
            if any(t not in bs for t in g.br(bs[x], bs[y])):
                raise StructuralError("complement is not a subalgebra")
    b = LieAlgebra([g.names[i] for i in bs],
                   {(x, y): {bs.index(k): c for k, c in g.br(bs[x], bs[y]).items()}
                    for x in range(len(bs)) for y in range(len(bs))
                    if x < y and g.br(bs[x], bs[y])})
    nabla, Delta = {}, {}
    for X in range(len(hs)):
        for Y in range(len(bs)):
            v = g.br(hs[X], bs[Y])
            nv = {bs.index(k): c for k, c in v.items() if k in bs}
            dv = {hs.index(k): -c for k, c in v.items() if k in hs}
            if nv:
                nabla[(X, Y)] = nv
            if dv:
                Delta[(Y, X)] = dv
    return a, b, nabla, Delta


def matched_pair_to_json(a, b, nabla, Delta):
    nab =[{"x": a.names[x], "y": b.names[y],
            "value": [[b.names[k], frac_str(c)] for k, c in sorted(v.items())]}
           for (x, y), v in sorted(nabla.items())]
    dl = [{"y": b.names[y], "x": a.names[x],
           "value": [[a.names[k], frac_str(c)] for k, c in sorted(v.items())]}
          for (y, x), v in sorted(Delta.items())]
    return {"kind": "matched-pair", "a": a.to_json(), "b": b.to_json(),
            "nabla": nab, "Delta": dl}


def matched_pair_from_json(doc):
    a = LieAlgebra.from_json(doc["a"])
    b = LieAlgebra.from_json(doc["b"])
    nabla = {(e["x"], e["y"]): {k: frac(c) for k, c in e["value"]} for e in doc.get("nabla", [])}
    Delta = {(e["y"], e["x"]): {k: frac(c) for k, c in e["value"]} for e in doc.get("Delta", [])}
    return a, b, _index_table(nabla, a, b), _index_table(Delta, b, a)


# -- change of splitting ---------------------------------------------------

# Sign of the generator value r_2(xi_a, b) = SPLIT_SIGN * <xi_a, phi(b)>.
SPLIT_SIGN = 1


def splitting_coderivation(ce, dphi, arity_cap=4):
    """Degree zero biderivation generated by pairing h^* against dphi: B -> h."""
    pair = ce.pair
    g = pair.g
    alg = ce.algebra
    r2 = MultiDerivation(alg, 2, (ce.k - 1), 1 - ce.k)
    for b, vec in dphi.items():
        bi = b if isinstance(b, int) else g.space.index(b)
        for a, c in vec.items():
            ai = a if isinstance(a, int) else g.space.index(a)
            if ai not in ce.xi or bi not in ce.bgen:
                raise ArgumentError("splitting change must map complement elements into h")
            c = frac(c)
            if c:
                cur = r2.on_generators((ce.xi[ai], ce.bgen[bi])).get((), 0)
                r2.set((ce.xi[ai], ce.bgen[bi]), {(): cur + SPLIT_SIGN * c})
    return Coderivation(alg, ce.k, {2: r2}, arity_cap=arity_cap, sdegree=0)


def splitting_isomorphism(pair, dphi, arity_cap=4, word_cap=4, check=True, threads=None):
    """exp of the splitting coderivation, from the structure of ``pair`` to the
    structure of the pair with splitting shifted by ``dphi``.  Returns
    (morphism, source, target)."""
    src = build_lie_pair_algebra(pair, arity_cap=max(arity_cap, 3))
    dst = build_lie_pair_algebra(pair.shifted_by(_named(pair.g, dphi)), arity_cap=max(arity_cap, 3))
    r = splitting_coderivation(src, dphi, arity_cap)
    f = exp_coderivation(r, arity_cap)
    if check:
        basis = [m for m in src.algebra.basis() if m]
        if not f.first_is_identity(basis):
            raise StructuralError("first Taylor coefficient is not the identity")
        rep = check_morphism(f, src, dst, arity_cap=arity_cap, word_cap=word_cap, threads=threads)
        if rep:
            raise StructuralError(f"splitting isomorphism fails: {rep[0]['check']} on "
                                  f"{rep[0]['word']}", witness=rep)
    return f, src, dst


def _named(g, dphi):
    out = {}
    for b, vec in dphi.items():
        bn = g.names[b] if isinstance(b, int) else b
        out[bn] = {(g.names[a] if isinstance(a, int) else a): frac(c) for a, c in vec.items()}
    return out


# -- cohomology ------------------------------------------------------------

def gerstenhaber_on_cohomology(ce):
    """Cohomology with product and bracket tables; raises StructuralError on a
    failed axiom."""
    H = cohomology_with_bracket(ce)
    if H.issues:
        raise StructuralError(f"cohomology operations not well defined: {H.issues[0]}",
                              witness=H.issues)
    bad = poisson_axioms_on_cohomology(H, ce.k)
    if bad:
        raise StructuralError(f"Gerstenhaber axiom {bad[0]['check']} fails on basis "
                              f"{bad[0]['basis']}", witness=bad)
    return H


# -- shipped examples ------------------------------------------------------

def sl2_pair():
    return LiePair(sl_algebra(2), ["h"])


def sl3_pair():
    return LiePair(sl_algebra(3), ["h1", "h2"])


def abelian_pair(n=2, m=1):
    names = [f"x{i + 1}" for i in range(n)]
    return LiePair(LieAlgebra(names, {}), names[:m])


def sl2_matched():
    """sl2 = b (+) Qf with b = span{h, e}."""
    g = sl_algebra(2)
    pair = LiePair(g, ["h", "e"])
    return matched_pair_from_pair(pair)
