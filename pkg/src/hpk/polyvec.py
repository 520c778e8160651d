"""Shifted polyvector fields on a free graded-commutative algebra, their
Schouten bracket, Maurer-Cartan elements, the Lie-Poisson extension of
L-infinity algebroid data and the correspondence with homological vector
fields.

An n-shifted m-polyvector field is stored as an m-ary MultiDerivation whose
inputs are read with degree |f| - (n + 1).  Its body is the iterated derived
bracket with functions: Pi(f_1, .., f_m) = [..[[Pi, f_1], f_2] .., f_m].
"""

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import factorial

from .algebra import FreeGCA, MultiDerivation, apply_linear, commutator, derivation
from .errors import ArgumentError, PreconditionError
from .graded import (ONE, GradedSpace, decalage_exponent, frac, frac_str,
                     sort_with_sign, vadd, vadd_term, vscale)
from .linf import (canonical, jacobi_defect,
                   leibniz_structure, spanning_words, table_structure, unshuffle_sign)

DEFAULT_WEIGHT_CAP = 6


def _odd(x):
    return x % 2 != 0


def gen_tuples(alg, r, shift):
    """Sorted generator tuples of length r not vanishing by symmetry."""
    out = []
    for t in combinations_with_replacement(range(len(alg.gens)), r):
        if any(t[i] == t[i + 1] and _odd(alg.gens.degrees[t[i]] - shift)
               for i in range(len(t) - 1)):
            continue
        out.append(t)
    return out


def _homogeneous_degree(alg, vec):
    degs = {alg.degree(m) for m in vec}
    if len(degs) > 1:
        raise ArgumentError("polyvector functions must be homogeneous")
    return degs.pop() if degs else None


class PolyField:
    """Homogeneous n-shifted polyvector field of weight m and pure degree
    ``degree``; ``body`` is a MultiDerivation (m >= 1) or an element (m = 0)."""

    def __init__(self, alg, n, m, degree, body):
        self.alg = alg
        self.n = n
        self.m = m
        self.degree = degree
        self.body = body

    @classmethod
    def function(cls, alg, n, vec, degree=None):
        vec = {k: frac(c) for k, c in vec.items() if frac(c)}
        d = _homogeneous_degree(alg, vec)
        if d is None:
            d = 0 if degree is None else degree
        elif degree is not None and degree != d:
            raise ArgumentError("function degree mismatch")
        return cls(alg, n, 0, d, vec)

    @classmethod
    def from_table(cls, alg, n, m, degree, table):
        """Field from values on generator tuples (indices or names)."""
        if m == 0:
            raise ArgumentError("use PolyField.function for weight 0")
        body = MultiDerivation(alg, m, degree, n + 1)
        for gens, vec in table.items():
            idx = tuple(g if isinstance(g, int) else alg.gens.index(g) for g in gens)
            body.set(idx, vec)
        return cls(alg, n, m, degree, body)

    @classmethod
    def zero(cls, alg, n, m, degree=0):
        if m == 0:
            return cls(alg, n, 0, degree, {})
        return cls(alg, n, m, degree, MultiDerivation(alg, m, degree, n + 1))

    @property
    def total(self):
        """Total degree |Pi| - m (n + 1)."""
        return self.degree - self.m * (self.n + 1)

    def is_zero(self):
        return not self.body if self.m == 0 else self.body.is_zero()

    def __call__(self, *words):
        if self.m == 0:
            if words:
                raise ArgumentError("a function takes no arguments")
            return dict(self.body)
        return self.body(*words)

    def apply(self, *vectors):
        if self.m == 0:
            return dict(self.body)
        return self.body.apply(*vectors)

    def table(self):
        return self.body if self.m == 0 else self.body.table

    def __eq__(self, other):
        if not isinstance(other, PolyField):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.n == other.n and self.m == other.m and self.degree == other.degree
                and self.table() == other.table())

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (self.n, self.m, self.degree) != (other.n, other.m, other.degree):
            raise ArgumentError("sum of polyvector fields of different type")
        if self.m == 0:
            return PolyField.function(self.alg, self.n, vadd(dict(self.body), other.body),
                                      self.degree)
        out = self.body.copy()
        for k, v in other.body.table.items():
            out.set(k, vadd(dict(out.table.get(k, {})), v), check_degree=False)
        return PolyField(self.alg, self.n, self.m, self.degree, out)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        c = frac(c)
        if self.m == 0:
            return PolyField.function(self.alg, self.n, vscale(self.body, c), self.degree)
        out = MultiDerivation(self.alg, self.m, self.degree, self.n + 1)
        for k, v in self.body.table.items():
            out.set(k, vscale(v, c), check_degree=False)
        return PolyField(self.alg, self.n, self.m, self.degree, out)

    def describe(self):
        alg = self.alg
        if self.m == 0:
            return {"weight": 0, "value": _named(alg, self.body)}
        return {"weight": self.m, "degree": self.degree,
                "table": [{"inputs": [alg.gens.names[i] for i in k], "value": _named(alg, v)}
                          for k, v in sorted(self.body.table.items())]}


def _named(alg, vec):
    return [[alg.name(m), frac_str(c)] for m, c in sorted(vec.items(), key=lambda t: alg.sort_key(t[0]))]


def _same_shift(p, q):
    if p.n != q.n:
        raise ArgumentError(f"shift mismatch: {p.n} vs {q.n}")
    if p.alg is not q.alg:
        raise ArgumentError("polyvector fields on different algebras")


def circle(P, L, words):
    """(P o L)(words): insert L into the first slot of P over all unshuffles."""
    _same_shift(P, L)
    if P.m == 0:
        return {}
    alg = P.alg
    r = len(words)
    if r != P.m + L.m - 1:
        raise ArgumentError("wrong number of arguments for a composition")
    rest_vecs = [{w: ONE} for w in words]
    if L.m == 0:
        return P.apply(L.body, *rest_vecs) if L.body else {}
    par = [alg.degree(w) - (P.n + 1) for w in words]
    acc = {}
    for S in combinations(range(r), L.m):
        inner = L(*(words[i] for i in S))
        if not inner:
            continue
        rest = [rest_vecs[i] for i in range(r) if i not in S]
        out = P.apply(inner, *rest)
        if out:
            vadd(acc, out, Fraction(unshuffle_sign(par, S)))
    return acc


def _bracket_words(P, L, words):
    k = P.n + 1
    s = -1 if _odd((P.total + k) * (L.total + k)) else 1
    v = circle(P, L, words)
    w = circle(L, P, words)
    if w:
        vadd(v, w, Fraction(-s))
    return v


def schouten_bracket(P, L):
    """[P, L] = P o L - (-1)^{(||P|| + n + 1)(||L|| + n + 1)} L o P."""
    _same_shift(P, L)
    alg = P.alg
    r = P.m + L.m - 1
    deg = P.degree + L.degree
    if r < 0:
        return PolyField.zero(alg, P.n, 0, deg)
    if r == 0:
        return PolyField.function(alg, P.n, _bracket_words(P, L, []), deg)
    body = MultiDerivation(alg, r, deg, P.n + 1)
    for t in gen_tuples(alg, r, P.n + 1):
        v = _bracket_words(P, L, [(i,) for i in t])
        if v:
            body.set(t, v)
    return PolyField(alg, P.n, r, deg, body)


def bracket_leibniz_defect(P, L, words):
    """Direct commutator on arbitrary monomials minus the stored bracket's
    Leibniz extension; empty when the bracket is a multiderivation there."""
    B = schouten_bracket(P, L)
    d = _bracket_words(P, L, list(words))
    vadd(d, B(*words) if B.m else B.body, -ONE)
    return d


def odot(P, L):
    """Graded commutative product of polyvector fields."""
    _same_shift(P, L)
    alg = P.alg
    k = P.n + 1
    deg = P.degree + L.degree
    r = P.m + L.m
    if r == 0:
        return PolyField.function(alg, P.n, alg.mul(P.body, L.body), deg)
    body = MultiDerivation(alg, r, deg, k)
    for t in gen_tuples(alg, r, k):
        words = [(i,) for i in t]
        par = [alg.degree(w) - k for w in words]
        acc = {}
        for S in combinations(range(r), P.m):
            T = [i for i in range(r) if i not in S]
            a = P(*(words[i] for i in S))
            if not a:
                continue
            b = L(*(words[i] for i in T))
            if not b:
                continue
            e = sum(par[i] for i in S) * L.total
            sg = unshuffle_sign(par, S) * (-1 if _odd(e) else 1)
            vadd(acc, alg.mul(a, b), Fraction(sg))
        if acc:
            body.set(t, acc)
    return PolyField(alg, P.n, r, deg, body)


def poisson_axiom_defects(a, b, c):
    """Nonzero defects among shifted antisymmetry, Jacobi and the biderivation
    law for [,] of degree n + 1 on polyvector fields, as {name: PolyField}."""
    k = a.n + 1
    sg = lambda e: -1 if _odd(e) else 1
    out = {}
    d = schouten_bracket(a, b) + schouten_bracket(b, a).scaled(sg((a.total + k) * (b.total + k)))
    if not d.is_zero():
        out["antisymmetry"] = d
    lhs = schouten_bracket(a, schouten_bracket(b, c))
    rhs = schouten_bracket(schouten_bracket(a, b), c) + \
        schouten_bracket(b, schouten_bracket(a, c)).scaled(sg((a.total + k) * (b.total + k)))
    d = _diff(lhs, rhs)
    if not d.is_zero():
        out["jacobi"] = d
    lhs = schouten_bracket(a, odot(b, c))
    rhs = odot(schouten_bracket(a, b), c) + \
        odot(b, schouten_bracket(a, c)).scaled(sg((a.total + k) * b.total))
    d = _diff(lhs, rhs)
    if not d.is_zero():
        out["biderivation"] = d
    return out


def _diff(x, y):
    if x.is_zero():
        return y.scaled(-1)
    if y.is_zero():
        return x
    return x - y


def random_field(alg, n, m, degree, rng, density=0.5, coeffs=(-2, -1, 1, 2), max_len=2):
    """Random field with values on generator tuples drawn among monomials of
    length <= max_len of the right degree."""
    monos = [mo for mo in alg.basis(max_len=max_len)]
    if m == 0:
        cands = [mo for mo in monos if alg.degree(mo) == degree]
        vec = {mo: Fraction(rng.choice(coeffs)) for mo in cands if rng.random() < density}
        return PolyField.function(alg, n, vec, degree)
    body = MultiDerivation(alg, m, degree, n + 1)
    for t in gen_tuples(alg, m, n + 1):
        want = sum(alg.gens.degrees[i] for i in t) + degree
        vec = {mo: Fraction(rng.choice(coeffs)) for mo in monos
               if alg.degree(mo) == want and rng.random() < density}
        if vec:
            body.set(t, vec)
    return PolyField(alg, n, m, degree, body)


# -- Maurer-Cartan ---------------------------------------------------------

class MCElement:
    """Q (weight one field or None) and pi = {l: field}, all (k-2)-shifted."""

    def __init__(self, alg, k, Q=None, pi=None):
        self.alg = alg
        self.k = k
        self.n = k - 2
        self.Q = Q
        self.pi = dict(pi or {})
        for l, f in self.pi.items():
            if f.m != l or f.n != self.n:
                raise ArgumentError(f"pi_{l} must be a weight {l}, {self.n}-shifted field")
            if not f.is_zero() and f.total != 2 - k:
                raise ArgumentError(f"pi_{l} has total degree {f.total}, expected {2 - k}")
        if Q is not None and (Q.m != 1 or Q.n != self.n):
            raise ArgumentError("Q must be a weight one field with the same shift")

    def components(self):
        out = dict(self.pi)
        if self.Q is not None:
            out[1] = self.Q
        return out


def mc_from_structure(d, arity_cap=None):
    """Polyvector form of a derived Poisson structure: pi_l = q_l."""
    alg = d.algebra
    lin = d.linf
    k = lin.k
    top = lin.arity_cap if arity_cap is None else arity_cap
    comps = {}
    for l in range(1, top + 1):
        if not lin.has(l):
            continue
        deg = 1 + (l - 1) * (k - 1)
        body = MultiDerivation(alg, l, deg, k - 1)
        for t in gen_tuples(alg, l, k - 1):
            v = lin.q(l, tuple((i,) for i in t))
            if v:
                body.set(t, v)
        comps[l] = PolyField(alg, k - 2, l, deg, body)
    Q = comps.pop(1, None)
    return MCElement(alg, k, Q, comps)


def structure_from_mc(mc, arity_cap=None):
    k = mc.k
    tabs = {}
    for l, f in mc.components().items():
        tabs[l] = dict(f.body.table)
    cap = arity_cap or max(tabs, default=1)
    return leibniz_structure(mc.alg, k, tabs, cap)


def mc_defect(mc, max_weight=None):
    """Weight components p >= 2 of [Q, pi] + 1/2 [pi, pi], as {p: field};
    only nonzero components are returned."""
    Q = mc.Q
    if Q is not None:
        sq = schouten_bracket(Q, Q)
        if not sq.is_zero():
            raise PreconditionError("Q does not square to zero")
    pis = mc.pi
    top = max_weight if max_weight is not None else max(list(pis) + [1]) * 2 - 1
    out = {}
    half = Fraction(1, 2)
    for p in range(2, top + 1):
        acc = PolyField.zero(mc.alg, mc.n, p, 0)
        if Q is not None and p in pis:
            acc = acc + schouten_bracket(Q, pis[p])
        for a in range(2, p):
            b = p + 1 - a
            if a in pis and b in pis:
                acc = acc + schouten_bracket(pis[a], pis[b]).scaled(half)
        if not acc.is_zero():
            out[p] = acc
    return out


# -- L-infinity algebroids -------------------------------------------------

class AlgebroidData:
    """L-infinity algebroid over a free base: ``base`` and ``fiber`` are
    GradedSpaces (base coordinates, frame of L).  ``brackets[l]`` maps a tuple
    of fiber indices to a section {(base monomial, fiber index): c};
    ``anchors[l]`` maps a tuple of l fiber indices to {base index: base element}
    (the vector field rho_l(s..) on coordinates).  lambda_l and rho_l are
    graded antisymmetric in the fiber degrees."""

    def __init__(self, base, fiber, brackets=None, anchors=None, weight_cap=None):
        self.base = base
        self.fiber = fiber
        self.functions = FreeGCA(base, weight_cap=weight_cap)
        self.brackets = {}
        self.anchors = {}
        for l, tab in (brackets or {}).items():
            for key, sec in tab.items():
                self._put(self.brackets, l, key, sec)
        for l, tab in (anchors or {}).items():
            for key, vf in tab.items():
                self._put(self.anchors, l, key, vf)

    def _sort(self, key):
        # lambda_l is antisymmetric: swapping s, t costs -(-1)^{|s||t|}
        return sort_with_sign(tuple(key), lambda i: i, lambda i: self.fiber.degrees[i] + 1)

    def _put(self, store, l, key, val):
        key = tuple(key)
        if len(key) != l:
            raise ArgumentError(f"arity {l} entry keyed by {len(key)} frame elements")
        out, sign, rep = self._sort(key)
        val = {k: frac(c) for k, c in val.items() if frac(c)} if store is self.brackets else \
            {g: {m: frac(c) for m, c in v.items() if frac(c)} for g, v in val.items()}
        if store is self.anchors:
            val = {g: v for g, v in val.items() if v}
        if rep:
            if val:
                raise ArgumentError(f"nonzero value on a vanishing frame word {key}")
            return
        if not val:
            return
        if sign < 0:
            val = vscale(val, -1) if store is self.brackets else {g: vscale(v, -1) for g, v in val.items()}
        store.setdefault(l, {})[tuple(out)] = val

    def bracket(self, l, key):
        out, sign, rep = self._sort(key)
        if rep:
            return {}
        v = self.brackets.get(l, {}).get(tuple(out), {})
        return vscale(v, sign) if sign < 0 else v

    def anchor(self, l, key):
        out, sign, rep = self._sort(key)
        if rep:
            return {}
        v = self.anchors.get(l, {}).get(tuple(out), {})
        return {g: vscale(x, sign) for g, x in v.items()} if sign < 0 else v

    def tables(self):
        """Canonical tables for bitwise comparison."""
        return ({l: dict(t) for l, t in self.brackets.items() if t},
                {l: dict(t) for l, t in self.anchors.items() if t})

    def max_arity(self):
        return max(list(self.brackets) + [l + 1 for l in self.anchors] + [1])

    def to_json(self):
        base, fib, F = self.base, self.fiber, self.functions
        sec = lambda v: [[F.name(m), fib.names[s], frac_str(c)] for (m, s), c in sorted(v.items())]
        return {"base": base.to_json(), "fiber": fib.to_json(),
                "brackets": [{"arity": l, "inputs": [fib.names[i] for i in key], "value": sec(v)}
                             for l, t in sorted(self.brackets.items()) for key, v in sorted(t.items())],
                "anchors": [{"arity": l, "inputs": [fib.names[i] for i in key],
                             "value": {base.names[g]: [[F.name(m), frac_str(c)] for m, c in sorted(x.items())]
                                       for g, x in sorted(v.items())}}
                            for l, t in sorted(self.anchors.items()) for key, v in sorted(t.items())]}

    @classmethod
    def from_json(cls, doc):
        try:
            base = GradedSpace.from_json(doc.get("base", {"elements": []}))
            fib = GradedSpace.from_json(doc["fiber"])
        except KeyError as exc:
            raise ArgumentError(f"algebroid data: missing {exc}") from exc
        F = FreeGCA(base)
        brackets, anchors = {}, {}
        for pos, e in enumerate(doc.get("brackets", [])):
            try:
                key = tuple(fib.index(x) for x in e["inputs"])
                val = {}
                for mono, s, c in e["value"]:
                    c0, m = F.parse_monomial(mono)
                    if c0:
                        vadd_term(val, (m, fib.index(s)), c0 * frac(c))
                brackets.setdefault(len(key), {})[key] = val
            except (KeyError, TypeError, ValueError) as exc:
                raise ArgumentError(f"algebroid bracket entry #{pos}: {exc}") from exc
        for pos, e in enumerate(doc.get("anchors", [])):
            try:
                key = tuple(fib.index(x) for x in e["inputs"])
                val = {}
                for gname, v in e["value"].items():
                    vec = {}
                    for mono, c in v:
                        c0, m = F.parse_monomial(mono)
                        if c0:
                            vadd_term(vec, m, c0 * frac(c))
                    val[base.index(gname)] = vec
                anchors.setdefault(len(key), {})[key] = val
            except (KeyError, TypeError, ValueError, AttributeError) as exc:
                raise ArgumentError(f"algebroid anchor entry #{pos}: {exc}") from exc
        return cls(base, fib, brackets, anchors)


def algebroid_from_linf(s):
    """An L-infinity algebra (LInfStructure with k = 0 on a GradedSpace) as an
    algebroid over a point."""
    if not isinstance(s.space, GradedSpace) or s.k != 0:
        raise ArgumentError("expected an L-infinity structure with k = 0 on a graded space")
    from .linf import lambda_bracket
    V = s.space
    br = {}
    for l in range(1, s.arity_cap + 1):
        if not s.has(l):
            continue
        for w in combinations_with_replacement(range(len(V)), l):
            v = lambda_bracket(s, l, w)
            if v:
                br.setdefault(l, {})[w] = {((), i): c for i, c in v.items()}
    data = AlgebroidData(GradedSpace([]), V, {})
    for l, t in br.items():
        for key, v in t.items():
            out, sign, rep = data._sort(key)
            if not rep and tuple(out) == key:
                data._put(data.brackets, l, key, v)
    return data


def linf_of_algebroid(data, arity_cap=4):
    """Inverse of algebroid_from_linf for data over a point."""
    V = data.fiber
    tabs = {}
    for l, t in data.brackets.items():
        for key, sec in t.items():
            lam = {i: c for (m, i), c in sec.items()}
            e = decalage_exponent([V.degrees[i] for i in key], 0)
            tabs.setdefault(l, {})[key] = vscale(lam, -1) if _odd(e) else lam
    return table_structure(V, 0, tabs, arity_cap)


def lie_poisson_extend(data, k, arity_cap=None, weight_cap=None):
    """Degree-k derived Poisson structure on functions of the base tensor
    S(L[k]): on generators lambda_l(s..) = brackets, lambda_l(s.., f) =
    rho_{l-1}(s..) f, and lambda_l vanishes on two functions."""
    base, fib = data.base, data.fiber
    els = [(base.names[i], base.degrees[i]) for i in range(len(base))]
    els += [(fib.names[i], fib.degrees[i] - k) for i in range(len(fib))]
    wts = [0] * len(base) + [1] * len(fib)
    alg = FreeGCA(GradedSpace(els, weights=wts), weight_cap=weight_cap)
    nb = len(base)
    sgen = lambda i: nb + i

    def section(sec):
        out = {}
        for (m, i), c in sec.items():
            vadd(out, alg.mul({m: ONE}, {(sgen(i),): ONE}), c)
        return out

    tabs = {}

    def put(l, word, lam):
        e = decalage_exponent([alg.gens.degrees[g] for g in word], k)
        val = vscale(lam, -1) if _odd(e) else lam
        for m in val:
            w_out = sum(1 for g in m if g >= nb)
            w_in = sum(1 for g in word if g >= nb)
            if w_out - w_in != 1 - l:
                raise ArgumentError(f"bracket of arity {l} does not have weight {1 - l}")
        out, sign, rep = sort_with_sign(word, lambda i: i, lambda i: alg.gens.degrees[i] - (1 - k))
        if rep:
            return
        tab = tabs.setdefault(l, {})
        tab[tuple(out)] = vadd(tab.get(tuple(out), {}), val, Fraction(sign))

    for l, t in data.brackets.items():
        for key, sec in t.items():
            put(l, tuple(sgen(i) for i in key), section(sec))
    for l, t in data.anchors.items():
        for key, vf in t.items():
            for g, val in vf.items():
                put(l + 1, tuple(sgen(i) for i in key) + (g,), dict(val))
    cap = arity_cap or max(list(tabs) + [1])
    return leibniz_structure(alg, k, tabs, cap)


# -- homological vector fields ---------------------------------------------

class HomologicalField:
    """Functions on L[1] (base coordinates, then one coordinate of degree
    1 - |s| per frame element) with the vector field Q."""

    def __init__(self, data, alg, Q):
        self.data = data
        self.alg = alg
        self.Q = Q
        self.nb = len(data.base)

    def xi(self, i):
        return self.nb + i

    def square(self):
        Q = self.Q
        out = {}
        for g in range(len(self.alg.gens)):
            v = apply_linear(lambda m: Q(m), Q((g,)))
            if v:
                out[g] = v
        return out


def _l1_algebra(data, weight_cap=None):
    base, fib = data.base, data.fiber
    els = [(base.names[i], base.degrees[i]) for i in range(len(base))]
    els += [(fib.names[i] + "^", 1 - fib.degrees[i]) for i in range(len(fib))]
    wts = [0] * len(base) + [1] * len(fib)
    return FreeGCA(GradedSpace(els, weights=wts), weight_cap=weight_cap)


def linf_to_homological_field(data, weight_cap=None):
    """Q = sum_l D_l assembled from anchors and brackets."""
    alg = _l1_algebra(data, weight_cap)
    nb = len(data.base)
    fib = data.fiber
    r = len(fib)
    deg = fib.degrees
    table = {}
    top = data.max_arity()

    def xs(idx):
        # xi^{i_l} ... xi^{i_1} for idx = (i_1, .., i_l)
        return alg.monomial([nb + i for i in reversed(idx)])

    for l in range(0, top + 1):
        if l in data.anchors or (l == 0 and 0 in data.anchors):
            cf = Fraction(1, factorial(l))
            for idx in product(range(r), repeat=l):
                vf = data.anchor(l, idx)
                if not vf:
                    continue
                e = sum((l - 1 - t) * deg[idx[t]] for t in range(l))
                c = cf * (-1 if _odd(e) else 1)
                pre = xs(idx)
                if not pre:
                    continue
                for j, val in vf.items():
                    vadd(table.setdefault(j, {}), alg.mul(pre, val), c)
        if (l + 1) in data.brackets:
            cf = Fraction(1, factorial(l + 1))
            for idx in product(range(r), repeat=l + 1):
                sec = data.bracket(l + 1, idx)
                if not sec:
                    continue
                e = sum((l + 1 - t) * deg[idx[t]] for t in range(l + 1))
                c = cf * (-1 if _odd(e) else 1)
                pre = xs(idx)
                if not pre:
                    continue
                for (m, kk), cc in sec.items():
                    vadd(table.setdefault(nb + kk, {}), alg.mul(pre, {m: ONE}), c * cc)
    table = {g: v for g, v in table.items() if v}
    return HomologicalField(data, alg, derivation(alg, 1, table))


def _contraction(alg, nb, fib, i):
    return derivation(alg, fib.degrees[i] - 1, {nb + i: {(): ONE}})


def homological_field_to_linf(hf, max_arity=None):
    """Anchors and brackets recovered by derived brackets of Q with
    contractions, restricted to the zero section."""
    data = hf.data
    alg = hf.alg
    nb = hf.nb
    fib = data.fiber
    r = len(fib)
    deg = fib.degrees
    top = max_arity if max_arity is not None else data.max_arity()
    iota = [_contraction(alg, nb, fib, i) for i in range(r)]

    def zero_section(vec):
        return {m: c for m, c in vec.items() if all(g < nb for g in m)}

    brackets, anchors = {}, {}
    E = {(): hf.Q}
    for l in range(0, top + 1):
        if l:
            nxt = {}
            for key, D in E.items():
                for i in range(key[-1] if key else 0, r):
                    if key and key[-1] == i and not _odd(deg[i]):
                        continue
                    nxt[key + (i,)] = commutator(D, iota[i])
            E = nxt
        for key, D in E.items():
            flat = sum((l - t) * deg[key[t]] for t in range(l))
            sharp = sum((l - 1 - t) * deg[key[t]] for t in range(l))
            vf = {}
            for j in range(nb):
                v = zero_section(D((j,)))
                if v:
                    vf[j] = vscale(v, -1) if _odd(flat) else v
            if vf:
                anchors.setdefault(l, {})[key] = vf
            if l >= 1:
                sec = {}
                for kk in range(r):
                    v = zero_section(D((nb + kk,)))
                    for m, c in v.items():
                        sec[(m, kk)] = -c if _odd(sharp) else c
                if sec:
                    brackets.setdefault(l, {})[key] = sec
    return AlgebroidData(data.base, fib, brackets, anchors)


# -- Lie-pair algebroid ----------------------------------------------------

def lie_pair_algebroid(pair):
    """The algebroid A[1] + B -> A[1] of a Lie pair: rho_0 = d_A, rho_1(b) =
    Delta_b, rho_2(b, b') = contraction with beta(b, b'), lambda_1 = d^Bott,
    lambda_2 = [,]_B."""
    g = pair.g
    base = GradedSpace([(g.names[a] + "*", 1) for a in pair.h])
    fiber = GradedSpace([(g.names[b], 0) for b in pair.B])
    bi = {a: i for i, a in enumerate(pair.h)}
    fi = {b: i for i, b in enumerate(pair.B)}
    F = FreeGCA(base)
    anchors = {0: {(): {}}, 1: {}, 2: {}}
    for c in pair.h:
        v = {}
        for x, a1 in enumerate(pair.h):
            for a2 in pair.h[x + 1:]:
                cf = g.bracket({a1: ONE}, {a2: ONE}).get(c)
                if cf:
                    vadd(v, F.monomial([bi[a1], bi[a2]]), -cf)
        if v:
            anchors[0][()][bi[c]] = v
    for b in pair.B:
        vf = {}
        for a in pair.h:
            v = {}
            for a2 in pair.h:
                cf = pair.delta(b, a2).get(a)
                if cf:
                    vadd(v, {(bi[a2],): ONE}, -cf)
            if v:
                vf[bi[a]] = v
        anchors[1][(fi[b],)] = vf
    for x, b1 in enumerate(pair.B):
        for b2 in pair.B[x + 1:]:
            be = pair.beta(b1, b2)
            vf = {bi[a]: {(): c} for a, c in be.items() if c}
            anchors[2][(fi[b1], fi[b2])] = vf
    brackets = {1: {}, 2: {}}
    for b in pair.B:
        sec = {}
        for a in pair.h:
            for c, cf in pair.bott(a, b).items():
                sec[((bi[a],), fi[c])] = sec.get(((bi[a],), fi[c]), 0) + cf
        brackets[1][(fi[b],)] = sec
    for x, b1 in enumerate(pair.B):
        for b2 in pair.B[x + 1:]:
            brackets[2][(fi[b1], fi[b2])] = {((), fi[c]): cf for c, cf in pair.bracket_B(b1, b2).items()}
    return AlgebroidData(base, fiber, brackets, anchors)


def lie_pair_differential_parts(pair, alg):
    """d^Bott, d^Delta and d_beta on Lambda(A^* + B^*) = alg, built from the
    pair's structure maps."""
    g = pair.g
    na = len(pair.h)
    xi = {a: i for i, a in enumerate(pair.h)}
    th = {b: na + i for i, b in enumerate(pair.B)}
    bott, dlt, beta = {}, {}, {}
    for c in pair.h:
        v = {}
        for x, a1 in enumerate(pair.h):
            for a2 in pair.h[x + 1:]:
                cf = g.bracket({a1: ONE}, {a2: ONE}).get(c)
                if cf:
                    vadd(v, alg.monomial([xi[a1], xi[a2]]), -cf)
        bott[xi[c]] = v
        v = {}
        for a2 in pair.h:
            for b in pair.B:
                cf = pair.delta(b, a2).get(c)
                if cf:
                    vadd(v, alg.monomial([xi[a2], th[b]]), cf)
        dlt[xi[c]] = v
        v = {}
        for x, b1 in enumerate(pair.B):
            for b2 in pair.B[x + 1:]:
                cf = pair.beta(b1, b2).get(c)
                if cf:
                    vadd(v, alg.monomial([th[b1], th[b2]]), -cf)
        beta[xi[c]] = v
    for c in pair.B:
        v = {}
        for a in pair.h:
            for b in pair.B:
                cf = pair.bott(a, b).get(c)
                if cf:
                    vadd(v, alg.monomial([xi[a], th[b]]), -cf)
        bott[th[c]] = v
        v = {}
        for x, b1 in enumerate(pair.B):
            for b2 in pair.B[x + 1:]:
                cf = pair.bracket_B(b1, b2).get(c)
                if cf:
                    vadd(v, alg.monomial([th[b1], th[b2]]), -cf)
        dlt[th[c]] = v
    clean = lambda t: {i: v for i, v in t.items() if v}
    return {"bott": derivation(alg, 1, clean(bott)), "delta": derivation(alg, 1, clean(dlt)),
            "beta": derivation(alg, 1, clean(beta))}


def decomposition_report(pair):
    """Compare the homological field of the Lie-pair algebroid with
    d^Bott + d^Delta + d_beta component by component.  Empty when they agree."""
    hf = linf_to_homological_field(lie_pair_algebroid(pair))
    alg = hf.alg
    na = len(pair.h)
    parts = lie_pair_differential_parts(pair, alg)
    shifts = {"bott": (1, 0), "delta": (0, 1), "beta": (-1, 2)}

    def bideg(m):
        p = sum(1 for i in m if i < na)
        return p, len(m) - p

    rep = []
    for gidx in range(len(alg.gens)):
        q = hf.Q((gidx,))
        p0, q0 = bideg((gidx,))
        total = {}
        for name, D in parts.items():
            want = D((gidx,))
            dp, dq = shifts[name]
            got = {m: c for m, c in q.items() if bideg(m) == (p0 + dp, q0 + dq)}
            if got != want:
                rep.append({"generator": alg.gens.names[gidx], "part": name,
                            "field": _named(alg, got), "expected": _named(alg, want)})
            vadd(total, want)
        if total != q:
            rep.append({"generator": alg.gens.names[gidx], "part": "sum",
                        "field": _named(alg, q), "expected": _named(alg, total)})
    return rep


# -- random structures -----------------------------------------------------

def _taylor_eval(space, shift, tables, n, keys):
    w, sg, zero = canonical(space, tuple(keys), shift)
    if zero:
        return {}
    v = tables.get(n, {}).get(tuple(w), {})
    return vscale(v, sg) if sg < 0 else v


def _compose(space, shift, A, B, n, keys, cap):
    """Corestriction of A o B on the word ``keys`` (A, B Taylor tables)."""
    par = [space.degree(x) - shift for x in keys]
    acc = {}
    for j in range(1, n + 1):
        i = n + 1 - j
        if i > cap or j not in B or i not in A:
            continue
        for S in combinations(range(n), j):
            inner = _taylor_eval(space, shift, B, j, [keys[t] for t in S])
            if not inner:
                continue
            rest = [keys[t] for t in range(n) if t not in S]
            sg = unshuffle_sign(par, S)
            for c, cc in inner.items():
                vadd(acc, _taylor_eval(space, shift, A, i, [c] + rest), cc * sg)
    return acc


def _commutator_tables(space, shift, R, Q, cap):
    """[R, Q] = R o Q - Q o R for R of degree zero."""
    out = {}
    for n in range(1, cap + 1):
        for w in spanning_words(space, n, shift, word_cap=n):
            v = _compose(space, shift, R, Q, n, w, cap)
            vadd(v, _compose(space, shift, Q, R, n, w, cap), -ONE)
            if v:
                out.setdefault(n, {})[tuple(w)] = v
    return out


def gauge_tables(space, k, R, Q, cap):
    """Taylor tables of exp(ad R) Q truncated at arity ``cap``; R must have no
    unary part so the series stops."""
    if 1 in R and R[1]:
        raise ArgumentError("gauge coderivation must have vanishing unary part")
    shift = 1 - k
    out = {n: dict(t) for n, t in Q.items()}
    term = Q
    i = 0
    while True:
        i += 1
        term = _commutator_tables(space, shift, R, term, cap)
        term = {n: {w: vscale(v, Fraction(1, i)) for w, v in t.items()} for n, t in term.items()}
        if not any(term.values()):
            break
        for n, t in term.items():
            for w, v in t.items():
                cur = out.setdefault(n, {})
                cur[w] = vadd(dict(cur.get(w, {})), v)
    return {n: {w: v for w, v in t.items() if v} for n, t in out.items()}


RANDOM_SPACE = (("u", -1), ("v", 0), ("w", 1))
# lambda_1(u) = v, lambda_2(w, u) = v
RANDOM_SEED_BRACKETS = {(0,): {1: ONE}, (2, 0): {1: ONE}}


def _seed_structure(space, lam=RANDOM_SEED_BRACKETS):
    """q-tables (k = 0) of a strict structure given by antisymmetric lambda
    values on basis words."""
    tabs = {}
    for word, val in lam.items():
        e = decalage_exponent([space.degree(x) for x in word], 0)
        key, sg, zero = canonical(space, word, 1)
        if zero:
            continue
        tabs.setdefault(len(word), {})[tuple(key)] = vscale(val, -sg if _odd(e) else sg)
    return tabs


def random_linf_tables(seed, arity_cap=4, coeffs=(-2, -1, 1, 2), density=0.8):
    """q-tables (k = 0) of a random L-infinity structure on the three
    dimensional space RANDOM_SPACE: a fixed strict seed conjugated by exp(R)
    for a seeded random R with r_1 = 0."""
    rng = random.Random(seed)
    space = GradedSpace(RANDOM_SPACE)
    shift = 1
    R = {}
    for n in range(2, arity_cap + 1):
        for w in spanning_words(space, n, shift, word_cap=n):
            want = sum(space.degree(x) for x in w) - (n - 1)
            for e in range(len(space)):
                if space.degree(e) == want and rng.random() < density:
                    R.setdefault(n, {})[tuple(w)] = {e: Fraction(rng.choice(coeffs))}
    return space, gauge_tables(space, 0, R, _seed_structure(space), arity_cap)


def random_linf_structure(seed, arity_cap=4):
    space, tabs = random_linf_tables(seed, arity_cap)
    return table_structure(space, 0, tabs, arity_cap)


def perturbed_tables(tables, space, seed, arity=2):
    """Copy of ``tables`` with one seeded entry of the given arity changed by 1."""
    rng = random.Random(seed)
    shift = 1
    cands = []
    for w in spanning_words(space, arity, shift, word_cap=arity):
        want = sum(space.degree(x) for x in w) + 1 + (arity - 1) * (-1)
        for e in range(len(space)):
            if space.degree(e) == want:
                cands.append((tuple(w), e))
    if not cands:
        raise ArgumentError(f"no room for a bracket of arity {arity}")
    w, e = rng.choice(cands)
    out = {n: {k: dict(v) for k, v in t.items()} for n, t in tables.items()}
    cur = out.setdefault(arity, {}).setdefault(w, {})
    cur[e] = cur.get(e, 0) + 1
    if not cur[e]:
        del cur[e]
    return out


def linf_mc_agreement(s, k=1, max_weight=None):
    """(jacobi vanishes on the space, mc_defect vanishes on the extension)."""
    cap = s.arity_cap
    jac = all(not jacobi_defect(s, p, w) for p in range(1, cap + 1)
              for w in spanning_words(s.space, p, s.shift, word_cap=p))
    d = lie_poisson_extend(algebroid_from_linf(s), k, arity_cap=cap)
    mc = mc_from_structure(d)
    top = max_weight if max_weight is not None else cap
    defect = mc_defect(mc, max_weight=top)
    return jac, not defect, defect
