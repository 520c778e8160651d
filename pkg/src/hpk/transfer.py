"""Contractions, the perturbation lemma and homotopy transfer of derived
Poisson (or plain L-infinity) structures along a contraction.

A contraction of (A, d_A) onto (B, d_B) is (sigma, tau, h) with sigma tau = id,
h d_A + d_A h = tau sigma - id and sigma h = 0, h tau = 0, h h = 0.  Maps are
LinearMap objects acting on basis keys.
"""

from fractions import Fraction
from math import factorial

from .algebra import FreeGCA
from .errors import ArgumentError, NonTerminationError, PreconditionError
from .graded import ONE, GradedSpace, frac, frac_str, vadd, vscale
from .linf import (DerivedPoissonStructure, LInfStructure, Morphism, as_linf,
                   block_sign, canonical, ordered_partitions, set_partitions)

DEFAULT_PAIR_CAP = None


class LinearMap:
    """Linear map given on basis keys by ``fn(key) -> vector``; memoized."""

    def __init__(self, fn, degree=0, name="", memo=True):
        self._fn = fn
        self.degree = degree
        self.name = name
        self._memo = {} if memo else None

    def __call__(self, key):
        if self._memo is None:
            return self._fn(key)
        v = self._memo.get(key)
        if v is None:
            v = self._fn(key)
            self._memo[key] = v
        return v

    def apply(self, vec):
        acc = {}
        for k, c in vec.items():
            v = self(k)
            if v:
                vadd(acc, v, c)
        return acc

    def then(self, other, name=""):
        """other o self."""
        return LinearMap(lambda k: other.apply(self(k)), self.degree + other.degree, name)

    def __add__(self, other):
        def fn(k):
            v = dict(self(k))
            return vadd(v, other(k))
        return LinearMap(fn, self.degree, f"{self.name}+{other.name}")

    def scaled(self, c):
        c = frac(c)
        return LinearMap(lambda k: vscale(self(k), c), self.degree, self.name)

    @classmethod
    def zero(cls, degree=0):
        return cls(lambda k: {}, degree, "0")

    @classmethod
    def identity(cls):
        return cls(lambda k: {k: ONE}, 0, "id", memo=False)

    @classmethod
    def from_table(cls, table, degree=0, name=""):
        table = {k: {kk: frac(c) for kk, c in v.items() if frac(c)} for k, v in table.items()}
        return cls(lambda k: table.get(k, {}), degree, name, memo=False)


def basis_of(space):
    if isinstance(space, FreeGCA):
        return [m for m in space.basis()]
    return space.basis()


class Contraction:
    """(sigma, tau, h) from the big complex (big, d_big) onto (small, d_small)."""

    def __init__(self, big, small, d_big, d_small, sigma, tau, h, truncation=None):
        self.big = big
        self.small = small
        self.d_big = d_big
        self.d_small = d_small
        self.sigma = sigma
        self.tau = tau
        self.h = h
        self.truncation = truncation

    def big_basis(self):
        return basis_of(self.big)

    def small_basis(self):
        return basis_of(self.small)

    @property
    def algebraic(self):
        return isinstance(self.big, FreeGCA) and isinstance(self.small, FreeGCA)

    def to_json(self):
        if not (isinstance(self.big, GradedSpace) and isinstance(self.small, GradedSpace)):
            raise ArgumentError("only contractions of graded spaces serialize")

        def tab(m, src, dst):
            out = []
            for k in src.basis():
                v = m(k)
                if v:
                    out.append([src.name(k), [[dst.name(kk), frac_str(c)] for kk, c in sorted(v.items())]])
            return out

        A, B = self.big, self.small
        return {"big": A.to_json(), "small": B.to_json(),
                "d_big": tab(self.d_big, A, A), "d_small": tab(self.d_small, B, B),
                "sigma": tab(self.sigma, A, B), "tau": tab(self.tau, B, A), "h": tab(self.h, A, A)}

    @classmethod
    def from_json(cls, doc):
        for f in ("big", "small", "sigma", "tau", "h"):
            if f not in doc:
                raise ArgumentError(f"contraction: missing field {f!r}")
        A = GradedSpace.from_json(doc["big"])
        B = GradedSpace.from_json(doc["small"])

        def read(field, src, dst):
            table = {}
            for pos, ent in enumerate(doc.get(field, [])):
                try:
                    key, vals = ent
                    table[src.index(key)] = {dst.index(n): frac(c) for n, c in vals}
                except (ValueError, TypeError, KeyError) as exc:
                    raise ArgumentError(f"contraction: bad entry #{pos} in {field!r}: {exc}") from exc
            return LinearMap.from_table(table, name=field)

        d_big = read("d_big", A, A)
        d_small = read("d_small", B, B)
        return cls(A, B, d_big, d_small, read("sigma", A, B), read("tau", B, A), read("h", A, A))


def _entry(check, space, keys, defect):
    names = [space.name(k) for k in keys] if space is not None else list(keys)
    return {"check": check, "input": names,
            "defect": sorted(((space.name(k) if space is not None else k), c)
                             for k, c in defect.items())}


def validate_contraction(c, semifull=False, pair_cap=DEFAULT_PAIR_CAP):
    """Report of failed contraction identities: the five side conditions, the
    chain-map and square-zero conditions, and with ``semifull`` the five
    multiplicative identities on all pairs of basis keys (or the first
    ``pair_cap`` keys of each side)."""
    A, B = c.big, c.small
    aks = c.big_basis()
    bks = c.small_basis()
    rep = []
    for x in bks:
        d = vadd(dict(c.sigma.apply(c.tau(x))), {x: ONE}, -ONE)
        if d:
            rep.append(_entry("sigma-tau", B, [x], d))
        d = c.h.apply(c.tau(x))
        if d:
            rep.append(_entry("h-tau", A, [x], d))
        d = vadd(dict(c.d_big.apply(c.tau(x))), c.tau.apply(c.d_small(x)), -ONE)
        if d:
            rep.append(_entry("tau-chain", A, [x], d))
        d = c.d_small.apply(c.d_small(x))
        if d:
            rep.append(_entry("small-square", B, [x], d))
    for a in aks:
        ha = c.h(a)
        lhs = c.h.apply(c.d_big(a))
        vadd(lhs, c.d_big.apply(ha))
        rhs = c.tau.apply(c.sigma(a))
        vadd(rhs, {a: ONE}, -ONE)
        d = vadd(lhs, rhs, -ONE)
        if d:
            rep.append(_entry("homotopy", A, [a], d))
        d = c.sigma.apply(ha)
        if d:
            rep.append(_entry("sigma-h", B, [a], d))
        d = c.h.apply(ha)
        if d:
            rep.append(_entry("h-h", A, [a], d))
        d = vadd(dict(c.d_small.apply(c.sigma(a))), c.sigma.apply(c.d_big(a)), -ONE)
        if d:
            rep.append(_entry("sigma-chain", B, [a], d))
        d = c.d_big.apply(c.d_big(a))
        if d:
            rep.append(_entry("big-square", A, [a], d))
    if semifull:
        if not c.algebraic:
            raise PreconditionError("semifull check needs algebras on both sides")
        rep.extend(_semifull_report(c, aks, bks, pair_cap))
    return rep


def _semifull_report(c, aks, bks, pair_cap):
    A, B = c.big, c.small
    if pair_cap is not None:
        aks = aks[:pair_cap]
        bks = bks[:pair_cap]
    rep = []
    one = lambda m: {m: ONE}
    for a in aks:
        ha = c.h(a)
        sa = c.sigma(a)
        s = Fraction(-1 if (A.degree(a) + 1) % 2 else 1)
        for b in aks:
            hb = c.h(b)
            u = A.mul(ha, one(b))
            u = vscale(u, s)
            vadd(u, A.mul(one(a), hb))
            # (A1)
            d = vadd(c.h.apply(u), A.mul(ha, hb), -ONE)
            if d:
                rep.append(_entry("semifull-A1", A, [a, b], d))
            # (A3)
            d = c.sigma.apply(u)
            if d:
                rep.append(_entry("semifull-A3", B, [a, b], d))
        for x in bks:
            tx = c.tau(x)
            atx = A.mul(one(a), tx)
            # (A2)
            d = vadd(c.h.apply(atx), A.mul(ha, tx), -ONE)
            if d:
                rep.append(_entry("semifull-A2", A, [a, x], d))
            # (A4)
            d = vadd(c.sigma.apply(atx), B.mul(sa, one(x)), -ONE)
            if d:
                rep.append(_entry("semifull-A4", B, [a, x], d))
    for x in bks:
        tx = c.tau(x)
        for y in bks:
            d = vadd(c.tau.apply(B.mul(one(x), one(y))), A.mul(tx, c.tau(y)), -ONE)
            if d:
                rep.append(_entry("semifull-A5", A, [x, y], d))
    return rep


class Perturbation:
    """Degree +1 map ``delta`` on the big side; ``locality`` is the minimal
    filtration raise of h o delta, used for the termination bound."""

    def __init__(self, delta, locality=1):
        if locality < 1:
            raise ArgumentError("locality must be at least 1")
        self.delta = delta
        self.locality = locality


def _series(first, step, bound, label):
    """sum_{i>=0} step^i(first) as a vector, refusing to run beyond ``bound``
    applications."""
    acc = dict(first)
    cur = first
    i = 0
    while cur:
        i += 1
        if i > bound:
            raise NonTerminationError(f"{label}: series still nonzero after {bound} steps",
                                      weight=i)
        cur = step(cur)
        vadd(acc, cur)
    return acc


def perturb_contraction(c, p, truncation, check=True):
    """Perturbation lemma: contraction of (A, d_A + delta) onto (B, d_B + delta_B)."""
    if truncation is None or truncation < 0:
        raise ArgumentError("perturb_contraction needs a nonnegative truncation bound")
    delta = p.delta
    bound = truncation // p.locality + 1
    d_new = c.d_big + delta
    if check:
        for a in c.big_basis():
            sq = d_new.apply(d_new(a))
            if sq:
                raise PreconditionError(
                    f"perturbed differential does not square to zero on {c.big.name(a)}")
    h, sigma, tau = c.h, c.sigma, c.tau

    def h_delta(v):
        return h.apply(delta.apply(v))

    def tau_b(x):
        return _series(tau(x), h_delta, bound, "tau")

    def h_b(a):
        return _series(h(a), h_delta, bound, "h")

    def sigma_b(a):
        # sigma sum_i (delta h)^i
        acc = dict(sigma(a))
        cur = h(a)
        i = 0
        while cur:
            i += 1
            if i > bound:
                raise NonTerminationError("sigma: series still nonzero", weight=i)
            dc = delta.apply(cur)
            vadd(acc, sigma.apply(dc))
            cur = h.apply(dc)
        return acc

    tau_new = LinearMap(tau_b, 0, "tau~")

    def d_small_new(x):
        v = dict(c.d_small(x))
        vadd(v, sigma.apply(delta.apply(tau_new(x))))
        return v

    return Contraction(c.big, c.small, d_new, LinearMap(d_small_new, 1, "dB~"),
                       LinearMap(sigma_b, 0, "sigma~"), tau_new, LinearMap(h_b, -1, "h~"),
                       truncation=truncation)


def identity_contraction(space, d):
    i = LinearMap.identity()
    return Contraction(space, space, d, d, i, i, LinearMap.zero(-1))


# -- transfer --------------------------------------------------------------

POINTED = "pointed"
SYMMETRIC = "symmetric"


class Transfer:
    """Transferred Taylor coefficients l_n on the small side and the morphism
    tau_n: small -> big, computed on canonical words by recursion."""

    def __init__(self, c, src, arity_cap, route=POINTED):
        if route not in (POINTED, SYMMETRIC):
            raise ArgumentError(f"unknown transfer route {route!r}")
        self.c = c
        self.src = as_linf(src)
        self.k = self.src.k
        self.shift = 1 - self.k
        self.arity_cap = arity_cap
        self.route = route
        self._tau = {}
        self._ell = {}

    def _canon(self, keys):
        w, sg, zero = canonical(self.c.small, tuple(keys), self.shift)
        return tuple(w), sg, zero

    def tau(self, n, keys):
        w, sg, zero = self._canon(keys)
        if zero:
            return {}
        v = self._tau.get(w)
        if v is None:
            if n == 1:
                v = self.c.tau(w[0])
            else:
                v = self.c.h.apply(self._inner(w))
            self._tau[w] = v
        return vscale(v, sg) if sg < 0 else v

    def ell(self, n, keys):
        w, sg, zero = self._canon(keys)
        if zero:
            return {}
        v = self._ell.get(w)
        if v is None:
            if n == 1:
                v = self.c.d_small(w[0])
            else:
                v = self.c.sigma.apply(self._inner(w))
            self._ell[w] = v
        return vscale(v, sg) if sg < 0 else v

    def _inner(self, w):
        if self.route == POINTED:
            return self._inner_pointed(w)
        return self._inner_symmetric(w)

    def _apply_q(self, p, blocks, w, par, sign, coef, acc):
        vals = [self.tau(len(b), tuple(w[i] for i in b)) for b in blocks]
        if any(not v for v in vals):
            return
        q = self.src
        from .graded import expand_multilinear
        out = expand_multilinear(lambda ks: q.q(p, ks), vals)
        if out:
            vadd(acc, out, coef * sign)

    def _inner_pointed(self, w):
        """sum_{p>=2} 1/(p-1)! sum over ordered blocks of the first n-1 inputs,
        the last block also containing the final input."""
        n = len(w)
        m = n - 1
        par = [self.c.small.degree(x) - self.shift for x in w]
        acc = {}
        for p in range(2, min(n, self.src.arity_cap) + 1):
            if not self.src.has(p):
                continue
            coef = Fraction(1, factorial(p - 1))
            for sizes in _compositions(m, p):
                for blocks in ordered_partitions(m, sizes):
                    full = [list(b) for b in blocks]
                    full[-1] = full[-1] + [m]
                    sign = block_sign(par, full)
                    self._apply_q(p, full, w, par, sign, coef, acc)
        return acc

    def _inner_symmetric(self, w):
        """Sum over unordered set partitions into at least two blocks."""
        n = len(w)
        par = [self.c.small.degree(x) - self.shift for x in w]
        acc = {}
        for part in set_partitions(n):
            p = len(part)
            if p < 2 or not self.src.has(p):
                continue
            sign = block_sign(par, part)
            self._apply_q(p, part, w, par, sign, ONE, acc)
        return acc


def _compositions(m, p):
    """(i_1..i_p) with i_1..i_{p-1} >= 1, i_p >= 0, summing to m."""
    def rec(left, parts):
        if parts == 1:
            yield (left,)
            return
        for i in range(1, left + 1):
            for tail in rec(left - i, parts - 1):
                yield (i,) + tail
    yield from (s for s in rec(m, p))


def transfer_structure(c, src, arity_cap=4, route=POINTED, check=True, pair_cap=None):
    """Transfer of ``src`` (structure on the big side with q_1 = d_big) to the
    small side.  Returns (dst, tau_infinity)."""
    lin = as_linf(src)
    if lin.space is not c.big:
        raise ArgumentError("structure must live on the big side of the contraction")
    if check:
        for a in c.big_basis():
            q1 = lin.q(1, (a,)) if lin.has(1) else {}
            if q1 != c.d_big(a):
                raise PreconditionError(
                    f"unary bracket differs from the big differential on {c.big.name(a)}")
        rep = validate_contraction(c, semifull=c.algebraic, pair_cap=pair_cap)
        if rep:
            raise PreconditionError(f"contraction fails {rep[0]['check']} on {rep[0]['input']}")
    t = Transfer(c, lin, arity_cap, route)
    maps = {n: (lambda n: (lambda *ks: t.ell(n, ks)))(n) for n in range(1, arity_cap + 1)}
    out = LInfStructure(c.small, lin.k, maps, arity_cap)
    if isinstance(src, DerivedPoissonStructure) and isinstance(c.small, FreeGCA):
        dst = DerivedPoissonStructure(c.small, out)
    else:
        dst = out
    tau_inf = Morphism(c.small, c.big, lin.k, lambda n, w: t.tau(n, w), arity_cap, memo=False)
    return dst, tau_inf


def shuffle_count(sizes):
    """|Sh(i_1, ..., i_p)|."""
    n = sum(sizes)
    out = factorial(n)
    for s in sizes:
        out //= factorial(s)
    return out
