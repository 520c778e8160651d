"""L-infinity and derived Poisson structures in the symmetric (Taylor
coefficient) convention, with axiom checkers, morphisms, coderivation
exponentials and cohomology.

Conventions.  For shift parameter k the Taylor coefficients q_n are graded
symmetric on A[1-k]: the parity of a key a is |a| - 1 + k.  As maps A^n -> A
they have degree 1 + (n-1)(k-1).  The antisymmetric brackets are
lambda_n = (-1)^e q_n with e = sum_i (n-i)(|a_i| + k).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from math import factorial

from .algebra import FreeGCA, MultiDerivation
from .errors import ArgumentError, ArityError, NonTerminationError, StructuralError
from .graded import (ONE, SYMMETRIC, MultiMap,
                     decalage_exponent, sort_with_sign, vadd, vadd_term, vscale)
from .linalg import Echelon, kernel

DEFAULT_ARITY_CAP = 5
DEFAULT_WORD_CAP = 4


def thread_count(threads=None):
    if threads is not None:
        return max(1, int(threads))
    try:
        return max(1, int(os.environ.get("HPK_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, items, threads):
    """Map ``fn`` over ``items`` keeping input order."""
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- space helpers ---------------------------------------------------------

def key_length(space, key):
    return len(key) if isinstance(space, FreeGCA) else 1


def key_name(space, key):
    return space.name(key)


def nonunit_basis(space, word_cap=DEFAULT_WORD_CAP):
    if isinstance(space, FreeGCA):
        if space.weight_cap is not None:
            try:
                return [m for m in space.basis() if m and len(m) <= word_cap]
            except ArgumentError:
                pass
        return [m for m in space.basis(max_len=word_cap) if m]
    return space.basis()


def canonical(space, keys, shift):
    """(sorted keys, sign, vanishes) for a symmetric word on space[shift]."""
    return sort_with_sign(keys, space.sort_key, lambda a: space.degree(a) - shift)


def spanning_words(space, p, shift, word_cap=DEFAULT_WORD_CAP, budget=None, keys=None):
    """Canonical p-words of nonunit basis keys of total length at most
    max(p, word_cap), skipping words that vanish by symmetry."""
    if keys is None:
        keys = nonunit_basis(space, word_cap)
    keys = sorted(keys, key=space.sort_key)
    if budget is None:
        budget = max(p, word_cap)
    lengths = [key_length(space, k) for k in keys]
    odd = [(space.degree(k) - shift) % 2 for k in keys]
    out = []

    def rec(start, left, room, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(keys)):
            if lengths[i] * left > room:
                break
            nxt = i + 1 if odd[i] else i
            acc.append(keys[i])
            rec(nxt, left - 1, room - lengths[i], acc)
            acc.pop()

    if p == 0:
        return [()]
    rec(0, p, budget, [])
    return out


def unshuffle_sign(parities, first):
    """Koszul sign of moving the positions in ``first`` (increasing) to the
    front, keeping relative orders."""
    s = 0
    fs = set(first)
    for j in first:
        if parities[j] % 2:
            s += sum(1 for i in range(j) if i not in fs and parities[i] % 2)
    return -1 if s % 2 else 1


def set_partitions(n):
    """Unordered set partitions of range(n), blocks ordered by minimum."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def ordered_partitions(n, sizes):
    """Ordered partitions of range(n) into blocks of the given sizes, each block
    increasing (the shuffles of type ``sizes``)."""
    if not sizes:
        if n == 0:
            yield []
        return

    def rec(avail, sizes):
        if not sizes:
            yield []
            return
        for blk in combinations(avail, sizes[0]):
            rest = [a for a in avail if a not in blk]
            for tail in rec(rest, sizes[1:]):
                yield [list(blk)] + tail

    yield from rec(list(range(n)), list(sizes))


def block_sign(parities, blocks):
    perm = [i for b in blocks for i in b]
    s = 0
    for x in range(len(perm)):
        if not parities[perm[x]] % 2:
            continue
        for y in range(x + 1, len(perm)):
            if perm[y] < perm[x] and parities[perm[y]] % 2:
                s += 1
    return -1 if s % 2 else 1


# -- structures ------------------------------------------------------------

class Coderivation:
    """Family of Taylor coefficients r_n, symmetric on space[1-k], of shifted
    degree ``sdegree``.  Each r_n is any callable ``r_n(*keys) -> vector``."""

    def __init__(self, space, k, maps=None, arity_cap=DEFAULT_ARITY_CAP, sdegree=0):
        self.space = space
        self.k = k
        self.shift = 1 - k
        self.arity_cap = arity_cap
        self.sdegree = sdegree
        self.maps = {}
        for n, m in (maps or {}).items():
            if n < 1:
                raise ArgumentError("arities start at 1")
            self.maps[n] = m

    def map_degree(self, n):
        """Unshifted degree of the n-th coefficient."""
        return self.sdegree + (n - 1) * (self.k - 1)

    def parity(self, key):
        return self.space.degree(key) - self.shift

    def has(self, n):
        if n < 1 or n > self.arity_cap:
            return False
        m = self.maps.get(n)
        if m is None:
            return False
        if isinstance(m, MultiDerivation):
            return bool(m.table)
        if isinstance(m, MultiMap):
            return bool(m.entries)
        return True

    def q(self, n, keys):
        if n < 1 or n > self.arity_cap:
            raise ArityError(f"arity {n} outside 1..{self.arity_cap}")
        if len(keys) != n:
            raise ArgumentError(f"arity {n} needs {n} inputs, got {len(keys)}")
        m = self.maps.get(n)
        if m is None:
            return {}
        return m(*keys)

    def q_vec(self, n, vectors):
        from .graded import expand_multilinear
        return expand_multilinear(lambda ks: self.q(n, ks), vectors)

    def max_arity(self):
        return max((n for n in self.maps if self.has(n)), default=0)

    def scaled(self, c):
        c = Fraction(c)
        maps = {n: (lambda m: (lambda *ks: vscale(m(*ks), c)))(m) for n, m in self.maps.items()}
        return Coderivation(self.space, self.k, maps, self.arity_cap, self.sdegree)


class LInfStructure(Coderivation):
    """Taylor coefficients q_n of a square-zero degree one coderivation."""

    def __init__(self, space, k, brackets=None, arity_cap=DEFAULT_ARITY_CAP):
        super().__init__(space, k, brackets, arity_cap, sdegree=1)

    def bracket_degree(self, n):
        return self.map_degree(n)


class DerivedPoissonStructure:
    def __init__(self, algebra, linf):
        if linf.space is not algebra:
            raise ArgumentError("structure and algebra must share the space")
        self.algebra = algebra
        self.linf = linf
        self.k = linf.k

    @property
    def space(self):
        return self.algebra

    @property
    def arity_cap(self):
        return self.linf.arity_cap

    def q(self, n, keys):
        return self.linf.q(n, keys)


def as_linf(s):
    return s.linf if isinstance(s, DerivedPoissonStructure) else s


def table_structure(space, k, tables, arity_cap=DEFAULT_ARITY_CAP):
    """LInfStructure from explicit tables {n: {word: vector}}."""
    brackets = {}
    for n, tab in tables.items():
        m = MultiMap(space, n, 1 + (n - 1) * (k - 1), SYMMETRIC, 1 - k)
        for word, vec in tab.items():
            m.set(tuple(word), vec)
        brackets[n] = m
    return LInfStructure(space, k, brackets, arity_cap)


def leibniz_structure(alg, k, gen_tables, arity_cap=DEFAULT_ARITY_CAP, memo=True):
    """Derived Poisson structure whose q_n are the multiderivations with the
    given values on generator tuples {n: {gens: vector}}."""
    brackets = {}
    for n, tab in gen_tables.items():
        if n > arity_cap:
            if any(v for v in tab.values()):
                raise ArityError(f"bracket of arity {n} beyond cap {arity_cap}")
            continue
        brackets[n] = MultiDerivation(alg, n, 1 + (n - 1) * (k - 1), 1 - k, tab, memo=memo)
    return DerivedPoissonStructure(alg, LInfStructure(alg, k, brackets, arity_cap))


def evaluate_bracket(s, n, inputs):
    return as_linf(s).q(n, tuple(inputs))


def lambda_bracket(s, n, keys):
    """Antisymmetric bracket lambda_n on basis keys."""
    s = as_linf(s)
    e = decalage_exponent([s.space.degree(a) for a in keys], s.k)
    v = s.q(n, tuple(keys))
    return vscale(v, -1) if e % 2 else v


def lambda_vec(s, n, vectors):
    from .graded import expand_multilinear
    return expand_multilinear(lambda ks: lambda_bracket(s, n, ks), vectors)


# -- generalized Jacobi ----------------------------------------------------

def jacobi_defect(s, p, inputs):
    """sum_{i+j=p+1} sum_{unshuffles} e q_i(q_j(x_S), x_rest)."""
    s = as_linf(s)
    inputs = tuple(inputs)
    if len(inputs) != p:
        raise ArgumentError(f"jacobi_defect at arity {p} needs {p} inputs")
    if p > s.arity_cap:
        raise ArityError(f"arity {p} beyond cap {s.arity_cap}")
    par = [s.parity(x) for x in inputs]
    acc = {}
    for j in range(1, p + 1):
        i = p + 1 - j
        if not (s.has(i) and s.has(j)):
            continue
        for S in combinations(range(p), j):
            rest = tuple(inputs[t] for t in range(p) if t not in S)
            inner = s.q(j, tuple(inputs[t] for t in S))
            if not inner:
                continue
            sign = unshuffle_sign(par, S)
            for c, coef in inner.items():
                vadd(acc, s.q(i, (c,) + rest), coef * sign)
    return acc


def coderivation_apply(s, tensor, full_only=False):
    """Apply the coderivation with Taylor coefficients ``s`` to an element of the
    reduced symmetric coalgebra, stored as {canonical word: coefficient}."""
    sp = s.space
    out = {}
    for word, coef in tensor.items():
        L = len(word)
        par = [s.parity(x) for x in word]
        for j in range(1, L + 1):
            if full_only and j != L:
                continue
            if not s.has(j):
                continue
            for S in combinations(range(L), j):
                val = s.q(j, tuple(word[t] for t in S))
                if not val:
                    continue
                rest = tuple(word[t] for t in range(L) if t not in S)
                sign = unshuffle_sign(par, S)
                for c, cc in val.items():
                    w2, sg, zero = canonical(sp, (c,) + rest, s.shift)
                    if zero:
                        continue
                    vadd_term(out, tuple(w2), coef * cc * sign * sg)
    return out


def word_tensor(s, inputs):
    w, sg, zero = canonical(s.space, tuple(inputs), s.shift)
    return {} if zero else {tuple(w): Fraction(sg)}


def coderivation_square(s, p, inputs):
    """Corestriction of Q o Q on x_1 ... x_p, through explicit coalgebra words."""
    s = as_linf(s)
    t = coderivation_apply(s, word_tensor(s, inputs))
    t = coderivation_apply(s, t, full_only=True)
    return {w[0]: c for w, c in t.items() if len(w) == 1}


def lambda_jacobi_defect(s, p, inputs):
    """The antisymmetric form of the identity on A[-k]:
    sum (-1)^{i(j-1)} sgn e lambda_j(lambda_i(x_S), x_rest)."""
    s = as_linf(s)
    inputs = tuple(inputs)
    deg = [s.space.degree(x) + s.k for x in inputs]
    acc = {}
    for i in range(1, p + 1):
        j = p + 1 - i
        if not (s.has(i) and s.has(j)):
            continue
        for S in combinations(range(p), i):
            sgn = unshuffle_sign([1] * p, S) * unshuffle_sign(deg, S)
            sgn *= -1 if (i * (j - 1)) % 2 else 1
            inner = lambda_bracket(s, i, tuple(inputs[t] for t in S))
            rest = tuple(inputs[t] for t in range(p) if t not in S)
            for c, coef in inner.items():
                vadd(acc, lambda_bracket(s, j, (c,) + rest), coef * sgn)
    return acc


def check_jacobi(s, max_arity=None, word_cap=DEFAULT_WORD_CAP, threads=None, words=None):
    """Report of nonzero jacobi_defect over spanning words, arities 1..max_arity."""
    lin = as_linf(s)
    top = lin.arity_cap if max_arity is None else max_arity
    report = []
    for p in range(1, top + 1):
        ws = words(p) if words else spanning_words(lin.space, p, lin.shift, word_cap)
        res = _fan_out(lambda w: jacobi_defect(lin, p, w), ws, threads)
        for w, d in zip(ws, res):
            if d:
                report.append(_entry(lin.space, "jacobi", p, w, d))
    return report


def _entry(space, check, arity, word, defect):
    return {"check": check, "arity": arity,
            "word": [key_name(space, x) for x in word],
            "defect": _named_vec(space, defect)}


def _named_vec(space, vec):
    return sorted(((key_name(space, k), c) for k, c in vec.items()),
                  key=lambda t: t[0])


# -- Leibniz ---------------------------------------------------------------

def check_leibniz(d, word_cap=DEFAULT_WORD_CAP, arity_cap=None, threads=None):
    """Report of violations of
    q_n(a.., x y) = q_n(.., x) y + (-1)^{|x||y|} q_n(.., y) x."""
    alg = d.algebra
    lin = d.linf
    top = lin.arity_cap if arity_cap is None else min(arity_cap, lin.arity_cap)
    keys = nonunit_basis(alg, word_cap)
    report = []
    for n in range(1, top + 1):
        budget = max(word_cap, n + 1)
        prefixes = spanning_words(alg, n - 1, lin.shift, word_cap, budget=budget - 2, keys=keys)
        jobs = []
        for pre in prefixes:
            used = sum(len(m) for m in pre)
            for ia, x in enumerate(keys):
                for y in keys[ia:]:
                    if used + len(x) + len(y) <= budget:
                        jobs.append((pre, x, y))

        def one(job, n=n):
            pre, x, y = job
            xy = alg.mul({x: ONE}, {y: ONE})
            lhs = {}
            for m, c in xy.items():
                vadd(lhs, lin.q(n, pre + (m,)), c)
            rhs = alg.mul(lin.q(n, pre + (x,)), {y: ONE})
            s = -1 if (alg.degree(x) * alg.degree(y)) % 2 else 1
            vadd(rhs, alg.mul(lin.q(n, pre + (y,)), {x: ONE}), Fraction(s))
            return vadd(lhs, rhs, -ONE)

        for job, dvec in zip(jobs, _fan_out(one, jobs, threads)):
            if dvec:
                pre, x, y = job
                report.append({"check": "leibniz", "arity": n,
                               "word": [alg.name(m) for m in pre] + [alg.name(x), alg.name(y)],
                               "defect": _named_vec(alg, dvec)})
    return report


# -- morphisms -------------------------------------------------------------

class Morphism:
    """Taylor coefficients f_n: src^n -> dst, symmetric on src[1-k]."""

    def __init__(self, src, dst, k, fn, arity_cap=DEFAULT_ARITY_CAP, memo=True):
        self.src = src
        self.dst = dst
        self.k = k
        self.shift = 1 - k
        self.arity_cap = arity_cap
        self._fn = fn
        self._memo = {} if memo else None

    def f(self, n, keys):
        if n < 1 or n > self.arity_cap:
            raise ArityError(f"Taylor coefficient {n} outside 1..{self.arity_cap}")
        w, sg, zero = canonical(self.src, tuple(keys), self.shift)
        if zero:
            return {}
        w = tuple(w)
        if self._memo is not None:
            v = self._memo.get(w)
            if v is None:
                v = self._fn(n, w)
                self._memo[w] = v
        else:
            v = self._fn(n, w)
        return vscale(v, sg) if sg < 0 else v

    def f_vec(self, n, vectors):
        from .graded import expand_multilinear
        return expand_multilinear(lambda ks: self.f(n, ks), vectors)

    def first_is_identity(self, keys):
        return all(self.f(1, (x,)) == {x: ONE} for x in keys)


def identity_morphism(space, k, arity_cap=DEFAULT_ARITY_CAP):
    return Morphism(space, space, k, lambda n, w: {w[0]: ONE} if n == 1 else {}, arity_cap)


def coalgebra_image(f, word):
    """Image of x_1...x_n under the coalgebra map F as {canonical dst word: c}."""
    n = len(word)
    par = [f.src.degree(x) - f.shift for x in word]
    out = {}
    for part in set_partitions(n):
        vals = [f.f(len(b), tuple(word[i] for i in b)) for b in part]
        if any(not v for v in vals):
            continue
        sign = block_sign(par, part)
        _tensor_accumulate(out, f.dst, f.shift, vals, sign)
    return out


def _tensor_accumulate(out, space, shift, vals, coef):
    from itertools import product
    for combo in product(*[list(v.items()) for v in vals]):
        c = Fraction(coef)
        ks = []
        for k, cc in combo:
            c *= cc
            ks.append(k)
        w, sg, zero = canonical(space, tuple(ks), shift)
        if not zero:
            vadd_term(out, tuple(w), c * sg)


def compose_morphisms(g, f):
    """g o f for f: A -> B, g: B -> C, through coalgebra composition."""
    if f.k != g.k:
        raise ArgumentError("shift mismatch")
    cap = min(f.arity_cap, g.arity_cap)

    def fn(n, w):
        acc = {}
        for word, c in coalgebra_image(f, w).items():
            vadd(acc, g.f(len(word), word), c)
        return acc

    return Morphism(f.src, g.dst, f.k, fn, cap)


def check_morphism(f, src, dst, arity_cap=None, word_cap=DEFAULT_WORD_CAP, threads=None):
    """Report of failures of F Q_src = Q_dst F (corestricted) and of the
    multiplicativity relation, for f: src -> dst."""
    if src.k != dst.k or f.k != src.k:
        raise ArgumentError(f"shift mismatch: {src.k}, {dst.k}, {f.k}")
    cap = f.arity_cap if arity_cap is None else arity_cap
    qs, qd = as_linf(src), as_linf(dst)
    sp = qs.space
    report = []

    for n in range(1, cap + 1):
        ws = spanning_words(sp, n, qs.shift, word_cap)

        def one(w, n=n):
            par = [qs.parity(x) for x in w]
            lhs = {}
            for j in range(1, n + 1):
                if not qs.has(j):
                    continue
                for S in combinations(range(n), j):
                    val = qs.q(j, tuple(w[t] for t in S))
                    if not val:
                        continue
                    rest = tuple(w[t] for t in range(n) if t not in S)
                    sign = unshuffle_sign(par, S)
                    for c, cc in val.items():
                        vadd(lhs, f.f(n - j + 1, (c,) + rest), cc * sign)
            rhs = {}
            for word, c in coalgebra_image(f, w).items():
                if qd.has(len(word)):
                    vadd(rhs, qd.q(len(word), word), c)
            return vadd(lhs, rhs, -ONE)

        for w, dvec in zip(ws, _fan_out(one, ws, threads)):
            if dvec:
                report.append(_entry(dst.space, "linf-morphism", n, w, dvec)
                              | {"word": [key_name(sp, x) for x in w]})

    if isinstance(src, DerivedPoissonStructure) and isinstance(dst, DerivedPoissonStructure):
        report.extend(_check_multiplicative(f, src, dst, cap, word_cap, threads))
    return report


def _check_multiplicative(f, src, dst, cap, word_cap, threads):
    A, B = src.algebra, dst.algebra
    k = src.k
    keys = nonunit_basis(A, word_cap)
    report = []
    for n in range(0, cap):
        budget = max(word_cap, n + 2)
        prefixes = spanning_words(A, n, 1 - k, word_cap, budget=budget - 2, keys=keys)
        jobs = []
        for pre in prefixes:
            used = sum(len(m) for m in pre)
            for y in keys:
                for z in keys:
                    if used + len(y) + len(z) <= budget:
                        jobs.append((pre, y, z))

        def one(job, n=n):
            xs, y, z = job
            lhs = {}
            for m, c in A.mul({y: ONE}, {z: ONE}).items():
                vadd(lhs, f.f(n + 1, xs + (m,)), c)
            par = [A.degree(x) - (1 - k) for x in xs]
            dy = A.degree(y)
            rhs = {}
            for i in range(0, n + 1):
                for S in combinations(range(n), i):
                    rest = [t for t in range(n) if t not in S]
                    e = (unshuffle_sign(par, S) < 0)
                    e += dy * ((n - i) * (k - 1) + sum(A.degree(xs[t]) for t in rest))
                    left = f.f(i + 1, tuple(xs[t] for t in S) + (y,))
                    if not left:
                        continue
                    right = f.f(n - i + 1, tuple(xs[t] for t in rest) + (z,))
                    if not right:
                        continue
                    vadd(rhs, B.mul(left, right), Fraction(-1 if e % 2 else 1))
            return vadd(lhs, rhs, -ONE)

        for job, dvec in zip(jobs, _fan_out(one, jobs, threads)):
            if dvec:
                xs, y, z = job
                report.append({"check": "multiplicative", "arity": n + 1,
                               "word": [A.name(m) for m in xs] + [A.name(y), A.name(z)],
                               "defect": _named_vec(B, dvec)})
    return report


def exp_coderivation(r, arity_cap=None, max_steps=64):
    """Taylor coefficients of exp(R) = sum_j R^j / j! for a degree zero
    coderivation R (a Coderivation with sdegree 0)."""
    if r.sdegree != 0:
        raise ArgumentError("exp_coderivation needs a degree zero coderivation")
    cap = r.arity_cap if arity_cap is None else arity_cap

    def fn(n, w):
        t = {tuple(w): ONE}
        acc = {}
        j = 0
        while t:
            for word, c in t.items():
                if len(word) == 1:
                    vadd_term(acc, word[0], c / factorial(j))
            j += 1
            if j > n + max_steps:
                raise NonTerminationError(
                    f"exp series did not terminate on a word of length {n}", weight=n)
            t = coderivation_apply(r, t)
        return acc

    return Morphism(r.space, r.space, r.k, fn, cap)


# -- cohomology ------------------------------------------------------------

class Cohomology:
    """Cohomology of (A, q_1) with representatives, product and bracket tables."""

    def __init__(self, alg, k):
        self.alg = alg
        self.k = k
        self.reps = []          # cocycle vectors, pivot coefficient 1
        self.degrees = []
        self.dims = {}
        self.product = {}       # (i, j) -> {r: c}
        self.bracket = {}
        self.issues = []
        self._ech = {}

    def coords(self, vec):
        """H-coordinates of a cocycle; raises if ``vec`` is not closed."""
        by_deg = {}
        for m, c in vec.items():
            by_deg.setdefault(self.alg.degree(m), {})[m] = c
        out = {}
        for d, part in by_deg.items():
            e = self._ech.get(d)
            if e is None:
                raise StructuralError(f"element of degree {d} outside the complex")
            rem, tag = e.reduce(part)
            if rem:
                raise StructuralError("coordinates requested for a non-closed element",
                                      witness=rem)
            vadd(out, tag, -ONE)
        return out

    def is_exact(self, vec):
        try:
            return not self.coords(vec)
        except StructuralError:
            return False

    @property
    def dim(self):
        return len(self.reps)

    def names(self):
        return [self.alg.name(min(r, key=self.alg.sort_key)) for r in self.reps]


def _cochain_data(d, threads=None):
    alg = d.algebra
    basis = alg.basis()
    by_deg = {}
    for m in basis:
        by_deg.setdefault(alg.degree(m), []).append(m)
    lin = d.linf
    img = {m: (lin.q(1, (m,)) if lin.has(1) else {}) for m in basis}
    return basis, by_deg, img


def cohomology_with_bracket(d, threads=None):
    alg = d.algebra
    lin = d.linf
    k = d.k
    basis, by_deg, img = _cochain_data(d, threads)
    for m in basis:
        dd = {}
        for x, c in img[m].items():
            vadd(dd, img.get(x) if x in img else lin.q(1, (x,)), c)
        if dd:
            raise StructuralError(f"q_1 does not square to zero on {alg.name(m)}",
                                  witness=dd)
    H = Cohomology(alg, k)
    order = alg.sort_key
    for deg in sorted(by_deg):
        cols = by_deg[deg]
        ech = Echelon(order)
        for w in by_deg.get(deg - 1, []):
            if img[w]:
                ech.add(img[w])
        ker = kernel([img[m] for m in cols], order)
        count = 0
        for kv in ker:
            z = {cols[j]: c for j, c in kv.items()}
            rem, _ = ech.reduce(z)
            if not rem:
                continue
            idx = len(H.reps)
            piv = min(rem, key=order)
            rem = vscale(rem, ONE / rem[piv])
            ech.add(rem, {idx: ONE})
            H.reps.append(rem)
            H.degrees.append(deg)
            count += 1
        if count:
            H.dims[deg] = count
        H._ech[deg] = ech

    n = len(H.reps)

    def lam2(x, y):
        return lambda_vec(lin, 2, (x, y)) if lin.has(2) else {}

    for i in range(n):
        for j in range(n):
            try:
                p = H.coords(alg.mul(H.reps[i], H.reps[j]))
            except StructuralError as exc:
                H.issues.append({"check": "product-closed", "pair": [i, j], "detail": str(exc)})
                p = {}
            if p:
                H.product[(i, j)] = p
            try:
                b = H.coords(lam2(H.reps[i], H.reps[j]))
            except StructuralError as exc:
                H.issues.append({"check": "bracket-closed", "pair": [i, j], "detail": str(exc)})
                b = {}
            if b:
                H.bracket[(i, j)] = b

    # representative independence: exact perturbations give exact results
    for i in range(n):
        for w in by_deg.get(H.degrees[i] - 1, []):
            dw = img[w]
            if not dw:
                continue
            for j in range(n):
                for label, val in (("bracket-left", lam2(dw, H.reps[j])),
                                   ("bracket-right", lam2(H.reps[j], dw)),
                                   ("product-left", alg.mul(dw, H.reps[j]))):
                    if val and not H.is_exact(val):
                        H.issues.append({"check": label, "rep": j, "exact": alg.name(w)})
    return H


def _bil(table, x, y):
    acc = {}
    for i, a in x.items():
        for j, b in y.items():
            v = table.get((i, j))
            if v:
                vadd(acc, v, a * b)
    return acc


def poisson_axioms_on_cohomology(H, k=None):
    """Check of the degree k Poisson axioms on the cohomology basis; returns a
    list of failures."""
    k = H.k if k is None else k
    n = H.dim
    deg = H.degrees
    e = [{i: ONE} for i in range(n)]
    br = lambda x, y: _bil(H.bracket, x, y)
    pr = lambda x, y: _bil(H.product, x, y)
    sg = lambda t: Fraction(-1 if t % 2 else 1)
    out = []
    for a in range(n):
        for b in range(n):
            ab = br(e[a], e[b])
            v = vadd(dict(ab), br(e[b], e[a]), sg((deg[a] + k) * (deg[b] + k)))
            if v:
                out.append({"check": "antisymmetry", "basis": [a, b], "defect": v})
            v = vadd(pr(e[a], e[b]), pr(e[b], e[a]), -sg(deg[a] * deg[b]))
            if v:
                out.append({"check": "commutativity", "basis": [a, b], "defect": v})
            for c in range(n):
                lhs = br(e[a], br(e[b], e[c]))
                vadd(lhs, br(br(e[a], e[b]), e[c]), -ONE)
                vadd(lhs, br(e[b], br(e[a], e[c])), -sg((deg[a] + k) * (deg[b] + k)))
                if lhs:
                    out.append({"check": "jacobi", "basis": [a, b, c], "defect": lhs})
                lhs = br(e[a], pr(e[b], e[c]))
                vadd(lhs, pr(br(e[a], e[b]), e[c]), -ONE)
                vadd(lhs, pr(e[b], br(e[a], e[c])), -sg((deg[a] + k) * deg[b]))
                if lhs:
                    out.append({"check": "biderivation", "basis": [a, b, c], "defect": lhs})
                lhs = pr(e[a], pr(e[b], e[c]))
                vadd(lhs, pr(pr(e[a], e[b]), e[c]), -ONE)
                if lhs:
                    out.append({"check": "associativity", "basis": [a, b, c], "defect": lhs})
    return out
