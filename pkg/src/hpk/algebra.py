"""Free graded-commutative algebras on finitely many generators and
multiderivations determined by their values on generators."""

import threading
from fractions import Fraction

from .errors import ArgumentError
from .graded import ONE, ZERO, GradedSpace, sort_with_sign, vadd, vadd_term, vscale

UNIT = ()


class FreeGCA:
    """Graded-commutative algebra freely generated by ``gens``.

    Basis keys are monomials: sorted tuples of generator indices, odd
    generators appearing at most once.  With ``weight_cap`` set, monomials of
    total weight above the cap are zero (a truncation ideal).  Generator
    weights default to ``gens.weights`` or 1.
    """

    def __init__(self, gens, weight_cap=None, weights=None):
        if not isinstance(gens, GradedSpace):
            gens = GradedSpace(gens)
        self.gens = gens
        if weights is None:
            weights = gens.weights if gens.weights is not None else [1] * len(gens)
        self.gen_weights = tuple(int(w) for w in weights)
        if len(self.gen_weights) != len(gens):
            raise ArgumentError("one weight per generator expected")
        self.weight_cap = weight_cap
        self._odd = tuple(d % 2 for d in gens.degrees)
        self._mul_cache = {}

    def __repr__(self):
        return f"FreeGCA({list(self.gens.names)}, weight_cap={self.weight_cap})"

    # keys
    def degree(self, mono):
        degs = self.gens.degrees
        return sum(degs[i] for i in mono)

    def weight(self, mono):
        w = self.gen_weights
        return sum(w[i] for i in mono)

    def sort_key(self, mono):
        return (len(mono), mono)

    def is_odd_gen(self, i):
        return self._odd[i]

    def check_key(self, mono):
        if not isinstance(mono, tuple):
            raise ArgumentError(f"monomial must be a tuple, got {mono!r}")
        n = len(self.gens)
        for a, b in zip(mono, mono[1:]):
            if b < a or (a == b and self._odd[a]):
                raise ArgumentError(f"not a canonical monomial: {mono}")
        for a in mono:
            if not isinstance(a, int) or not 0 <= a < n:
                raise ArgumentError(f"invalid generator index in {mono}")

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.gens.index(name_or_index)
        return (i,)

    def in_range(self, mono):
        return self.weight_cap is None or self.weight(mono) <= self.weight_cap

    # products
    def mul_mono(self, m1, m2):
        """(sign, monomial) for m1*m2, or None when it vanishes."""
        if not m1:
            return (1, m2) if self.in_range(m2) else None
        if not m2:
            return (1, m1) if self.in_range(m1) else None
        key = (m1, m2)
        hit = self._mul_cache.get(key, False)
        if hit is not False:
            return hit
        res = self._mul_mono(m1, m2)
        self._mul_cache[key] = res
        return res

    def _mul_mono(self, m1, m2):
        if self.weight_cap is not None and self.weight(m1) + self.weight(m2) > self.weight_cap:
            return None
        odd = self._odd
        # sign: odd b in m2 passing odd a in m1 with a > b
        sign = 1
        odd1 = [a for a in m1 if odd[a]]
        for b in m2:
            if not odd[b]:
                continue
            if b in odd1:
                return None
            if sum(1 for a in odd1 if a > b) % 2:
                sign = -sign
        return sign, tuple(sorted(m1 + m2))

    def mul(self, x, y):
        acc = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                r = self.mul_mono(m1, m2)
                if r is not None:
                    vadd_term(acc, r[1], c1 * c2 * r[0])
        return acc

    def mul_right_mono(self, x, m):
        acc = {}
        for m1, c1 in x.items():
            r = self.mul_mono(m1, m)
            if r is not None:
                vadd_term(acc, r[1], c1 * r[0])
        return acc

    def monomial(self, factors):
        """Ordered product of generator indices as an element."""
        acc = {UNIT: ONE}
        for i in factors:
            acc = self.mul_right_mono(acc, (i,))
        return acc

    def element(self, *names):
        return self.monomial([self.gens.index(n) for n in names])

    # enumeration
    def basis(self, max_len=None, max_weight=None):
        """All monomials, sorted by (length, tuple).  Requires the space to be
        finite under the given bounds."""
        cap = self.weight_cap
        if max_weight is not None:
            cap = max_weight if cap is None else min(cap, max_weight)
        n = len(self.gens)
        if max_len is None and cap is None and any(not o for o in self._odd):
            raise ArgumentError("infinite basis: give max_len or a weight cap")
        if cap is not None and max_len is None:
            if any(not o and w <= 0 for o, w in zip(self._odd, self.gen_weights)):
                raise ArgumentError("even generator of weight 0: give max_len")
        out = []

        def rec(i, mono, w):
            if i == n:
                out.append(tuple(mono))
                return
            rec(i + 1, mono, w)
            m = 1
            while True:
                if self._odd[i] and m > 1:
                    break
                if max_len is not None and len(mono) + m > max_len:
                    break
                nw = w + m * self.gen_weights[i]
                if cap is not None and nw > cap:
                    break
                rec(i + 1, mono + [i] * m, nw)
                m += 1

        rec(0, [], 0)
        out.sort(key=self.sort_key)
        return out

    # display
    def name(self, mono):
        if not mono:
            return "1"
        return " ".join(self.gens.names[i] for i in mono)

    def parse_monomial(self, text):
        text = text.strip()
        if text in ("", "1"):
            return ONE, UNIT
        el = self.element(*text.split())
        if not el:
            return ZERO, None
        (mono, c), = el.items()
        return c, mono


class MultiDerivation:
    """An ``arity``-ary map on a FreeGCA, graded symmetric after the shift
    (inputs read with degree |a| - shift) and a derivation in every slot.

    Stored on sorted generator tuples; values on arbitrary monomials follow
    from symmetry and the rule
        D(.., a a') = D(.., a) a' + (-1)^{|a||a'|} D(.., a') a.
    ``degree`` is the unshifted degree  |D(a_1..a_n)| - sum |a_i|.
    """

    def __init__(self, alg, arity, degree, shift, table=None, memo=True, target=None):
        if arity < 1:
            raise ArgumentError("multiderivations have arity >= 1")
        self.alg = alg
        self.target = target if target is not None else alg
        self.arity = arity
        self.degree = degree
        self.shift = shift
        self.table = {}
        self.memo_enabled = memo
        self._memo = {}
        self._lock = threading.Lock()
        for word, vec in (table or {}).items():
            self.set(word, vec)

    def copy(self, memo=None):
        other = MultiDerivation(self.alg, self.arity, self.degree, self.shift,
                                memo=self.memo_enabled if memo is None else memo,
                                target=self.target)
        other.table = {k: dict(v) for k, v in self.table.items()}
        return other

    def _gen_parity(self, i):
        return self.alg.gens.degrees[i] - self.shift

    def set(self, gens, vec, check_degree=True):
        """Set the value on a tuple of generator indices (any order)."""
        gens = tuple(gens)
        if len(gens) != self.arity:
            raise ArgumentError(f"expected {self.arity} generators, got {gens}")
        out, sign, rep = sort_with_sign(gens, lambda i: i, self._gen_parity)
        vec = {k: Fraction(c) for k, c in vec.items() if c}
        if rep:
            if vec:
                raise ArgumentError(f"nonzero value on vanishing generator word {gens}")
            return
        if check_degree:
            din = sum(self.alg.gens.degrees[i] for i in gens)
            for m in vec:
                if self.target.degree(m) != din + self.degree:
                    raise ArgumentError(
                        f"value on {gens} has degree {self.target.degree(m)}, "
                        f"expected {din + self.degree}")
        val = vscale(vec, sign)
        key = tuple(out)
        if val:
            self.table[key] = val
        else:
            self.table.pop(key, None)
        self._memo.clear()

    def on_generators(self, gens):
        out, sign, rep = sort_with_sign(gens, lambda i: i, self._gen_parity)
        if rep:
            return {}
        return vscale(self.table.get(tuple(out), {}), sign)

    def __call__(self, *words):
        if len(words) != self.arity:
            raise ArgumentError(f"expected {self.arity} arguments, got {len(words)}")
        for w in words:
            if not w:
                return {}
        alg = self.alg
        shift = self.shift
        out, sign, rep = sort_with_sign(words, alg.sort_key, lambda w: alg.degree(w) - shift)
        if rep:
            return {}
        key = tuple(out)
        if self.memo_enabled:
            hit = self._memo.get(key)
            if hit is None:
                hit = self._eval(key)
                with self._lock:
                    self._memo[key] = hit
        else:
            hit = self._eval(key)
        return vscale(hit, sign) if sign < 0 else hit

    def _eval(self, key):
        last = key[-1]
        if len(last) == 1:
            # sorted by length, so every slot is a generator
            return self.table.get(tuple(w[0] for w in key), {})
        others = key[:-1]
        g, rest = last[:1], last[1:]
        tgt = self.target
        a = self(*others, g)
        b = self(*others, rest)
        acc = tgt.mul_right_mono(a, rest) if a else {}
        if b:
            s = -1 if (alg_deg(self.alg, g) * alg_deg(self.alg, rest)) % 2 else 1
            vadd(acc, tgt.mul_right_mono(b, g), Fraction(s))
        return acc

    def apply(self, *vectors):
        """Multilinear extension to elements."""
        from .graded import expand_multilinear
        return expand_multilinear(lambda ws: self(*ws), vectors)

    def is_zero(self):
        return not self.table

    def __eq__(self, other):
        return (isinstance(other, MultiDerivation) and self.arity == other.arity
                and self.shift == other.shift and self.degree == other.degree
                and self.table == other.table)


def alg_deg(alg, mono):
    return alg.degree(mono)


def derivation(alg, degree, table, memo=True, target=None):
    """Derivation of the given degree from its values on generators.  ``table``
    maps generator index (or name) to an element."""
    d = MultiDerivation(alg, 1, degree, 0, memo=memo, target=target)
    for g, vec in table.items():
        i = g if isinstance(g, int) else alg.gens.index(g)
        d.set((i,), vec)
    return d


def apply_linear(fn, vec):
    """Extend a map on basis keys linearly."""
    acc = {}
    for k, c in vec.items():
        vadd(acc, fn(k), c)
    return acc


def commutator(d1, d2):
    """Graded commutator of two derivations, again a derivation."""
    alg = d1.alg
    s = -1 if (d1.degree * d2.degree) % 2 else 1
    table = {}
    for i in range(len(alg.gens)):
        g = (i,)
        v = apply_linear(lambda m: d1(m), d2(g))
        vadd(v, apply_linear(lambda m: d2(m), d1(g)), Fraction(-s))
        if v:
            table[i] = v
    return derivation(alg, d1.degree + d2.degree, table)

