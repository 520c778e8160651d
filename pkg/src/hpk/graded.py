"""Graded bookkeeping: Koszul signs, canonical symmetric words, sparse vectors,
multilinear maps stored on canonical words, and the decalage sign."""

from fractions import Fraction
from itertools import product as _cartesian

from .errors import ArgumentError

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x):
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ArgumentError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ArgumentError(f"not a rational: {x!r}") from exc
    raise ArgumentError(f"not a rational: {x!r}")


def frac_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- sparse vectors --------------------------------------------------------
# A vector is a plain dict key -> Fraction with no stored zeros.

def vadd(acc, vec, coef=ONE):
    """acc += coef * vec, in place. Returns acc."""
    if not coef:
        return acc
    for k, c in vec.items():
        v = acc.get(k, ZERO) + coef * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def vadd_term(acc, key, coef):
    if not coef:
        return acc
    v = acc.get(key, ZERO) + coef
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)
    return acc


def vscale(vec, coef):
    if not coef:
        return {}
    return {k: c * coef for k, c in vec.items()}


def vsub(a, b):
    return vadd(dict(a), b, -ONE)


def vclean(vec):
    return {k: Fraction(c) for k, c in vec.items() if c}


# -- signs -----------------------------------------------------------------

def koszul_sign(perm, degrees):
    """Sign e with v_{perm(1)} ... v_{perm(n)} = e * v_1 ... v_n in a graded
    symmetric algebra.  ``perm`` is 1-based."""
    perm = list(perm)
    n = len(perm)
    if len(degrees) != n:
        raise ArgumentError(f"permutation of length {n} but {len(degrees)} degrees")
    if sorted(perm) != list(range(1, n + 1)):
        raise ArgumentError(f"not a permutation of 1..{n}: {perm}")
    sign = 1
    for i in range(n):
        if not degrees[perm[i] - 1] % 2:
            continue
        for j in range(i + 1, n):
            if perm[j] < perm[i] and degrees[perm[j] - 1] % 2:
                sign = -sign
    return sign


def perm_sign(perm):
    """Ordinary sign of a 1-based permutation."""
    return koszul_sign(perm, [1] * len(perm))


def sort_with_sign(items, keyfn, parity):
    """Stable sort of ``items`` by ``keyfn``.  Returns (sorted, sign, repeat_odd)
    where sign is the Koszul sign for the parities ``parity(item)`` and
    repeat_odd is True when two equal items have odd parity."""
    items = list(items)
    n = len(items)
    keys = [keyfn(x) for x in items]
    odd = [parity(x) % 2 for x in items]
    sign = 1
    for i in range(n):
        if not odd[i]:
            continue
        ki = keys[i]
        for j in range(i + 1, n):
            if odd[j] and keys[j] < ki:
                sign = -sign
    order = sorted(range(n), key=lambda i: keys[i])
    out = [items[i] for i in order]
    repeat = any(keys[order[i]] == keys[order[i + 1]] and odd[order[i]] for i in range(n - 1))
    return out, sign, repeat


# -- spaces ----------------------------------------------------------------

class GradedSpace:
    """Finite ordered basis of named, integer-graded elements.  Keys are the
    integer positions; basis order is the canonical sort order."""

    def __init__(self, elements, weights=None):
        names, degrees = [], []
        for el in elements:
            if isinstance(el, dict):
                names.append(str(el["name"]))
                degrees.append(int(el["degree"]))
            else:
                n, d = el
                names.append(str(n))
                degrees.append(int(d))
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ArgumentError(f"duplicate basis names: {dup}")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.weights = tuple(int(w) for w in weights) if weights is not None else None
        if self.weights is not None and len(self.weights) != len(names):
            raise ArgumentError("weights length does not match basis")
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.names == other.names
                and self.degrees == other.degrees and self.weights == other.weights)

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        return f"GradedSpace({list(zip(self.names, self.degrees))})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ArgumentError(f"unknown basis element {name!r}") from None

    def degree(self, key):
        return self.degrees[key]

    def weight(self, key):
        return self.weights[key] if self.weights is not None else 0

    def sort_key(self, key):
        return key

    def basis(self):
        return list(range(len(self.names)))

    def name(self, key):
        return self.names[key]

    def check_key(self, key):
        if not isinstance(key, int) or not 0 <= key < len(self.names):
            raise ArgumentError(f"invalid basis index {key!r}")

    def to_json(self):
        els = [{"name": n, "degree": d} for n, d in zip(self.names, self.degrees)]
        if self.weights is not None:
            for el, w in zip(els, self.weights):
                el["weight"] = w
        return {"elements": els}

    @classmethod
    def from_json(cls, doc):
        els = doc.get("elements", [])
        weights = None
        if els and all("weight" in e for e in els):
            weights = [e["weight"] for e in els]
        return cls(els, weights)


class SymWord:
    """Canonical monomial of a graded symmetric algebra: sorted factors plus the
    sign of the sorting permutation."""

    __slots__ = ("factors", "sign", "zero")

    def __init__(self, factors, sign=1, zero=False):
        self.factors = tuple(factors)
        self.sign = sign
        self.zero = zero

    def __repr__(self):
        return f"SymWord({self.factors}, sign={self.sign}, zero={self.zero})"

    def __eq__(self, other):
        return (isinstance(other, SymWord) and self.factors == other.factors
                and self.sign == other.sign and self.zero == other.zero)

    def __hash__(self):
        return hash((self.factors, self.sign, self.zero))


def canonicalize_word(word, space, shift=0):
    """Sort ``word`` into basis order.  Parities are taken in the shifted space
    space[shift], i.e. degree |a| - shift."""
    for k in word:
        space.check_key(k)
    out, sign, rep = sort_with_sign(word, space.sort_key, lambda a: space.degree(a) - shift)
    return SymWord(out, sign, rep)


# -- multilinear maps ------------------------------------------------------

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


class MultiMap:
    """n-ary map stored on canonical words only.

    ``shift`` j means inputs are read in V[j] (degree |a| - j).  A symmetric map
    is graded symmetric there; an antisymmetric one picks up an extra
    permutation sign.  ``degree`` is the unshifted degree |out| - sum |a_i|.
    """

    def __init__(self, space, arity, degree, symmetry, shift, entries=None, target=None):
        if arity < 1:
            raise ArgumentError("arity must be at least 1")
        if symmetry not in (SYMMETRIC, ANTISYMMETRIC):
            raise ArgumentError(f"bad symmetry {symmetry!r}")
        self.space = space
        self.target = target if target is not None else space
        self.arity = arity
        self.degree = degree
        self.symmetry = symmetry
        self.shift = shift
        self.entries = {}
        for word, vec in (entries or {}).items():
            self.set(word, vec)

    def _canon(self, word):
        if len(word) != self.arity:
            raise ArgumentError(f"expected {self.arity} inputs, got {len(word)}")
        for k in word:
            self.space.check_key(k)
        sp = self.space
        out, sign, rep = sort_with_sign(word, sp.sort_key, lambda a: sp.degree(a) - self.shift)
        if self.symmetry == ANTISYMMETRIC:
            # extra ordinary permutation sign; equal items vanish when shifted-even
            _, psign, _ = sort_with_sign(word, sp.sort_key, lambda a: 1)
            sign *= psign
            rep = any(out[i] == out[i + 1] and (sp.degree(out[i]) - self.shift) % 2 == 0
                      for i in range(len(out) - 1))
        return tuple(out), sign, rep

    def set(self, word, vec):
        """Store ``vec`` as the value on ``word`` (any order)."""
        canon, sign, zero = self._canon(tuple(word))
        vec = vclean(vec)
        if zero:
            if vec:
                raise ArgumentError(f"nonzero value on a vanishing word {word}")
            return
        din = sum(self.space.degree(a) for a in word)
        for k in vec:
            if self.target.degree(k) != din + self.degree:
                raise ArgumentError(
                    f"entry on {word} has output of degree {self.target.degree(k)}, "
                    f"expected {din + self.degree}")
        val = vscale(vec, sign)
        if val:
            self.entries[canon] = val
        else:
            self.entries.pop(canon, None)

    def __call__(self, *word):
        canon, sign, zero = self._canon(tuple(word))
        if zero:
            return {}
        return vscale(self.entries.get(canon, {}), sign)

    def words(self):
        return sorted(self.entries, key=lambda w: [self.space.sort_key(a) for a in w])

    def __eq__(self, other):
        return (isinstance(other, MultiMap) and self.arity == other.arity
                and self.degree == other.degree and self.symmetry == other.symmetry
                and self.shift == other.shift and self.entries == other.entries)


def decalage_exponent(degrees, k):
    n = len(degrees)
    return sum((n - i) * (a + k) for i, a in enumerate(degrees, start=1))


def decalage(lam, k):
    """Antisymmetric lambda_n on V[-k] -> symmetric q_n on V[1-k]."""
    if lam.symmetry != ANTISYMMETRIC or lam.shift != -k:
        raise ArgumentError("decalage expects an antisymmetric map with shift -k")
    out = MultiMap(lam.space, lam.arity, lam.degree, SYMMETRIC, 1 - k, target=lam.target)
    for word, vec in lam.entries.items():
        e = decalage_exponent([lam.space.degree(a) for a in word], k)
        out.set(word, vscale(vec, -1 if e % 2 else 1))
    return out


def inverse_decalage(q, k):
    if q.symmetry != SYMMETRIC or q.shift != 1 - k:
        raise ArgumentError("inverse_decalage expects a symmetric map with shift 1-k")
    out = MultiMap(q.space, q.arity, q.degree, ANTISYMMETRIC, -k, target=q.target)
    for word, vec in q.entries.items():
        e = decalage_exponent([q.space.degree(a) for a in word], k)
        out.set(word, vscale(vec, -1 if e % 2 else 1))
    return out


# -- multilinear expansion -------------------------------------------------

def expand_multilinear(fn, vectors):
    """sum over basis keys of prod(coefs) * fn(keys) for a tuple of vectors."""
    acc = {}
    if any(not v for v in vectors):
        return acc
    for combo in _cartesian(*[list(v.items()) for v in vectors]):
        coef = ONE
        keys = []
        for k, c in combo:
            coef *= c
            keys.append(k)
        vadd(acc, fn(tuple(keys)), coef)
    return acc
