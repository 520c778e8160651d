"""Exact sparse linear algebra over the rationals.

Vectors are dicts key -> Fraction.  ``order`` maps a key to a sortable value;
pivots are always the first key in that order.
"""

from .graded import ONE, vadd, vscale


class Echelon:
    """Incrementally built reduced echelon basis with per-row tags.

    A tag is a vector over arbitrary labels recording which input combination
    produced the row; reducing a vector against the basis returns the
    remainder together with the accumulated tag.
    """

    def __init__(self, order):
        self.order = order
        self.rows = {}      # pivot -> (row, tag), row[pivot] == 1

    def __len__(self):
        return len(self.rows)

    def _pivot(self, vec):
        return min(vec, key=self.order)

    def reduce(self, vec, tag=None):
        vec = dict(vec)
        tag = dict(tag or {})
        changed = True
        while changed and vec:
            changed = False
            for p in sorted((k for k in vec if k in self.rows), key=self.order):
                c = vec.get(p)
                if not c:
                    continue
                row, rtag = self.rows[p]
                vadd(vec, row, -c)
                vadd(tag, rtag, -c)
                changed = True
        return vec, tag

    def add(self, vec, tag=None):
        """Insert ``vec``; returns the new pivot, or None when dependent."""
        vec, tag = self.reduce(vec, tag)
        if not vec:
            return None
        p = self._pivot(vec)
        inv = ONE / vec[p]
        vec = vscale(vec, inv)
        tag = vscale(tag, inv)
        # keep rows fully reduced
        for q, (row, rtag) in list(self.rows.items()):
            c = row.get(p)
            if c:
                row = vadd(dict(row), vec, -c)
                rtag = vadd(dict(rtag), tag, -c)
                self.rows[q] = (row, rtag)
        self.rows[p] = (vec, tag)
        return p


def rank(vectors, order=lambda k: k):
    e = Echelon(order)
    r = 0
    for v in vectors:
        if e.add(v) is not None:
            r += 1
    return r


def kernel(images, order=lambda k: k):
    """Basis of {c : sum_j c_j images[j] = 0} as dicts j -> coefficient,
    in order of the first dependent column."""
    e = Echelon(order)
    out = []
    for j, img in enumerate(images):
        rem, tag = e.reduce(img, {j: ONE})
        if not rem:
            out.append(tag)
        else:
            e.add(img, {j: ONE})
    return out


def solve(columns, rhs, order=lambda k: k):
    """Find x with sum_j x_j columns[j] = rhs.  Returns (x, nullity) or
    (None, nullity) when inconsistent."""
    e = Echelon(order)
    nullity = 0
    for j, col in enumerate(columns):
        if e.add(col, {j: ONE}) is None:
            nullity += 1
    rem, tag = e.reduce(rhs)
    if rem:
        return None, nullity
    return {j: -c for j, c in tag.items() if c}, nullity

