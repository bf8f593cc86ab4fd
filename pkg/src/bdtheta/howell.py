"""Howell normal form and linear solving over Z/p^a.

Z/p^a is a local chain ring: every non-zero entry is p^v times a unit, and
the ideals are exactly (p^v).  The Howell form of a row span is the unique
echelon basis whose pivots are powers of p, whose entries above each pivot are
reduced modulo it, and which is saturated: p^(a-v) times each pivot row (the
annihilator multiple) is already in the span of the rows below it.  Two
matrices span the same submodule iff their Howell forms agree row by row.
"""

from dataclasses import dataclass

import numpy as np

_INT64_SAFE = 2**62


def _dtype(modulus):
    return np.int64 if modulus * modulus < _INT64_SAFE else object


def _val(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def as_array(rows, ncols, modulus):
    dt = _dtype(modulus)
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=dt)
    arr = np.array([[int(c) % modulus for c in r] for r in rows], dtype=dt)
    if arr.shape[1] != ncols:
        raise ValueError(f"rows have {arr.shape[1]} columns, expected {ncols}")
    return arr


@dataclass(frozen=True)
class HowellBasis:
    """Canonical basis of a submodule of (Z/p^a)^ncols.

    ``rows`` is a tuple of int tuples; ``pivots`` holds (column, valuation)
    for each row.
    """

    p: int
    a: int
    ncols: int
    rows: tuple
    pivots: tuple

    @property
    def modulus(self):
        return self.p ** self.a

    def __len__(self):
        return len(self.rows)

    def cardinality(self):
        """Number of elements in the span: prod over pivots of p^(a - v)."""
        return self.p ** sum(self.a - v for _, v in self.pivots)

    def reduce(self, vector):
        """Reduce ``vector`` against the basis.

        Returns ``(remainder, trail)`` where ``trail`` lists (row index,
        multiplier) pairs with vector = sum(mult * row) + remainder.
        """
        N = self.modulus
        vec = [int(c) % N for c in vector]
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match the basis")
        trail = []
        for i, ((col, v), row) in enumerate(zip(self.pivots, self.rows)):
            x = vec[col]
            if x == 0:
                continue
            pv = self.p ** v
            if x % pv:
                continue
            q = x // pv
            trail.append((i, q))
            for j in range(col, self.ncols):
                if row[j]:
                    vec[j] = (vec[j] - q * row[j]) % N
        return vec, trail

    def contains(self, vector):
        remainder, _ = self.reduce(vector)
        return not any(remainder)

    def contains_all(self, other):
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, HowellBasis):
            return NotImplemented
        return (self.p, self.a, self.ncols, self.rows) == (other.p, other.a, other.ncols, other.rows)

    def __hash__(self):
        return hash((self.p, self.a, self.ncols, self.rows))

    def elements(self):
        """Enumerate the span; only sensible for tiny modules (used by tests and oracles)."""
        N = self.modulus
        seen = {tuple([0] * self.ncols)}
        for (_, v), row in zip(self.pivots, self.rows):
            order = self.p ** (self.a - v)
            new = set()
            for base in seen:
                for c in range(order):
                    new.add(tuple((b + c * r) % N for b, r in zip(base, row)))
            seen = new
        return seen


def howell(rows, p, a, ncols=None):
    """Howell normal form of the row span of ``rows`` over Z/p^a."""
    N = p**a
    if ncols is None:
        if len(rows) == 0:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    A = as_array(rows, ncols, N)
    A = A[np.any(A != 0, axis=1)] if len(A) else A
    pivots = []
    prow = 0
    for c in range(ncols):
        if prow >= len(A):
            break
        col = A[prow:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        best, bestv = None, a
        for i in nz:
            v = _val(int(col[i]), p)
            if v < bestv:
                best, bestv = int(i), v
                if v == 0:
                    break
        r = prow + best
        if r != prow:
            A[[prow, r]] = A[[r, prow]]
        x = int(A[prow, c])
        unit = x // p**bestv
        inv = pow(unit, -1, N)
        if inv != 1:
            A[prow] = (A[prow] * inv) % N
        pv = p**bestv
        below = np.nonzero(A[prow + 1 :, c])[0] + prow + 1
        if len(below):
            q = A[below, c] // pv
            A[below] = (A[below] - np.outer(q, A[prow]) % N) % N
        if bestv > 0:
            ann = (A[prow] * p ** (a - bestv)) % N
            if np.any(ann != 0):
                A = np.vstack([A, ann[None, :]])
        pivots.append((c, bestv))
        prow += 1
    A = A[:prow]
    # reduce entries above each pivot into [0, p^v)
    for i, (c, v) in enumerate(pivots):
        pv = p**v
        above = np.nonzero(A[:i, c] >= pv)[0] if i else []
        if len(above):
            q = A[above, c] // pv
            A[above] = (A[above] - np.outer(q, A[i]) % N) % N
    out_rows = tuple(tuple(int(x) for x in row) for row in A)
    return HowellBasis(p, a, ncols, out_rows, tuple(pivots))


def empty_basis(p, a, ncols):
    return HowellBasis(p, a, ncols, (), ())


def span_sum(b1, b2):
    return howell(list(b1.rows) + list(b2.rows), b1.p, b1.a, b1.ncols)


class LinearSolver:
    """Solve x * C = l over Z/p^a for a fixed matrix C (rows = images of basis vectors).

    Built once from the Howell form of [C | I]; rows with vanishing left block
    span the kernel {x : x C = 0}.
    """

    def __init__(self, C, p, a):
        self.p, self.a = p, a
        N = p**a
        self.nrows = len(C)
        self.ncols = len(C[0]) if C else 0
        aug = [
            [int(c) % N for c in row] + [1 if j == i else 0 for j in range(self.nrows)]
            for i, row in enumerate(C)
        ]
        self.basis = howell(aug, p, a, self.ncols + self.nrows)
        kernel_rows = [row[self.ncols :] for row in self.basis.rows if not any(row[: self.ncols])]
        self.kernel = howell(kernel_rows, p, a, self.nrows) if kernel_rows else empty_basis(p, a, self.nrows)

    def solve(self, target):
        """Return a canonical solution x (list) or None when x C = target has none."""
        N = self.p**self.a
        vec = [int(c) % N for c in target] + [0] * self.nrows
        remainder, _ = self.basis.reduce(vec)
        if any(remainder[: self.ncols]):
            return None
        return [(-c) % N for c in remainder[self.ncols :]]


def kernel_rows(images, p, a, relations=()):
    """Z/p^a-basis of {x : x * images in span(relations)} as a HowellBasis.

    ``images[i]`` is the image of the i-th basis vector; ``relations`` spans
    the submodule the image is taken modulo.
    """
    N = p**a
    nrows = len(images)
    ncols = len(images[0]) if images else (len(relations[0]) if relations else 0)
    aug = [
        [int(c) % N for c in row] + [1 if j == i else 0 for j in range(nrows)]
        for i, row in enumerate(images)
    ]
    aug += [[int(c) % N for c in rel] + [0] * nrows for rel in relations]
    H = howell(aug, p, a, ncols + nrows)
    ker = [row[ncols:] for row in H.rows if not any(row[:ncols])]
    return howell(ker, p, a, nrows) if ker else empty_basis(p, a, nrows)
