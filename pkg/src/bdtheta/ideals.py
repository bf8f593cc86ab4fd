"""Ideals of R_n = (Z/p^a)[t]/(t^(p^n) - 1) and of its quotients R_n/(omega).

An ideal is stored as the Howell basis of its underlying Z/p^a-submodule of
coefficient space, so equality of ideals is equality of bases and membership
is a reduction.  ``omega`` must be a product of distinct cyclotomic factors
Phi_{p^k}(t), 0 <= k <= n, which makes reduction modulo omega canonical.
"""

from dataclasses import dataclass

from . import polys
from .errors import NonCanonicalModulus, RingMismatch
from .howell import HowellBasis, empty_basis, howell


def symmetric_lift(coeffs, modulus):
    half = modulus // 2
    return [c - modulus if c > half else c for c in coeffs]


def cyclotomic_factors(omega, p, n):
    """Exponents k with Phi_{p^k} | omega, or raise NonCanonicalModulus."""
    rest = polys.trim(omega)
    if not rest or rest[-1] != 1:
        raise NonCanonicalModulus("omega must be a monic polynomial")
    found = []
    for k in range(n + 1):
        q, r = polys.divmod_monic(rest, polys.cyclotomic_ppower(p, k))
        if not r:
            found.append(k)
            rest = q
    if rest != [1]:
        raise NonCanonicalModulus(
            "omega must be a product of distinct Phi_{p^k}(t) with 0 <= k <= n"
        )
    return tuple(found)


class QuotientRing:
    """(Z/p^a)[t]/(t^N - 1) with N = p^n, optionally further divided by omega.

    Elements are tuples of length ``dim`` with entries in [0, p^a).
    """

    def __init__(self, p, a, n, omega=None):
        self.p, self.a, self.n = p, a, n
        self.N = p**n
        self.modulus = p**a
        if omega is None:
            self.omega = None
            self.factors = tuple(range(n + 1))
            self.dim = self.N
        else:
            omega = polys.trim(omega)
            self.factors = cyclotomic_factors(omega, p, n)
            self.omega = tuple(omega)
            self.dim = len(omega) - 1

    @property
    def is_cyclic(self):
        return self.omega is None

    def descriptor(self):
        return {
            "p": self.p,
            "a": self.a,
            "n": self.n,
            "omega": None if self.omega is None else list(self.omega),
        }

    @classmethod
    def from_descriptor(cls, record):
        return cls(record["p"], record["a"], record["n"], record.get("omega"))

    def _key(self):
        return (self.p, self.a, self.n, self.omega)

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        tail = "" if self.omega is None else f"/omega{list(self.factors)}"
        return f"R(p={self.p}, a={self.a}, n={self.n}){tail}"

    def with_precision(self, a):
        return QuotientRing(self.p, a, self.n, self.omega)

    def quotient(self, omega):
        if not self.is_cyclic:
            raise RingMismatch("base change is defined from the full group ring")
        return QuotientRing(self.p, self.a, self.n, omega)

    def reduce(self, f):
        """Canonical representative of an integer polynomial."""
        M = self.modulus
        f = polys.reduce_cyclic(list(f), self.N, M)
        if self.omega is not None:
            if self.dim == 0:
                return ()
            _, f = polys.divmod_monic(f, list(self.omega), M)
        out = [c % M for c in f] + [0] * (self.dim - len(f))
        return tuple(out)

    def zero(self):
        return (0,) * self.dim

    def one(self):
        return self.reduce([1])

    def t_power(self, i):
        return self.reduce(polys.monomial(i % self.N))

    def add(self, x, y):
        M = self.modulus
        return tuple((a + b) % M for a, b in zip(x, y))

    def sub(self, x, y):
        M = self.modulus
        return tuple((a - b) % M for a, b in zip(x, y))

    def neg(self, x):
        M = self.modulus
        return tuple(-a % M for a in x)

    def scale(self, c, x):
        M = self.modulus
        return tuple(c * a % M for a in x)

    def mul(self, x, y):
        if self.dim == 0:
            return ()
        if self.is_cyclic:
            return tuple(polys.cyclic_mul(list(x), list(y), self.N, self.modulus))
        return self.reduce(polys.mul_nonneg(list(x), list(y), self.modulus))

    def times_t(self, x):
        if self.is_cyclic:
            return (x[-1],) + tuple(x[:-1])
        return self.reduce([0] + list(x))

    def is_zero(self, x):
        return not any(x)

    def involution(self, x):
        if not self.is_cyclic:
            raise RingMismatch("the involution is only used on the full group ring")
        N = self.N
        return tuple(x[-i % N] for i in range(N))

    def elements(self):
        """Every element; only for the tiny rings used by brute-force oracles."""
        from itertools import product

        return (tuple(v) for v in product(range(self.modulus), repeat=self.dim))


@dataclass(frozen=True, eq=False)
class IdealBasis:
    ring: QuotientRing
    basis: HowellBasis

    def __post_init__(self):
        for row in self.basis.rows:
            if not self.basis.contains(self.ring.times_t(row)):
                raise ValueError("submodule is not stable under multiplication by t")

    def __eq__(self, other):
        if not isinstance(other, IdealBasis):
            return NotImplemented
        return self.ring == other.ring and self.basis == other.basis

    def __hash__(self):
        return hash((self.ring, self.basis))

    @property
    def rows(self):
        return self.basis.rows

    def cardinality(self):
        return self.basis.cardinality()

    def is_zero(self):
        return len(self.basis) == 0

    def is_unit(self):
        return self.basis.contains(self.ring.one())

    def to_json(self):
        return {
            "ring": self.ring.descriptor(),
            "rows": [list(r) for r in self.basis.rows],
            "pivots": [list(pv) for pv in self.basis.pivots],
        }

    def __repr__(self):
        return f"Ideal({self.ring!r}, |I|={self.cardinality()}, rows={len(self.basis)})"


def _as_vector(ring, x):
    if hasattr(x, "to_ints"):
        x = x.to_ints()
    x = tuple(x)
    if len(x) != ring.dim:
        x = ring.reduce(x)
    return tuple(c % ring.modulus for c in x)


def _check_same(*ideals):
    ring = ideals[0].ring
    for other in ideals[1:]:
        if other.ring != ring:
            raise RingMismatch(f"{ring!r} vs {other.ring!r}")
    return ring


def from_rows(ring, rows):
    return IdealBasis(ring, howell(list(rows), ring.p, ring.a, ring.dim))


def zero_ideal(ring):
    return IdealBasis(ring, empty_basis(ring.p, ring.a, ring.dim))


def unit_ideal(ring):
    return ideal_from_generators(ring, [ring.one()])


def ideal_from_generators(ring, gens):
    """Ideal generated by ``gens``: the Z/p^a-span of t^i * g."""
    rows = []
    for g in gens:
        v = _as_vector(ring, g)
        for _ in range(ring.dim):
            if any(v):
                rows.append(v)
            v = ring.times_t(v)
    if not rows:
        return zero_ideal(ring)
    return from_rows(ring, rows)


def contains(ideal, x):
    return ideal.basis.contains(_as_vector(ideal.ring, x))


def membership_trail(ideal, x):
    """(is_member, trail) where trail lists (basis row index, multiplier)."""
    remainder, trail = ideal.basis.reduce(_as_vector(ideal.ring, x))
    return not any(remainder), trail


def is_subset(I, J):
    _check_same(I, J)
    return J.basis.contains_all(I.basis)


def ideal_sum(I, J):
    ring = _check_same(I, J)
    return from_rows(ring, list(I.rows) + list(J.rows))


def ideal_product(I, J):
    ring = _check_same(I, J)
    if I.is_zero() or J.is_zero():
        return zero_ideal(ring)
    rows = []
    for x in I.rows:
        for y in J.rows:
            z = ring.mul(x, y)
            if any(z):
                rows.append(z)
    return from_rows(ring, rows) if rows else zero_ideal(ring)


def ideal_power(I, r):
    result = unit_ideal(I.ring)
    for _ in range(r):
        result = ideal_product(result, I)
    return result


def base_change_quotient(I, omega):
    """Image (I + (omega))/(omega) of I in R_n/(omega)."""
    target = I.ring.quotient(omega)
    if target.dim == 0:
        return zero_ideal(target)
    rows = [target.reduce(r) for r in I.rows]
    rows = [r for r in rows if any(r)]
    return from_rows(target, rows) if rows else zero_ideal(target)
