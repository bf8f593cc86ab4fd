"""Finite-level Iwasawa algebras Lambda_n = R[Z/p^n].

The coefficient ring R is always presented as (Z/p^a)[x]/(f) for a monic f:

    zp        f = x            R = Z/p^a
    quad      f = x^2 - d      unramified quadratic ring, x = sqrt(d)
    ramified  f = x^2 + p      x = pi with pi^2 = -p
    cyclo     f = Phi_{p^j}    values of a character of conductor p^j

so an element of Lambda_n is a p^n x rank array of integers, and products
are one two-dimensional Kronecker-substitution multiplication followed by
folding t^(p^n) = 1 and reducing modulo f.  Ramified elements additionally
carry a global offset e and stand for pi^e times their integral array.
"""

from dataclasses import dataclass
from functools import lru_cache

from . import polys
from .errors import LevelMismatch, RingMismatch, ValuationWindowExceeded
from .howell import LinearSolver
from .ideals import IdealBasis, QuotientRing, contains, ideal_from_generators, ideal_product
from .padic import (
    CycloScalar,
    PadicScalar,
    PrecisionProfile,
    QuadScalar,
    RamifiedScalar,
    from_digits,
    smallest_nonresidue,
    to_digits,
    valuation,
)


class CoefficientRing:
    kind = None

    def __init__(self, profile, modpoly):
        self.profile = profile
        self.modpoly = tuple(modpoly)
        self.rank = len(modpoly) - 1
        M = profile.modulus
        # x^c mod f for rank <= c <= 2*rank - 2
        self._high_powers = []
        power = [0] * self.rank
        if self.rank:
            power = polys.monomial(self.rank - 1)
        for _ in range(max(self.rank - 1, 0)):
            _, power = polys.divmod_monic([0] + list(power), list(self.modpoly), M)
            self._high_powers.append(tuple(power) + (0,) * (self.rank - len(power)))

    @property
    def p(self):
        return self.profile.p

    @property
    def a(self):
        return self.profile.a

    allows_offset = False

    def params(self):
        return {}

    def descriptor(self):
        return {"kind": self.kind, **self.params()}

    def _key(self):
        return (self.kind, self.p, self.a, tuple(sorted(self.params().items())))

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        extra = "".join(f", {k}={v}" for k, v in self.params().items())
        return f"{self.kind}(p={self.p}, a={self.a}{extra})"

    def with_profile(self, profile):
        return ring_from_descriptor(self.descriptor(), profile)

    def reduce_slots(self, slots, modulus):
        """Reduce a length 2*rank-1 list of x-coefficients modulo f."""
        r = self.rank
        out = list(slots[:r])
        for c, coeff in enumerate(slots[r:]):
            if coeff:
                for i, h in enumerate(self._high_powers[c]):
                    out[i] += coeff * h
        return [v % modulus for v in out]

    def components(self, scalar):
        """(components, prec, offset) of a scalar of this ring (ints allowed)."""
        a = self.a
        if isinstance(scalar, int):
            return [scalar] + [0] * (self.rank - 1), a, 0
        if isinstance(scalar, PadicScalar):
            return [scalar.value] + [0] * (self.rank - 1), scalar.prec, 0
        raise RingMismatch(f"cannot use {type(scalar).__name__} as a {self.kind} coefficient")

    def scalar(self, comps, prec, e=0):
        return PadicScalar(self.profile, comps[0], prec)


class ZpRing(CoefficientRing):
    kind = "zp"

    def __init__(self, profile):
        super().__init__(profile, (0, 1))


class QuadRing(CoefficientRing):
    kind = "quad"

    def __init__(self, profile, d=None):
        self.d = smallest_nonresidue(profile.p) if d is None else d
        super().__init__(profile, (-self.d, 0, 1))

    def params(self):
        return {"d": self.d}

    def components(self, scalar):
        if isinstance(scalar, QuadScalar):
            if scalar.d != self.d:
                raise RingMismatch("quadratic scalar uses a different d")
            return [scalar.x.value, scalar.y.value], scalar.prec, 0
        return super().components(scalar)

    def scalar(self, comps, prec, e=0):
        return QuadScalar(
            PadicScalar(self.profile, comps[0], prec), PadicScalar(self.profile, comps[1], prec), self.d
        )


class RamifiedRing(CoefficientRing):
    kind = "ramified"
    allows_offset = True

    def __init__(self, profile):
        super().__init__(profile, (profile.p, 0, 1))

    def components(self, scalar):
        if isinstance(scalar, RamifiedScalar):
            return [scalar.u.value, scalar.v.value], scalar.prec, scalar.e
        return super().components(scalar)

    def scalar(self, comps, prec, e=0):
        return RamifiedScalar(
            PadicScalar(self.profile, comps[0], prec), PadicScalar(self.profile, comps[1], prec), e
        )


class CycloRing(CoefficientRing):
    kind = "cyclo"

    def __init__(self, profile, level):
        self.level = level
        super().__init__(profile, polys.cyclotomic_ppower(profile.p, level))

    def params(self):
        return {"level": self.level}

    def components(self, scalar):
        if isinstance(scalar, CycloScalar):
            if scalar.level != self.level:
                raise RingMismatch("cyclotomic scalar at a different level")
            return [c.value for c in scalar.coeffs], scalar.prec, 0
        return super().components(scalar)

    def scalar(self, comps, prec, e=0):
        return CycloScalar(self.profile, self.level, [PadicScalar(self.profile, c, prec) for c in comps])


RING_KINDS = {cls.kind: cls for cls in (ZpRing, QuadRing, RamifiedRing, CycloRing)}


def ring_from_descriptor(record, profile):
    kind = record["kind"]
    if kind not in RING_KINDS:
        raise ValueError(f"unknown coefficient ring {kind!r}")
    params = {k: v for k, v in record.items() if k != "kind"}
    return RING_KINDS[kind](profile, **params)


def _pack_mul(A, B, N, r, ring, modulus):
    """Product of two flat (N*r) arrays in R[t]/(t^N - 1)."""
    if r == 1:
        return polys.cyclic_mul(list(A), list(B), N, modulus)
    s = 2 * r - 1

    def spread(X):
        out = [0] * (N * s)
        for i in range(N):
            out[i * s : i * s + r] = X[i * r : (i + 1) * r]
        return out

    prod = polys.mul_nonneg(spread(A), spread(B), modulus)
    folded = [[0] * s for _ in range(N)]
    for idx, c in enumerate(prod):
        if c:
            i, j = divmod(idx, s)
            folded[i % N][j] += c
    out = []
    for slots in folded:
        out.extend(ring.reduce_slots(slots, modulus))
    return out


def _min_valuation(values, p, default):
    v = default
    for c in values:
        if c:
            v = min(v, valuation(c, p))
    return v


class GroupRingElement:
    """Element of R[Z/p^n], sum over i of c_i * gamma^i, known modulo p^prec.

    ``coeffs`` is flat: coefficient i, x-component c sits at index i*rank + c.
    Ramified elements stand for pi^e times the stored array.
    """

    __slots__ = ("ring", "n", "coeffs", "prec", "e")

    def __init__(self, ring, n, coeffs, prec=None, e=0):
        N = ring.p**n
        if prec is None:
            prec = ring.a
        if not 0 < prec <= ring.a:
            raise ValueError(f"precision {prec} outside 1..{ring.a}")
        if len(coeffs) != N * ring.rank:
            raise ValueError(f"expected {N * ring.rank} coefficient slots, got {len(coeffs)}")
        if e and not ring.allows_offset:
            raise RingMismatch(f"{ring.kind} coefficients carry no pi-offset")
        if abs(e) > ring.profile.valuation_window:
            raise ValuationWindowExceeded(f"pi-offset {e} outside +-{ring.profile.valuation_window}")
        mod = ring.p**prec
        self.ring = ring
        self.n = n
        self.coeffs = tuple(c % mod for c in coeffs)
        self.prec = prec
        self.e = e

    # construction helpers

    @classmethod
    def of(cls, ring, n, values, prec=None, e=0):
        """Build from a list of per-exponent values (ints, scalars or component lists)."""
        N = ring.p**n
        if len(values) > N:
            raise LevelMismatch(f"{len(values)} coefficients do not fit level {n}")
        flat = []
        precs = [] if prec is None else [prec]
        offsets = set()
        for v in list(values) + [0] * (N - len(values)):
            if isinstance(v, (list, tuple)):
                comps = list(v) + [0] * (ring.rank - len(v))
                flat.extend(comps)
                continue
            comps, pr, off = ring.components(v)
            flat.extend(comps)
            if pr < ring.a:
                precs.append(pr)
            if off:
                offsets.add(off)
        if offsets:
            if len(offsets) > 1 or e:
                raise ValueError("mixed pi-offsets; align scalars before building an element")
            e = offsets.pop()
        return cls(ring, n, flat, min(precs) if precs else None, e)

    @classmethod
    def from_poly(cls, ring, n, poly, prec=None):
        """The image of an integer polynomial in gamma."""
        N = ring.p**n
        folded = polys.reduce_cyclic(list(poly), N)
        return cls.of(ring, n, folded, prec)

    @classmethod
    def zero(cls, ring, n):
        return cls(ring, n, [0] * (ring.p**n * ring.rank))

    @classmethod
    def one(cls, ring, n):
        return cls.of(ring, n, [1])

    @classmethod
    def gamma(cls, ring, n, power=1):
        return cls.from_poly(ring, n, polys.monomial(power % ring.p**n))

    # basic accessors

    @property
    def N(self):
        return self.ring.p**self.n

    @property
    def p(self):
        return self.ring.p

    def coefficient(self, i):
        r = self.ring.rank
        return self.ring.scalar(self.coeffs[i * r : (i + 1) * r], self.prec, self.e)

    def component_array(self, c):
        """The c-th x-component of every coefficient, as a length-N list."""
        r = self.ring.rank
        return list(self.coeffs[c::r])

    def to_ints(self):
        if self.ring.rank != 1 or self.e:
            raise RingMismatch("integer view needs Z/p^a coefficients without offset")
        return self.coeffs

    def valuation(self):
        """Minimum p-adic valuation of the stored array (prec when zero)."""
        return _min_valuation(self.coeffs, self.p, self.prec)

    def is_zero(self):
        return not any(self.coeffs)

    def with_precision(self, prec):
        if prec > self.prec:
            raise ValueError("cannot raise the certified precision")
        return GroupRingElement(self.ring, self.n, self.coeffs, prec, self.e)

    def change_ring(self, target):
        """Image under the inclusion Z/p^a -> target (only from zp coefficients)."""
        if target == self.ring:
            return self
        if self.ring.kind != "zp" or (target.p, target.a) != (self.ring.p, self.ring.a):
            raise RingMismatch(f"no coercion from {self.ring!r} to {target!r}")
        flat = []
        for c in self.coeffs:
            flat.extend([c] + [0] * (target.rank - 1))
        return GroupRingElement(target, self.n, flat, self.prec)

    # arithmetic

    def _compatible(self, other):
        if isinstance(other, GroupRingElement):
            if other.n != self.n:
                raise LevelMismatch(f"levels {self.n} and {other.n}")
            if other.ring != self.ring:
                if other.ring.kind == "zp":
                    other = other.change_ring(self.ring)
                else:
                    raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, PadicScalar, QuadScalar, RamifiedScalar, CycloScalar)):
            return GroupRingElement.of(self.ring, self.n, [other])
        return NotImplemented

    def times_pi(self, k=1):
        """Multiply the stored array by pi^k (ramified only); the value changes."""
        if self.ring.kind != "ramified":
            raise RingMismatch("pi multiplication needs ramified coefficients")
        p = self.p
        c = list(self.coeffs)
        for _ in range(k):
            c = [x for u, v in zip(c[0::2], c[1::2]) for x in (-p * v, u)]
        prec = min(self.prec + k // 2, self.ring.a)
        return GroupRingElement(self.ring, self.n, c, prec, self.e)

    def shift(self, k):
        """pi^k times self, by moving the offset only."""
        return GroupRingElement(self.ring, self.n, self.coeffs, self.prec, self.e + k)

    def aligned(self, e):
        if e > self.e:
            raise ValueError("can only lower the offset")
        if e == self.e:
            return self
        moved = self.times_pi(self.e - e)
        return GroupRingElement(self.ring, self.n, moved.coeffs, moved.prec, e)

    def _align_pair(self, other):
        e = min(self.e, other.e)
        return self.aligned(e), other.aligned(e), e

    def __add__(self, other):
        other = self._compatible(other)
        if other is NotImplemented:
            return other
        x, y, e = self._align_pair(other)
        prec = min(x.prec, y.prec)
        return GroupRingElement(self.ring, self.n, [s + t for s, t in zip(x.coeffs, y.coeffs)], prec, e)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.ring, self.n, [-c for c in self.coeffs], self.prec, self.e)

    def __sub__(self, other):
        other = self._compatible(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._compatible(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._compatible(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        prec = min(self.prec + other.valuation(), other.prec + self.valuation(), ring.a)
        prod = _pack_mul(self.coeffs, other.coeffs, self.N, ring.rank, ring, ring.p**ring.a)
        return GroupRingElement(ring, self.n, prod, prec, self.e + other.e)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not defined in the group ring")
        result = GroupRingElement.one(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._compatible(other)
        except (LevelMismatch, RingMismatch):
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # structure maps

    def involution(self):
        """gamma -> gamma^(-1)."""
        r, N = self.ring.rank, self.N
        out = []
        for i in range(N):
            j = -i % N
            out.extend(self.coeffs[j * r : (j + 1) * r])
        return GroupRingElement(self.ring, self.n, out, self.prec, self.e)

    def project(self):
        """Natural projection to level n-1 (sum over fibers of exponents mod p^(n-1))."""
        if self.n < 1:
            raise LevelMismatch("cannot project below level 0")
        r = self.ring.rank
        M = self.N // self.p
        out = [0] * (M * r)
        for i in range(self.N):
            base = (i % M) * r
            for c in range(r):
                out[base + c] += self.coeffs[i * r + c]
        return GroupRingElement(self.ring, self.n - 1, out, self.prec, self.e)

    def lift(self):
        """Exponent-wise lift to level n+1 (gamma^i -> gamma^i, 0 <= i < p^n)."""
        r = self.ring.rank
        pad = [0] * ((self.p - 1) * self.N * r)
        return GroupRingElement(self.ring, self.n + 1, list(self.coeffs) + pad, self.prec, self.e)

    def norm_lift(self):
        """Phi_{p^(n+1)}(gamma) times any lift: the array repeated p times."""
        return GroupRingElement(self.ring, self.n + 1, list(self.coeffs) * self.p, self.prec, self.e)

    # output

    def to_json(self):
        p, r = self.p, self.ring.rank
        coeffs = []
        for i in range(self.N):
            digits = [to_digits(c, p, self.prec) for c in self.coeffs[i * r : (i + 1) * r]]
            coeffs.append(digits[0] if r == 1 else digits)
        record = {
            "p": p,
            "n": self.n,
            "a": self.ring.a,
            "prec": self.prec,
            "ring": self.ring.descriptor(),
            "coeffs": coeffs,
        }
        if self.ring.allows_offset:
            record["offset"] = self.e
        return record

    @classmethod
    def from_json(cls, record, profile=None):
        profile = profile or PrecisionProfile(record["p"], record["a"])
        ring = ring_from_descriptor(record["ring"], profile)
        flat = []
        for entry in record["coeffs"]:
            comps = [entry] if ring.rank == 1 else entry
            flat.extend(from_digits(ds, profile.p) for ds in comps)
        return cls(ring, record["n"], flat, record["prec"], record.get("offset", 0))

    def poly_string(self):
        """Human-readable polynomial in gamma with symmetric residues."""
        mod = self.p**self.prec
        half = mod // 2
        r = self.ring.rank
        xname = {"quad": "s", "ramified": "pi", "cyclo": "x"}.get(self.ring.kind, "")
        terms = []
        for i in range(self.N):
            parts = []
            for c, v in enumerate(self.coeffs[i * r : (i + 1) * r]):
                if v:
                    v = v - mod if v > half else v
                    parts.append(str(v) if c == 0 else f"{v}*{xname}" + (f"^{c}" if c > 1 else ""))
            if not parts:
                continue
            coeff = parts[0] if len(parts) == 1 else "(" + " + ".join(parts) + ")"
            mono = "" if i == 0 else ("γ" if i == 1 else f"γ^{i}")
            if mono:
                terms.append(mono if coeff == "1" else f"{coeff}*{mono}")
            else:
                terms.append(coeff)
        body = " + ".join(terms) if terms else "0"
        if self.e:
            body = f"pi^{self.e}*({body})"
        return f"{body} + O(p^{self.prec})"

    def __repr__(self):
        return f"Λ[{self.n}]({self.poly_string()})"


# distinguished elements


def xi_poly(p, k):
    return polys.cyclotomic_ppower(p, k)


def xi(ring, k, n):
    """Phi_{p^k}(gamma) at level n."""
    if not 1 <= k <= n:
        raise LevelMismatch(f"xi_{k} is defined at levels n >= {k} (k >= 1), got n={n}")
    return GroupRingElement.from_poly(ring, n, xi_poly(ring.p, k))


def omega_poly(p, sign, n, tilde=False):
    """omega_n^sign (or its tilde version) as an exact integer polynomial in t."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    parity = 0 if sign == "+" else 1
    f = [1]
    for k in range(1, n + 1):
        if k % 2 == parity:
            f = polys.mul(f, xi_poly(p, k))
    if sign == "-" and not tilde:
        f = polys.mul([-1, 1], f)
    return f


@dataclass(frozen=True)
class OmegaElement:
    sign: str
    n: int
    tilde: bool
    element: GroupRingElement

    @property
    def poly(self):
        return omega_poly(self.element.p, self.sign, self.n, self.tilde)


def omega(ring, sign, n, level=None, tilde=False):
    """omega_n^sign embedded at ``level`` (default n)."""
    level = n if level is None else level
    if level < n:
        raise LevelMismatch(f"omega_{n} needs level >= {n}")
    elem = GroupRingElement.from_poly(ring, level, omega_poly(ring.p, sign, n, tilde))
    return OmegaElement(sign, n, tilde, elem)


def eval_character(A, j):
    """gamma -> x in (Z/p^a)[x]/Phi_{p^j}(x); j = 0 is the augmentation."""
    if not 0 <= j <= A.n:
        raise LevelMismatch(f"character conductor p^{j} exceeds level {A.n}")
    ints = A.to_ints()
    folded = polys.reduce_cyclic(list(ints), A.p**j)
    profile = A.ring.profile
    return CycloScalar(profile, j, [PadicScalar(profile, c, A.prec) for c in folded])


# exact division


@dataclass(frozen=True)
class Quotient:
    """omega * q = target, with q unique modulo ``annihilator``."""

    q: GroupRingElement
    annihilator: IdealBasis

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoSolution:
    reason: str
    component: int = 0

    def __bool__(self):
        return False

    def to_json(self):
        return {"verdict": "no_solution", "reason": self.reason, "component": self.component}


@lru_cache(maxsize=64)
def _solver(p, prec, n, omega_ints):
    N = p**n
    ring = QuotientRing(p, prec, n)
    rows = []
    row = tuple(c % p**prec for c in omega_ints)
    for _ in range(N):
        rows.append(row)
        row = ring.times_t(row)
    return LinearSolver(rows, p, prec)


def solve_multiplication(omega_elem, target):
    """Solve omega * q = target exactly at the target's precision.

    ``omega_elem`` must have Z/p^a coefficients; the target may live over any
    coefficient ring, which is then solved one x-component at a time.
    """
    if isinstance(omega_elem, OmegaElement):
        omega_elem = omega_elem.element
    if omega_elem.n != target.n:
        raise LevelMismatch(f"levels {omega_elem.n} and {target.n}")
    if omega_elem.ring.kind != "zp" or omega_elem.e:
        raise RingMismatch("the divisor must have Z/p^a coefficients")
    if (omega_elem.p, omega_elem.ring.a) != (target.p, target.ring.a):
        raise RingMismatch("divisor and target use different precision profiles")
    p, n = target.p, target.n
    prec = min(target.prec, omega_elem.prec)
    mod = p**prec
    solver = _solver(p, prec, n, tuple(c % mod for c in omega_elem.coeffs))
    r = target.ring.rank
    pieces = []
    for c in range(r):
        x = solver.solve([v % mod for v in target.component_array(c)])
        if x is None:
            return NoSolution(f"omega does not divide the target modulo p^{prec}", c)
        pieces.append(x)
    flat = [pieces[c][i] for i in range(p**n) for c in range(r)]
    q = GroupRingElement(target.ring, n, flat, prec, target.e)
    ann = IdealBasis(QuotientRing(p, prec, n), solver.kernel)
    return Quotient(q, ann)


# orders of vanishing


@dataclass(frozen=True)
class AtLeastCap:
    cap: int

    def __repr__(self):
        return f">={self.cap}"

    def to_json(self):
        return {"at_least": self.cap}


def augmentation_ideal(p, a, n, j):
    """Kernel of the conductor-p^j character on (Z/p^a)[Z/p^n]: the ideal (Phi_{p^j})."""
    ring = QuotientRing(p, a, n)
    return ideal_from_generators(ring, [ring.reduce(polys.cyclotomic_ppower(p, j))])


def augmentation_order(A, j, cap=8):
    """Largest r <= cap with A in I_chi^r, or AtLeastCap(cap) when A lies in I_chi^cap."""
    if not 0 <= j <= A.n:
        raise LevelMismatch(f"character conductor p^{j} exceeds level {A.n}")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    x = A.to_ints()
    I = augmentation_ideal(A.p, A.prec, A.n, j)
    power = I
    for r in range(1, cap + 1):
        if not contains(power, x):
            return r - 1
        if r < cap:
            power = ideal_product(power, I)
    return AtLeastCap(cap)
