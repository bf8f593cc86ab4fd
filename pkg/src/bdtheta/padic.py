"""Fixed-precision exact arithmetic over Z_p and its small extensions.

Four scalar kinds live here:

* :class:`PadicScalar` -- an element of Z_p known modulo p^k, k <= a.
* :class:`QuadScalar` -- x + y*sqrt(d) in the unramified quadratic extension,
  d the smallest positive quadratic non-residue mod p.
* :class:`RamifiedScalar` -- pi^e * (u + v*pi) with pi^2 = -p.
* :class:`CycloScalar` -- a polynomial modulo Phi_{p^j}(x), the home of
  character values zeta_{p^j}.

Every scalar records the number of certified p-adic digits.  Operations never
silently drop digits: division by p consumes precision and raises
:class:`~bdtheta.errors.PrecisionUnderflow` once nothing is left.
"""

from dataclasses import dataclass, field
from functools import cached_property

from . import polys
from .errors import (
    InsufficientGuard,
    NonUnitDivision,
    NonUnitResidue,
    PrecisionUnderflow,
    RingMismatch,
    ValuationWindowExceeded,
)


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def valuation(x, p):
    """p-adic valuation of a non-zero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def smallest_nonresidue(p):
    if p == 2:
        raise ValueError("no quadratic non-residue convention for p = 2")
    squares = {(i * i) % p for i in range(1, p)}
    for d in range(2, p):
        if d not in squares:
            return d
    raise ValueError(f"no non-residue mod {p}")


def to_digits(value, p, length):
    digits = []
    for _ in range(length):
        value, r = divmod(value, p)
        digits.append(r)
    return digits


def from_digits(digits, p):
    value = 0
    for d in reversed(digits):
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for p={p}")
        value = value * p + d
    return value


@dataclass(frozen=True)
class PrecisionProfile:
    """Working precision: coefficients live mod p^a, ``guard`` digits are
    reserved for logarithm and division-by-p steps.

    ``window`` bounds the pi-valuation offset of ramified scalars; 0 selects
    the default of 2*a.
    """

    p: int
    a: int
    guard: int = 0
    window: int = field(default=0, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.a < 1:
            raise ValueError("precision exponent a must be >= 1")
        if not 0 <= self.guard < self.a:
            raise ValueError("guard must satisfy 0 <= guard < a")

    @cached_property
    def modulus(self):
        return self.p ** self.a

    @property
    def depth_budget(self):
        return self.a - self.guard

    @property
    def valuation_window(self):
        return self.window or 2 * self.a

    def with_precision(self, a):
        return PrecisionProfile(self.p, a, min(self.guard, a - 1), self.window)


class PadicScalar:
    """An element of Z_p known modulo p^prec.

    The stored value is reduced modulo p^prec, so two scalars compare equal
    exactly when they carry the same certified digits.
    """

    __slots__ = ("profile", "value", "prec")
    kind = "zp"

    def __init__(self, profile, value, prec=None):
        if prec is None:
            prec = profile.a
        if not 0 < prec <= profile.a:
            raise PrecisionUnderflow(f"known precision {prec} outside 1..{profile.a}")
        self.profile = profile
        self.prec = prec
        self.value = value % (profile.p ** prec)

    # construction helpers
    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.profile != self.profile:
                raise RingMismatch("operands have different precision profiles")
            return other
        if isinstance(other, int):
            return PadicScalar(self.profile, other)
        return NotImplemented

    def valuation(self):
        """Valuation of the certified part; equals ``prec`` for a certified zero."""
        if self.value == 0:
            return self.prec
        return valuation(self.value, self.profile.p)

    def is_zero(self):
        return self.value == 0

    def is_unit(self):
        return self.value % self.profile.p != 0

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar(self.profile, self.value + other.value, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.profile, -self.value, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PadicScalar(self.profile, self.value - other.value, min(self.prec, other.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec + other.valuation(), other.prec + self.valuation(), self.profile.a)
        return PadicScalar(self.profile, self.value * other.value, prec)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = PadicScalar(self.profile, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if not self.is_unit():
            raise NonUnitDivision(f"{self.value} is not a unit mod {self.profile.p}")
        mod = self.profile.p ** self.prec
        return PadicScalar(self.profile, pow(self.value, -1, mod), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        inv = other.inverse()
        return PadicScalar(self.profile, self.value * inv.value, min(self.prec, other.prec))

    def divide_by_p(self, v=1):
        """Exact division by p^v; consumes v digits of certified precision."""
        if v == 0:
            return self
        if self.value % (self.profile.p ** v) != 0:
            raise NonUnitDivision(f"{self.value} is not divisible by {self.profile.p}^{v}")
        if self.prec - v <= 0:
            raise PrecisionUnderflow("division by p exhausted the certified digits")
        return PadicScalar(self.profile, self.value // self.profile.p ** v, self.prec - v)

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicScalar(self.profile, other)
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (self.profile, self.value, self.prec) == (other.profile, other.value, other.prec)

    def congruent(self, other):
        """Equality up to the smaller of the two certified precisions."""
        if isinstance(other, int):
            other = PadicScalar(self.profile, other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.profile.p, self.profile.a, self.value, self.prec))

    def __repr__(self):
        return f"{self.value} + O({self.profile.p}^{self.prec})"

    def digits(self):
        return to_digits(self.value, self.profile.p, self.profile.a)

    def to_json(self):
        return {
            "kind": self.kind,
            "p": self.profile.p,
            "a": self.profile.a,
            "prec": self.prec,
            "digits": self.digits(),
        }

    @classmethod
    def from_json(cls, record, profile=None):
        profile = profile or PrecisionProfile(record["p"], record["a"])
        return cls(profile, from_digits(record["digits"], record["p"]), record.get("prec"))


def zp(profile, value, prec=None):
    return PadicScalar(profile, value, prec)


def _scalar(profile, value):
    return value if isinstance(value, PadicScalar) else PadicScalar(profile, value)


class QuadScalar:
    """x + y*sqrt(d) with x, y in Z_p."""

    __slots__ = ("x", "y", "d")
    kind = "quad"

    def __init__(self, x, y, d):
        if x.profile != y.profile:
            raise RingMismatch("components use different profiles")
        self.x = x
        self.y = y
        self.d = d

    @classmethod
    def of(cls, profile, x, y, d=None):
        d = smallest_nonresidue(profile.p) if d is None else d
        return cls(_scalar(profile, x), _scalar(profile, y), d)

    @property
    def profile(self):
        return self.x.profile

    @property
    def prec(self):
        return min(self.x.prec, self.y.prec)

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.d != self.d or other.profile != self.profile:
                raise RingMismatch("quadratic scalars over different rings")
            return other
        if isinstance(other, (int, PadicScalar)):
            return QuadScalar(_scalar(self.profile, other), PadicScalar(self.profile, 0), self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadScalar(self.x + other.x, self.y + other.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.x, -self.y, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadScalar(self.x - other.x, self.y - other.y, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        x = self.x * other.x + self.y * other.y * self.d
        y = self.x * other.y + self.y * other.x
        return QuadScalar(x, y, self.d)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = QuadScalar.of(self.profile, 1, 0, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self):
        return QuadScalar(self.x, -self.y, self.d)

    def norm(self):
        return self.x * self.x - self.y * self.y * self.d

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero()

    def is_unit(self):
        return self.norm().is_unit()

    def inverse(self):
        nrm = self.norm()
        if not nrm.is_unit():
            raise NonUnitDivision("norm is not a unit")
        inv = nrm.inverse()
        return QuadScalar(self.x * inv, -self.y * inv, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, QuadScalar):
            try:
                other = self._coerce(other)
            except RingMismatch:
                return False
            if other is NotImplemented:
                return NotImplemented
        return (self.x, self.y, self.d) == (other.x, other.y, other.d)

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __repr__(self):
        return f"({self.x.value} + {self.y.value}*sqrt({self.d})) + O({self.profile.p}^{self.prec})"

    def to_json(self):
        pr = self.profile
        return {
            "kind": self.kind,
            "p": pr.p,
            "a": pr.a,
            "d": self.d,
            "prec": [self.x.prec, self.y.prec],
            "digits": [self.x.digits(), self.y.digits()],
        }

    @classmethod
    def from_json(cls, record, profile=None):
        profile = profile or PrecisionProfile(record["p"], record["a"])
        (px, py), (dx, dy) = record["prec"], record["digits"]
        return cls(
            PadicScalar(profile, from_digits(dx, profile.p), px),
            PadicScalar(profile, from_digits(dy, profile.p), py),
            record["d"],
        )


class RamifiedScalar:
    """pi^e * (u + v*pi) in Z_p[pi], pi^2 = -p, with an explicit offset ``e``.

    The offset lets negative powers of pi (from lambda-stabilization) be
    represented without any division; |e| must stay inside the profile's
    valuation window.
    """

    __slots__ = ("u", "v", "e")
    kind = "ramified"

    def __init__(self, u, v, e=0):
        if u.profile != v.profile:
            raise RingMismatch("components use different profiles")
        if abs(e) > u.profile.valuation_window:
            raise ValuationWindowExceeded(
                f"pi-offset {e} outside window +-{u.profile.valuation_window}"
            )
        self.u = u
        self.v = v
        self.e = e

    @classmethod
    def of(cls, profile, u, v=0, e=0):
        return cls(_scalar(profile, u), _scalar(profile, v), e)

    @classmethod
    def pi(cls, profile, power=1):
        return cls.of(profile, 1, 0, power)

    @property
    def profile(self):
        return self.u.profile

    @property
    def prec(self):
        return min(self.u.prec, self.v.prec)

    def _times_pi(self, k):
        # (u + v pi) * pi = -p v + u pi, applied k times to the unit part
        u, v = self.u, self.v
        p = self.profile.p
        for _ in range(k):
            u, v = v * (-p), u
        return u, v

    def aligned(self, e):
        """The same element rewritten with offset ``e`` <= self.e."""
        if e > self.e:
            raise ValueError("can only lower the offset")
        u, v = self._times_pi(self.e - e)
        return RamifiedScalar(u, v, e)

    def _coerce(self, other):
        if isinstance(other, RamifiedScalar):
            if other.profile != self.profile:
                raise RingMismatch("ramified scalars over different profiles")
            return other
        if isinstance(other, (int, PadicScalar)):
            return RamifiedScalar(_scalar(self.profile, other), PadicScalar(self.profile, 0), 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = min(self.e, other.e)
        a, b = self.aligned(e), other.aligned(e)
        return RamifiedScalar(a.u + b.u, a.v + b.v, e)

    __radd__ = __add__

    def __neg__(self):
        return RamifiedScalar(-self.u, -self.v, self.e)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.profile.p
        u = self.u * other.u - self.v * other.v * p
        v = self.u * other.v + self.v * other.u
        return RamifiedScalar(u, v, self.e + other.e)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = RamifiedScalar.of(self.profile, 1)
        base = self
        if e < 0:
            base = base.inverse()
            e = -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k):
        """Multiply by pi^k (k may be negative)."""
        return RamifiedScalar(self.u, self.v, self.e + k)

    def inverse(self):
        """Inverse of pi^e * (unit); the unit part must have u a p-adic unit."""
        nrm = self.u * self.u + self.v * self.v * self.profile.p
        if not nrm.is_unit():
            raise NonUnitDivision("unit part of ramified scalar is not a unit")
        inv = nrm.inverse()
        return RamifiedScalar(self.u * inv, -self.v * inv, -self.e)

    def is_zero(self):
        return self.u.is_zero() and self.v.is_zero()

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except RingMismatch:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("RamifiedScalar equality is up to offset alignment; not hashable")

    def __repr__(self):
        return f"pi^{self.e}*({self.u.value} + {self.v.value}*pi) + O(p^{self.prec})"

    def to_json(self):
        pr = self.profile
        return {
            "kind": self.kind,
            "p": pr.p,
            "a": pr.a,
            "e": self.e,
            "prec": [self.u.prec, self.v.prec],
            "digits": [self.u.digits(), self.v.digits()],
        }

    @classmethod
    def from_json(cls, record, profile=None):
        profile = profile or PrecisionProfile(record["p"], record["a"])
        (pu, pv), (du, dv) = record["prec"], record["digits"]
        return cls(
            PadicScalar(profile, from_digits(du, profile.p), pu),
            PadicScalar(profile, from_digits(dv, profile.p), pv),
            record["e"],
        )


class CycloScalar:
    """Element of Z_p[x]/Phi_{p^j}(x); level 0 is Z_p[x]/(x - 1) = Z_p."""

    __slots__ = ("profile", "level", "coeffs")
    kind = "cyclo"

    def __init__(self, profile, level, coeffs):
        self.profile = profile
        self.level = level
        modpoly = polys.cyclotomic_ppower(profile.p, level)
        deg = len(modpoly) - 1
        coeffs = [_scalar(profile, c) for c in coeffs]
        # reduce modulo the monic cyclotomic polynomial
        for i in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[i]
            if c.is_zero():
                continue
            for j in range(deg + 1):
                coeffs[i - deg + j] = coeffs[i - deg + j] - c * modpoly[j]
        coeffs = coeffs[:deg]
        coeffs += [PadicScalar(profile, 0)] * (deg - len(coeffs))
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs)

    @property
    def prec(self):
        return min(c.prec for c in self.coeffs)

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.level != self.level or other.profile != self.profile:
                raise RingMismatch("cyclotomic scalars at different levels")
            return other
        if isinstance(other, (int, PadicScalar)):
            return CycloScalar(self.profile, self.level, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloScalar(
            self.profile, self.level, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(self.profile, self.level, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = PadicScalar(self.profile, 0)
        out = [zero] * (2 * self.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return CycloScalar(self.profile, self.level, out)

    __rmul__ = __mul__

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except RingMismatch:
            return False
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def __repr__(self):
        return f"Cyclo[{self.level}]({[c.value for c in self.coeffs]})"

    def to_json(self):
        return {
            "kind": self.kind,
            "p": self.profile.p,
            "a": self.profile.a,
            "level": self.level,
            "prec": [c.prec for c in self.coeffs],
            "digits": [c.digits() for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, record, profile=None):
        profile = profile or PrecisionProfile(record["p"], record["a"])
        coeffs = [
            PadicScalar(profile, from_digits(ds, profile.p), pr)
            for ds, pr in zip(record["digits"], record["prec"])
        ]
        return cls(profile, record["level"], coeffs)


SCALAR_KINDS = {
    cls.kind: cls for cls in (PadicScalar, QuadScalar, RamifiedScalar, CycloScalar)
}


def scalar_from_json(record, profile=None):
    try:
        cls = SCALAR_KINDS[record["kind"]]
    except KeyError:
        raise ValueError(f"unknown scalar kind {record.get('kind')!r}") from None
    return cls.from_json(record, profile)


def teichmuller(profile, r, d=None):
    """Teichmueller lift of a unit residue.

    ``r`` is an int (a residue mod p, giving a (p-1)-th root of unity in Z_p)
    or a pair ``(x, y)`` standing for x + y*sqrt(d) mod p (giving a
    (p^2-1)-th root of unity in the unramified quadratic ring).
    """
    p = profile.p
    if isinstance(r, tuple):
        x, y = r
        base = QuadScalar.of(profile, x % p, y % p, d)
        if base.norm().value % p == 0:
            raise NonUnitResidue(f"{r} is not a unit residue")
        q = p * p
    else:
        if r % p == 0:
            raise NonUnitResidue(f"{r} is not a unit residue mod {p}")
        base = PadicScalar(profile, r % p)
        q = p
    w = base
    for _ in range(profile.a):
        w = w ** q
    return w


def _floor_log(k, p):
    t = 0
    while p ** (t + 1) <= k:
        t += 1
    return t


def quad_log1(u):
    """p-adic logarithm of u in 1 + pO, certified modulo p^(a - guard).

    The series sum (-1)^(k+1) (u-1)^k / k is truncated once every remaining
    term has valuation >= a - guard.  Division by k consumes v_p(k) digits,
    which must fit inside the guard.
    """
    profile = u.profile
    p, a, guard = profile.p, profile.a, profile.guard
    target = a - guard
    w = u - 1
    if not (w.x.value % p == 0 and w.y.value % p == 0):
        raise ValueError("quad_log1 needs u = 1 mod p")
    if u.prec < a:
        target = min(target, u.prec)
    if target <= 0:
        raise InsufficientGuard("no certified digits left for the logarithm")
    mod = p ** a
    wx, wy, d = w.x.value, w.y.value, u.d
    tx, ty = 1, 0  # running power w^k as integers mod p^a
    sx = sy = 0
    k = 0
    while True:
        k += 1
        # j - floor(log_p j) is non-decreasing and bounds v(w^j / j) from below
        if k - _floor_log(k, p) >= target:
            break
        tx, ty = (tx * wx + ty * wy * d) % mod, (tx * wy + ty * wx) % mod
        vk = valuation(k, p)
        if vk > guard:
            raise InsufficientGuard(
                f"term k={k} divides by p^{vk}, more than the {guard} guard digits"
            )
        inv = pow(k // p ** vk, -1, mod)
        sign = 1 if k % 2 else -1
        sx += sign * (tx // p ** vk) * inv
        sy += sign * (ty // p ** vk) * inv
    return QuadScalar(PadicScalar(profile, sx, target), PadicScalar(profile, sy, target), d)
