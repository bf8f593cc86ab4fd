"""The compact torus K_p^x / Q_p^x for p inert, and its finite quotients.

K_p = Q_p(sqrt d) with d the smallest quadratic non-residue.  Modulo Q_p^x every
element has a unit representative, so the level-m quotient is

    G~_m = (O / p^m)^x / (Z / p^m)^x,   of order (p+1) p^(m-1).

Cosets are stored as canonical pairs (x, y) standing for x + y*sqrt(d):
either (x, 1) with 0 <= x < p^m, or (1, p*t) with 0 <= t < p^(m-1).
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import LevelMismatch, PrecisionUnderflow
from .padic import PadicScalar, PrecisionProfile, QuadScalar, quad_log1, smallest_nonresidue, to_digits
from .tree import BruhatTitsTree, GL2Element


@dataclass(frozen=True, order=True)
class TorusElement:
    m: int
    x: int
    y: int

    def __repr__(self):
        if self.y == 1:
            return f"({self.x}:1)@{self.m}"
        return f"(1:{self.y})@{self.m}"


class AnticyclotomicTorus:
    def __init__(self, profile, d=None):
        if profile.p == 2:
            raise ValueError("the torus model needs an odd prime")
        self.profile = profile
        self.p = profile.p
        self.d = smallest_nonresidue(self.p) if d is None else d
        if pow(self.d, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"d={self.d} is not a quadratic non-residue mod {self.p}")
        self.tree = BruhatTitsTree(profile)

    def _check_level(self, m):
        if m < 1:
            raise ValueError("torus level must be >= 1")
        if m > self.profile.depth_budget:
            raise PrecisionUnderflow(
                f"level {m} exceeds the precision budget {self.profile.depth_budget}"
            )

    def canonical(self, m, x, y):
        mod = self.p ** m
        if y % self.p:
            return TorusElement(m, x * pow(y, -1, mod) % mod, 1)
        if x % self.p:
            return TorusElement(m, 1, y * pow(x, -1, mod) % mod)
        raise ValueError(f"{x} + {y}*sqrt(d) is not a unit")

    def identity(self, m):
        return TorusElement(m, 1, 0)

    def generator(self, m):
        """The fixed pro-p generator, the class of 1 + p*sqrt(d)."""
        return self.canonical(m, 1, self.p)

    def cosets(self, m):
        self._check_level(m)
        p = self.p
        plus = [TorusElement(m, 1, p * t % p ** m) for t in range(p ** (m - 1))]
        minus = [TorusElement(m, x, 1) for x in range(p ** m)]
        return plus + minus

    def _same_level(self, *elems):
        levels = {e.m for e in elems}
        if len(levels) != 1:
            raise LevelMismatch(f"torus elements at levels {sorted(levels)}")
        return levels.pop()

    def group_law(self, s, t):
        m = self._same_level(s, t)
        mod = self.p ** m
        x = (s.x * t.x + self.d * s.y * t.y) % mod
        y = (s.x * t.y + s.y * t.x) % mod
        return self.canonical(m, x, y)

    def inverse(self, s):
        return self.canonical(s.m, s.x, -s.y)

    def power(self, s, e):
        e %= self.order(s.m)
        result = self.identity(s.m)
        base = s
        while e:
            if e & 1:
                result = self.group_law(result, base)
            base = self.group_law(base, base)
            e >>= 1
        return result

    def order(self, m):
        return (self.p + 1) * self.p ** (m - 1)

    def embed(self, s):
        """x + y*sqrt(d)  ->  [[x, y*d], [y, x]] (regular representation)."""
        return GL2Element.of(((s.x, s.y * self.d), (s.y, s.x)))

    def filtration_level(self, s, m=None):
        if m is not None and m != s.m:
            raise LevelMismatch(f"element at level {s.m}, asked about level {m}")
        if s.y % self.p:
            return 0
        if s.y == 0:
            return s.m
        v = 0
        y = s.y
        while y % self.p == 0:
            y //= self.p
            v += 1
        return min(v, s.m)

    def base_vertex(self, n):
        """v_n = [[p^n, 0], [0, 1]]; its torus stabilizer is U_n."""
        return self.tree.ray_vertex(n)

    def orbit_vertex(self, s, n=None):
        n = s.m if n is None else n
        return self.tree.act(self.embed(s), self.base_vertex(n))

    def _log_component(self, m, x, y):
        # sqrt(d)-component of log(u) mod p^m for u = x + y sqrt(d) = 1 mod p
        guard = max(self.profile.guard, 2)
        prof = PrecisionProfile(self.p, m + guard, guard)
        u = QuadScalar(PadicScalar(prof, x), PadicScalar(prof, y), self.d)
        return quad_log1(u).y.value % self.p ** m

    @lru_cache(maxsize=None)
    def _generator_log(self, m):
        return self._log_component(m, 1, self.p)

    def cyclic_exponent(self, s, m=None):
        """Exponent of the pro-p part of ``s`` in base g = class of 1 + p*sqrt(d), mod p^(m-1)."""
        if m is not None and m != s.m:
            raise LevelMismatch(f"element at level {s.m}, asked about level {m}")
        m = s.m
        if m == 1:
            return 0
        p = self.p
        order = p ** (m - 1)
        s_inv = pow(p + 1, -1, order)
        t = self.power(s, (p + 1) * s_inv)
        mod = p ** m
        # representative in 1 + pO after dividing out the Z_p^x part
        x_inv = pow(t.x, -1, mod)
        y = t.y * x_inv % mod
        c_sigma = self._log_component(m, 1, y)
        c_gen = self._generator_log(m)
        return (c_sigma // p) * pow(c_gen // p, -1, order) % order

    def coset_table(self, m):
        rows = []
        for s in self.cosets(m):
            rows.append(
                {
                    "x": to_digits(s.x, self.p, m),
                    "y": to_digits(s.y, self.p, m),
                    "filtration_level": self.filtration_level(s),
                    "cyclic_exponent": self.cyclic_exponent(s),
                }
            )
        return rows
