"""The Bruhat-Tits tree of PGL2(Q_p).

A vertex is the homothety class of the lattice spanned by the columns of a
2x2 matrix over Q_p.  Every class has a unique representative

    [[p^k, b],
     [0,   1]]

with k an integer and b in Z[1/p] reduced into [0, p^k).  Entries are exact
rationals, so canonicalization never loses digits; the depth budget a - guard
is still enforced so that results match what a truncated-precision caller
could certify.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DepthTooSmall, PrecisionUnderflow
from .padic import PadicScalar, from_digits, to_digits

INF = float("inf")


def qval(x, p):
    """p-adic valuation of a rational number (infinity at zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def reduce_mod_pk(b, p, k):
    """Canonical representative of b in Q_p / p^k Z_p, as an element of Z[1/p] in [0, p^k)."""
    b = Fraction(b)
    v = qval(b, p)
    if v >= k:
        return Fraction(0)
    num, den = b.numerator, b.denominator
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    mod = p ** (k - v)
    unit = num * pow(den, -1, mod) % mod
    return Fraction(unit) * Fraction(p) ** v


def _as_fraction(x):
    if isinstance(x, PadicScalar):
        return Fraction(x.value)
    return Fraction(x)


@dataclass(frozen=True)
class GL2Element:
    """2x2 matrix over Q_p with exact rational entries, rows ``((a, b), (c, d))``.

    ``prec`` is the number of certified p-adic digits of the entries when they
    came from truncated scalars, or None when the entries are exact.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    prec: int | None = None

    @classmethod
    def of(cls, rows, prec=None):
        (a, b), (c, d) = rows
        entries = [a, b, c, d]
        precs = [x.prec for x in entries if isinstance(x, PadicScalar)]
        if precs:
            prec = min(precs + ([prec] if prec is not None else []))
        return cls(*(_as_fraction(x) for x in entries), prec=prec)

    @classmethod
    def identity(cls):
        return cls.of(((1, 0), (0, 1)))

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        prec = _min_prec(self.prec, other.prec)
        return GL2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            prec,
        )

    def inverse(self):
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return GL2Element(self.d / det, -self.b / det, -self.c / det, self.a / det, self.prec)

    def scale(self, c):
        c = Fraction(c)
        return GL2Element(self.a * c, self.b * c, self.c * c, self.d * c, self.prec)


def _min_prec(x, y):
    if x is None:
        return y
    if y is None:
        return x
    return min(x, y)


@dataclass(frozen=True, order=True)
class TreeVertex:
    """Canonical vertex ``[[p^k, b], [0, 1]]``; hashable and totally ordered."""

    p: int
    k: int
    b: Fraction

    def matrix(self):
        return GL2Element(Fraction(self.p) ** self.k, self.b, Fraction(0), Fraction(1))

    @property
    def depth(self):
        """Distance from the base vertex v_0."""
        e1 = min(self.k, qval(self.b, self.p), 0)
        return int(self.k - 2 * e1)

    def to_json(self):
        shift = max(0, -qval(self.b, self.p)) if self.b else 0
        scaled = self.b * Fraction(self.p) ** shift
        assert scaled.denominator == 1
        ndigits = max(self.k + shift, 0)
        return {
            "p": self.p,
            "k": self.k,
            "b": to_digits(int(scaled), self.p, ndigits),
            "b_shift": shift,
        }

    @classmethod
    def from_json(cls, record):
        p = record["p"]
        b = Fraction(from_digits(record["b"], p), p ** record.get("b_shift", 0))
        return cls(p, record["k"], b)

    def __repr__(self):
        return f"V(k={self.k}, b={self.b})"


@dataclass(frozen=True)
class TreeEdge:
    source: TreeVertex
    target: TreeVertex


class BruhatTitsTree:
    """Vertex arithmetic on the (p+1)-regular tree, bounded by a depth budget.

    >>> from bdtheta.padic import PrecisionProfile
    >>> T = BruhatTitsTree(PrecisionProfile(5, 8, 2))
    >>> len(T.neighbors(T.v0))
    6
    """

    def __init__(self, profile):
        self.profile = profile
        self.p = profile.p
        self.max_depth = profile.depth_budget
        self.v0 = TreeVertex(self.p, 0, Fraction(0))

    def _check_depth(self, v, prec=None):
        limit = self.max_depth if prec is None else min(self.max_depth, prec)
        if v.depth > limit:
            raise PrecisionUnderflow(
                f"vertex at depth {v.depth} exceeds the certified depth budget {limit}"
            )
        return v

    def vertex(self, k, b=0):
        return self._check_depth(TreeVertex(self.p, k, reduce_mod_pk(b, self.p, k)))

    def ray_vertex(self, t):
        """x_t = [[p^t, 0], [0, 1]], the t-th vertex on the reference ray."""
        return TreeVertex(self.p, t, Fraction(0))

    def canonicalize(self, M):
        """Canonical vertex of the lattice spanned by the columns of ``M``."""
        if not isinstance(M, GL2Element):
            M = GL2Element.of(M)
        p = self.p
        (m11, m12), (m21, m22) = M.rows()
        if M.det() == 0:
            raise ValueError("matrix is singular")
        if m21 != 0:
            if m22 == 0 or qval(m21, p) < qval(m22, p):
                m11, m12, m21, m22 = m12, m11, m22, m21
            if m21 != 0:
                q = m21 / m22
                m11, m21 = m11 - q * m12, Fraction(0)
        alpha, beta, delta = m11, m12, m22
        k = int(qval(alpha, p) - qval(delta, p))
        v = TreeVertex(p, k, reduce_mod_pk(beta / delta, p, k))
        return self._check_depth(v, M.prec)

    def neighbors(self, v):
        M = v.matrix()
        p = self.p
        steps = [GL2Element.of(((p, j), (0, 1))) for j in range(p)]
        steps.append(GL2Element.of(((1, 0), (0, p))))
        return [self.canonicalize(M @ s) for s in steps]

    def distance(self, v, w):
        M = v.matrix().inverse() @ w.matrix()
        p = self.p
        e1 = min(qval(x, p) for x in (M.a, M.b, M.c, M.d))
        return int(qval(M.det(), p) - 2 * e1)

    def act(self, g, v):
        if not isinstance(g, GL2Element):
            g = GL2Element.of(g)
        if g.det() == 0:
            raise ValueError("group element is not invertible")
        return self.canonicalize(g @ v.matrix())

    def sphere(self, center, r):
        """All vertices at exact distance ``r`` from ``center``, sorted."""
        layers = self.ball_layers(center, r)
        return layers[r]

    def ball_layers(self, center, r):
        if r < 0:
            raise ValueError("radius must be non-negative")
        layers = [[center]]
        previous = set()
        current = {center}
        for _ in range(r):
            nxt = set()
            for v in current:
                for w in self.neighbors(v):
                    if w not in previous and w not in current:
                        nxt.add(w)
            previous, current = current, nxt
            layers.append(sorted(nxt))
        return layers

    def busemann(self, v, end_depth):
        """Horocycle coordinate d(v, x_T) - T relative to the reference ray."""
        if end_depth < v.depth + 1:
            raise DepthTooSmall(
                f"end depth {end_depth} must be at least distance(v0, v) + 1 = {v.depth + 1}"
            )
        return self.distance(v, self.ray_vertex(end_depth)) - end_depth

    def edges_of_ball(self, center, r):
        layers = self.ball_layers(center, r)
        edges = []
        for inner, outer in zip(layers, layers[1:]):
            outer_set = set(outer)
            for v in inner:
                for w in self.neighbors(v):
                    if w in outer_set:
                        edges.append(TreeEdge(v, w))
        return layers, edges

    def to_dot(self, center, r):
        layers, edges = self.edges_of_ball(center, r)
        names = {}
        lines = ["graph bruhat_tits {"]
        for depth, layer in enumerate(layers):
            for v in layer:
                names[v] = f"v{len(names)}"
                lines.append(f'  {names[v]} [label="k={v.k} b={v.b} r={depth}"];')
        for e in edges:
            lines.append(f"  {names[e.source]} -- {names[e.target]};")
        lines.append("}")
        return "\n".join(lines) + "\n"
