"""Theta elements of eigenforms on the Bruhat-Tits tree.

A form is any pure function on canonical vertices.  For sigma in the level-m
torus quotient the theta element at Galois level n = m - 1 is

    L_n = sum_sigma h(sigma * v_m) gamma^(-c(sigma)),

where c(sigma) is the cyclic exponent of sigma modulo p^n.  Eigenforms with
a_p = 0 satisfy project(L_{n+1}) = -Phi_{p^n}(gamma) L_{n-1}, which drives the
plus/minus extraction and the lambda-stabilization below.
"""

from dataclasses import dataclass, field

from . import polys
from .errors import FormRadiusExceeded, RingMismatch
from .groupring import (
    GroupRingElement,
    NoSolution,
    RamifiedRing,
    ZpRing,
    omega_poly,
    solve_multiplication,
)
from .howell import empty_basis
from .ideals import IdealBasis, from_rows
from .padic import RamifiedScalar, scalar_from_json
from .torus import AnticyclotomicTorus
from .tree import BruhatTitsTree, TreeVertex


class VertexForm:
    """Base class: subclasses implement ``_components(v)`` for vertices within ``radius``."""

    kind = None
    a_p = 0

    def __init__(self, profile, ring, radius):
        self.profile = profile
        self.ring = ring
        self.radius = radius
        self.tree = BruhatTitsTree(profile)

    @property
    def form_id(self):
        return f"{self.kind}(p={self.profile.p}, radius={self.radius})"

    def components(self, v):
        if v.depth > self.radius:
            raise FormRadiusExceeded(f"vertex at depth {v.depth} beyond form radius {self.radius}")
        return self._components(v)

    def value(self, v):
        return self.ring.scalar(self.components(v), self.profile.a)

    def value_on_edge(self, src, dst):
        """Edge hook: the value attached to the oriented edge src -> dst."""
        return self.value(dst)

    def eigen_defect(self, v):
        """Components of sum_{w ~ v} h(w) - a_p h(v); all zero for an eigenform."""
        mod = self.profile.modulus
        total = [0] * self.ring.rank
        for w in self.tree.neighbors(v):
            for c, x in enumerate(self.components(w)):
                total[c] += x
        for c, x in enumerate(self.components(v)):
            total[c] -= self.a_p * x
        return [x % mod for x in total]


class HorocyclicForm(VertexForm):
    """h(v) = lambda^(D - b(v)) with lambda = sign*pi, b the horocycle coordinate.

    Exactly one neighbour of v lies one step closer to the fixed end and p
    lie one step farther, so the neighbour sum is lambda^(D-b-1)(lambda^2 + p) = 0.
    Values are integral because |b(v)| <= depth(v) <= D = radius.
    """

    kind = "horocyclic"

    def __init__(self, profile, sign=1, radius=None):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        radius = profile.depth_budget - 1 if radius is None else radius
        super().__init__(profile, RamifiedRing(profile), radius)
        self.sign = sign
        self.end_depth = radius + 1

    @property
    def form_id(self):
        s = "+" if self.sign == 1 else "-"
        return f"horocyclic(p={self.profile.p}, lambda={s}pi, D={self.radius})"

    def _components(self, v):
        j = self.radius - self.tree.busemann(v, self.end_depth)
        scale = (-self.profile.p) ** (j // 2) * self.sign**j
        return [scale, 0] if j % 2 == 0 else [0, scale]


class RadialForm(VertexForm):
    """Sphere-constant eigenform: c_0 = 1, c_1 = 0, c_(r+1) = (a_p c_r - c_(r-1)) / p.

    Stored values are multiplied by p^floor(radius/2) to keep them integral.
    """

    kind = "radial"

    def __init__(self, profile, radius=None, c0=1):
        radius = profile.depth_budget - 1 if radius is None else radius
        super().__init__(profile, ZpRing(profile), radius)
        p = profile.p
        seq = [c0 * p ** (radius // 2), 0]
        for r in range(1, radius):
            num = self.a_p * seq[r] - seq[r - 1]
            if num % p:
                raise ValueError("radial sequence left the integers")
            seq.append(num // p)
        self.sequence = seq[: radius + 1]

    def _components(self, v):
        return [self.sequence[v.depth]]


class TableForm(VertexForm):
    """Explicit vertex -> value table; vertices inside the radius but absent from the table are 0."""

    kind = "table"

    def __init__(self, profile, ring, radius, values, name="table"):
        super().__init__(profile, ring, radius)
        self.values = dict(values)
        self.name = name

    @property
    def form_id(self):
        return f"{self.name}(p={self.profile.p}, radius={self.radius})"

    def _components(self, v):
        comps = self.values.get(v)
        if comps is None:
            return [0] * self.ring.rank
        return list(comps)

    @classmethod
    def constant(cls, profile, radius, c=1):
        tree = BruhatTitsTree(profile)
        ring = ZpRing(profile)
        values = {}
        for layer in tree.ball_layers(tree.v0, radius):
            for v in layer:
                values[v] = [c]
        return cls(profile, ring, radius, values, name=f"constant{c}")

    @classmethod
    def from_json(cls, record, profile):
        if record["p"] != profile.p:
            raise RingMismatch("table prime differs from the run prime")
        ring = None
        values = {}
        for entry in record["values"]:
            v = TreeVertex.from_json(entry["vertex"])
            raw = entry["value"]
            if isinstance(raw, int):
                scalar = raw
            else:
                scalar = scalar_from_json(raw, profile)
            if ring is None:
                ring = _ring_for(scalar, profile)
            comps, _, _ = ring.components(scalar)
            values[v] = comps
        ring = ring or ZpRing(profile)
        return cls(profile, ring, record["radius"], values, name=record.get("name", "table"))


def _ring_for(scalar, profile):
    from .groupring import CycloRing, QuadRing

    kind = getattr(scalar, "kind", "zp")
    if kind == "ramified":
        return RamifiedRing(profile)
    if kind == "quad":
        return QuadRing(profile, scalar.d)
    if kind == "cyclo":
        return CycloRing(profile, scalar.level)
    return ZpRing(profile)


@dataclass
class ThetaElement:
    n: int
    element: GroupRingElement
    provenance: dict = field(default_factory=dict)

    def to_json(self):
        record = self.element.to_json()
        record["provenance"] = dict(self.provenance)
        return record


def bd_theta(form, n, torus=None, invert=True):
    """Theta element of ``form`` at Galois level n (torus level n + 1)."""
    m = n + 1
    if m > form.radius:
        raise FormRadiusExceeded(f"torus level {m} needs a form of radius >= {m}")
    torus = torus or AnticyclotomicTorus(form.profile)
    N = form.profile.p**n
    r = form.ring.rank
    flat = [0] * (N * r)
    for sigma in torus.cosets(m):
        comps = form.components(torus.orbit_vertex(sigma))
        c = torus.cyclic_exponent(sigma)
        i = (-c if invert else c) % N
        for k, x in enumerate(comps):
            flat[i * r + k] += x
    element = GroupRingElement(form.ring, n, flat)
    provenance = {
        "form": form.form_id,
        "torus_level": m,
        "prec": element.prec,
        "source": "oracle-supplied",
    }
    return ThetaElement(n, element, provenance)


def bd_theta_by_sphere(form, n, torus=None):
    """Same sum enumerated over sphere(v_0, m), through the inverse of the orbit map."""
    m = n + 1
    torus = torus or AnticyclotomicTorus(form.profile)
    preimage = {torus.orbit_vertex(s): s for s in torus.cosets(m)}
    N = form.profile.p**n
    r = form.ring.rank
    flat = [0] * (N * r)
    for v in form.tree.sphere(form.tree.v0, m):
        i = -torus.cyclic_exponent(preimage[v]) % N
        for k, x in enumerate(form.components(v)):
            flat[i * r + k] += x
    return GroupRingElement(form.ring, n, flat)


def _element(x):
    return x.element if isinstance(x, ThetaElement) else x


@dataclass
class RecurrenceReport:
    n: int
    passed: bool
    residual: GroupRingElement
    prec: int

    def to_json(self):
        return {
            "n": self.n,
            "passed": self.passed,
            "prec": self.prec,
            "residual": self.residual.to_json(),
        }


def recurrence_residual(L_next, L_cur, L_prev, a_p=0):
    """project(L_{n+1}) - a_p L_n + Phi_{p^n}(gamma) * lift(L_{n-1})."""
    L_next, L_cur, L_prev = _element(L_next), _element(L_cur), _element(L_prev)
    return L_next.project() - a_p * L_cur + L_prev.norm_lift()


def check_recurrence(form, n, a_p=0, torus=None):
    if n < 1:
        raise ValueError("the recurrence needs n >= 1")
    torus = torus or AnticyclotomicTorus(form.profile)
    Ls = [bd_theta(form, k, torus).element for k in (n - 1, n, n + 1)]
    residual = recurrence_residual(Ls[2], Ls[1], Ls[0], a_p)
    return RecurrenceReport(n, residual.is_zero(), residual, residual.prec)


def theta_product(L):
    L = _element(L)
    return L * L.involution()


def omega_tilde_element(ring, sign, n):
    """omega~_n^sign over Z/p^a, for use as a divisor of elements over ``ring``."""
    zp = ZpRing(ring.profile)
    return GroupRingElement.from_poly(zp, n, omega_poly(ring.p, sign, n, tilde=True))


def omega_tilde_degree(p, sign, n):
    return polys.degree(omega_poly(p, sign, n, tilde=True))


@dataclass
class PMResult:
    """L_n^sign, the normalized quotient, unique modulo ``annihilator``."""

    sign: str
    n: int
    value: GroupRingElement
    annihilator: IdealBasis
    divisor: GroupRingElement

    def __bool__(self):
        return True

    def to_json(self):
        return {
            "sign": self.sign,
            "n": self.n,
            "value": self.value.to_json(),
            "annihilator": self.annihilator.to_json(),
            "divisor": self.divisor.to_json(),
        }


def pm_extract(L):
    """Even n: L = omega~_n^- L^+; odd n: L = omega~_n^+ L^-.  NoSolution is returned, not raised."""
    L = _element(L)
    n = L.n
    if n % 2 == 0:
        sign, divisor_sign, normalizer = "+", "-", (-1) ** (n // 2)
    else:
        sign, divisor_sign, normalizer = "-", "+", (-1) ** ((n + 1) // 2)
    divisor = omega_tilde_element(L.ring, divisor_sign, n)
    result = solve_multiplication(divisor, L)
    if isinstance(result, NoSolution):
        return result
    return PMResult(sign, n, normalizer * result.q, result.annihilator, divisor)


def involute_ideal(I):
    ring = I.ring
    if I.is_zero():
        return I
    return from_rows(ring, [ring.involution(r) for r in I.rows])


@dataclass
class PMProduct:
    value: GroupRingElement
    ambiguity: IdealBasis

    def to_json(self):
        return {"value": self.value.to_json(), "ambiguity": self.ambiguity.to_json()}


def pm_L_product(pm):
    """L^sign * iota(L^sign); well defined modulo ann + iota(ann)."""
    if isinstance(pm, PMResult):
        value, ann = pm.value, pm.annihilator
    else:
        value = _element(pm)
        from .ideals import QuotientRing

        ring = QuotientRing(value.p, value.prec, value.n)
        ann = IdealBasis(ring, empty_basis(value.p, value.prec, ring.dim))
    ambiguity = ann
    if not ann.is_zero():
        ambiguity = from_rows(ann.ring, list(ann.rows) + list(involute_ideal(ann).rows))
    return PMProduct(value * value.involution(), ambiguity)


def pm_identity_sides(L, pm):
    """Both sides of gamma^(-deg) (omega~)^2 L^sign iota(L^sign) = L iota(L)."""
    L = _element(L)
    div = pm.divisor.change_ring(L.ring)
    deg = polys.degree(div.to_ints()) if L.ring.kind == "zp" else omega_tilde_degree(L.p, "+" if pm.sign == "-" else "-", L.n)
    unit = GroupRingElement.gamma(L.ring, L.n, -deg)
    lhs = unit * div * div * pm_L_product(pm).value
    return lhs, theta_product(L)


def lambda_sign(lam, profile):
    """+1 or -1 for lambda = +-pi; anything else is rejected."""
    if lam in (1, -1):
        return lam
    if isinstance(lam, str):
        table = {"+pi": 1, "pi": 1, "-pi": -1}
        if lam not in table:
            raise ValueError(f"lambda must be +pi or -pi, got {lam!r}")
        return table[lam]
    if isinstance(lam, RamifiedScalar):
        pi = RamifiedScalar.pi(profile)
        if lam == pi:
            return 1
        if lam == -pi:
            return -1
    raise ValueError("lambda must be a square root of -p, i.e. +pi or -pi")


def lambda_stabilize(L_n, L_prev, lam):
    """lambda^-(n+1) (L_n - lambda^-1 Phi_{p^n}(gamma) L_{n-1}) over the ramified ring."""
    L_n, L_prev = _element(L_n), _element(L_prev)
    if L_prev.n != L_n.n - 1:
        raise ValueError("need consecutive levels n and n-1")
    profile = L_n.ring.profile
    s = lambda_sign(lam, profile)
    ring = RamifiedRing(profile)
    x = L_n.change_ring(ring) if L_n.ring.kind == "zp" else L_n
    y = L_prev.change_ring(ring) if L_prev.ring.kind == "zp" else L_prev
    n = L_n.n
    bracket = x - s * y.norm_lift().shift(-1)
    return (s ** (n + 1)) * bracket.shift(-(n + 1))


@dataclass
class CompatReport:
    n: int
    passed: bool
    difference: GroupRingElement

    def to_json(self):
        return {"n": self.n, "passed": self.passed, "difference": self.difference.to_json()}


def check_lambda_compat(form, n, lam, torus=None):
    """project(L^lambda_{n+1}) = L^lambda_n, from theta elements at levels n-1, n, n+1."""
    if n < 1:
        raise ValueError("compatibility needs n >= 1")
    torus = torus or AnticyclotomicTorus(form.profile)
    Ls = [bd_theta(form, k, torus).element for k in (n - 1, n, n + 1)]
    upper = lambda_stabilize(Ls[2], Ls[1], lam)
    lower = lambda_stabilize(Ls[1], Ls[0], lam)
    diff = upper.project() - lower
    return CompatReport(n, diff.is_zero(), diff)
