import random

import pytest

from bdtheta.errors import FormRadiusExceeded
from bdtheta.groupring import GroupRingElement, NoSolution, ZpRing
from bdtheta.padic import PrecisionProfile
from bdtheta.theta import (
    HorocyclicForm,
    RadialForm,
    TableForm,
    bd_theta,
    bd_theta_by_sphere,
    check_lambda_compat,
    check_recurrence,
    lambda_sign,
    lambda_stabilize,
    omega_tilde_element,
    pm_extract,
    pm_identity_sides,
    theta_product,
)
from bdtheta.torus import AnticyclotomicTorus

from oracles import BruteTorus

P5 = PrecisionProfile(5, 8, 2)
P7 = PrecisionProfile(7, 7, 2)
rng = random.Random(11)


def _v(x, p):
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def horocyclic_oracle(p, d, radius, sign, n):
    """Double sum over all unit pairs (x, y) mod p^m, each class counted (p-1)p^(m-1) times.

    The vertex of [[x, yd], [y, x]] diag(p^m, 1) meets the line of e2 in
    p^k Z_p e2 with k = m - min(m + v(x), v(y)); its horocycle coordinate is
    2k - m, computed here straight from the lattice.
    """
    m = n + 1
    brute = BruteTorus(p, d, m)
    N = p**n
    slots = [[0, 0] for _ in range(N)]
    for x, y in brute.units():
        vx = _v(x, p)
        vy = _v(y, p)
        low = min(m + (vx or 0), m if vy is None else vy)
        beta = 2 * (m - low) - m
        j = radius - beta
        scale = (-p) ** (j // 2) * sign**j
        c = -brute.exponent((x, y)) % N
        slots[c][j % 2] += scale
    weight = (p - 1) * p ** (m - 1)
    out = []
    for comps in slots:
        assert all(v % weight == 0 for v in comps)
        out.extend(v // weight for v in comps)
    return out


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("sign", [1, -1])
def test_horocyclic_golden_vector(n, sign):
    form = HorocyclicForm(P5, sign=sign, radius=4)
    L = bd_theta(form, n).element
    expected = horocyclic_oracle(5, AnticyclotomicTorus(P5).d, 4, sign, n)
    assert L == GroupRingElement(form.ring, n, expected)


def test_horocyclic_level_one_shape():
    L = bd_theta(HorocyclicForm(P5, radius=4), 1).element
    # the nonzero fibres cancel, leaving a single term at gamma^0
    assert L.coefficient(0).u.value == P5.modulus - 150
    assert all(L.coefficient(i).u.value == 0 and L.coefficient(i).v.value == 0 for i in range(1, 5))


def test_sphere_enumeration_agrees():
    form = HorocyclicForm(P5, radius=4)
    for n in (1, 2):
        assert bd_theta(form, n).element == bd_theta_by_sphere(form, n)


def test_radial_theta_is_norm_multiple():
    form = RadialForm(P5, radius=4)
    assert form.sequence == [25, 0, -5, 0, 1]
    L = bd_theta(form, 1).element
    # every exponent class holds p + 1 cosets of the depth-2 sphere
    assert L.to_ints() == tuple([(-5 * 6) % P5.modulus] * 5)


def test_eigen_defect():
    h = HorocyclicForm(P5, radius=4)
    r = RadialForm(P5, radius=4)
    for v in h.tree.ball_layers(h.tree.v0, 2)[2][:20]:
        assert not any(h.eigen_defect(v))
        assert not any(r.eigen_defect(v))
    c = TableForm.constant(P5, 3)
    assert c.eigen_defect(c.tree.v0) == [6]


@pytest.mark.parametrize("n", [1, 2])
def test_recurrence_p5(n):
    assert check_recurrence(HorocyclicForm(P5, radius=4), n).passed
    assert check_recurrence(RadialForm(P5, radius=4), n).passed


def test_recurrence_p7():
    assert check_recurrence(HorocyclicForm(P7, radius=4), 1).passed
    assert check_recurrence(RadialForm(P7, radius=4), 1).passed


def test_constant_form_fails_recurrence():
    rep = check_recurrence(TableForm.constant(P5, 3), 1)
    assert not rep.passed and not rep.residual.is_zero()


def test_radius_exceeded():
    with pytest.raises(FormRadiusExceeded):
        bd_theta(RadialForm(P5, radius=2), 2)


def test_table_form_json():
    tree = HorocyclicForm(P5, radius=4).tree
    v = tree.sphere(tree.v0, 1)[2]
    record = {"p": 5, "radius": 2, "name": "spike", "values": [{"vertex": v.to_json(), "value": 3}]}
    form = TableForm.from_json(record, P5)
    assert form.components(v) == [3]
    assert form.components(tree.v0) == [0]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_pm_extract_round_trip(n):
    R = ZpRing(PrecisionProfile(5, 5))
    divisor_sign = "+" if n % 2 else "-"
    w = omega_tilde_element(R, divisor_sign, n)
    for _ in range(5):
        X = GroupRingElement(R, n, [rng.randrange(5**5) for _ in range(5**n)])
        L = w * X
        pm = pm_extract(L)
        assert pm
        assert pm.divisor == w
        assert w * pm.value == L or w * pm.value == -L
        lhs, rhs = pm_identity_sides(L, pm)
        assert lhs == rhs


def test_pm_extract_no_solution():
    R = ZpRing(PrecisionProfile(5, 5))
    res = pm_extract(GroupRingElement.one(R, 2))
    assert isinstance(res, NoSolution)


def test_pm_extract_on_theta_element():
    L = bd_theta(HorocyclicForm(P5, radius=4), 1).element
    pm = pm_extract(L)
    assert pm and pm.sign == "-"
    lhs, rhs = pm_identity_sides(L, pm)
    assert lhs == rhs


def test_theta_product_is_involution_invariant():
    R = ZpRing(P5)
    L = GroupRingElement(R, 2, [rng.randrange(5**8) for _ in range(25)])
    P = theta_product(L)
    assert P.involution() == P


def test_lambda_sign_parsing():
    assert lambda_sign("+pi", P5) == 1 and lambda_sign("-pi", P5) == -1
    with pytest.raises(ValueError):
        lambda_sign("2", P5)


@pytest.mark.parametrize("lam", ["+pi", "-pi"])
def test_lambda_compat(lam):
    assert check_lambda_compat(HorocyclicForm(P5, radius=4), 1, lam).passed
    assert check_lambda_compat(RadialForm(P5, radius=4), 1, lam).passed


def test_lambda_stabilize_example():
    form = RadialForm(P5, radius=4)
    L0, L1 = bd_theta(form, 0).element, bd_theta(form, 1).element
    S = lambda_stabilize(L1, L0, "+pi")
    assert S.n == 1 and S.ring.kind == "ramified"
    with pytest.raises(ValueError):
        lambda_stabilize(L1, L1, "+pi")
