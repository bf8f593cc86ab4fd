import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdtheta.errors import (
    InsufficientGuard,
    NonUnitDivision,
    NonUnitResidue,
    PrecisionUnderflow,
    ValuationWindowExceeded,
)
from bdtheta.padic import (
    CycloScalar,
    PadicScalar,
    PrecisionProfile,
    QuadScalar,
    RamifiedScalar,
    from_digits,
    quad_log1,
    scalar_from_json,
    smallest_nonresidue,
    teichmuller,
    to_digits,
)

P5 = PrecisionProfile(5, 4)


def test_wraparound_and_inverse():
    assert (PadicScalar(P5, 623) + 2).is_zero()
    assert PadicScalar(P5, 2).inverse().value == 313
    assert (PadicScalar(P5, 2) * PadicScalar(P5, 313)).value == 1


def test_non_unit_division():
    with pytest.raises(NonUnitDivision):
        PadicScalar(P5, 10).inverse()


def test_divide_by_p_consumes_precision():
    x = PadicScalar(P5, 25).divide_by_p(2)
    assert x.value == 1 and x.prec == 2
    with pytest.raises(PrecisionUnderflow):
        PadicScalar(P5, 0).divide_by_p(4)


def test_product_precision_rule():
    x = PadicScalar(P5, 5, prec=2)  # v = 1
    y = PadicScalar(P5, 3, prec=3)  # v = 0
    z = x * y
    assert z.prec == min(2 + 0, 3 + 1, 4)
    assert z.value == 15 % 25


def test_digits_round_trip():
    assert to_digits(38, 5, 4) == [3, 2, 1, 0]
    assert from_digits([3, 2, 1, 0], 5) == 38


def test_smallest_nonresidue():
    assert smallest_nonresidue(5) == 2
    assert smallest_nonresidue(7) == 3
    assert smallest_nonresidue(3) == 2


def test_quadratic_units():
    u = QuadScalar.of(P5, 1, 1)
    w = QuadScalar.of(P5, 1, -1)
    assert (u * w).x.value == 624 and (u * w).y.value == 0
    inv = u.inverse()
    assert (u * inv).x.value == 1 and (u * inv).y.value == 0


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_teichmuller_is_root_of_unity_lifting_r(r):
    w = teichmuller(P5, r)
    assert w.value % 5 == r
    assert (w**4).value == 1  # brute-force 4th-root oracle
    roots = [x for x in range(625) if pow(x, 4, 625) == 1 and x % 5 == r]
    assert roots == [w.value]


def test_teichmuller_values_mod_25():
    prof = PrecisionProfile(5, 2)
    assert [teichmuller(prof, r).value for r in (1, 2, 3, 4)] == [1, 7, 18, 24]


def test_teichmuller_quadratic():
    w = teichmuller(P5, (1, 1))
    one = w**24
    assert one.x.value == 1 and one.y.value == 0
    with pytest.raises(NonUnitResidue):
        teichmuller(P5, 5)


def test_log_is_a_homomorphism():
    prof = PrecisionProfile(5, 8, 2)
    u = QuadScalar.of(prof, 1 + 5 * 3, 10)
    w = QuadScalar.of(prof, 1 - 25, 5 * 7)
    lu, lw, luw = quad_log1(u), quad_log1(w), quad_log1(u * w)
    s = lu + lw
    assert s.x.congruent(luw.x) and s.y.congruent(luw.y)


def test_log_needs_guard():
    prof = PrecisionProfile(5, 12, 0)
    with pytest.raises(InsufficientGuard):
        quad_log1(QuadScalar.of(prof, 1, 5))


def test_ramified_pi_squared():
    pi = RamifiedScalar.pi(P5)
    assert pi * pi == RamifiedScalar.of(P5, -5)
    assert pi.inverse() * pi == RamifiedScalar.of(P5, 1)


def test_ramified_window():
    prof = PrecisionProfile(5, 2, 0, window=3)
    with pytest.raises(ValuationWindowExceeded):
        RamifiedScalar.pi(prof, 4)


def test_cyclo_reduces_modulo_phi():
    z = CycloScalar(P5, 1, [0, 1])
    total = CycloScalar(P5, 1, [1, 1, 1, 1, 1])
    assert total.is_zero()
    assert (z * z * z * z * z) == CycloScalar(P5, 1, [1])


@pytest.mark.parametrize(
    "x",
    [
        PadicScalar(P5, 17, 3),
        QuadScalar.of(P5, 3, 4),
        RamifiedScalar.of(P5, 2, 7, -2),
        CycloScalar(P5, 1, [1, 2, 3]),
    ],
)
def test_json_round_trip(x):
    assert scalar_from_json(x.to_json(), P5) == x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 624), st.integers(0, 624), st.integers(0, 624))
def test_ring_axioms(a, b, c):
    x, y, z = (PadicScalar(P5, v) for v in (a, b, c))
    assert (x * (y + z)).congruent(x * y + x * z)
    assert ((x * y) * z).congruent(x * (y * z))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 624), st.integers(0, 624), st.integers(0, 624), st.integers(0, 624))
def test_quadratic_norm_multiplicative(a, b, c, d):
    u, w = QuadScalar.of(P5, a, b), QuadScalar.of(P5, c, d)
    assert (u * w).norm().congruent(u.norm() * w.norm())
