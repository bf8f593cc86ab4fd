import copy
import random

import pytest

from bdtheta.errors import NotExact, PresentationTooLarge
from bdtheta.fitting import (
    Presentation,
    check_exact_seq,
    cyclic_module,
    diagonal,
    direct_sum,
    fitting_ideal,
    free_module,
    membership_certificate,
    reduce_presentation,
    split_extension_maps,
    verify_certificate,
    wmc_check,
    zero_module,
)
from bdtheta.groupring import GroupRingElement, ZpRing, omega_poly
from bdtheta.ideals import QuotientRing, base_change_quotient, contains, ideal_from_generators, ideal_product
from bdtheta.padic import PrecisionProfile

from oracles import brute_fitting, brute_product, cyclotomic, random_presentation

rng = random.Random(4242)


@pytest.mark.parametrize("p", [2, 3])
def test_fitting_matches_enumeration(p):
    R = QuotientRing(p, 1, 1)
    for _ in range(30):
        l, rows = random_presentation(rng, p, 1, 1)
        F = fitting_ideal(Presentation(R, l, rows))
        assert F.basis.elements() == brute_fitting(rows, l, R.N, R.modulus)


def test_products_and_membership_match_enumeration():
    p = 3
    R = QuotientRing(p, 1, 1)
    for _ in range(10):
        l1, rows1 = random_presentation(rng, p, 1, 1)
        l2, rows2 = random_presentation(rng, p, 1, 1)
        F1 = fitting_ideal(Presentation(R, l1, rows1))
        F2 = fitting_ideal(Presentation(R, l2, rows2))
        prod = ideal_product(F1, F2)
        brute = brute_product(list(F1.rows) or [[0]], list(F2.rows) or [[0]], R.N, R.modulus)
        assert prod.basis.elements() == brute
        for x in [tuple(rng.randrange(3) for _ in range(3)) for _ in range(10)]:
            assert contains(prod, x) == (x in brute)


def test_direct_sum_is_multiplicative():
    R = QuotientRing(5, 2, 1)
    for _ in range(6):
        l1, r1 = random_presentation(rng, 5, 2, 1)
        l2, r2 = random_presentation(rng, 5, 2, 1)
        P, Q = Presentation(R, l1, r1), Presentation(R, l2, r2)
        assert fitting_ideal(direct_sum(P, Q)) == ideal_product(fitting_ideal(P), fitting_ideal(Q))


def test_invariant_under_elementary_operations():
    R = QuotientRing(5, 2, 1)
    for _ in range(6):
        l, rows = random_presentation(rng, 5, 2, 1, max_gens=2, max_rels=3)
        P = Presentation(R, l, rows)
        F = fitting_ideal(P)
        # add a ring multiple of relation 0 to the last relation
        c = tuple(rng.randrange(25) for _ in range(5))
        new = [list(r) for r in P.rows]
        new[-1] = [R.add(x, R.mul(c, y)) for x, y in zip(new[-1], new[0])]
        if len(new) > 1:
            assert fitting_ideal(Presentation(R, l, new)) == F
        # permute generators and scale a relation by a unit
        perm = [list(reversed(r)) for r in P.rows]
        perm[0] = [R.mul(R.t_power(1), x) for x in perm[0]]
        assert fitting_ideal(Presentation(R, l, perm)) == F
        # adding a redundant relation changes nothing
        assert fitting_ideal(Presentation(R, l, list(P.rows) + [new[-1]])) == F


def test_diagonal_square():
    for n in (1, 2):
        R = QuotientRing(5, 4, n)
        w = R.reduce(omega_poly(5, "+", n))
        F = fitting_ideal(diagonal(R, [w, w]))
        assert F == ideal_from_generators(R, [R.mul(w, w)])


@pytest.mark.parametrize("omega", [[-1, 1], cyclotomic(5, 1)])
def test_base_change(omega):
    R = QuotientRing(5, 2, 1)
    for _ in range(10):
        l, rows = random_presentation(rng, 5, 2, 1)
        P = Presentation(R, l, rows)
        assert base_change_quotient(fitting_ideal(P), omega) == fitting_ideal(reduce_presentation(P, omega))


def test_special_modules():
    R = QuotientRing(5, 2, 1)
    assert fitting_ideal(free_module(R, 1)).is_zero()
    assert fitting_ideal(zero_module(R, 2)).is_unit()
    assert fitting_ideal(Presentation(R, 0, [])).is_unit()


def test_presentation_too_large():
    R = QuotientRing(5, 1, 1)
    with pytest.raises(PresentationTooLarge):
        fitting_ideal(zero_module(R, 6))


def test_presentation_json_round_trip():
    R = QuotientRing(5, 2, 1)
    l, rows = random_presentation(rng, 5, 2, 1)
    P = Presentation(R, l, rows)
    Q = Presentation.from_json(P.to_json())
    assert Q.rows == P.rows and Q.ngens == P.ngens


def test_split_sequence():
    R = QuotientRing(5, 3, 1)
    A = diagonal(R, [[-1, 1], [5]])
    C = cyclic_module(R, [1, 1])
    B, f, g = split_extension_maps(A, C)
    v = check_exact_seq(A, B, C, f, g)
    assert v.holds
    assert v.fitt_B == ideal_product(v.fitt_A, v.fitt_C)


def test_non_split_sequence():
    # 0 -> R/(p) -> R/(p^2) -> R/(p) -> 0 with f = multiplication by p
    R = QuotientRing(5, 3, 1)
    A, B, C = cyclic_module(R, [5]), cyclic_module(R, [25]), cyclic_module(R, [5])
    v = check_exact_seq(A, B, C, [[[5]]], [[[1]]])
    assert v.holds
    assert v.fitt_B == ideal_product(v.fitt_A, v.fitt_C)


def test_not_exact_cases():
    R = QuotientRing(5, 3, 1)
    A, C = cyclic_module(R, [5]), cyclic_module(R, [5])
    with pytest.raises(NotExact) as err:
        check_exact_seq(A, cyclic_module(R, [25]), C, [[[5]]], [[[0]]])
    assert err.value.detail["check"] in ("surjective", "composite_zero")
    with pytest.raises(NotExact) as err:
        check_exact_seq(A, free_module(R, 1), C, [[[1]]], [[[1]]])
    assert err.value.detail["check"] == "f_well_defined"
    gamma_minus_one = cyclic_module(R, [-1, 1])
    B, f, g = split_extension_maps(A, gamma_minus_one)
    zero = R.zero()
    with pytest.raises(NotExact) as err:
        check_exact_seq(A, B, gamma_minus_one, [[zero, zero]], g)
    assert err.value.detail["check"] == "exact_at_B"


def _theta_like(n=1, a=4):
    ring = ZpRing(PrecisionProfile(5, a))
    return GroupRingElement(ring, n, [rng.randrange(5**a) for _ in range(5**n)])


def test_wmc_and_certificate():
    R = QuotientRing(5, 4, 1)
    w = R.reduce(omega_poly(5, "-", 1, tilde=True))
    P = diagonal(R, [w])
    X = _theta_like()
    member = GroupRingElement(X.ring, 1, R.mul(w, X.to_ints()))
    cert = wmc_check(member, P)
    assert cert["verdict"] == "member"
    assert verify_certificate(cert) == (True, [])
    non = wmc_check(GroupRingElement.one(X.ring, 1), P)
    assert non["verdict"] == "non_member"
    assert verify_certificate(non)[0]


def test_tampered_certificates_fail():
    R = QuotientRing(5, 4, 1)
    w = R.reduce([-1, 1])
    cert = membership_certificate("fitt member", R.mul(w, (1, 2, 3, 4, 0)), diagonal(R, [w]))
    assert cert["verdict"] == "member"
    bad = copy.deepcopy(cert)
    bad["inputs"]["element"][0][0] = (bad["inputs"]["element"][0][0] + 1) % 5
    ok, problems = verify_certificate(bad)
    assert not ok and "inputs digest mismatch" in problems
    bad = copy.deepcopy(cert)
    bad["verdict"] = "non_member"
    assert not verify_certificate(bad)[0]
    bad = copy.deepcopy(cert)
    bad["trail"][0][1][0] = (bad["trail"][0][1][0] + 1) % 5
    assert not verify_certificate(bad)[0]
