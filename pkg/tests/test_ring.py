import random
from fractions import Fraction

import pytest

from pdeforge.errors import IncompatibleRingError, InputFormatError, PreconditionError
from pdeforge.ring import GF2, QQ, Ring, cyclotomic, pow_m_is_unit, root_of_unity


def test_gf2_addition_is_xor():
    """1 + 1 = 0 in GF(2)."""
    assert GF2.one() + GF2.one() == 0
    assert (GF2.one() + GF2.zero()).is_one()


def test_rationals_stay_in_lowest_terms():
    """Fractions are normalised on construction."""
    assert QQ.from_fraction(Fraction(2, 4)).value == Fraction(1, 2)
    assert QQ.parse("-6/8").value == Fraction(-3, 4)


def test_gf2_rejects_even_denominators():
    """1/2 has no image in GF(2)."""
    with pytest.raises(PreconditionError):
        GF2.from_fraction(Fraction(1, 2))


def test_mixed_rings_do_not_combine():
    """Adding a GF(2) element to a rational raises."""
    with pytest.raises(IncompatibleRingError):
        GF2.one() + QQ.one()


def test_cyclotomic_moduli_must_match():
    """zeta_3 and zeta_4 live in different rings."""
    with pytest.raises(IncompatibleRingError):
        root_of_unity(3, 1) * root_of_unity(4, 1)


def test_root_of_unity_order():
    """zeta_3 cubed is one, squared is not."""
    z = root_of_unity(3, 1)
    assert (z ** 3).is_one()
    assert pow_m_is_unit(z, 3)
    assert not pow_m_is_unit(z, 2)


def test_rational_minus_one_is_a_square_root_of_unity():
    """Over Q, tau = -1 satisfies tau^2 = 1."""
    assert pow_m_is_unit(QQ.from_int(-1), 2)
    assert not pow_m_is_unit(QQ.from_int(2), 2)


def test_cyclotomic_inverse_of_monomial_unit():
    """(2 zeta)^-1 = zeta^3 / 2 in Q[zeta]/(zeta^4 - 1)."""
    ring = cyclotomic(4)
    a = ring.root_of_unity(1) * 2
    assert a.inverse() == ring.root_of_unity(3) * Fraction(1, 2)
    assert (a * a.inverse()).is_one()


def test_cyclotomic_non_monomial_has_no_inverse():
    """1 + zeta is not a monomial unit."""
    ring = cyclotomic(4)
    with pytest.raises(PreconditionError):
        (ring.one() + ring.root_of_unity(1)).inverse()


def test_ring_tags_round_trip():
    """Tags parse back into the same ring."""
    for ring in (GF2, QQ, cyclotomic(6)):
        assert Ring.from_tag(ring.tag) == ring


def test_unknown_ring_tag():
    """Unknown tags are input errors."""
    with pytest.raises(InputFormatError):
        Ring.from_tag("reals")


def test_rational_json_rejects_floats():
    """Floats are not exact and must be rejected."""
    with pytest.raises(InputFormatError):
        QQ.parse(0.5)


def test_cyclotomic_json():
    """Cyclotomic coefficients serialise as a dense vector."""
    z = root_of_unity(3, 2)
    assert z.to_json() == {"m": 3, "coeffs": ["0", "0", "1"]}
    assert cyclotomic(3).parse(z.to_json()) == z


def test_to_complex_of_root_of_unity():
    """zeta_4 is i."""
    assert abs(root_of_unity(4, 1).to_complex() - 1j) < 1e-12


def _random_elem(ring, rng):
    if ring.kind == "gf2":
        return ring.from_int(rng.randint(0, 1))
    total = ring.zero()
    for e in range(ring.modulus if ring.kind == "cyc" else 2):
        c = ring.from_fraction(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        total = total + c * ring.root_of_unity(e)
    return total


@pytest.mark.parametrize("ring", [QQ, GF2, cyclotomic(1), cyclotomic(3), cyclotomic(4), cyclotomic(6)])
def test_ring_axioms_on_random_elements(ring):
    """Addition and multiplication are associative and commutative, and multiplication distributes."""
    rng = random.Random(17)
    for _ in range(50):
        a, b, c = (_random_elem(ring, rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()
        assert (a * ring.one()) == a


def test_first_cyclotomic_ring_is_the_rationals():
    """Q[zeta]/(zeta - 1) computes exactly like Fraction arithmetic."""
    ring = cyclotomic(1)
    rng = random.Random(3)
    for _ in range(50):
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        y = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        a, b = ring.from_fraction(x), ring.from_fraction(y)
        assert (a * b).to_fraction() == x * y
        assert (a + b).to_fraction() == x + y
        assert (a - b).to_fraction() == x - y
    assert ring.root_of_unity(1).is_one()
