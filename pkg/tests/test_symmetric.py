from fractions import Fraction

import numpy as np
import pytest

from pdeforge import symmetric
from pdeforge.boolean import cardinality_table, verify_pde
from pdeforge.circuit import numeric_coefficients
from pdeforge.errors import PreconditionError, SizeGuardError
from pdeforge.mlpoly import GeneralPoly, MLPoly
from pdeforge.ring import QQ


def test_elementary_symmetric_terms():
    """e_2 in four variables has six unit terms."""
    e2 = symmetric.elementary_symmetric(4, 2)
    assert e2.term_count() == 6
    assert all(c.is_one() for _, c in e2.terms())


def test_newton_e2():
    """e_2 = (p_1^2 - p_2) / 2."""
    terms = symmetric.newton_e_from_p(2)
    assert [(t.multiplicities, t.coefficient) for t in terms] == [
        ((0, 1), Fraction(-1, 2)), ((2, 0), Fraction(1, 2))]


@pytest.mark.parametrize("N,t", [(3, 1), (3, 2), (3, 3), (4, 2), (4, 4)])
def test_newton_substitution_gives_elementary_symmetric(N, t):
    """Substituting power sums reproduces e_t exactly in the unreduced ring."""
    expected = GeneralPoly.from_mlpoly(symmetric.elementary_symmetric(N, t), cap=t)
    assert symmetric.newton_substitute(t, N) == expected


def test_power_sums_are_congruent_to_linear_functional():
    """p_i reduces to x_0 + ... + x_{N-1}."""
    for i in range(1, 5):
        assert symmetric.power_sum(3, i).to_mlpoly() == symmetric.linear_functional(3)


def test_basis_changes_are_inverse():
    """binomial -> monomial -> binomial is the identity."""
    binomial = (Fraction(1), Fraction(-2), Fraction(0), Fraction(3, 5))
    monomial = symmetric.binomial_to_monomial(binomial)
    assert symmetric.monomial_to_binomial(monomial) == binomial


def test_binomial_two_in_monomial_basis():
    """C(l, 2) = l^2/2 - l/2."""
    assert symmetric.binomial_to_monomial((0, 0, 1)) == (0, Fraction(-1, 2), Fraction(1, 2))


@pytest.mark.parametrize("kind", ["le", "ge", "eq"])
def test_cardinality_programs_match_threshold_tables(kind):
    """Coefficient of T depends only on |T| and equals the threshold bit."""
    N = 6
    for s in range(N + 1):
        q = symmetric.cardinality_pdp(kind, s, N)
        assert verify_pde(q, cardinality_table(kind, s, N)).passed
        assert verify_pde(q.to_mlpoly(), cardinality_table(kind, s, N)).passed


def test_monomial_basis_expansion_agrees():
    """Expanding sum c_k l^k with reduction equals sum a_t e_t."""
    for kind in ("le", "ge", "eq"):
        for s in range(5):
            q = symmetric.cardinality_pdp(kind, s, 4)
            assert q.expand_monomial_basis() == q.to_mlpoly()


def test_e_to_binomial_congruence():
    """C(l, t) reduces to e_t."""
    for t in range(5):
        assert symmetric.e_to_binomial(t, 4).expand_monomial_basis() == symmetric.elementary_symmetric(4, t)


def test_degree_cannot_exceed_variable_count():
    with pytest.raises(PreconditionError):
        symmetric.UnivariateInL(2, (0, 0, 0, 1))


def test_inconsistent_bases_are_rejected():
    with pytest.raises(PreconditionError):
        symmetric.UnivariateInL(3, (0, 1), monomial=(0, 2))


def test_cardinality_pdp_bad_input():
    with pytest.raises(PreconditionError):
        symmetric.cardinality_pdp("le", 5, 3)
    with pytest.raises(PreconditionError):
        symmetric.cardinality_pdp("lt", 1, 3)


def test_factor_roots_of_binomial():
    """C(l, 3) has roots 0, 1, 2 and leading coefficient 1/6."""
    q = symmetric.cardinality_pdp("eq", 3, 5)
    factorization = symmetric.factor_roots(q)
    assert factorization.lead == Fraction(1, 6)
    assert np.allclose(sorted(r.real for r in factorization.roots), [0, 1, 2], atol=1e-9)
    assert np.allclose(factorization.reconstruct(), [float(c) for c in q.monomial_basis()])


def test_product_circuit_expands_to_program():
    """lead * prod (l - r) is a 1 x D x (1+N) circuit for the program."""
    q = symmetric.cardinality_pdp("le", 2, 4)
    c = symmetric.product_circuit(q)
    assert c.shape == (1, q.degree, 5)
    expected = np.zeros(16)
    for mask, coeff in q.to_mlpoly().terms():
        expected[mask] = float(coeff.to_fraction())
    assert np.allclose(numeric_coefficients(c), expected, atol=1e-8)


def test_normalised_linear_functional():
    """The orbit sum of x_0 over S_N, divided by (N-1)!, is l."""
    assert symmetric.normalised_linear_functional(4) == symmetric.linear_functional(4)
    with pytest.raises(SizeGuardError):
        symmetric.normalised_linear_functional(symmetric.ORBIT_SUM_MAX_VARS + 1)


def test_constant_program_has_no_roots():
    """le with s = 0 is the constant 1."""
    q = symmetric.cardinality_pdp("le", 0, 3)
    assert q.degree == 0
    assert symmetric.factor_roots(q).roots == ()
    assert q.to_mlpoly() == MLPoly.constant(3, QQ)


@pytest.mark.parametrize("kind,s,N", [("eq", 3, 5), ("eq", 4, 6), ("le", 2, 4), ("le", 3, 5)])
def test_factor_roots_residuals_are_scaled_by_term_sizes(kind, s, N):
    """Each root satisfies |q(r)| <= tol * sum_k |c_k| |r|^k, and that ratio is what is reported."""
    q = symmetric.cardinality_pdp(kind, s, N)
    factorization = symmetric.factor_roots(q)
    coeffs = [float(c) for c in q.monomial_basis()]
    assert len(factorization.residuals) == len(factorization.roots) == q.degree
    for root, residual in zip(factorization.roots, factorization.residuals):
        value = abs(sum(c * root ** k for k, c in enumerate(coeffs)))
        scale = sum(abs(c) * abs(root) ** k for k, c in enumerate(coeffs))
        assert residual <= symmetric.ROOT_TOL
        assert value <= symmetric.ROOT_TOL * scale
        assert residual == pytest.approx(value / scale, rel=1e-6, abs=1e-15)
