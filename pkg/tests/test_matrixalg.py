import unittest
from fractions import Fraction

import numpy as np
import pytest

from pdeforge import matrixalg
from pdeforge.errors import InputFormatError, PreconditionError, SizeGuardError
from pdeforge.matrixalg import ExactMatrix


def sympy_det(A):
    return Fraction(str(A.to_sympy().det()))


def test_grassmann_generators_anticommute():
    """theta_i theta_j = -theta_j theta_i and theta_j^2 = 0."""
    for n in range(1, 5):
        assert matrixalg.anticommutation_holds(n)


def test_grassmann_theta_shape():
    theta = matrixalg.grassmann_theta(1, 3)
    assert theta.shape == (8, 8)
    assert np.count_nonzero(theta) == 4
    with pytest.raises(PreconditionError):
        matrixalg.grassmann_theta(3, 3)


@pytest.mark.parametrize("method", ["grassmann", "cofactor", "vandermonde"])
def test_determinants_agree_with_sympy(method):
    """Every determinant route equals sympy's exact determinant."""
    rng = np.random.default_rng(4)
    for n in range(1, 6):
        A = matrixalg.random_nonzero_column_matrix(n, rng)
        assert matrixalg.determinant(A, method) == sympy_det(A)


def test_literal_and_exterior_grassmann_agree():
    rng = np.random.default_rng(9)
    A = matrixalg.random_rational_matrix(5, rng)
    assert matrixalg.det_grassmann(A, "literal") == matrixalg.det_grassmann(A, "exterior")


def test_known_determinant():
    """det [[1, 2], [3, 4]] = -2."""
    A = ExactMatrix.from_json([[1, 2], [3, 4]])
    assert matrixalg.det_grassmann(A) == -2
    assert matrixalg.det_vandermonde(A) == -2
    assert matrixalg.det_cofactor(ExactMatrix.identity(4)) == 1


def test_singular_matrix():
    A = ExactMatrix.from_json({"rows": [[1, 2, 3], [2, 4, 6], [0, 1, 1]]})
    assert matrixalg.det_grassmann(A) == 0
    assert matrixalg.det_cofactor(A) == 0


def test_vandermonde_needs_nonzero_first_column():
    A = ExactMatrix.from_json([[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        matrixalg.det_vandermonde(A)


def test_unknown_determinant_method():
    with pytest.raises(PreconditionError):
        matrixalg.determinant(ExactMatrix.identity(2), "lu")


def test_matrix_documents():
    """Rationals parse from strings; ragged rows are refused."""
    A = ExactMatrix.from_json({"rows": [["1/2", "0"], ["0", "2"]]})
    assert A[0, 0] == Fraction(1, 2)
    assert ExactMatrix.from_json(A.to_json()) == A
    with pytest.raises(PreconditionError):
        ExactMatrix.from_json([[1, 2], [3]])
    with pytest.raises(InputFormatError):
        ExactMatrix.from_json([["x"]])


def test_ragged_matrix_document_keeps_its_shape_error():
    """Parsing succeeds on ragged rows, so the shape check reports a precondition failure."""
    with pytest.raises(PreconditionError) as info:
        ExactMatrix.from_json({"rows": [["1", "2"], ["3"]]})
    assert not isinstance(info.value, InputFormatError)


def test_permanent_matches_brute_force():
    rng = np.random.default_rng(1)
    for n in range(1, 6):
        A = matrixalg.random_rational_matrix(n, rng)
        assert matrixalg.permanent(A) == matrixalg.permanent_brute(A)


def test_permanent_of_all_ones():
    """per(J_4) = 4!."""
    J = ExactMatrix(tuple(tuple(1 for _ in range(4)) for _ in range(4)))
    assert matrixalg.permanent(J) == 24


def test_permanent_guard():
    n = matrixalg.PERMANENT_MAX_N + 1
    with pytest.raises(SizeGuardError):
        matrixalg.permanent(ExactMatrix.identity(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tree_polynomial_counts_rooted_trees(n):
    """One unit term per functional tree: n^(n-1) of them."""
    p = matrixalg.p_tree(n=n)
    assert p.term_count() == n ** (n - 1)
    assert all(c.is_one() for _, c in p.terms())


def test_tree_polynomial_on_exact_matrix():
    """All-ones matrix: n^(n-1) rooted trees."""
    J = ExactMatrix(tuple(tuple(1 for _ in range(3)) for _ in range(3)))
    assert matrixalg.p_tree(J) == 9


def test_f_tree_examples():
    """A path into a self-loop root is a functional tree; a 2-cycle is not."""
    assert matrixalg.f_tree([[1, 0, 0], [1, 0, 0], [0, 1, 0]]) == 1
    assert matrixalg.f_tree([[0, 1, 0], [1, 0, 0], [0, 0, 1]]) == 0
    assert matrixalg.f_tree([[1, 1], [1, 0]]) == 0


def test_f_cycles_examples():
    assert matrixalg.f_cycles([[0, 1, 0], [0, 0, 1], [1, 0, 0]]) == 1
    assert matrixalg.f_cycles([[1, 0], [1, 0]]) == 0


def test_bit_matrix_validation():
    with pytest.raises(PreconditionError):
        matrixalg.f_tree([[2, 0], [0, 1]])


def test_gf2_determinant_term_counts():
    """|GL_n(F_2)|: 6 for n = 2, 168 for n = 3."""
    assert matrixalg.p_det_gf2(2).term_count() == matrixalg.p_det_term_count(2) == 6
    assert matrixalg.p_det_gf2(3).term_count() == matrixalg.p_det_term_count(3) == 168


def test_gf2_determinant_examples():
    """The identity is invertible over GF(2); the all-ones 2x2 matrix is not."""
    assert matrixalg.f_det_gf2(matrixalg.matrix_mask([[1, 0], [0, 1]]), 2) == 1
    assert matrixalg.f_det_gf2(matrixalg.matrix_mask([[1, 1], [1, 1]]), 2) == 0
    with pytest.raises(PreconditionError):
        matrixalg.f_det_gf2(1 << 4, 2)


def test_gf2_rank():
    assert matrixalg.gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert matrixalg.gf2_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3


class TestExhaustive(unittest.TestCase):
    def test_matrix_pdes_match_oracles(self):
        for kind in ("ftree", "fcycles", "fdet2"):
            for n in (1, 2, 3):
                report = matrixalg.exhaustive_check(kind, n)
                self.assertTrue(report.passed, f"{kind} n={n}: {report.mismatches[:5]}")
                self.assertEqual(report.checked, 2 ** (n * n))

    def test_unknown_kind(self):
        with self.assertRaises(PreconditionError):
            matrixalg.exhaustive_check("fperm", 2)


@pytest.mark.parametrize("d", [2, 3, 5, 12])
def test_integer_roots(d):
    """Zeros at 1..d-1, magnitude d at 0 and d, nothing else near zero."""
    report = matrixalg.integer_roots_check(d)
    assert report.passed, report.failures
    assert len(report.root_values) == d - 1


def test_integer_roots_needs_two():
    with pytest.raises(PreconditionError):
        matrixalg.integer_roots_check(1)


def test_transcendental_value_limit():
    assert matrixalg.transcendental_value(0, 4) == 4
    assert abs(matrixalg.transcendental_value(0.5, 4)) > 0.1


def test_size_reports():
    assert matrixalg.grassmann_size(4) == (1, 4, 5)
    assert matrixalg.vandermonde_size(4) == (1, 10, 8)
    assert matrixalg.cycles_width(5) == 5
    assert matrixalg.cycles_width(4) == 4


if __name__ == '__main__':
    unittest.main()
