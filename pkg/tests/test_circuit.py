import unittest

import numpy as np
import pytest

from pdeforge import circuit
from pdeforge.errors import InputFormatError, NonMultilinearError, PreconditionError
from pdeforge.mlpoly import MLPoly
from pdeforge.ring import QQ
from pdeforge.symmetric import cardinality_pdp, elementary_symmetric

WORKED = MLPoly(2, QQ, {0: 1, 1: 1, 3: 1})


def test_subset_product_expands_to_subsets():
    """prod_{i in S} (1 + x_i) has one unit term per subset of S."""
    p = circuit.expand(circuit.subset_product(0b101, 3))
    assert sorted(mask for mask, _ in p.terms()) == [0, 1, 4, 5]
    assert all(c.is_one() for _, c in p.terms())


def test_superset_product_expands_to_supersets():
    """Every monomial of the superset product contains S."""
    p = circuit.expand(circuit.superset_product(0b001, 3))
    assert sorted(mask for mask, _ in p.terms()) == [1, 3, 5, 7]


def test_subset_product_size():
    """One summand, |S| factors, width 1 + N."""
    assert circuit.size_report(circuit.subset_product(0b101, 3)).as_tuple() == (1, 2, 4, 8)


def test_subset_product_rejects_out_of_range_index():
    """S must live in the declared variables."""
    with pytest.raises(PreconditionError):
        circuit.subset_product([3], 3)


@pytest.mark.parametrize("kind", ["le", "ge"])
@pytest.mark.parametrize("s", [0, 1, 3, 4])
def test_cardinality_closed_forms(kind, s):
    """Closed forms at s in {0, 1, N-1, N} expand to the cardinality program."""
    N = 4
    c = circuit.cardinality_circuit(kind, s, N)
    assert circuit.expand(c) == cardinality_pdp(kind, s, N).to_mlpoly()


def test_equality_circuit_is_binomial_product():
    """C(l, 2) reduces to e_2."""
    c = circuit.cardinality_circuit("eq", 2, 4)
    assert circuit.expand(c) == elementary_symmetric(4, 2)
    assert c.rho == 1 and c.d == 2


def test_threshold_without_closed_form():
    """le with s = 2 of N = 5 has no closed form."""
    with pytest.raises(PreconditionError):
        circuit.cardinality_circuit("le", 2, 5)


def test_complement_circuit():
    """prod (1 + x_i) - (1 + x0) = x1 + x0 x1."""
    c = circuit.complement_circuit(circuit.subset_product(0b01, 2))
    assert circuit.expand(c) == MLPoly(2, QQ, {2: 1, 3: 1})


def test_trivial_circuit_reproduces_polynomial():
    """One summand per term, padded to the degree."""
    c = circuit.trivial_circuit(WORKED)
    assert c.shape == (3, 2, 3)
    assert circuit.expand(c) == WORKED


def test_raw_expansion_must_be_multilinear():
    """x0 * x0 is rejected without reduction."""
    c = circuit.SigmaPiSigma(1, [[[0, 1], [0, 1]]])
    assert circuit.expand(c) == MLPoly.variable(1, 0)
    with pytest.raises(NonMultilinearError):
        circuit.expand(c, reduce=False)


def test_ragged_hypermatrix_is_rejected():
    """Every summand needs the same factor count."""
    with pytest.raises(PreconditionError):
        circuit.SigmaPiSigma(1, [[[1, 1]], [[1, 1], [0, 1]]])


def test_declared_shape_must_match_entries():
    """rho and d in the document must agree with the entries."""
    doc = circuit.subset_product(0b11, 2).to_json()
    doc["d"] = 5
    with pytest.raises(InputFormatError):
        circuit.SigmaPiSigma.from_json(doc)


def test_numeric_coefficients_agree_with_exact_expansion():
    """Hypercube evaluation plus Moebius transform recovers the coefficients."""
    c = circuit.cardinality_circuit("ge", 1, 4)
    numeric = circuit.to_numeric(c)
    expected = circuit.dense_target(circuit.expand(c))
    assert np.allclose(circuit.numeric_coefficients(numeric), expected)
    sparse = circuit.numeric_expand(numeric)
    assert all(abs(sparse.get(mask, 0) - expected[mask]) < 1e-9 for mask in range(16))


def test_load_circuit_dispatches_on_numeric_flag():
    """Numeric documents load as NumericCircuit, others as SigmaPiSigma."""
    exact = circuit.subset_product(0b1, 1)
    assert isinstance(circuit.load_circuit(exact.to_json()), circuit.SigmaPiSigma)
    assert isinstance(circuit.load_circuit(circuit.to_numeric(exact).to_json()), circuit.NumericCircuit)


class TestPdpSearch(unittest.TestCase):
    def test_finds_single_product_for_worked_example(self):
        result = circuit.pdp_search(WORKED, 1, 2, seeds=range(8), tol=1e-10)
        self.assertLess(result.residual, 1e-8)
        self.assertLess(result.verified_residual, 1e-6)
        self.assertEqual(result.circuit.shape, (1, 2, 3))

    def test_partial_assignment_is_completed(self):
        """Pinning three entries to an exact solution still leaves a completion with tiny residual."""
        e = -((4 * 15 ** 0.5 + 17) ** 0.5 + 1) / 2
        fixed = {(0, 0, 2): -1.0, (0, 1, 2): 1.0, (0, 1, 1): e}
        result = circuit.pdp_search(WORKED, 1, 2, seeds=range(16), tol=1e-10, fixed=fixed)
        self.assertLess(result.residual, 1e-6)
        for (u, v, w), value in fixed.items():
            self.assertAlmostEqual(result.circuit.array[u, v, w], value, places=12)

    def test_fixed_entry_outside_shape(self):
        with self.assertRaises(PreconditionError):
            circuit.pdp_search(WORKED, 1, 2, seeds=[0], fixed={(1, 0, 0): 1.0})

    def test_rejects_non_rational_target(self):
        from pdeforge.ring import GF2
        with self.assertRaises(PreconditionError):
            circuit.pdp_search(WORKED.map_ring(GF2), 1, 2, seeds=[0])

    def test_needs_a_seed(self):
        with self.assertRaises(PreconditionError):
            circuit.pdp_search(WORKED, 1, 2, seeds=[])


if __name__ == '__main__':
    unittest.main()
