import random
import unittest

import pytest

from pdeforge import boolean
from pdeforge.boolean import And, Const, Not, Or, TruthTable, Var
from pdeforge.circuit import subset_product, to_numeric
from pdeforge.errors import InputFormatError, InvalidPDEError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import MLPoly, evaluate_indicator
from pdeforge.ring import GF2, QQ, cyclotomic
from pdeforge.symmetric import cardinality_pdp


def _table(n, bits):
    return TruthTable(n, tuple((bits >> b) & 1 for b in range(1 << n)))


def test_boole_or():
    """x or y -> x + y - xy."""
    assert boolean.boole_encode(Or(Var(0), Var(1))) == MLPoly(2, QQ, {1: 1, 2: 1, 3: -1})


def test_boole_not_and_constants():
    """not x -> 1 - x, True -> 1."""
    assert boolean.boole_encode(Not(Var(0))) == MLPoly(1, QQ, {0: 1, 1: -1})
    assert boolean.boole_encode(Const(True), n=1) == MLPoly.constant(1)
    assert boolean.boole_encode(And(Var(0), Var(0))) == MLPoly.variable(1, 0)


def test_boole_encoding_matches_formula_on_cube():
    """The encoding takes the formula's value at every 0/1 point."""
    for f in boolean.enumerate_formulas(2, 2):
        p = boolean.boole_encode(f, 2)
        assert all(evaluate_indicator(p, mask) == int(f.evaluate(mask)) for mask in range(4))


def test_encoding_memo_stays_bounded_over_a_formula_sweep():
    """Sweeping thousands of formulas keeps at most 256 memoised encodings."""
    assert boolean._encode.cache_info().maxsize == 256
    formulas = boolean.enumerate_formulas(2, 2)
    assert len(formulas) > 256
    for f in formulas:
        boolean.boole_encode(f, 2)
    assert boolean._encode.cache_info().currsize <= 256
    assert boolean.boole_encode(Or(Var(0), Var(1)), 2) == MLPoly(2, QQ, {1: 1, 2: 1, 3: -1})


def test_boole_rejects_undeclared_variable():
    """A formula on x2 does not fit in 2 variables."""
    with pytest.raises(PreconditionError):
        boolean.boole_encode(Var(2), n=2)


def test_formula_json():
    """Nested operators parse into the formula tree."""
    f = boolean.formula_from_json({"or": [{"var": 0}, {"not": {"var": 1}}]})
    assert f == Or(Var(0), Not(Var(1)))
    assert f.leaf_count() == 2
    with pytest.raises(InputFormatError):
        boolean.formula_from_json({"and": [{"var": 0}]})


def test_worked_example_interpolation():
    """Table 1101 gives the PDE polynomial 1 + x0 + x0 x1."""
    table = TruthTable.from_json({"n": 2, "bits": "1101"})
    p = boolean.interpolate_sumproduct(table)
    assert p == MLPoly(2, QQ, {0: 1, 1: 1, 3: 1})
    assert [boolean.pde_evaluate(p, T, 1) for T in range(4)] == [1, 1, 0, 1]


def test_value_interpolant_of_worked_example():
    """The Lagrange sum-product interpolant agrees with the table pointwise."""
    table = TruthTable.from_json({"n": 2, "bits": "1101"})
    v = boolean.lagrange_sumproduct(table)
    assert v == MLPoly(2, QQ, {0: 1, 2: -1, 3: 1})
    assert [evaluate_indicator(v, mask) for mask in range(4)] == [1, 1, 0, 1]


def test_interpolation_edge_tables():
    """All-zeros gives 0; the top vertex alone gives x0 x1."""
    assert boolean.interpolate_sumproduct(_table(2, 0)).is_zero()
    assert boolean.interpolate_sumproduct(_table(2, 0b1000)) == MLPoly.monomial(2, [0, 1])


def test_binary_interpolation_examples():
    """Constant one interpolates to 1; XOR gives x0 + x1 over GF(2)."""
    assert boolean.lagrange_binary(_table(2, 0b1111)) == MLPoly.constant(2, GF2)
    assert boolean.interpolate_binary(_table(2, 0b0110)) == MLPoly(2, GF2, {1: 1, 2: 1})


def test_binary_and_sumproduct_agree_mod_two():
    """Both constructions give the same polynomial over GF(2) for every 2-input table."""
    for bits in range(16):
        table = _table(2, bits)
        assert boolean.lagrange_binary(table) == boolean.lagrange_sumproduct(table, GF2)
        assert boolean.interpolate_binary(table) == boolean.interpolate_sumproduct(table, GF2)


def test_binary_interpolation_size_guard():
    """Five inputs exceed the binary interpolation guard."""
    with pytest.raises(SizeGuardError):
        boolean.interpolate_binary(_table(5, 0))


def test_round_trip_on_all_three_input_tables():
    """verify_pde accepts the interpolant of every table on three inputs."""
    for bits in range(256):
        table = _table(3, bits)
        assert boolean.verify_pde(boolean.interpolate_sumproduct(table), table, 1).passed


def test_round_trip_on_random_larger_tables():
    rng = random.Random(3)
    for n in (6, 9):
        table = _table(n, rng.getrandbits(1 << n))
        assert boolean.verify_pde(boolean.interpolate_sumproduct(table), table, 2).passed


def test_truth_table_validation():
    """Bad bit strings and wrong lengths are rejected."""
    with pytest.raises(InputFormatError):
        TruthTable.from_json({"n": 1, "bits": "1x"})
    with pytest.raises(PreconditionError):
        TruthTable.from_json({"n": 2, "bits": "101"})


def test_pde_evaluate_rejects_non_unit_coefficient():
    """A coefficient of 2 is neither 0 nor a root of unity."""
    p = MLPoly(1, QQ, {1: 2})
    with pytest.raises(InvalidPDEError):
        boolean.pde_evaluate(p, 1, 2)


def test_pde_with_sign_coefficients():
    """tau_R = -1 is admissible for m = 2 but not m = 1."""
    p = MLPoly(2, QQ, {0: 1, 1: -1})
    assert boolean.pde_evaluate(p, 1, 2) == 1
    with pytest.raises(InvalidPDEError):
        boolean.pde_evaluate(p, 1, 1)


def test_pde_with_cyclotomic_coefficients():
    """Subset function with tau_R = zeta_3 on every monomial, m = 3."""
    ring = cyclotomic(3)
    z = ring.root_of_unity(1)
    p = MLPoly(2, ring, {0: z, 1: z})
    assert [boolean.pde_evaluate(p, T, 3) for T in range(4)] == [1, 1, 0, 0]
    assert boolean.verify_pde(p, boolean.subset_table(0b01, 2), 3).passed


def test_pdp_evaluate_on_every_representation():
    """Exact circuits, numeric circuits and cardinality programs evaluate alike."""
    c = subset_product(0b011, 3)
    table = boolean.subset_table(0b011, 3)
    for q in (c, to_numeric(c)):
        assert [boolean.pdp_evaluate(q, T) for T in range(8)] == list(table.bits)
    q = cardinality_pdp("ge", 2, 3)
    assert [boolean.pdp_evaluate(q, T) for T in range(8)] == list(boolean.cardinality_table("ge", 2, 3).bits)


def test_pdp_evaluate_monomial_outside_variables():
    with pytest.raises(PreconditionError):
        boolean.pdp_evaluate(MLPoly.constant(2), 0b100)


class TestVerifyPde(unittest.TestCase):
    def test_reports_mismatches(self):
        q = subset_product(0b01, 2)
        report = boolean.verify_pde(q, boolean.subset_table(0b10, 2), 1)
        self.assertFalse(report.passed)
        self.assertEqual(sorted(mm.subset for mm in report.mismatches), [[0], [1]])
        self.assertEqual(report.total, 4)

    def test_invalid_outputs_count_as_mismatches(self):
        q = MLPoly(1, QQ, {0: 1, 1: 3})
        report = boolean.verify_pde(q, _table(1, 0b11), 1)
        self.assertEqual([mm.actual for mm in report.mismatches], ["invalid"])

    def test_variable_count_mismatch(self):
        with self.assertRaises(PreconditionError):
            boolean.verify_pde(MLPoly.constant(2), _table(3, 0), 1)


if __name__ == '__main__':
    unittest.main()
