# Boolean functions, Boole's algebraic correspondence, interpolation and PDE evaluation.
import concurrent.futures
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from pdeforge.circuit import NumericCircuit, SigmaPiSigma, expand, numeric_coefficients
from pdeforge.config import get_settings, worker_count
from pdeforge.errors import InputFormatError, InvalidPDEError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import MLPoly, as_mask, diff_extract, mask_vars, mul
from pdeforge.ring import GF2, QQ
from pdeforge.symmetric import UnivariateInL, pdp_evaluate_cardinality

logger = logging.getLogger("Boolean")

TABLE_MAX_VARS = 20
VERIFY_MAX_VARS = 16
BINARY_MAX_VARS = 4
NUMERIC_PDE_TOL = 1e-6


@dataclass(frozen=True)
class TruthTable:
    """Bit b of the table is F at the point with x_i = (b >> i) & 1."""

    n: int
    bits: tuple

    def __post_init__(self):
        if not 0 <= self.n <= TABLE_MAX_VARS:
            raise SizeGuardError("truth table inputs", self.n, TABLE_MAX_VARS)
        if len(self.bits) != 1 << self.n:
            raise PreconditionError(f"truth table for n={self.n} needs {1 << self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise PreconditionError("truth table entries must be 0 or 1")

    def value(self, mask):
        return self.bits[as_mask(mask)]

    def ones(self):
        return [b for b, bit in enumerate(self.bits) if bit]

    @classmethod
    def from_function(cls, n, func):
        if n > TABLE_MAX_VARS:
            raise SizeGuardError("truth table inputs", n, TABLE_MAX_VARS)
        return cls(n, tuple(1 if func(mask) else 0 for mask in range(1 << n)))

    @classmethod
    def from_formula(cls, formula, n):
        return cls.from_function(n, formula.evaluate)

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["n"])
            raw = obj["bits"]
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"bad truth table document: {e}") from e
        if isinstance(raw, str):
            if set(raw) - {"0", "1"}:
                raise InputFormatError("truth table bits must be a 0/1 string")
            bits = tuple(int(c) for c in raw)
        else:
            bits = tuple(int(c) for c in raw)
        return cls(n, bits)

    def to_json(self):
        return {"n": self.n, "bits": "".join(str(b) for b in self.bits)}


# Oracle tables

def subset_table(S, n):
    mask = as_mask(S)
    return TruthTable.from_function(n, lambda T: T & ~mask == 0)


def superset_table(S, n):
    mask = as_mask(S)
    return TruthTable.from_function(n, lambda T: T & mask == mask)


def cardinality_table(kind, s, n):
    tests = {"le": lambda k: k <= s, "ge": lambda k: k >= s, "eq": lambda k: k == s}
    if kind not in tests:
        raise PreconditionError(f"unknown cardinality kind {kind!r}")
    test = tests[kind]
    return TruthTable.from_function(n, lambda T: test(T.bit_count()))


# De Morgan formulas

@dataclass(frozen=True)
class Var:
    index: int

    def evaluate(self, mask):
        return bool(mask >> self.index & 1)

    def leaf_count(self):
        return 1

    def max_var(self):
        return self.index


@dataclass(frozen=True)
class Const:
    value: bool

    def evaluate(self, mask):
        return self.value

    def leaf_count(self):
        return 1

    def max_var(self):
        return -1


@dataclass(frozen=True)
class Not:
    child: object

    def evaluate(self, mask):
        return not self.child.evaluate(mask)

    def leaf_count(self):
        return self.child.leaf_count()

    def max_var(self):
        return self.child.max_var()


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def evaluate(self, mask):
        return self.left.evaluate(mask) and self.right.evaluate(mask)

    def leaf_count(self):
        return self.left.leaf_count() + self.right.leaf_count()

    def max_var(self):
        return max(self.left.max_var(), self.right.max_var())


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def evaluate(self, mask):
        return self.left.evaluate(mask) or self.right.evaluate(mask)

    def leaf_count(self):
        return self.left.leaf_count() + self.right.leaf_count()

    def max_var(self):
        return max(self.left.max_var(), self.right.max_var())


def formula_from_json(obj):
    """{"var": i} | {"const": true} | {"not": f} | {"and": [f, g]} | {"or": [f, g]}"""
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InputFormatError(f"bad formula node {obj!r}")
    (op, arg), = obj.items()
    if op == "var":
        return Var(int(arg))
    if op == "const":
        return Const(bool(arg))
    if op == "not":
        return Not(formula_from_json(arg))
    if op in ("and", "or"):
        if not isinstance(arg, list) or len(arg) != 2:
            raise InputFormatError(f"'{op}' needs exactly two children")
        cls = And if op == "and" else Or
        return cls(formula_from_json(arg[0]), formula_from_json(arg[1]))
    raise InputFormatError(f"unknown formula operator {op!r}")


def enumerate_formulas(n, depth, distinct_children=False):
    """All formulas of depth <= `depth` over n variables.

    With distinct_children, each level is built from one representative per
    truth table of the previous level, which keeps depth 3 enumerable.
    """
    level = [Var(i) for i in range(n)] + [Const(False), Const(True)]
    for _ in range(depth):
        children = level
        if distinct_children:
            seen = {}
            for f in level:
                seen.setdefault(TruthTable.from_formula(f, n).bits, f)
            children = list(seen.values())
        nxt = list(level)
        nxt += [Not(f) for f in children]
        nxt += [And(a, b) for a in children for b in children]
        nxt += [Or(a, b) for a in children for b in children]
        level = nxt
    return level


@lru_cache(maxsize=256)
def _encode(formula, n):
    if isinstance(formula, Var):
        return MLPoly.variable(n, formula.index)
    if isinstance(formula, Const):
        return MLPoly.constant(n, QQ, 1 if formula.value else 0)
    if isinstance(formula, Not):
        return 1 - _encode(formula.child, n)
    left, right = _encode(formula.left, n), _encode(formula.right, n)
    if isinstance(formula, And):
        return mul(left, right)
    return left + right - mul(left, right)


def boole_encode(formula, n=None):
    """not x -> 1-x, x or y -> x+y-xy, x and y -> xy, with reduced products."""
    top = formula.max_var()
    n = top + 1 if n is None else n
    if top >= n:
        raise PreconditionError(f"formula uses x{top} but only {n} variables are declared")
    return _encode(formula, n)


# Interpolation

def lagrange_sumproduct(table, ring=QQ):
    """Value interpolant sum over F(b)=1 of prod_i (x_i - (1-b_i)) / (2b_i - 1), expanded and reduced.

    Each product expands to sum_{R containing b} (-1)^{|R|-|b|} x^R.
    """
    if ring not in (QQ, GF2):
        raise PreconditionError(f"sum-product interpolation works over Q or GF(2), not {ring}")
    n = table.n
    full = (1 << n) - 1
    acc = {}
    for b in table.ones():
        free = full & ~b
        sub = free
        while True:
            mask = b | sub
            sign = -1 if sub.bit_count() % 2 else 1
            acc[mask] = acc.get(mask, 0) + sign
            if sub == 0:
                break
            sub = (sub - 1) & free
    return MLPoly(n, ring, {mask: ring.from_int(c) for mask, c in acc.items()})


def lagrange_binary(table):
    """Lagrange product over integer binary encodings, reduced mod x^2-x and then mod 2.

    Denominators enc(b) - enc(d) may be even, so the product is formed over Q
    and only the final integer coefficients are read in GF(2).
    """
    n = table.n
    if n > BINARY_MAX_VARS:
        raise SizeGuardError("binary interpolation inputs", n, BINARY_MAX_VARS)
    encoding = MLPoly(n, QQ, {1 << j: 1 << j for j in range(n)})
    total = MLPoly.zero(n, QQ)
    points = range(1 << n)
    for b in table.ones():
        term = MLPoly.constant(n, QQ)
        for d in points:
            if d == b:
                continue
            term = mul(term, (encoding - d) * Fraction(1, b - d))
        total = total + term
    return total.map_ring(GF2)


def hypercube_coefficients(v):
    """sum_T v(1_T) x^T: reads the values of an interpolant off as coefficients."""
    if v.n > TABLE_MAX_VARS:
        raise SizeGuardError("hypercube inputs", v.n, TABLE_MAX_VARS)
    values = [v.ring.zero()] * (1 << v.n)
    for mask, coeff in v.terms():
        values[mask] = coeff
    # subset-sum transform, one variable at a time
    for i in range(v.n):
        bit = 1 << i
        for mask in range(1 << v.n):
            if mask & bit:
                values[mask] = values[mask] + values[mask ^ bit]
    return MLPoly(v.n, v.ring, dict(enumerate(values)))


def interpolate_sumproduct(table, ring=QQ):
    """PDE polynomial of the table, read off the sum-product interpolant."""
    return hypercube_coefficients(lagrange_sumproduct(table, ring))


def interpolate_binary(table):
    """PDE polynomial of the table over GF(2), read off the binary-encoding interpolant."""
    return hypercube_coefficients(lagrange_binary(table))


# PDE / PDP evaluation

def _as_bit(value, T):
    if value.is_zero():
        return 0
    if value.is_one():
        return 1
    raise InvalidPDEError(mask_vars(as_mask(T)), value.to_json())


def pde_evaluate(p, T, m=None):
    """(coefficient of T in p)^m, which must be 0 or 1."""
    m = get_settings().default_m if m is None else m
    return _as_bit(diff_extract(p, T) ** m, T)


def numeric_bit(value, T, m, tol=NUMERIC_PDE_TOL):
    power = complex(value) ** m
    if abs(power) <= tol:
        return 0
    if abs(power - 1) <= tol:
        return 1
    raise InvalidPDEError(mask_vars(as_mask(T)), f"{power:.6g}")


def _canonical(q):
    """Coefficient lookup mask -> (kind, value) for any supported representation."""
    if isinstance(q, MLPoly):
        return q.n, lambda mask: ("exact", q.coefficient(mask))
    if isinstance(q, SigmaPiSigma):
        p = expand(q, reduce=True)
        return p.n, lambda mask: ("exact", p.coefficient(mask))
    if isinstance(q, NumericCircuit):
        coeffs = numeric_coefficients(q)
        return q.n, lambda mask: ("numeric", coeffs[mask])
    if isinstance(q, UnivariateInL):
        return q.n, lambda mask: ("cardinality", mask)
    raise PreconditionError(f"cannot evaluate a PDP given as {type(q).__name__}")


def _bit(q, lookup, mask, m):
    kind, value = lookup(mask)
    if kind == "exact":
        return _as_bit(value ** m, mask)
    if kind == "numeric":
        return numeric_bit(value, mask, m)
    return pdp_evaluate_cardinality(q, mask, m)


def pdp_evaluate(q, T, m=None):
    """PDE contract applied to the canonical representative of q modulo x_i^2 - x_i."""
    m = get_settings().default_m if m is None else m
    n, lookup = _canonical(q)
    mask = as_mask(T)
    if mask >> n:
        raise PreconditionError(f"monomial {mask_vars(mask)} outside {n} variables")
    return _bit(q, lookup, mask, m)


@dataclass
class Mismatch:
    subset: list
    expected: int
    actual: object

    def to_json(self):
        return {"T": self.subset, "expected": self.expected, "actual": self.actual}


@dataclass
class VerificationReport:
    n: int
    total: int
    mismatches: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.mismatches

    def to_json(self):
        return {"n": self.n, "total": self.total, "passed": self.passed,
                "mismatches": [mm.to_json() for mm in self.mismatches]}


def verify_pde(q, table, m=None, chunk=1024):
    """Compares the PDE/PDP output with the table on every subset T."""
    m = get_settings().default_m if m is None else m
    n, lookup = _canonical(q)
    if n != table.n:
        raise PreconditionError(f"representation has {n} variables, table has {table.n}")
    if n > VERIFY_MAX_VARS:
        raise SizeGuardError("verification inputs", n, VERIFY_MAX_VARS)

    def check(start):
        found = []
        for mask in range(start, min(start + chunk, 1 << n)):
            try:
                actual = _bit(q, lookup, mask, m)
            except InvalidPDEError:
                actual = "invalid"
            if actual != table.bits[mask]:
                found.append(Mismatch(mask_vars(mask), table.bits[mask], actual))
        return found

    starts = list(range(0, 1 << n, chunk))
    with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count(len(starts))) as executor:
        chunks = list(executor.map(check, starts))
    report = VerificationReport(n, 1 << n, [mm for part in chunks for mm in part])
    if not report.passed:
        logger.warning(f"PDE verification found {len(report.mismatches)} mismatches over {report.total} inputs")
    return report
