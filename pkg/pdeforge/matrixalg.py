# Matrix-algebraic constructions: determinants through anticommuting Grassmann
# generators and Vandermonde reduction, permanents through commuting nilpotents,
# and the PDEs for functional trees, cycle covers and GF(2) invertibility.
import concurrent.futures
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

import numpy as np
import sympy

from pdeforge.boolean import pde_evaluate
from pdeforge.config import worker_count
from pdeforge.errors import InputFormatError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import GeneralPoly, MLPoly
from pdeforge.orbits import legendre_alphas
from pdeforge.ring import QQ

logger = logging.getLogger("MatrixAlg")

LITERAL_MAX_N = 6
EXTERIOR_MAX_N = 16
PERMANENT_MAX_N = 12
TREE_SYMBOLIC_MAX_N = 6
TREE_EXACT_MAX_N = 10
CYCLES_MAX_N = 10
FDET_MAX_N = 3
SINGULAR_TOL = 1e-12

_LADDER_Z = np.diag([1, -1])
_LADDER_A = np.array([[0, 0], [1, 0]])
_LADDER_I = np.eye(2, dtype=int)


def _guard(what, size, limit):
    if size > limit:
        logger.warning(f"Refusing {what}={size}: limit is {limit}")
        raise SizeGuardError(what, size, limit)


@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        if any(len(row) != len(rows) for row in rows):
            raise PreconditionError("matrix is not square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_json(cls, obj):
        rows = obj.get("rows") if isinstance(obj, dict) else obj
        try:
            parsed = tuple(tuple(Fraction(str(x)) for x in row) for row in rows)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"bad matrix document: {e}") from e
        return cls(parsed)

    def to_json(self):
        return {"n": self.n, "rows": [[str(x) for x in row] for row in self.rows]}

    def to_sympy(self):
        return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in self.rows])


def bit_matrix(M):
    """Validates a square 0/1 matrix given as nested lists."""
    rows = [[int(x) for x in row] for row in M]
    n = len(rows)
    if any(len(row) != n for row in rows) or any(x not in (0, 1) for row in rows for x in row):
        raise PreconditionError("expected a square 0/1 matrix")
    return rows


def matrix_mask(M):
    """Monomial of prod A[i,j]^M[i,j] over variables indexed n*i + j."""
    n = len(M)
    return sum(1 << (n * i + j) for i in range(n) for j in range(n) if M[i][j])


def mask_matrix(mask, n):
    return [[(mask >> (n * i + j)) & 1 for j in range(n)] for i in range(n)]


# Grassmann generators

def grassmann_theta(j, n):
    """Theta_j = Z^(x)j (x) a (x) I^(x)(n-1-j) as a dense integer matrix."""
    _guard("literal Grassmann size", n, LITERAL_MAX_N)
    if not 0 <= j < n:
        raise PreconditionError(f"generator index {j} outside 0..{n - 1}")
    out = np.ones((1, 1), dtype=int)
    for k in range(n):
        factor = _LADDER_Z if k < j else _LADDER_A if k == j else _LADDER_I
        out = np.kron(out, factor)
    return out


def anticommutation_holds(n):
    thetas = [grassmann_theta(j, n) for j in range(n)]
    for i, ti in enumerate(thetas):
        if np.any(ti @ ti):
            return False
        for tj in thetas[i + 1:]:
            if np.any(ti @ tj + tj @ ti):
                return False
    return True


@lru_cache(maxsize=None)
def _theta_columns(n):
    """Per generator: column -> (row, sign) of its single nonzero, read off the Kronecker matrix."""
    out = []
    for j in range(n):
        theta = grassmann_theta(j, n)
        rows, cols = np.nonzero(theta)
        out.append({int(c): (int(r), int(theta[r, c])) for r, c in zip(rows, cols)})
    return tuple(out)


def _literal_entry(A):
    n = A.n
    columns = _theta_columns(n)
    state = {0: Fraction(1)}
    for i in reversed(range(n)):
        nxt = {}
        for j in range(n):
            coeff = A[i, j]
            if not coeff:
                continue
            for col, value in state.items():
                if col in columns[j]:
                    row, sign = columns[j][col]
                    nxt[row] = nxt.get(row, 0) + sign * coeff * value
        state = nxt
    return state.get((1 << n) - 1, Fraction(0))


def exterior_product_entry(rows, zero):
    """Top coefficient of prod_i (sum_j rows[i][j] theta_j) on subset bitsets.

    Entries only need +, * and unary minus; the empty product is zero + 1.
    """
    n = len(rows)
    state = {0: zero + 1}
    for i in reversed(range(n)):
        nxt = {}
        for j in range(n):
            entry = rows[i][j]
            bit = 1 << j
            for b, value in state.items():
                if b & bit:
                    continue
                term = entry * value
                if (b & (bit - 1)).bit_count() % 2:
                    term = -term
                nxt[b | bit] = nxt[b | bit] + term if b | bit in nxt else term
        state = nxt
    return state.get((1 << n) - 1, zero)


def det_grassmann(A, mode="auto"):
    if mode == "auto":
        mode = "literal" if A.n <= LITERAL_MAX_N else "exterior"
    if mode == "literal":
        _guard("literal Grassmann size", A.n, LITERAL_MAX_N)
        return _literal_entry(A)
    if mode == "exterior":
        _guard("exterior Grassmann size", A.n, EXTERIOR_MAX_N)
        return exterior_product_entry(A.rows, Fraction(0))
    raise PreconditionError(f"unknown Grassmann mode {mode!r}")


def det_cofactor(A):
    """Laplace expansion along the last filled row, memoised on the column subset."""
    n = A.n
    memo = {0: Fraction(1)}

    def minor(cols):
        if cols in memo:
            return memo[cols]
        row = cols.bit_count() - 1
        total = Fraction(0)
        above = 0
        for j in reversed(range(n)):
            if cols >> j & 1:
                if A[row, j]:
                    term = A[row, j] * minor(cols & ~(1 << j))
                    total += -term if above % 2 else term
                above += 1
        memo[cols] = total
        return total

    return minor((1 << n) - 1)


def det_vandermonde(A):
    """prod_i A[i,0] * prod_{i<j}(t_j - t_i), then t_i^j -> A[i,j]/A[i,0] for j descending."""
    n = A.n
    for i in range(n):
        if A[i, 0] == 0:
            raise PreconditionError(f"A[{i},0] is zero; the Vandermonde reduction divides by it")
    cap = max(n - 1, 1)
    poly = GeneralPoly.constant(n, QQ, cap)
    for j in range(n):
        for i in range(j):
            poly = poly * (GeneralPoly.variable(n, j, QQ, cap) - GeneralPoly.variable(n, i, QQ, cap))
    for power in range(n - 1, 0, -1):
        for i in range(n):
            poly = poly.substitute_power(i, power, A[i, power] / A[i, 0])
    if any(any(exps) for exps, _ in poly.terms()):
        raise AssertionError("Vandermonde reduction left a non-constant term")
    value = poly.coefficient((0,) * n).to_fraction()
    for i in range(n):
        value *= A[i, 0]
    return value


def determinant(A, method="grassmann"):
    methods = {"grassmann": det_grassmann, "vandermonde": det_vandermonde, "cofactor": det_cofactor}
    if method not in methods:
        raise PreconditionError(f"unknown determinant method {method!r}")
    return methods[method](A)


# Permanent

def nilpotent_product_entry(rows, zero):
    """Coefficient of y_0...y_{n-1} in prod_i sum_j rows[i][j] y_j with y_j^2 = 0."""
    n = len(rows)
    state = {0: zero + 1}
    for row in rows:
        nxt = {}
        for b, value in state.items():
            for j in range(n):
                bit = 1 << j
                if b & bit:
                    continue
                term = row[j] * value
                nxt[b | bit] = nxt[b | bit] + term if b | bit in nxt else term
        state = nxt
    return state.get((1 << n) - 1, zero)


def permanent(A):
    _guard("permanent size", A.n, PERMANENT_MAX_N)
    return nilpotent_product_entry(A.rows, Fraction(0))


def permanent_brute(A):
    total = Fraction(0)
    for sigma in permutations(range(A.n)):
        term = Fraction(1)
        for i, j in enumerate(sigma):
            term *= A[i, j]
        total += term
    return total


# Tree, cycle and GF(2) PDEs

def _symbols(n, support=None):
    """A[i,j] as the variable n*i + j, or zero outside `support`."""
    N = n * n
    return [[MLPoly.variable(N, n * i + j) if support is None or support[i][j] else MLPoly.zero(N)
             for j in range(n)] for i in range(n)]


def _p_tree(A, zero):
    n = len(A)
    total = zero
    for i in range(n):
        if n == 1:
            total = total + A[0][0]
            continue
        keep = [k for k in range(n) if k != i]
        laplacian = []
        for r in keep:
            off = zero
            for c in range(n):
                if c != r:
                    off = off + A[r][c]
            laplacian.append([off if r == c else -A[r][c] for c in keep])
        total = total + A[i][i] * exterior_product_entry(laplacian, zero)
    return total


def p_tree(A=None, n=None, support=None):
    """sum_i A[i,i] det((diag(A 1) - A) with row and column i removed).

    With A=None the entries are the symbolic variables A[i,j] = x[n*i+j].
    """
    if A is None:
        _guard("symbolic tree size", n, TREE_SYMBOLIC_MAX_N if support is None else TREE_EXACT_MAX_N)
        return _p_tree(_symbols(n, support), MLPoly.zero(n * n))
    _guard("exact tree size", A.n, TREE_EXACT_MAX_N)
    return _p_tree([list(row) for row in A.rows], Fraction(0))


@lru_cache(maxsize=None)
def _p_tree_symbolic(n):
    return p_tree(n=n)


def f_tree(M, m=None):
    """PDE for 'M is the adjacency matrix of a functional tree'."""
    M = bit_matrix(M)
    n = len(M)
    # every term of P_Tree has exactly one factor per row
    if sum(map(sum, M)) != n:
        return 0
    poly = _p_tree_symbolic(n) if n <= TREE_SYMBOLIC_MAX_N else p_tree(n=n, support=M)
    return pde_evaluate(poly, matrix_mask(M), m)


def f_cycles(M, m=None):
    """PDE for 'M is a spanning union of directed cycles', from Per(A o U) restricted to M."""
    M = bit_matrix(M)
    n = len(M)
    _guard("cycle cover size", n, CYCLES_MAX_N)
    if sum(map(sum, M)) != n:
        return 0
    poly = nilpotent_product_entry(_symbols(n, M), MLPoly.zero(n * n))
    return pde_evaluate(poly, matrix_mask(M), m)


def _span(vectors):
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return span


@lru_cache(maxsize=None)
def p_det_gf2(n):
    """Indicator polynomial over all ordered bases (v_0, ..., v_{n-1}) of GF(2)^n, v_j as column j."""
    _guard("GF(2) determinant size", n, FDET_MAX_N)
    bases = [()]
    for _ in range(n):
        bases = [basis + (v,) for basis in bases for v in range(1, 1 << n) if v not in _span(basis)]
    terms = {}
    for basis in bases:
        mask = 0
        for j, v in enumerate(basis):
            for i in range(n):
                if v >> i & 1:
                    mask |= 1 << (n * i + j)
        terms[mask] = 1
    logger.info(f"P_det on {n}x{n} matrices has {len(terms)} terms")
    return MLPoly(n * n, QQ, terms)


def p_det_term_count(n):
    count = 1
    for k in range(n):
        count *= (1 << n) - (1 << k)
    return count


def f_det_gf2(T, n, m=None):
    if T < 0 or T >> (n * n):
        raise PreconditionError(f"bit set {T} does not fit an {n}x{n} matrix")
    return pde_evaluate(p_det_gf2(n), T, m)


# Oracles

def functional_tree_oracle(M):
    M = bit_matrix(M)
    n = len(M)
    if any(sum(row) != 1 for row in M):
        return 0
    f = [row.index(1) for row in M]
    image = set(range(n))
    for _ in range(n - 1):
        image = {f[i] for i in image}
    return int(len(image) == 1)


def permutation_matrix_oracle(M):
    M = bit_matrix(M)
    return int(all(sum(row) == 1 for row in M) and all(sum(col) == 1 for col in zip(*M)))


def gf2_rank(M):
    rows = [sum(bit << j for j, bit in enumerate(row)) for row in bit_matrix(M)]
    rank = 0
    for col in range(len(rows)):
        pivot = next((r for r in range(rank, len(rows)) if rows[r] >> col & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r] >> col & 1:
                rows[r] ^= rows[rank]
        rank += 1
    return rank


@dataclass
class ExhaustiveReport:
    kind: str
    n: int
    checked: int
    mismatches: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.mismatches

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "checked": self.checked, "passed": self.passed,
                "mismatches": self.mismatches}


def exhaustive_check(kind, n):
    """Compares a matrix PDE with its oracle on all 2^(n*n) 0/1 matrices."""
    checks = {
        "ftree": (f_tree, functional_tree_oracle),
        "fcycles": (f_cycles, permutation_matrix_oracle),
        "fdet2": (lambda M: f_det_gf2(matrix_mask(M), n), lambda M: int(gf2_rank(M) == n)),
    }
    if kind not in checks:
        raise PreconditionError(f"unknown matrix PDE {kind!r}")
    pde, oracle = checks[kind]
    masks = list(range(1 << (n * n)))

    def check(mask):
        M = mask_matrix(mask, n)
        return mask if pde(M) != oracle(M) else None

    with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count(len(masks))) as executor:
        mismatches = [mask for mask in executor.map(check, masks) if mask is not None]
    if mismatches:
        logger.warning(f"{kind} disagrees with its oracle on {len(mismatches)} matrices at n={n}")
    return ExhaustiveReport(kind, n, len(masks), mismatches)


# Transcendental integer-roots circuit

@dataclass
class RootsReport:
    d: int
    tol: float
    root_values: list
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_json(self):
        return {"d": self.d, "tol": self.tol, "passed": self.passed,
                "root_values": self.root_values, "failures": self.failures}


def transcendental_value(x, d):
    """(e^(2 pi i x) - 1) / (e^(2 pi i x / d) - 1), with the limit d at multiples of d."""
    x = np.asarray(x, dtype=float)
    num = np.exp(2j * np.pi * x) - 1
    den = np.exp(2j * np.pi * x / d) - 1
    singular = np.abs(den) < SINGULAR_TOL
    safe = np.where(singular, 1, den)
    return np.where(singular, complex(d), num / safe)


def integer_roots_check(d, tol=1e-9, grid_step=0.05):
    if d < 2:
        raise PreconditionError(f"need d >= 2, got {d}")
    failures = []
    ks = np.arange(1, d)
    values = np.abs(transcendental_value(ks, d))
    for k, v in zip(ks, values):
        if v > tol:
            failures.append(f"|f({k})| = {v:.3e} > {tol:.1e}")
    for x in (0, d):
        v = abs(complex(transcendental_value(x, d)))
        if abs(v - d) > tol:
            failures.append(f"|f({x})| = {v:.12g}, expected {d}")
    grid = np.arange(-d, 2 * d + grid_step / 2, grid_step)
    grid = grid[np.abs(grid - np.round(grid)) >= 0.25 - 1e-12]
    small = grid[np.abs(transcendental_value(grid, d)) <= 1e3 * tol]
    for x in small:
        failures.append(f"spurious near-root at x = {x:.4f}")
    if failures:
        logger.warning(f"Integer-roots check for d={d} found {len(failures)} failures")
    return RootsReport(d, tol, [float(v) for v in values], failures)


# Size reports and generators

def cycles_width(n):
    """Width of one product with n! expanded terms, both via sympy and Legendre's formula."""
    via_factor = sum(int(e) for e in sympy.factorint(factorial(n)).values())
    via_legendre = sum(legendre_alphas(n).values())
    if via_factor != via_legendre:
        raise AssertionError(f"factor width {via_factor} != Legendre sum {via_legendre}")
    return via_factor


def grassmann_size(n):
    """One product of n linear forms in the n generators theta_j."""
    return (1, n, 1 + n)


def vandermonde_size(n):
    """n first-column factors and C(n,2) differences over the 2n first-two-column variables."""
    return (1, comb(n + 1, 2), 2 * n)


def random_rational_matrix(n, rng):
    return ExactMatrix(tuple(
        tuple(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(n)) for _ in range(n)))


def random_nonzero_column_matrix(n, rng):
    A = random_rational_matrix(n, rng)
    rows = [list(row) for row in A.rows]
    for row in rows:
        if row[0] == 0:
            row[0] = Fraction(int(rng.integers(1, 6)))
    return ExactMatrix(tuple(tuple(row) for row in rows))


def random_01_matrix(n, rng):
    return [[int(x) for x in row] for row in rng.integers(0, 2, size=(n, n))]

