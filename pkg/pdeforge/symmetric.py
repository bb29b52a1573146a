# Symmetric functions and univariate-in-linear-functional programs.
#
# A UnivariateInL is stored in the binomial basis sum_t a_t * C(l, t), l = sum_i x_i.
# Since C(l, t) reduces to e_t modulo x_i^2 - x_i, the coefficient of any
# monomial of size t in the canonical representative is exactly a_t.
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import numpy as np

from pdeforge.circuit import NumericCircuit
from pdeforge.config import get_settings
from pdeforge.errors import ConvergenceError, InvalidPDEError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import GeneralPoly, MLPoly, as_mask, mask_vars, masks_of_size, mul
from pdeforge.ring import QQ

logger = logging.getLogger("Symmetric")

ROOT_TOL = 1e-9
ORBIT_SUM_MAX_VARS = 7


def elementary_symmetric(N, t, ring=QQ):
    if not 0 <= t <= N:
        raise PreconditionError(f"e_t needs 0 <= t <= N, got t={t}, N={N}")
    return MLPoly(N, ring, {mask: 1 for mask in masks_of_size(N, t)})


def linear_functional(N, ring=QQ):
    return MLPoly(N, ring, {1 << i: 1 for i in range(N)})


def power_sum(N, i, cap=None, ring=QQ):
    """p_i(x) = sum_j x_j^i, unreduced."""
    cap = max(i, 1) if cap is None else cap
    terms = {}
    for j in range(N):
        exps = [0] * N
        exps[j] = i
        terms[tuple(exps)] = 1
    return GeneralPoly(N, ring, cap, terms)


def _partitions(t, largest=None):
    """Partitions of t as multiplicity tuples (m_1, ..., m_t)."""
    largest = t if largest is None else largest
    if t == 0:
        yield {}
        return
    for part in range(min(t, largest), 0, -1):
        for rest in _partitions(t - part, part):
            out = dict(rest)
            out[part] = out.get(part, 0) + 1
            yield out


@dataclass(frozen=True)
class NewtonTerm:
    multiplicities: tuple
    coefficient: Fraction

    def to_json(self):
        return {"m": list(self.multiplicities), "coeff": str(self.coefficient)}


def newton_e_from_p(t):
    """e_t = (-1)^t sum over sum_i i*m_i = t of prod_i (-p_i)^{m_i} / (m_i! i^{m_i})."""
    if t < 1:
        raise PreconditionError(f"Newton expansion needs t >= 1, got {t}")
    out = []
    for parts in _partitions(t):
        coeff = Fraction((-1) ** t)
        for i, m in parts.items():
            coeff *= Fraction((-1) ** m, factorial(m) * i ** m)
        out.append(NewtonTerm(tuple(parts.get(i, 0) for i in range(1, t + 1)), coeff))
    return sorted(out, key=lambda term: term.multiplicities)


def newton_substitute(t, N, ring=QQ):
    """Substitutes p_i(x) into newton_e_from_p(t) in the unreduced ring."""
    powers = {i: power_sum(N, i, cap=t, ring=ring) for i in range(1, t + 1)}
    total = GeneralPoly(N, ring, t)
    for term in newton_e_from_p(t):
        prod = GeneralPoly.constant(N, ring, t)
        for i, m in enumerate(term.multiplicities, start=1):
            for _ in range(m):
                prod = prod * powers[i]
        total = total + prod * term.coefficient
    return total


def binomial_to_monomial(binomial):
    """Exact change of basis: sum_t a_t C(l, t) -> sum_k c_k l^k."""
    degree = len(binomial) - 1
    out = [Fraction(0)] * (degree + 1)
    falling = [Fraction(1)]
    for t, a in enumerate(binomial):
        if t > 0:
            shifted = [Fraction(0)] + falling
            for k in range(len(falling)):
                shifted[k] -= (t - 1) * falling[k]
            falling = shifted
        if a:
            scale = Fraction(a) / factorial(t)
            for k, c in enumerate(falling):
                out[k] += scale * c
    return tuple(out)


def monomial_to_binomial(monomial):
    """Inverse change of basis via forward differences at l = 0, 1, ..., D."""
    values = [sum(Fraction(c) * k ** e for e, c in enumerate(monomial)) for k in range(len(monomial))]
    return tuple(
        sum((-1) ** (t - k) * comb(t, k) * values[k] for k in range(t + 1)) for t in range(len(monomial)))


def _trim(vector):
    vector = list(vector)
    while len(vector) > 1 and vector[-1] == 0:
        vector.pop()
    return tuple(Fraction(v) for v in vector)


@dataclass(frozen=True)
class UnivariateInL:
    n: int
    binomial: tuple
    monomial: tuple = None
    roots: tuple = None
    tol: float = None

    def __post_init__(self):
        object.__setattr__(self, "binomial", _trim(self.binomial))
        if self.degree > self.n:
            raise PreconditionError(f"degree {self.degree} exceeds the {self.n} ambient variables")
        if self.monomial is not None:
            object.__setattr__(self, "monomial", _trim(self.monomial))
            if binomial_to_monomial(self.binomial) != self.monomial:
                raise PreconditionError("binomial and monomial representations disagree")

    @property
    def degree(self):
        return len(self.binomial) - 1

    def coefficient_for_size(self, k):
        return self.binomial[k] if k < len(self.binomial) else Fraction(0)

    def monomial_basis(self):
        return self.monomial if self.monomial is not None else _trim(binomial_to_monomial(self.binomial))

    def with_monomial(self):
        return UnivariateInL(self.n, self.binomial, self.monomial_basis(), self.roots, self.tol)

    def to_mlpoly(self, ring=QQ):
        """sum_t a_t e_t: the canonical multilinear representative."""
        terms = {}
        for t, a in enumerate(self.binomial):
            if a:
                for mask in masks_of_size(self.n, t):
                    terms[mask] = ring.from_fraction(a)
        return MLPoly(self.n, ring, terms)

    def expand_monomial_basis(self, ring=QQ):
        """sum_k c_k l^k expanded with on-the-fly reduction; the slow oracle path."""
        ell = linear_functional(self.n, ring)
        power = MLPoly.constant(self.n, ring)
        total = MLPoly.zero(self.n, ring)
        for k, c in enumerate(self.monomial_basis()):
            if k:
                power = mul(power, ell)
            if c:
                total = total + power * ring.from_fraction(c)
        return total

    def to_json(self):
        out = {
            "n": self.n,
            "degree": self.degree,
            "binomial": [str(a) for a in self.binomial],
            "monomial": [str(c) for c in self.monomial_basis()],
        }
        if self.roots is not None:
            out["roots"] = [[float(r.real), float(r.imag)] for r in self.roots]
            out["tol"] = self.tol
        return out


def e_to_binomial(t, N=None):
    """e_t is congruent to C(l, t): binomial vector with a_t = 1 only."""
    if t < 0:
        raise PreconditionError(f"t must be nonnegative, got {t}")
    N = t if N is None else N
    return UnivariateInL(N, tuple(1 if k == t else 0 for k in range(t + 1))).with_monomial()


def cardinality_pdp(kind, s, N):
    if not 0 <= s <= N:
        raise PreconditionError(f"s={s} outside 0..{N}")
    if kind == "le":
        vector = [1] * (s + 1)
    elif kind == "ge":
        vector = [0] * s + [1] * (N - s + 1)
    elif kind == "eq":
        vector = [0] * s + [1]
    else:
        raise PreconditionError(f"unknown cardinality kind {kind!r}")
    return UnivariateInL(N, tuple(vector)).with_monomial()


def pdp_evaluate_cardinality(q, T, m=None):
    """a_{|T|}^m, which must be 0 or 1."""
    m = get_settings().default_m if m is None else m
    mask = as_mask(T)
    if mask >> q.n:
        raise PreconditionError(f"monomial {mask_vars(mask)} outside {q.n} variables")
    value = q.coefficient_for_size(mask.bit_count()) ** m
    if value == 0:
        return 0
    if value == 1:
        return 1
    raise InvalidPDEError(mask_vars(mask), str(value))


@dataclass
class RootFactorization:
    lead: Fraction
    roots: tuple
    residuals: tuple = field(default_factory=tuple)

    @property
    def gammas(self):
        return tuple(-r for r in self.roots)

    def reconstruct(self):
        """Monomial-basis coefficients (lowest degree first) of lead * prod (l - r)."""
        return (float(self.lead) * np.poly(np.array(self.roots)))[::-1] if self.roots else np.array([float(self.lead)])

    def to_json(self):
        return {
            "lead": str(self.lead),
            "roots": [[float(r.real), float(r.imag)] for r in self.roots],
            "residuals": [float(r) for r in self.residuals],
        }


def _relative_residual(coeffs, root):
    value = np.polyval(coeffs[::-1], root)
    scale = sum(abs(c) * abs(root) ** k for k, c in enumerate(coeffs))
    return abs(value) / scale if scale else abs(value)


def factor_roots(q, tol=ROOT_TOL):
    """Companion-matrix roots of the monomial form, ordered by (real, imag).

    Each root r must satisfy |q(r)| <= tol * sum_k |c_k| |r|^k, the residual scaled
    by the size of the terms being summed; ConvergenceError otherwise. The scaled
    residuals are kept on the result.
    """
    monomial = q.monomial_basis()
    degree = len(monomial) - 1
    lead = monomial[-1]
    if degree == 0:
        return RootFactorization(lead, ())
    coeffs = np.array([float(c) for c in monomial])
    companion = np.zeros((degree, degree))
    companion[1:, :-1] = np.eye(degree - 1)
    companion[:, -1] = -coeffs[:-1] / coeffs[-1]
    roots = np.linalg.eigvals(companion).astype(complex)

    derivative = np.array([k * c for k, c in enumerate(coeffs)][1:])
    for _ in range(3):
        # polish each root with Newton steps on the original coefficients
        step = np.polyval(coeffs[::-1], roots) / np.where(
            np.polyval(derivative[::-1], roots) == 0, 1, np.polyval(derivative[::-1], roots))
        roots = roots - step

    roots = sorted(roots, key=lambda r: (round(r.real, 12), round(r.imag, 12)))
    residuals = tuple(_relative_residual(coeffs, r) for r in roots)
    worst = max(residuals)
    if worst > tol:
        logger.warning(f"Root finding residual {worst:.3e} above tolerance {tol:.1e}")
        raise ConvergenceError(f"companion roots of degree {degree} polynomial failed", worst)
    return RootFactorization(lead, tuple(complex(r) for r in roots), residuals)


def product_circuit(q, factorization=None):
    """lead * prod_j (l - r_j) as a 1 x D x (1+N) numeric circuit."""
    factorization = factorization or factor_roots(q)
    n = q.n
    if not factorization.roots:
        array = np.zeros((1, 1, n + 1))
        array[0, 0, 0] = float(factorization.lead)
        return NumericCircuit(array)
    roots = np.array(factorization.roots)
    array = np.ones((1, len(roots), n + 1), dtype=complex)
    array[0, :, 0] = -roots
    array[0, 0, :] *= float(factorization.lead)
    if np.allclose(array.imag, 0):
        array = array.real
    return NumericCircuit(array)


def normalised_linear_functional(N):
    """sum_{sigma in S_N} x[sigma(0)] / (N-1)!, which equals l."""
    if N > ORBIT_SUM_MAX_VARS:
        raise SizeGuardError("orbit-sum variables", N, ORBIT_SUM_MAX_VARS)
    if N == 0:
        return MLPoly.zero(0)
    total = MLPoly.zero(N)
    for sigma in permutations(range(N)):
        total = total + MLPoly.variable(N, sigma[0])
    return total * Fraction(1, factorial(N - 1))
