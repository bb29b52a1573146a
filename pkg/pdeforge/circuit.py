# Sum-of-products-of-linear-forms circuits and the hypermatrices underlying them.
import concurrent.futures
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from pdeforge.config import worker_count
from pdeforge.errors import InputFormatError, NonMultilinearError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import GeneralPoly, MLPoly, as_mask, mask_vars, mul
from pdeforge.ring import QQ, Ring

logger = logging.getLogger("Circuit")

NUMERIC_MAX_VARS = 16
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SizeReport:
    rho: int
    d: int
    width: int
    size: int

    def as_tuple(self):
        return (self.rho, self.d, self.width, self.size)


class SigmaPiSigma:
    """Exact hypermatrix B[u][v][w] of shape rho x d x (1+n).

    Denotes sum_u prod_v (B[u,v,0] + sum_w B[u,v,1+w] * x_w).
    """

    def __init__(self, n, entries, ring=QQ):
        self.n = n
        self.ring = ring
        rows = []
        for summand in entries:
            factors = []
            for form in summand:
                if len(form) != n + 1:
                    raise PreconditionError(f"linear form has {len(form)} entries, expected {n + 1}")
                factors.append(tuple(ring.coerce(x) for x in form))
            rows.append(tuple(factors))
        if not rows or not rows[0]:
            raise PreconditionError("a circuit needs at least one summand and one factor")
        if any(len(r) != len(rows[0]) for r in rows):
            raise PreconditionError("every summand must have the same number of factors")
        self.entries = tuple(rows)

    @property
    def rho(self):
        return len(self.entries)

    @property
    def d(self):
        return len(self.entries[0])

    @property
    def shape(self):
        return (self.rho, self.d, self.n + 1)

    def size(self):
        return self.rho * self.d * (self.n + 1)

    def linear_form(self, u, v):
        form = self.entries[u][v]
        terms = {0: form[0]}
        for w in range(self.n):
            terms[1 << w] = form[w + 1]
        return MLPoly(self.n, self.ring, terms)

    def to_json(self):
        return {
            "rho": self.rho, "d": self.d, "n": self.n, "ring": self.ring.tag,
            "entries": [[[x.to_json() for x in form] for form in summand] for summand in self.entries],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            ring = Ring.from_tag(obj.get("ring", "q"))
            n = int(obj["n"])
            entries = [[[ring.parse(x) for x in form] for form in summand] for summand in obj["entries"]]
        except (KeyError, TypeError) as e:
            raise InputFormatError(f"bad circuit document: {e}") from e
        circuit = cls(n, entries, ring)
        if "rho" in obj and (int(obj["rho"]), int(obj["d"])) != (circuit.rho, circuit.d):
            raise InputFormatError(f"declared shape {obj['rho']}x{obj['d']} does not match entries {circuit.rho}x{circuit.d}")
        return circuit

    def __repr__(self):
        return f"SigmaPiSigma({self.rho}x{self.d}x{self.n + 1}, {self.ring})"


class NumericCircuit:
    """Double-precision (real or complex) counterpart of SigmaPiSigma."""

    def __init__(self, array):
        array = np.asarray(array)
        if array.ndim != 3 or array.shape[2] < 1:
            raise PreconditionError(f"numeric hypermatrix must be 3-dimensional, got shape {array.shape}")
        dtype = np.complex128 if np.iscomplexobj(array) else np.float64
        self.array = np.array(array, dtype=dtype)
        self.array.setflags(write=False)

    @property
    def rho(self):
        return self.array.shape[0]

    @property
    def d(self):
        return self.array.shape[1]

    @property
    def n(self):
        return self.array.shape[2] - 1

    @property
    def shape(self):
        return self.array.shape

    def size(self):
        return int(self.array.size)

    def to_json(self):
        if np.iscomplexobj(self.array):
            entries = [[[[float(x.real), float(x.imag)] for x in form] for form in summand] for summand in self.array]
        else:
            entries = self.array.tolist()
        return {"rho": self.rho, "d": self.d, "n": self.n, "numeric": True, "entries": entries}

    @classmethod
    def from_json(cls, obj):
        try:
            data = np.array(obj["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"bad numeric circuit document: {e}") from e
        if data.ndim == 4:
            data = data[..., 0] + 1j * data[..., 1]
        return cls(data)

    def __repr__(self):
        return f"NumericCircuit({self.rho}x{self.d}x{self.n + 1})"


def load_circuit(obj):
    if obj.get("numeric"):
        return NumericCircuit.from_json(obj)
    return SigmaPiSigma.from_json(obj)


def size_report(c):
    return SizeReport(c.rho, c.d, c.n + 1, c.rho * c.d * (c.n + 1))


# Exact expansion

def expand_general(c):
    """Raw expansion without reduction; exponents may reach d."""
    total = GeneralPoly(c.n, c.ring, c.d)
    for summand in c.entries:
        prod = GeneralPoly.constant(c.n, c.ring, c.d)
        for form in summand:
            terms = {(0,) * c.n: form[0]}
            for w in range(c.n):
                exps = [0] * c.n
                exps[w] = 1
                terms[tuple(exps)] = form[w + 1]
            prod = prod * GeneralPoly(c.n, c.ring, c.d, terms)
        total = total + prod
    return total


def expand(c, reduce=True):
    """Expands the circuit into its multilinear canonical representative.

    With reduce=False the raw expansion must already be multilinear.
    """
    if not reduce:
        raw = expand_general(c)
        if not raw.is_multilinear():
            raise NonMultilinearError(f"raw expansion of {c!r} is not multilinear; use expand_general")
        return raw.to_mlpoly()
    total = MLPoly.zero(c.n, c.ring)
    for u in range(c.rho):
        prod = MLPoly.constant(c.n, c.ring)
        for v in range(c.d):
            prod = mul(prod, c.linear_form(u, v))
        total = total + prod
    return total


# Constructors

def _constant_form(n, ring, value=1):
    return [ring.coerce(value)] + [ring.zero()] * n


def _variable_form(n, ring, i, constant=0, scale=1):
    form = [ring.coerce(constant)] + [ring.zero()] * n
    form[i + 1] = ring.coerce(scale)
    return form


def _sum_form(n, ring, constant, scale):
    """constant + scale * (x_0 + ... + x_{n-1})."""
    return [ring.coerce(constant)] + [ring.coerce(scale)] * n


def subset_product(S, N, ring=QQ):
    """prod_{i in S} (1 + x_i)."""
    indices = mask_vars(as_mask(S))
    if indices and indices[-1] >= N:
        raise PreconditionError(f"S contains index {indices[-1]} outside {N} variables")
    if not indices:
        return SigmaPiSigma(N, [[_constant_form(N, ring)]], ring)
    return SigmaPiSigma(N, [[_variable_form(N, ring, i, constant=1) for i in indices]], ring)


def superset_product(S, N, ring=QQ):
    """prod_{i in S} x_i * prod_{i not in S} (1 + x_i)."""
    mask = as_mask(S)
    if mask >> N:
        raise PreconditionError(f"S does not fit in {N} variables")
    if N == 0:
        return SigmaPiSigma(0, [[_constant_form(0, ring)]], ring)
    forms = [_variable_form(N, ring, i, constant=0 if mask >> i & 1 else 1) for i in range(N)]
    return SigmaPiSigma(N, [forms], ring)


def trivial_circuit(p):
    """One summand per term; ragged degrees padded with constant-1 factors."""
    if p.is_zero():
        raise PreconditionError("the zero polynomial has no trivial circuit")
    d = max(1, p.degree())
    entries = []
    for mask, coeff in p.terms():
        indices = mask_vars(mask)
        if indices:
            forms = [_variable_form(p.n, p.ring, indices[0], scale=coeff)]
            forms += [_variable_form(p.n, p.ring, i, scale=1) for i in indices[1:]]
        else:
            forms = [_constant_form(p.n, p.ring, coeff)]
        forms += [_constant_form(p.n, p.ring)] * (d - len(forms))
        entries.append(forms)
    return SigmaPiSigma(p.n, entries, p.ring)


def binomial_product_circuit(s, N, shift=0, ring=QQ):
    """C(l + shift, s) = prod_{j<s} (l + shift - j) / s! with l = sum_i x_i."""
    if s == 0:
        return SigmaPiSigma(N, [[_constant_form(N, ring)]], ring)
    forms = [_sum_form(N, ring, shift - j, 1) for j in range(s)]
    scale = Fraction(1, factorial(s))
    forms[0] = [ring.coerce(x) * scale for x in forms[0]]
    return SigmaPiSigma(N, [forms], ring)


def cardinality_circuit(kind, s, N, ring=QQ):
    """Closed-form circuits for the threshold functions.

    Exact for kind "eq" at every s, and for "le"/"ge" when s is 0, 1, N-1 or N.
    The circuits are programs: their reduced expansion has coefficient 1 exactly
    on the monomials of admissible size.
    """
    if not 0 <= s <= N:
        raise PreconditionError(f"s={s} outside 0..{N}")
    if kind == "eq":
        return binomial_product_circuit(s, N, ring=ring)
    if kind not in ("le", "ge"):
        raise PreconditionError(f"unknown cardinality kind {kind!r}")
    everything = (1 << N) - 1
    if kind == "le":
        if s == 0:
            return SigmaPiSigma(N, [[_constant_form(N, ring)]], ring)
        if s == N:
            return subset_product(everything, N, ring)
        if s == 1:
            return SigmaPiSigma(N, [[_sum_form(N, ring, 1, 1)]], ring)
        if s == N - 1:
            plus = [_variable_form(N, ring, i, constant=1) for i in range(N)]
            minus = [_variable_form(N, ring, i, scale=-1 if i == 0 else 1) for i in range(N)]
            return SigmaPiSigma(N, [plus, minus], ring)
    else:
        if s == 0:
            return subset_product(everything, N, ring)
        if s == N:
            return superset_product(everything, N, ring)
        if s == 1:
            plus = [_variable_form(N, ring, i, constant=1) for i in range(N)]
            minus = [_constant_form(N, ring, -1)] + [_constant_form(N, ring)] * (N - 1)
            return SigmaPiSigma(N, [plus, minus], ring)
        if s == N - 1:
            # C(l, N-1) + C(l, N) = C(l+1, N)
            return binomial_product_circuit(N, N, shift=1, ring=ring)
    raise PreconditionError(f"no closed form for kind={kind} s={s} N={N}; use the univariate product form")


def complement_circuit(c):
    """Circuit for prod_i (1 + x_i) - P, i.e. the complement indicator."""
    if c.n == 0:
        raise PreconditionError("complement needs at least one variable")
    d = max(c.d, c.n)
    ring = c.ring
    entries = [[_variable_form(c.n, ring, i, constant=1) for i in range(c.n)] + [_constant_form(c.n, ring)] * (d - c.n)]
    for summand in c.entries:
        forms = [[-x for x in summand[0]]] + [list(f) for f in summand[1:]]
        forms += [_constant_form(c.n, ring)] * (d - len(forms))
        entries.append(forms)
    return SigmaPiSigma(c.n, entries, ring)


# Numeric mode

def to_numeric(c):
    data = np.array([[[x.to_complex() for x in form] for form in summand] for summand in c.entries])
    if np.all(data.imag == 0):
        data = data.real
    return NumericCircuit(data)


def _hypercube(n):
    if n > NUMERIC_MAX_VARS:
        raise SizeGuardError("numeric variable count", n, NUMERIC_MAX_VARS)
    masks = np.arange(1 << n)
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def moebius_transform(values):
    """Coefficients from hypercube values: c_T = sum_{R subset T} (-1)^{|T|-|R|} f(1_R), along axis 0."""
    out = np.array(values, copy=True)
    size = out.shape[0]
    n = size.bit_length() - 1
    tail = out.shape[1:]
    for i in range(n):
        view = out.reshape((size >> (i + 1), 2, 1 << i) + tail)
        view[:, 1] -= view[:, 0]
    return out


def _form_values(array, cube):
    # values[u, v, point] of every linear form on the hypercube
    return array[:, :, :1] + np.einsum("uvw,pw->uvp", array[:, :, 1:], cube)


def numeric_coefficients(c, cube=None):
    """Dense coefficient vector indexed by monomial bitset."""
    cube = _hypercube(c.n) if cube is None else cube
    values = _form_values(c.array, cube)
    return moebius_transform(np.prod(values, axis=1).sum(axis=0))


def numeric_expand(c):
    """Sparse OR-multiplication expansion; an independent pass from numeric_coefficients."""
    total = {}
    for u in range(c.rho):
        prod = {0: 1.0 + 0j}
        for v in range(c.d):
            form = c.array[u, v]
            nxt = {}
            for mask, coeff in prod.items():
                nxt[mask] = nxt.get(mask, 0) + coeff * form[0]
                for w in range(c.n):
                    if form[w + 1] != 0:
                        k = mask | (1 << w)
                        nxt[k] = nxt.get(k, 0) + coeff * form[w + 1]
            prod = nxt
        for mask, coeff in prod.items():
            total[mask] = total.get(mask, 0) + coeff
    return total


def dense_target(p):
    if p.n > NUMERIC_MAX_VARS:
        raise SizeGuardError("numeric variable count", p.n, NUMERIC_MAX_VARS)
    target = np.zeros(1 << p.n, dtype=complex)
    for mask, coeff in p.terms():
        target[mask] = coeff.to_complex()
    if np.all(target.imag == 0):
        return target.real
    return target


def _jacobian(array, cube):
    rho, d, width = array.shape
    values = _form_values(array, cube)
    basis = np.concatenate([np.ones((cube.shape[0], 1)), cube], axis=1)
    columns = np.zeros((cube.shape[0], rho, d, width), dtype=values.dtype)
    for u in range(rho):
        for v in range(d):
            others = np.prod(np.delete(values[u], v, axis=0), axis=0) if d > 1 else np.ones(cube.shape[0])
            columns[:, u, v, :] = others[:, None] * basis
    return moebius_transform(columns.reshape(cube.shape[0], -1))


@dataclass
class PdpSearchResult:
    circuit: NumericCircuit
    residual: float
    converged: bool
    seed: int
    iterations: int
    history: list = field(default_factory=list)
    verified_residual: float = float("nan")

    def to_json(self):
        return {
            "circuit": self.circuit.to_json(),
            "residual": self.residual,
            "verified_residual": self.verified_residual,
            "converged": self.converged,
            "seed": self.seed,
            "iterations": self.iterations,
        }


def _levenberg_marquardt(target, shape, fixed, seed, tol, max_iter, cube):
    rng = np.random.default_rng(seed)
    flat = rng.normal(size=int(np.prod(shape)))
    free = np.ones(flat.size, dtype=bool)
    for index, value in fixed.items():
        flat[index] = value
        free[index] = False

    def residual_of(x):
        return numeric_coefficients(NumericCircuit(x.reshape(shape)), cube) - target

    r = residual_of(flat)
    cost = float(np.dot(r, r))
    history = [np.sqrt(cost)]
    damping = 1e-3
    iterations = 0
    while free.any() and iterations < max_iter and np.max(np.abs(r)) > tol and damping < 1e12:
        iterations += 1
        jac = _jacobian(flat.reshape(shape), cube)[:, free]
        normal = jac.T @ jac
        gradient = jac.T @ r
        step = np.linalg.solve(normal + damping * np.eye(normal.shape[0]), -gradient)
        trial = flat.copy()
        trial[free] += step
        r_trial = residual_of(trial)
        cost_trial = float(np.dot(r_trial, r_trial))
        if cost_trial < cost:
            flat, r, cost = trial, r_trial, cost_trial
            damping = max(damping / 3.0, 1e-12)
        else:
            damping *= 4.0
        history.append(np.sqrt(cost))
    return flat.reshape(shape), float(np.max(np.abs(r))), iterations, history


def pdp_search(target, rho, d, seeds=range(8), tol=DEFAULT_TOL, fixed=None, max_iter=400):
    """Damped least-squares search for a rho x d x (1+N) numeric circuit expanding to target.

    `fixed` maps (u, v, w) entry indices to values held constant. Never raises on
    non-convergence: the best start is returned with converged=False.
    """
    if target.ring.kind != "q":
        raise PreconditionError(f"pdp_search needs a rational target, got {target.ring}")
    n = target.n
    shape = (rho, d, n + 1)
    cube = _hypercube(n)
    goal = dense_target(target)
    fixed_flat = {}
    for (u, v, w), value in (fixed or {}).items():
        if not (0 <= u < rho and 0 <= v < d and 0 <= w <= n):
            raise PreconditionError(f"fixed entry {(u, v, w)} outside shape {shape}")
        fixed_flat[np.ravel_multi_index((u, v, w), shape)] = float(value)
    seeds = list(seeds)
    if not seeds:
        raise PreconditionError("pdp_search needs at least one seed")

    logger.info(f"PDP search {rho}x{d}x{n + 1} over {len(seeds)} starts")

    def run(seed):
        array, residual, iterations, history = _levenberg_marquardt(goal, shape, fixed_flat, seed, tol, max_iter, cube)
        return PdpSearchResult(NumericCircuit(array), residual, residual <= tol, seed, iterations, history)

    with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count(len(seeds))) as executor:
        results = list(executor.map(run, seeds))

    best = min(results, key=lambda res: (res.residual, res.seed))
    expanded = numeric_expand(best.circuit)
    best.verified_residual = max(
        (abs(expanded.get(mask, 0) - goal[mask]) for mask in range(len(goal))), default=0.0)
    if best.converged:
        logger.info(f"PDP search converged: residual {best.residual:.3e} seed {best.seed}")
    else:
        logger.warning(f"PDP search did not converge: best residual {best.residual:.3e} seed {best.seed}")
    return best
