# Vertex-permutation actions on loopless directed edge sets, orbit polynomials,
# isomorphism-variant PDEs, NP certificates and the associated bound calculators.
#
# Edges (i, j), i != j, are indexed compactly 0 .. n(n-1)-1 in increasing order
# of lex(i, j) = i + j*n.
import concurrent.futures
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, gcd

import numpy as np
import sympy

from pdeforge.boolean import pde_evaluate
from pdeforge.circuit import NumericCircuit, numeric_coefficients
from pdeforge.config import get_settings, worker_count
from pdeforge.errors import InputFormatError, PreconditionError, SizeGuardError
from pdeforge.mlpoly import MLPoly, mask_vars, masks_of_size, mul, subsets
from pdeforge.ring import QQ
from pdeforge.symmetric import UnivariateInL, elementary_symmetric

logger = logging.getLogger("Orbits")

PERMUTATION_MAX_VERTICES = 8
CLASS_MAX_VERTICES = 5
POLY_MAX_VERTICES = 4
POLYA_MAX_VERTICES = 10
RESOLVENT_MAX_VERTICES = 3
RESOLVENT_MAX_T = 3
LITERAL_MAX_VARS = 4


def _guard(what, size, limit):
    if size > limit:
        logger.warning(f"Refusing {what}={size}: limit is {limit}")
        raise SizeGuardError(what, size, limit)


# Edge space and group action

class EdgeSpace:
    """Bijection between loopless ordered pairs and compact indices."""

    def __init__(self, n):
        if n < 1:
            raise PreconditionError(f"need at least one vertex, got {n}")
        self.n = n
        self.pairs = tuple(sorted(((i, j) for i in range(n) for j in range(n) if i != j),
                                  key=lambda p: p[0] + p[1] * n))
        self.index = {pair: k for k, pair in enumerate(self.pairs)}

    @property
    def size(self):
        return len(self.pairs)

    def lex(self, pair):
        return pair[0] + pair[1] * self.n

    def full_mask(self):
        return (1 << self.size) - 1

    def edge_table(self, image):
        return tuple(self.index[(image[i], image[j])] for i, j in self.pairs)


@lru_cache(maxsize=None)
def edge_space(n):
    return EdgeSpace(n)


@dataclass(frozen=True)
class VertexPermutation:
    image: tuple

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise PreconditionError(f"{self.image} is not a permutation")

    @property
    def n(self):
        return len(self.image)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    def __call__(self, i):
        return self.image[i]

    def compose(self, other):
        """(self o other)(i) = self(other(i))."""
        return VertexPermutation(tuple(self.image[other.image[i]] for i in range(self.n)))

    def inverse(self):
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return VertexPermutation(tuple(inv))


@dataclass(frozen=True)
class GraphSet:
    n: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> edge_space(self.n).size:
            raise PreconditionError(f"edge bitset does not fit the {self.n}-vertex edge space")

    @classmethod
    def from_edges(cls, n, edges):
        space = edge_space(n)
        bits = 0
        for edge in edges:
            pair = tuple(edge)
            if pair not in space.index:
                raise InputFormatError(f"{pair} is not a loopless edge on {n} vertices")
            bits |= 1 << space.index[pair]
        return cls(n, bits)

    @classmethod
    def from_json(cls, obj):
        try:
            return cls.from_edges(int(obj["n"]), obj.get("edges", []))
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"bad graph document: {e}") from e

    def edges(self):
        pairs = edge_space(self.n).pairs
        return [pairs[k] for k in mask_vars(self.bits)]

    def size(self):
        return self.bits.bit_count()

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    def __repr__(self):
        return f"GraphSet(n={self.n}, edges={self.edges()})"


def apply_table(table, bits):
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << table[low.bit_length() - 1]
        bits ^= low
    return out


@lru_cache(maxsize=None)
def permutation_tables(n):
    """(image, edge table) for every vertex permutation, in lexicographic order."""
    _guard("vertex count", n, PERMUTATION_MAX_VERTICES)
    space = edge_space(n)
    return tuple((image, space.edge_table(image)) for image in permutations(range(n)))


def act(lam, S):
    if lam.n != S.n:
        raise PreconditionError(f"permutation on {lam.n} points cannot act on a graph with {S.n} vertices")
    return GraphSet(S.n, apply_table(edge_space(S.n).edge_table(lam.image), S.bits))


def _orbit_bits(n, bits):
    return {apply_table(table, bits) for _, table in permutation_tables(n)}


def automorphisms(S):
    return [VertexPermutation(image) for image, table in permutation_tables(S.n)
            if apply_table(table, S.bits) == S.bits]


def orbit(S):
    members = _orbit_bits(S.n, S.bits)
    aut = sum(1 for _, table in permutation_tables(S.n) if apply_table(table, S.bits) == S.bits)
    if len(members) * aut != factorial(S.n):
        raise AssertionError(f"orbit-stabilizer violated: {len(members)} * {aut} != {S.n}!")
    return {GraphSet(S.n, bits) for bits in members}


def canonical_form(S):
    """Lexicographically least bitset in the orbit."""
    return GraphSet(S.n, min(_orbit_bits(S.n, S.bits)))


def is_isomorphic(S, T):
    return S.size() == T.size() and any(apply_table(table, T.bits) == S.bits for _, table in permutation_tables(S.n))


def is_sub_isomorphic(T, S):
    """T is isomorphic to some subgraph of S."""
    return any(apply_table(table, T.bits) & ~S.bits == 0 for _, table in permutation_tables(S.n))


def is_super_isomorphic(T, S):
    """T contains a copy of S."""
    return any(apply_table(table, S.bits) & ~T.bits == 0 for _, table in permutation_tables(S.n))


@lru_cache(maxsize=None)
def _class_map(n):
    """Canonical representative bits for every edge subset."""
    _guard("vertex count for class enumeration", n, CLASS_MAX_VERTICES)
    if n == CLASS_MAX_VERTICES:
        logger.warning(f"Class enumeration on {n} vertices is best-effort and slow")
    size = 1 << edge_space(n).size
    rep = [-1] * size
    logger.info(f"Enumerating isomorphism classes on {n} vertices")
    for bits in range(size):
        if rep[bits] < 0:
            for member in _orbit_bits(n, bits):
                rep[member] = bits
    return tuple(rep)


def iso_classes(n, max_size=None):
    reps = sorted(set(_class_map(n)), key=lambda b: (b.bit_count(), b))
    if max_size is not None:
        reps = [b for b in reps if b.bit_count() <= max_size]
    return [GraphSet(n, b) for b in reps]


def class_of(S):
    return GraphSet(S.n, _class_map(S.n)[S.bits]) if S.n <= POLY_MAX_VERTICES else canonical_form(S)


# Polya counting

def _cycle_types(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _cycle_types(n - part, part):
            yield [part] + rest


def _class_size(cycle_type):
    n = sum(cycle_type)
    z = 1
    for length, mult in Counter(cycle_type).items():
        z *= length ** mult * factorial(mult)
    return factorial(n) // z


def _pair_cycle_lengths(cycle_type):
    """Cycle lengths of the induced action on ordered pairs of distinct vertices."""
    lengths = []
    for a in cycle_type:
        lengths += [a] * (a - 1)
    for x, a in enumerate(cycle_type):
        for y, b in enumerate(cycle_type):
            if x != y:
                lengths += [a * b // gcd(a, b)] * gcd(a, b)
    return lengths


def polya_series(n):
    """Number of classes with k edges, k = 0 .. n(n-1), from the cycle index."""
    _guard("vertex count", n, POLYA_MAX_VERTICES)
    top = n * (n - 1)
    total = [0] * (top + 1)
    for cycle_type in _cycle_types(n):
        poly = [1] + [0] * top
        for length in _pair_cycle_lengths(cycle_type):
            poly = [poly[k] + (poly[k - length] if k >= length else 0) for k in range(top + 1)]
        weight = _class_size(cycle_type)
        total = [t + weight * p for t, p in zip(total, poly)]
    return [t // factorial(n) for t in total]


def polya_count(n):
    """Burnside average of 2^(#cycles on ordered pairs) over S_n."""
    _guard("vertex count", n, POLYA_MAX_VERTICES)
    acc = sum(_class_size(ct) * 2 ** len(_pair_cycle_lengths(ct)) for ct in _cycle_types(n))
    return acc // factorial(n)


# Orbit polynomials

def orbit_polynomial(S):
    """sum over the orbit of S of prod_{i in sigma S} x_i."""
    return MLPoly(edge_space(S.n).size, QQ, {g.bits: 1 for g in orbit(S)})


def sub_iso_listing(S):
    """sum_{R subset S} P_{~R}: coefficient of T counts the subgraphs of S isomorphic to T."""
    _guard("vertex count for sub-isomorphism", S.n, POLY_MAX_VERTICES)
    acc = Counter()
    for r in subsets(S.bits):
        for bits in _orbit_bits(S.n, r):
            acc[bits] += 1
    return MLPoly(edge_space(S.n).size, QQ, dict(acc))


def super_iso_listing(S):
    """sum_{R superset S} P_{~R}: coefficient of T counts the supergraphs of S isomorphic to T."""
    _guard("vertex count for super-isomorphism", S.n, POLY_MAX_VERTICES)
    space = edge_space(S.n)
    acc = Counter()
    for extra in subsets(space.full_mask() & ~S.bits):
        for bits in _orbit_bits(S.n, S.bits | extra):
            acc[bits] += 1
    return MLPoly(space.size, QQ, dict(acc))


def _normalise(listing):
    # each class appears with its multiplicity gamma; dividing by it leaves the indicator
    return MLPoly(listing.n, QQ, {mask: 1 for mask, _ in listing.terms()})


def sub_iso_polynomial(S):
    return _normalise(sub_iso_listing(S))


def super_iso_polynomial(S):
    return _normalise(super_iso_listing(S))


@dataclass
class ClassMultiplicity:
    representative: GraphSet
    orbit_size: int
    multiplicity: int
    grouped_terms: int

    def to_json(self):
        return {"representative": self.representative.to_json(), "orbit_size": self.orbit_size,
                "multiplicity": self.multiplicity, "grouped_terms": self.grouped_terms}


def class_multiplicity_report(S, kind="sub"):
    """Per related class: orbit size, gamma (or Gamma), and the grouped listing coefficient sum."""
    listing = sub_iso_listing(S) if kind == "sub" else super_iso_listing(S)
    grouped = defaultdict(int)
    for mask, coeff in listing.terms():
        grouped[_class_map(S.n)[mask]] += int(coeff.to_fraction())
    if kind == "sub":
        counts = Counter(_class_map(S.n)[r] for r in subsets(S.bits))
    else:
        full = edge_space(S.n).full_mask()
        counts = Counter(_class_map(S.n)[S.bits | e] for e in subsets(full & ~S.bits))
    out = []
    for rep in sorted(grouped, key=lambda b: (b.bit_count(), b)):
        size = len(_orbit_bits(S.n, rep))
        out.append(ClassMultiplicity(GraphSet(S.n, rep), size, counts[rep], grouped[rep]))
    return out


@lru_cache(maxsize=256)
def _relation_polynomial(kind, n, bits):
    S = GraphSet(n, bits)
    if kind == "iso":
        return orbit_polynomial(S)
    if kind == "sub":
        return sub_iso_polynomial(S)
    if kind == "super":
        return super_iso_polynomial(S)
    raise PreconditionError(f"unknown relation kind {kind!r}")


def relation_polynomial(kind, S):
    return _relation_polynomial(kind, S.n, S.bits)


def iso_pde_evaluate(kind, S, T, m=None):
    if S.n != T.n:
        raise PreconditionError("graphs live on different vertex counts")
    return pde_evaluate(relation_polynomial(kind, S), T.bits, m)


def relation_oracle(kind, S, T):
    if kind == "iso":
        return int(is_isomorphic(S, T))
    if kind == "sub":
        return int(is_sub_isomorphic(T, S))
    if kind == "super":
        return int(is_super_isomorphic(T, S))
    raise PreconditionError(f"unknown relation kind {kind!r}")


def exhaustive_relation_check(kind, S, m=None):
    """T-values where the PDE and the brute-force relation disagree (empty when they agree)."""
    n = S.n
    poly = relation_polynomial(kind, S)
    masks = list(range(1 << edge_space(n).size))

    def check(bits):
        T = GraphSet(n, bits)
        return bits if pde_evaluate(poly, bits, m) != relation_oracle(kind, S, T) else None

    with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count(len(masks))) as executor:
        return [b for b in executor.map(check, masks) if b is not None]


# NP certificates

def _certificate_of(image):
    n = len(image)
    return sum(1 << (n * v + image[v]) for v in range(n))


def np_certificate(S, T):
    """sum_v 2^(n*v + sigma(v)) for the lexicographically least sigma with sigma S = T, else 0."""
    if S.n != T.n:
        raise PreconditionError("graphs live on different vertex counts")
    if S.size() != T.size():
        return 0
    for image, table in permutation_tables(S.n):
        if apply_table(table, S.bits) == T.bits:
            return _certificate_of(image)
    return 0


def decode_certificate(certificate, n):
    """Witness permutation of a nonzero certificate; None for 0."""
    if certificate == 0:
        return None
    if certificate < 0 or certificate >> (n * n):
        raise PreconditionError(f"certificate {certificate} does not fit an {n}x{n} permutation matrix")
    image = []
    for v in range(n):
        row = (certificate >> (n * v)) & ((1 << n) - 1)
        if row.bit_count() != 1:
            raise PreconditionError(f"row {v} of certificate {certificate} is not a unit vector")
        image.append(row.bit_length() - 1)
    return VertexPermutation(tuple(image))


def certificate_matrix(certificate, n):
    return [[(certificate >> (n * v + j)) & 1 for j in range(n)] for v in range(n)]


def _witnesses(S):
    out = {}
    for image, table in permutation_tables(S.n):
        out.setdefault(apply_table(table, S.bits), image)
    return out


def np_pde_polynomial(S):
    """Certificate-valued polynomial: the coefficient of each orbit member is its certificate."""
    return MLPoly(edge_space(S.n).size, QQ,
                  {bits: _certificate_of(image) for bits, image in _witnesses(S).items()})


def np_pde_evaluate(S, T):
    return int(np_pde_polynomial(S).coefficient(T.bits).to_fraction())


def tuple_polynomials(S):
    """P_{S, n*u+v}: orbit members whose witness sends u to v."""
    n = S.n
    size = edge_space(n).size
    terms = [defaultdict(int) for _ in range(n * n)]
    for bits, image in _witnesses(S).items():
        for u in range(n):
            terms[n * u + image[u]][bits] = 1
    return [MLPoly(size, QQ, dict(t)) for t in terms]


def certificate_tuple(S, T):
    """n x n outputs of the binary tuple PDEs; they reassemble the certificate matrix."""
    n = S.n
    polys = tuple_polynomials(S)
    return [[pde_evaluate(polys[n * u + v], T.bits, 1) for v in range(n)] for u in range(n)]


# Orbit-list identities

def _orbital_expansion(nvars, factors):
    """Expands prod over `factors` of (constant + O_Z[i]) into Z-monomials.

    Each Z-monomial is a tuple, one row-bitset per column lex(sigma).
    `factors` is a list of (i, with_one) pairs.
    """
    perms = list(permutations(range(nvars)))
    terms = {tuple(0 for _ in perms): 1}
    for i, with_one in factors:
        nxt = defaultdict(int)
        for mono, coeff in terms.items():
            if with_one:
                nxt[mono] += coeff
            grown = tuple(rows | (1 << sigma[i]) for rows, sigma in zip(mono, perms))
            nxt[grown] += coeff
        terms = {k: v for k, v in nxt.items() if v}
    return terms


def _replace_columns(mono, largest):
    """Rewrites column monomials prod_{i in R} Z[i, c] as prod_{j in R} Y[j, R], largest R first."""
    y = Counter()
    remaining = list(mono)
    for r in range(largest, 0, -1):
        for c, rows in enumerate(remaining):
            while rows.bit_count() >= r:
                chosen = next(combinations(mask_vars(rows), r))
                block = sum(1 << j for j in chosen)
                for j in chosen:
                    y[(j, block)] += 1
                rows &= ~block
            remaining[c] = rows
    if any(remaining):
        raise AssertionError("unreplaced Z entries remain")
    return tuple(sorted(y.items()))


@dataclass
class OrbitListReport:
    nvars: int
    subset: list
    passed: bool
    exponents: dict
    lhs_terms: int
    rhs_terms: int

    def to_json(self):
        return {"nvars": self.nvars, "S": self.subset, "passed": self.passed,
                "exponents": {str(t): e for t, e in self.exponents.items()},
                "lhs_terms": self.lhs_terms, "rhs_terms": self.rhs_terms}


def prop3_literal_verify(nvars, S):
    """Symbolic check of the orbit list generating identity for P_{subset S}(O_Z)."""
    _guard("literal variable count", nvars, LITERAL_MAX_VARS)
    indices = mask_vars(S) if isinstance(S, int) else sorted(S)
    if indices and indices[-1] >= nvars:
        raise PreconditionError(f"S contains {indices[-1]} outside {nvars} variables")
    s = len(indices)

    lhs = Counter()
    for mono, coeff in _orbital_expansion(nvars, [(i, True) for i in indices]).items():
        lhs[_replace_columns(mono, s)] += coeff

    rhs = Counter()
    exponents = {}
    for t in range(s + 1):
        exponent = factorial(nvars - t) * factorial(t)
        exponents[t] = exponent
        y = {}
        for block in combinations(range(nvars), t):
            mask = sum(1 << j for j in block)
            for j in block:
                y[(j, mask)] = exponent
        rhs[tuple(sorted(y.items()))] += comb(s, t)

    passed = +lhs == +rhs
    if not passed:
        logger.warning(f"Orbit list identity failed for nvars={nvars}, S={indices}")
    return OrbitListReport(nvars, indices, passed, exponents, len(+lhs), len(+rhs))


def prop4_matrix_verify(nvars, S, kind="le"):
    """2x2 unipotent substitution into P(O_Z); the [0,1] entry must be the cardinality polynomial."""
    _guard("literal variable count", nvars, LITERAL_MAX_VARS)
    indices = sorted(mask_vars(S) if isinstance(S, int) else S)
    s = len(indices)
    members = set(indices)
    if kind == "le":
        factors = [(i, True) for i in indices]
        counts = {t: comb(s, t) for t in range(s + 1)}
        target = range(0, s + 1)
    elif kind == "ge":
        factors = [(i, i not in members) for i in range(nvars)]
        counts = {t: comb(nvars - s, t - s) for t in range(s, nvars + 1)}
        target = range(s, nvars + 1)
    elif kind == "eq":
        factors = [(i, False) for i in indices]
        counts = {s: 1}
        target = range(s, s + 1)
    else:
        raise PreconditionError(f"unknown cardinality kind {kind!r}")

    zero = MLPoly.zero(nvars)
    one = MLPoly.constant(nvars)
    total = [[zero, zero], [zero, zero]]
    for mono, coeff in _orbital_expansion(nvars, factors).items():
        matrix = [[one, zero], [zero, one]]
        for rows in mono:
            t = rows.bit_count()
            entry = MLPoly.monomial(nvars, rows) * Fraction(1, factorial(nvars - t) * factorial(t) * counts[t])
            step = [[one, entry], [zero, one]]
            matrix = [[mul(matrix[a][0], step[0][b]) + mul(matrix[a][1], step[1][b]) for b in range(2)]
                      for a in range(2)]
        total = [[total[a][b] + matrix[a][b] * coeff for b in range(2)] for a in range(2)]
    expected = MLPoly.zero(nvars)
    for t in target:
        expected = expected + elementary_symmetric(nvars, t)
    return total[0][1] == expected


# Bounds

def legendre_alphas(n):
    """Exponent of every prime p <= n in n!, with the digit-sum cross-check."""
    alphas = {}
    for p in sympy.primerange(2, n + 1):
        alpha, power = 0, p
        while power <= n:
            alpha += n // power
            power *= p
        digits, rest = 0, n
        while rest:
            digits += rest % p
            rest //= p
        if alpha != (n - digits) // (p - 1):
            raise AssertionError(f"Legendre digit-sum mismatch at p={p}")
        alphas[int(p)] = alpha
    return alphas


def factor_width(k):
    """Sum of prime exponents of k: the width of a single product with k expanded terms."""
    if k < 1:
        raise PreconditionError(f"factor width needs a positive integer, got {k}")
    return sum(int(e) for e in sympy.factorint(k).values())


def legendre_lower_bound(n):
    if n < 1:
        raise PreconditionError(f"n must be positive, got {n}")
    return (1 + 2 * comb(n, 2)) * sum(legendre_alphas(n).values())


def turan_report(n, r):
    """Both sides of the Turan-window inequality for S = K_{r+1} on undirected graphs."""
    _guard("vertex count for Turan report", n, CLASS_MAX_VERTICES)
    if not 1 <= r < n:
        raise PreconditionError(f"need 1 <= r < n, got r={r}, n={n}")
    edges = list(combinations(range(n), 2))
    index = {e: k for k, e in enumerate(edges)}
    cliques = [sum(1 << index[e] for e in combinations(vs, 2)) for vs in combinations(range(n), r + 1)]

    def contains_clique(bits):
        return any(bits & c == c for c in cliques)

    tables = [tuple(index[tuple(sorted((img[i], img[j])))] for i, j in edges) for img in permutations(range(n))]
    lo, hi = comb(r + 1, 2), int((1 - Fraction(1, r)) * n * n / 2)
    seen = set()
    supergraphs = 0
    window_classes = 0
    for bits in range(1 << len(edges)):
        has = contains_clique(bits)
        supergraphs += has
        if bits in seen:
            continue
        orbit_members = {apply_table(t, bits) for t in tables}
        seen |= orbit_members
        if not has and lo <= bits.bit_count() <= hi:
            window_classes += 1
    width = factor_width(supergraphs) if supergraphs else 0
    return {
        "n": n, "r": r, "window": [lo, hi], "supergraph_count": supergraphs,
        "lhs": width * (1 + 2 * comb(n, 2)), "non_supergraph_classes_in_window": window_classes,
    }


def bounds_report(n, S=None, m=None, r=None):
    m = get_settings().default_m if m is None else m
    alphas = legendre_alphas(n)
    report = {
        "n": n,
        "legendre": {"alphas": {str(p): a for p, a in alphas.items()}, "alpha_sum": sum(alphas.values()),
                     "lower_bound": legendre_lower_bound(n)},
    }
    if n <= POLYA_MAX_VERTICES:
        report["polya_count"] = polya_count(n)
    if S is not None:
        _guard("vertex count for orbit bounds", S.n, POLY_MAX_VERTICES)
        N = edge_space(S.n).size
        related = sub_iso_polynomial(S).term_count()
        aut = len(automorphisms(S))
        cosets = factorial(S.n) // aut
        trivial_rho, trivial_d = cosets, max(1, S.size())
        report["graph"] = {
            "S": S.to_json(), "orbit_size": cosets, "aut_size": aut,
            "sub_iso_count": related,
            "constraint_upper_bound": min(related, 1 + 2 ** N - related),
            "np_tuple_count": {"formula": "(m*|AutS|)^(|S_n/AutS|)", "value": (m * aut) ** cosets},
            "trivial_size": [trivial_rho, trivial_d, N + 1],
            "complement_size": [trivial_rho + 1, max(trivial_d, N), N + 1],
        }
    if r is not None:
        report["turan"] = turan_report(n, r)
    return report


# Constraint systems

@dataclass
class Equation:
    representative: GraphSet
    members: tuple
    target: int

    def to_json(self):
        return {"representative": self.representative.to_json(), "orbit_size": len(self.members),
                "target": self.target}


@dataclass
class ConstraintSystem:
    n: int
    rho: int
    d: int
    kind: str
    equations: list = field(default_factory=list)

    @property
    def unknowns(self):
        return self.rho * self.d * (1 + edge_space(self.n).size)

    def residual(self, B):
        """Residual vector of the orbit-grouped equations for a numeric hypermatrix B."""
        B = np.asarray(B)
        if B.shape != (self.rho, self.d, 1 + edge_space(self.n).size):
            raise PreconditionError(f"hypermatrix shape {B.shape} does not match the system")
        coeffs = numeric_coefficients(NumericCircuit(B))
        out = []
        for eq in self.equations:
            total = sum(coeffs[m] for m in eq.members)
            out.append(total / len(eq.members) - 1 if eq.target else total)
        return np.array(out)

    def count_report(self):
        return {"unknowns": self.unknowns, "equations": len(self.equations),
                "consistent": self.unknowns >= len(self.equations)}

    def to_json(self):
        return {"n": self.n, "rho": self.rho, "d": self.d, "kind": self.kind,
                "equations": [eq.to_json() for eq in self.equations], **self.count_report()}


def constraint_system(S, rho, d, kind="iso"):
    _guard("vertex count for constraint systems", S.n, POLY_MAX_VERTICES)
    related = {
        "iso": lambda R: is_isomorphic(S, R),
        "sub": lambda R: is_sub_isomorphic(R, S),
        "super": lambda R: is_super_isomorphic(R, S),
    }
    if kind not in related:
        raise PreconditionError(f"unknown relation kind {kind!r}")
    system = ConstraintSystem(S.n, rho, d, kind)
    for rep in iso_classes(S.n):
        hit = related[kind](rep)
        if hit or rep.size() <= d:
            members = tuple(sorted(_orbit_bits(S.n, rep.bits)))
            system.equations.append(Equation(rep, members, int(hit)))
    return system


# Resolvent check

@dataclass
class ResolventReport:
    S: GraphSet
    cosets: int
    fitted: dict
    passed: bool

    def to_json(self):
        return {"S": self.S.to_json(), "cosets": self.cosets, "passed": self.passed,
                "fitted": {str(t): (None if q is None else [str(a) for a in q.binomial])
                           for t, q in self.fitted.items()}}


def coset_representatives(n):
    """Least element of every left coset sigma G_n of the induced edge group in S_N."""
    N = edge_space(n).size
    group = [table for _, table in permutation_tables(n)]
    reps = []
    for sigma in permutations(range(N)):
        if all(tuple(sigma[g[i]] for i in range(N)) >= sigma for g in group):
            reps.append(sigma)
    return reps


def fit_binomial(p):
    """Binomial-basis vector if p is symmetric (coefficient depends only on |T|), else None."""
    vector = []
    for t in range(p.n + 1):
        values = {p.coefficient(mask).to_fraction() for mask in masks_of_size(p.n, t)}
        if len(values) > 1:
            return None
        vector.append(values.pop())
    return UnivariateInL(p.n, tuple(vector))


def resolvent_check(S, t_max):
    _guard("vertex count for resolvent check", S.n, RESOLVENT_MAX_VERTICES)
    _guard("resolvent degree", t_max, RESOLVENT_MAX_T)
    N = edge_space(S.n).size
    images = sorted(_orbit_bits(S.n, S.bits))
    reps = coset_representatives(S.n)
    z = []
    for sigma in reps:
        terms = Counter()
        for bits in images:
            terms[sum(1 << sigma[i] for i in mask_vars(bits))] += 1
        z.append(MLPoly(N, QQ, dict(terms)))

    power_sums = []
    current = list(z)
    for k in range(1, t_max + 1):
        if k > 1:
            current = [mul(c, zi) for c, zi in zip(current, z)]
        power_sums.append(sum(current, MLPoly.zero(N)))

    # Newton's recursion e_t = (1/t) sum_{i=1}^t (-1)^(i-1) e_{t-i} p_i
    e = [MLPoly.constant(N)]
    for t in range(1, t_max + 1):
        acc = MLPoly.zero(N)
        for i in range(1, t + 1):
            term = mul(e[t - i], power_sums[i - 1])
            acc = acc + (term if i % 2 else -term)
        e.append(acc * Fraction(1, t))

    fitted = {t: fit_binomial(e[t]) for t in range(1, t_max + 1)}
    passed = all(q is not None for q in fitted.values())
    if not passed:
        logger.warning(f"Resolvent coefficients for {S!r} are not univariate in the linear functional")
    return ResolventReport(S, len(reps), fitted, passed)
