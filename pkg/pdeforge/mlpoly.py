# Sparse multilinear polynomials modulo x_i^2 - x_i.
#
# A monomial is an int bitset over variable indices; since x_i^2 = x_i the
# product of two monomials is their bitwise OR.
import logging
from itertools import combinations

from pdeforge.errors import (IncompatibleRingError, InputFormatError,
                             NonMultilinearError, PreconditionError)
from pdeforge.ring import QQ, Ring, RingElem

logger = logging.getLogger("MLPoly")


def as_mask(indices):
    """Accepts an int bitset or an iterable of variable indices."""
    if isinstance(indices, int):
        return indices
    mask = 0
    for i in indices:
        if i < 0:
            raise PreconditionError(f"negative variable index {i}")
        mask |= 1 << i
    return mask


def mask_vars(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def monomial_key(mask):
    return (mask.bit_count(), mask)


def subsets(mask):
    """All sub-bitsets of mask, starting from mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def masks_of_size(n, t):
    for combo in combinations(range(n), t):
        yield as_mask(combo)


class MLPoly:
    """Multilinear polynomial in n variables with coefficients in `ring`."""

    __slots__ = ("n", "ring", "_terms")

    def __init__(self, n, ring=QQ, terms=None):
        self.n = n
        self.ring = ring
        clean = {}
        limit = 1 << n
        for mask, coeff in (terms or {}).items():
            if mask < 0 or mask >= limit:
                raise PreconditionError(f"monomial {mask_vars(mask)} does not fit in {n} variables")
            coeff = ring.coerce(coeff)
            if not coeff.is_zero():
                clean[mask] = coeff
        self._terms = clean

    # Construction

    @classmethod
    def zero(cls, n, ring=QQ):
        return cls(n, ring)

    @classmethod
    def constant(cls, n, ring=QQ, value=1):
        return cls(n, ring, {0: value})

    @classmethod
    def variable(cls, n, i, ring=QQ):
        if not 0 <= i < n:
            raise PreconditionError(f"variable index {i} out of range for n={n}")
        return cls(n, ring, {1 << i: 1})

    @classmethod
    def monomial(cls, n, indices, ring=QQ, coeff=1):
        return cls(n, ring, {as_mask(indices): coeff})

    @classmethod
    def from_terms(cls, n, ring, pairs):
        """Builds from (indices, coeff) pairs, summing repeated monomials."""
        acc = {}
        for indices, coeff in pairs:
            mask = as_mask(indices)
            coeff = ring.coerce(coeff)
            acc[mask] = acc[mask] + coeff if mask in acc else coeff
        return cls(n, ring, acc)

    @classmethod
    def _raw(cls, n, ring, terms):
        poly = cls.__new__(cls)
        poly.n = n
        poly.ring = ring
        poly._terms = {k: v for k, v in terms.items() if not v.is_zero()}
        return poly

    # Access

    def terms(self):
        """(mask, coeff) pairs in canonical (popcount, value) order."""
        return [(mask, self._terms[mask]) for mask in sorted(self._terms, key=monomial_key)]

    def coefficient(self, mask):
        return self._terms.get(as_mask(mask), self.ring.zero())

    def support(self):
        return set(self._terms)

    def term_count(self):
        return len(self._terms)

    __len__ = term_count

    def degree(self):
        return max((m.bit_count() for m in self._terms), default=-1)

    def is_zero(self):
        return not self._terms

    def __iter__(self):
        return iter(self.terms())

    # Arithmetic

    def _check(self, other):
        if not isinstance(other, MLPoly):
            return MLPoly.constant(self.n, self.ring, self.ring.coerce(other))
        if other.n != self.n:
            raise IncompatibleRingError(f"variable counts differ: {self.n} vs {other.n}")
        if other.ring != self.ring:
            raise IncompatibleRingError(f"rings differ: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for mask, coeff in other._terms.items():
            out[mask] = out[mask] + coeff if mask in out else coeff
        return MLPoly._raw(self.n, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MLPoly._raw(self.n, self.ring, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, MLPoly):
            c = self.ring.coerce(other)
            return MLPoly._raw(self.n, self.ring, {k: v * c for k, v in self._terms.items()})
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise PreconditionError("negative polynomial power")
        result = MLPoly.constant(self.n, self.ring)
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            base = mul(base, base)
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MLPoly):
            return self.n == other.n and self.ring == other.ring and self._terms == other._terms
        return NotImplemented

    __hash__ = None

    def map_ring(self, ring):
        """Re-reads every coefficient in another ring (e.g. Q -> GF(2))."""
        return MLPoly(self.n, ring, {k: ring.from_fraction(v.to_fraction()) for k, v in self._terms.items()})

    def extend(self, n):
        """Same polynomial viewed in n >= self.n variables."""
        if n < self.n:
            raise PreconditionError(f"cannot shrink {self.n} variables to {n}")
        return MLPoly._raw(n, self.ring, self._terms)

    # Serialisation

    def to_json(self):
        return {
            "n": self.n,
            "ring": self.ring.tag,
            "terms": [{"vars": mask_vars(mask), "coeff": coeff.to_json()} for mask, coeff in self.terms()],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["n"])
            ring = Ring.from_tag(obj.get("ring", "q"))
            pairs = [(term["vars"], ring.parse(term["coeff"])) for term in obj["terms"]]
        except (KeyError, TypeError) as e:
            raise InputFormatError(f"bad polynomial document: {e}") from e
        return cls.from_terms(n, ring, pairs)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for mask, coeff in self.terms():
            mono = "*".join(f"x{i}" for i in mask_vars(mask))
            c = coeff.to_json()
            if not mono:
                parts.append(str(c))
            elif coeff.is_one():
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def mul(p, q):
    """Product reduced modulo x_i^2 - x_i."""
    q = p._check(q)
    out = {}
    for a, ca in p._terms.items():
        for b, cb in q._terms.items():
            k = a | b
            c = ca * cb
            out[k] = out[k] + c if k in out else c
    return MLPoly._raw(p.n, p.ring, out)


def diff_extract(p, T):
    """Coefficient of monomial T: the mixed partial over T evaluated at zero."""
    mask = as_mask(T)
    if mask >> p.n:
        raise PreconditionError(f"monomial {mask_vars(mask)} outside {p.n} variables")
    return p.coefficient(mask)


def scale_vars(p, u, mu):
    """mu * p(diag(u) x): the coefficient of T is multiplied by mu * prod_{i in T} u[i]."""
    if len(u) != p.n:
        raise PreconditionError(f"scaling vector has length {len(u)}, expected {p.n}")
    u = [p.ring.coerce(x) for x in u]
    mu = p.ring.coerce(mu)
    out = {}
    for mask, coeff in p._terms.items():
        c = coeff * mu
        for i in mask_vars(mask):
            c = c * u[i]
        out[mask] = c
    return MLPoly._raw(p.n, p.ring, out)


def evaluate(p, point):
    if len(point) != p.n:
        raise PreconditionError(f"point has length {len(point)}, expected {p.n}")
    values = [p.ring.coerce(x) for x in point]
    total = p.ring.zero()
    for mask, coeff in p._terms.items():
        term = coeff
        for i in mask_vars(mask):
            term = term * values[i]
        total = total + term
    return total


def evaluate_indicator(p, mask):
    """p(1_R): sum of the coefficients of all sub-monomials of R."""
    total = p.ring.zero()
    for sub, coeff in p._terms.items():
        if sub & ~mask == 0:
            total = total + coeff
    return total


def moebius_coefficient(p, T):
    """Alternating-sum oracle sum_{R subset T} (-1)^{|T|-|R|} p(1_R)."""
    mask = as_mask(T)
    total = p.ring.zero()
    size = mask.bit_count()
    for sub in subsets(mask):
        value = evaluate_indicator(p, sub)
        total = total + (value if (size - sub.bit_count()) % 2 == 0 else -value)
    return total


class GeneralPoly:
    """Dense-exponent staging polynomial; exponents are bounded by `cap`."""

    __slots__ = ("n", "ring", "cap", "_terms")

    def __init__(self, n, ring=QQ, cap=1, terms=None):
        self.n = n
        self.ring = ring
        self.cap = cap
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise PreconditionError(f"exponent vector {exps} has wrong length for n={n}")
            if any(e < 0 or e > cap for e in exps):
                raise PreconditionError(f"exponent vector {exps} exceeds cap {cap}")
            coeff = ring.coerce(coeff)
            if not coeff.is_zero():
                clean[exps] = clean[exps] + coeff if exps in clean else coeff
        self._terms = {k: v for k, v in clean.items() if not v.is_zero()}

    @classmethod
    def constant(cls, n, ring=QQ, cap=1, value=1):
        return cls(n, ring, cap, {(0,) * n: value})

    @classmethod
    def variable(cls, n, i, ring=QQ, cap=1):
        exps = [0] * n
        exps[i] = 1
        return cls(n, ring, cap, {tuple(exps): 1})

    @classmethod
    def from_mlpoly(cls, p, cap=1):
        return cls(p.n, p.ring, cap, {
            tuple(1 if mask >> i & 1 else 0 for i in range(p.n)): c for mask, c in p.terms()
        })

    def terms(self):
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0][::-1]))

    def coefficient(self, exps):
        return self._terms.get(tuple(exps), self.ring.zero())

    def term_count(self):
        return len(self._terms)

    def is_multilinear(self):
        return all(e <= 1 for exps in self._terms for e in exps)

    def _check(self, other):
        if not isinstance(other, GeneralPoly):
            return GeneralPoly.constant(self.n, self.ring, self.cap, self.ring.coerce(other))
        if other.n != self.n or other.ring != self.ring:
            raise IncompatibleRingError("general polynomials over different variables or rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            out[exps] = out[exps] + c if exps in out else c
        return GeneralPoly(self.n, self.ring, max(self.cap, other.cap), out)

    __radd__ = __add__

    def __neg__(self):
        return GeneralPoly(self.n, self.ring, self.cap, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        if not isinstance(other, GeneralPoly):
            c = self.ring.coerce(other)
            return GeneralPoly(self.n, self.ring, self.cap, {k: v * c for k, v in self._terms.items()})
        other = self._check(other)
        cap = max(self.cap, other.cap)
        out = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                exps = tuple(x + y for x, y in zip(a, b))
                if max(exps, default=0) > cap:
                    raise PreconditionError(f"product exponent {exps} exceeds cap {cap}")
                c = ca * cb
                out[exps] = out[exps] + c if exps in out else c
        return GeneralPoly(self.n, self.ring, cap, out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        result = GeneralPoly.constant(self.n, self.ring, self.cap)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, GeneralPoly):
            return self.n == other.n and self.ring == other.ring and self._terms == other._terms
        return NotImplemented

    __hash__ = None

    def substitute_power(self, i, j, value):
        """Rewrites every factor x_i^j as `value` (terms with a smaller x_i exponent are untouched)."""
        value = self.ring.coerce(value)
        out = {}
        for exps, c in self._terms.items():
            if exps[i] >= j:
                new = list(exps)
                new[i] -= j
                exps = tuple(new)
                c = c * value
            out[exps] = out[exps] + c if exps in out else c
        return GeneralPoly(self.n, self.ring, self.cap, out)

    def evaluate(self, point):
        values = [self.ring.coerce(x) for x in point]
        total = self.ring.zero()
        for exps, c in self._terms.items():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def to_mlpoly(self, strict=False):
        if strict and not self.is_multilinear():
            raise NonMultilinearError("raw expansion contains a squared variable")
        return reduce_multilinear(self)

    def __repr__(self):
        parts = []
        for exps, c in self.terms():
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(exps) if e)
            parts.append(f"{c.to_json()}*{mono}" if mono else str(c.to_json()))
        return " + ".join(parts) or "0"


def reduce_multilinear(g):
    """Clamps every positive exponent to one and merges like monomials."""
    out = {}
    for exps, c in g._terms.items():
        mask = 0
        for i, e in enumerate(exps):
            if e:
                mask |= 1 << i
        out[mask] = out[mask] + c if mask in out else c
    return MLPoly._raw(g.n, g.ring, out)
