# Exact coefficient rings: GF(2), the rationals, and Q[zeta]/(zeta^m - 1).
import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalNumber

from pdeforge.errors import IncompatibleRingError, InputFormatError, PreconditionError

GF2_KIND = "gf2"
Q_KIND = "q"
CYC_KIND = "cyc"


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag. `modulus` is only meaningful for the cyclotomic kind."""

    kind: str
    modulus: int = 1

    def __post_init__(self):
        if self.kind not in (GF2_KIND, Q_KIND, CYC_KIND):
            raise InputFormatError(f"unknown ring kind {self.kind!r}")
        if self.modulus < 1:
            raise InputFormatError(f"cyclotomic modulus must be >= 1, got {self.modulus}")

    @property
    def tag(self):
        return f"cyc:{self.modulus}" if self.kind == CYC_KIND else self.kind

    def __str__(self):
        return self.tag

    # Constructors

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, value):
        return self.from_fraction(Fraction(value))

    def from_fraction(self, value):
        value = Fraction(value)
        if self.kind == GF2_KIND:
            if value.denominator % 2 == 0:
                raise PreconditionError(f"{value} has no image in GF(2): even denominator")
            return RingElem(self, value.numerator % 2)
        if self.kind == Q_KIND:
            return RingElem(self, value)
        coeffs = [Fraction(0)] * self.modulus
        coeffs[0] = value
        return RingElem(self, tuple(coeffs))

    def root_of_unity(self, exponent):
        """zeta^exponent; over Q only +-1 are available (modulus 2 semantics)."""
        if self.kind == CYC_KIND:
            coeffs = [Fraction(0)] * self.modulus
            coeffs[exponent % self.modulus] = Fraction(1)
            return RingElem(self, tuple(coeffs))
        if self.kind == GF2_KIND:
            return self.one()
        return self.from_int(-1 if exponent % 2 else 1)

    def coerce(self, value):
        if isinstance(value, RingElem):
            if value.ring != self:
                raise IncompatibleRingError(f"cannot combine {value.ring} with {self}")
            return value
        if isinstance(value, (int, Fraction, _RationalNumber)):
            return self.from_fraction(Fraction(value))
        raise IncompatibleRingError(f"cannot coerce {type(value).__name__} into {self}")

    # JSON

    def parse(self, obj):
        """Decodes a JSON coefficient for this ring."""
        try:
            if self.kind == GF2_KIND:
                if isinstance(obj, str):
                    return self.from_fraction(Fraction(obj))
                return RingElem(self, int(obj) % 2)
            if self.kind == Q_KIND:
                if isinstance(obj, float):
                    raise InputFormatError(f"rational coefficients must be strings or ints, got {obj!r}")
                return RingElem(self, Fraction(str(obj)))
            if isinstance(obj, dict):
                if int(obj.get("m", -1)) != self.modulus:
                    raise IncompatibleRingError(f"coefficient modulus {obj.get('m')} does not match {self}")
                coeffs = tuple(Fraction(str(c)) for c in obj["coeffs"])
                if len(coeffs) != self.modulus:
                    raise InputFormatError(f"expected {self.modulus} cyclotomic coefficients, got {len(coeffs)}")
                return RingElem(self, coeffs)
            return self.from_fraction(Fraction(str(obj)))
        except (ValueError, ZeroDivisionError, KeyError, TypeError) as e:
            raise InputFormatError(f"bad {self.tag} coefficient {obj!r}: {e}") from e

    @classmethod
    def from_tag(cls, tag):
        tag = str(tag).strip().lower()
        if tag in (GF2_KIND, Q_KIND):
            return cls(tag)
        if tag.startswith("cyc:"):
            try:
                return cyclotomic(int(tag[4:]))
            except ValueError as e:
                raise InputFormatError(f"bad ring tag {tag!r}") from e
        raise InputFormatError(f"bad ring tag {tag!r}")


GF2 = Ring(GF2_KIND)
QQ = Ring(Q_KIND)


def cyclotomic(m):
    return Ring(CYC_KIND, int(m))


def root_of_unity(m, e):
    return cyclotomic(m).root_of_unity(e)


class RingElem:
    """Immutable ring element. Arithmetic only combines elements of the same ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        if ring.kind == Q_KIND and not isinstance(value, Fraction):
            value = Fraction(value)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("RingElem is immutable")

    # Predicates

    def is_zero(self):
        if self.ring.kind == CYC_KIND:
            return not any(self.value)
        return self.value == 0

    def is_one(self):
        if self.ring.kind == CYC_KIND:
            return self.value[0] == 1 and not any(self.value[1:])
        return self.value == 1

    def __bool__(self):
        return not self.is_zero()

    # Arithmetic

    def __add__(self, other):
        other = self.ring.coerce(other)
        if self.ring.kind == GF2_KIND:
            return RingElem(self.ring, self.value ^ other.value)
        if self.ring.kind == Q_KIND:
            return RingElem(self.ring, self.value + other.value)
        return RingElem(self.ring, tuple(a + b for a, b in zip(self.value, other.value)))

    __radd__ = __add__

    def __neg__(self):
        if self.ring.kind == GF2_KIND:
            return self
        if self.ring.kind == Q_KIND:
            return RingElem(self.ring, -self.value)
        return RingElem(self.ring, tuple(-a for a in self.value))

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        other = self.ring.coerce(other)
        if self.ring.kind == GF2_KIND:
            return RingElem(self.ring, self.value & other.value)
        if self.ring.kind == Q_KIND:
            return RingElem(self.ring, self.value * other.value)
        m = self.ring.modulus
        out = [Fraction(0)] * m
        for i, a in enumerate(self.value):
            if not a:
                continue
            for j, b in enumerate(other.value):
                if b:
                    out[(i + j) % m] += a * b
        return RingElem(self.ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise PreconditionError(f"ring powers need a nonnegative integer exponent, got {exponent!r}")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.ring.kind == GF2_KIND:
            return self
        if self.ring.kind == Q_KIND:
            return RingElem(self.ring, 1 / self.value)
        support = [(e, c) for e, c in enumerate(self.value) if c]
        if len(support) != 1:
            raise PreconditionError(f"{self} is not a monomial unit in {self.ring}")
        e, c = support[0]
        return self.ring.root_of_unity(-e) * self.ring.from_fraction(1 / c)

    def __truediv__(self, other):
        return self * self.ring.coerce(other).inverse()

    # Comparison

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.ring.from_fraction(Fraction(other)).value
            except PreconditionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    # Conversions

    def to_complex(self):
        if self.ring.kind == CYC_KIND:
            m = self.ring.modulus
            return sum(complex(float(c)) * cmath.exp(2j * cmath.pi * e / m)
                       for e, c in enumerate(self.value) if c) or 0j
        return complex(float(self.value))

    def to_fraction(self):
        """Rational value, for GF(2), Q and cyclotomic elements without zeta terms."""
        if self.ring.kind == CYC_KIND:
            if any(self.value[1:]):
                raise PreconditionError(f"{self} is not rational")
            return self.value[0]
        return Fraction(self.value)

    def to_json(self):
        if self.ring.kind == GF2_KIND:
            return self.value
        if self.ring.kind == Q_KIND:
            return str(self.value)
        return {"m": self.ring.modulus, "coeffs": [str(c) for c in self.value]}

    def __repr__(self):
        if self.ring.kind == CYC_KIND:
            terms = [f"{c}*z^{e}" if e else str(c) for e, c in enumerate(self.value) if c]
            return f"RingElem({self.ring.tag}: {' + '.join(terms) or '0'})"
        return f"RingElem({self.ring.tag}: {self.value})"

    __str__ = __repr__


def pow_m_is_unit(a, m):
    """True iff a^m is exactly the multiplicative identity."""
    if m < 1:
        raise PreconditionError(f"m must be positive, got {m}")
    return (a ** m).is_one()


def elem(value, ring=QQ):
    return ring.coerce(value)
