"""Scalar arithmetic: exact Gaussian rationals and complex binary64 values.

Two scalar kinds coexist and never mix implicitly:

* :class:`GaussianRational` -- exact values in Q(i), rational parts backed by
  ``gmpy2.mpq`` (arbitrary precision, always reduced, denominator > 0).
* :class:`ComplexFloat` -- a pair of finite binary64 numbers.

Arithmetic between the two raises :class:`ExactnessError`; go through
:func:`to_float` explicitly when a lossy conversion is intended.  Python
``int`` (and ``Fraction``/``mpq``) operands are accepted by both kinds, Python
``float``/``complex`` operands only by :class:`ComplexFloat`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpq

__all__ = [
    "DomainError",
    "ExactnessError",
    "NumericError",
    "InvariantViolation",
    "ScalarParseError",
    "GaussianRational",
    "ComplexFloat",
    "Scalar",
    "Tolerance",
    "DEFAULT_TOL",
    "parse_scalar",
    "render",
    "to_float",
    "approx_eq",
    "is_exact",
    "zero_like",
    "one_like",
    "as_scalar",
    "exact_sqrt",
]


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ExactnessError(TypeError):
    """Exact and floating values were combined without explicit conversion."""


class NumericError(ArithmeticError):
    """A floating-point procedure failed to reach its accuracy target."""

    def __init__(self, message: str, worst_residual: float = math.nan):
        super().__init__(message)
        self.worst_residual = worst_residual


class InvariantViolation(RuntimeError):
    """A proved statement was contradicted by a computation. Must never fire."""


class ScalarParseError(ValueError):
    """Malformed scalar text."""

    def __init__(self, token: str, reason: str = "malformed scalar"):
        super().__init__(f"{reason}: {token!r}")
        self.token = token


_Q0 = mpq(0)
_Q1 = mpq(1)
_RATIONAL_TYPES = (int, Fraction, type(_Q0))


def _as_mpq(x) -> mpq:
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, type(_Q0)):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return _parse_rational(x)
    raise ExactnessError(f"cannot build an exact rational from {type(x).__name__}")


class GaussianRational:
    """Exact element ``re + im*i`` of Q(i).  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_mpq(re))
        object.__setattr__(self, "im", _as_mpq(im))

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> GaussianRational:
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- coercion -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._raw(_as_mpq(other), _Q0)
        if isinstance(other, (ComplexFloat, float, complex)):
            raise ExactnessError(
                "exact and floating scalars cannot be combined; convert with to_float()"
            )
        return NotImplemented

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, _Q0)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def reciprocal(self) -> GaussianRational:
        # division in Q(i) via the conjugate
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result = GaussianRational._raw(_Q1, _Q0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> mpq:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(_mpq_to_float(self.re), _mpq_to_float(self.im))

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return not self.im and self.re == _as_mpq(other)
        return NotImplemented

    def __hash__(self):
        return hash((GaussianRational, self.re, self.im))

    def __complex__(self):
        return complex(_mpq_to_float(self.re), _mpq_to_float(self.im))

    def __repr__(self):
        return f"GaussianRational({_qstr(self.re)}, {_qstr(self.im)})"

    def __str__(self):
        return render(self)


class ComplexFloat:
    """Complex value with finite binary64 components.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0.0, im=0.0):
        if isinstance(re, complex):
            re, im = re.real, re.imag + float(im)
        re = float(re)
        im = float(im)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise DomainError(f"non-finite component in ComplexFloat({re}, {im})")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def _from_complex(cls, c: complex) -> ComplexFloat:
        return cls(c.real, c.imag)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexFloat is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexFloat):
            return complex(other.re, other.im)
        if isinstance(other, GaussianRational):
            raise ExactnessError(
                "exact and floating scalars cannot be combined; convert with to_float()"
            )
        if isinstance(other, (int, float, complex)):
            return complex(other)
        if isinstance(other, (Fraction, type(_Q0))):
            return complex(float(other))
        return NotImplemented

    def _c(self) -> complex:
        return complex(self.re, self.im)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(self._c() + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(self._c() - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(o - self._c())

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(self._c() * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(self._c() / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ComplexFloat._from_complex(o / self._c())

    def reciprocal(self) -> ComplexFloat:
        return ComplexFloat._from_complex(1.0 / self._c())

    def __pow__(self, k):
        if isinstance(k, int):
            return ComplexFloat._from_complex(self._c() ** k)
        return NotImplemented

    def __neg__(self):
        return ComplexFloat(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> ComplexFloat:
        return ComplexFloat(self.re, -self.im)

    def norm(self) -> float:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def is_zero(self) -> bool:
        return self.re == 0.0 and self.im == 0.0

    def is_real(self) -> bool:
        return self.im == 0.0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, ComplexFloat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, float, complex)) and not isinstance(other, bool):
            return self._c() == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash((ComplexFloat, self.re, self.im))

    def __complex__(self):
        return self._c()

    def __repr__(self):
        return f"ComplexFloat({self.re!r}, {self.im!r})"

    def __str__(self):
        return render(self)


Scalar = Union[GaussianRational, ComplexFloat]


@dataclass(frozen=True)
class Tolerance:
    """``approx_eq(a, b)`` iff ``|a-b| <= absolute + relative*max(|a|, |b|)``."""

    absolute: float = 1e-10
    relative: float = 1e-10

    def __post_init__(self):
        if not (self.absolute >= 0 and self.relative >= 0):
            raise DomainError("tolerance components must be non-negative")

    def band(self, a: float, b: float) -> float:
        return self.absolute + self.relative * max(a, b)


DEFAULT_TOL = Tolerance()


def is_exact(x) -> bool:
    return isinstance(x, GaussianRational)


def zero_like(x) -> Scalar:
    return GaussianRational._raw(_Q0, _Q0) if is_exact(x) else ComplexFloat(0.0, 0.0)


def one_like(x) -> Scalar:
    return GaussianRational._raw(_Q1, _Q0) if is_exact(x) else ComplexFloat(1.0, 0.0)


def as_scalar(x) -> Scalar:
    """Lift Python numbers: ints/fractions become exact, floats/complex become ComplexFloat."""
    if isinstance(x, (GaussianRational, ComplexFloat)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, _RATIONAL_TYPES):
        return GaussianRational(x)
    if isinstance(x, (float, complex)):
        return ComplexFloat(complex(x))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a scalar")


# -- text form -----------------------------------------------------------

_INT_RE = re.compile(r"^[+-]?\d+$")
_RAT_RE = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")
_DEC_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _parse_rational(tok: str) -> mpq:
    tok = tok.strip()
    if _INT_RE.match(tok):
        return mpq(int(tok))
    m = _RAT_RE.match(tok)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise DomainError(f"zero denominator in {tok!r}")
        return mpq(int(m.group(1)), den)
    raise ScalarParseError(tok, "not an exact rational literal")


def _parse_real(tok: str):
    """Return an ``mpq`` for exact literals or a ``float`` for decimals."""
    tok = tok.strip()
    if not tok:
        raise ScalarParseError(tok, "empty scalar")
    if _INT_RE.match(tok) or _RAT_RE.match(tok):
        return _parse_rational(tok)
    if _DEC_RE.match(tok):
        return float(tok)
    raise ScalarParseError(tok)


def _pair(re_part, im_part) -> Scalar:
    if isinstance(re_part, float) or isinstance(im_part, float):
        return ComplexFloat(float(re_part), float(im_part))
    return GaussianRational._raw(re_part, im_part)


def parse_scalar(text) -> Scalar:
    """Parse ``"p/q"``, ``"p"``, a decimal, or a complex pair.

    Complex pairs are written ``"(re, im)"`` / ``"re, im"`` or given as a
    mapping ``{"re": ..., "im": ...}`` with text components.  Exact literals
    give :class:`GaussianRational`; any decimal component gives
    :class:`ComplexFloat`.
    """
    if isinstance(text, dict):
        missing = {"re", "im"} - set(text)
        if missing:
            raise ScalarParseError(str(text), f"complex record lacks {sorted(missing)}")
        return _pair(_parse_real(str(text["re"])), _parse_real(str(text["im"])))
    if not isinstance(text, str):
        raise ScalarParseError(repr(text), "scalar text must be a string")
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if "," in s:
        parts = s.split(",")
        if len(parts) != 2:
            raise ScalarParseError(text, "complex pair needs exactly two components")
        return _pair(_parse_real(parts[0]), _parse_real(parts[1]))
    return _pair(_parse_real(s), _Q0)


def _qstr(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def float_text(x: float) -> str:
    """17 significant digits, always recognisable as a decimal."""
    s = f"{x:.17g}"
    if not any(c in s for c in ".eEn"):
        s += ".0"
    return s


def component_texts(x: Scalar) -> tuple[str, str]:
    if isinstance(x, GaussianRational):
        return _qstr(x.re), _qstr(x.im)
    return float_text(x.re), float_text(x.im)


def render(x: Scalar) -> str:
    """Inverse of :func:`parse_scalar` (exactly so on exact values)."""
    re_s, im_s = component_texts(x)
    if isinstance(x, GaussianRational) and not x.im:
        return re_s
    return f"({re_s}, {im_s})"


# -- conversions and comparison -----------------------------------------

def _mpq_to_float(q: mpq) -> float:
    try:
        # int true division is correctly rounded
        return int(q.numerator) / int(q.denominator)
    except OverflowError as exc:
        raise OverflowError(f"{_qstr(q)} overflows binary64") from exc


def to_float(x) -> ComplexFloat:
    """Nearest binary64 pair; identity on :class:`ComplexFloat`."""
    if isinstance(x, ComplexFloat):
        return x
    if isinstance(x, GaussianRational):
        return ComplexFloat(_mpq_to_float(x.re), _mpq_to_float(x.im))
    return ComplexFloat(complex(x))


def approx_eq(a: Scalar, b: Scalar, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Exact pairs compare by identity; otherwise the tolerance band applies.

    Reflexive and symmetric, not transitive.
    """
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    ca, cb = complex(to_float(a)), complex(to_float(b))
    return abs(ca - cb) <= tol.band(abs(ca), abs(cb))


# -- exact square roots --------------------------------------------------

def _rational_sqrt(q: mpq):
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    if gmpy2.is_square(n) and gmpy2.is_square(d):
        return mpq(int(gmpy2.isqrt(n)), int(gmpy2.isqrt(d)))
    return None


def exact_sqrt(w: GaussianRational):
    """A square root of ``w`` in Q(i), or ``None`` when it is irrational.

    The returned root has non-negative real part (and non-negative imaginary
    part when the real part vanishes).
    """
    if w.is_zero():
        return GaussianRational()
    modulus = _rational_sqrt(w.norm())
    if modulus is None:
        return None
    x = _rational_sqrt((modulus + w.re) / 2)
    y = _rational_sqrt((modulus - w.re) / 2)
    if x is None or y is None:
        return None
    if w.im < 0:
        y = -y
    root = GaussianRational._raw(x, y)
    if root * root != w:  # pragma: no cover - defensive
        return None
    return root
