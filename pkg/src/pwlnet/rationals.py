"""Exact rational scalars and affine functions.

Every quantity in this package is a `fractions.Fraction`; there is no
floating point anywhere in the core. Emptiness and comparison decisions
downstream rely on that exactness, so this module is deliberately strict:
parsing either yields the exactly represented rational or raises.

An `AffineFunc` is gamma0 + gamma1*x1 + ... + gamman*xn with rational
coefficients, stored densely (the networks we compile are fully
connected, so sparsity buys nothing).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, ParseError

Rational = Fraction
Point = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse a decimal numeral or an "a/b" fraction into an exact Fraction.

    Decimals are converted exactly (power-of-ten denominators), so "0.1"
    means 1/10, not the binary float.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError(f"empty or non-string rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in rational literal {text!r}") from None
    except ValueError:
        raise ParseError(f"malformed rational literal {text!r}") from None


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "a/b" (or plain "a" for integers)."""
    return str(value)


def format_decimal(value: Fraction, max_places: int = 12) -> str:
    """Render a Fraction as a decimal string.

    Exact whenever the expansion terminates within `max_places` digits;
    otherwise rounded half-even at `max_places`. Trailing zeros trimmed.
    """
    sign = "-" if value < 0 else ""
    mag = -value if value < 0 else value
    whole, rest = divmod(mag.numerator, mag.denominator)
    scaled = rest * 10**max_places
    frac_digits, remainder = divmod(scaled, mag.denominator)
    if remainder * 2 > mag.denominator or (
        remainder * 2 == mag.denominator and frac_digits % 2 == 1
    ):
        frac_digits += 1
        if frac_digits >= 10**max_places:
            whole += 1
            frac_digits = 0
    if frac_digits == 0:
        return f"{sign}{whole}"
    tail = str(frac_digits).rjust(max_places, "0").rstrip("0")
    return f"{sign}{whole}.{tail}"


def parse_point(text: str) -> Point:
    """Parse a point literal: rationals separated by commas or whitespace."""
    tokens = [t for t in text.replace(",", " ").split() if t]
    if not tokens:
        raise ParseError(f"empty point literal: {text!r}")
    return tuple(parse_rational(t) for t in tokens)


def format_point(point: Sequence[Fraction]) -> str:
    return ", ".join(format_rational(c) for c in point)


@dataclass(frozen=True)
class AffineFunc:
    """gamma0 + gamma1*x1 + ... + gamman*xn over points of a fixed arity."""

    bias: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    @classmethod
    def constant(cls, value: Fraction | int, arity: int) -> "AffineFunc":
        return cls(Fraction(value), (ZERO,) * arity)

    @classmethod
    def zero(cls, arity: int) -> "AffineFunc":
        return cls.constant(0, arity)

    @classmethod
    def one(cls, arity: int) -> "AffineFunc":
        return cls.constant(1, arity)

    @classmethod
    def projection(cls, index: int, arity: int) -> "AffineFunc":
        """The coordinate function x_{index+1} on arity-dimensional points."""
        if not 0 <= index < arity:
            raise DimensionError(f"projection index {index} out of range for arity {arity}")
        coeffs = tuple(ONE if k == index else ZERO for k in range(arity))
        return cls(ZERO, coeffs)

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.arity:
            raise DimensionError(
                f"affine function of arity {self.arity} applied to point of length {len(point)}"
            )
        total = self.bias
        for c, x in zip(self.coeffs, point):
            if c:
                total += c * x
        return total

    def compose(self, inner: Sequence["AffineFunc"]) -> "AffineFunc":
        """The affine function equal to self applied to the tuple `inner`.

        All inner functions must share one arity; coefficients are combined
        symbolically, so the result is exact.
        """
        if len(inner) != self.arity:
            raise DimensionError(
                f"outer arity {self.arity} but {len(inner)} inner functions"
            )
        if inner:
            arity = inner[0].arity
            for g in inner:
                if g.arity != arity:
                    raise DimensionError("inner functions disagree on arity")
        else:
            arity = 0
        bias = self.bias
        coeffs = [ZERO] * arity
        for c, g in zip(self.coeffs, inner):
            if not c:
                continue
            bias += c * g.bias
            for k, gc in enumerate(g.coeffs):
                if gc:
                    coeffs[k] += c * gc
        return AffineFunc(bias, tuple(coeffs))

    def scale(self, factor: Fraction | int) -> "AffineFunc":
        f = Fraction(factor)
        return AffineFunc(self.bias * f, tuple(c * f for c in self.coeffs))

    def shift(self, delta: Fraction | int) -> "AffineFunc":
        return AffineFunc(self.bias + Fraction(delta), self.coeffs)

    def __add__(self, other: "AffineFunc") -> "AffineFunc":
        if not isinstance(other, AffineFunc):
            return NotImplemented
        if other.arity != self.arity:
            raise DimensionError("cannot add affine functions of different arity")
        return AffineFunc(
            self.bias + other.bias,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "AffineFunc") -> "AffineFunc":
        if not isinstance(other, AffineFunc):
            return NotImplemented
        if other.arity != self.arity:
            raise DimensionError("cannot subtract affine functions of different arity")
        return AffineFunc(
            self.bias - other.bias,
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "AffineFunc":
        return self.scale(-1)

    @property
    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if c == 1:
                parts.append(f"x{k + 1}")
            elif c == -1:
                parts.append(f"-x{k + 1}")
            else:
                parts.append(f"{c}*x{k + 1}")
        if self.bias or not parts:
            parts.append(str(self.bias))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out
