"""Truncated Laurent series in q with exact rational coefficients.

A QSeries stores a finite window of exactly-known coefficients: ``coeffs[k]``
is the coefficient of ``q**(valuation + k)``, and every coefficient of
exponent < ``order`` is known (all unstored ones are zero).  ``order`` may be
``math.inf`` for series known exactly at every order (e.g. polynomials in q).

Arithmetic tracks the truncation order pessimistically, so a coefficient is
never reported unless it is exact; asking past the order raises
TruncationExceeded rather than returning a silently wrong value.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import LeadingZero, TruncationExceeded

_Rat = (int, Fraction)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QSeries:
    """Laurent series sum_{n >= valuation} c_n q^n known exactly for n < order."""

    __slots__ = ("valuation", "coeffs", "order")

    def __init__(self, valuation: int, coeffs, order):
        coeffs = [_as_fraction(c) for c in coeffs]
        # strip leading and trailing zeros; leading zeros bump the valuation
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            valuation += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if order != math.inf:
            order = int(order)
        if not coeffs:
            valuation = 0
        else:
            if valuation + len(coeffs) > order:
                raise ValueError("stored coefficients extend past the truncation order")
        self.valuation = valuation
        self.coeffs = tuple(coeffs)
        self.order = order

    # ---------------------------------------------------------------- constructors

    @classmethod
    def zero(cls, order=math.inf) -> "QSeries":
        return cls(0, (), order)

    @classmethod
    def one(cls) -> "QSeries":
        return cls(0, (Fraction(1),), math.inf)

    @classmethod
    def constant(cls, c, order=math.inf) -> "QSeries":
        return cls(0, (_as_fraction(c),), order)

    @classmethod
    def monomial(cls, c, exponent: int, order=math.inf) -> "QSeries":
        return cls(exponent, (_as_fraction(c),), order)

    @classmethod
    def from_coeffs(cls, valuation: int, coeffs, order=None) -> "QSeries":
        """Series with the given coefficient window; order defaults to just past it."""
        coeffs = list(coeffs)
        if order is None:
            order = valuation + len(coeffs)
        return cls(valuation, coeffs, order)

    # ---------------------------------------------------------------- inspection

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Fraction:
        """Exact coefficient of q^n; raises TruncationExceeded for n >= order."""
        if n >= self.order:
            raise TruncationExceeded(
                f"coefficient of q^{n} is beyond the truncation order {self.order}"
            )
        k = n - self.valuation
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def coeff_list(self, start: int, stop: int) -> list[Fraction]:
        return [self.coeff(n) for n in range(start, stop)]

    # ---------------------------------------------------------------- arithmetic

    def __neg__(self) -> "QSeries":
        return QSeries(self.valuation, [-c for c in self.coeffs], self.order)

    def __add__(self, other) -> "QSeries":
        if isinstance(other, _Rat):
            other = QSeries.constant(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        if self.is_zero() and other.is_zero():
            return QSeries.zero(order)
        vals = [s.valuation for s in (self, other) if not s.is_zero()]
        lo = min(vals)
        hi = min(order, max(
            (s.valuation + len(s.coeffs) for s in (self, other) if not s.is_zero()),
            default=lo,
        ))
        coeffs = []
        for n in range(lo, hi):
            c = Fraction(0)
            for s in (self, other):
                k = n - s.valuation
                if 0 <= k < len(s.coeffs):
                    c += s.coeffs[k]
            coeffs.append(c)
        return QSeries(lo, coeffs, order)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if isinstance(other, _Rat):
            other = QSeries.constant(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, _Rat):
            c = _as_fraction(other)
            if c == 0:
                return QSeries.zero(self.order)
            return QSeries(self.valuation, [c * a for a in self.coeffs], self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            # the zero series has no meaningful valuation; only orders survive
            order = min(self.order + other.valuation, other.order + self.valuation)
            return QSeries.zero(order)
        order = min(self.valuation + other.order, other.valuation + self.order)
        lo = self.valuation + other.valuation
        n_terms = max(0, min(order - lo, len(self.coeffs) + len(other.coeffs) - 1))
        acc = [Fraction(0)] * n_terms
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            jmax = min(len(other.coeffs), n_terms - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if b != 0:
                    acc[i + j] += a * b
        return QSeries(lo, acc, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, _Rat):
            c = _as_fraction(other)
            return self * Fraction(c.denominator, c.numerator)
        if isinstance(other, QSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int) -> "QSeries":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.constant(1, order=math.inf)
        base = self
        e = n
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        if n == 0:
            # truncation still limits what is known about f**0 relative to f
            return QSeries.constant(1, order=math.inf)
        return result

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; order shrinks to order - 2*valuation."""
        if self.is_zero():
            raise LeadingZero("cannot invert the zero series")
        v = self.valuation
        c = self.coeffs
        if self.order == math.inf:
            # the inverse of an exactly-known polynomial is generally an infinite
            # series; the caller must pick a finite window first
            raise TruncationExceeded(
                "inverse of an exactly-known series is not finitely representable; "
                "truncate() first"
            )
        n_terms = self.order - v  # unit-part coefficients computable exactly
        if n_terms <= 0:
            raise TruncationExceeded(
                "not enough known coefficients to invert at this valuation"
            )
        inv0 = Fraction(1) / c[0]
        out = [inv0]
        for n in range(1, n_terms):
            s = Fraction(0)
            kmax = min(n, len(c) - 1)
            for k in range(1, kmax + 1):
                if c[k] != 0:
                    s += c[k] * out[n - k]
            out.append(-inv0 * s)
        return QSeries(-v, out, self.order - 2 * v)

    def theta(self) -> "QSeries":
        """The operator q d/dq: multiplies the q^n coefficient by n."""
        coeffs = [(self.valuation + k) * c for k, c in enumerate(self.coeffs)]
        return QSeries(self.valuation, coeffs, self.order)

    def truncate(self, order: int) -> "QSeries":
        """Forget coefficients at exponents >= order."""
        if order >= self.order:
            return self
        kept = [c for k, c in enumerate(self.coeffs) if self.valuation + k < order]
        return QSeries(self.valuation, kept, order)

    # ---------------------------------------------------------------- numerics

    def evaluate(self, q):
        """Numeric value at q (complex or mpmath); Horner on the stored window."""
        zero = q * 0
        acc = zero
        for c in reversed(self.coeffs):
            acc = acc * q + (zero + c.numerator) / c.denominator
        if self.valuation and self.coeffs:
            acc = acc * q ** self.valuation
        return acc

    # ---------------------------------------------------------------- comparison

    def __eq__(self, other) -> bool:
        """Exact agreement of every jointly-known coefficient."""
        if isinstance(other, _Rat):
            other = QSeries.constant(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        if order == math.inf:
            return self.valuation == other.valuation and self.coeffs == other.coeffs
        lo = min((s.valuation for s in (self, other) if not s.is_zero()), default=0)
        return all(self.coeff(n) == other.coeff(n) for n in range(lo, order))

    __hash__ = None

    # ---------------------------------------------------------------- rendering

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            n = self.valuation + k
            if n == 0:
                body = str(abs(c))
            else:
                mag = abs(c)
                head = "" if mag == 1 else f"{mag}*"
                body = f"{head}q" if n == 1 else f"{head}q^{n}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            text = "0"
        else:
            sign0, body0 = parts[0]
            text = ("-" if sign0 == "-" else "") + body0
            for sign, body in parts[1:]:
                text += f" {sign} {body}"
        if self.order != math.inf:
            text += f" + O(q^{self.order})"
        return text

    def __repr__(self) -> str:
        return f"QSeries({self})"
