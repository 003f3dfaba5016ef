"""Classical level-one Eisenstein q-expansions and frame constants.

The three weight-2k series (k = 1, 2, 3) are normalized to constant term 1:

    E_{2k} = 1 + (-1)^k (4k / B_k) sum_{n>=1} sigma_{2k-1}(n) q^n

with B_1 = 1/6, B_2 = 1/30, B_3 = 1/42, giving the familiar -24, +240, -504.
Frame constants attach the rational multipliers (1, 12, 8) and powers of
u = 2*pi*i/12 that convert these normalized series into the coordinates used
by the parameter-space (t) picture: t_k corresponds to mult_k * u^k * E_{2k}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULTS
from .errors import LowImaginaryPart, OddWeight
from .qseries import QSeries

#: u = 2*pi*i/12, the base frame unit (one power per half-weight).
U = 1j * math.pi / 6

_BERNOULLI = {1: Fraction(1, 6), 2: Fraction(1, 30), 3: Fraction(1, 42)}

#: rational multiplier relating the k-th parameter coordinate to u^k * E_{2k}
GEN_MULTIPLIER = {1: Fraction(1), 2: Fraction(12), 3: Fraction(8)}


def sigma(power: int, n: int) -> int:
    """Divisor power sum sigma_power(n) by trial division."""
    if n < 1:
        raise ValueError("sigma is defined for n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** power
            e = n // d
            if e != d:
                total += e ** power
        d += 1
    return total


_series_cache: dict[tuple[int, int], QSeries] = {}


def eisenstein_series(k: int, order: int = DEFAULTS.series_order) -> QSeries:
    """Normalized weight-2k Eisenstein series, k in {1, 2, 3}, exact to ``order``."""
    if k not in _BERNOULLI:
        raise ValueError("k must be 1, 2 or 3")
    key = (k, order)
    if key not in _series_cache:
        factor = Fraction((-1) ** k * 4 * k) / _BERNOULLI[k]
        coeffs = [Fraction(1)] + [factor * sigma(2 * k - 1, n) for n in range(1, order)]
        _series_cache[key] = QSeries(0, coeffs, order)
    return _series_cache[key]


def e2(order: int = DEFAULTS.series_order) -> QSeries:
    return eisenstein_series(1, order)


def e4(order: int = DEFAULTS.series_order) -> QSeries:
    return eisenstein_series(2, order)


def e6(order: int = DEFAULTS.series_order) -> QSeries:
    return eisenstein_series(3, order)


def discriminant_series(order: int = DEFAULTS.series_order) -> QSeries:
    """The normalized cusp form (E4^3 - E6^2)/1728 = q - 24q^2 + 252q^3 - ..."""
    return (e4(order) ** 3 - e6(order) ** 2) / 1728


def j_series(order: int = DEFAULTS.series_order) -> QSeries:
    """The modular j-function expansion q^-1 + 744 + 196884q + ..., exact to ``order``."""
    # the inversion of the valuation-1 cusp form costs two orders of truncation
    n = order + 2
    return (e4(n) ** 3) * discriminant_series(n).inverse()


@dataclass(frozen=True)
class FrameConstant:
    """An exact frame factor rational * u^u_power with u = 2*pi*i/12."""

    u_power: int
    rational: Fraction = Fraction(1)

    def value(self) -> complex:
        return complex(self.rational) * U ** self.u_power

    def __str__(self) -> str:
        if self.u_power == 0:
            return str(self.rational)
        head = "" if self.rational == 1 else f"{self.rational}*"
        exp = "" if self.u_power == 1 else f"^{self.u_power}"
        return f"{head}(2*pi*i/12){exp}"


#: frame constant of the k-th generator coordinate: t_k <-> GEN_FRAME[k] * E_{2k}
GEN_FRAME = {k: FrameConstant(k, GEN_MULTIPLIER[k]) for k in (1, 2, 3)}


def frame_value(weight: int) -> FrameConstant:
    """u^(weight/2) as an exact object; weights must be even."""
    if weight % 2:
        raise OddWeight(f"no frame factor for odd weight {weight}")
    return FrameConstant(weight // 2)


def frame_factor(weight: int) -> complex:
    return frame_value(weight).value()


def g_constants() -> tuple[complex, complex, complex]:
    """(a1, a2, a3) = (u, 12u^2, 8u^3), the limits of the three coordinates at i·infinity."""
    return tuple(complex(GEN_MULTIPLIER[k]) * U ** k for k in (1, 2, 3))


def nome(z: complex) -> complex:
    """q = exp(2*pi*i*z), guarding against evaluation too close to the real axis."""
    if z.imag < DEFAULTS.im_floor:
        raise LowImaginaryPart(
            f"Im(z) = {z.imag:.4f} is below the evaluation floor {DEFAULTS.im_floor}"
        )
    return cmath.exp(2j * math.pi * z)


def eisenstein_point(z: complex, order: int = DEFAULTS.series_order) -> tuple[complex, complex, complex]:
    """The parameter-space point (t1, t2, t3) attached to z in the upper half plane.

    t_k = mult_k * u^k * E_{2k}(q) with q = exp(2*pi*i*z); this point lies on the
    t0 = 1 slice and has discriminant 27*t3^2 - t2^3 proportional to the cusp form.
    """
    q = nome(z)
    return tuple(
        complex(GEN_MULTIPLIER[k]) * U ** k * eisenstein_series(k, order).evaluate(q)
        for k in (1, 2, 3)
    )
