"""The modular vector field on the t0 = 1 parameter slice and its foliation.

The field

    Ra = (t1^2 - t2/12,  4 t1 t2 - 6 t3,  6 t1 t3 - t2^2/3)

is tangent to the isomonodromic leaves: the modular-parameter curve
s |-> (g1(z+s), g2(z+s), g3(z+s)) is one of its integral curves, the slice
discriminant obeys the cocycle d/ds log Delta = 12 t1, and the invariants
(b2, |b3|) from :mod:`dmforms.periods` are constant along each leaf.  The
singular set of the field is the curve a |-> (a, 12 a^2, 8 a^3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize

from .config import DEFAULTS
from .eisenstein import eisenstein_point
from .errors import (
    DegenerateScale,
    DiscriminantApproach,
    LowImaginaryPart,
    SingularApproach,
    StepFailure,
)
from .mpoly import MPoly
from .periods import b_values, period_matrix, scale_action

T_NAMES = ("t1", "t2", "t3")
T1, T2, T3 = MPoly.gens(T_NAMES)

F = Fraction

#: the three components of the modular vector field
RA_POLYS = (
    T1 ** 2 - F(1, 12) * T2,
    4 * T1 * T2 - 6 * T3,
    6 * T1 * T3 - F(1, 3) * T2 ** 2,
)

#: slice discriminant
DELTA3 = 27 * T3 ** 2 - T2 ** 3

#: pairwise annihilator 1-forms of the field: each is Ra_i dt_j - Ra_j dt_i
#: stored as ((coeff of dt_i, i), (coeff of dt_j, j))
ANNIHILATOR_FORMS = (
    ((-RA_POLYS[1], 0), (RA_POLYS[0], 1)),   # Ra1 dt2 - Ra2 dt1
    ((-RA_POLYS[2], 1), (RA_POLYS[1], 2)),   # Ra2 dt3 - Ra3 dt2
    ((-RA_POLYS[2], 0), (RA_POLYS[0], 2)),   # Ra1 dt3 - Ra3 dt1
)


def ra_eval(t):
    """Evaluate the field; exact when the input is rational."""
    return tuple(p.eval(tuple(t)) for p in RA_POLYS)


def annihilator_contractions():
    """The contraction of each annihilator 1-form with the field (all zero)."""
    out = []
    for (ca, ia), (cb, ib) in ANNIHILATOR_FORMS:
        out.append(ca * RA_POLYS[ia] + cb * RA_POLYS[ib])
    return tuple(out)


def delta_cocycle_identity() -> bool:
    """Exact check of dDelta(Ra) = 12 t1 Delta on the slice."""
    contraction = sum(
        (DELTA3.partial(i) * RA_POLYS[i] for i in range(3)), MPoly.zero(T_NAMES)
    )
    return contraction == 12 * T1 * DELTA3


def singular_point(a):
    """The parametrized singular curve of the field."""
    return (a, 12 * a * a, 8 * a * a * a)


def dist_to_sing(t) -> float:
    """Euclidean distance from t to the singular curve, minimized over the
    complex curve parameter (nonconvex; uses several seeds)."""
    tv = tuple(complex(v) for v in t)

    def objective(xy):
        a = complex(xy[0], xy[1])
        p = singular_point(a)
        return sum(abs(u - v) ** 2 for u, v in zip(tv, p))

    seeds = [tv[0]]
    if tv[1] != 0:
        root = complex(np.sqrt(complex(tv[1]) / 12))
        seeds += [root, -root]
    seeds.append(complex(tv[2] / 8) ** (1 / 3) if tv[2] != 0 else 0j)
    best = float("inf")
    for seed in seeds:
        res = minimize(objective, [seed.real, seed.imag], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 400})
        best = min(best, float(res.fun))
    return float(np.sqrt(max(best, 0.0)))


# ------------------------------------------------------------------- flow

def _field_floor(t) -> float:
    return 1e-12 * (1.0 + max(abs(v) for v in t)) ** 2


def _disc_floor(t) -> float:
    return DEFAULTS.disc_floor * (1.0 + max(abs(v) for v in t)) ** 6


def delta3_value(t) -> complex:
    return complex(DELTA3.eval(tuple(complex(v) for v in t)))


@dataclass
class FlowResult:
    """Integral curve of the field with the accumulated log-discriminant."""

    start: tuple
    length: float
    _solution: object

    @property
    def end(self) -> tuple:
        return self.at(self.length)

    def at(self, s: float) -> tuple:
        y = self._solution.sol(s)
        return tuple(y[:3])

    def log_factor(self, s: float) -> complex:
        """Integral of 12 t1 up to s: Delta(t(s)) = Delta(t(0)) exp(...)."""
        return complex(self._solution.sol(s)[3])


def flow(start, length: float, rtol: float = DEFAULTS.ode_rtol,
         atol: float = DEFAULTS.ode_atol) -> FlowResult:
    """Integrate dt/ds = Ra(t) for real s in [0, length].

    Also integrates the discriminant cocycle d/ds log Delta = 12 t1 as a
    fourth component.  Raises SingularApproach near the singular curve and
    DiscriminantApproach near the discriminant."""
    start = tuple(complex(v) for v in start)

    def rhs(s, y):
        t = tuple(y[:3])
        v = ra_eval(t)
        speed = max(abs(c) for c in v)
        if speed < _field_floor(t):
            raise SingularApproach(
                f"|field| = {speed:.3e} at s = {s:.4f}; singular curve reached"
            )
        if abs(delta3_value(t)) < _disc_floor(t):
            raise DiscriminantApproach(
                f"|Delta| below floor at s = {s:.4f}"
            )
        return [v[0], v[1], v[2], 12.0 * t[0]]

    rhs(0.0, np.array(list(start) + [0j], dtype=complex))  # guard the start point
    sol = solve_ivp(rhs, (0.0, length), np.array(list(start) + [0j], dtype=complex),
                    method="RK45", rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise StepFailure(f"flow integration failed: {sol.message}")
    return FlowResult(start, length, sol)


# ------------------------------------------------------------------- leaves

def leaf_uniformization(z, c2, c4):
    """Parameter point of the leaf attached to z with scaling data (c2, c4).

    Equals the group action of (k, k') = (1/w, c4), w = c4*z - c2, on the
    modular point of z.
    """
    z = complex(z)
    c2 = complex(c2)
    c4 = complex(c4)
    if c2 == 0 and c4 == 0:
        raise DegenerateScale("scaling data (c2, c4) must not both vanish")
    if z.imag < DEFAULTS.im_floor:
        raise LowImaginaryPart(f"Im z = {z.imag} is below {DEFAULTS.im_floor}")
    w = c4 * z - c2
    if w == 0:
        raise DegenerateScale("c4*z - c2 = 0: the scaling degenerates at this z")
    return scale_action(eisenstein_point(z), 1.0 / w, c4)


def tangency_check(z, c2, c4, h: float = 1e-6) -> float:
    """Relative residual of du/dz against the line spanned by Ra(u)."""
    u = np.array(leaf_uniformization(z, c2, c4))
    plus = np.array(leaf_uniformization(z + h, c2, c4))
    minus = np.array(leaf_uniformization(z - h, c2, c4))
    deriv = (plus - minus) / (2 * h)
    field = np.array(ra_eval(tuple(u)), dtype=complex)
    coeff = np.vdot(field, deriv) / np.vdot(field, field)
    residual = deriv - coeff * field
    return float(np.linalg.norm(residual) / np.linalg.norm(deriv))


g0_action = scale_action


# ------------------------------------------------------------------- alt chart

ALT_NAMES = ("u1", "u2", "u3")
U1, U2, U3 = MPoly.gens(ALT_NAMES)

#: polynomial chart change and the field written in the new chart
ALT_CHART_POLYS = (
    12 * T1,
    -12 * T1 ** 2 + T2,
    4 * T1 ** 3 - T2 * T1 + T3,
)
ALT_FIELD_POLYS = (
    -U2,
    -6 * U3,
    U1 * U3 - F(1, 4) * U2 ** 2,
)


def alt_chart(t):
    return tuple(p.eval(tuple(t)) for p in ALT_CHART_POLYS)


def alt_chart_identity() -> bool:
    """Exact check that the chart change conjugates the two fields:
    Jac(chart) . Ra = field_alt o chart."""
    jac = [[ALT_CHART_POLYS[r].partial(c) for c in range(3)] for r in range(3)]
    pushed = [
        sum((jac[r][c] * RA_POLYS[c] for c in range(3)), MPoly.zero(T_NAMES))
        for r in range(3)
    ]
    composed = [p.eval(ALT_CHART_POLYS) for p in ALT_FIELD_POLYS]
    return all(a == b for a, b in zip(pushed, composed))


# ------------------------------------------------------------------- monitors

@dataclass(frozen=True)
class Monitors:
    b2: float
    abs_b3: float
    dist_to_sing: float
    delta: complex


def invariant_monitors(t) -> Monitors:
    """Leafwise-constant quantities plus proximity diagnostics at a point."""
    b = b_values(period_matrix(*t))
    return Monitors(
        b2=b.b2,
        abs_b3=abs(b.b3),
        dist_to_sing=dist_to_sing(t),
        delta=delta3_value(t),
    )
