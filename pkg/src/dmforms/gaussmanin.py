"""Gauss-Manin connection matrices for the four-parameter Weierstrass family.

The family is y^2 = 4*t0*(x - t1)^3 - t2*(x - t1) - t3 with discriminant
Delta = t0*(27*t0*t3^2 - t2^3).  The connection in a basis w of fiberwise
1-forms is d(w) = (1/Delta) * sum_i A_i dt_i (x) w; two bases are carried as
hardcoded exact matrix data:

* canonical: the Brieskorn-style basis (w1, w2);
* classical: wt = (dx/y, x dx/y), obtained from the canonical one via
  wt = (1/Delta) * A3_canonical * w.

The period matrix P (rows = cycles, columns = forms) then satisfies
dP = P * (A_i/Delta)^T dt_i, which is what the numeric transport integrates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .config import DEFAULTS
from .errors import OnDiscriminant, StepFailure
from .mpoly import MPoly, adjugate2, det, mat_mul, mat_scale, mat_sub

T_NAMES = ("t0", "t1", "t2", "t3")
T0, T1, T2, T3 = MPoly.gens(T_NAMES)

F = Fraction

#: Delta = t0*(27*t0*t3^2 - t2^3)
DELTA = T0 * (27 * T0 * T3 ** 2 - T2 ** 3)

_Z = MPoly.zero(T_NAMES)

#: connection numerators in the canonical basis, one 2x2 matrix per parameter
CANONICAL = (
    # A0
    [
        [
            F(21, 2) * T0 * T1 * T2 * T3 - 9 * T0 * T3 ** 2 + F(3, 4) * T2 ** 3,
            -F(21, 2) * T0 * T2 * T3,
        ],
        [
            F(21, 2) * T0 * T1 ** 2 * T2 * T3 + 9 * T0 * T1 * T3 ** 2
            - F(1, 2) * T1 * T2 ** 3 - F(5, 8) * T2 ** 2 * T3,
            -F(21, 2) * T0 * T1 * T2 * T3 - 18 * T0 * T3 ** 2 + F(5, 4) * T2 ** 3,
        ],
    ],
    # A1
    [
        [_Z, _Z],
        [27 * T0 ** 2 * T3 ** 2 - T0 * T2 ** 3, _Z],
    ],
    # A2
    [
        [
            -F(63, 2) * T0 ** 2 * T1 * T3 - F(5, 4) * T0 * T2 ** 2,
            F(63, 2) * T0 ** 2 * T3,
        ],
        [
            -F(63, 2) * T0 ** 2 * T1 ** 2 * T3 + F(1, 2) * T0 * T1 * T2 ** 2
            + F(15, 8) * T0 * T2 * T3,
            F(63, 2) * T0 ** 2 * T1 * T3 - F(7, 4) * T0 * T2 ** 2,
        ],
    ],
    # A3
    [
        [
            21 * T0 ** 2 * T1 * T2 + F(45, 2) * T0 ** 2 * T3,
            -21 * T0 ** 2 * T2,
        ],
        [
            21 * T0 ** 2 * T1 ** 2 * T2 - 9 * T0 ** 2 * T1 * T3 - F(5, 4) * T0 * T2 ** 2,
            -21 * T0 ** 2 * T1 * T2 + F(63, 2) * T0 ** 2 * T3,
        ],
    ],
)

#: connection numerators in the classical basis (dx/y, x dx/y)
CLASSICAL = (
    # A0
    [
        [
            F(3, 2) * T0 * T1 * T2 * T3 - 9 * T0 * T3 ** 2 + F(1, 4) * T2 ** 3,
            -F(3, 2) * T0 * T2 * T3,
        ],
        [
            F(3, 2) * T0 * T1 ** 2 * T2 * T3 + 9 * T0 * T1 * T3 ** 2
            - F(1, 2) * T1 * T2 ** 3 + F(1, 8) * T2 ** 2 * T3,
            -F(3, 2) * T0 * T1 * T2 * T3 - 18 * T0 * T3 ** 2 + F(3, 4) * T2 ** 3,
        ],
    ],
    # A1 (same numerator as canonical)
    [
        [_Z, _Z],
        [27 * T0 ** 2 * T3 ** 2 - T0 * T2 ** 3, _Z],
    ],
    # A2
    [
        [
            -F(9, 2) * T0 ** 2 * T1 * T3 + F(1, 4) * T0 * T2 ** 2,
            F(9, 2) * T0 ** 2 * T3,
        ],
        [
            -F(9, 2) * T0 ** 2 * T1 ** 2 * T3 + F(1, 2) * T0 * T1 * T2 ** 2
            - F(3, 8) * T0 * T2 * T3,
            F(9, 2) * T0 ** 2 * T1 * T3 - F(1, 4) * T0 * T2 ** 2,
        ],
    ],
    # A3
    [
        [
            3 * T0 ** 2 * T1 * T2 - F(9, 2) * T0 ** 2 * T3,
            -3 * T0 ** 2 * T2,
        ],
        [
            3 * T0 ** 2 * T1 ** 2 * T2 - 9 * T0 ** 2 * T1 * T3 + F(1, 4) * T0 * T2 ** 2,
            -3 * T0 ** 2 * T1 * T2 + F(9, 2) * T0 ** 2 * T3,
        ],
    ],
)

_BASES = {"canonical": CANONICAL, "classical": CLASSICAL}


@dataclass(frozen=True)
class ConnectionMatrices:
    basis_tag: str
    numerators: tuple
    delta: MPoly


def delta_poly() -> MPoly:
    return DELTA


def matrices(basis_tag: str = "classical") -> ConnectionMatrices:
    if basis_tag not in _BASES:
        raise ValueError(f"unknown basis tag {basis_tag!r}")
    return ConnectionMatrices(basis_tag, _BASES[basis_tag], DELTA)


def b_matrix() -> list[list[MPoly]]:
    """4x4 matrix whose i-th row flattens the classical numerator A_i."""
    return [[a[0][0], a[0][1], a[1][0], a[1][1]] for a in CLASSICAL]


def det_a3_canonical() -> MPoly:
    return det(CANONICAL[3])


def verify_det_identities() -> dict:
    """Exact checks det(B) = (3/4) t0 Delta^3 and det(A3 canonical) = (105/4) t0^2 Delta."""
    det_b = det(b_matrix())
    b_ok = det_b == F(3, 4) * T0 * DELTA ** 3
    det_a3 = det_a3_canonical()
    a3_ok = det_a3 == F(105, 4) * T0 ** 2 * DELTA
    return {
        "passed": b_ok and a3_ok,
        "det_b": b_ok,
        "det_a3_canonical": a3_ok,
    }


def verify_basis_change() -> dict:
    """Exact gauge-transformation identity linking the two bases.

    With S = N/Delta, N = A3_canonical, the classical connection must equal
    (dS)S^-1 + S (A^can/Delta) S^-1.  Clearing denominators by Delta*det(N)
    (det(N) = (105/4) t0^2 Delta) turns this into the polynomial identity

        det(N) * A_i^cl = (dN/dt_i * Delta - N * dDelta/dt_i) * adj(N)
                          + N * A_i^can * adj(N)

    checked entrywise for i = 0..3.
    """
    n_mat = CANONICAL[3]
    adj_n = adjugate2(n_mat)
    det_n = det(n_mat)
    # sanity: N adj(N) = det(N) I
    prod = mat_mul(n_mat, adj_n)
    ident_ok = (
        prod[0][0] == det_n and prod[1][1] == det_n
        and prod[0][1].is_zero() and prod[1][0].is_zero()
    )
    results = {"adjugate_sanity": ident_ok}
    all_ok = ident_ok
    for i in range(4):
        d_n = [[entry.partial(i) for entry in row] for row in n_mat]
        d_delta = DELTA.partial(i)
        term1 = mat_mul(mat_sub(mat_scale(d_n, DELTA), mat_scale(n_mat, d_delta)), adj_n)
        term2 = mat_mul(mat_mul(n_mat, CANONICAL[i]), adj_n)
        rhs = [[term1[r][c] + term2[r][c] for c in range(2)] for r in range(2)]
        lhs = mat_scale(CLASSICAL[i], det_n)
        ok = all(lhs[r][c] == rhs[r][c] for r in range(2) for c in range(2))
        results[f"i{i}"] = ok
        all_ok = all_ok and ok
    results["passed"] = all_ok
    return results


# ------------------------------------------------------------------- numerics

def _delta_scale(t) -> float:
    return (1.0 + max(abs(complex(v)) for v in t)) ** 6


def delta_value(t) -> complex:
    return complex(DELTA.eval(tuple(complex(v) for v in t)))


def connection_eval(t, basis_tag: str = "classical") -> list[np.ndarray]:
    """The four matrices A_i(t)/Delta(t); OnDiscriminant near the singular fibers."""
    tv = tuple(complex(v) for v in t)
    dv = delta_value(tv)
    if abs(dv) < 1e-12 * _delta_scale(tv):
        raise OnDiscriminant(f"|Delta(t)| = {abs(dv):.3e} is numerically zero")
    nums = _BASES[basis_tag]
    out = []
    for a in nums:
        out.append(
            np.array(
                [[complex(a[r][c].eval(tv)) for c in range(2)] for r in range(2)],
                dtype=complex,
            )
            / dv
        )
    return out


@dataclass
class TransportResult:
    matrix: np.ndarray        # 2x2 complex period matrix at the path end
    min_abs_delta: float      # smallest |Delta| seen along the path
    rhs_evaluations: int


def _as_path(path):
    """Normalize a path to (callable s -> (t, dt/ds), breakpoints).

    Accepts either a callable already in that form or a list of waypoints,
    which is interpreted piecewise linearly.  Breakpoints mark parameter
    values where the derivative may jump; the integrator restarts there.
    """
    if callable(path):
        return path, [0.0, 1.0]
    pts = [tuple(complex(v) for v in p) for p in path]
    if len(pts) < 2:
        raise ValueError("a waypoint path needs at least two points")
    segs = len(pts) - 1

    def param(s: float):
        u = min(max(s, 0.0), 1.0) * segs
        k = min(int(u), segs - 1)
        frac = u - k
        a, b = pts[k], pts[k + 1]
        t = tuple(av + (bv - av) * frac for av, bv in zip(a, b))
        dt = tuple((bv - av) * segs for av, bv in zip(a, b))
        return t, dt

    return param, [k / segs for k in range(segs + 1)]


def picard_fuchs_transport(
    pm0,
    path,
    basis_tag: str = "classical",
    rtol: float = DEFAULTS.ode_rtol,
    atol: float = DEFAULTS.ode_atol,
) -> TransportResult:
    """Integrate dP/ds = P * (sum_i A_i(t) dt_i/ds)^T / Delta(t) over s in [0, 1].

    ``path`` is a waypoint list (piecewise linear) or a callable returning
    (t(s), dt/ds).  The path must stay away from Delta = 0.  Integration is
    restarted at every waypoint so the solver only ever sees a smooth
    right-hand side.
    """
    param, breakpoints = _as_path(path)
    nums = _BASES[basis_tag]
    stats = {"min_delta": float("inf"), "count": 0}

    def rhs(s, y):
        t, dt = param(s)
        dv = delta_value(t)
        ad = abs(dv)
        if ad < stats["min_delta"]:
            stats["min_delta"] = ad
        if ad < 1e-12 * _delta_scale(t):
            raise OnDiscriminant(f"path hit |Delta| = {ad:.3e} at s = {s:.4f}")
        stats["count"] += 1
        acc = np.zeros((2, 2), dtype=complex)
        for a, dti in zip(nums, dt):
            if dti == 0:
                continue
            acc += dti * np.array(
                [[complex(a[r][c].eval(t)) for c in range(2)] for r in range(2)]
            )
        acc /= dv
        p = y.reshape(2, 2)
        return (p @ acc.T).reshape(-1)

    y = np.asarray(pm0, dtype=complex).reshape(-1)
    for lo, hi in zip(breakpoints, breakpoints[1:]):
        t_lo, dt_lo = param(lo)
        if all(v == 0 for v in dt_lo) and param(hi)[0] == t_lo:
            continue  # degenerate (repeated waypoint) segment
        sol = solve_ivp(rhs, (lo, hi), y, method="RK45", rtol=rtol, atol=atol)
        if not sol.success:
            raise StepFailure(f"transport integration failed: {sol.message}")
        y = sol.y[:, -1]
    return TransportResult(
        matrix=y.reshape(2, 2),
        min_abs_delta=stats["min_delta"],
        rhs_evaluations=stats["count"],
    )
