"""Numeric period matrices for y^2 = 4*t0*(x - t1)^3 - t2*(x - t1) - t3.

For t0 = 1 the substitution u = x - t1 puts the curve in the reduced form
y^2 = 4u^3 - t2*u - t3.  Lattice periods lam and quasi-periods eta(lam) are
computed by the arithmetic-geometric mean (AGM) with the "good" square-root
choice at every step, then calibrated so the Legendre relation

    eta(lam1)*lam2 - eta(lam2)*lam1 = -2*pi*i,   Im(lam1/lam2) > 0

holds.  The full period matrix (rows = cycles, columns = the two 1-forms
dx/y and x dx/y) is

    P = (1/N) * [[lam1, -eta1 + t1*lam1],
                 [lam2, -eta2 + t1*lam2]],      N = sqrt(-2*pi*i),

which has det P = 1 exactly; general t0 is reached by scaling the first
column by 1/t0, so det P = 1/t0.  The three Hermitian-type invariants

    b1 = Im(x1 * conj(x3))
    b2 = Im(x2 * conj(x4))
    b3 = x1*conj(x4) - conj(x2)*x3

are unchanged under relabeling the cycle basis (left SL(2, Z) action), which
is what makes them usable as leaf monitors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .config import DEFAULTS
from .eisenstein import eisenstein_point
from .errors import (
    LowImaginaryPart,
    OnDiscriminant,
    PeriodError,
    RootSeparationFailure,
    ZeroScale,
)

TWO_PI_I = 2j * math.pi
#: N with N^2 = -2*pi*i (principal square root)
NORMALIZER = cmath.sqrt(-TWO_PI_I)

_AGM_MAX_ITER = 64


# ------------------------------------------------------------------- roots

def weierstrass_roots(t2, t3):
    """Roots of 4*u^3 - t2*u - t3, sorted by descending real part (ties by
    descending imaginary part).  Guards the discriminant and root separation."""
    t2 = complex(t2)
    t3 = complex(t3)
    disc = 27 * t3 ** 2 - t2 ** 3
    scale = (1.0 + max(abs(t2) ** 0.25, abs(t3) ** (1 / 6))) ** 12
    if abs(disc) < 1e-12 * scale:
        raise OnDiscriminant(f"|27 t3^2 - t2^3| = {abs(disc):.3e} is numerically zero")
    roots = sorted(np.roots([4.0, 0.0, -t2, -t3]),
                   key=lambda r: (-r.real, -r.imag))
    roots = tuple(complex(r) for r in roots)
    _check_separation(roots)
    return roots


def _check_separation(roots):
    scale = 1.0 + max(abs(r) for r in roots)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(roots[i] - roots[j]) < 1e-9 * scale:
                raise RootSeparationFailure(
                    f"roots {i} and {j} are {abs(roots[i] - roots[j]):.3e} apart"
                )


# ------------------------------------------------------------------- AGM core

def _good_agm(a, b, sqrt):
    """Common AGM limit plus the list [c_1, c_2, ...], c_{n+1} = (a_n - b_n)/2.

    Each square root takes the "good" branch: |a' - b'| <= |a' + b'|, with the
    Im(b'/a') > 0 branch on ties.
    """
    cs = []
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= 1e-17 * (abs(a) + abs(b)):
            break
        c = (a - b) / 2
        cs.append(c)
        a, b = (a + b) / 2, sqrt(a * b)
        if abs(a - b) > abs(a + b):
            b = -b
        elif abs(abs(a - b) - abs(a + b)) <= 1e-15 * abs(a) and (b / a).imag < 0:
            b = -b
    return a, cs


def _half_period_data(roots, anchor, sqrt, pi):
    """(lam, eta) for the cycle attached to one anchor root.

    With roots (r0, r1, r2) anchored at p and the remaining pair (u, v),

        a0 = sqrt(p - v),  b0 = sqrt(p - u),  c0^2 = u - v  (exact),
        lam = pi / M(a0, b0),
        eta = -lam * (v + sum_{n>=0} 2^(n-1) c_n^2).
    """
    r0, r1, r2 = roots
    if anchor == 0:
        p, u, v = r0, r1, r2
    elif anchor == 2:
        p, u, v = r2, r1, r0
    else:
        raise ValueError("anchor must be 0 or 2")
    a0 = sqrt(p - v)
    b0 = sqrt(p - u)
    ratio = b0 / a0
    if ratio.real < 0 or (ratio.real == 0 and ratio.imag < 0):
        b0 = -b0
    m, cs = _good_agm(a0, b0, sqrt)
    lam = pi / m
    s = (u - v) / 2
    weight = 1
    for c in cs:
        s = s + weight * c * c
        weight *= 2
    eta = -lam * (v + s)
    return lam, eta


def _calibrated_periods(t2, t3, roots, sqrt, pi, two_pi_i):
    """Ordered basis (lam1, lam2) with Im(lam1/lam2) > 0 and quasi-periods
    satisfying eta1*lam2 - eta2*lam1 = -2*pi*i."""
    lam_a, eta_a = _half_period_data(roots, 0, sqrt, pi)
    lam_b, eta_b = _half_period_data(roots, 2, sqrt, pi)
    ratio = lam_a / lam_b
    if ratio.imag > 0:
        lam1, eta1, lam2, eta2 = lam_a, eta_a, lam_b, eta_b
    elif ratio.imag < 0:
        lam1, eta1, lam2, eta2 = lam_b, eta_b, lam_a, eta_a
    else:
        raise PeriodError("period ratio is real; lattice is degenerate")
    legendre = eta1 * lam2 - eta2 * lam1
    tol = 1e-6 * abs(two_pi_i)
    if abs(legendre + two_pi_i) < tol:
        pass
    elif abs(legendre - two_pi_i) < tol:
        eta1, eta2 = -eta1, -eta2
    else:
        raise PeriodError(
            f"Legendre relation failed: eta1*lam2 - eta2*lam1 = {complex(legendre):.6g}"
        )
    return lam1, lam2, eta1, eta2


# ------------------------------------------------------------------- matrices

@dataclass(frozen=True)
class PeriodMatrix:
    """2x2 complex period matrix; rows are cycles, columns the two 1-forms."""

    matrix: np.ndarray
    t: tuple

    @property
    def x1(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def x2(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def x3(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def x4(self) -> complex:
        return complex(self.matrix[1, 1])

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    @property
    def tau(self) -> complex:
        return self.x1 / self.x3

    @property
    def second_ratio(self) -> complex:
        """Ratio x2/x1 of the two integrals over the first cycle."""
        return self.x2 / self.x1


def period_matrix(t1, t2, t3) -> PeriodMatrix:
    """Period matrix on the t0 = 1 slice; det = 1 up to numerical error."""
    t1 = complex(t1)
    roots = weierstrass_roots(t2, t3)
    lam1, lam2, eta1, eta2 = _calibrated_periods(
        t2, t3, roots, cmath.sqrt, math.pi, TWO_PI_I
    )
    n = NORMALIZER
    mat = np.array(
        [
            [lam1 / n, (-eta1 + t1 * lam1) / n],
            [lam2 / n, (-eta2 + t1 * lam2) / n],
        ],
        dtype=complex,
    )
    return PeriodMatrix(mat, (1, t1, complex(t2), complex(t3)))


def period_matrix_general(t) -> PeriodMatrix:
    """Period matrix for arbitrary t0 != 0: reduce to the slice via the group
    action, then undo it; det = 1/t0."""
    t0, t1, t2, t3 = (complex(v) for v in t)
    if t0 == 0:
        raise ZeroScale("t0 must be nonzero")
    slice_pm = period_matrix(t1 / t0, t2 * t0 ** -3, t3 * t0 ** -4)
    mat = slice_pm.matrix.copy()
    mat[:, 0] /= t0
    return PeriodMatrix(mat, (t0, t1, t2, t3))


# ------------------------------------------------------------------- invariants

@dataclass(frozen=True)
class BValues:
    b1: float
    b2: float
    b3: complex


def b_values(pm) -> BValues:
    """The three cycle-basis-independent invariants of a period matrix."""
    m = pm.matrix if isinstance(pm, PeriodMatrix) else np.asarray(pm, dtype=complex)
    x1, x2 = complex(m[0, 0]), complex(m[0, 1])
    x3, x4 = complex(m[1, 0]), complex(m[1, 1])
    return BValues(
        b1=(x1 * x3.conjugate()).imag,
        b2=(x2 * x4.conjugate()).imag,
        b3=x1 * x4.conjugate() - x2.conjugate() * x3,
    )


def j_invariant(t) -> complex:
    """t2^3 / (27*t0*t3^2 - t2^3); invariant under the full group action.

    Accepts a slice triple (t1, t2, t3) or a full quadruple (t0, ..., t3).
    """
    if len(t) == 3:
        t0, (_, t2, t3) = 1.0, (complex(v) for v in t)
    elif len(t) == 4:
        t0, _, t2, t3 = (complex(v) for v in t)
    else:
        raise ValueError("expected a 3- or 4-tuple of parameters")
    denom = 27 * t0 * t3 ** 2 - t2 ** 3
    if denom == 0:
        raise OnDiscriminant("j-invariant undefined on the discriminant locus")
    return t2 ** 3 / denom


# ------------------------------------------------------------------- group action

def g0_matrix(k1, k2, k3) -> np.ndarray:
    """Upper-triangular matrix [[k1, k3], [0, k2]] acting on period matrices
    from the right."""
    return np.array([[k1, k3], [0.0, k2]], dtype=complex)


def g0_action_full(t, k1, k2, k3):
    """Parameter action matching pm(t . g) = pm(t) @ g0_matrix(k1, k2, k3)."""
    if k1 == 0 or k2 == 0:
        raise ZeroScale("group scalings k1, k2 must be nonzero")
    t0, t1, t2, t3 = (complex(v) for v in t)
    return (
        t0 / (k1 * k2),
        t1 * k2 / k1 + k3 / k1,
        t2 * k2 / k1 ** 3,
        t3 * k2 ** 2 / k1 ** 4,
    )


def scale_action(t, k, kp):
    """Slice form of the action (t0 = 1 preserved): parameters (k, k') with
    k != 0 acting by (t1*k^-2 + k'*k^-1, t2*k^-4, t3*k^-6)."""
    if k == 0:
        raise ZeroScale("scaling k must be nonzero")
    t1, t2, t3 = (complex(v) for v in t)
    full = g0_action_full((1.0, t1, t2, t3), k, 1.0 / k, kp)
    return full[1:]


def b2_zero_point(z, k):
    """A point on the leaf through the modular parameter point of z where the
    second invariant vanishes and |b3| = 1 exactly.

    Starting from b = (Im z, 0, 1) at the modular point, the scaling (k, k')
    with k' = i*y*conj(k), y = -1/(Im z * |k|^2), drives b2 to 0 and sends b3
    to -k/conj(k), which has modulus one.
    """
    if k == 0:
        raise ZeroScale("scaling k must be nonzero")
    z = complex(z)
    if z.imag < DEFAULTS.im_floor:
        raise LowImaginaryPart(f"Im z = {z.imag} is below {DEFAULTS.im_floor}")
    t = eisenstein_point(z)
    y = -1.0 / (z.imag * abs(k) ** 2)
    kp = 1j * y * complex(k).conjugate()
    return scale_action(t, k, kp)


# ------------------------------------------------------------------- SL(2, Z)

_S = np.array([[0, -1], [1, 0]])


def moebius(m, z) -> complex:
    a, b = m[0][0], m[0][1]
    c, d = m[1][0], m[1][1]
    return (a * z + b) / (c * z + d)


def reduce_tau(tau):
    """Translate/invert tau into the standard fundamental domain.

    Returns (tau_reduced, A) with A integral, det A = 1, and
    tau_reduced = moebius(A, tau).
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise PeriodError("tau must lie in the upper half-plane")
    a = np.eye(2, dtype=int)
    for _ in range(256):
        n = math.floor(tau.real + 0.5)
        if n:
            tau -= n
            a = np.array([[1, -n], [0, 1]], dtype=int) @ a
        if abs(tau) < 1.0 - 1e-15:
            tau = -1.0 / tau
            a = _S @ a
        else:
            break
    else:
        raise PeriodError("fundamental-domain reduction did not terminate")
    return tau, a


#: boundary identifications of the fundamental domain
_BOUNDARY = (
    np.eye(2, dtype=int),
    np.array([[1, 1], [0, 1]]),
    np.array([[1, -1], [0, 1]]),
    np.array([[0, -1], [1, 0]]),
    np.array([[0, -1], [1, 0]]) @ np.array([[1, 1], [0, 1]]),
    np.array([[0, -1], [1, 0]]) @ np.array([[1, -1], [0, 1]]),
)


def tau_close(tau_a, tau_b, tol: float = 1e-8) -> bool:
    """Whether two upper-half-plane points agree modulo SL(2, Z) within tol."""
    ra, _ = reduce_tau(tau_a)
    rb, _ = reduce_tau(tau_b)
    for m in _BOUNDARY:
        if abs(moebius(m, ra) - rb) < tol:
            return True
    return False


def sl2z_align(p, p_ref, tol: float = 1e-6):
    """Integer matrix M with M @ p close to p_ref, plus the rounding residual.

    Raises PeriodError when no integral unimodular relabeling matches: the two
    matrices then do not describe the same curve/basis pair.
    """
    p = np.asarray(p, dtype=complex)
    p_ref = np.asarray(p_ref, dtype=complex)
    m = p_ref @ np.linalg.inv(p)
    m_int = np.round(m.real).astype(int)
    residual = float(np.abs(m - m_int).max())
    if residual >= tol:
        raise PeriodError(f"no integral cycle relabeling: residual {residual:.3e}")
    if abs(int(round(np.linalg.det(m_int)))) != 1:
        raise PeriodError("relabeling matrix is not unimodular")
    return m_int, residual


def roundtrip_check(z, tol: float = 1e-8) -> dict:
    """From the upper half-plane to parameters, periods, and back to z."""
    z = complex(z)
    t = eisenstein_point(z)
    pm = period_matrix(*t)
    reference = np.array([[z, -1.0], [1.0, 0.0]], dtype=complex)
    align, residual = sl2z_align(pm.matrix, reference, tol=max(tol * 100, 1e-5))
    matrix_ok = bool(np.abs(align @ pm.matrix - reference).max() < tol)
    tau_ok = tau_close(pm.tau, z, tol)
    det_ok = abs(pm.det - 1.0) < tol
    return {
        "z": z,
        "tau": pm.tau,
        "align": align,
        "residual": residual,
        "matrix_ok": matrix_ok,
        "tau_ok": tau_ok,
        "det_ok": det_ok,
        "passed": matrix_ok and tau_ok and det_ok,
    }


# ------------------------------------------------------------------- ratios

def second_kind_ratio(t) -> complex:
    """x2/x1 for the slice triple t = (t1, t2, t3)."""
    return period_matrix(*t).second_ratio


def second_kind_ratio_mp(t, dps: int = DEFAULTS.mp_dps):
    """High-precision x2/x1 via mpmath; used as a cross-check oracle."""
    t1, t2, t3 = t
    with mpmath.workdps(dps):
        t1 = mpmath.mpmathify(complex(t1))
        c2 = mpmath.mpmathify(complex(t2))
        c3 = mpmath.mpmathify(complex(t3))
        raw = mpmath.polyroots([4, 0, -c2, -c3], maxsteps=200, extraprec=80)
        roots = tuple(sorted((mpmath.mpc(r) for r in raw),
                             key=lambda r: (-mpmath.re(r), -mpmath.im(r))))
        _check_separation(tuple(complex(r) for r in roots))
        lam1, lam2, eta1, eta2 = _calibrated_periods(
            c2, c3, roots, mpmath.sqrt, mpmath.pi, 2j * mpmath.pi
        )
        x1 = lam1
        x2 = -eta1 + t1 * lam1
        return x2 / x1


# ------------------------------------------------------------------- screening

def rational_screen(value: float, max_denominator: int = 10 ** 4,
                    tol: float = 1e-10):
    """Nearby small-denominator rational, or None.  Heuristic only.

    The tolerance must sit far below the ~1/max_denominator^2 error that
    continued fractions achieve for arbitrary reals, otherwise everything
    would be flagged.
    """
    frac = Fraction(value).limit_denominator(max_denominator)
    if abs(float(frac) - value) < tol:
        return frac
    return None


def special_point_monitor(t, max_denominator: int = 10 ** 4) -> dict:
    """Diagnostics used when watching for arithmetically special leaves.

    Reports b2 (should be ~0 on candidate points), the real part of x2/x4,
    and a nearby small-denominator rational if one exists.  This is a screen,
    not a certificate.
    """
    pm = period_matrix(*t)
    b = b_values(pm)
    ratio = pm.x2 / pm.x4 if pm.x4 != 0 else complex("inf")
    candidate = None
    if abs(b.b2) < 1e-6 and ratio != complex("inf"):
        candidate = rational_screen(ratio.real, max_denominator)
    return {
        "b2": b.b2,
        "abs_b3": abs(b.b3),
        "ratio": ratio,
        "rational_candidate": candidate,
        "is_candidate": candidate is not None,
    }
