"""Period matrices: AGM periods, invariants, group action, and cross-checks."""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dmforms.eisenstein import eisenstein_point, j_series
from dmforms.errors import (
    OnDiscriminant,
    PeriodError,
    RootSeparationFailure,
    ZeroScale,
)
from dmforms.gaussmanin import connection_eval, picard_fuchs_transport
from dmforms.periods import (
    NORMALIZER,
    _check_separation,
    b2_zero_point,
    b_values,
    g0_action_full,
    g0_matrix,
    j_invariant,
    moebius,
    period_matrix,
    period_matrix_general,
    rational_screen,
    reduce_tau,
    roundtrip_check,
    scale_action,
    second_kind_ratio,
    second_kind_ratio_mp,
    sl2z_align,
    special_point_monitor,
    tau_close,
    weierstrass_roots,
)

# lemniscate constant and M(sqrt(2), 1), frozen to double precision
LEMNISCATE_PERIOD = 2.6220575542921198
LEMNISCATE_ETA = 1.1981402347355922


def _random_admissible(rng, bound=5.0, margin=0.1):
    while True:
        t1 = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
        t2 = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
        t3 = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
        if abs(27 * t3 ** 2 - t2 ** 3) > margin:
            return t1, t2, t3


def contour_integrals(t1, t2, t3, center, radius, n=4096):
    """Trapezoid contour integrals of dx/y and x dx/y on a circle, tracking a
    continuous branch of y = sqrt(4 (x-t1)^3 - t2 (x-t1) - t3)."""
    def f(x):
        u = x - t1
        return 4 * u ** 3 - t2 * u - t3

    xs, ys = [], []
    prev = None
    for k in range(n):
        th = 2 * math.pi * k / n
        x = center + radius * cmath.exp(1j * th)
        y = cmath.sqrt(f(x))
        if prev is not None and abs(y - prev) > abs(y + prev):
            y = -y
        prev = y
        xs.append(x)
        ys.append(y)
    total1 = total2 = 0j
    for k in range(n):
        dx = 1j * (xs[k] - center) * 2 * math.pi / n
        total1 += dx / ys[k]
        total2 += xs[k] * dx / ys[k]
    return total1, total2


# ------------------------------------------------------------------- roots


def test_root_ordering():
    roots = weierstrass_roots(4, 0)
    assert abs(roots[0] - 1) < 1e-12 and abs(roots[1]) < 1e-12 \
        and abs(roots[2] + 1) < 1e-12, f"roots {roots} not in descending order"


def test_discriminant_guard():
    with pytest.raises(OnDiscriminant):
        weierstrass_roots(3, 1)  # 27 - 27 = 0, double root at -1/2


def test_root_separation_guard():
    # the separation guard is a defense for near-degenerate root clusters
    with pytest.raises(RootSeparationFailure):
        _check_separation((1.0 + 0j, 1.0 + 1e-11 + 0j, -2.0 + 0j))


# ------------------------------------------------------------------- lemniscatic


def test_lemniscatic_frozen_values():
    pm = period_matrix(0, 4, 0)
    lam1 = pm.x1 * NORMALIZER
    eta1 = -pm.x2 * NORMALIZER
    assert abs(lam1 - LEMNISCATE_PERIOD) < 1e-12, f"lam1 = {lam1}"
    assert abs(eta1 - LEMNISCATE_ETA) < 1e-12, f"eta1 = {eta1}"
    lam2 = pm.x3 * NORMALIZER
    assert abs(lam2 + 1j * LEMNISCATE_PERIOD) < 1e-12, f"lam2 = {lam2}"


def test_lemniscatic_matrix_invariants():
    pm = period_matrix(0, 4, 0)
    assert abs(pm.tau - 1j) < 1e-12, f"tau = {pm.tau}"
    assert abs(pm.det - 1) < 1e-12, f"det = {pm.det}"
    assert abs(j_invariant((0, 4, 0)) + 1) < 1e-14


def test_legendre_relation_random_points():
    rng = random.Random(7)
    for _ in range(10):
        t1, t2, t3 = _random_admissible(rng)
        pm = period_matrix(t1, t2, t3)
        lam1, lam2 = pm.x1 * NORMALIZER, pm.x3 * NORMALIZER
        eta1 = -(pm.x2 - t1 * pm.x1) * NORMALIZER
        eta2 = -(pm.x4 - t1 * pm.x3) * NORMALIZER
        legendre = eta1 * lam2 - eta2 * lam1
        assert abs(legendre + 2j * math.pi) < 1e-9 * 2 * math.pi, \
            f"Legendre value {legendre} at t = {(t1, t2, t3)}"
        assert (lam1 / lam2).imag > 0, "period ordering violated"


# ------------------------------------------------------------------- determinant


def test_det_one_at_random_admissible_points():
    rng = random.Random(7)
    for _ in range(20):
        t1, t2, t3 = _random_admissible(rng)
        pm = period_matrix(t1, t2, t3)
        assert abs(pm.det - 1) < 1e-9, f"det {pm.det} at t = {(t1, t2, t3)}"


def test_det_general_t0():
    rng = random.Random(11)
    for _ in range(5):
        t1, t2, t3 = _random_admissible(rng, bound=3.0)
        t0 = complex(rng.uniform(0.4, 2.0), rng.uniform(-1.0, 1.0))
        pm = period_matrix_general((t0, t1, t2, t3))
        assert abs(pm.det * t0 - 1) < 1e-9, f"det*t0 = {pm.det * t0}"
    with pytest.raises(ZeroScale):
        period_matrix_general((0, 0, 4, 0))


# ------------------------------------------------------------------- modular pin


@pytest.mark.parametrize("z", [2j, 1 + 2j, 0.5 + 0.9j])
def test_modular_point_matrix_pin(z):
    t = eisenstein_point(z)
    pm = period_matrix(*t)
    reference = np.array([[z, -1], [1, 0]], dtype=complex)
    m, _ = sl2z_align(pm.matrix, reference, tol=1e-5)
    err = np.abs(m @ pm.matrix - reference).max()
    assert err < 1e-8, f"pinned matrix off by {err:.3e} at z = {z}"


@pytest.mark.parametrize("z", [2j, 1 + 2j, 0.5 + 0.9j, -0.3 + 1.7j])
def test_invariants_at_modular_points(z):
    b = b_values(period_matrix(*eisenstein_point(z)))
    assert abs(b.b1 - z.imag) < 1e-9, f"b1 = {b.b1} expected {z.imag}"
    assert abs(b.b2) < 1e-9, f"b2 = {b.b2}"
    assert abs(b.b3 - 1) < 1e-9, f"b3 = {b.b3}"


@pytest.mark.parametrize("z,tol", [(2j, 1e-8), (0.5 + 2j, 1e-8), (0.5 + 0.9j, 1e-7)])
def test_roundtrip_through_periods(z, tol):
    report = roundtrip_check(z, tol)
    assert report["passed"], f"roundtrip at z = {z}: {report}"


def test_b_values_cycle_basis_independent():
    pm = period_matrix(0.2, 3 + 0.5j, 1)
    b = b_values(pm)
    for m in ([[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 1], [1, 1]]):
        relabeled = np.array(m, dtype=complex) @ pm.matrix
        b2 = b_values(relabeled)
        assert abs(b2.b1 - b.b1) < 1e-12 and abs(b2.b2 - b.b2) < 1e-12 \
            and abs(b2.b3 - b.b3) < 1e-12, f"invariants moved under {m}"


# ------------------------------------------------------------------- group action


def test_g0_equivariance():
    rng = random.Random(7)
    for _ in range(6):
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 2.5))
        t = (1.0,) + eisenstein_point(z)
        k1 = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
        k2 = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
        k3 = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        tg = g0_action_full(t, k1, k2, k3)
        lhs = period_matrix_general(tg).matrix
        rhs = period_matrix_general(t).matrix @ g0_matrix(k1, k2, k3)
        m, _ = sl2z_align(lhs, rhs, tol=1e-5)
        err = np.abs(m @ lhs - rhs).max()
        assert err < 1e-7, f"equivariance off by {err:.3e} for g = {(k1, k2, k3)}"


def test_scale_action_is_group_homomorphism():
    rng = random.Random(3)
    t = eisenstein_point(0.1 + 1.3j)
    for _ in range(4):
        k = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
        kp = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        l = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
        lp = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        # right action: applying (k, kp) then (l, lp) multiplies the matrices
        # [[k, kp], [0, 1/k]] @ [[l, lp], [0, 1/l]] = [[kl, k lp + kp/l], ...]
        one_step = scale_action(t, k * l, k * lp + kp / l)
        two_step = scale_action(scale_action(t, k, kp), l, lp)
        assert max(abs(a - b) for a, b in zip(one_step, two_step)) < 1e-12, \
            "composition law violated"


def test_zero_scale_rejected():
    t = (0.0, 4.0, 0.0)
    with pytest.raises(ZeroScale):
        scale_action(t, 0, 1)
    with pytest.raises(ZeroScale):
        g0_action_full((1,) + t, 0, 1, 0)
    with pytest.raises(ZeroScale):
        g0_action_full((1,) + t, 1, 0, 0)
    with pytest.raises(ZeroScale):
        b2_zero_point(2j, 0)


def test_b2_zero_construction():
    rng = random.Random(7)
    for _ in range(5):
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.8, 2.2))
        k = complex(rng.uniform(0.4, 1.6), rng.uniform(-0.9, 0.9))
        t = b2_zero_point(z, k)
        b = b_values(period_matrix(*t))
        assert abs(b.b2) < 1e-9, f"b2 = {b.b2} at z = {z}, k = {k}"
        assert abs(abs(b.b3) - 1) < 1e-8, f"|b3| = {abs(b.b3)}"


def test_j_invariant_under_action():
    rng = random.Random(5)
    t = (0.3, 2 + 1j, 0.5 - 0.2j)
    j0 = j_invariant(t)
    for _ in range(4):
        k = complex(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5))
        kp = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        assert abs(j_invariant(scale_action(t, k, kp)) - j0) < 1e-10 * abs(j0)
    full = g0_action_full((1,) + t, 0.8 + 0.1j, 1.2 - 0.3j, 0.4)
    assert abs(j_invariant(full) - j0) < 1e-10 * abs(j0)
    with pytest.raises(OnDiscriminant):
        j_invariant((0.0, 3.0, 1.0))
    with pytest.raises(ValueError):
        j_invariant((1, 2))


def test_j_invariant_matches_modular_j_function():
    for z in (2j, 0.5 + 2j):
        expected = -j_series(32).evaluate(cmath.exp(2j * math.pi * z)) / 1728
        got = j_invariant(eisenstein_point(z))
        assert abs(got - expected) < 1e-8, f"j mismatch at z = {z}"


# ------------------------------------------------------------------- ratios


def test_second_kind_ratio_against_mp_oracle():
    for t in ((0.1, 4.0, 0.5), (0.3, 2 + 1j, 0.5 - 0.2j)):
        r_float = second_kind_ratio(t)
        r_30 = second_kind_ratio_mp(t, 30)
        r_60 = second_kind_ratio_mp(t, 60)
        assert float(abs(r_30 - r_60)) < 1e-20, "oracle not converged"
        assert float(abs(r_float - r_30)) < 1e-9, \
            f"double-precision ratio off by {float(abs(r_float - r_30)):.3e}"


def test_second_kind_ratio_periodicity():
    z = 0.3 + 1.4j
    ra = second_kind_ratio(eisenstein_point(z))
    rb = second_kind_ratio(eisenstein_point(z + 1))
    assert abs(ra - rb) < 1e-10, "ratio should only depend on the parameters"


def test_second_kind_ratio_at_modular_point():
    # with the pinned matrix [[z, -1], [1, 0]], the first-row ratio is -1/z
    z = 2j
    t = eisenstein_point(z)
    pm = period_matrix(*t)
    ref = np.array([[z, -1], [1, 0]], dtype=complex)
    m, _ = sl2z_align(pm.matrix, ref, tol=1e-5)
    aligned = m @ pm.matrix
    assert abs(aligned[0, 1] / aligned[0, 0] - (-1 / z)) < 1e-10


# ------------------------------------------------------------------- SL(2, Z)


def test_reduce_tau_examples():
    red, a = reduce_tau(2j)
    assert red == 2j and (a == np.eye(2, dtype=int)).all()
    red, a = reduce_tau(1 + 2j)
    assert abs(red - 2j) < 1e-15 and (a == np.array([[1, -1], [0, 1]])).all()
    red, a = reduce_tau(0.5j)
    assert abs(red - 2j) < 1e-15 and (a == np.array([[0, -1], [1, 0]])).all()
    for tau in (2j, 1 + 2j, 0.5j, 0.3 + 0.8j, -5.7 + 0.2j):
        red, a = reduce_tau(tau)
        assert abs(moebius(a, tau) - red) < 1e-12
        assert -0.5 - 1e-9 <= red.real <= 0.5 + 1e-9 and abs(red) >= 1 - 1e-9
        assert int(round(np.linalg.det(a))) == 1
    with pytest.raises(PeriodError):
        reduce_tau(1 - 2j)


def test_tau_close():
    assert tau_close(0.5j, 2j)
    assert tau_close(1 + 2j, 2j)
    assert tau_close(0.5 + 0.9j, -0.5 + 0.9j)  # boundary identification
    assert not tau_close(2j, 3j)
    assert not tau_close(1.7j, 0.2 + 1.7j)


def test_sl2z_align_recovers_relabeling():
    pm = period_matrix(0.2, 3 + 0.5j, 1).matrix
    m_true = np.array([[2, 1], [1, 1]])
    m, residual = sl2z_align(pm, m_true @ pm)
    assert (m == m_true).all() and residual < 1e-12
    other = period_matrix(0.2, 3 + 0.5j, 1.4).matrix
    with pytest.raises(PeriodError):
        sl2z_align(pm, other)


# ------------------------------------------------------------------- cross-checks


def test_quadrature_cross_check():
    t1, t2, t3 = 0.3, 2 + 1j, 0.5 - 0.2j
    roots = weierstrass_roots(t2, t3)
    rows = period_matrix(t1, t2, t3).matrix * NORMALIZER
    coeff_matrix = np.array([[rows[0, 0], rows[1, 0]], [rows[0, 1], rows[1, 1]]])
    for i, j in ((1, 2), (0, 1)):
        center = (roots[i] + roots[j]) / 2 + t1
        radius = abs(roots[i] - roots[j]) / 2 + 0.35
        other = ({0, 1, 2} - {i, j}).pop()
        assert abs(roots[other] + t1 - center) > radius + 0.1, "bad contour setup"
        v1, v2 = contour_integrals(t1, t2, t3, center, radius)
        combo = np.linalg.solve(coeff_matrix, np.array([v1, v2]))
        rounded = np.round(combo.real)
        assert np.abs(combo - rounded).max() < 1e-6, \
            f"contour around roots {i},{j} is not an integer period combo: {combo}"
        assert np.abs(rounded).max() >= 1, "contour integral vanished"


def test_finite_difference_matches_connection():
    rng = random.Random(7)
    h = 1e-5
    for _ in range(5):
        t1, t2, t3 = _random_admissible(rng, bound=3.0, margin=0.5)
        base = period_matrix(t1, t2, t3).matrix
        mats = connection_eval((1.0, t1, t2, t3), "classical")
        for i, e in ((1, (1, 0, 0)), (2, (0, 1, 0)), (3, (0, 0, 1))):
            dp = tuple(h * v for v in e)
            plus = period_matrix(t1 + dp[0], t2 + dp[1], t3 + dp[2]).matrix
            minus = period_matrix(t1 - dp[0], t2 - dp[1], t3 - dp[2]).matrix
            mp_, _ = sl2z_align(plus, base, tol=1e-3)
            mm_, _ = sl2z_align(minus, base, tol=1e-3)
            fd = (mp_ @ plus - mm_ @ minus) / (2 * h)
            analytic = base @ mats[i].T
            rel = np.abs(fd - analytic).max() / np.abs(analytic).max()
            assert rel < 1e-5, \
                f"direction t{i} at t = {(t1, t2, t3)}: rel err {rel:.3e}"


def test_transport_matches_direct_periods():
    pm0 = period_matrix(0, 0, 1).matrix
    res = picard_fuchs_transport(pm0, [(1, 0, 0, 1), (1, 0, 0, 2)])
    direct = period_matrix(0, 0, 2).matrix
    m, _ = sl2z_align(res.matrix, direct, tol=1e-4)
    assert np.abs(m @ res.matrix - direct).max() < 1e-6

    res2 = picard_fuchs_transport(pm0, [(1, 0, 0, 1), (1, 0, 0.5j, 1.5), (1, 0.3, 1 + 1j, 2)])
    direct2 = period_matrix(0.3, 1 + 1j, 2).matrix
    m2, _ = sl2z_align(res2.matrix, direct2, tol=1e-4)
    assert np.abs(m2 @ res2.matrix - direct2).max() < 1e-6


def test_monodromy_in_period_gauge_is_integral():
    # transport the true period matrix once around the nodal fiber at
    # t3 = 1 (t2 = 3): the new matrix must be an integer relabeling of the old
    base = (1, 0, 3, 1.5)
    loop = [base]
    n = 48
    for k in range(1, n + 1):
        th = 2 * math.pi * k / n
        loop.append((1, 0, 3, 1 + 0.5 * cmath.exp(1j * th)))
    pm0 = period_matrix(0, 3, 1.5).matrix
    res = picard_fuchs_transport(pm0, loop)
    m, residual = sl2z_align(res.matrix, pm0, tol=1e-6)
    assert residual < 1e-6, f"monodromy not integral: residual {residual:.3e}"
    assert abs(np.trace(m) - 2) == 0, "nodal monodromy should be a transvection"
    assert not (m == np.eye(2, dtype=int)).all(), "monodromy should be nontrivial"


# ------------------------------------------------------------------- screening


def test_rational_screen():
    assert rational_screen(0.5) == Fraction(1, 2)
    assert rational_screen(1 / 3 + 1e-13) == Fraction(1, 3)
    assert rational_screen(math.sqrt(2) / 2) is None
    assert rational_screen(math.pi / 10) is None


def test_special_point_monitor_reports():
    t = b2_zero_point(1.2j, 1.0)
    report = special_point_monitor(t)
    assert abs(report["b2"]) < 1e-9
    assert abs(report["abs_b3"] - 1) < 1e-8
    assert "rational_candidate" in report and "is_candidate" in report
