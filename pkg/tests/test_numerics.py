import math

import numpy as np
import pytest
from scipy import integrate as spi

from ddgate.core import DiscreteModes, Ohmic, QuadratureError, Tabulated, ValidationError
from ddgate.kernels import y_minus_sin, z_minus_arctan
from ddgate.numerics import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, CallableKernel, ModeSumKernel,
                             OhmicKernel, QuadratureSpec, SineKernel, dirichlet_factor,
                             double_time_integral, integrate_interval, integrate_omega, pair_integral)
from ddgate.pulses import PulseSchedule, SwitchingFunction


def test_rule_constants():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    g_nodes, g_weights = np.polynomial.legendre.leggauss(7)
    used = GAUSS_WEIGHTS != 0
    assert np.allclose(np.sort(NODES[used]), g_nodes, atol=1e-15)
    assert np.allclose(GAUSS_WEIGHTS[used][np.argsort(NODES[used])], g_weights, atol=1e-15)
    # K15 integrates polynomials up to degree 22 exactly
    assert np.dot(KRONROD_WEIGHTS, NODES ** 22) == pytest.approx(2.0 / 23.0, rel=1e-13)


def test_spec_validation():
    with pytest.raises(ValidationError):
        QuadratureSpec(rtol=0.0)
    with pytest.raises(ValidationError):
        QuadratureSpec(cutoff_multiplier=5.0)


def test_gamma_integral():
    value, err = integrate_omega(lambda w: np.ones_like(w), Ohmic(1.0, 1.0))
    assert value == pytest.approx(1.0, rel=1e-9)
    assert err <= 1e-9


def test_discrete_modes_exact_sum():
    value, err = integrate_omega(lambda w: w + 1.0, DiscreteModes((2.0,), (5.0,)))
    assert value == pytest.approx(4 * 6.0) and err == 0.0
    value, _ = integrate_omega(lambda w: np.stack([w, w * w], axis=-1), DiscreteModes((1.0, 3.0), (2.0, 4.0)))
    assert np.allclose(value, [2 + 9 * 4, 4 + 9 * 16])


def test_free_decay_integral_against_fixed_grid():
    # int J/w^2 * 4 sin^2(w t/2) coth(w/2T) for Ohmic, against a fine trapezoid grid
    j, t, wt = Ohmic(1.0, 30.0), 0.05, 50.0
    kern = lambda w: 4 * np.sin(0.5 * w * t) ** 2 / (w * w * np.tanh(0.5 * w / wt))
    value, _ = integrate_omega(kern, j)
    w = np.linspace(1e-9, 1800.0, 2_000_001)
    ref = np.trapezoid(j(w) * kern(w), w)
    assert value == pytest.approx(ref, rel=1e-7)


def test_tabulated_integral_is_exact_for_linear_data():
    t = Tabulated((0.0, 1.0, 3.0), (0.0, 2.0, 2.0))
    value, _ = integrate_omega(lambda w: np.ones_like(w), t)
    assert value == pytest.approx(1.0 + 4.0, rel=1e-13)


def test_error_estimate_tracks_tolerance():
    fun = lambda w: np.exp(-w) * np.cos(40 * w) ** 2
    errs = [integrate_interval(fun, [0.0, 10.0], rtol=tol, atol=1e-300)[1] for tol in (1e-6, 5e-7, 2.5e-7)]
    assert errs[0] >= errs[1] >= errs[2]
    exact = spi.quad(fun, 0, 10, limit=500, epsabs=0, epsrel=1e-13)[0]
    assert integrate_interval(fun, [0.0, 10.0], rtol=1e-12, atol=1e-300)[0] == pytest.approx(exact, rel=1e-11)


def test_cutoff_extension_changes_little():
    s = PulseSchedule.udd(4, 0.03)
    from ddgate.dynamics import upsilon_of_t, theta_of_t
    j = Ohmic(1.0, 30.0)
    for fn in (lambda sp: theta_of_t(s, 3, j, sp), lambda sp: upsilon_of_t(s, 3, j, 0.01, sp)):
        a, b = fn(QuadratureSpec(cutoff_multiplier=60)), fn(QuadratureSpec(cutoff_multiplier=120))
        assert abs(a - b) <= 1e-10 * abs(b)


def test_non_convergence_raises_with_partial_result():
    with pytest.raises(QuadratureError) as info:
        integrate_interval(lambda w: np.sin(1e4 * w) ** 2, [0.0, 10.0], rtol=1e-14, limit=5)
    assert info.value.value is not None and info.value.error is not None


def test_dirichlet_examples():
    assert dirichlet_factor(2 * math.pi / 0.1, 0.1, 9) == pytest.approx(81.0, rel=1e-12)
    assert dirichlet_factor(np.array([0.3, 7.0, 900.0]), 0.1, 1) == pytest.approx([1, 1, 1])
    assert dirichlet_factor(math.pi, 1.0, 2) == pytest.approx(0.0, abs=1e-20)


@pytest.mark.parametrize("k", [1, 3, 17])
@pytest.mark.parametrize("m", [2, 9, 16])
def test_dirichlet_continuity(k, m):
    for side in (-1, 1):
        x = 2 * math.pi * k + side * 1e-6
        assert dirichlet_factor(x, 1.0, m) == pytest.approx(m * m, rel=1e-8)
    x = 2 * math.pi * k + 3e-3
    ref = math.sin(m * x / 2) ** 2 / math.sin(x / 2) ** 2
    assert dirichlet_factor(x, 1.0, m) == pytest.approx(ref, rel=1e-8)


def test_series_helpers():
    y = np.array([1e-8, 1e-3, 0.05, 0.2, 3.0])
    assert np.allclose(y_minus_sin(y), [float(v - math.sin(v)) if v > 0.1 else v ** 3 / 6 - v ** 5 / 120 + v ** 7 / 5040 - v ** 9 / 362880 for v in y], rtol=1e-13)
    assert z_minus_arctan(np.array([2.0]))[0] == pytest.approx(2 - math.atan(2.0))


def test_free_one_period_sine_kernel():
    sw = PulseSchedule.free(0.3).switching_function()
    w = 11.0
    got = double_time_integral(sw, sw, SineKernel(w), 0.3)
    assert got == pytest.approx(2 * (w * 0.3 - math.sin(w * 0.3)) / w ** 2, rel=1e-13)


def _ordered_integral(g1, g2, w):
    """int_0^T dt1 f1(t1) int_0^t1 dt2 f2(t2) sin(w (t1 - t2)), inner integral in closed form."""
    b, sg = g2.boundaries, g2.signs

    def inner(t1):
        tot = 0.0
        for lo, hi, s in zip(b[:-1], b[1:], sg):
            if lo >= t1:
                break
            hi = min(hi, t1)
            tot += s * (math.cos(w * (t1 - hi)) - math.cos(w * (t1 - lo))) / w
        return tot

    pts = sorted(set(g1.boundaries) | set(g2.boundaries))
    return sum(spi.quad(lambda t: g1(t) * inner(t), lo, hi, epsabs=1e-14, epsrel=1e-12)[0]
               for lo, hi in zip(pts[:-1], pts[1:]))


def test_symmetrisation_identity():
    sw = PulseSchedule.udd(3, 1.0).switching_function()
    w = 4.3
    inner = _ordered_integral(sw, sw, w)
    assert double_time_integral(sw, sw, SineKernel(w), 1.0) == pytest.approx(2 * inner, rel=1e-9)


def test_two_switching_functions():
    f1 = SwitchingFunction((0.0, 0.4, 1.0), (1.0, -1.0))
    f2 = SwitchingFunction((0.0, 0.7, 1.0), (1.0, -1.0))
    w = 3.0
    ref = _ordered_integral(f1, f2, w) + _ordered_integral(f2, f1, w)
    assert pair_integral(f1, f2, SineKernel(w)) == pytest.approx(ref, rel=1e-9)


def test_ohmic_kernel_against_mode_integral():
    # the analytic Ohmic kernel equals the w-integral of the sine kernel
    s = PulseSchedule.udd(2, 0.05)
    h = s.horizon(2)
    j = Ohmic(1.0, 30.0)
    direct = pair_integral(h, h, OhmicKernel(1.0, 30.0))
    from ddgate import kernels
    b, sg = np.asarray(h.boundaries), np.asarray(h.signs)
    viaw, _ = integrate_omega(lambda w: kernels.pair_sum_sine(w, b, sg, sg), j, QuadratureSpec(rtol=1e-11))
    assert direct == pytest.approx(viaw, rel=1e-9)


def test_callable_kernel_matches_sine():
    sw = PulseSchedule.udd(2, 1.0).switching_function()
    a = pair_integral(sw, sw, CallableKernel(lambda t: math.sin(2.5 * t)))
    b = pair_integral(sw, sw, SineKernel(2.5))
    assert a == pytest.approx(b, rel=1e-10)


def test_mode_sum_kernel():
    sw = PulseSchedule.udd(2, 1.0).switching_function()
    modes = DiscreteModes((1.0, 2.0), (3.0, 5.0))
    got = pair_integral(sw, sw, ModeSumKernel(modes))
    ref = pair_integral(sw, sw, SineKernel(3.0)) + 4 * pair_integral(sw, sw, SineKernel(5.0))
    assert got == pytest.approx(ref, rel=1e-13)


def test_tiling_requires_integer_periods():
    sw = PulseSchedule.udd(2, 1.0).switching_function()
    from ddgate.core import DomainError
    with pytest.raises(DomainError):
        double_time_integral(sw, sw, SineKernel(1.0), 1.5)


def test_cancellation_helpers_against_mpmath():
    import mpmath as mp
    z = np.concatenate([np.geomspace(1e-8, 30.0, 600), [0.0999999, 0.1, 0.2999999, 0.3]])
    with mp.workdps(50):
        ref_t = np.array([float(mp.mpf(v) - mp.atan(mp.mpf(v))) for v in z])
        ref_s = np.array([float(mp.mpf(v) - mp.sin(mp.mpf(v))) for v in z])
    assert np.max(np.abs(z_minus_arctan(z) / ref_t - 1)) < 1e-14
    assert np.max(np.abs(y_minus_sin(z) / ref_s - 1)) < 1e-14
