import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddgate import kernels
from ddgate.core import (BathTopology, DiscreteModes, Ohmic, Tabulated, UnsupportedConfigurationError,
                         kelvin_to_angular_frequency, plus_plus)
from ddgate.dynamics import (PhaseDecoherenceRecord, aleph_integrand, im_functional, pairwise_records,
                             re_functional, reduced_density_matrix, theta_of_t, theta_time_domain,
                             trajectory, upsilon_of_t)
from ddgate.entanglement import concurrence
from ddgate.numerics import QuadratureSpec, SineKernel, double_time_integral, integrate_omega
from ddgate.pulses import PulseSchedule, filter_f_omega

from conftest import random_density


def _im_mp(schedule, w, dps=40):
    """Closed interval-pair form of the one-period functional at high precision."""
    sw = schedule.switching_function()
    with mpmath.workdps(dps):
        w = mpmath.mpf(w)
        b = [mpmath.mpf(x) for x in sw.boundaries]
        tot, e = mpmath.mpf(0), []
        for k, s in enumerate(sw.signs):
            tot += w * (b[k + 1] - b[k]) - mpmath.sin(w * (b[k + 1] - b[k]))
            e.append(s * (mpmath.expj(w * b[k + 1]) - mpmath.expj(w * b[k])) / (1j * w))
        for k in range(len(e)):
            for l in range(k):
                tot += w * w * mpmath.im(e[k] * mpmath.conj(e[l]))
        return float(tot)


# --- I functional ------------------------------------------------------------------

@given(st.floats(1e-3, 1e4))
def test_im_free(w):
    s = PulseSchedule.free(0.05)
    with mpmath.workdps(40):
        x = mpmath.mpf(w) * mpmath.mpf(0.05)
        ref = float(x - mpmath.sin(x))
    assert im_functional(s, w) == pytest.approx(ref, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
@pytest.mark.parametrize("w", [0.5, 20.0, 300.0, 5e3])
def test_im_against_high_precision(n, w):
    s = PulseSchedule.udd(n, 0.016)
    ref = _im_mp(s, w)
    assert im_functional(s, w) == pytest.approx(ref, rel=1e-7, abs=1e-12 * abs(w * 0.016) ** 3)


def test_im_small_frequency_is_cubic():
    s = PulseSchedule.udd(3, 0.05)
    w = np.array([1e-3, 1e-2])
    v = im_functional(s, w)
    assert v[1] / v[0] == pytest.approx(1e3, rel=1e-6)


def test_im_matches_time_integral_udd8():
    s = PulseSchedule.udd(8, 0.016)
    sw = s.switching_function()
    w = 20.0
    ref = double_time_integral(sw, sw, SineKernel(w), 0.016) / 2 * w * w
    assert im_functional(s, w) == pytest.approx(ref, rel=1e-8)


# --- aleph ----------------------------------------------------------------------------

def _aleph_mp(schedule, m, w, dps=50):
    f2 = abs(filter_f_omega(schedule, w)) ** 2
    with mpmath.workdps(dps):
        # condition on the same rounded x = w * Delta the kernel sees
        x = mpmath.mpf(w * schedule.period)
        return float((mpmath.sin(m * x) - m * mpmath.sin(x)) / (1 - mpmath.cos(x))) * f2


@given(st.floats(0.0, 1e4))
def test_aleph_vanishes_for_single_period(w):
    assert aleph_integrand(PulseSchedule.udd(4, 0.016), 1, w) == 0.0


def test_aleph_real_bracket_zero():
    s = PulseSchedule.udd(2, 1.0)
    assert aleph_integrand(s, 2, math.pi) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("k", [1, 2, 5])
@pytest.mark.parametrize("m", [2, 3, 8])
def test_aleph_near_resonance(k, m):
    s = PulseSchedule.udd(3, 1.0)
    w0 = 2 * math.pi * k
    # the removable singularity has limit 0
    assert kernels.aleph_factor(np.array([0.0]), [m])[0, 0] == 0.0
    for dy in (0.0, 1e-9, 1e-6, 1e-3, 0.3, 0.7):
        for w in (w0 - dy, w0 + dy):
            got = aleph_integrand(s, m, w)
            assert got == pytest.approx(_aleph_mp(s, m, w), rel=1e-9, abs=1e-14)


def test_aleph_vectorised_over_m():
    s = PulseSchedule.udd(3, 0.02)
    w = np.array([5.0, 400.0])
    block = aleph_integrand(s, [2, 5], w)
    assert block.shape == (2, 2)
    assert block[:, 1] == pytest.approx(aleph_integrand(s, 5, w))


def test_re_functional_is_dirichlet_times_filter():
    s = PulseSchedule.udd(2, 0.1)
    w = 7.3
    d = math.sin(3 * w * 0.05) ** 2 / math.sin(w * 0.05) ** 2
    assert re_functional(s, 3, w) == pytest.approx(d * abs(filter_f_omega(s, w)) ** 2, rel=1e-12)


# --- Theta ---------------------------------------------------------------------------

def test_theta_zero_without_common_bath():
    top = BathTopology(Ohmic(0.0, 30.0), None, Ohmic(5.0, 30.0), Ohmic(5.0, 30.0))
    assert theta_of_t(PulseSchedule.udd(3, 0.02), 4, top) == 0.0


@pytest.mark.parametrize("w0,d", [(37.0, 0.05), (5.0, 0.3), (400.0, 0.016)])
def test_theta_single_mode_free(w0, d):
    lam = 2.0
    bath = DiscreteModes((lam,), (w0,))
    ref = -2 * lam ** 2 * (w0 * d - math.sin(w0 * d)) / w0 ** 2
    s = PulseSchedule.free(d)
    assert theta_of_t(s, 1, bath) == pytest.approx(ref, rel=1e-12)
    assert theta_of_t(s, 1, bath, method="time") == pytest.approx(ref, rel=1e-12)


def test_theta_fig1_dual_path():
    s = PulseSchedule.udd(8, 0.016)
    j = Ohmic(135.0, 34.0)
    a = theta_of_t(s, 3, j)
    b = theta_of_t(s, 3, j, method="time")
    assert a == pytest.approx(b, rel=1e-6)


def test_theta_tabulated_dual_path():
    w = np.linspace(0.0, 600.0, 121)
    tab = Tabulated(tuple(w), tuple(w * np.exp(-w / 30.0)))
    s = PulseSchedule.udd(2, 0.05)
    a = theta_of_t(s, [1, 3], tab)
    b = theta_of_t(s, [1, 3], tab, method="time")
    assert np.allclose(a, b, rtol=1e-6)


def test_theta_asymmetric_uses_cross_density():
    j, jp = Ohmic(1.0, 30.0), Ohmic(4.0, 30.0)
    s = PulseSchedule.udd(2, 0.05)
    # sqrt(J J') = 2 J for equal cutoffs
    assert theta_of_t(s, 2, BathTopology(j, jp)) == pytest.approx(2 * theta_of_t(s, 2, j), rel=1e-12)


def test_theta_without_aleph_is_linear():
    s = PulseSchedule.udd(4, 0.02)
    ms = np.arange(1, 17)
    v = theta_of_t(s, ms, Ohmic(1.0, 30.0), include_aleph=False)
    assert np.ptp(v / ms) <= 1e-12 * abs(v[0])


def test_non_periodic_schedule_falls_back_to_time_domain():
    s = PulseSchedule.udd(3, 0.03, end_correction=False)
    j = Ohmic(1.0, 30.0)
    assert theta_of_t(s, 2, j) == theta_time_domain(s, 2, j)
    with pytest.raises(UnsupportedConfigurationError):
        theta_of_t(s, 2, j, include_aleph=False)


def test_theta_unknown_method():
    with pytest.raises(ValueError):
        theta_of_t(PulseSchedule.free(1.0), 1, Ohmic(1.0, 1.0), method="magic")


def test_cached_results_are_copies():
    s = PulseSchedule.udd(2, 0.05)
    a = theta_of_t(s, [1, 2], Ohmic(1.0, 30.0))
    a[0] = 99.0
    assert theta_of_t(s, [1, 2], Ohmic(1.0, 30.0))[0] != 99.0


# --- Upsilon -------------------------------------------------------------------------

def test_upsilon_zero_density():
    assert upsilon_of_t(PulseSchedule.free(0.1), 3, Ohmic(0.0, 1.0), 1.0) == 0.0


def test_upsilon_high_temperature_free():
    j, d = Ohmic(1.0, 30.0), 0.02
    T = 1.0
    wt = kelvin_to_angular_frequency(T)
    got = upsilon_of_t(PulseSchedule.free(d), 1, j, T)
    w = np.linspace(1e-12, 60 * 30.0, 1_000_001)
    ref = np.trapezoid(j(w) * (2 * wt / w) * 4 * np.sin(w * d / 2) ** 2 / w ** 2, w)
    assert got == pytest.approx(ref, rel=1e-6)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.002, 0.05), st.floats(1e-4, 2.0))
def test_upsilon_free_grows_with_m(d, T):
    v = upsilon_of_t(PulseSchedule.free(d), [1, 2, 4, 8], Ohmic(1.0, 30.0), T)
    assert np.all(v >= 0) and np.all(np.diff(v) > 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 8), st.floats(0.003, 0.1), st.integers(1, 6), st.floats(1e-5, 2.0))
def test_upsilon_nonnegative(n, d, m, T):
    assert upsilon_of_t(PulseSchedule.udd(n, d), m, Ohmic(1.0, 30.0), T) >= 0.0


def test_upsilon_continuous_in_period():
    j = Ohmic(1.0, 30.0)
    a = upsilon_of_t(PulseSchedule.udd(4, 0.03), 4, j, 0.1)
    b = upsilon_of_t(PulseSchedule.udd(4, 0.03 * (1 + 1e-7)), 4, j, 0.1)
    assert b == pytest.approx(a, rel=1e-5)


def test_upsilon_non_periodic_horizon():
    # without end correction the second period is sign-flipped: F = (1 - e^{ix}) f
    s = PulseSchedule.udd(1, 0.04, end_correction=False)
    j = Ohmic(1.0, 30.0)
    wt = kelvin_to_angular_frequency(0.01)
    got = upsilon_of_t(s, 2, j, 0.01)
    kern = lambda w: (abs(1 - np.exp(1j * w * 0.04)) ** 2 * np.abs(filter_f_omega(s, w)) ** 2
                      / (np.tanh(w / (2 * wt)) * w * w))
    ref, _ = integrate_omega(kern, j)
    assert got == pytest.approx(ref, rel=1e-8)


def test_discrete_mode_upsilon():
    s = PulseSchedule.udd(2, 0.05)
    modes = DiscreteModes((0.5,), (80.0,))
    w = 80.0
    wt = kelvin_to_angular_frequency(0.02)
    ref = 0.25 / (math.tanh(w / (2 * wt)) * w * w) * re_functional(s, 3, w)
    assert upsilon_of_t(s, 3, modes, 0.02) == pytest.approx(ref, rel=1e-12)


# --- records and the map -------------------------------------------------------------

def test_symmetric_records_match_main_text_pattern():
    j = Ohmic(1.0, 30.0)
    s = PulseSchedule.udd(4, 0.03)
    rec = pairwise_records(s, 3, BathTopology(j), 0.05)
    ups = upsilon_of_t(s, 3, j, 0.05)
    th = theta_of_t(s, 3, j)
    pairs = rec.pairs
    assert pairs[(2, 3)] == (0.0, 0.0)
    assert pairs[(1, 4)][1] == pytest.approx(8 * ups, rel=1e-12)
    assert pairs[(1, 2)] == pytest.approx((2 * th, 2 * ups), rel=1e-12)
    assert pairs[(1, 3)] == pytest.approx((2 * th, 2 * ups), rel=1e-12)
    assert pairs[(2, 4)] == pytest.approx((-2 * th, 2 * ups), rel=1e-12)
    assert pairs[(3, 4)] == pytest.approx((-2 * th, 2 * ups), rel=1e-12)
    ref = PhaseDecoherenceRecord.symmetric(th, ups)
    assert np.allclose(rec.phase, ref.phase, rtol=1e-12) and np.allclose(rec.decay, ref.decay, rtol=1e-12)


def test_no_common_bath_stays_product():
    top = BathTopology(Ohmic(0.0, 30.0), None, Ohmic(3.0, 30.0), Ohmic(1.0, 20.0))
    recs = trajectory(PulseSchedule.udd(2, 0.05), 5, top, 0.1)
    for r in recs:
        assert r.theta == 0.0
        rho = reduced_density_matrix(plus_plus(), r)
        assert concurrence(rho) == 0.0
        assert np.all(r.decay[np.triu_indices(4, 1)] > 0)


def test_trajectory_times():
    recs = trajectory(PulseSchedule.udd(2, 0.05), 4, Ohmic(1.0, 30.0), 0.1)
    assert [r.m for r in recs] == [1, 2, 3, 4]
    assert [r.t for r in recs] == pytest.approx([0.05, 0.1, 0.15, 0.2])


def test_identity_map():
    rng = np.random.default_rng(1)
    rho = random_density(rng)
    out = reduced_density_matrix(rho, PhaseDecoherenceRecord.symmetric(0.0, 0.0))
    assert np.allclose(out, rho, atol=1e-15)


def test_large_decay_keeps_only_decoherence_free_pair():
    rho = plus_plus()
    out = reduced_density_matrix(rho, PhaseDecoherenceRecord.symmetric(0.3, 1e3))
    off = out - np.diag(out.diagonal())
    mask = np.ones((4, 4), bool)
    mask[1, 2] = mask[2, 1] = False
    assert np.all(off[mask] == 0)
    assert out[1, 2] == pytest.approx(0.25)


def test_maximally_entangling_point():
    out = reduced_density_matrix(plus_plus(), PhaseDecoherenceRecord.symmetric(math.pi / 4, 0.0))
    assert concurrence(out) == pytest.approx(1.0, abs=1e-12)


def test_map_structure_exact():
    rng = np.random.default_rng(7)
    for _ in range(50):
        rho = random_density(rng, rank=int(rng.integers(1, 5)))
        rec = PhaseDecoherenceRecord.symmetric(rng.uniform(-5, 5), rng.exponential(0.5))
        out = reduced_density_matrix(rho, rec)
        assert np.array_equal(out, out.conj().T)
        assert np.array_equal(out.diagonal().real, rho.diagonal().real)
        assert np.all(out.diagonal().imag == 0)


def test_local_z_rotations_leave_concurrence_unchanged():
    rng = np.random.default_rng(3)
    rec = PhaseDecoherenceRecord.symmetric(0.4, 0.05)
    for _ in range(20):
        rho = random_density(rng, rank=1)
        a, b = rng.uniform(0, 2 * math.pi, 2)
        u = np.kron(np.diag([1, np.exp(1j * a)]), np.diag([1, np.exp(1j * b)]))
        c1 = concurrence(reduced_density_matrix(rho, rec))
        c2 = concurrence(reduced_density_matrix(u @ rho @ u.conj().T, rec))
        assert c1 == pytest.approx(c2, abs=1e-10)
