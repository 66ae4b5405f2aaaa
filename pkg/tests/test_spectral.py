"""Output filters, spectral kernel, and the integrated output covariance."""

import math
import warnings

import numpy as np
import pytest
import scipy.integrate

from optomech_cv import (
    FilterSpec,
    OutputCM,
    ParameterDomainError,
    PhysicalityWarning,
    UnstableModelError,
    build,
    derive,
    filter_ft,
    filters_from,
    lyapunov_cm,
    output_cm,
    reduce_two_mode,
    unfiltered_cm,
    upsilon,
)
from optomech_cv.presets import base_params
from optomech_cv.spectral import _breakpoints, _spectrum_factory

WM = 2.0 * math.pi * 1e7


@pytest.fixture(scope="module")
def fig2_model():
    return build(derive(base_params()))


@pytest.fixture(scope="module")
def fig2_filters():
    return filters_from(base_params())


@pytest.fixture(scope="module")
def fig2_cm(fig2_model, fig2_filters):
    return output_cm(fig2_model, fig2_filters)


# ---------------------------------------------------------------------------
# Filters


def test_filter_spec_validation():
    with pytest.raises(ParameterDomainError):
        FilterSpec(tau=0.0, omega_c=WM)
    with pytest.raises(ParameterDomainError):
        FilterSpec(tau=-1e-6, omega_c=WM)
    with pytest.raises(ParameterDomainError):
        FilterSpec(tau=1e-6, omega_c=math.nan)


def test_filters_from_params():
    f = filters_from(base_params())
    assert f["l"].tau == 1e-6 and f["l"].omega_c == pytest.approx(WM)
    assert f["r"].tau == 1e-6 and f["r"].omega_c == pytest.approx(-WM)


def test_filter_ft_peak_value():
    spec = FilterSpec(tau=2e-6, omega_c=0.7 * WM)
    peak = filter_ft(spec, spec.omega_c)
    assert peak == pytest.approx(math.sqrt(2.0 * spec.tau), rel=1e-14)


def test_filter_ft_unit_spectral_norm():
    # The filtered mode has a proper commutator: integral |g~|^2 dw/2pi = 1.
    spec = FilterSpec(tau=1.3e-6, omega_c=0.4 * WM)

    # Integrate in the dimensionless detuning u = (w - omega_c) * tau, where
    # the line has unit width; the infinite-range transform is then benign.
    def mod2_scaled(u):
        w = spec.omega_c + u / spec.tau
        return abs(filter_ft(spec, w)) ** 2 / (2.0 * math.pi) / spec.tau

    val, _ = scipy.integrate.quad(mod2_scaled, -math.inf, math.inf, limit=400)
    assert val == pytest.approx(1.0, rel=1e-8)


def test_filter_ft_lorentzian_halfwidth():
    spec = FilterSpec(tau=1e-6, omega_c=0.0)
    half = abs(filter_ft(spec, 1.0 / spec.tau)) ** 2
    peak = abs(filter_ft(spec, 0.0)) ** 2
    assert half == pytest.approx(0.5 * peak, rel=1e-12)


# ---------------------------------------------------------------------------
# Frequency-domain kernel


def test_upsilon_shapes(fig2_model, fig2_filters):
    one = upsilon(fig2_model, fig2_filters, 0.3 * WM)
    assert one.shape == (6, 6)
    many = upsilon(fig2_model, fig2_filters, np.linspace(-WM, WM, 7))
    assert many.shape == (7, 6, 6)
    np.testing.assert_allclose(many[3], upsilon(fig2_model, fig2_filters, 0.0))


def test_upsilon_mechanical_identity(fig2_model, fig2_filters):
    u = upsilon(fig2_model, fig2_filters, 0.77 * WM)
    np.testing.assert_array_equal(u[:2, :2], np.eye(2))
    np.testing.assert_array_equal(u[:2, 2:], np.zeros((2, 4)))
    np.testing.assert_array_equal(u[2:, :2], np.zeros((4, 2)))


def test_upsilon_reality_symmetry(fig2_model, fig2_filters):
    # Time-domain mixing matrix is real, so U(-w) = conj(U(w)).
    for w in (0.0, 0.31 * WM, -1.2 * WM, 3.7 * WM):
        np.testing.assert_allclose(
            upsilon(fig2_model, fig2_filters, -w),
            np.conj(upsilon(fig2_model, fig2_filters, w)),
            atol=1e-14,
        )


def test_upsilon_block_antisymmetry(fig2_model, fig2_filters):
    # Each optical block is s*[[fR, -fI], [fI, fR]].
    u = upsilon(fig2_model, fig2_filters, 0.9 * WM)
    for k in (2, 4):
        assert u[k, k] == u[k + 1, k + 1]
        assert u[k, k + 1] == -u[k + 1, k]


def test_upsilon_narrowband_peak_magnitude(fig2_model):
    # At w = omega_c with omega_c * tau >> 1 the counter-rotating part is
    # negligible and the diagonal approaches sqrt(kappa * tau).
    p = base_params()
    filters = filters_from(p)
    u = upsilon(fig2_model, filters, p.filter_omega_l)
    want = math.sqrt(p.kappa_l * p.filter_tau_l)
    assert abs(u[2, 2]) == pytest.approx(want, rel=0.05)


def test_upsilon_vanishes_far_off_resonance(fig2_model, fig2_filters):
    u = upsilon(fig2_model, fig2_filters, 400.0 * WM)
    assert np.max(np.abs(u[2:, 2:])) < 1e-2


def test_upsilon_rejects_bad_filter_mapping(fig2_model):
    with pytest.raises(ParameterDomainError):
        upsilon(fig2_model, {"l": FilterSpec(1e-6, WM)}, 0.0)
    with pytest.raises(ParameterDomainError):
        upsilon(fig2_model, {"l": 1.0, "r": 2.0}, 0.0)


# ---------------------------------------------------------------------------
# OutputCM container


def test_output_cm_validation():
    with pytest.raises(ValueError):
        OutputCM(matrix=np.eye(4), quad_error=0.0)
    bad = np.eye(6)
    bad[0, 0] = math.nan
    with pytest.raises(ValueError):
        OutputCM(matrix=bad, quad_error=0.0)
    skewed = np.eye(6)
    skewed[0, 1] = 1e-3
    with pytest.raises(ValueError):
        OutputCM(matrix=skewed, quad_error=0.0)


# ---------------------------------------------------------------------------
# Integrated covariance matrices


def test_unfiltered_matches_lyapunov(fig2_model):
    # Spectral route vs algebraic route for the intracavity state.
    v_spec = unfiltered_cm(fig2_model).matrix
    v_alg = lyapunov_cm(fig2_model)
    scale = np.max(np.abs(v_alg))
    assert np.max(np.abs(v_spec - v_alg)) <= 1e-8 * scale


def test_output_mech_block_equals_lyapunov(fig2_cm, fig2_model):
    # The filter acts only on the optical rows, so the mechanical corner of
    # the output CM is the intracavity one.  Off-diagonals are roundoff-size,
    # hence the absolute term.
    v_alg = lyapunov_cm(fig2_model)
    scale = float(np.max(np.abs(v_alg[:2, :2])))
    np.testing.assert_allclose(
        fig2_cm.matrix[:2, :2], v_alg[:2, :2], rtol=1e-7, atol=1e-8 * scale
    )


def test_vacuum_output_for_undriven_cavities():
    p = base_params().replace(power_r=0.0, power_l=0.0)
    cm = output_cm(build(derive(p)), filters_from(p))
    np.testing.assert_allclose(cm.matrix[2:, 2:], 0.5 * np.eye(4), atol=1e-6)


def test_fig_working_point_block_frozen_values(fig2_cm):
    # Reference numbers pinned from the independent quad_vec route below.
    block = reduce_two_mode(fig2_cm)
    assert block.big_l == pytest.approx(2.069604, abs=2e-4)
    assert block.big_r == pytest.approx(2.000224, abs=2e-4)
    assert block.c == pytest.approx(1.826292, abs=2e-4)
    assert block.c_prime == pytest.approx(0.025424, abs=2e-4)
    assert fig2_cm.quad_error < 1e-6


def test_output_cm_against_quad_vec_oracle(fig2_model, fig2_filters, fig2_cm):
    # Same spectral density, independently integrated by scipy's adaptive
    # vector quadrature over a finite window plus a 1/w tail substitution.
    density = _spectrum_factory(fig2_model, fig2_filters)
    cutoff = float(_breakpoints(fig2_model, fig2_filters)[-1])

    def f(w):
        return density(np.atleast_1d(w))[0]

    body, _ = scipy.integrate.quad_vec(f, 0.0, cutoff, epsabs=1e-9, epsrel=1e-10)

    def tail(s):
        return f(cutoff / s) * cutoff / s**2

    tail_part, _ = scipy.integrate.quad_vec(tail, 1e-6, 1.0, epsabs=1e-9)
    ref = body + tail_part
    ref = 0.5 * (ref + ref.T)
    assert np.max(np.abs(fig2_cm.matrix - ref)) <= 1e-6


def test_left_right_relabel_symmetry():
    # Swapping every l/r input must swap the two filtered output modes.
    p = base_params()
    q = p.replace(
        kappa_r=p.kappa_l,
        kappa_l=p.kappa_r,
        power_r=p.power_l,
        power_l=p.power_r,
        detuning_r=p.detuning_l,
        detuning_l=p.detuning_r,
        filter_omega_r=p.filter_omega_l,
        filter_omega_l=p.filter_omega_r,
        filter_tau_r=p.filter_tau_l,
        filter_tau_l=p.filter_tau_r,
        wavelength_r=p.wavelength_l,
        wavelength_l=p.wavelength_r,
    )
    perm = np.array([0, 1, 4, 5, 2, 3])
    v1 = output_cm(build(derive(p)), filters_from(p)).matrix
    v2 = output_cm(build(derive(q)), filters_from(q)).matrix
    np.testing.assert_allclose(v2, v1[np.ix_(perm, perm)], atol=1e-7)


def test_tolerance_and_window_robustness(fig2_model, fig2_filters, fig2_cm, monkeypatch):
    # Doubling the explicit window or tightening tolerances must not move
    # the answer at the reported-error level.
    import optomech_cv.spectral as spectral_mod

    tight = output_cm(fig2_model, fig2_filters, abs_tol=1e-10)
    assert np.max(np.abs(tight.matrix - fig2_cm.matrix)) <= 1e-6

    monkeypatch.setattr(spectral_mod, "CUTOFF_FACTOR", 40.0)
    wide = output_cm(fig2_model, fig2_filters)
    assert np.max(np.abs(wide.matrix - fig2_cm.matrix)) <= 1e-6


def test_no_physicality_warning_at_default_tolerances(fig2_model, fig2_filters):
    with warnings.catch_warnings():
        warnings.simplefilter("error", PhysicalityWarning)
        output_cm(fig2_model, fig2_filters)


def test_output_cm_rejects_unstable_model():
    p = base_params()
    p = p.replace(power_r=100.0 * p.power_r, power_l=100.0 * p.power_l)
    with pytest.raises(UnstableModelError):
        output_cm(build(derive(p)), filters_from(p))


def test_quad_error_reported_positive(fig2_cm):
    assert 0.0 < fig2_cm.quad_error < 1e-6
