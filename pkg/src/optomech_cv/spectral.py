"""Filtered output spectra and stationary output covariance matrices.

Each traveling output beam is detected through a causal single-pole
temporal mode

    g(t) = sqrt(2/tau) * theta(t) * exp(-(1/tau + i omega_c) t),

normalized so the filtered mode has a proper bosonic commutator.  The
stationary covariance matrix of (mirror, filtered left, filtered right)
is the frequency integral of the filtered output spectral density; the
integral runs over the whole real line and is folded onto [0, inf) using
the reality of the time-domain kernels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .dynamics import LinearModel, N_STATE, stability
from .errors import ParameterDomainError, PhysicalityWarning, UnstableModelError
from .gaussian import PHYSICALITY_SLACK, symplectic_eigs
from .params import PhysicalParams

# Frequency cutoff multiplier: the explicit panel region extends to
# CUTOFF_FACTOR times the largest rate in the problem, the remainder is
# integrated through a 1/omega change of variable.
CUTOFF_FACTOR = 20.0


@dataclass(frozen=True)
class FilterSpec:
    """Causal single-pole output filter.

    tau      memory time [s]; the filter bandwidth (HWHM) is 1/tau
    omega_c  center frequency relative to the drive [rad/s]
    """

    tau: float
    omega_c: float

    def __post_init__(self):
        if not math.isfinite(self.tau) or self.tau <= 0.0:
            raise ParameterDomainError(f"filter tau must be > 0, got {self.tau!r}")
        if not math.isfinite(self.omega_c):
            raise ParameterDomainError(
                f"filter omega_c must be finite, got {self.omega_c!r}"
            )


def filters_from(params: PhysicalParams) -> dict:
    """Left/right FilterSpec pair taken from the physical parameters."""
    return {
        "l": FilterSpec(tau=params.filter_tau_l, omega_c=params.filter_omega_l),
        "r": FilterSpec(tau=params.filter_tau_r, omega_c=params.filter_omega_r),
    }


def filter_ft(spec: FilterSpec, omega):
    """Fourier transform of the filter kernel, convention integral g(t) e^{i w t} dt.

    Equals sqrt(2/tau) / (1/tau - i (w - omega_c)); its squared modulus is
    a Lorentzian of unit area in dw/(2 pi).
    """
    om = np.asarray(omega, dtype=float)
    return np.sqrt(2.0 / spec.tau) / (1.0 / spec.tau - 1j * (om - spec.omega_c))


def _check_filters(filters) -> tuple:
    try:
        fl, fr = filters["l"], filters["r"]
    except (KeyError, TypeError) as exc:
        raise ParameterDomainError(
            "filters must be a mapping with keys 'l' and 'r'"
        ) from exc
    if not isinstance(fl, FilterSpec) or not isinstance(fr, FilterSpec):
        raise ParameterDomainError("filter entries must be FilterSpec instances")
    return fl, fr


def upsilon(model: LinearModel, filters, omega) -> np.ndarray:
    """Frequency-domain filter kernel acting on the output quadratures.

    Mechanical rows pass through unchanged.  Each optical 2x2 block is
    sqrt(2 kappa) [[fR, -fI], [fI, fR]] where fR and fI are the Fourier
    transforms of the real and imaginary parts of g(t); this is the
    transform of the real time-domain quadrature mixing matrix, so the
    kernel at -w is the complex conjugate of the kernel at +w.

    Accepts scalar or 1-D ``omega``; returns (6, 6) or (m, 6, 6) complex.
    """
    fl, fr = _check_filters(filters)
    om = np.asarray(omega, dtype=float)
    scalar = om.ndim == 0
    om1 = np.atleast_1d(om)
    u = np.zeros(om1.shape + (N_STATE, N_STATE), dtype=complex)
    u[:, 0, 0] = 1.0
    u[:, 1, 1] = 1.0
    for spec, kappa, k in (
        (fl, model.derived.physical.kappa_l, 2),
        (fr, model.derived.physical.kappa_r, 4),
    ):
        g_pos = filter_ft(spec, om1)
        g_neg = np.conj(filter_ft(spec, -om1))
        f_re = 0.5 * (g_pos + g_neg)
        f_im = (g_pos - g_neg) / 2j
        s = math.sqrt(2.0 * kappa)
        u[:, k, k] = s * f_re
        u[:, k, k + 1] = -s * f_im
        u[:, k + 1, k] = s * f_im
        u[:, k + 1, k + 1] = s * f_re
    return u[0] if scalar else u


@dataclass(frozen=True)
class OutputCM:
    """Stationary covariance matrix of (mirror, filtered left, filtered right).

    matrix      6x6 real symmetric covariance matrix; rows 0:2 are the
                intracavity mechanical quadratures, rows 2:6 the filtered
                output modes
    quad_error  max entrywise accumulated quadrature error estimate
    """

    matrix: np.ndarray
    quad_error: float

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (N_STATE, N_STATE):
            raise ValueError(f"covariance matrix must be 6x6, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix has non-finite entries")
        skew = float(np.max(np.abs(m - m.T)))
        if skew > 1e-9:
            raise ValueError(f"covariance matrix asymmetric by {skew:.3e}")


def _spectrum_factory(model: LinearModel, filters=None):
    """Folded spectral density F(w) = 2 Re S(w), vectorized over w.

    S(w) = B B^H / (2 pi) with B = Ups (M + P) sqrt(D), M = (i w I + A)^-1.
    With ``filters=None`` the bare intracavity density (no output
    coupling, no filter) is returned instead; its integral is the
    stationary intracavity covariance matrix.
    """
    a = model.drift
    sqrt_d = np.sqrt(model.diffusion)
    eye = np.eye(N_STATE)
    p = np.diag(model.out_coupling)

    def density(om_flat):
        om = np.asarray(om_flat, dtype=float)
        m = np.linalg.inv(1j * om[:, None, None] * eye + a)
        if filters is None:
            b = m * sqrt_d[None, None, :]
        else:
            ups = upsilon(model, filters, om)
            b = (ups @ (m + p)) * sqrt_d[None, None, :]
        s = b @ np.conj(np.swapaxes(b, 1, 2))
        return (2.0 / (2.0 * np.pi)) * np.real(s)

    return density


def _breakpoints(model: LinearModel, filters=None):
    """Initial panel edges on [0, cutoff] plus the cutoff itself."""
    params = model.derived.physical
    eigs = np.linalg.eigvals(model.drift)
    rates = [params.omega_m, params.kappa_l, params.kappa_r]
    features = []
    for lam in eigs:
        nu = abs(lam.imag)
        width = max(abs(lam.real), 1e-9 * max(nu, 1.0))
        features.append((nu, width))
        rates.append(nu + 5.0 * width)
    if filters is not None:
        fl, fr = _check_filters(filters)
        for spec in (fl, fr):
            features.append((abs(spec.omega_c), 1.0 / spec.tau))
            rates.append(abs(spec.omega_c) + 5.0 / spec.tau)
    cutoff = CUTOFF_FACTOR * max(rates)
    points = {0.0, cutoff}
    for nu, width in features:
        for x in (nu - 5 * width, nu - width, nu, nu + width, nu + 5 * width):
            if 0.0 < x < cutoff:
                points.add(float(x))
    edges = np.array(sorted(points))
    # Merge near-coincident edges so panels keep sane widths.
    keep = [edges[0]]
    for x in edges[1:]:
        if x - keep[-1] > 1e-12 * cutoff:
            keep.append(x)
    if keep[-1] != cutoff:
        keep[-1] = cutoff
    return np.array(keep)


def _integrate_spectrum(model, filters, abs_tol, rel_tol, max_panels):
    density = _spectrum_factory(model, filters)
    edges = _breakpoints(model, filters)
    cutoff = edges[-1]

    body, body_err = quadrature.integrate_adaptive(
        density, edges, abs_tol=0.5 * abs_tol, rel_tol=rel_tol, max_panels=max_panels
    )

    # Tail: w in [cutoff, inf) via w = cutoff / s, ds weight cutoff / s^2.
    def tail_density(s_flat):
        s = np.asarray(s_flat, dtype=float)
        vals = density(cutoff / s)
        return vals * (cutoff / s**2)[:, None, None]

    tail, tail_err = quadrature.integrate_adaptive(
        tail_density,
        np.array([0.0, 0.25, 0.5, 1.0]),
        abs_tol=0.5 * abs_tol,
        rel_tol=rel_tol,
        max_panels=max_panels,
    )
    value = body + tail
    value = 0.5 * (value + value.T)
    err = body_err + tail_err
    return value, float(np.max(err))


def output_cm(
    model: LinearModel,
    filters,
    abs_tol=quadrature.DEFAULT_ABS_TOL,
    rel_tol=quadrature.DEFAULT_REL_TOL,
    max_panels=quadrature.DEFAULT_MAX_PANELS,
) -> OutputCM:
    """Stationary covariance matrix of the filtered output modes.

    Integrates the filtered output spectral density over all frequencies
    with adaptive panel quadrature.  Requires a strictly stable model.
    Emits PhysicalityWarning if the optical block of the result dips
    below the vacuum floor by more than the standard slack (a sign the
    error target was too loose).
    """
    report = stability(model)
    if not report.stable:
        raise UnstableModelError(
            f"drift matrix is not Hurwitz (margin {report.margin:.6e} rad/s); "
            "no stationary state exists"
        )
    _check_filters(filters)
    value, err = _integrate_spectrum(model, filters, abs_tol, rel_tol, max_panels)
    result = OutputCM(matrix=value, quad_error=err)
    nu_min = float(symplectic_eigs(value[2:, 2:])[0])
    if nu_min < 0.5 - PHYSICALITY_SLACK:
        warnings.warn(
            PhysicalityWarning(
                f"optical block symplectic eigenvalue {nu_min!r} below the "
                "vacuum floor; tighten the quadrature tolerances"
            ),
            stacklevel=2,
        )
    return result


def unfiltered_cm(
    model: LinearModel,
    abs_tol=quadrature.DEFAULT_ABS_TOL,
    rel_tol=quadrature.DEFAULT_REL_TOL,
    max_panels=quadrature.DEFAULT_MAX_PANELS,
) -> OutputCM:
    """Intracavity covariance matrix reconstructed from the spectrum.

    Integrates the bare (unfiltered, intracavity) spectral density; the
    result must agree with the algebraic Lyapunov solution, which makes
    this a strong cross-check of the spectral route.
    """
    report = stability(model)
    if not report.stable:
        raise UnstableModelError(
            f"drift matrix is not Hurwitz (margin {report.margin:.6e} rad/s); "
            "no stationary state exists"
        )
    value, err = _integrate_spectrum(model, None, abs_tol, rel_tol, max_panels)
    return OutputCM(matrix=value, quad_error=err)
