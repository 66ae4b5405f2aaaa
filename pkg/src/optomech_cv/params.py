"""Physical parameters of the driven two-cavity optomechanical system.

A single movable mirror (the shared end membrane) couples two laser-driven
cavity modes.  ``PhysicalParams`` holds the lab-frame inputs; ``derive``
and ``fixed_point`` turn them into the linearized-model coefficients
collected in ``DerivedParams``.

Conventions: quadratures are x = (a + a*)/sqrt(2), so vacuum variance is
1/2; cavity amplitude decay rates ``kappa_*`` are HWHM in rad/s; detunings
are (cavity frequency - laser frequency) in the frame rotating at the
drive.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly
from scipy.constants import c as _C0
from scipy.constants import hbar as _HBAR
from scipy.constants import k as _KB

from .errors import ConvergenceError, MultipleStableRootsWarning, ParameterDomainError

DETUNING_MODES = ("effective", "bare")

# Continuation grid and Newton settings for the static-displacement solve.
_RAMP_STEPS = 48
_NEWTON_TOL = 1e-10
_NEWTON_MAX = 60


@dataclass(frozen=True)
class PhysicalParams:
    """Lab-frame inputs describing the device and its drives.

    mass              mechanical effective mass [kg]
    omega_m           mechanical angular frequency [rad/s]
    quality           mechanical quality factor (dimensionless)
    cav_half_length   length of each subcavity [m]
    kappa_r/kappa_l   cavity amplitude decay rates [rad/s]
    power_r/power_l   input drive powers [W]
    temperature       bath temperature [K]
    detuning_r/detuning_l
                      detunings [rad/s]; meaning set by ``detuning_mode``
    filter_omega_r/filter_omega_l
                      center frequencies of the output temporal filters [rad/s]
    detuning_mode     "effective" (already includes the static mirror shift)
                      or "bare" (shift must be solved for via ``fixed_point``)
    wavelength_r/wavelength_l
                      drive wavelengths [m]
    filter_tau_r/filter_tau_l
                      filter memory times [s]
    """

    mass: float
    omega_m: float
    quality: float
    cav_half_length: float
    kappa_r: float
    kappa_l: float
    power_r: float
    power_l: float
    temperature: float
    detuning_r: float
    detuning_l: float
    filter_omega_r: float
    filter_omega_l: float
    detuning_mode: str = "effective"
    wavelength_r: float = 1.064e-6
    wavelength_l: float = 1.064e-6
    filter_tau_r: float = 1.0e-6
    filter_tau_l: float = 1.0e-6

    def __post_init__(self):
        strictly_positive = (
            "mass",
            "omega_m",
            "quality",
            "cav_half_length",
            "kappa_r",
            "kappa_l",
            "wavelength_r",
            "wavelength_l",
            "filter_tau_r",
            "filter_tau_l",
        )
        for name in strictly_positive:
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ParameterDomainError(f"{name} must be finite and > 0, got {value!r}")
        nonnegative = ("power_r", "power_l", "temperature")
        for name in nonnegative:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ParameterDomainError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("detuning_r", "detuning_l", "filter_omega_r", "filter_omega_l"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterDomainError(f"{name} must be finite, got {value!r}")
        if self.detuning_mode not in DETUNING_MODES:
            raise ParameterDomainError(
                f"detuning_mode must be one of {DETUNING_MODES}, got {self.detuning_mode!r}"
            )

    def replace(self, **changes) -> "PhysicalParams":
        """Return a copy with the given fields replaced (re-validated)."""
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedParams:
    """Coefficients of the linearized model, all in rad/s unless noted.

    g0_r/g0_l        single-photon coupling rates
    eps_r/eps_l      drive amplitudes [sqrt(photons)/s * rad]
    gamma_m          mechanical damping rate
    nbar_mech        thermal phonon occupancy (dimensionless)
    alpha_mag/beta_mag
                     steady intracavity amplitude moduli (sqrt photons)
    geff_r/geff_l    effective (drive-enhanced) coupling rates
    delta_r/delta_l  effective detunings seen by the fluctuations
    q_s              static dimensionless mirror displacement
    physical         the inputs these values were derived from
    """

    g0_r: float
    g0_l: float
    eps_r: float
    eps_l: float
    gamma_m: float
    nbar_mech: float
    alpha_mag: float
    beta_mag: float
    geff_r: float
    geff_l: float
    delta_r: float
    delta_l: float
    q_s: float
    physical: PhysicalParams


def thermal_occupancy(omega_m: float, temperature: float) -> float:
    """Bose occupancy 1/(exp(hbar*w/kT) - 1); exactly 0.0 at T = 0."""
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(_HBAR * omega_m / (_KB * temperature))


def single_photon_coupling(params: PhysicalParams, wavelength: float) -> float:
    """Frequency pull per zero-point displacement of the end mirror."""
    omega_c = 2.0 * math.pi * _C0 / wavelength
    x_zpf = math.sqrt(_HBAR / (params.mass * params.omega_m))
    return omega_c / params.cav_half_length * x_zpf


def drive_amplitude(power: float, kappa: float, wavelength: float) -> float:
    """Input amplitude sqrt(2 P kappa / (hbar omega_laser))."""
    omega_laser = 2.0 * math.pi * _C0 / wavelength
    return math.sqrt(2.0 * power * kappa / (_HBAR * omega_laser))


def effective_coupling(
    params: PhysicalParams, wavelength: float, power: float, kappa: float, delta: float
) -> float:
    """Drive-enhanced coupling, closed form.

    (2 omega / L) sqrt(P kappa / (m Omega_m omega (kappa^2 + delta^2)));
    agrees with sqrt(2) g0 |amplitude| to rounding (a tested invariant).
    """
    omega_c = 2.0 * math.pi * _C0 / wavelength
    return (
        2.0
        * omega_c
        / params.cav_half_length
        * math.sqrt(
            power
            * kappa
            / (params.mass * params.omega_m * omega_c * (kappa**2 + delta**2))
        )
    )


def _derive_at(params: PhysicalParams, delta_r: float, delta_l: float) -> DerivedParams:
    """Assemble DerivedParams once the effective detunings are known."""
    g0_r = single_photon_coupling(params, params.wavelength_r)
    g0_l = single_photon_coupling(params, params.wavelength_l)
    eps_r = drive_amplitude(params.power_r, params.kappa_r, params.wavelength_r)
    eps_l = drive_amplitude(params.power_l, params.kappa_l, params.wavelength_l)

    alpha_mag = eps_r / math.sqrt(params.kappa_r**2 + delta_r**2)
    beta_mag = eps_l / math.sqrt(params.kappa_l**2 + delta_l**2)

    # Closed form; equals sqrt(2) g0 |amplitude| up to rounding, with the
    # amplitude phase absorbed into the quadrature definition.
    geff_r = effective_coupling(
        params, params.wavelength_r, params.power_r, params.kappa_r, delta_r
    )
    geff_l = effective_coupling(
        params, params.wavelength_l, params.power_l, params.kappa_l, delta_l
    )

    q_s = (g0_l * beta_mag**2 - g0_r * alpha_mag**2) / params.omega_m

    return DerivedParams(
        g0_r=g0_r,
        g0_l=g0_l,
        eps_r=eps_r,
        eps_l=eps_l,
        gamma_m=params.omega_m / params.quality,
        nbar_mech=thermal_occupancy(params.omega_m, params.temperature),
        alpha_mag=alpha_mag,
        beta_mag=beta_mag,
        geff_r=geff_r,
        geff_l=geff_l,
        delta_r=delta_r,
        delta_l=delta_l,
        q_s=q_s,
        physical=params,
    )


def derive(params: PhysicalParams) -> DerivedParams:
    """Derive linearized-model coefficients for effective-detuning inputs.

    For ``detuning_mode == "bare"`` the static mirror shift feeds back on
    the detunings and must be solved self-consistently; use ``fixed_point``.
    """
    if params.detuning_mode != "effective":
        raise ParameterDomainError(
            "derive() requires detuning_mode='effective'; "
            "use fixed_point() for bare detunings"
        )
    return _derive_at(params, params.detuning_r, params.detuning_l)


# ---------------------------------------------------------------------------
# Static displacement for bare detunings.
#
# The radiation pressures of the two subcavities push the shared mirror in
# opposite directions.  With D_l(q) = kappa_l^2 + (d0_l - g0_l q)^2 and
# D_r(q) = kappa_r^2 + (d0_r + g0_r q)^2, the stationary displacement obeys
#
#     q = F(q) = c_l / D_l(q) - c_r / D_r(q),   c_i = g0_i eps_i^2 / omega_m
#
# i.e. a quintic  q D_l D_r - c_l D_r + c_r D_l = 0.  Up to five real
# solutions exist (static bistability); we follow the branch connected to
# q = 0 as the drive powers ramp up.


def _displacement_poly(kl, dl0, g0l, kr, dr0, g0r, cl, cr):
    """Quintic coefficients (low to high order) in scaled units."""
    poly_dl = np.array([kl**2 + dl0**2, -2.0 * dl0 * g0l, g0l**2])
    poly_dr = np.array([kr**2 + dr0**2, 2.0 * dr0 * g0r, g0r**2])
    poly = npoly.polymul(npoly.polymul([0.0, 1.0], poly_dl), poly_dr)
    poly = npoly.polysub(poly, cl * poly_dr)
    return npoly.polyadd(poly, cr * poly_dl)


def _real_roots(poly):
    roots = npoly.polyroots(poly)
    keep = np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots.real))
    return np.sort(roots.real[keep])


class _Balance:
    """F(q) and F'(q) for the radiation-pressure balance, scaled by omega_m."""

    def __init__(self, params: PhysicalParams, g0_r, g0_l, cl, cr):
        w = params.omega_m
        self.kl = params.kappa_l / w
        self.kr = params.kappa_r / w
        self.dl0 = params.detuning_l / w
        self.dr0 = params.detuning_r / w
        self.g0l = g0_l / w
        self.g0r = g0_r / w
        self.cl = cl / w**2
        self.cr = cr / w**2

    def value(self, q, scale=1.0):
        dl = self.kl**2 + (self.dl0 - self.g0l * q) ** 2
        dr = self.kr**2 + (self.dr0 + self.g0r * q) ** 2
        return scale * (self.cl / dl - self.cr / dr)

    def slope(self, q, scale=1.0):
        ul = self.dl0 - self.g0l * q
        ur = self.dr0 + self.g0r * q
        dl = self.kl**2 + ul**2
        dr = self.kr**2 + ur**2
        ddl = -2.0 * self.g0l * ul
        ddr = 2.0 * self.g0r * ur
        return scale * (-self.cl * ddl / dl**2 + self.cr * ddr / dr**2)

    def poly(self, scale=1.0):
        return _displacement_poly(
            self.kl, self.dl0, self.g0l, self.kr, self.dr0, self.g0r,
            scale * self.cl, scale * self.cr,
        )


def fixed_point(params: PhysicalParams) -> DerivedParams:
    """Solve the static displacement for bare detunings, then derive.

    Follows the solution branch continuously connected to the undriven
    mirror (q = 0 at zero power) while the drives ramp up, polishes it
    with Newton iteration, and warns (listing every real root) if more
    than one statically stable branch coexists.  Effective-detuning
    inputs pass through unchanged: the detunings already include the
    shift, so there is nothing to solve.
    """
    if params.detuning_mode == "effective":
        # Detunings already include the shift; nothing to solve.
        return derive(params)

    g0_r = single_photon_coupling(params, params.wavelength_r)
    g0_l = single_photon_coupling(params, params.wavelength_l)
    eps_r = drive_amplitude(params.power_r, params.kappa_r, params.wavelength_r)
    eps_l = drive_amplitude(params.power_l, params.kappa_l, params.wavelength_l)
    cl = g0_l * eps_l**2 / params.omega_m
    cr = g0_r * eps_r**2 / params.omega_m

    bal = _Balance(params, g0_r, g0_l, cl, cr)

    if cl == 0.0 and cr == 0.0:
        q_star = 0.0
    else:
        # Ramp the powers from zero and track the branch through q = 0.
        q_star = 0.0
        for step in range(1, _RAMP_STEPS + 1):
            scale = step / _RAMP_STEPS
            roots = _real_roots(bal.poly(scale))
            if roots.size == 0:
                raise ConvergenceError(
                    "static displacement: no real root during power ramp",
                    residual=scale,
                )
            q_star = roots[int(np.argmin(np.abs(roots - q_star)))]
        # Newton polish on h(q) = q - F(q).
        for _ in range(_NEWTON_MAX):
            h = q_star - bal.value(q_star)
            hp = 1.0 - bal.slope(q_star)
            if hp == 0.0:
                break
            step = h / hp
            q_star -= step
            if abs(step) <= _NEWTON_TOL * max(1.0, abs(q_star)):
                break
        residual = abs(q_star - bal.value(q_star))
        if not (residual <= 1e-8 * max(1.0, abs(q_star))):
            raise ConvergenceError(
                f"static displacement did not converge; residual {residual:.3e}",
                residual=residual,
            )

        # Static stability of a balance point: restoring net force, i.e.
        # d/dq [q - F(q)] > 0  <=>  F'(q) < 1.
        all_roots = _real_roots(bal.poly())
        stable = [q for q in all_roots if bal.slope(q) < 1.0]
        if len(stable) > 1:
            warnings.warn(
                MultipleStableRootsWarning(
                    f"{len(stable)} statically stable displacements exist; "
                    "following the branch connected to the undriven mirror",
                    roots=all_roots,
                ),
                stacklevel=2,
            )

    delta_r = params.detuning_r + g0_r * q_star
    delta_l = params.detuning_l - g0_l * q_star
    return _derive_at(params, delta_r, delta_l)


def derive_any(params: PhysicalParams) -> DerivedParams:
    """Dispatch to ``derive`` or ``fixed_point`` based on the detuning mode."""
    if params.detuning_mode == "effective":
        return derive(params)
    return fixed_point(params)
