"""Linearized fluctuation dynamics of the two-cavity system.

State ordering (all deviations from the steady state):

    u = [q, p, x_l, y_l, x_r, y_r]

with the mechanical position/momentum first, then amplitude/phase
quadratures of the left and right cavity modes.  The evolution is
du/dt = A u + noise with white input noise of covariance D (symmetrized),
and the traveling output quadratures are read off through the standard
input-output relation encoded in ``out_coupling``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, UnstableModelError
from .params import DerivedParams

N_STATE = 6


@dataclass(frozen=True)
class LinearModel:
    """Drift, diffusion, and output-coupling data for the linear model.

    drift         6x6 real matrix A
    diffusion     length-6 diagonal of the (diagonal) noise covariance D
    out_coupling  length-6 diagonal P accounting for the input noise that
                  reflects directly into the traveling output; mechanical
                  entries zero, optical entries +1/(2 kappa_i).  The output
                  spectrum is built from (M(w) + P) with M = (iwI + A)^-1.
    derived       coefficient set the model was built from
    """

    drift: np.ndarray
    diffusion: np.ndarray
    out_coupling: np.ndarray
    derived: DerivedParams = field(repr=False)

    def text_dump(self) -> str:
        """Human-readable rendering of the matrices (for the CLI)."""
        with np.printoptions(precision=6, suppress=False, linewidth=120):
            return (
                "drift A [rad/s]:\n"
                + str(self.drift)
                + "\n\ndiffusion diag(D) [rad/s]:\n"
                + str(self.diffusion)
                + "\n\nout_coupling diag(P) [s/rad]:\n"
                + str(self.out_coupling)
            )


@dataclass(frozen=True)
class StabilityReport:
    """Result of the spectral stability test.

    stable  True iff every drift eigenvalue has negative real part
    margin  max real part over the eigenvalues [rad/s]; negative if stable
    """

    stable: bool
    margin: float


def build(derived: DerivedParams) -> LinearModel:
    """Assemble the linear model from derived coefficients.

    Mechanical rows: harmonic motion at omega_m damped at gamma_m, driven
    by both intracavity amplitude quadratures through the effective
    couplings.  Optical rows: detuned decaying modes whose phase
    quadratures pick up the mirror position.
    """
    if not isinstance(derived, DerivedParams):
        raise TypeError(
            "build() expects DerivedParams; run derive() or fixed_point() first"
        )
    w = derived.physical.omega_m
    gm = derived.gamma_m
    kl = derived.physical.kappa_l
    kr = derived.physical.kappa_r
    dl = derived.delta_l
    dr = derived.delta_r
    gl = derived.geff_l
    gr = derived.geff_r

    a = np.array(
        [
            [0.0, w, 0.0, 0.0, 0.0, 0.0],
            [-w, -gm, gl, 0.0, gr, 0.0],
            [0.0, 0.0, -kl, dl, 0.0, 0.0],
            [gl, 0.0, -dl, -kl, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -kr, dr],
            [gr, 0.0, 0.0, 0.0, -dr, -kr],
        ]
    )

    nb = derived.nbar_mech
    diffusion = np.array([0.0, gm * (2.0 * nb + 1.0), kl, kl, kr, kr])
    out_coupling = np.array(
        [0.0, 0.0, 0.5 / kl, 0.5 / kl, 0.5 / kr, 0.5 / kr]
    )
    return LinearModel(
        drift=a, diffusion=diffusion, out_coupling=out_coupling, derived=derived
    )


def stability(model: LinearModel) -> StabilityReport:
    """Spectral test: stable iff all eigenvalues of A lie in the open LHP."""
    try:
        eigs = np.linalg.eigvals(model.drift)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise ConvergenceError(f"eigenvalue computation failed: {exc}") from exc
    margin = float(np.max(eigs.real))
    return StabilityReport(stable=bool(margin < 0.0), margin=margin)


def lyapunov_cm(model: LinearModel) -> np.ndarray:
    """Stationary intracavity covariance matrix V solving A V + V A^T = -D.

    Requires a stable drift: for unstable A the algebraic equation may
    still have a solution, but it is not the covariance of any stationary
    state.  Raises ``ConvergenceError`` if the solver's residual is not
    small relative to the diffusion strength (e.g. marginally stable A).
    """
    report = stability(model)
    if not report.stable:
        raise UnstableModelError(
            f"no stationary state: drift spectral margin {report.margin:.6e} >= 0"
        )
    d = np.diag(model.diffusion)
    v = scipy.linalg.solve_continuous_lyapunov(model.drift, -d)
    v = 0.5 * (v + v.T)
    residual = np.max(np.abs(model.drift @ v + v @ model.drift.T + d))
    scale = np.max(np.abs(model.diffusion))
    if not (residual <= 1e-8 * scale):
        raise ConvergenceError(
            f"Lyapunov solve residual {residual:.3e} exceeds 1e-8 * {scale:.3e}",
            residual=residual,
        )
    return v
