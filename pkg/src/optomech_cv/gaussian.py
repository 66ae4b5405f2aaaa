"""Two-mode Gaussian state analysis for the filtered output fields.

The stationary output covariance matrix restricted to the two filtered
optical modes is, to good accuracy, of the standard two-parameter form

    [[ L, 0, -c, c'], [0, L, c', c], [-c, c', R, 0], [c', c, 0, R]]

(vacuum variance 1/2).  ``reduce_two_mode`` extracts (L, R, c, c') from a
full 6x6 covariance matrix and records how far the raw block deviates
from that form; the remaining functions quantify entanglement of the
idealized block.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BlockFormWarning, ParameterDomainError

# Tolerance for "looks like vacuum physics": symplectic eigenvalues may
# undershoot 1/2 by this much before a block is rejected as nonphysical.
PHYSICALITY_SLACK = 1e-6

# Relative deviation of the raw optical block from the ideal form above
# which reduce_two_mode warns.
_ASYMMETRY_WARN_FRACTION = 0.05


@dataclass(frozen=True)
class TwoModeBlock:
    """Idealized two-mode covariance data.

    big_l, big_r  local variances of the left/right filtered modes
    c, c_prime    amplitude and cross quadrature correlations
    asymmetry     max absolute deviation of the raw 4x4 block from the
                  idealized form (diagnostic; 0 would be a perfect fit)
    """

    big_l: float
    big_r: float
    c: float
    c_prime: float
    asymmetry: float

    def matrix(self) -> np.ndarray:
        """The idealized 4x4 covariance matrix, ordering (x_l, y_l, x_r, y_r)."""
        l, r, c, cp = self.big_l, self.big_r, self.c, self.c_prime
        return np.array(
            [
                [l, 0.0, -c, cp],
                [0.0, l, cp, c],
                [-c, cp, r, 0.0],
                [cp, c, 0.0, r],
            ]
        )


@dataclass(frozen=True)
class SymplecticPair:
    """Symplectic spectrum of a two-mode block.

    nu_minus, nu_plus  symplectic eigenvalues of the block itself
                       (physical states have nu_minus >= 1/2)
    zeta               smaller symplectic eigenvalue after partial
                       transposition; zeta < 1/2 signals entanglement
    """

    nu_minus: float
    nu_plus: float
    zeta: float


def _as_matrix(cm) -> np.ndarray:
    matrix = getattr(cm, "matrix", cm)
    if callable(matrix):  # TwoModeBlock.matrix is a method
        matrix = matrix()
    return np.asarray(matrix, dtype=float)


def symplectic_eigs(cm) -> np.ndarray:
    """Symplectic eigenvalues of a 2n x 2n covariance matrix, ascending.

    Computed as the positive spectrum of i * Omega * V with Omega the
    (x1, y1, x2, y2, ...)-ordered symplectic form.
    """
    v = _as_matrix(cm)
    n2 = v.shape[0]
    if v.shape != (n2, n2) or n2 % 2:
        raise ValueError(f"covariance matrix must be 2n x 2n, got {v.shape}")
    omega = np.zeros((n2, n2))
    for j in range(0, n2, 2):
        omega[j, j + 1] = 1.0
        omega[j + 1, j] = -1.0
    eigs = np.linalg.eigvals(1j * omega @ v)
    # The spectrum is {+nu_k, -nu_k}: after abs+sort each nu appears as an
    # adjacent pair, so take one representative per pair.
    return np.sort(np.abs(eigs))[::2]


def reduce_two_mode(cm) -> TwoModeBlock:
    """Extract the idealized two-mode parameters from a 6x6 output CM.

    Accepts an OutputCM or a plain 6x6 array (mechanics in rows 0:2).
    Warns with BlockFormWarning when the raw optical block deviates from
    the idealized form by more than a few percent of the local variances.
    """
    v = _as_matrix(cm)
    if v.shape != (6, 6):
        raise ValueError(f"expected a 6x6 covariance matrix, got {v.shape}")
    big_l = float(0.5 * (v[2, 2] + v[3, 3]))
    big_r = float(0.5 * (v[4, 4] + v[5, 5]))
    c = float(0.5 * (v[3, 5] - v[2, 4]))
    c_prime = float(0.5 * (v[2, 5] + v[3, 4]))
    ideal = TwoModeBlock(big_l, big_r, c, c_prime, 0.0).matrix()
    asymmetry = float(np.max(np.abs(v[2:, 2:] - ideal)))
    block = TwoModeBlock(big_l, big_r, c, c_prime, asymmetry)
    if asymmetry > _ASYMMETRY_WARN_FRACTION * max(block.big_l, block.big_r):
        warnings.warn(
            BlockFormWarning(
                f"optical block deviates from the ideal two-mode form by "
                f"{asymmetry:.3e} (local variances {block.big_l:.3e}, "
                f"{block.big_r:.3e}); derived entanglement figures describe "
                "the idealized block only"
            ),
            stacklevel=2,
        )
    return block


def _invariants(block: TwoModeBlock):
    l, r = block.big_l, block.big_r
    det_c = -(block.c**2 + block.c_prime**2)
    det_v = float(np.linalg.det(block.matrix()))
    return l, r, det_c, det_v


def pt_symplectic(block: TwoModeBlock) -> SymplecticPair:
    """Symplectic eigenvalues of the block and of its partial transpose.

    Uses the closed-form two-mode invariants.  Raises
    ParameterDomainError if the block is not a valid (near-)physical
    covariance matrix.
    """
    l, r, det_c, det_v = _invariants(block)
    if l < 0.5 - PHYSICALITY_SLACK or r < 0.5 - PHYSICALITY_SLACK:
        raise ParameterDomainError(
            f"local variances ({l!r}, {r!r}) below the vacuum floor 1/2"
        )

    def _pair(lam):
        disc = lam * lam - 4.0 * det_v
        if disc < -1e-9 * max(lam * lam, 1.0):
            raise ParameterDomainError(
                f"symplectic invariant discriminant negative ({disc!r}); "
                "block is not a physical covariance matrix"
            )
        root = np.sqrt(max(disc, 0.0))
        lo = np.sqrt(max(0.5 * (lam - root), 0.0))
        hi = np.sqrt(max(0.5 * (lam + root), 0.0))
        return float(lo), float(hi)

    nu_minus, nu_plus = _pair(l * l + r * r + 2.0 * det_c)
    if nu_minus < 0.5 - PHYSICALITY_SLACK:
        raise ParameterDomainError(
            f"smallest symplectic eigenvalue {nu_minus!r} below the vacuum "
            "floor 1/2; block is not a physical covariance matrix"
        )
    zeta, _ = _pair(l * l + r * r - 2.0 * det_c)
    return SymplecticPair(nu_minus=nu_minus, nu_plus=nu_plus, zeta=zeta)


def log_negativity(block: TwoModeBlock) -> float:
    """Logarithmic negativity ln-based: max(0, -ln(2 zeta)); 0 if separable."""
    zeta = pt_symplectic(block).zeta
    if 2.0 * zeta >= 1.0:
        return 0.0
    return float(-np.log(2.0 * zeta))


def duan_sum(block: TwoModeBlock) -> float:
    """Total EPR variance Var(x_l + x_r) + Var(y_l - y_r) = 2(L + R - 2c).

    Values below 2 certify entanglement of the idealized block (vacuum
    variance 1/2 convention).
    """
    return 2.0 * (block.big_l + block.big_r - 2.0 * block.c)
