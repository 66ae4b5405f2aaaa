"""Dense-coding rate through the entangled output pair, plus reference curves.

Alice modulates the left filtered output beam with Gaussian displacements
of variance V_s per quadrature and sends it to Bob, who combines it with
the right beam on a balanced beamsplitter and homodynes both ports.  The
mean photon number n̄ of the transmitted mode is the energetic budget:
it splits into the source photons carried by the beam itself and the
signal photons Alice adds, n̄ = (L - 1/2) + n̄_s.

All rates are in bits per use; logs are base 2 here (the entanglement
measures elsewhere use natural logs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterDomainError
from .gaussian import TwoModeBlock


@dataclass(frozen=True)
class RatePoint:
    """Dense-coding rate and reference capacities at one photon budget.

    nbar     mean photon number of the transmitted mode
    v_s      Alice's signal variance per quadrature
    i_om     rate through the optomechanical output pair [bits]
    i_d_opt  unconstrained dense-coding capacity [bits]
    i_f      Fock-state encoding capacity [bits]
    i_s      squeezed-state/homodyne capacity [bits]
    i_c_het  coherent-state/heterodyne capacity [bits]
    i_c      coherent-state/homodyne capacity [bits]
    big_l, big_r, c
             the block parameters the rate was computed from (carried
             along for serialization; NaN when i_om is not defined)
    """

    nbar: float
    v_s: float
    i_om: float
    i_d_opt: float
    i_f: float
    i_s: float
    i_c_het: float
    i_c: float
    big_l: float = math.nan
    big_r: float = math.nan
    c: float = math.nan


# Column order for CSV serialization of RatePoint rows.
RATE_CSV_COLUMNS = (
    "nbar",
    "i_om",
    "i_d_opt",
    "i_f",
    "i_s",
    "i_c_het",
    "i_c",
    "v_s",
    "big_l",
    "big_r",
    "c",
)


def bob_variance(block: TwoModeBlock, v_s: float) -> float:
    """Variance of Bob's two homodyne outcomes, V_B = (L + R - 2c + V_s)/2.

    The x-sum and y-difference ports have equal variance by the EPR sign
    structure of the block; c' drops out of both.
    """
    if not (v_s >= 0.5):
        raise ParameterDomainError(f"signal variance must be >= 1/2, got {v_s!r}")
    return 0.5 * (block.big_l + block.big_r - 2.0 * block.c + v_s)


def conditional_variance(v_s: float, v_b: float) -> float:
    """Alice's signal variance conditioned on Bob's outcome.

    V_{A|B} = V_s - V_s^2 / (2 V_B); requires 2 v_b >= v_s > 0 (otherwise
    the Gaussian conditioning would be negative).
    """
    if not (v_s > 0.0):
        raise ParameterDomainError(f"signal variance must be > 0, got {v_s!r}")
    if 2.0 * v_b < v_s:
        raise ParameterDomainError(
            f"2*v_b = {2.0 * v_b!r} < v_s = {v_s!r}: inconsistent variances"
        )
    return v_s - v_s * v_s / (2.0 * v_b)


def rate_om(block: TwoModeBlock, nbar: float) -> float:
    """Dense-coding rate of the output pair at photon budget nbar, in bits.

    The budget fixes the signal variance through V_s = (nbar + 1) - L,
    and the Gaussian mutual information of Alice's displacements and
    Bob's homodyne pair evaluates to

        I = log2(1 + V_s / (L + R - 2c)).

    The denominator is the total EPR variance per port: stronger
    correlations (larger c) increase the rate.
    """
    floor = block.big_l - 0.5
    if nbar < floor:
        raise ParameterDomainError(
            f"nbar = {nbar!r} below the minimum usable photon number "
            f"{floor!r} (= big_l - 1/2, the source photons of the beam)"
        )
    v_s = (nbar + 1.0) - block.big_l
    denom = block.big_l + block.big_r - 2.0 * block.c
    if not (denom > 0.0):
        raise ParameterDomainError(
            f"EPR variance L + R - 2c = {denom!r} must be positive"
        )
    return math.log2(1.0 + v_s / denom)


@dataclass(frozen=True)
class Capacities:
    """The five reference rates at one photon budget, in bits."""

    i_d_opt: float
    i_f: float
    i_s: float
    i_c_het: float
    i_c: float


def capacities(nbar: float) -> Capacities:
    """Reference capacities under the same mean photon constraint.

    i_d_opt  log2(1 + n̄ + n̄²)   dense-coding capacity
    i_f      (1+n̄)log2(1+n̄) - n̄ log2 n̄   Fock encoding (0 at n̄ = 0)
    i_s      log2(1 + 2n̄)        squeezed states + homodyne
    i_c_het  log2(1 + n̄)         coherent states + heterodyne
    i_c      log2 sqrt(1 + 4n̄)   coherent states + homodyne
    """
    if not (nbar >= 0.0) or not math.isfinite(nbar):
        raise ParameterDomainError(f"nbar must be finite and >= 0, got {nbar!r}")
    if nbar == 0.0:
        i_f = 0.0
    else:
        i_f = (1.0 + nbar) * math.log2(1.0 + nbar) - nbar * math.log2(nbar)
    return Capacities(
        i_d_opt=math.log2(1.0 + nbar + nbar * nbar),
        i_f=i_f,
        i_s=math.log2(1.0 + 2.0 * nbar),
        i_c_het=math.log2(1.0 + nbar),
        i_c=math.log2(math.sqrt(1.0 + 4.0 * nbar)),
    )


def rate_point(block: TwoModeBlock, nbar: float) -> RatePoint:
    """Assemble a full RatePoint; i_om and v_s are NaN below the floor."""
    caps = capacities(nbar)
    floor = block.big_l - 0.5
    if nbar < floor:
        i_om = math.nan
        v_s = math.nan
    else:
        i_om = rate_om(block, nbar)
        v_s = (nbar + 1.0) - block.big_l
    return RatePoint(
        nbar=nbar,
        v_s=v_s,
        i_om=i_om,
        i_d_opt=caps.i_d_opt,
        i_f=caps.i_f,
        i_s=caps.i_s,
        i_c_het=caps.i_c_het,
        i_c=caps.i_c,
        big_l=block.big_l,
        big_r=block.big_r,
        c=block.c,
    )
