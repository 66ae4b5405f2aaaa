"""Symplectic spectra, entanglement measures, EPR variance."""

import math
import warnings

import numpy as np
import pytest

from oracles import pt_symplectic_spectrum, symplectic_spectrum, tmsv_block
from optomech_cv import (
    BlockFormWarning,
    ParameterDomainError,
    TwoModeBlock,
    duan_sum,
    log_negativity,
    pt_symplectic,
    reduce_two_mode,
    symplectic_eigs,
)


def random_physical_block(rng):
    """Noisy two-mode squeezed thermal block; physical by construction."""
    r = rng.uniform(0.0, 1.5)
    extra_l = rng.uniform(0.0, 1.0)
    extra_r = rng.uniform(0.0, 1.0)
    # Adding local classical noise to a TMSV keeps the state physical.
    return TwoModeBlock(
        big_l=math.cosh(2 * r) / 2 + extra_l,
        big_r=math.cosh(2 * r) / 2 + extra_r,
        c=math.sinh(2 * r) / 2,
        c_prime=rng.uniform(-0.05, 0.05),
        asymmetry=0.0,
    )


# ---------------------------------------------------------------------------
# symplectic_eigs


def test_symplectic_eigs_vacuum():
    np.testing.assert_allclose(symplectic_eigs(0.5 * np.eye(4)), [0.5, 0.5])


def test_symplectic_eigs_two_thermal_modes():
    v = np.diag([1.7, 1.7, 0.9, 0.9])
    np.testing.assert_allclose(symplectic_eigs(v), [0.9, 1.7], rtol=1e-12)


def test_symplectic_eigs_single_mode_squeezed():
    # Squeezing is a symplectic operation: eigenvalue stays 1/2.
    v = 0.5 * np.diag([math.exp(-1.2), math.exp(1.2)])
    np.testing.assert_allclose(symplectic_eigs(v), [0.5], rtol=1e-12)


def test_symplectic_eigs_shape_validation():
    with pytest.raises(ValueError):
        symplectic_eigs(np.eye(3))


def test_symplectic_eigs_matches_oracle_on_random_blocks():
    rng = np.random.default_rng(3)
    for _ in range(50):
        block = random_physical_block(rng)
        got = symplectic_eigs(block.matrix())
        ref = symplectic_spectrum(block.matrix())
        np.testing.assert_allclose(got, ref, rtol=1e-10)


# ---------------------------------------------------------------------------
# pt_symplectic / log_negativity


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
def test_tmsv_closed_forms(r):
    # For a two-mode squeezed vacuum: zeta = e^{-2r}/2, E_N = 2r, and the
    # state itself is pure (nu = 1/2).
    block = tmsv_block(r)
    pair = pt_symplectic(block)
    # cosh^2 - sinh^2 cancellation in the invariants costs ~1e-8 absolute
    # at r = 2; the acceptance tolerance on E_N is 1e-9 absolute.
    assert pair.zeta == pytest.approx(0.5 * math.exp(-2 * r), abs=1e-10)
    assert pair.nu_minus == pytest.approx(0.5, abs=1e-7)
    assert pair.nu_plus == pytest.approx(0.5, abs=1e-7)
    assert log_negativity(block) == pytest.approx(2.0 * r, abs=1e-9)
    assert duan_sum(block) == pytest.approx(2.0 * math.exp(-2 * r), rel=1e-12)


def test_pt_matches_eigen_oracle_on_random_blocks():
    rng = np.random.default_rng(5)
    for _ in range(50):
        block = random_physical_block(rng)
        pair = pt_symplectic(block)
        ref_state = symplectic_spectrum(block.matrix())
        ref_pt = pt_symplectic_spectrum(block.matrix())
        assert pair.nu_minus == pytest.approx(ref_state[0], rel=1e-9)
        assert pair.nu_plus == pytest.approx(ref_state[1], rel=1e-9)
        assert pair.zeta == pytest.approx(ref_pt[0], rel=1e-9)


def test_separable_states_have_zero_negativity_exactly():
    # Thermal product state: no entanglement; the measure must clamp to 0.0.
    thermal = TwoModeBlock(big_l=1.0, big_r=0.8, c=0.0, c_prime=0.0, asymmetry=0.0)
    assert log_negativity(thermal) == 0.0
    vacuum = TwoModeBlock(big_l=0.5, big_r=0.5, c=0.0, c_prime=0.0, asymmetry=0.0)
    assert log_negativity(vacuum) == 0.0


def test_entanglement_iff_zeta_below_half():
    rng = np.random.default_rng(9)
    for _ in range(60):
        block = random_physical_block(rng)
        zeta = pt_symplectic(block).zeta
        en = log_negativity(block)
        assert (en > 0.0) == (zeta < 0.5)


def test_c_prime_contributes_to_correlations():
    # det C = -(c^2 + c'^2): rotating c into c' must not change zeta.
    a = TwoModeBlock(1.2, 1.2, 0.6, 0.0, 0.0)
    b = TwoModeBlock(1.2, 1.2, 0.0, 0.6, 0.0)
    assert pt_symplectic(a).zeta == pytest.approx(pt_symplectic(b).zeta, rel=1e-12)


def test_pt_rejects_subvacuum_local_variance():
    with pytest.raises(ParameterDomainError, match="vacuum floor"):
        pt_symplectic(TwoModeBlock(0.4, 1.0, 0.0, 0.0, 0.0))


def test_pt_rejects_overcorrelated_block():
    # Correlations too strong for the local variances: not a physical CM.
    with pytest.raises(ParameterDomainError):
        pt_symplectic(TwoModeBlock(0.6, 0.6, 5.0, 0.0, 0.0))


# ---------------------------------------------------------------------------
# duan_sum


def test_duan_sum_formula():
    block = TwoModeBlock(1.1, 0.9, 0.7, 0.2, 0.0)
    assert duan_sum(block) == pytest.approx(2.0 * (1.1 + 0.9 - 1.4), rel=1e-12)


def test_duan_vacuum_boundary():
    assert duan_sum(TwoModeBlock(0.5, 0.5, 0.0, 0.0, 0.0)) == pytest.approx(2.0)


def test_duan_certifies_only_sufficiently_correlated_states():
    # Certification (sum < 2) implies entanglement, but not conversely.
    ent = tmsv_block(1.0)
    assert duan_sum(ent) < 2.0 and log_negativity(ent) > 0.0


# ---------------------------------------------------------------------------
# reduce_two_mode


def test_reduce_round_trips_ideal_matrix():
    block = TwoModeBlock(1.3, 0.8, 0.45, -0.12, 0.0)
    full = np.zeros((6, 6))
    full[0, 0] = full[1, 1] = 3.0  # arbitrary mechanical corner
    full[2:, 2:] = block.matrix()
    got = reduce_two_mode(full)
    assert got.big_l == pytest.approx(block.big_l, rel=1e-14)
    assert got.big_r == pytest.approx(block.big_r, rel=1e-14)
    assert got.c == pytest.approx(block.c, rel=1e-14)
    assert got.c_prime == pytest.approx(block.c_prime, rel=1e-14)
    assert got.asymmetry == 0.0


def test_reduce_shape_validation():
    with pytest.raises(ValueError):
        reduce_two_mode(np.eye(4))


def test_reduce_records_asymmetry_and_warns_when_large():
    base = TwoModeBlock(1.0, 1.0, 0.3, 0.0, 0.0)
    full = np.zeros((6, 6))
    full[2:, 2:] = base.matrix()
    # Perturb a diagonal pair asymmetrically by 20% of the local variance.
    full[2, 2] += 0.2
    full[3, 3] -= 0.2
    with pytest.warns(BlockFormWarning):
        got = reduce_two_mode(full)
    assert got.asymmetry == pytest.approx(0.2, rel=1e-12)
    # The averaged local variance is unchanged.
    assert got.big_l == pytest.approx(1.0, rel=1e-12)


def test_reduce_small_asymmetry_silent():
    base = TwoModeBlock(1.0, 1.0, 0.3, 0.0, 0.0)
    full = np.zeros((6, 6))
    full[2:, 2:] = base.matrix()
    full[2, 2] += 0.01
    full[3, 3] -= 0.01
    with warnings.catch_warnings():
        warnings.simplefilter("error", BlockFormWarning)
        got = reduce_two_mode(full)
    assert got.asymmetry == pytest.approx(0.01, rel=1e-9)
