"""Frozen sign/normalization conventions, recorded in every manifest.

Changing any entry silently changes numerical results; the calibration
tests pin them (vacuum block, thermal mechanics, flat undriven output
spectrum), so an accidental edit fails loudly.
"""

from scipy.constants import c as _c
from scipy.constants import hbar as _hbar
from scipy.constants import k as _kb

CONVENTIONS = {
    "quadrature_x": "(a + a*)/sqrt(2); vacuum variance 1/2",
    "vacuum_variance": 0.5,
    "detuning_sign": "cavity frequency minus drive frequency",
    "kappa_meaning": "amplitude (HWHM) decay rate, rad/s",
    "mech_diffusion": "gamma_m * (2*nbar_mech + 1) on the momentum entry",
    "optical_diffusion": "kappa_i on each optical quadrature entry",
    "out_coupling": "+1/(2*kappa_i) direct-reflection term",
    "spectral_measure": "d omega / (2*pi), integrated over the full line",
    "filter_kernel": "sqrt(2/tau) * theta(t) * exp(-(1/tau + i*omega_c)*t)",
    "filter_ft_sign": "integral g(t) exp(+i*omega*t) dt",
    "entanglement_log": "natural (E_N = max(0, -ln 2 zeta))",
    "rate_log": "base 2 (bits)",
    "hbar_SI": _hbar,
    "kb_SI": _kb,
    "c_SI": _c,
}
