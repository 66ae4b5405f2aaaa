"""Adaptive panel integration for matrix-valued spectra.

A 15-point Kronrod rule with embedded 7-point Gauss rule is applied per
panel; the worst panel (largest entrywise |K15 - G7| estimate) is split
until the accumulated error meets the target.  The integrand is called
vectorized on arrays of abscissae and may return any array shape; errors
are tracked per entry.

Refinement order, tie-breaking, and the final summation order are all
deterministic, so results are bit-for-bit reproducible for a given
integrand regardless of how the work is scheduled elsewhere.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod abscissae (positive half) and weights, with the
# embedded 7-point Gauss weights.  Classical values, correctly rounded.
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-node rule on [-1, 1], nodes ascending; Gauss nodes sit at the
# odd indices.
_NODES = np.concatenate([-_XGK[:7], _XGK[::-1]])
_WK = np.concatenate([_WGK[:7], _WGK[::-1]])
_WGAUSS = np.concatenate([_WG[:3], _WG[::-1]])

DEFAULT_ABS_TOL = 1e-8
DEFAULT_REL_TOL = 1e-12
DEFAULT_MAX_PANELS = 4000


def _eval_panels(func, lows, highs):
    """Apply the rule to panels [lows[i], highs[i]] in one integrand call.

    Returns (kronrod, gauss, err) stacked along a leading panel axis.
    """
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    mid = 0.5 * (lows + highs)
    half = 0.5 * (highs - lows)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(func(pts.ravel()))
    vals = vals.reshape(pts.shape + vals.shape[1:])
    # tensordot over the node axis (axis 1)
    kron = np.tensordot(vals, _WK, axes=([1], [0])) * half.reshape(
        (-1,) + (1,) * (vals.ndim - 2)
    )
    gauss = np.tensordot(vals[:, 1::2], _WGAUSS, axes=([1], [0])) * half.reshape(
        (-1,) + (1,) * (vals.ndim - 2)
    )
    err = np.abs(kron - gauss)
    return kron, gauss, err


def integrate_adaptive(
    func,
    breakpoints,
    abs_tol=DEFAULT_ABS_TOL,
    rel_tol=DEFAULT_REL_TOL,
    max_panels=DEFAULT_MAX_PANELS,
):
    """Integrate ``func`` over [breakpoints[0], breakpoints[-1]].

    func         vectorized callable: (m,) abscissae -> (m, ...) values
    breakpoints  ascending initial panel edges; resonances and other
                 features should appear here so the first pass sees them
    abs_tol      target on the max entrywise error estimate
    rel_tol      relative floor: the target is
                 max(abs_tol, rel_tol * max|integral|)
    max_panels   refinement budget; exceeding it raises QuadratureError
                 carrying the achieved error estimate

    Returns (value, err) where err is the per-entry accumulated estimate.
    """
    edges = np.asarray(breakpoints, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("breakpoints must be a 1-D array with >= 2 entries")
    if np.any(np.diff(edges) <= 0.0):
        raise ValueError("breakpoints must be strictly increasing")

    kron, _, err = _eval_panels(func, edges[:-1], edges[1:])
    # (priority, a, b, value, err); heap orders by -priority then position,
    # which keeps refinement deterministic under error-estimate ties.
    panels = []
    total_err = np.zeros_like(err[0])
    total_val = np.zeros_like(kron[0])
    for i in range(edges.size - 1):
        pmax = float(np.max(err[i]))
        heapq.heappush(
            panels, (-pmax, float(edges[i]), float(edges[i + 1]), kron[i], err[i])
        )
        total_err = total_err + err[i]
        total_val = total_val + kron[i]

    n_panels = edges.size - 1
    frozen = []  # panels too narrow to split further
    while True:
        target = max(abs_tol, rel_tol * float(np.max(np.abs(total_val))))
        if float(np.max(total_err)) <= target:
            break
        if not panels:
            raise QuadratureError(
                "all panels at minimum width; error "
                f"{float(np.max(total_err)):.3e} > target {target:.3e}",
                residual=float(np.max(total_err)),
            )
        if n_panels >= max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exhausted; error "
                f"{float(np.max(total_err)):.3e} > target {target:.3e}",
                residual=float(np.max(total_err)),
            )
        _, a, b, old_val, old_err = heapq.heappop(panels)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            # Width at rounding floor: keep as-is, stop refining it.
            frozen.append((0.0, a, b, old_val, old_err))
            continue
        kron2, _, err2 = _eval_panels(func, [a, mid], [mid, b])
        total_err = total_err - old_err + err2[0] + err2[1]
        total_val = total_val - old_val + kron2[0] + kron2[1]
        for j, (lo, hi) in enumerate(((a, mid), (mid, b))):
            pmax = float(np.max(err2[j]))
            heapq.heappush(panels, (-pmax, lo, hi, kron2[j], err2[j]))
        n_panels += 1

    # Deterministic final sum: by panel position, not heap order.
    ordered = sorted(panels + frozen, key=lambda p: (p[1], p[2]))
    value = np.zeros_like(total_err)
    for p in ordered:
        value = value + p[3]
    err_final = np.zeros_like(total_err)
    for p in ordered:
        err_final = err_final + p[4]
    return value, err_final
