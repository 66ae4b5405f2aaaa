"""Parameter sweeps over the full pipeline with stability masking.

Each grid point runs derive -> build -> stability -> output_cm ->
reduce_two_mode -> observable.  Points where the drift matrix is not
Hurwitz are masked (NaN observable, ``stable`` False) rather than raised.
Evaluation may be parallelized across processes; every point is a pure
function of its parameters, and results are reassembled in grid order,
so the output is independent of the worker count.
"""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .densecoding import rate_om
from .dynamics import build, stability
from .errors import ConfigError
from .gaussian import duan_sum, log_negativity, reduce_two_mode
from .params import PhysicalParams, derive_any
from .spectral import filters_from, output_cm

WORKERS_ENV_VAR = "OPTOMECH_CV_WORKERS"

OBSERVABLES = ("LogNegativity", "DenseCodingRate", "DuanSum", "StabilityMargin")

# Accepted spellings for sweep axis paths: every numeric PhysicalParams
# field, plus filter-centric aliases.
_NUMERIC_FIELDS = tuple(
    f.name
    for f in dataclasses.fields(PhysicalParams)
    if f.name != "detuning_mode"
)
_PATH_ALIASES = {
    "filter_l.tau": "filter_tau_l",
    "filter_l.omega_c": "filter_omega_l",
    "filter_r.tau": "filter_tau_r",
    "filter_r.omega_c": "filter_omega_r",
}


def resolve_path(path: str) -> str:
    """Map a sweep axis path to a PhysicalParams field name."""
    name = _PATH_ALIASES.get(path, path)
    if name not in _NUMERIC_FIELDS:
        raise ConfigError(
            f"unknown sweep parameter path {path!r}; valid paths are "
            f"{', '.join(_NUMERIC_FIELDS)} and aliases "
            f"{', '.join(sorted(_PATH_ALIASES))}"
        )
    return name


@dataclass(frozen=True)
class Axis:
    """One sweep axis: ``points`` linearly spaced values of ``path``."""

    path: str
    lo: float
    hi: float
    points: int

    def validate(self):
        resolve_path(self.path)
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConfigError(f"axis {self.path}: range must be finite")
        if not self.lo < self.hi:
            raise ConfigError(
                f"axis {self.path}: need lo < hi, got [{self.lo!r}, {self.hi!r}]"
            )
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError(f"axis {self.path}: points must be an integer >= 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.points))


@dataclass(frozen=True)
class SweepSpec:
    """A 1D or 2D sweep request.

    observable        one of OBSERVABLES
    observable_nbar   photon budget, required for DenseCodingRate
    preset            optional figure id this spec was derived from
    """

    axis1: Axis
    axis2: Optional[Axis] = None
    observable: str = "LogNegativity"
    observable_nbar: Optional[float] = None
    preset: Optional[str] = None

    def validate(self, base: PhysicalParams):
        self.axis1.validate()
        if self.axis2 is not None:
            self.axis2.validate()
            if resolve_path(self.axis1.path) == resolve_path(self.axis2.path):
                raise ConfigError("axis1 and axis2 sweep the same parameter")
        if self.observable not in OBSERVABLES:
            raise ConfigError(
                f"unknown observable {self.observable!r}; "
                f"valid: {', '.join(OBSERVABLES)}"
            )
        if self.observable == "DenseCodingRate":
            if self.observable_nbar is None or not (self.observable_nbar >= 0.0):
                raise ConfigError(
                    "DenseCodingRate requires observable_nbar >= 0"
                )
        # Materialize every grid point up front so bad parameter values
        # fail before any (possibly parallel) evaluation starts.
        for _, params in grid_tasks(self, base):
            _ = params


@dataclass(frozen=True)
class SweepResult:
    """Gridded observable values with stability masking.

    values      observable; NaN exactly where ``stable`` is False (and,
                for DenseCodingRate only, where ``feasible`` is False)
    stable      True where the drift matrix is Hurwitz
    quad_error  per-point max entrywise quadrature error estimate; NaN
                where no frequency integral was computed
    feasible    DenseCodingRate only: True where the photon budget meets
                the rate floor; None for other observables
    """

    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: Optional[np.ndarray]
    values: np.ndarray
    stable: np.ndarray
    quad_error: np.ndarray
    feasible: Optional[np.ndarray]


def grid_tasks(spec: SweepSpec, base: PhysicalParams):
    """Yield (flat_index, params) for every grid point, row-major."""
    path1 = resolve_path(spec.axis1.path)
    v1 = spec.axis1.values()
    if spec.axis2 is None:
        for i, x in enumerate(v1):
            try:
                yield i, base.replace(**{path1: float(x)})
            except ValueError as exc:
                raise ConfigError(f"grid point {path1}={x!r}: {exc}") from exc
    else:
        path2 = resolve_path(spec.axis2.path)
        v2 = spec.axis2.values()
        for i, x in enumerate(v1):
            for j, y in enumerate(v2):
                try:
                    yield i * v2.size + j, base.replace(
                        **{path1: float(x), path2: float(y)}
                    )
                except ValueError as exc:
                    raise ConfigError(
                        f"grid point {path1}={x!r}, {path2}={y!r}: {exc}"
                    ) from exc


def _eval_point(task):
    """Evaluate one grid point; returns (index, value, stable, qerr, feasible)."""
    index, params, observable, nbar = task
    derived = derive_any(params)
    model = build(derived)
    report = stability(model)
    if not report.stable:
        return index, math.nan, False, math.nan, False
    if observable == "StabilityMargin":
        return index, report.margin, True, math.nan, True
    cm = output_cm(model, filters_from(params))
    block = reduce_two_mode(cm)
    if observable == "LogNegativity":
        return index, log_negativity(block), True, cm.quad_error, True
    if observable == "DuanSum":
        return index, duan_sum(block), True, cm.quad_error, True
    # DenseCodingRate
    if nbar < block.big_l - 0.5:
        return index, math.nan, True, cm.quad_error, False
    return index, rate_om(block, nbar), True, cm.quad_error, True


def resolve_workers(explicit=None) -> int:
    """Worker count: env OPTOMECH_CV_WORKERS overrides, then the explicit
    argument, then min(8, cpu count)."""
    env = os.environ.get(WORKERS_ENV_VAR)
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(
                f"{WORKERS_ENV_VAR}={env!r} is not an integer"
            ) from exc
        if n < 1:
            raise ConfigError(f"{WORKERS_ENV_VAR} must be >= 1, got {n}")
        return n
    if explicit is not None:
        if explicit < 1:
            raise ConfigError(f"workers must be >= 1, got {explicit}")
        return int(explicit)
    return min(8, os.cpu_count() or 1)


def run_sweep(spec: SweepSpec, base: PhysicalParams, workers=None) -> SweepResult:
    """Evaluate the sweep grid; see the module docstring for semantics."""
    spec.validate(base)
    tasks = [
        (index, params, spec.observable, spec.observable_nbar)
        for index, params in grid_tasks(spec, base)
    ]
    n_workers = resolve_workers(workers)
    if n_workers == 1 or len(tasks) == 1:
        outcomes = [_eval_point(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * n_workers))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(_eval_point, tasks, chunksize=chunk))

    v1 = spec.axis1.values()
    shape = (v1.size,) if spec.axis2 is None else (v1.size, spec.axis2.points)
    values = np.full(shape, np.nan)
    stable = np.zeros(shape, dtype=bool)
    qerr = np.full(shape, np.nan)
    feasible = np.ones(shape, dtype=bool)
    flat_val = values.reshape(-1)
    flat_stable = stable.reshape(-1)
    flat_qerr = qerr.reshape(-1)
    flat_feasible = feasible.reshape(-1)
    for index, value, is_stable, q, feas in outcomes:
        flat_val[index] = value
        flat_stable[index] = is_stable
        flat_qerr[index] = q
        flat_feasible[index] = feas
    return SweepResult(
        spec=spec,
        axis1_values=v1,
        axis2_values=None if spec.axis2 is None else spec.axis2.values(),
        values=values,
        stable=stable,
        quad_error=qerr,
        feasible=feasible if spec.observable == "DenseCodingRate" else None,
    )
