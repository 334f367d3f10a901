"""Experiment drivers behind the CLI subcommands.

Each command integrates a grid of (method, stepsize) cells on one preset and
writes plot-ready CSV (or JSON for single runs).  Cells are independent and
may run on a thread pool capped by ``OSCINT_THREADS``; output is always
assembled in the declared cell order, never completion order, so results are
reproducible byte for byte.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..diagnostics import (
    DiagnosticRecorder,
    DiagnosticSample,
    stepsize_admissible,
)
from ..integrators import Method, integrate, reference_solution
from ..model import DerivedConstants, Problem, derive_constants
from ..problems import PRESETS, make_preset
from .io import fmt, log10_or_neg_inf, write_csv, write_json_records

#: refinement tolerance for the reference solution of the convergence study;
#: the reference error (~tol/3) sits well below the smallest error any of
#: the measured stepsizes reaches.
REFERENCE_TOL = 1e-7


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    methods: tuple[Method, ...]
    eps: float
    h_list: tuple[float, ...]
    t_end: float
    sample_stride: int
    output_path: Path
    output_format: str = "csv"

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {self.preset!r}; choose one of {sorted(PRESETS)}"
            )
        if not self.methods:
            raise ConfigError("at least one method is required")
        if not self.h_list:
            raise ConfigError("at least one stepsize is required")
        if any(h <= 0.0 for h in self.h_list):
            raise ConfigError(f"stepsizes must be positive, got {self.h_list}")
        if self.t_end <= 0.0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.sample_stride < 1:
            raise ConfigError(f"sample stride must be >= 1, got {self.sample_stride}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.output_format}")
        for h in self.h_list:
            steps_for(h, self.t_end)


def steps_for(h: float, t_end: float) -> int:
    """Integer step count n with n*h = t_end to within a few ulp."""
    n = round(t_end / h)
    if n < 1 or abs(n * h - t_end) > 4.0 * math.ulp(t_end):
        raise ConfigError(
            f"stepsize {h!r} does not divide t_end {t_end!r} into whole steps"
        )
    return n


def make_problem(config: ExperimentConfig) -> Problem:
    try:
        return make_preset(config.preset, config.eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def worker_count() -> int:
    env = os.environ.get("OSCINT_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"OSCINT_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise ConfigError(f"OSCINT_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def _map_cells(fn, cells):
    workers = min(worker_count(), len(cells))
    if workers <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


@dataclass
class CellResult:
    method: Method
    h: float
    samples: list[DiagnosticSample]
    sample_steps: list[int]
    abort_step: int | None = None

    @property
    def aborted(self) -> bool:
        return self.abort_step is not None


def _warn_if_inadmissible(problem: Problem, method: Method, h: float) -> None:
    constants = derive_constants(problem)
    if method is not Method.ERKN:
        # the baselines' admissibility bound is the zero-frequency limit
        constants = DerivedConstants(omega0=constants.omega0, upsilon=0.0)
    if not stepsize_admissible(problem, constants, h, problem.initial.q1, 1):
        print(
            f"warning: h={fmt(h)} fails the N=1 stepsize bound for"
            f" {method.value} on this problem",
            file=sys.stderr,
        )


def _run_cell(problem: Problem, method: Method, h: float, t_end: float,
              stride: int) -> CellResult:
    from ..integrators import StepDiverged

    recorder = DiagnosticRecorder(problem, method, h)
    n_steps = steps_for(h, t_end)
    abort_step = None
    try:
        integrate(problem, method, h, n_steps, observer_stride=stride,
                  observer=recorder)
    except StepDiverged as exc:
        abort_step = exc.step_index
    return CellResult(method, h, recorder.samples, recorder.sample_steps, abort_step)


def _cell_label(method: Method, h: float) -> str:
    return f"{method.value}_h{fmt(h)}"


# --- conserve: long-time drift of the modified invariants ---------------------

def run_conserve(config: ExperimentConfig) -> int:
    """Per-cell drift series plus two summary tables of log10 drifts at the
    nine interior tenths of [0, t_end].  Returns the number of aborted cells.
    """
    problem = make_problem(config)
    cells = [(m, h) for m in config.methods for h in config.h_list]
    for method, h in cells:
        _warn_if_inadmissible(problem, method, h)
    results = _map_cells(
        lambda cell: _run_cell(problem, cell[0], cell[1], config.t_end,
                               config.sample_stride),
        cells,
    )

    out_dir = Path(config.output_path)
    for res in results:
        flag = "1" if res.aborted else "0"
        rows = [
            [
                fmt(s.t),
                fmt(s.err_Imod),
                fmt(s.err_Hmod),
                fmt(log10_or_neg_inf(s.err_Imod)),
                fmt(log10_or_neg_inf(s.err_Hmod)),
                flag,
            ]
            for s in res.samples
        ]
        write_csv(
            out_dir / f"series_{_cell_label(res.method, res.h)}.csv",
            ["t", "err_Imod", "err_Hmod", "log10_err_Imod", "log10_err_Hmod",
             "aborted"],
            rows,
        )

    table_times = [k * config.t_end / 10.0 for k in range(1, 10)]
    for kind, pick in (("Imod", lambda s: s.err_Imod), ("Hmod", lambda s: s.err_Hmod)):
        header = ["t"] + [
            f"{res.method.value} h={fmt(res.h)}" for res in results
        ]
        rows = []
        for t in table_times:
            row = [fmt(t)]
            for res in results:
                sample = _sample_nearest(res, t)
                row.append(
                    fmt(log10_or_neg_inf(pick(sample)))
                    if sample is not None
                    else "nan"
                )
            rows.append(row)
        write_csv(out_dir / f"table_{kind}.csv", header, rows)
    return sum(1 for res in results if res.aborted)


def _sample_nearest(res: CellResult, t: float) -> DiagnosticSample | None:
    if not res.samples:
        return None
    target = round(t / res.h)
    best = min(range(len(res.sample_steps)),
               key=lambda i: abs(res.sample_steps[i] - target))
    return res.samples[best]


# --- converge: work-precision data against a reference solution ---------------

#: reference end states memoized per (preset, eps, t_end); the refinement is
#: deterministic, so caching cannot change any output, only skip a recompute.
_reference_cache: dict = {}


def _reference_end_state(config: ExperimentConfig, problem: Problem):
    key = (config.preset, config.eps, config.t_end, REFERENCE_TOL)
    if key not in _reference_cache:
        _reference_cache[key] = reference_solution(
            problem, config.t_end, REFERENCE_TOL
        )([config.t_end])[0]
    return _reference_cache[key]


def run_converge(config: ExperimentConfig) -> None:
    """Global error at t_end and force-evaluation counts per (method, h).

    Leapfrog costs two evaluations per step in the restartable form used
    here; the fused count (one per step plus one) is reported alongside.
    """
    problem = make_problem(config)
    ref_state = _reference_end_state(config, problem)

    def one(cell):
        method, h = cell
        n_steps = steps_for(h, config.t_end)
        traj = integrate(problem, method, h, n_steps, observer_stride=n_steps)
        final = traj.states[-1]
        err = max(
            float(abs(a - b).max())
            for a, b in (
                (final.q1, ref_state.q1),
                (final.q2, ref_state.q2),
                (final.p1, ref_state.p1),
                (final.p2, ref_state.p2),
            )
        )
        if method is Method.SV:
            evals, fused = 2 * n_steps, n_steps + 1
        else:
            evals = fused = n_steps
        return [
            method.value,
            fmt(h),
            str(n_steps),
            str(evals),
            str(fused),
            fmt(math.log10(evals)),
            fmt(math.log10(fused)),
            fmt(err),
            fmt(log10_or_neg_inf(err)),
        ]

    cells = [(m, h) for m in config.methods for h in config.h_list]
    rows = _map_cells(one, cells)
    write_csv(
        config.output_path,
        ["method", "h", "n_steps", "evals", "evals_fused", "log10_evals",
         "log10_evals_fused", "err", "log10_err"],
        rows,
    )


# --- drift: max energy error over nested horizons ------------------------------

def drift_horizons(t_end: float) -> list[float]:
    """Powers of ten up to t_end, plus t_end itself if it is not one."""
    out = []
    k = 0
    while 10.0 ** k <= t_end * (1.0 + 1e-12):
        out.append(10.0 ** k)
        k += 1
    if not out or out[-1] != t_end:
        out.append(t_end)
    return out


def run_drift(config: ExperimentConfig) -> None:
    """Max |H(t) - H(0)| over nested windows [0, T] for each horizon T.

    A single trajectory per (method, h) serves every horizon: the prefix of
    a fixed-stepsize run is the shorter run.
    """
    problem = make_problem(config)
    horizons = drift_horizons(config.t_end)
    cells = [(m, h) for m in config.methods for h in config.h_list]
    results = _map_cells(
        lambda cell: _run_cell(problem, cell[0], cell[1], config.t_end,
                               config.sample_stride),
        cells,
    )

    rows = []
    for res in results:
        h0 = res.samples[0].H
        running = 0.0
        idx = 0
        for horizon in horizons:
            while idx < len(res.samples) and res.samples[idx].t <= horizon * (
                1.0 + 1e-12
            ):
                running = max(running, abs(res.samples[idx].H - h0))
                idx += 1
            rows.append(
                [
                    res.method.value,
                    fmt(res.h),
                    fmt(horizon),
                    fmt(math.log10(horizon)),
                    fmt(running),
                    fmt(log10_or_neg_inf(running)),
                ]
            )
    write_csv(
        config.output_path,
        ["method", "h", "t_end", "log10_t_end", "max_err_H", "log10_max_err_H"],
        rows,
    )


# --- run: one full diagnostic stream -------------------------------------------

def run_single(config: ExperimentConfig) -> None:
    """One (method, h) trajectory with the full diagnostic sample stream."""
    if len(config.methods) != 1 or len(config.h_list) != 1:
        raise ConfigError("run takes exactly one method and one stepsize")
    problem = make_problem(config)
    method, h = config.methods[0], config.h_list[0]
    _warn_if_inadmissible(problem, method, h)
    res = _run_cell(problem, method, h, config.t_end, config.sample_stride)

    if config.output_format == "json":
        records = [
            {
                "t": s.t,
                "H": s.H,
                "I": s.I,
                "Imod": s.Imod,
                "Hmod": s.Hmod,
                "err_Imod": s.err_Imod,
                "err_Hmod": s.err_Hmod,
            }
            for s in res.samples
        ]
        write_json_records(config.output_path, records)
    else:
        rows = [
            [fmt(s.t), fmt(s.H), fmt(s.I), fmt(s.Imod), fmt(s.Hmod),
             fmt(s.err_Imod), fmt(s.err_Hmod)]
            for s in res.samples
        ]
        write_csv(
            config.output_path,
            ["t", "H", "I", "Imod", "Hmod", "err_Imod", "err_Hmod"],
            rows,
        )
    if res.aborted:
        from ..integrators import StepDiverged

        raise StepDiverged(
            f"run aborted: non-finite state after step {res.abort_step}",
            step_index=res.abort_step,
        )
