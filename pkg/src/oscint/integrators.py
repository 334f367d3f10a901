"""Single-step maps and the fixed-stepsize trajectory driver.

Three one-stage, second-order methods share the driver:

* ``Method.ERKN`` -- the trigonometric scheme.  Internal stage and updates
  propagate the linear oscillatory part exactly through the filter values of
  :mod:`oscint.kernels`; the nonlinearity is the shifted force.  The chosen
  weights (stage at the midpoint, ``bbar1(x) = sinc^2(x/2)/2``,
  ``b1(x) = cos(x/2) sinc(x/2)``) make the method symmetric.
* ``Method.RKN`` -- the classical one-stage explicit scheme; identical to
  ERKN with the oscillatory frequency set to zero, acting on the full force.
* ``Method.SV`` -- standard leapfrog on the full force, two force
  evaluations per step so that every step is restartable.

All step maps are pure; ``integrate`` is single-threaded per trajectory and
bit-reproducible for identical inputs.  The hot loop works on raw coordinate
arrays and wraps them into :class:`~oscint.model.State` only at sampled
steps; the public per-step functions share the same kernels, so driver and
single steps agree bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .kernels import CoefficientVanishes, FilterTable, build_filter_table
from .model import (
    DerivedConstants,
    Problem,
    State,
    derive_constants,
    full_force,
    shifted_force,
)


class Method(enum.Enum):
    ERKN = "erkn"
    RKN = "rkn"
    SV = "sv"


class StepDiverged(RuntimeError):
    """A step produced a non-finite entry.

    ``last_state`` is the most recent finite state, ``step_index`` the number
    of completed steps when set by the driver.
    """

    def __init__(self, message, step_index=None, last_state=None):
        super().__init__(message)
        self.step_index = step_index
        self.last_state = last_state


class NoConvergence(RuntimeError):
    """Reference-solution refinement hit the stepsize floor before the
    requested tolerance."""


@dataclass(frozen=True)
class Trajectory:
    """Sampled trajectory. ``times[i] = steps[i] * h`` computed from the
    integer step count, never by repeated addition."""

    times: np.ndarray
    states: tuple[State, ...]
    method: Method
    h: float


def _is_finite(q1, q2, p1, p2) -> bool:
    # cheap screen: the combined sum is non-finite iff some entry is, except
    # for overflow while summing near-DBL_MAX entries; the per-entry check
    # settles those.
    total = (
        sum(q1.tolist()) + sum(q2.tolist()) + sum(p1.tolist()) + sum(p2.tolist())
    )
    if math.isfinite(total):
        return True
    return bool(
        np.isfinite(q1).all()
        and np.isfinite(q2).all()
        and np.isfinite(p1).all()
        and np.isfinite(p2).all()
    )


def _erkn_coefficients(
    constants: DerivedConstants, filters: FilterTable, h: float
) -> tuple:
    """Per-run scalar weights of the trigonometric update, signed with h."""
    return (
        0.5 * h,
        h,
        (h * h) * filters.bbar_slow,
        filters.cos_half,
        (0.5 * h) * filters.sinc_half,
        filters.cos_full,
        h * filters.sinc_full,
        (h * h) * filters.bbar_fast,
        -constants.upsilon * math.sin(h * constants.upsilon),
        h * filters.b_fast,
    )


def _erkn_raw(force, coeffs, q1, q2, p1, p2):
    (half_h, h, hh_bbar_slow, cos_half, half_h_sinc_half, cos_full,
     h_sinc_full, hh_bbar_fast, minus_up_sin, h_b_fast) = coeffs
    s1 = q1 + half_h * p1
    s2 = cos_half * q2 + half_h_sinc_half * p2
    g1, g2 = force(s1, s2)
    return (
        q1 + h * p1 + hh_bbar_slow * g1,
        cos_full * q2 + h_sinc_full * p2 + hh_bbar_fast * g2,
        p1 + h * g1,
        (minus_up_sin * q2 + cos_full * p2) + h_b_fast * g2,
    )


def _rkn_raw(force, h, q1, q2, p1, p2):
    half_h = 0.5 * h
    hh_half = (h * h) * 0.5
    s1 = q1 + half_h * p1
    s2 = q2 + half_h * p2
    f1, f2 = force(s1, s2)
    return (
        q1 + h * p1 + hh_half * f1,
        q2 + h * p2 + hh_half * f2,
        p1 + h * f1,
        p2 + h * f2,
    )


def _sv_raw(force, h, q1, q2, p1, p2):
    half_h = 0.5 * h
    f1, f2 = force(q1, q2)
    hp1 = p1 + half_h * f1
    hp2 = p2 + half_h * f2
    nq1 = q1 + h * hp1
    nq2 = q2 + h * hp2
    e1, e2 = force(nq1, nq2)
    return nq1, nq2, hp1 + half_h * e1, hp2 + half_h * e2


def _make_raw_step(problem: Problem, method: Method, h: float):
    """Bind a method to a problem as a map on raw coordinate tuples."""
    if method is Method.ERKN:
        constants = derive_constants(problem)
        filters = build_filter_table(abs(h), constants.upsilon)
        coeffs = _erkn_coefficients(constants, filters, h)

        def force(a, b):
            return shifted_force(problem, constants, a, b)

        def raw_step(q1, q2, p1, p2):
            return _erkn_raw(force, coeffs, q1, q2, p1, p2)

    elif method in (Method.RKN, Method.SV):
        kernel = _rkn_raw if method is Method.RKN else _sv_raw

        def force(a, b):
            return full_force(problem, a, b)

        def raw_step(q1, q2, p1, p2):
            return kernel(force, h, q1, q2, p1, p2)

    else:  # pragma: no cover
        raise ValueError(f"unknown method {method!r}")
    return raw_step


def _checked(raw, state: State) -> State:
    out = raw(state.q1, state.q2, state.p1, state.p2)
    if not _is_finite(*out):
        raise StepDiverged("step produced non-finite entries", last_state=state)
    return State(*out)


def erkn_step(
    problem: Problem,
    constants: DerivedConstants,
    filters: FilterTable,
    state: State,
    h: float,
) -> State:
    """One step of the trigonometric scheme.

    ``filters`` must be built for ``(|h|, constants.upsilon)``; a negative
    ``h`` steps backwards (all stored filter values are even in h, the odd
    factors carry the sign explicitly).  Exactly one force evaluation.
    """
    coeffs = _erkn_coefficients(constants, filters, h)

    def raw(q1, q2, p1, p2):
        return _erkn_raw(
            lambda a, b: shifted_force(problem, constants, a, b),
            coeffs, q1, q2, p1, p2,
        )

    return _checked(raw, state)


def rkn_step(problem: Problem, state: State, h: float) -> State:
    """One step of the classical one-stage scheme on the full force."""
    return _checked(
        lambda q1, q2, p1, p2: _rkn_raw(
            lambda a, b: full_force(problem, a, b), h, q1, q2, p1, p2
        ),
        state,
    )


def sv_step(problem: Problem, state: State, h: float) -> State:
    """One leapfrog step on the full force (kick - drift - kick)."""
    return _checked(
        lambda q1, q2, p1, p2: _sv_raw(
            lambda a, b: full_force(problem, a, b), h, q1, q2, p1, p2
        ),
        state,
    )


def make_step(problem: Problem, method: Method, h: float):
    """Bind a method to a problem: returns a ``State -> State`` map with the
    constants and filter table built once."""
    raw = _make_raw_step(problem, method, h)

    def step(state: State) -> State:
        return _checked(raw, state)

    return step


def integrate(
    problem: Problem,
    method: Method,
    h: float,
    n_steps: int,
    observer_stride: int = 1,
    observer=None,
) -> Trajectory:
    """Apply the step map ``n_steps`` times from the problem's initial state.

    The observer (if any) is called with ``(n, state)`` at n = 0, at every
    step index divisible by ``observer_stride`` and at the final step; the
    returned trajectory holds exactly the observed samples.  On divergence a
    StepDiverged carrying the last finite state and its step index is raised.
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if observer_stride < 1:
        raise ValueError(f"observer_stride must be >= 1, got {observer_stride}")
    raw_step = _make_raw_step(problem, method, h)

    state = problem.initial
    coords = (state.q1, state.q2, state.p1, state.p2)
    sampled_n = [0]
    states = [state]
    if observer is not None:
        observer(0, state)
    for n in range(1, n_steps + 1):
        new = raw_step(*coords)
        if not _is_finite(*new):
            raise StepDiverged(
                f"step produced non-finite entries after {n - 1} steps",
                step_index=n - 1,
                last_state=State(*coords),
            )
        coords = new
        if n % observer_stride == 0 or n == n_steps:
            sample = State(*coords)
            sampled_n.append(n)
            states.append(sample)
            if observer is not None:
                observer(n, sample)
    times = np.array([n * h for n in sampled_n])
    return Trajectory(times=times, states=tuple(states), method=method, h=h)


_REFINE_FLOOR = 1e-8


def reference_solution(problem: Problem, t_end: float, tol: float):
    """High-accuracy solution by repeated stepsize halving.

    Returns a callable mapping a grid of times in ``[0, t_end]`` to the
    states of a trigonometric-scheme run whose stepsize was halved until two
    successive refinements agreed to ``tol`` in the max norm at those grid
    points.  Raises NoConvergence if the stepsize would fall below 1e-8
    first.
    """
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-12, 1e-6], got {tol}")
    if t_end <= 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")

    def solve(t_grid) -> list[State]:
        t_grid = [float(t) for t in t_grid]
        if any(t < 0.0 or t > t_end * (1.0 + 1e-12) for t in t_grid):
            raise ValueError("grid times must lie in [0, t_end]")
        n_base = _grid_divisor(t_grid, t_end)
        previous = None
        level = 0
        while True:
            n_total = n_base * 2 ** level
            h = t_end / n_total
            if h < _REFINE_FLOOR:
                raise NoConvergence(
                    f"stepsize fell below {_REFINE_FLOOR} before reaching tol={tol}"
                )
            try:
                current = _states_at(problem, h, n_total, t_grid, t_end)
            except (CoefficientVanishes, StepDiverged):
                # coarse level sat on a filter zero or blew up; refine past it
                level += 1
                continue
            if previous is not None:
                diff = max(
                    _max_abs_diff(a, b) for a, b in zip(previous, current)
                )
                if diff < tol:
                    return current
            previous = current
            level += 1

    return solve


def _max_abs_diff(a: State, b: State) -> float:
    return max(
        float(np.max(np.abs(x - y)))
        for x, y in ((a.q1, b.q1), (a.q2, b.q2), (a.p1, b.p1), (a.p2, b.p2))
    )


def _grid_divisor(t_grid, t_end: float, start: int = 64, limit: int = 1 << 20) -> int:
    """Smallest n >= start such that every grid time is an integer multiple
    of t_end / n (to within 1e-12 of t_end)."""
    n = start
    while n <= limit:
        scale = n / t_end
        if all(
            abs(round(t * scale) * (t_end / n) - t) <= 1e-12 * max(t_end, 1.0)
            for t in t_grid
        ):
            return n
        n += 1
    raise ValueError("grid times are not commensurate with t_end")


def _states_at(
    problem: Problem, h: float, n_total: int, t_grid, t_end: float
) -> list[State]:
    raw_step = _make_raw_step(problem, Method.ERKN, h)
    scale = n_total / t_end
    wanted = [min(round(t * scale), n_total) for t in t_grid]
    order = sorted(range(len(wanted)), key=lambda i: wanted[i])
    out: list[State | None] = [None] * len(wanted)
    s0 = problem.initial
    coords = (s0.q1, s0.q2, s0.p1, s0.p2)
    pos = 0
    for i in order:
        while pos < wanted[i]:
            coords = raw_step(*coords)
            pos += 1
        out[i] = State(*coords)
    if not _is_finite(*coords):
        raise StepDiverged("reference run diverged", step_index=pos)
    return out
