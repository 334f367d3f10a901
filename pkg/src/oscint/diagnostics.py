"""Stepsize-modified invariants and the admissibility condition.

A symmetric trigonometric step does not conserve the action I or the energy
H themselves; it conserves stepsize-deformed versions of them over very long
times.  The deformation enters through a modified frequency

    omega_h(q1) = omega(q1) sqrt(1 - (h/(2 eps))^2 sinc^2(hu/2) omega(q1)^2)

(with ``hu = h * upsilon``), a weight factor combining the update filters,
and an arcsine-warped frequency for the energy.  Setting upsilon = 0
recovers the classical deformations conserved by the one-stage RKN scheme
and by leapfrog, which ``rkn_modified_action`` / ``rkn_modified_energy``
evaluate directly.

Everything here is a pure function of (problem, h, state): repeated
evaluation is bit-identical, and evaluation over trajectory samples may run
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .integrators import Method
from .kernels import FilterTable, build_filter_table
from .model import (
    DerivedConstants,
    Problem,
    State,
    action,
    derive_constants,
    total_energy,
)


class InadmissibleStepsize(ValueError):
    """The stepsize is too large for the modified frequencies to exist.

    Raised instead of clamping: a clamped frequency would silently falsify
    the conservation measurements downstream.
    """


class SincPole(ArithmeticError):
    """sinc(h * upsilon) = 0 where the weight factor needs its reciprocal."""


def modified_frequency(
    problem: Problem, constants: DerivedConstants, h: float, q1: np.ndarray
) -> float:
    """omega_h(q1); zero exactly on the admissibility boundary."""
    w = problem.omega(q1)
    x = h * constants.upsilon
    z = (h / (2.0 * problem.eps) * kernels.sinc(0.5 * x)) * w
    radicand = 1.0 - z * z
    if radicand < 0.0:
        raise InadmissibleStepsize(
            f"h = {h!r} too large: (h/eps) sinc(hu/2) omega = {2.0 * z!r} exceeds 2"
        )
    return w * math.sqrt(radicand)


def arcsine_frequency(
    problem: Problem, constants: DerivedConstants, h: float, q1: np.ndarray
) -> float:
    """Arcsine-warped frequency entering the modified energy."""
    w = problem.omega(q1)
    x = h * constants.upsilon
    arg = (h / (2.0 * problem.eps) * kernels.sinc(0.5 * x)) * w
    if arg > 1.0:
        raise InadmissibleStepsize(
            f"h = {h!r} too large: arcsine argument {arg!r} exceeds 1"
        )
    return 2.0 * problem.eps / h * math.asin(arg)


def psi_factor(
    filters: FilterTable, constants: DerivedConstants, omega_h: float
) -> float:
    """Weight combining the update filters with the modified frequency.

    Equals 2 exactly in the upsilon = 0 limit.
    """
    if filters.hu == 0.0:
        return filters.cos_half / filters.bbar_fast
    if filters.sinc_full == 0.0:
        raise SincPole(f"sinc(h upsilon) vanishes at hu = {filters.hu!r}")
    x = filters.hu
    ratio = filters.sinc_half / filters.sinc_full
    return filters.cos_half / filters.bbar_fast + (
        0.5 * (x * x) * filters.sinc_half / filters.b_fast
    ) * (ratio * ratio) * (omega_h * omega_h) / (constants.omega0 * constants.omega0)


def modified_action(
    problem: Problem,
    constants: DerivedConstants,
    filters: FilterTable,
    state: State,
) -> float:
    """Action deformation conserved by the trigonometric scheme."""
    w_h = modified_frequency(problem, constants, filters.h, state.q1)
    psi = psi_factor(filters, constants, w_h)
    fast_p = np.dot(state.p2, state.p2)
    fast_q = np.dot(state.q2, state.q2)
    return float(
        (psi * filters.sinc_full * filters.sinc_full / (2.0 * filters.sinc_half))
        * fast_p
        / (2.0 * w_h)
        + (psi * filters.sinc_half * 0.5)
        * w_h
        / (2.0 * problem.eps * problem.eps)
        * fast_q
    )


def modified_energy(
    problem: Problem,
    constants: DerivedConstants,
    filters: FilterTable,
    state: State,
) -> float:
    """Energy deformation conserved by the trigonometric scheme."""
    w = problem.omega(state.q1)
    w_h = modified_frequency(problem, constants, filters.h, state.q1)
    psi = psi_factor(filters, constants, w_h)
    i_h = modified_action(problem, constants, filters, state)
    w_arc = arcsine_frequency(problem, constants, filters.h, state.q1)
    shift = (
        (1.0 - psi * filters.bbar_fast)
        * (w * w - constants.omega0 * constants.omega0)
        / (problem.eps * problem.eps)
        * np.dot(state.q2, state.q2)
    )
    return float(
        0.5 * np.dot(state.p1, state.p1)
        + w_arc * i_h
        + problem.potential(state.q1, state.q2)
        + shift
    )


def rkn_modified_action(problem: Problem, h: float, state: State) -> float:
    """Classical action deformation (upsilon = 0 limit), used for the RKN
    and leapfrog baselines."""
    w = problem.omega(state.q1)
    z = h / (2.0 * problem.eps) * w
    radicand = 1.0 - z * z
    if radicand < 0.0:
        raise InadmissibleStepsize(
            f"h = {h!r} too large: (h/eps) omega = {2.0 * z!r} exceeds 2"
        )
    w_h = w * math.sqrt(radicand)
    return float(
        np.dot(state.p2, state.p2) / (2.0 * w_h)
        + w_h / (2.0 * problem.eps * problem.eps) * np.dot(state.q2, state.q2)
    )


def rkn_modified_energy(problem: Problem, h: float, state: State) -> float:
    """Classical energy deformation (upsilon = 0 limit)."""
    w = problem.omega(state.q1)
    arg = h / (2.0 * problem.eps) * w
    if arg > 1.0:
        raise InadmissibleStepsize(
            f"h = {h!r} too large: arcsine argument {arg!r} exceeds 1"
        )
    return float(
        0.5 * np.dot(state.p1, state.p1)
        + (2.0 * problem.eps / h)
        * math.asin(arg)
        * rkn_modified_action(problem, h, state)
        + problem.potential(state.q1, state.q2)
    )


def stepsize_admissible(
    problem: Problem,
    constants: DerivedConstants,
    h: float,
    q1: np.ndarray,
    n_odd: int,
) -> bool:
    """Whether (h/eps) sinc(hu/2) omega(q1) <= 2 sin(pi/(N+2)).

    The boundary is inclusive.  N must be an odd integer >= 1.
    """
    if n_odd < 1 or n_odd % 2 == 0:
        raise ValueError(f"N must be an odd integer >= 1, got {n_odd}")
    x = h * constants.upsilon
    lhs = (h / problem.eps) * kernels.sinc(0.5 * x) * problem.omega(q1)
    return lhs <= 2.0 * math.sin(math.pi / (n_odd + 2))


def max_admissible_n(
    problem: Problem, constants: DerivedConstants, h: float, q1: np.ndarray
) -> int | None:
    """Largest odd N passing ``stepsize_admissible``; None if N = 1 fails.

    Undefined (raises) when the left-hand side is exactly zero, since every
    N is then admissible.
    """
    x = h * constants.upsilon
    lhs = (h / problem.eps) * kernels.sinc(0.5 * x) * problem.omega(q1)
    if lhs > 2.0 * math.sin(math.pi / 3.0):
        return None
    if lhs <= 0.0:
        raise ValueError("left-hand side vanishes; every odd N is admissible")
    n = int(math.floor(math.pi / math.asin(0.5 * lhs) - 2.0))
    if n % 2 == 0:
        n -= 1
    n = max(n, 1)
    # settle boundary roundoff against the actual inequality
    while not stepsize_admissible(problem, constants, h, q1, n):
        n -= 2
    while stepsize_admissible(problem, constants, h, q1, n + 2):
        n += 2
    return n


@dataclass(frozen=True)
class DiagnosticSample:
    """Invariants at one trajectory sample.

    ``Imod`` / ``Hmod`` are the method-matched deformations (trigonometric
    ones for ERKN, classical ones for RKN/SV); the ``err_*`` fields are
    absolute drifts against the t = 0 values of the same run.
    """

    t: float
    H: float
    I: float
    Imod: float
    Hmod: float
    err_Imod: float
    err_Hmod: float


class DiagnosticRecorder:
    """integrate() observer accumulating DiagnosticSamples.

    The first observation must be step 0; it fixes the reference values the
    drifts are measured against.
    """

    def __init__(self, problem: Problem, method: Method, h: float):
        self.problem = problem
        self.method = method
        self.h = h
        self.constants = derive_constants(problem)
        self.filters = (
            build_filter_table(h, self.constants.upsilon)
            if method is Method.ERKN
            else None
        )
        self.samples: list[DiagnosticSample] = []
        self.sample_steps: list[int] = []
        self._ref: tuple[float, float] | None = None

    def __call__(self, n: int, state: State) -> None:
        if self.method is Method.ERKN:
            imod = modified_action(self.problem, self.constants, self.filters, state)
            hmod = modified_energy(self.problem, self.constants, self.filters, state)
        else:
            imod = rkn_modified_action(self.problem, self.h, state)
            hmod = rkn_modified_energy(self.problem, self.h, state)
        if self._ref is None:
            if n != 0:
                raise ValueError("first observed sample must be step 0")
            self._ref = (imod, hmod)
        self.samples.append(
            DiagnosticSample(
                t=n * self.h,
                H=total_energy(self.problem, state),
                I=action(self.problem, state),
                Imod=imod,
                Hmod=hmod,
                err_Imod=abs(imod - self._ref[0]),
                err_Hmod=abs(hmod - self._ref[1]),
            )
        )
        self.sample_steps.append(n)
