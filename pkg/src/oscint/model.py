"""Oscillatory Hamiltonian problems: state, energies, action and force fields.

A problem couples slow positions/momenta ``(q1, p1)`` of dimension ``d1``
to fast ones ``(q2, p2)`` of dimension ``d2``.  The fast block oscillates
with frequency ``omega(q1) / eps`` where ``omega`` depends on the slow
positions and is bounded below by one.

Total energy:

    H = (|p1|^2 + |p2|^2 + (omega(q1)/eps)^2 |q2|^2) / 2 + U(q)

and the adiabatic action of the fast subsystem:

    I = |p2|^2 / (2 omega(q1)) + omega(q1) / (2 eps^2) |q2|^2.

For the trigonometric integrator the equations of motion are rewritten as
``q'' + Omega^2 q = g(q)`` where ``Omega`` is zero on the slow block and
``upsilon = omega(q1(0)) / eps`` times the identity on the fast block, and
``g`` absorbs the *difference* between the true stiffness and the frozen
one.  ``shifted_force`` evaluates that g; ``full_force`` is the plain
negative gradient used by the non-trigonometric baselines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class State:
    """Phase-space point. Arrays are float64 and must not be mutated."""

    q1: np.ndarray
    q2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        for name in ("q1", "q2", "p1", "p2"):
            v = getattr(self, name)
            if not (isinstance(v, np.ndarray) and v.dtype == np.float64):
                object.__setattr__(self, name, np.asarray(v, dtype=np.float64))


@dataclass(frozen=True)
class Problem:
    """An oscillatory Hamiltonian system.

    ``omega`` maps slow positions to the frequency (a scalar >= 1),
    ``grad_omega`` to its gradient; ``potential`` / ``grad_potential``
    evaluate U and (grad_q1 U, grad_q2 U).  Gradients are analytic, not
    differenced: the per-step identities in the tests rely on exactness.
    Immutable and safe to share across threads.
    """

    d1: int
    d2: int
    eps: float
    omega: Callable[[np.ndarray], float]
    grad_omega: Callable[[np.ndarray], np.ndarray]
    potential: Callable[[np.ndarray, np.ndarray], float]
    grad_potential: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    initial: State

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        check_state(self, self.initial)


@dataclass(frozen=True)
class DerivedConstants:
    """Frozen frequency data: omega0 = omega at the declared initial state,
    upsilon = omega0 / eps.

    omega0 is taken from the problem's *declared* initial state once; a
    trajectory restarted from a checkpoint keeps the original value.
    """

    omega0: float
    upsilon: float


def derive_constants(problem: Problem) -> DerivedConstants:
    omega0 = float(problem.omega(problem.initial.q1))
    if omega0 < 1.0:
        raise ValueError(f"frequency at the initial state is {omega0}, below the bound 1")
    return DerivedConstants(omega0=omega0, upsilon=omega0 / problem.eps)


def check_state(problem: Problem, state: State) -> None:
    """Raise if dimensions disagree with the problem or entries are non-finite."""
    if state.q1.shape != (problem.d1,) or state.p1.shape != (problem.d1,):
        raise ValueError(f"slow block must have shape ({problem.d1},)")
    if state.q2.shape != (problem.d2,) or state.p2.shape != (problem.d2,):
        raise ValueError(f"fast block must have shape ({problem.d2},)")
    if not all(
        np.isfinite(v).all() for v in (state.q1, state.q2, state.p1, state.p2)
    ):
        raise ValueError("state contains non-finite entries")


def total_energy(problem: Problem, state: State) -> float:
    """Hamiltonian H(q, p). Non-finite output signals an invalid state."""
    w = problem.omega(state.q1)
    kinetic = np.dot(state.p1, state.p1) + np.dot(state.p2, state.p2)
    stiff = (w / problem.eps) ** 2 * np.dot(state.q2, state.q2)
    return float(0.5 * (kinetic + stiff) + problem.potential(state.q1, state.q2))


def action(problem: Problem, state: State) -> float:
    """Adiabatic action of the fast subsystem."""
    w = problem.omega(state.q1)
    return float(
        np.dot(state.p2, state.p2) / (2.0 * w)
        + w / (2.0 * problem.eps * problem.eps) * np.dot(state.q2, state.q2)
    )


def shifted_force(
    problem: Problem,
    constants: DerivedConstants,
    q1: np.ndarray,
    q2: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side g(q) of the second-order form with frozen stiffness.

    Slow block:  -(omega |q2|^2 / eps^2) grad omega - grad_q1 U
    Fast block:  -((omega^2 - omega0^2) / eps^2) q2 - grad_q2 U
    """
    w = problem.omega(q1)
    gw = problem.grad_omega(q1)
    du1, du2 = problem.grad_potential(q1, q2)
    inv_eps2 = 1.0 / (problem.eps * problem.eps)
    g1 = (-w * np.dot(q2, q2) * inv_eps2) * gw - du1
    g2 = (-(w * w - constants.omega0 * constants.omega0) * inv_eps2) * q2 - du2
    return g1, g2


def shift_potential(
    problem: Problem,
    constants: DerivedConstants,
    q1: np.ndarray,
    q2: np.ndarray,
) -> float:
    """Scalar potential W whose negative gradient is ``shifted_force``."""
    w = problem.omega(q1)
    return float(
        (w * w - constants.omega0 * constants.omega0)
        / (2.0 * problem.eps * problem.eps)
        * np.dot(q2, q2)
        + problem.potential(q1, q2)
    )


def full_force(
    problem: Problem, q1: np.ndarray, q2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Unshifted force field for the baseline methods.

    Satisfies full_force(q) = shifted_force(q) - (0, omega0^2/eps^2 q2).
    """
    w = problem.omega(q1)
    gw = problem.grad_omega(q1)
    du1, du2 = problem.grad_potential(q1, q2)
    inv_eps2 = 1.0 / (problem.eps * problem.eps)
    f1 = (-w * np.dot(q2, q2) * inv_eps2) * gw - du1
    f2 = (-(w * w) * inv_eps2) * q2 - du2
    return f1, f2


def gradient_consistency_errors(
    problem: Problem,
    q1: np.ndarray,
    q2: np.ndarray,
    fd_step: float = 1e-6,
) -> tuple[float, float]:
    """Max relative mismatch of the analytic gradients against central
    differences of ``omega`` and ``potential`` at one point.

    Relative to max(|analytic|, 1) per component, so flat regions do not
    blow the quotient up.
    """
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)

    def central(f, v, i):
        e = np.zeros_like(v)
        e[i] = fd_step
        return (f(v + e) - f(v - e)) / (2.0 * fd_step)

    gw = problem.grad_omega(q1)
    err_w = 0.0
    for i in range(problem.d1):
        fd = central(problem.omega, q1, i)
        err_w = max(err_w, abs(gw[i] - fd) / max(abs(gw[i]), 1.0))

    du1, du2 = problem.grad_potential(q1, q2)
    err_u = 0.0
    for i in range(problem.d1):
        fd = central(lambda v: problem.potential(v, q2), q1, i)
        err_u = max(err_u, abs(du1[i] - fd) / max(abs(du1[i]), 1.0))
    for i in range(problem.d2):
        fd = central(lambda v: problem.potential(q1, v), q2, i)
        err_u = max(err_u, abs(du2[i] - fd) / max(abs(du2[i]), 1.0))
    return err_w, err_u
