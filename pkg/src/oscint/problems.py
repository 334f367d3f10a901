"""Built-in problem presets.

``fpu_varying`` is the benchmark used throughout: a three-stiff-spring
quartic lattice whose fast frequency ``1 + sin^2(q11)`` follows the first
slow coordinate.  ``fpu_constant`` freezes that frequency at its initial
value for the accuracy/energy-drift comparison studies, ``linear_test``
strips the problem down to a pure oscillator with a closed-form solution,
and ``single_fast_dof`` is the minimal one-fast-oscillator variant.
"""

from __future__ import annotations

import math

import numpy as np

from .model import DerivedConstants, Problem, State


def _fpu_initial(eps: float, omega_at_start: float) -> State:
    q1 = np.array([1.0, 0.0, 0.0])
    q2 = np.array([eps / omega_at_start, 0.0, 0.0])
    p1 = np.array([1.0, 0.0, 0.0])
    p2 = np.array([1.0, 0.0, 0.0])
    return State(q1, q2, p1, p2)


def _fpu_potential(q1, q2):
    a1, a2, a3 = q1
    b1, b2, b3 = q2
    r1 = a1 - b1
    r2 = a2 - a3 - a1 - b1
    r3 = a3 - b1 - a2 - b2
    r4 = a3 + b3
    return 0.25 * (r1 ** 4 + r2 ** 4 + r3 ** 4 + r4 ** 4)


def _fpu_grad_potential(q1, q2):
    a1, a2, a3 = q1
    b1, b2, b3 = q2
    r1 = a1 - b1
    r2 = a2 - a3 - a1 - b1
    r3 = a3 - b1 - a2 - b2
    r4 = a3 + b3
    c1 = r1 * r1 * r1
    c2 = r2 * r2 * r2
    c3 = r3 * r3 * r3
    c4 = r4 * r4 * r4
    du1 = np.array([c1 - c2, c2 - c3, c3 - c2 + c4])
    du2 = np.array([-(c1 + c2 + c3), -c3, c4])
    return du1, du2


def _check_eps(eps: float) -> None:
    if not 0.0 < eps <= 0.1:
        raise ValueError(f"eps must lie in (0, 0.1], got {eps}")


def fpu_varying(eps: float) -> Problem:
    """Quartic lattice with solution-dependent fast frequency 1 + sin^2(q11)."""
    _check_eps(eps)

    def omega(q1):
        s = math.sin(q1[0])
        return 1.0 + s * s

    def grad_omega(q1):
        return np.array([math.sin(2.0 * q1[0]), 0.0, 0.0])

    initial = _fpu_initial(eps, omega(np.array([1.0, 0.0, 0.0])))
    return Problem(
        d1=3,
        d2=3,
        eps=eps,
        omega=omega,
        grad_omega=grad_omega,
        potential=_fpu_potential,
        grad_potential=_fpu_grad_potential,
        initial=initial,
    )


def fpu_constant(eps: float) -> Problem:
    """Same lattice and initial data, frequency frozen at its initial value."""
    _check_eps(eps)
    s = math.sin(1.0)
    w0 = 1.0 + s * s
    zero3 = np.zeros(3)
    return Problem(
        d1=3,
        d2=3,
        eps=eps,
        omega=lambda q1: w0,
        grad_omega=lambda q1: zero3,
        potential=_fpu_potential,
        grad_potential=_fpu_grad_potential,
        initial=_fpu_initial(eps, w0),
    )


def linear_test(eps: float, omega0: float = 1.0) -> Problem:
    """Free slow block plus an uncoupled fast oscillator; solved exactly by
    ``linear_solution``."""
    if omega0 < 1.0:
        raise ValueError(f"omega0 must be >= 1, got {omega0}")
    zero1 = np.zeros(1)
    initial = State(
        np.array([1.0]), np.array([eps / omega0]), np.array([1.0]), np.array([1.0])
    )
    return Problem(
        d1=1,
        d2=1,
        eps=eps,
        omega=lambda q1: omega0,
        grad_omega=lambda q1: zero1,
        potential=lambda q1, q2: 0.0,
        grad_potential=lambda q1, q2: (zero1, zero1),
        initial=initial,
    )


def linear_solution(problem: Problem, constants: DerivedConstants, t: float) -> State:
    """Closed-form solution of a constant-frequency, zero-potential preset:
    free flight on the slow block, harmonic rotation on the fast one."""
    s0 = problem.initial
    u = constants.upsilon
    c, s = math.cos(u * t), math.sin(u * t)
    return State(
        s0.q1 + t * s0.p1,
        c * s0.q2 + (s / u) * s0.p2,
        s0.p1.copy(),
        (-u * s) * s0.q2 + c * s0.p2,
    )


def single_fast_dof(eps: float) -> Problem:
    """One slow and one fast degree of freedom, quartic coupling."""
    _check_eps(eps)

    def omega(q1):
        s = math.sin(q1[0])
        return 1.0 + s * s

    def grad_omega(q1):
        return np.array([math.sin(2.0 * q1[0])])

    def potential(q1, q2):
        return 0.25 * (q1[0] - q2[0]) ** 4

    def grad_potential(q1, q2):
        c = (q1[0] - q2[0]) ** 3
        return np.array([c]), np.array([-c])

    initial = State(
        np.array([1.0]),
        np.array([eps / omega(np.array([1.0]))]),
        np.array([1.0]),
        np.array([1.0]),
    )
    return Problem(
        d1=1,
        d2=1,
        eps=eps,
        omega=omega,
        grad_omega=grad_omega,
        potential=potential,
        grad_potential=grad_potential,
        initial=initial,
    )


#: preset name -> factory taking eps, as selected by the harness config.
PRESETS = {
    "fpu_varying": fpu_varying,
    "fpu_constant": fpu_constant,
    "linear_test": linear_test,
    "single_fast_dof": single_fast_dof,
}


def make_preset(name: str, eps: float) -> Problem:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose one of {sorted(PRESETS)}"
        ) from None
    return factory(eps)
