"""Integrators and long-time diagnostics for highly oscillatory Hamiltonian
systems with a slowly varying, solution-dependent high frequency."""

from .diagnostics import (
    DiagnosticRecorder,
    DiagnosticSample,
    InadmissibleStepsize,
    SincPole,
    arcsine_frequency,
    max_admissible_n,
    modified_action,
    modified_energy,
    modified_frequency,
    psi_factor,
    rkn_modified_action,
    rkn_modified_energy,
    stepsize_admissible,
)
from .integrators import (
    Method,
    NoConvergence,
    StepDiverged,
    Trajectory,
    erkn_step,
    integrate,
    reference_solution,
    rkn_step,
    sv_step,
)
from .kernels import CoefficientVanishes, FilterTable, build_filter_table, sinc
from .model import (
    DerivedConstants,
    Problem,
    State,
    action,
    check_state,
    derive_constants,
    full_force,
    gradient_consistency_errors,
    shift_potential,
    shifted_force,
    total_energy,
)
from .problems import (
    PRESETS,
    fpu_constant,
    fpu_varying,
    linear_solution,
    linear_test,
    make_preset,
    single_fast_dof,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientVanishes",
    "DerivedConstants",
    "DiagnosticRecorder",
    "DiagnosticSample",
    "FilterTable",
    "InadmissibleStepsize",
    "Method",
    "NoConvergence",
    "PRESETS",
    "Problem",
    "SincPole",
    "State",
    "StepDiverged",
    "Trajectory",
    "action",
    "arcsine_frequency",
    "build_filter_table",
    "check_state",
    "derive_constants",
    "erkn_step",
    "fpu_constant",
    "fpu_varying",
    "full_force",
    "gradient_consistency_errors",
    "integrate",
    "linear_solution",
    "linear_test",
    "make_preset",
    "max_admissible_n",
    "modified_action",
    "modified_energy",
    "modified_frequency",
    "psi_factor",
    "reference_solution",
    "rkn_modified_action",
    "rkn_modified_energy",
    "rkn_step",
    "shift_potential",
    "shifted_force",
    "single_fast_dof",
    "sinc",
    "stepsize_admissible",
    "sv_step",
    "total_energy",
]
