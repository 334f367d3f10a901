from .experiments import (
    ConfigError,
    ExperimentConfig,
    run_conserve,
    run_converge,
    run_drift,
    run_single,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "run_conserve",
    "run_converge",
    "run_drift",
    "run_single",
]
