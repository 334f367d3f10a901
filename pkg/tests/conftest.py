import json
from pathlib import Path

import numpy as np
import pytest

import oscint
from oscint import Method

ORACLE_PATH = Path(__file__).parent / "oracles" / "oracle_values.json"


@pytest.fixture(scope="session")
def oracle():
    """Frozen high-precision expected values (see oracles/generate_oracle_values.py)."""
    raw = json.loads(ORACLE_PATH.read_text())

    def parse(v):
        if isinstance(v, list):
            return np.array([float(x) for x in v])
        if isinstance(v, str):
            return float(v)
        return v

    return {k: parse(v) for k, v in raw.items()}


@pytest.fixture(scope="session")
def fpu():
    return oscint.fpu_varying(0.01)


@pytest.fixture(scope="session")
def fpu_const():
    return oscint.fpu_constant(0.01)


@pytest.fixture(scope="session")
def fpu_constants(fpu):
    return oscint.derive_constants(fpu)


@pytest.fixture(scope="session")
def fpu_filters(fpu_constants):
    return oscint.build_filter_table(0.01, fpu_constants.upsilon)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_states(problem, rng, count, fast_scale=None):
    """Physically scaled random states: O(1) slow block, O(eps) fast positions."""
    if fast_scale is None:
        fast_scale = problem.eps
    out = []
    for _ in range(count):
        out.append(
            oscint.State(
                rng.uniform(-1.0, 1.0, problem.d1),
                fast_scale * rng.uniform(-1.0, 1.0, problem.d2),
                rng.uniform(-1.0, 1.0, problem.d1),
                rng.uniform(-1.0, 1.0, problem.d2),
            )
        )
    return out


def max_state_diff(a, b):
    return max(
        float(np.max(np.abs(x - y)))
        for x, y in ((a.q1, b.q1), (a.q2, b.q2), (a.p1, b.p1), (a.p2, b.p2))
    )


def rel_errors(impl, expected):
    """Per-component |impl - expected| / |expected|, absolute where expected = 0."""
    impl = np.asarray(impl, dtype=float)
    expected = np.asarray(expected, dtype=float)
    err = np.abs(impl - expected)
    nz = expected != 0.0
    out = err.copy()
    out[nz] = err[nz] / np.abs(expected[nz])
    return out


@pytest.fixture(scope="session")
def varying_order_data(fpu):
    """Shared order-of-accuracy measurements on the varying-frequency preset
    over [0, 1]: final-state max-norm errors per method and stepsize.

    The trigonometric scheme is measured on h in {eps/2, eps/4, eps/8}; the
    two baselines on {eps/32, eps/64, eps/128}, below the stiff-block phase
    saturation threshold where their asymptotic second-order regime starts.
    Returns ``(errors, elapsed_seconds)``.
    """
    import time

    t0 = time.perf_counter()
    reference = oscint.reference_solution(fpu, 1.0, 1e-6)([1.0])[0]

    def final_error(method, h):
        n = round(1.0 / h)
        traj = oscint.integrate(fpu, method, h, n, observer_stride=n)
        return max_state_diff(traj.states[-1], reference)

    grids = {
        Method.ERKN: [0.005, 0.0025, 0.00125],
        Method.RKN: [0.0003125, 0.00015625, 0.000078125],
        Method.SV: [0.0003125, 0.00015625, 0.000078125],
    }
    errors = {
        method: (hs, [final_error(method, h) for h in hs])
        for method, hs in grids.items()
    }
    return errors, time.perf_counter() - t0
