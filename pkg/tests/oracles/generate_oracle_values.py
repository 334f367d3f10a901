#!/usr/bin/env python3
"""Regenerate ``oracle_values.json``.

Standalone high-precision evaluation (mpmath, 60 digits) of every frozen
expected value used by the test suite: energies and forces of the oscillatory
lattice preset, the scalar filter values, one step of each integrator from the
preset's initial data, and the modified-invariant formulas.

The potential / frequency gradients are derived symbolically with sympy, so
nothing here inherits a hand-derived gradient from the package code. Keep this
script importable without the package installed.

Run:  python3 tests/oracles/generate_oracle_values.py
"""

import json
import os

import mpmath as mp
import sympy as sp

mp.mp.dps = 60

EPS = mp.mpf(1) / 100  # benchmark value of the small parameter
H = EPS                # base stepsize used for the one-step oracles


# --- symbolic model: frequency and quartic lattice potential -----------------

_q = sp.symbols("q11 q12 q13 q21 q22 q23", real=True)
q11, q12, q13, q21, q22, q23 = _q

OMEGA_EXPR = 1 + sp.sin(q11) ** 2
U_EXPR = sp.Rational(1, 4) * (
    (q11 - q21) ** 4
    + (q12 - q13 - q11 - q21) ** 4
    + (q13 - q21 - q12 - q22) ** 4
    + (q13 + q23) ** 4
)

_omega = sp.lambdify(_q[:3], OMEGA_EXPR, "mpmath")
_grad_omega = [sp.lambdify(_q[:3], sp.diff(OMEGA_EXPR, v), "mpmath") for v in _q[:3]]
_potential = sp.lambdify(_q, U_EXPR, "mpmath")
_grad_u = [sp.lambdify(_q, sp.diff(U_EXPR, v), "mpmath") for v in _q]


def omega(v1):
    return _omega(*v1)


def grad_omega(v1):
    return [g(*v1) for g in _grad_omega]


def potential(v1, v2):
    return _potential(*v1, *v2)


def grad_potential(v1, v2):
    full = [g(*v1, *v2) for g in _grad_u]
    return full[:3], full[3:]


OMEGA0 = omega([mp.mpf(1), mp.mpf(0), mp.mpf(0)])
UPSILON = OMEGA0 / EPS


def initial_state():
    z = mp.mpf(0)
    q1 = [mp.mpf(1), z, z]
    q2 = [EPS / OMEGA0, z, z]
    p1 = [mp.mpf(1), z, z]
    p2 = [mp.mpf(1), z, z]
    return q1, q2, p1, p2


def sinc(x):
    return mp.mpf(1) if x == 0 else mp.sin(x) / x


def norm2(v):
    return mp.fsum(c * c for c in v)


# --- forces ------------------------------------------------------------------

def shifted_force(v1, v2, omega0):
    w = omega(v1)
    gw = grad_omega(v1)
    du1, du2 = grad_potential(v1, v2)
    coeff1 = -w * norm2(v2) / EPS**2
    coeff2 = -(w * w - omega0 * omega0) / EPS**2
    g1 = [coeff1 * gw[i] - du1[i] for i in range(3)]
    g2 = [coeff2 * v2[i] - du2[i] for i in range(3)]
    return g1, g2


def full_force(v1, v2):
    return shifted_force(v1, v2, mp.mpf(0))


# --- one step of each scheme from the preset initial data ---------------------

def erkn_step(q1, q2, p1, p2, h):
    x = h * UPSILON
    ch, sh = mp.cos(x / 2), sinc(x / 2)
    cf, sf = mp.cos(x), sinc(x)
    bbar, b = sh * sh / 2, ch * sh
    s1 = [q1[i] + h / 2 * p1[i] for i in range(3)]
    s2 = [ch * q2[i] + h / 2 * sh * p2[i] for i in range(3)]
    g1, g2 = shifted_force(s1, s2, OMEGA0)
    nq1 = [q1[i] + h * p1[i] + h * h / 2 * g1[i] for i in range(3)]
    np1 = [p1[i] + h * g1[i] for i in range(3)]
    nq2 = [cf * q2[i] + h * sf * p2[i] + h * h * bbar * g2[i] for i in range(3)]
    np2 = [-UPSILON * mp.sin(x) * q2[i] + cf * p2[i] + h * b * g2[i] for i in range(3)]
    return nq1, nq2, np1, np2


def rkn_step(q1, q2, p1, p2, h):
    s1 = [q1[i] + h / 2 * p1[i] for i in range(3)]
    s2 = [q2[i] + h / 2 * p2[i] for i in range(3)]
    f1, f2 = full_force(s1, s2)
    nq1 = [q1[i] + h * p1[i] + h * h / 2 * f1[i] for i in range(3)]
    nq2 = [q2[i] + h * p2[i] + h * h / 2 * f2[i] for i in range(3)]
    np1 = [p1[i] + h * f1[i] for i in range(3)]
    np2 = [p2[i] + h * f2[i] for i in range(3)]
    return nq1, nq2, np1, np2


def sv_step(q1, q2, p1, p2, h):
    f1, f2 = full_force(q1, q2)
    hp1 = [p1[i] + h / 2 * f1[i] for i in range(3)]
    hp2 = [p2[i] + h / 2 * f2[i] for i in range(3)]
    nq1 = [q1[i] + h * hp1[i] for i in range(3)]
    nq2 = [q2[i] + h * hp2[i] for i in range(3)]
    e1, e2 = full_force(nq1, nq2)
    np1 = [hp1[i] + h / 2 * e1[i] for i in range(3)]
    np2 = [hp2[i] + h / 2 * e2[i] for i in range(3)]
    return nq1, nq2, np1, np2


# --- invariants and their stepsize-modified counterparts ----------------------

def energy(q1, q2, p1, p2):
    w = omega(q1)
    return (norm2(p1) + norm2(p2) + w * w / EPS**2 * norm2(q2)) / 2 + potential(q1, q2)


def adiabatic_action(q1, q2, p1, p2):
    w = omega(q1)
    return norm2(p2) / (2 * w) + w / (2 * EPS**2) * norm2(q2)


def modified_frequency(v1, h):
    w = omega(v1)
    x = h * UPSILON
    return w * mp.sqrt(1 - h * h / (4 * EPS**2) * sinc(x / 2) ** 2 * w * w)


def psi_factor(v1, h):
    x = h * UPSILON
    sh, ch, sf = sinc(x / 2), mp.cos(x / 2), sinc(x)
    bbar, b = sh * sh / 2, ch * sh
    wh = modified_frequency(v1, h)
    return ch / bbar + x * x / 2 * sh / b * (sh * sh / (sf * sf)) * (wh * wh / OMEGA0**2)


def modified_action(q1, q2, p1, p2, h):
    x = h * UPSILON
    sh, sf = sinc(x / 2), sinc(x)
    wh = modified_frequency(q1, h)
    psi = psi_factor(q1, h)
    return (psi * sf * sf / (2 * sh)) * norm2(p2) / (2 * wh) + (psi * sh / 2) * wh / (
        2 * EPS**2
    ) * norm2(q2)


def arcsine_frequency(v1, h):
    x = h * UPSILON
    return 2 * EPS / h * mp.asin(h / (2 * EPS) * sinc(x / 2) * omega(v1))


def modified_energy(q1, q2, p1, p2, h):
    x = h * UPSILON
    bbar = sinc(x / 2) ** 2 / 2
    w = omega(q1)
    psi = psi_factor(q1, h)
    return (
        norm2(p1) / 2
        + arcsine_frequency(q1, h) * modified_action(q1, q2, p1, p2, h)
        + potential(q1, q2)
        + (1 - psi * bbar) * (w * w - OMEGA0**2) / EPS**2 * norm2(q2)
    )


def rkn_modified_action(q1, q2, p1, p2, h):
    w = omega(q1)
    wh = w * mp.sqrt(1 - h * h / (4 * EPS**2) * w * w)
    return norm2(p2) / (2 * wh) + wh / (2 * EPS**2) * norm2(q2)


def rkn_modified_energy(q1, q2, p1, p2, h):
    w = omega(q1)
    return (
        norm2(p1) / 2
        + 2 * EPS / h * mp.asin(h / (2 * EPS) * w) * rkn_modified_action(q1, q2, p1, p2, h)
        + potential(q1, q2)
    )


def stepsize_lhs(v1, h):
    return h / EPS * sinc(h * UPSILON / 2) * omega(v1)


def largest_odd_admissible(v1, h):
    lhs = stepsize_lhs(v1, h)
    if lhs / 2 > mp.sin(mp.pi / 3):
        return None
    n = int(mp.floor(mp.pi / mp.asin(lhs / 2) - 2))
    if n % 2 == 0:
        n -= 1
    while lhs > 2 * mp.sin(mp.pi / (n + 2)):
        n -= 2
    return n


def s(v, digits=22):
    return mp.nstr(mp.mpf(v), digits)


def main():
    q1, q2, p1, p2 = initial_state()
    pert_q1 = [mp.mpf(1.1), mp.mpf(-0.2), mp.mpf(0.3)]
    pert_q2 = [mp.mpf(0.004), mp.mpf(-0.002), mp.mpf(0.001)]

    g1, g2 = shifted_force(pert_q1, pert_q2, OMEGA0)
    f1, f2 = full_force(pert_q1, pert_q2)
    w_pert = (omega(pert_q1) ** 2 - OMEGA0**2) / (2 * EPS**2) * norm2(pert_q2) + potential(
        pert_q1, pert_q2
    )

    x = H * UPSILON
    out = {
        "eps": s(EPS),
        "h": s(H),
        "omega0": s(OMEGA0),
        "upsilon": s(UPSILON),
        "initial_q21": s(EPS / OMEGA0),
        "energy_initial": s(energy(q1, q2, p1, p2)),
        "action_initial": s(adiabatic_action(q1, q2, p1, p2)),
        "potential_initial": s(potential(q1, q2)),
        "pert_q1": [s(v) for v in pert_q1],
        "pert_q2": [s(v) for v in pert_q2],
        "shifted_force_pert": [s(v) for v in g1 + g2],
        "full_force_pert": [s(v) for v in f1 + f2],
        "shift_potential_pert": s(w_pert),
        "sinc_1e-9": s(sinc(mp.mpf(1e-9))),
        "filter_hu": s(x),
        "filter_cos_half": s(mp.cos(x / 2)),
        "filter_sinc_half": s(sinc(x / 2)),
        "filter_cos_full": s(mp.cos(x)),
        "filter_sinc_full": s(sinc(x)),
        "filter_bbar_fast": s(sinc(x / 2) ** 2 / 2),
        "filter_b_fast": s(mp.cos(x / 2) * sinc(x / 2)),
        "erkn_step": [s(v) for blk in erkn_step(q1, q2, p1, p2, H) for v in blk],
        "rkn_step": [s(v) for blk in rkn_step(q1, q2, p1, p2, H) for v in blk],
        "sv_step": [s(v) for blk in sv_step(q1, q2, p1, p2, H) for v in blk],
        "modified_frequency_initial": s(modified_frequency(q1, H)),
        "psi_initial": s(psi_factor(q1, H)),
        "modified_action_initial": s(modified_action(q1, q2, p1, p2, H)),
        "arcsine_frequency_initial": s(arcsine_frequency(q1, H)),
        "modified_energy_initial": s(modified_energy(q1, q2, p1, p2, H)),
        "rkn_modified_action_initial": s(rkn_modified_action(q1, q2, p1, p2, H)),
        "rkn_modified_energy_initial": s(rkn_modified_energy(q1, q2, p1, p2, H)),
        "stepsize_lhs_h_eps": s(stepsize_lhs(q1, H)),
        "stepsize_lhs_h_eps_half": s(stepsize_lhs(q1, H / 2)),
        "stepsize_bound_n1": s(2 * mp.sin(mp.pi / 3)),
        "max_admissible_n_h_eps": largest_odd_admissible(q1, H),
        "max_admissible_n_h_eps_half": largest_odd_admissible(q1, H / 2),
        "psi_dev_h1e-4": s(abs(psi_factor(q1, mp.mpf(1e-4)) - 2)),
        "psi_dev_h1e-5": s(abs(psi_factor(q1, mp.mpf(1e-5)) - 2)),
        "action_dev_h1e-4": s(abs(modified_action(q1, q2, p1, p2, mp.mpf(1e-4))
                                  - adiabatic_action(q1, q2, p1, p2))),
        "action_dev_h1e-5": s(abs(modified_action(q1, q2, p1, p2, mp.mpf(1e-5))
                                  - adiabatic_action(q1, q2, p1, p2))),
        "energy_dev_h1e-4": s(abs(modified_energy(q1, q2, p1, p2, mp.mpf(1e-4))
                                  - energy(q1, q2, p1, p2))),
        "energy_dev_h1e-5": s(abs(modified_energy(q1, q2, p1, p2, mp.mpf(1e-5))
                                  - energy(q1, q2, p1, p2))),
    }

    path = os.path.join(os.path.dirname(__file__), "oracle_values.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    print(f"wrote {path} ({len(out)} entries)")


if __name__ == "__main__":
    main()
