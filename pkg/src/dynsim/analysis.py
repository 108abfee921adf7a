"""Physics verification: Lagrangian cross-checks and energy bookkeeping.

Each check reduces to a scalar residual compared against a fixed
threshold. Sampling uses a self-contained 64-bit LCG so a report is
bit-reproducible from its seed on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .harness import Scenario, TorqueSchedule, builtin_scenario, simulate
from .integrate import SolverOptions, Trajectory
from .models import (
    PendulumParams,
    ScaraParams,
    State,
    pendulum_accel,
    pendulum_energy,
    pendulum_lagrangian,
    pendulum_mass_matrix,
    scara_coriolis,
    scara_energy,
    scara_mass_matrix,
)
from .smallmat import NotPositiveDefinite, cholesky_solve

# Central-difference step for all derivative checks.
FD_STEP = 1e-6

# Sampling ranges for randomized checks: positions and velocities.
POSITION_RANGE = (-math.pi, math.pi)
VELOCITY_RANGE = (-2.0, 2.0)

DEFAULT_SEED = 1


class ModelMismatch(ValueError):
    """Trajectory state dimension does not fit the requested model."""


class Lcg:
    """64-bit linear congruential generator.

    x_{n+1} = (6364136223846793005 * x_n + 1442695040888963407) mod 2^64,
    with uniform doubles taken from the top 53 bits of each new state.
    Deliberately minimal so the sample sequence can be reproduced exactly
    from the seed in any language.
    """

    MULT = 6364136223846793005
    INC = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def uniform(self) -> float:
        """Next uniform double in [0, 1)."""
        self.state = (self.MULT * self.state + self.INC) & self.MASK
        return (self.state >> 11) * 2.0 ** -53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()


@dataclass(frozen=True)
class VerificationReport:
    """One check outcome; passes exactly when max_residual <= threshold."""

    name: str
    max_residual: float
    threshold: float
    passed: bool
    samples: int

    @classmethod
    def create(cls, name: str, max_residual: float, threshold: float,
               samples: int) -> "VerificationReport":
        return cls(name, max_residual, threshold, max_residual <= threshold, samples)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.max_residual,
            "threshold": self.threshold,
            "pass": self.passed,
        }

    def text_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name:<24} residual={self.max_residual:<12.4e} "
            f"threshold={self.threshold:<10.1e} samples={self.samples}"
        )


def el_residual(p: PendulumParams, s: State, ddq: tuple[float, float],
                tau: float) -> tuple[float, float]:
    """Euler-Lagrange residual d/dt(dL/dqd_i) - dL/dq_i - (tau, 0)_i.

    Everything is differenced numerically from the Lagrangian: the
    generalized momenta come from central differences in the velocities,
    and their time derivative from one central difference of the momenta
    along the motion direction (q advanced by h*dq, dq by h*ddq), which
    is the chain rule with the supplied accelerations. Differencing each
    second partial separately would square the round-off of FD_STEP and
    get amplified by large accelerations; the directional form does not.
    """
    h = FD_STEP
    q, dq = s.q, s.dq
    qp = tuple(qi + h * vi for qi, vi in zip(q, dq))
    qm = tuple(qi - h * vi for qi, vi in zip(q, dq))
    vp = tuple(vi + h * ai for vi, ai in zip(dq, ddq))
    vm = tuple(vi - h * ai for vi, ai in zip(dq, ddq))

    def momentum(i: int, q_: tuple[float, ...], v_: tuple[float, ...]) -> float:
        up = list(v_)
        dn = list(v_)
        up[i] += h
        dn[i] -= h
        return (
            pendulum_lagrangian(p, State(q_, tuple(up)))
            - pendulum_lagrangian(p, State(q_, tuple(dn)))
        ) / (2.0 * h)

    out = []
    for i in range(2):
        p_dot = (momentum(i, qp, vp) - momentum(i, qm, vm)) / (2.0 * h)
        up = list(q)
        dn = list(q)
        up[i] += h
        dn[i] -= h
        dl_dq = (
            pendulum_lagrangian(p, State(tuple(up), dq))
            - pendulum_lagrangian(p, State(tuple(dn), dq))
        ) / (2.0 * h)
        out.append(p_dot - dl_dq - (tau if i == 0 else 0.0))
    return (out[0], out[1])


def energy_drift(p: ScaraParams | PendulumParams, traj: Trajectory, model: str) -> float:
    """Max |E(t) - E(0)| over the samples of an unforced, frictionless run."""
    if model == "scara":
        expected = 8
        energy = lambda s: scara_energy(p, s).total
    elif model == "pendulum":
        expected = 4
        energy = lambda s: pendulum_energy(p, s).total
    else:
        raise ModelMismatch(f"unknown model {model!r}")
    if traj.states and len(traj.states[0]) != expected:
        raise ModelMismatch(
            f"{model} state has {expected} entries, trajectory carries {len(traj.states[0])}"
        )
    e0 = energy(State.from_vector(traj.states[0]))
    drift = 0.0
    for x in traj.states:
        d = abs(energy(State.from_vector(x)) - e0)
        if d > drift:
            drift = d
    return drift


def power_balance_residual(p: ScaraParams, traj: Trajectory,
                           tau: TorqueSchedule) -> float:
    """|dE - integral of dq . (tau - B dq) dt| with a trapezoid quadrature.

    The friction matrix dissipates dq^T B dq and the input injects
    dq^T tau; everything else (gravity, Coriolis) is conservative, so
    the mismatch measures integration plus quadrature error.
    """
    b = (p.B1, p.B2, p.B3, p.B4)

    def power(t: float, x: tuple[float, ...]) -> float:
        dq = x[4:]
        tv = tau.at(t)
        return sum(dqi * (ti - bi * dqi) for dqi, ti, bi in zip(dq, tv, b))

    work = 0.0
    for i in range(len(traj.times) - 1):
        dt = traj.times[i + 1] - traj.times[i]
        work += 0.5 * dt * (power(traj.times[i], traj.states[i])
                            + power(traj.times[i + 1], traj.states[i + 1]))
    e0 = scara_energy(p, State.from_vector(traj.states[0])).total
    e1 = scara_energy(p, State.from_vector(traj.states[-1])).total
    return abs(e1 - e0 - work)


def skew_residual(p: ScaraParams, q: tuple[float, ...], dq: tuple[float, ...]) -> float:
    """max |(Mdot - 2C) + (Mdot - 2C)^T| at one state, Mdot by central differences."""
    h = FD_STEP
    qp = tuple(qi + h * vi for qi, vi in zip(q, dq))
    qm = tuple(qi - h * vi for qi, vi in zip(q, dq))
    mp = scara_mass_matrix(p, qp)
    mm = scara_mass_matrix(p, qm)
    c = scara_coriolis(p, q, dq)
    worst = 0.0
    for i in range(4):
        for j in range(4):
            n_ij = (mp[i][j] - mm[i][j]) / (2.0 * h) - 2.0 * c[i][j]
            n_ji = (mp[j][i] - mm[j][i]) / (2.0 * h) - 2.0 * c[j][i]
            worst = max(worst, abs(n_ij + n_ji))
    return worst


def skew_symmetry_check(p: ScaraParams, samples: int, seed: int) -> VerificationReport:
    """Mdot - 2C must be skew-symmetric at randomly sampled states."""
    rng = Lcg(seed)
    worst = 0.0
    for _ in range(samples):
        q = tuple(rng.uniform_in(*POSITION_RANGE) for _ in range(4))
        dq = tuple(rng.uniform_in(*VELOCITY_RANGE) for _ in range(4))
        worst = max(worst, skew_residual(p, q, dq))
    return VerificationReport.create("scara-skew-symmetry", worst, 1e-5, samples)


def el_residual_check(p: PendulumParams, samples: int, seed: int,
                      tau: float = 0.5) -> VerificationReport:
    """Implemented accelerations must satisfy the differenced Lagrangian."""
    rng = Lcg(seed)
    worst = 0.0
    for _ in range(samples):
        s = State(
            tuple(rng.uniform_in(*POSITION_RANGE) for _ in range(2)),
            tuple(rng.uniform_in(*VELOCITY_RANGE) for _ in range(2)),
        )
        r = el_residual(p, s, pendulum_accel(p, s, tau), tau)
        worst = max(worst, abs(r[0]), abs(r[1]))
    return VerificationReport.create("pendulum-el-residual", worst, 1e-4, samples)


def _spd_check(name: str, mass_at, samples: int, seed: int, dim: int) -> VerificationReport:
    """Count Cholesky failures over uniformly sampled configurations in [0, 2pi)."""
    rng = Lcg(seed)
    failures = 0
    zero = (0.0,) * dim
    for _ in range(samples):
        angle = rng.uniform_in(0.0, 2.0 * math.pi)
        try:
            cholesky_solve(mass_at(angle), zero)
        except NotPositiveDefinite:
            failures += 1
    return VerificationReport.create(name, float(failures), 0.0, samples)


def mass_spd_checks(scara: ScaraParams, pendulum: PendulumParams, samples: int,
                    seed: int) -> list[VerificationReport]:
    return [
        _spd_check(
            "scara-mass-spd",
            lambda q2: scara_mass_matrix(scara, (0.0, q2, 0.0, 0.0)),
            samples, seed, 4,
        ),
        _spd_check(
            "pendulum-mass-spd",
            lambda th1: pendulum_mass_matrix(pendulum, th1),
            samples, seed + 1, 2,
        ),
    ]


def energy_drift_check(p: PendulumParams) -> VerificationReport:
    """Free pendulum released near hanging must conserve energy tightly."""
    scenario = Scenario(
        model="pendulum",
        params=p,
        initial_state=State((0.0, math.pi - 0.1), (0.0, 0.0)),
        torque=TorqueSchedule.constant((0.0,)),
        t0=0.0,
        tf=5.0,
        solver_options=SolverOptions(rtol=1e-10, atol=1e-12),
    )
    traj = simulate(scenario).trajectory
    drift = energy_drift(p, traj, "pendulum")
    return VerificationReport.create("pendulum-energy-drift", drift, 1e-8, len(traj))


def power_balance_check(p: ScaraParams) -> VerificationReport:
    """Forced, damped arm run must balance energy against injected work."""
    base = builtin_scenario("scara-paper")
    scenario = Scenario(
        model="scara",
        params=p,
        initial_state=base.initial_state,
        torque=base.torque,
        t0=base.t0,
        tf=base.tf,
        solver_options=SolverOptions(rtol=1e-8, atol=1e-10, h_max=1e-3),
    )
    traj = simulate(scenario).trajectory
    residual = power_balance_residual(p, traj, scenario.torque)
    return VerificationReport.create("scara-power-balance", residual, 1e-3, len(traj))


def run_verification(seed: int = DEFAULT_SEED) -> list[VerificationReport]:
    """Run the full check suite with the reference parameter sets."""
    scara = ScaraParams()
    pendulum = PendulumParams()
    reports = mass_spd_checks(scara, pendulum, 1000, seed)
    reports.append(skew_symmetry_check(scara, 1000, seed + 2))
    reports.append(el_residual_check(pendulum, 100, seed + 3))
    reports.append(energy_drift_check(pendulum))
    reports.append(power_balance_check(scara))
    return reports
