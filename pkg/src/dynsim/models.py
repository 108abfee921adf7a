"""Plant models: 4-DOF SCARA manipulator and rotary inverted pendulum.

Both models come from the Euler-Lagrange formalism in the form

    M(q) qdd + C(q, qd) qd + B qd + g(q) = tau

with a symmetric positive-definite mass matrix M, so accelerations are
recovered with the Cholesky solver. Angles are not wrapped; coordinates
accumulate exactly as integrated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import NamedTuple

from .smallmat import Mat, Vec, cholesky_solve, mat_vec


@dataclass(frozen=True)
class ScaraParams:
    """Physical constants of the SCARA arm.

    Three horizontal revolute joints (q1..q3, rad) and one vertical
    prismatic joint (q4, m). Defaults follow the reference parameter set:
    inertias are 0.02*m1, 0.08*m2, 0.05*m3, 0.02*m4 for the default
    masses, and the same viscous coefficient applies to every joint.
    """

    m1: float = 15.0  # link masses (kg)
    m2: float = 12.0
    m3: float = 3.0
    m4: float = 3.0
    l1: float = 0.50  # link lengths (m)
    l2: float = 0.40
    lc1: float = 0.25  # distances to link centers of mass (m)
    lc2: float = 0.20
    I1: float = 0.30  # link inertias (kg m^2)
    I2: float = 0.96
    I3: float = 0.15
    I4: float = 0.06
    B1: float = 0.5  # viscous friction per joint
    B2: float = 0.5
    B3: float = 0.5
    B4: float = 0.5
    g: float = 9.81  # gravity (m/s^2)

    def validate(self) -> None:
        for name in ("m1", "m2", "m3", "m4", "l1", "l2", "lc1", "lc2",
                     "I1", "I2", "I3", "I4", "g"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ValueError(f"ScaraParams.{name} must be finite and > 0, got {v}")
        for name in ("B1", "B2", "B3", "B4"):
            v = getattr(self, name)
            if v < 0.0 or not math.isfinite(v):
                raise ValueError(f"ScaraParams.{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class PendulumParams:
    """Physical constants of the rotary inverted pendulum.

    theta0 is the motor-driven horizontal arm, theta1 the free pendulum;
    theta1 = 0 is the upright (unstable) configuration.
    """

    m1: float = 0.2866  # pendulum mass (kg)
    L0: float = 0.201  # arm length (m)
    L1: float = 0.30997  # pendulum full length (m)
    l1: float = 0.15498  # distance to pendulum center of mass (m)
    I0: float = 0.0052  # arm inertia (kg m^2)
    I1: float = 0.0023  # pendulum inertia (kg m^2)
    g: float = 9.81

    def validate(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ValueError(f"PendulumParams.{f.name} must be finite and > 0, got {v}")
        if self.l1 > self.L1:
            raise ValueError(
                f"center of mass distance l1={self.l1} exceeds pendulum length L1={self.L1}"
            )


class State(NamedTuple):
    """Generalized coordinates and velocities (4+4 for SCARA, 2+2 for pendulum)."""

    q: Vec
    dq: Vec

    def as_vector(self) -> Vec:
        """Stack (q, dq) into the flat integrator state."""
        return self.q + self.dq

    @classmethod
    def from_vector(cls, x: Vec) -> "State":
        n = len(x) // 2
        return cls(tuple(x[:n]), tuple(x[n:]))

    @classmethod
    def zero(cls, dof: int) -> "State":
        return cls((0.0,) * dof, (0.0,) * dof)


class EnergyBreakdown(NamedTuple):
    kinetic: float
    potential: float
    total: float


def _kinetic(m: Mat, dq: Vec) -> float:
    s = 0.0
    for mdq_i, dq_i in zip(mat_vec(m, dq), dq):
        s += mdq_i * dq_i
    return 0.5 * s


# --- SCARA -----------------------------------------------------------------

def scara_mass_matrix(p: ScaraParams, q: Vec) -> Mat:
    """Configuration-dependent 4x4 inertia matrix (symmetric by construction)."""
    c2 = math.cos(q[1])
    m34 = p.m3 + p.m4
    m11 = (
        p.I1 + p.I2 + p.I3 + p.I4
        + p.m1 * p.lc1 * p.lc1
        + p.m2 * p.l1 * p.l1
        + p.m2 * (p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2)
        + m34 * (p.l1 * p.l1 + p.l2 * p.l2 + 2.0 * p.l1 * p.l2 * c2)
    )
    m12 = (
        p.I2 + p.I3 + p.I4
        + p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2)
        + m34 * (p.l2 * p.l2 + p.l1 * p.l2 * c2)
    )
    m13 = p.I3 + p.I4  # joint 3 carries both outer bodies
    m22 = p.I2 + p.I3 + p.I4 + p.m2 * p.lc2 * p.lc2 + m34 * p.l2 * p.l2
    return (
        (m11, m12, m13, 0.0),
        (m12, m22, m13, 0.0),
        (m13, m13, m13, 0.0),
        (0.0, 0.0, 0.0, p.m4),
    )


def scara_coriolis(p: ScaraParams, q: Vec, dq: Vec) -> Mat:
    """Coriolis/centrifugal matrix; velocity factors live inside the entries."""
    s2 = math.sin(q[1])
    a = (p.m2 * p.l1 * p.lc2 + (p.m3 + p.m4) * p.l1 * p.l2) * s2
    c11 = -a * dq[1]
    c12 = -a * (dq[0] + dq[1])
    c21 = a * dq[0]
    return (
        (c11, c12, 0.0, 0.0),
        (c21, 0.0, 0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0),
        (0.0, 0.0, 0.0, 0.0),
    )


def scara_gravity(p: ScaraParams) -> Vec:
    """Gravity loads; only the vertical prismatic joint sees weight."""
    return (0.0, 0.0, 0.0, p.m4 * p.g)


def scara_accel(p: ScaraParams, q: Vec, dq: Vec, tau: Vec) -> Vec:
    """Joint accelerations from M(q) qdd = tau - C(q,qd) qd - B qd - g."""
    c_dq = mat_vec(scara_coriolis(p, q, dq), dq)
    grav = scara_gravity(p)
    rhs = (
        tau[0] - c_dq[0] - p.B1 * dq[0] - grav[0],
        tau[1] - c_dq[1] - p.B2 * dq[1] - grav[1],
        tau[2] - c_dq[2] - p.B3 * dq[2] - grav[2],
        tau[3] - c_dq[3] - p.B4 * dq[3] - grav[3],
    )
    return cholesky_solve(scara_mass_matrix(p, q), rhs)


def scara_energy(p: ScaraParams, s: State) -> EnergyBreakdown:
    """Kinetic energy from the mass matrix plus prismatic-joint potential."""
    kin = _kinetic(scara_mass_matrix(p, s.q), s.dq)
    pot = p.m4 * p.g * s.q[3]
    return EnergyBreakdown(kin, pot, kin + pot)


# --- Rotary inverted pendulum ----------------------------------------------

def pendulum_mass_matrix(p: PendulumParams, theta1: float) -> Mat:
    """2x2 inertia matrix of the arm/pendulum in the upright-zero convention."""
    s1 = math.sin(theta1)
    c1 = math.cos(theta1)
    m12 = p.L0 * p.l1 * p.m1 * c1
    return (
        (p.I0 + p.L0 * p.L0 * p.m1 + p.l1 * p.l1 * p.m1 * s1 * s1, m12),
        (m12, p.I1 + p.l1 * p.l1 * p.m1),
    )


def pendulum_bias(p: PendulumParams, s: State) -> Vec:
    """Velocity and gravity terms b such that M thdd + b = (tau, 0)."""
    theta1 = s.q[1]
    w0, w1 = s.dq
    s1 = math.sin(theta1)
    c1 = math.cos(theta1)
    ml2 = p.l1 * p.l1 * p.m1
    return (
        2.0 * ml2 * w0 * w1 * s1 * c1 - p.L0 * p.l1 * p.m1 * w1 * w1 * s1,
        -ml2 * w0 * w0 * s1 * c1 - p.m1 * p.g * p.l1 * s1,
    )


def pendulum_accel(p: PendulumParams, s: State, tau: float) -> Vec:
    """Angular accelerations; the input torque acts on the arm only."""
    b = pendulum_bias(p, s)
    return cholesky_solve(pendulum_mass_matrix(p, s.q[1]), (tau - b[0], -b[1]))


def pendulum_energy(p: PendulumParams, s: State) -> EnergyBreakdown:
    """Kinetic plus potential energy, zero at the upright rest state.

    The potential m1*g*l1*(cos(theta1) - 1) peaks at theta1 = 0, which
    pins the upright configuration as the zero reference.
    """
    theta1 = s.q[1]
    w0, w1 = s.dq
    s1 = math.sin(theta1)
    c1 = math.cos(theta1)
    kin = (
        0.5 * p.I0 * w0 * w0
        + 0.5 * p.I1 * w1 * w1
        + 0.5 * p.m1 * (
            p.L0 * p.L0 * w0 * w0
            + p.l1 * p.l1 * (w1 * w1 + w0 * w0 * s1 * s1)
            + 2.0 * p.L0 * p.l1 * w0 * w1 * c1
        )
    )
    pot = p.m1 * p.g * p.l1 * (c1 - 1.0)
    return EnergyBreakdown(kin, pot, kin + pot)


def pendulum_lagrangian(p: PendulumParams, s: State) -> float:
    """Lagrangian L = kinetic - potential."""
    e = pendulum_energy(p, s)
    return e.kinetic - e.potential
