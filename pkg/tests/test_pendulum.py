import math
from dataclasses import replace

import pytest

from dynsim import (
    Lcg,
    PendulumParams,
    State,
    cholesky_solve,
    pendulum_accel,
    pendulum_bias,
    pendulum_energy,
    pendulum_lagrangian,
    pendulum_mass_matrix,
)
from dynsim.analysis import el_residual

from oracles import pendulum_equation_residuals, solve_2x2

P = PendulumParams()

# Hand-evaluated with the default constants: m1 g l1 = 0.2866 * 9.81 * 0.15498.
M_G_L = 0.43573339908


def test_parameter_validation():
    P.validate()
    with pytest.raises(ValueError, match="I0"):
        replace(P, I0=0.0).validate()
    with pytest.raises(ValueError, match="l1"):
        replace(P, l1=0.4).validate()


def test_mass_matrix_upright():
    m = pendulum_mass_matrix(P, 0.0)
    # I0 + L0^2 m1, L0 l1 m1, I1 + l1^2 m1 with the default constants.
    assert m[0][0] == pytest.approx(0.0167789266, abs=1e-9)
    assert m[0][1] == pytest.approx(0.008927870868, abs=1e-9)
    assert m[1][0] == pytest.approx(0.008927870868, abs=1e-9)
    assert m[1][1] == pytest.approx(0.0091837880, abs=1e-9)


def test_mass_matrix_structure():
    m = pendulum_mass_matrix(P, math.pi / 2.0)
    assert abs(m[0][1]) < 1e-15 and abs(m[1][0]) < 1e-15
    for th1 in (-2.1, 0.3, 1.7, 4.0):
        m = pendulum_mass_matrix(P, th1)
        assert m[0][1] == m[1][0]
        assert m[1][1] == P.I1 + P.l1 * P.l1 * P.m1


def test_mass_matrix_positive_definite_over_configurations():
    rng = Lcg(5)
    for _ in range(1000):
        th1 = rng.uniform_in(0.0, 2.0 * math.pi)
        cholesky_solve(pendulum_mass_matrix(P, th1), (0.0, 0.0))


def test_bias_equilibria():
    assert pendulum_bias(P, State.zero(2)) == (0.0, 0.0)
    b = pendulum_bias(P, State((0.0, math.pi), (0.0, 0.0)))
    assert b[0] == 0.0
    assert abs(b[1]) < 1e-15


def test_bias_horizontal_gravity_torque():
    b = pendulum_bias(P, State((0.0, math.pi / 2.0), (0.0, 0.0)))
    assert b[0] == 0.0
    assert b[1] == pytest.approx(-M_G_L, abs=1e-9)


def test_accel_equilibria():
    assert pendulum_accel(P, State.zero(2), 0.0) == (0.0, 0.0)
    hanging = pendulum_accel(P, State((0.0, math.pi), (0.0, 0.0)), 0.0)
    assert hanging == pytest.approx((0.0, 0.0), abs=1e-12)


def test_accel_matches_closed_form_inverse():
    acc = pendulum_accel(P, State.zero(2), 0.01)
    expected = solve_2x2(pendulum_mass_matrix(P, 0.0), (0.01, 0.0))
    assert acc == pytest.approx(expected, abs=1e-12)


def test_accel_satisfies_scalar_equations():
    rng = Lcg(17)
    for _ in range(1000):
        s = State(
            (rng.uniform_in(-math.pi, math.pi), rng.uniform_in(-math.pi, math.pi)),
            (rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0)),
        )
        tau = rng.uniform_in(-1.0, 1.0)
        arm, pend = pendulum_equation_residuals(P, s, pendulum_accel(P, s, tau), tau)
        assert abs(arm) <= 1e-10
        assert abs(pend) <= 1e-10


def test_energy_upright_rest_is_zero():
    assert pendulum_energy(P, State.zero(2)) == (0.0, 0.0, 0.0)


def test_energy_hand_values():
    # Hanging: U = -2 m1 g l1.
    e = pendulum_energy(P, State((0.0, math.pi), (0.0, 0.0)))
    assert e.potential == pytest.approx(-2.0 * M_G_L, abs=1e-9)
    assert e.kinetic == 0.0
    # Arm spin only: K = (I0 + m1 L0^2)/2.
    e = pendulum_energy(P, State((0.0, 0.0), (1.0, 0.0)))
    assert e.kinetic == pytest.approx(0.00838946330, abs=1e-9)
    assert e.kinetic == pytest.approx(0.0083896, abs=1e-6)
    assert e.potential == 0.0


def test_energy_total_and_positivity():
    rng = Lcg(23)
    for _ in range(500):
        s = State(
            (rng.uniform_in(-math.pi, math.pi), rng.uniform_in(-math.pi, math.pi)),
            (rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0)),
        )
        e = pendulum_energy(P, s)
        assert e.kinetic >= 0.0
        assert e.total == e.kinetic + e.potential
        assert e.potential <= 0.0  # upright is the potential maximum


def test_upright_is_potential_maximum():
    u0 = pendulum_energy(P, State.zero(2)).potential
    for th1 in (-0.1, 0.1, 1.0, math.pi):
        assert pendulum_energy(P, State((0.0, th1), (0.0, 0.0))).potential < u0


def test_lagrangian():
    assert pendulum_lagrangian(P, State.zero(2)) == 0.0
    hanging = pendulum_lagrangian(P, State((0.0, math.pi), (0.0, 0.0)))
    assert hanging == pytest.approx(2.0 * M_G_L, abs=1e-9)
    rng = Lcg(29)
    for _ in range(100):
        s = State(
            (rng.uniform_in(-math.pi, math.pi), rng.uniform_in(-math.pi, math.pi)),
            (rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0)),
        )
        e = pendulum_energy(P, s)
        assert pendulum_lagrangian(P, s) == e.kinetic - e.potential


def test_bias_gravity_term_is_potential_gradient():
    """The gravity entry of the bias must equal dU/dtheta1."""
    h = 1e-6
    for th1 in (-2.5, -1.0, 0.3, 1.2, 2.9):
        up = pendulum_energy(P, State((0.0, th1 + h), (0.0, 0.0))).potential
        dn = pendulum_energy(P, State((0.0, th1 - h), (0.0, 0.0))).potential
        grad = (up - dn) / (2.0 * h)
        b = pendulum_bias(P, State((0.0, th1), (0.0, 0.0)))
        assert b[1] == pytest.approx(grad, abs=1e-6)


def test_accel_consistent_with_differenced_lagrangian():
    rng = Lcg(37)
    for _ in range(100):
        s = State(
            (rng.uniform_in(-math.pi, math.pi), rng.uniform_in(-math.pi, math.pi)),
            (rng.uniform_in(-2.0, 2.0), rng.uniform_in(-2.0, 2.0)),
        )
        tau = 0.5
        r = el_residual(P, s, pendulum_accel(P, s, tau), tau)
        assert max(abs(r[0]), abs(r[1])) <= 1e-4
