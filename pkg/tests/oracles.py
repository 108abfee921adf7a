"""Independent reference implementations used only to check the package.

Everything here is deliberately written from first principles (Gaussian
elimination, closed forms, scalar equations of motion) so it shares no
code path with the implementations under test.
"""

import math


def gauss_solve(a, b):
    """Solve a @ x = b by Gaussian elimination with partial pivoting."""
    n = len(b)
    m = [list(row) + [bi] for row, bi in zip(a, b)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[pivot][col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n + 1):
                m[r][c] -= f * m[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        s = m[r][n] - sum(m[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / m[r][r]
    return tuple(x)


def solve_2x2(m, b):
    """Closed-form inverse of a 2x2 system."""
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        (m[1][1] * b[0] - m[0][1] * b[1]) / det,
        (-m[1][0] * b[0] + m[0][0] * b[1]) / det,
    )


def scara_joint4_closed_form(p, tau4, t):
    """(q4, dq4) at time t for the decoupled vertical joint from rest.

    The joint obeys m4 qdd = (tau4 - m4 g) - B4 qd, a first-order linear
    ODE in the velocity with gain (tau4 - m4 g)/B4 and time constant
    m4/B4.
    """
    v_inf = (tau4 - p.m4 * p.g) / p.B4
    t_c = p.m4 / p.B4
    decay = 1.0 - math.exp(-t / t_c)
    return v_inf * t - v_inf * t_c * decay, v_inf * decay


def pendulum_equation_residuals(p, s, ddq, tau):
    """Residuals of the two scalar equations of motion.

    Arm:      (I0 + L0^2 m1 + l1^2 m1 sin^2 th1) th0dd + L0 l1 m1 cos(th1) th1dd
              + 2 l1^2 m1 w0 w1 sin cos - L0 l1 m1 w1^2 sin - tau
    Pendulum: (I1 + l1^2 m1) th1dd + L0 l1 m1 cos(th1) th0dd
              - l1^2 m1 w0^2 sin cos - m1 g l1 sin
    Both are zero for a consistent (state, acceleration, torque) triple.
    """
    th1 = s.q[1]
    w0, w1 = s.dq
    a0, a1 = ddq
    sin1, cos1 = math.sin(th1), math.cos(th1)
    ml2 = p.l1 * p.l1 * p.m1
    cross = p.L0 * p.l1 * p.m1
    arm = (
        p.I0 * a0
        + p.L0 * p.L0 * p.m1 * a0
        + ml2 * (a0 * sin1 * sin1 + 2.0 * w0 * w1 * sin1 * cos1)
        + cross * (a1 * cos1 - w1 * w1 * sin1)
        - tau
    )
    pend = (
        p.I1 * a1
        + ml2 * a1
        + cross * a0 * cos1
        - ml2 * w0 * w0 * sin1 * cos1
        - p.m1 * p.g * p.l1 * sin1
    )
    return arm, pend


def interp_states(times, states, t_query, channel):
    """Linear interpolation of one state channel onto a query time."""
    from bisect import bisect_left

    i = bisect_left(times, t_query)
    if i <= 0:
        return states[0][channel]
    if i >= len(times):
        return states[-1][channel]
    t0, t1 = times[i - 1], times[i]
    w = (t_query - t0) / (t1 - t0)
    return states[i - 1][channel] * (1.0 - w) + states[i][channel] * w
