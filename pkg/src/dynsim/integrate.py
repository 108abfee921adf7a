"""Explicit ODE integrators: fixed-step RK4 and adaptive Dormand-Prince 4(5).

The fixed-step classical Runge-Kutta method doubles as a brute-force
reference for the adaptive solver. The adaptive solver is the usual
Dormand-Prince embedded pair: the 5th-order solution is propagated
(local extrapolation) and the difference to the embedded 4th-order
solution drives the step-size controller.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

Vec = tuple[float, ...]
OdeRhs = Callable[[float, Vec], Vec]

# Smallest step the adaptive solver will attempt, as a fraction of the span.
MIN_STEP_FRACTION = 1e-14


class IntegrationError(RuntimeError):
    """Base class for integration failures."""


class NonFiniteState(IntegrationError):
    """The state left the finite floating-point range (blow-up or model bug)."""


class MaxStepsExceeded(IntegrationError):
    """The solver hit its step budget before reaching the end time."""


class StepUnderflow(IntegrationError):
    """Error control demanded a step below the resolvable minimum."""


class StepMeta(NamedTuple):
    """Per-accepted-step record: step size and scaled error estimate."""

    h: float
    error: float


class SolverStats(NamedTuple):
    accepted: int
    rejected: int
    rhs_evals: int


@dataclass(frozen=True)
class SolverOptions:
    """Adaptive solver settings.

    ``h_init`` and ``h_max`` default to (tf - t0)/100 and (tf - t0)/10
    when left as None. ``max_steps`` bounds the total number of step
    attempts, accepted or rejected.
    """

    rtol: float = 1e-3
    atol: float = 1e-6
    h_init: float | None = None
    h_max: float | None = None
    max_steps: int = 1_000_000

    def resolve(self, t0: float, tf: float) -> tuple[float, float]:
        """Return concrete (h_init, h_max) for the span, validating all fields."""
        if not (self.rtol > 0.0):
            raise ValueError(f"rtol must be > 0, got {self.rtol}")
        if not (self.atol > 0.0):
            raise ValueError(f"atol must be > 0, got {self.atol}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        span = tf - t0
        h_max = span / 10.0 if self.h_max is None else self.h_max
        h_init = span / 100.0 if self.h_init is None else self.h_init
        if self.h_init is None:
            h_init = min(h_init, h_max)
        if not (0.0 < h_init <= h_max):
            raise ValueError(f"need 0 < h_init <= h_max, got {h_init} and {h_max}")
        return h_init, h_max


@dataclass
class Trajectory:
    """Time-stamped solution samples plus per-step bookkeeping.

    ``times[0]`` is exactly the requested t0 and ``times[-1]`` exactly tf;
    one state per time, one StepMeta per accepted step.
    """

    times: list[float] = field(default_factory=list)
    states: list[Vec] = field(default_factory=list)
    step_meta: list[StepMeta] = field(default_factory=list)
    stats: SolverStats = SolverStats(0, 0, 0)

    def __len__(self) -> int:
        return len(self.times)

    def channel(self, index: int) -> list[float]:
        """All samples of one state component."""
        return [s[index] for s in self.states]


def _check_span(t0: float, tf: float) -> None:
    if not (tf > t0):
        raise ValueError(f"need tf > t0, got t0={t0}, tf={tf}")


def rk4(f: OdeRhs, t0: float, x0: Vec, tf: float, h: float) -> Trajectory:
    """Classical 4th-order Runge-Kutta with a uniform step.

    The final step is shortened so the last sample lands on ``tf``
    exactly. Every step is recorded. Raises NonFiniteState as soon as a
    state component leaves the finite range.
    """
    _check_span(t0, tf)
    if not (h > 0.0):
        raise ValueError(f"step size must be > 0, got {h}")

    x = tuple(map(float, x0))
    times = [t0]
    states = [x]
    meta: list[StepMeta] = []
    evals = 0
    t = t0
    i = 0
    while t < tf:
        rem = tf - t
        last = rem <= h
        hs = rem if last else h
        half = 0.5 * hs
        k1 = f(t, x)
        k2 = f(t + half, tuple(xj + half * kj for xj, kj in zip(x, k1)))
        k3 = f(t + half, tuple(xj + half * kj for xj, kj in zip(x, k2)))
        k4 = f(t + hs, tuple(xj + hs * kj for xj, kj in zip(x, k3)))
        sixth = hs / 6.0
        x = tuple(
            xj + sixth * (a + 2.0 * (b + c) + d)
            for xj, a, b, c, d in zip(x, k1, k2, k3, k4)
        )
        evals += 4
        i += 1
        # Recompute from the step index to keep the grid drift-free.
        t_next = tf if last else t0 + i * h
        if not all(map(math.isfinite, x)):
            raise NonFiniteState(f"state became non-finite at t={t_next:.6g}")
        if t_next <= t:
            raise StepUnderflow(f"step {hs:.3e} is below time resolution at t={t:.6g}")
        t = t_next
        times.append(t)
        states.append(x)
        meta.append(StepMeta(hs, 0.0))
    return Trajectory(times, states, meta, SolverStats(i, 0, evals))


# Dormand-Prince RKDP coefficients (stage nodes, coupling, and the
# difference row between the 5th- and embedded 4th-order weights).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def dopri45(f: OdeRhs, t0: float, x0: Vec, tf: float, opts: SolverOptions) -> Trajectory:
    """Adaptive Dormand-Prince 4(5) embedded pair.

    A step is accepted when the RMS scaled error

        err = sqrt(mean_i (e_i / (atol + rtol * max(|x_i|, |x_new_i|)))^2)

    is <= 1, and the next step is h * min(5, max(0.2, 0.9 * err^(-1/5))),
    capped at h_max. The 5th-order solution is propagated; the first
    stage of each step reuses the last stage of the previous one (FSAL).
    A non-finite stage or error estimate is treated as a failed step and
    retried at the maximum shrink factor, so transient overshoot at a
    too-large step heals itself; persistent failure ends in StepUnderflow.
    Every accepted step is recorded, the last one clipped to land on tf.
    """
    _check_span(t0, tf)
    h, h_max = opts.resolve(t0, tf)
    h_min = MIN_STEP_FRACTION * (tf - t0)

    x = tuple(map(float, x0))
    n = len(x)
    t = t0
    k1 = f(t, x)
    evals = 1
    if not all(map(math.isfinite, k1)):
        raise NonFiniteState(f"derivative non-finite at t={t0:.6g}")

    times = [t0]
    states = [x]
    meta: list[StepMeta] = []
    accepted = 0
    rejected = 0
    attempts = 0
    while t < tf:
        if attempts >= opts.max_steps:
            raise MaxStepsExceeded(
                f"exceeded {opts.max_steps} step attempts at t={t:.6g} (of tf={tf:.6g})"
            )
        attempts += 1
        rem = tf - t
        last = h >= rem
        hs = rem if last else h

        k2 = f(t + _C2 * hs, tuple(xj + hs * _A21 * a for xj, a in zip(x, k1)))
        k3 = f(
            t + _C3 * hs,
            tuple(xj + hs * (_A31 * a + _A32 * b) for xj, a, b in zip(x, k1, k2)),
        )
        k4 = f(
            t + _C4 * hs,
            tuple(
                xj + hs * (_A41 * a + _A42 * b + _A43 * c)
                for xj, a, b, c in zip(x, k1, k2, k3)
            ),
        )
        k5 = f(
            t + _C5 * hs,
            tuple(
                xj + hs * (_A51 * a + _A52 * b + _A53 * c + _A54 * d)
                for xj, a, b, c, d in zip(x, k1, k2, k3, k4)
            ),
        )
        k6 = f(
            t + hs,
            tuple(
                xj + hs * (_A61 * a + _A62 * b + _A63 * c + _A64 * d + _A65 * e)
                for xj, a, b, c, d, e in zip(x, k1, k2, k3, k4, k5)
            ),
        )
        x_new = tuple(
            xj + hs * (_B1 * a + _B3 * c + _B4 * d + _B5 * e + _B6 * g)
            for xj, a, c, d, e, g in zip(x, k1, k3, k4, k5, k6)
        )
        k7 = f(t + hs, x_new)
        evals += 6

        err_sq = 0.0
        for xj, xnj, a, c, d, e, g, s7 in zip(x, x_new, k1, k3, k4, k5, k6, k7):
            e_j = hs * (_E1 * a + _E3 * c + _E4 * d + _E5 * e + _E6 * g + _E7 * s7)
            sc = opts.atol + opts.rtol * max(abs(xj), abs(xnj))
            err_sq += (e_j / sc) * (e_j / sc)
        err = math.sqrt(err_sq / n)

        if err <= 1.0:
            # Accepted: err finite by construction (NaN compares false).
            t_next = tf if last else t + hs
            if not all(map(math.isfinite, x_new)):
                raise NonFiniteState(f"state became non-finite at t={t_next:.6g}")
            if t_next <= t:
                raise StepUnderflow(
                    f"step {hs:.3e} is below time resolution at t={t:.6g}"
                )
            t = t_next
            x = x_new
            k1 = k7
            accepted += 1
            times.append(t)
            states.append(x)
            meta.append(StepMeta(hs, err))
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h = min(hs * factor, h_max)
        else:
            rejected += 1
            factor = 0.2 if not math.isfinite(err) else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h = hs * factor
            if h < h_min:
                raise StepUnderflow(
                    f"required step {h:.3e} below {h_min:.3e} at t={t:.6g}"
                )
    return Trajectory(times, states, meta, SolverStats(accepted, rejected, evals))
