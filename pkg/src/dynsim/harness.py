"""Scenario definition and execution: torque input -> dynamics -> integration.

A Scenario bundles a model, its parameters, an initial state, a torque
schedule, the time span, and solver settings. Scenarios serialize to a
strict JSON schema (snake_case field names, unknown keys rejected) so
typos in physics parameters fail loudly instead of silently defaulting.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, fields, replace
from typing import IO, Any

from .integrate import OdeRhs, SolverOptions, Trajectory, dopri45, rk4
from .models import (
    PendulumParams,
    ScaraParams,
    State,
    pendulum_accel,
    scara_accel,
)

SCENARIO_NAMES = ("scara-paper", "pendulum-paper")


class UnknownScenario(ValueError):
    """Requested built-in scenario name does not exist."""


class ScenarioError(ValueError):
    """Scenario data violates the schema or is physically inconsistent."""


@dataclass(frozen=True)
class TorqueSchedule:
    """Constant or piecewise-constant input torque vector.

    ``values`` holds one vector per segment; a piecewise schedule with k
    switch times has k+1 segments and evaluates right-continuously at
    each switch instant.
    """

    kind: str
    values: tuple[tuple[float, ...], ...]
    switch_times: tuple[float, ...] = ()

    @classmethod
    def constant(cls, vec: tuple[float, ...]) -> "TorqueSchedule":
        return cls("constant", (tuple(float(v) for v in vec),))

    @classmethod
    def piecewise(
        cls, values: list[tuple[float, ...]], switch_times: list[float]
    ) -> "TorqueSchedule":
        return cls(
            "piecewise-constant",
            tuple(tuple(float(v) for v in vec) for vec in values),
            tuple(float(t) for t in switch_times),
        )

    def validate(self, dim: int) -> None:
        if self.kind not in ("constant", "piecewise-constant"):
            raise ScenarioError(f"unknown torque kind {self.kind!r}")
        if len(self.values) != len(self.switch_times) + 1:
            raise ScenarioError(
                f"{len(self.values)} torque segments need "
                f"{len(self.values) - 1} switch times, got {len(self.switch_times)}"
            )
        if self.kind == "constant" and self.switch_times:
            raise ScenarioError("constant torque must not declare switch times")
        for vec in self.values:
            if len(vec) != dim:
                raise ScenarioError(
                    f"torque vector {vec} has length {len(vec)}, model expects {dim}"
                )
            if not all(map(math.isfinite, vec)):
                raise ScenarioError(f"torque vector {vec} has non-finite entries")
        for a, b in zip(self.switch_times, self.switch_times[1:]):
            if not (b > a):
                raise ScenarioError(f"switch times must be strictly increasing, got {a} then {b}")

    def at(self, t: float) -> tuple[float, ...]:
        """Torque vector at time t (right-continuous at switch times)."""
        if not self.switch_times:
            return self.values[0]
        return self.values[bisect_right(self.switch_times, t)]


@dataclass(frozen=True)
class Rk4Options:
    """Fixed-step settings used when the scenario selects the rk4 solver."""

    h: float


@dataclass(frozen=True)
class Scenario:
    model: str
    params: ScaraParams | PendulumParams
    initial_state: State
    torque: TorqueSchedule
    t0: float
    tf: float
    solver: str = "dopri45"
    solver_options: SolverOptions | Rk4Options = SolverOptions()


@dataclass(frozen=True)
class NamedTrajectory:
    """Trajectory plus channel labels and units, ready for CSV/plots."""

    trajectory: Trajectory
    labels: tuple[str, ...]
    units: tuple[str, ...]

    @property
    def times(self) -> list[float]:
        return self.trajectory.times

    def channel(self, label: str) -> list[float]:
        try:
            index = self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown channel {label!r}; have {', '.join(self.labels)}") from None
        return self.trajectory.channel(index)


@dataclass(frozen=True)
class _ModelInfo:
    dof: int
    input_dim: int
    labels: tuple[str, ...]
    units: tuple[str, ...]
    params_type: type


_MODELS = {
    "scara": _ModelInfo(
        dof=4,
        input_dim=4,
        labels=("q1", "q2", "q3", "q4", "dq1", "dq2", "dq3", "dq4"),
        units=("rad", "rad", "rad", "m", "rad/s", "rad/s", "rad/s", "m/s"),
        params_type=ScaraParams,
    ),
    "pendulum": _ModelInfo(
        dof=2,
        input_dim=1,
        labels=("theta0", "theta1", "dtheta0", "dtheta1"),
        units=("rad", "rad", "rad/s", "rad/s"),
        params_type=PendulumParams,
    ),
}


def model_info(model: str) -> _ModelInfo:
    try:
        return _MODELS[model]
    except KeyError:
        raise ScenarioError(f"unknown model {model!r}; expected scara or pendulum") from None


def builtin_scenario(name: str) -> Scenario:
    """Built-in open-loop scenarios with the reference parameter sets."""
    if name == "scara-paper":
        return Scenario(
            model="scara",
            params=ScaraParams(),
            initial_state=State.zero(4),
            torque=TorqueSchedule.constant((3.0, 2.0, 0.0, 30.0)),
            t0=0.0,
            tf=10.0,
        )
    if name == "pendulum-paper":
        return Scenario(
            model="pendulum",
            params=PendulumParams(),
            initial_state=State.zero(2),
            torque=TorqueSchedule.constant((0.0,)),
            t0=0.0,
            tf=5.0,
        )
    raise UnknownScenario(f"unknown scenario {name!r}; built-ins: {', '.join(SCENARIO_NAMES)}")


def _make_rhs(scenario: Scenario) -> OdeRhs:
    p = scenario.params
    schedule = scenario.torque
    constant = schedule.kind == "constant"
    if scenario.model == "scara":
        tau0 = schedule.values[0]

        def rhs(t: float, x: tuple[float, ...]) -> tuple[float, ...]:
            tau = tau0 if constant else schedule.at(t)
            dq = x[4:]
            return dq + scara_accel(p, x[:4], dq, tau)

    else:
        tau0_scalar = schedule.values[0][0]

        def rhs(t: float, x: tuple[float, ...]) -> tuple[float, ...]:
            tau = tau0_scalar if constant else schedule.at(t)[0]
            dd = pendulum_accel(p, State((x[0], x[1]), (x[2], x[3])), tau)
            return (x[2], x[3], dd[0], dd[1])

    return rhs


def validate_scenario(scenario: Scenario) -> None:
    info = model_info(scenario.model)
    if not isinstance(scenario.params, info.params_type):
        raise ScenarioError(
            f"model {scenario.model!r} needs {info.params_type.__name__}, "
            f"got {type(scenario.params).__name__}"
        )
    try:
        scenario.params.validate()
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    s = scenario.initial_state
    if len(s.q) != info.dof or len(s.dq) != info.dof:
        raise ScenarioError(
            f"initial state needs {info.dof} coordinates and velocities, "
            f"got {len(s.q)} and {len(s.dq)}"
        )
    if not all(map(math.isfinite, s.q + s.dq)):
        raise ScenarioError("initial state has non-finite entries")
    scenario.torque.validate(info.input_dim)
    if not (scenario.tf > scenario.t0):
        raise ScenarioError(f"need tf > t0, got t0={scenario.t0}, tf={scenario.tf}")
    if scenario.solver == "rk4":
        if not isinstance(scenario.solver_options, Rk4Options):
            raise ScenarioError("rk4 solver needs solver_options with a fixed step h")
        if not (scenario.solver_options.h > 0.0):
            raise ScenarioError(f"rk4 step must be > 0, got {scenario.solver_options.h}")
    elif scenario.solver == "dopri45":
        if not isinstance(scenario.solver_options, SolverOptions):
            raise ScenarioError("dopri45 solver needs adaptive solver_options")
    else:
        raise ScenarioError(f"unknown solver {scenario.solver!r}; expected rk4 or dopri45")


def simulate(scenario: Scenario) -> NamedTrajectory:
    """Integrate the scenario and return a labeled trajectory.

    The first recorded sample is exactly the initial state; equal
    scenarios produce bit-identical trajectories.
    """
    validate_scenario(scenario)
    info = model_info(scenario.model)
    rhs = _make_rhs(scenario)
    x0 = scenario.initial_state.as_vector()
    if scenario.solver == "rk4":
        traj = rk4(rhs, scenario.t0, x0, scenario.tf, scenario.solver_options.h)
    else:
        traj = dopri45(rhs, scenario.t0, x0, scenario.tf, scenario.solver_options)
    return NamedTrajectory(traj, info.labels, info.units)


def write_csv(nt: NamedTrajectory, sink: IO[bytes]) -> None:
    """Write the trajectory as CSV with 17-significant-digit values.

    Header is ``t,<labels...>``; line endings are "\\n"; the decimal
    separator is always "." so files round-trip bit-exactly anywhere.
    """
    lines = ["t," + ",".join(nt.labels)]
    for t, state in zip(nt.trajectory.times, nt.trajectory.states):
        lines.append(",".join(f"{v:.17g}" for v in (t, *state)))
    sink.write(("\n".join(lines) + "\n").encode("ascii"))


# --- JSON schema -------------------------------------------------------------

_SCENARIO_KEYS = ("model", "params", "initial_state", "torque", "t0", "tf",
                  "solver", "solver_options")


def _reject_unknown(data: dict, allowed: tuple[str, ...], where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ScenarioError(f"unknown {where} field(s): {', '.join(unknown)}")


def _float_list(value: Any, where: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise ScenarioError(f"{where} must be a list of numbers, got {value!r}")
    return tuple(float(v) for v in value)


def scenario_to_dict(scenario: Scenario) -> dict:
    """Fully resolved JSON-ready form; inverse of scenario_from_dict."""
    opts = scenario.solver_options
    if isinstance(opts, Rk4Options):
        opts_dict: dict[str, Any] = {"h": opts.h}
    else:
        opts_dict = {
            "rtol": opts.rtol,
            "atol": opts.atol,
            "h_init": opts.h_init,
            "h_max": opts.h_max,
            "max_steps": opts.max_steps,
        }
    return {
        "model": scenario.model,
        "params": {f.name: getattr(scenario.params, f.name) for f in fields(scenario.params)},
        "initial_state": {"q": list(scenario.initial_state.q),
                          "dq": list(scenario.initial_state.dq)},
        "torque": {
            "kind": scenario.torque.kind,
            "values": [list(v) for v in scenario.torque.values],
            "switch_times": list(scenario.torque.switch_times),
        },
        "t0": scenario.t0,
        "tf": scenario.tf,
        "solver": scenario.solver,
        "solver_options": opts_dict,
    }


def scenario_from_dict(data: dict) -> Scenario:
    """Parse and validate a scenario; missing fields fall back to defaults."""
    if not isinstance(data, dict):
        raise ScenarioError(f"scenario must be a JSON object, got {type(data).__name__}")
    _reject_unknown(data, _SCENARIO_KEYS, "scenario")
    if "model" not in data:
        raise ScenarioError("scenario is missing the required field 'model'")
    info = model_info(data["model"])

    params = info.params_type()
    if "params" in data:
        pdata = data["params"]
        if not isinstance(pdata, dict):
            raise ScenarioError("params must be an object")
        _reject_unknown(pdata, tuple(f.name for f in fields(params)), "params")
        for key, value in pdata.items():
            if not isinstance(value, (int, float)):
                raise ScenarioError(f"params.{key} must be a number, got {value!r}")
        params = replace(params, **{k: float(v) for k, v in pdata.items()})

    initial = State.zero(info.dof)
    if "initial_state" in data:
        sdata = data["initial_state"]
        if not isinstance(sdata, dict):
            raise ScenarioError("initial_state must be an object")
        _reject_unknown(sdata, ("q", "dq"), "initial_state")
        q = _float_list(sdata.get("q", [0.0] * info.dof), "initial_state.q")
        dq = _float_list(sdata.get("dq", [0.0] * info.dof), "initial_state.dq")
        initial = State(q, dq)

    torque = TorqueSchedule.constant((0.0,) * info.input_dim)
    if "torque" in data:
        tdata = data["torque"]
        if not isinstance(tdata, dict):
            raise ScenarioError("torque must be an object")
        _reject_unknown(tdata, ("kind", "values", "switch_times"), "torque")
        if "values" not in tdata:
            raise ScenarioError("torque is missing the required field 'values'")
        values = tdata["values"]
        if not isinstance(values, list) or not values:
            raise ScenarioError("torque.values must be a non-empty list of vectors")
        torque = TorqueSchedule(
            kind=tdata.get("kind", "constant"),
            values=tuple(_float_list(v, "torque.values[i]") for v in values),
            switch_times=_float_list(tdata.get("switch_times", []), "torque.switch_times"),
        )

    solver = data.get("solver", "dopri45")
    opts: SolverOptions | Rk4Options = SolverOptions()
    if "solver_options" in data:
        odata = data["solver_options"]
        if not isinstance(odata, dict):
            raise ScenarioError("solver_options must be an object")
        if solver == "rk4":
            _reject_unknown(odata, ("h",), "solver_options")
            if "h" not in odata:
                raise ScenarioError("rk4 solver_options need the field 'h'")
            opts = Rk4Options(h=float(odata["h"]))
        else:
            _reject_unknown(odata, ("rtol", "atol", "h_init", "h_max", "max_steps"),
                            "solver_options")
            kwargs: dict[str, Any] = {}
            for key in ("rtol", "atol", "h_init", "h_max"):
                if key in odata and odata[key] is not None:
                    kwargs[key] = float(odata[key])
            if "max_steps" in odata:
                kwargs["max_steps"] = int(odata["max_steps"])
            opts = SolverOptions(**kwargs)
    elif solver == "rk4":
        raise ScenarioError("rk4 solver needs solver_options with a fixed step h")

    scenario = Scenario(
        model=data["model"],
        params=params,
        initial_state=initial,
        torque=torque,
        t0=float(data.get("t0", 0.0)),
        tf=float(data["tf"]) if "tf" in data else builtin_default_tf(data["model"]),
        solver=solver,
        solver_options=opts,
    )
    validate_scenario(scenario)
    return scenario


def builtin_default_tf(model: str) -> float:
    return 10.0 if model == "scara" else 5.0


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path} is not valid JSON: {exc}") from None
    return scenario_from_dict(data)
