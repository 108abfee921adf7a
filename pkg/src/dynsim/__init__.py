"""Open-loop simulation toolkit for nonlinear rigid-body systems.

Ships two plants (a 4-DOF SCARA arm and a rotary inverted pendulum),
fixed-step RK4 and adaptive Dormand-Prince 4(5) integrators, a scenario
harness with CSV/SVG output, and a physics verification suite.
"""

from .analysis import (
    Lcg,
    ModelMismatch,
    VerificationReport,
    el_residual,
    energy_drift,
    power_balance_residual,
    run_verification,
    skew_symmetry_check,
)
from .harness import (
    NamedTrajectory,
    Rk4Options,
    Scenario,
    ScenarioError,
    TorqueSchedule,
    UnknownScenario,
    builtin_scenario,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
    simulate,
    write_csv,
)
from .integrate import (
    IntegrationError,
    MaxStepsExceeded,
    NonFiniteState,
    SolverOptions,
    SolverStats,
    StepMeta,
    StepUnderflow,
    Trajectory,
    dopri45,
    rk4,
)
from .models import (
    EnergyBreakdown,
    PendulumParams,
    ScaraParams,
    State,
    pendulum_accel,
    pendulum_bias,
    pendulum_energy,
    pendulum_lagrangian,
    pendulum_mass_matrix,
    scara_accel,
    scara_coriolis,
    scara_energy,
    scara_gravity,
    scara_mass_matrix,
)
from .plotting import UnknownChannel, render_svg
from .smallmat import NotPositiveDefinite, cholesky_solve, mat_vec

__version__ = "0.1.0"
