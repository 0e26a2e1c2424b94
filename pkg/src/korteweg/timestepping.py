"""Explicit SSP-RK3 (Shu-Osher) integration of reduced mixture states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constitutive as law
from .constitutive import FluidParams
from .elliptic import Mobility
from .errors import ConfigError, StateError
from .fields import ScalarField, VectorField
from .grids import Discretization
from .models import MixtureState, ModelKind, rhs_nsk1, rhs_nsk2

# Shu-Osher stage weights (prev-state weight, euler-step weight); each row
# is a convex combination, which is what makes the scheme SSP.
SHU_OSHER_COEFFS = ((0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0))


@dataclass(frozen=True)
class StepControl:
    """CFL-style step selection and run horizon.

    ``dt_fixed`` bypasses the estimate (used by temporal-convergence
    studies); otherwise the step is the clamped minimum of the advective,
    viscous, and capillary candidates.
    """

    t_end: float = 1.0
    cfl_advective: float = 0.4
    cfl_parabolic: float = 0.2
    dt_min: float = 1e-10
    dt_max: float = 1.0
    dt_fixed: float | None = None
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not (0.0 < self.dt_min <= self.dt_max):
            raise ConfigError("need 0 < dt_min <= dt_max")
        if not (0.0 < self.cfl_advective <= 1.0 and 0.0 < self.cfl_parabolic <= 1.0):
            raise ConfigError("CFL safety factors must be in (0, 1]")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be >= 0")


def dt_candidates(state: MixtureState, params: FluidParams,
                  control: StepControl = StepControl()) -> dict[str, float]:
    """Unclamped advective/viscous/capillary step candidates."""
    grid = state.grid
    h_min = min(grid.h)
    r = state.rho.values
    u = state.velocity()
    speed = np.sqrt(sum(c * c for c in u.components))
    cs_sq = 2.0 * r * law.bulk_energy_drho(r, params) + r * r * law.bulk_energy_d2rho(r, params)
    cs = np.sqrt(max(float(np.max(cs_sq)), 1e-12))
    fastest = float(np.max(speed)) + cs
    adv = control.cfl_advective * h_min / fastest if fastest > 0.0 else np.inf

    rho_min = float(np.min(r))
    lam_star_max = float(np.max(np.abs(law.augmented_bulk_viscosity(r, params))))
    visc_denom = 2.0 * params.shear_viscosity + lam_star_max
    visc = control.cfl_parabolic * h_min**2 * rho_min / visc_denom \
        if visc_denom > 1e-300 else np.inf

    ds = params.delta_star
    cap = control.cfl_parabolic * h_min**2 * rho_min**2 / np.sqrt(ds) \
        if ds > 1e-300 else np.inf
    return {"advective": adv, "viscous": visc, "capillary": cap}


def estimate_dt(state: MixtureState, params: FluidParams,
                kind: ModelKind = ModelKind.NSK1,
                control: StepControl = StepControl()) -> float:
    """Stable-step estimate, clamped to [dt_min, dt_max].

    The same bound serves both reduced models: the non-local stress is no
    stiffer than its local counterpart at equal parameters.
    """
    cand = min(dt_candidates(state, params, control).values())
    return float(np.clip(cand, control.dt_min, control.dt_max))


RhsEvaluator = Callable[[MixtureState], tuple[ScalarField, VectorField]]


def make_rhs(params: FluidParams, kind: ModelKind, gamma: Mobility | None,
             d: Discretization) -> RhsEvaluator:
    if kind is ModelKind.NSK1:
        return lambda s: rhs_nsk1(s, params, d)
    if gamma is None:
        raise ConfigError("the non-local reduced model needs a mobility")
    return lambda s: rhs_nsk2(s, params, gamma, d)


def _euler(state: MixtureState, dt: float, rhs: RhsEvaluator) -> MixtureState:
    drho, dm = rhs(state)
    rho = ScalarField(state.grid, state.rho.values + dt * drho.values)
    m = VectorField(state.grid, tuple(a + dt * b for a, b in
                                      zip(state.m.components, dm.components)))
    return MixtureState(rho, m, state.t + dt)


def _blend(a: MixtureState, wa: float, b: MixtureState, wb: float,
           t: float) -> MixtureState:
    rho = ScalarField(a.grid, wa * a.rho.values + wb * b.rho.values)
    m = VectorField(a.grid, tuple(wa * x + wb * y for x, y in
                                  zip(a.m.components, b.m.components)))
    return MixtureState(rho, m, t)


def ssprk3_step(state: MixtureState, dt: float, rhs: RhsEvaluator) -> MixtureState:
    """One Shu-Osher three-stage third-order step."""
    if dt <= 0.0:
        raise ConfigError("dt must be positive")
    u1 = _euler(state, dt, rhs)
    u2 = _blend(state, 0.75, _euler(u1, dt, rhs), 0.25, state.t + 0.5 * dt)
    return _blend(state, 1.0 / 3.0, _euler(u2, dt, rhs), 2.0 / 3.0, state.t + dt)


Observer = Callable[[int, MixtureState, float], None]


@dataclass
class IntegrationResult:
    state: MixtureState
    steps: int
    dt_last: float = 0.0
    metrics: list = field(default_factory=list)


def step_metrics(step: int, state: MixtureState, dt: float) -> dict:
    """One line of the metrics stream."""
    u = state.velocity()
    speed = np.sqrt(sum(c * c for c in u.components))
    return {
        "step": step,
        "t": state.t,
        "dt": dt,
        "mass": float(state.rho.values.mean()),
        "momentum": [float(c.mean()) for c in state.m.components],
        "min_rho": float(np.min(state.rho.values)),
        "max_speed": float(np.max(speed)),
    }


def integrate(state: MixtureState, control: StepControl, params: FluidParams,
              kind: ModelKind = ModelKind.NSK1, gamma: Mobility | None = None,
              d: Discretization = Discretization(),
              observers: tuple[Observer, ...] = (),
              record_metrics: bool = False) -> IntegrationResult:
    """Step the reduced system until t_end, invoking observers each step.

    Observers are called once at step 0 and after every accepted step.
    Aborts with a stiffness diagnostic if the step estimate undershoots
    dt_min; density-floor violations propagate as StateError with the
    offending fields attached.
    """
    rhs = make_rhs(params, kind, gamma, d)
    d.require_compatible(state.grid)
    params.validate_for_dim(state.grid.dim)
    law.warn_outside_window(state.rho.values, params, context="initial state")
    result = IntegrationResult(state=state, steps=0)

    def notify(step, st, dt):
        if record_metrics:
            result.metrics.append(step_metrics(step, st, dt))
        for obs in observers:
            obs(step, st, dt)

    notify(0, state, 0.0)
    step = 0
    while state.t < control.t_end - 1e-14 and step < control.max_steps:
        if control.dt_fixed is not None:
            dt = control.dt_fixed
        else:
            cand = min(dt_candidates(state, params, control).values())
            if cand < control.dt_min:
                raise StateError(
                    f"stiffness abort: stable step {cand:.3e} fell below "
                    f"dt_min {control.dt_min:.3e} at t = {state.t:.6g}",
                    state=state)
            dt = min(cand, control.dt_max)
        dt = min(dt, control.t_end - state.t)
        state = ssprk3_step(state, dt, rhs)
        step += 1
        notify(step, state, dt)
        result.state = state
        result.steps = step
        result.dt_last = dt
    return result
