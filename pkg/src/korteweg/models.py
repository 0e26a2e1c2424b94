"""Reduced Navier-Stokes-Korteweg systems and the full-model residuals.

The two mixture models (with and without phase transformation) reduce to
density/momentum systems once the incompressible-phases closure ties the
concentration to the density.  This module provides

* the semi-discrete right-hand sides of both reduced systems,
* reconstruction of the eliminated fields (concentration, pressure, and
  the production rate or chemical potential) from a reduced state, and
* residual evaluation of the *full* three-equation systems on reduced
  states -- the reduction theorems run backwards.

The full systems are never time-stepped: the closure makes them
differential-algebraic, so they are only ever checked residually.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import constitutive as law
from .constitutive import FluidParams
from .elliptic import Mobility, apply_operator, invert_for_model
from .errors import ConfigError, StateError
from .fields import ScalarField, SymTensorField, VectorField, sup_norm
from .grids import Discretization, Scheme
from .operators import dealias_array, div, div_tensor, grad
from .tensors import (augmented_cauchy_stress, cauchy_stress, korteweg_tensor,
                      nonlocal_cauchy_stress, phase_stress)

RHO_FLOOR = 1e-8


class ModelKind(Enum):
    NSK1 = "nsk1"   # reduced from the phase-transformation (Allen-Cahn) model
    NSK2 = "nsk2"   # reduced from the conserved-phase (Cahn-Hilliard) model


@dataclass(frozen=True)
class MixtureState:
    """Reduced-system unknowns: density rho and momentum density m = rho u."""

    rho: ScalarField
    m: VectorField
    t: float = 0.0

    def __post_init__(self):
        if self.m.grid != self.rho.grid:
            raise StateError("state fields live on different grids")
        rmin = float(np.min(self.rho.values))
        if rmin <= RHO_FLOOR:
            raise StateError(f"density fell to {rmin:.3e} (floor {RHO_FLOOR:.0e})",
                             state=(self.rho, self.m, self.t))

    @property
    def grid(self):
        return self.rho.grid

    def velocity(self) -> VectorField:
        r = self.rho.values
        return VectorField(self.grid, tuple(c / r for c in self.m.components))

    @classmethod
    def from_primitive(cls, rho: ScalarField, u: VectorField, t: float = 0.0) -> "MixtureState":
        m = VectorField(rho.grid, tuple(rho.values * c for c in u.components))
        return cls(rho, m, t)


@dataclass(frozen=True)
class ReconstructedFields:
    """Eliminated quantities rebuilt from a reduced state."""

    c: ScalarField
    p: ScalarField
    q: ScalarField | None = None          # production rate (NSK1)
    mu_chem: ScalarField | None = None    # chemical potential (NSK2)


def _local_pressure_part(state: MixtureState, params: FluidParams,
                         d: Discretization) -> np.ndarray:
    """rho^2 R'(rho) - (1/rho) div((delta_star/rho) grad rho); shared by both models."""
    r = state.rho.values
    ds = params.delta_star
    gr = grad(state.rho, d)
    flux = VectorField(state.grid, tuple((ds / r) * g for g in gr.components))
    return r * r * law.bulk_energy_drho(r, params) - div(flux, d).values / r


def reconstruct_pressure_nsac(state: MixtureState, params: FluidParams,
                              d: Discretization) -> ScalarField:
    """Pressure eliminated via the phase-transformation balance.

    p = -(delta_star / (sqrt(delta) rho)) div u
        + rho^2 R'(rho) - (1/rho) div((delta_star/rho) grad rho)
    """
    u = state.velocity()
    divu = div(u, d).values
    r = state.rho.values
    local = _local_pressure_part(state, params, d)
    return ScalarField(state.grid,
                       -(params.delta_star / (np.sqrt(params.delta) * r)) * divu + local)


def reconstruct_pressure_nsch(state: MixtureState, params: FluidParams,
                              gamma: Mobility, d: Discretization) -> ScalarField:
    """Pressure eliminated via the conserved-phase balance (non-local).

    p = -(theta / delta_tau^2) * Lambda_gamma^{-1}(div u) + local part.
    """
    u = state.velocity()
    divu = div(u, d)
    nonlocal_term = invert_for_model(gamma, divu, d)
    scale = params.temperature / params.delta_tau**2
    local = _local_pressure_part(state, params, d)
    return ScalarField(state.grid, -scale * nonlocal_term.values + local)


def reconstruct_fields(state: MixtureState, params: FluidParams, kind: ModelKind,
                       gamma: Mobility | None = None,
                       d: Discretization = Discretization(Scheme.SPECTRAL)) -> ReconstructedFields:
    """Rebuild (c, p, q | mu) from a reduced state under the given model."""
    r = state.rho.values
    law.warn_outside_window(r, params, context="reconstruction")
    c = ScalarField(state.grid, law.concentration(r, params))
    wprime = params.well.derivative(c.values)
    if kind is ModelKind.NSK1:
        p = reconstruct_pressure_nsac(state, params, d)
        q = -(params.delta_tau / params.temperature) * p.values - wprime
        return ReconstructedFields(c=c, p=p, q=ScalarField(state.grid, q))
    if gamma is None:
        raise ConfigError("the conserved-phase model needs a mobility")
    p = reconstruct_pressure_nsch(state, params, gamma, d)
    gc = grad(c, d)
    flux = VectorField(state.grid, tuple(params.delta * r * g for g in gc.components))
    mu = (params.delta_tau / params.temperature) * p.values + wprime \
        - div(flux, d).values / r
    return ReconstructedFields(c=c, p=p, mu_chem=ScalarField(state.grid, mu))


def _advective_fluxes(state: MixtureState, d: Discretization):
    """Mass flux rho u and momentum flux rho u (x) u, optionally dealiased."""
    grid = state.grid
    u = state.velocity()
    mass_flux = [c.copy() for c in state.m.components]
    mom_flux = [state.m.components[i] * u.components[j]
                for i in range(grid.dim) for j in range(i, grid.dim)]
    if d.dealias and d.scheme is Scheme.SPECTRAL:
        mass_flux = [dealias_array(c, grid) for c in mass_flux]
        mom_flux = [dealias_array(c, grid) for c in mom_flux]
    return VectorField(grid, tuple(mass_flux)), SymTensorField(grid, tuple(mom_flux))


def rhs_nsk1(state: MixtureState, params: FluidParams,
             d: Discretization) -> tuple[ScalarField, VectorField]:
    """Semi-discrete right-hand side of the local reduced system."""
    grid = state.grid
    mass_flux, mom_flux = _advective_fluxes(state, d)
    drho = ScalarField(grid, -div(mass_flux, d).values)
    stress = augmented_cauchy_stress(state.velocity(), state.rho, params, d) \
        .add(korteweg_tensor(state.rho, params, d))
    adv = div_tensor(mom_flux, d)
    visc = div_tensor(stress, d)
    dm = VectorField(grid, tuple(v - a for a, v in zip(adv.components, visc.components)))
    return drho, dm


def rhs_nsk2(state: MixtureState, params: FluidParams, gamma: Mobility,
             d: Discretization) -> tuple[ScalarField, VectorField]:
    """Semi-discrete right-hand side of the non-local reduced system.

    Exactly one elliptic solve per evaluation (for the non-local stress).
    """
    grid = state.grid
    u = state.velocity()
    mass_flux, mom_flux = _advective_fluxes(state, d)
    drho = ScalarField(grid, -div(mass_flux, d).values)
    nonlocal_term = invert_for_model(gamma, div(u, d), d)
    stress = nonlocal_cauchy_stress(u, nonlocal_term, params, d) \
        .add(korteweg_tensor(state.rho, params, d))
    adv = div_tensor(mom_flux, d)
    visc = div_tensor(stress, d)
    dm = VectorField(grid, tuple(v - a for a, v in zip(adv.components, visc.components)))
    return drho, dm


@dataclass(frozen=True)
class ResidualReport:
    """Sup-norms of the full-model equations evaluated on a reduced state."""

    mass: float
    momentum: float
    phase: float


def _full_model_gap(state: MixtureState, params: FluidParams, kind: ModelKind,
                    gamma: Mobility | None, d: Discretization,
                    rec: ReconstructedFields) -> VectorField:
    """div(S + P) - div(S_reduced + K), the momentum-flux defect."""
    u = state.velocity()
    full = cauchy_stress(u, params, d).add(
        phase_stress(rec.c, rec.p, state.rho, params, d))
    if kind is ModelKind.NSK1:
        reduced = augmented_cauchy_stress(u, state.rho, params, d)
    else:
        nonlocal_term = invert_for_model(gamma, div(u, d), d)
        reduced = nonlocal_cauchy_stress(u, nonlocal_term, params, d)
    reduced = reduced.add(korteweg_tensor(state.rho, params, d))
    lhs = div_tensor(full, d)
    rhs = div_tensor(reduced, d)
    return VectorField(state.grid,
                       tuple(a - b for a, b in zip(lhs.components, rhs.components)))


def momentum_equivalence_gap(state: MixtureState, params: FluidParams, kind: ModelKind,
                             gamma: Mobility | None = None,
                             d: Discretization = Discretization(Scheme.SPECTRAL)) -> float:
    """Sup-norm distance between the full and reduced momentum fluxes.

    This is the single number that certifies the reduction: it converges
    to zero at scheme order for smooth states.
    """
    rec = reconstruct_fields(state, params, kind, gamma, d)
    return sup_norm(_full_model_gap(state, params, kind, gamma, d, rec))


def _phase_lhs(state: MixtureState, params: FluidParams, d: Discretization,
               drho: ScalarField) -> np.ndarray:
    """d/dt(rho c) + div(rho c u) with the semi-discrete density rate."""
    r = state.rho.values
    u = state.velocity()
    ctilde = law.phase_mass_density(r, params)
    ctilde_prime = law.phase_mass_density_drho(r, params)
    fluxv = VectorField(state.grid, tuple(ctilde * c for c in u.components))
    return ctilde_prime * drho.values + div(fluxv, d).values


def residual_nsac(state: MixtureState, params: FluidParams,
                  d: Discretization) -> ResidualReport:
    """Evaluate the full phase-transformation system on a reduced state.

    Time derivatives are semi-discrete: the density rate comes from the
    continuity right-hand side (mass residual is zero by construction),
    the momentum rate from the reduced system (momentum residual equals
    the equivalence gap), and d/dt(rho c) follows by the closure chain
    rule.  The phase-equation residual is the substantive check and
    converges at scheme order.
    """
    rec = reconstruct_fields(state, params, ModelKind.NSK1, None, d)
    u = state.velocity()
    mass_flux = VectorField(state.grid, state.m.components)
    drho = ScalarField(state.grid, -div(mass_flux, d).values)
    mass = sup_norm(ScalarField(state.grid, drho.values + div(mass_flux, d).values))
    momentum = sup_norm(_full_model_gap(state, params, ModelKind.NSK1, None, d, rec))
    r = state.rho.values
    gc = grad(rec.c, d)
    diff_flux = VectorField(state.grid,
                            tuple(params.delta * r * g for g in gc.components))
    rhs = (r * rec.q.values + div(diff_flux, d).values) / np.sqrt(params.delta)
    phase = sup_norm(ScalarField(state.grid, _phase_lhs(state, params, d, drho) - rhs))
    return ResidualReport(mass=mass, momentum=momentum, phase=phase)


def residual_nsch(state: MixtureState, params: FluidParams, gamma: Mobility,
                  d: Discretization) -> ResidualReport:
    """Evaluate the full conserved-phase system on a reduced state.

    Mirrors :func:`residual_nsac`; the phase residual checks
    d/dt(rho c) + div(rho c u) = div(gamma grad mu) with the
    reconstructed chemical potential.
    """
    rec = reconstruct_fields(state, params, ModelKind.NSK2, gamma, d)
    mass_flux = VectorField(state.grid, state.m.components)
    drho = ScalarField(state.grid, -div(mass_flux, d).values)
    mass = sup_norm(ScalarField(state.grid, drho.values + div(mass_flux, d).values))
    momentum = sup_norm(_full_model_gap(state, params, ModelKind.NSK2, gamma, d, rec))
    ch_flux_div = -apply_operator(gamma, rec.mu_chem, d).values
    phase = sup_norm(ScalarField(state.grid,
                                 _phase_lhs(state, params, d, drho) - ch_flux_div))
    return ResidualReport(mass=mass, momentum=momentum, phase=phase)
