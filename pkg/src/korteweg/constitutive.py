"""Scalar constitutive laws for the incompressible-phases mixture.

The mixture closure ties concentration to density: with specific volumes
``tau1 != tau2`` of the two phases, ``1/rho = c*tau1 + (1-c)*tau2``.
Everything downstream (bulk energy, capillarity, extended Helmholtz
energy, augmented bulk viscosity) is a function of density alone.

Two sign conventions for inverting the closure are selectable:

* ``CONSISTENT`` (default): ``c = (1/rho - tau2) / (tau1 - tau2)``, the
  actual inverse of the closure, so pure phases sit at c = 0 and c = 1.
* ``LITERAL``: ``c = (1/rho - tau1) / (tau1 - tau2)``, an off-by-one
  variant that is sometimes quoted; it differs from CONSISTENT by the
  constant -1, so every derivative-based identity below holds under
  either choice, but the closure ``G_p(p, c(rho)) = 1/rho`` does not.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError

log = logging.getLogger(__name__)


class Convention(Enum):
    CONSISTENT = "consistent"
    LITERAL = "literal"


@dataclass(frozen=True)
class DoubleWell:
    """Quartic double well W(c) = scale * c^2 (1-c)^2.

    Minima at the pure phases c = 0, 1; W >= 0; W'(0) = W'(1) = 0.
    ``scale = 0`` disables the well.  Swap in a different potential by
    subclassing and overriding the three methods.
    """

    scale: float = 1.0

    def __post_init__(self):
        if self.scale < 0.0:
            raise ConfigError("double-well scale must be >= 0")

    def value(self, c):
        return self.scale * c * c * (1.0 - c) ** 2

    def derivative(self, c):
        return self.scale * 2.0 * c * (1.0 - c) * (1.0 - 2.0 * c)

    def second_derivative(self, c):
        return self.scale * (2.0 - 12.0 * c + 12.0 * c * c)


@dataclass(frozen=True)
class FluidParams:
    """Physical constants of the two-phase mixture.

    tau1, tau2       specific volumes of the pure phases (> 0, distinct)
    temperature      fixed temperature theta (> 0)
    delta            capillarity scale of the concentration gradient energy (> 0)
    shear_viscosity  mu (>= 0)
    bulk_viscosity   lambda; may be negative as long as
                     lambda + 2*mu/dim >= 0 for the run's dimension
    mobility         default scalar mobility gamma (> 0)
    """

    tau1: float = 1.0
    tau2: float = 0.5
    temperature: float = 1.0
    delta: float = 1e-2
    shear_viscosity: float = 1e-2
    bulk_viscosity: float = 0.0
    mobility: float = 1.0
    well: DoubleWell = field(default_factory=DoubleWell)
    convention: Convention = Convention.CONSISTENT

    def __post_init__(self):
        if self.tau1 <= 0.0 or self.tau2 <= 0.0:
            raise ConfigError("specific volumes must be positive")
        if self.tau1 == self.tau2:
            raise ConfigError("specific volumes must differ (tau1 != tau2)")
        if self.temperature <= 0.0:
            raise ConfigError("temperature must be positive")
        if self.delta <= 0.0:
            raise ConfigError("delta must be positive")
        if self.shear_viscosity < 0.0:
            raise ConfigError("shear viscosity must be >= 0")
        if self.mobility <= 0.0:
            raise ConfigError("mobility must be positive")

    @property
    def delta_tau(self) -> float:
        return self.tau1 - self.tau2

    @property
    def delta_star(self) -> float:
        """theta * delta / delta_tau^2 (> 0); sets the capillarity scale."""
        return self.temperature * self.delta / self.delta_tau**2

    def validate_for_dim(self, dim: int) -> None:
        if self.bulk_viscosity + 2.0 * self.shear_viscosity / dim < 0.0:
            raise ConfigError(
                f"bulk viscosity {self.bulk_viscosity} violates "
                f"lambda + 2*mu/{dim} >= 0")

    def pure_phase_densities(self) -> tuple[float, float]:
        return 1.0 / self.tau1, 1.0 / self.tau2


def _require_positive_rho(rho) -> None:
    if np.any(np.asarray(rho) <= 0.0):
        raise DomainError("density must be positive")


def gibbs_energy(p, c, grad_c_sq, params: FluidParams):
    """Pressure-based mixture energy (c tau1 + (1-c) tau2) p + theta (W + delta/2 |grad c|^2)."""
    w = params.well.value(c)
    return (c * params.tau1 + (1.0 - c) * params.tau2) * p \
        + params.temperature * (w + 0.5 * params.delta * grad_c_sq)


def concentration(rho, params: FluidParams):
    """Concentration as a function of density under the selected convention."""
    _require_positive_rho(rho)
    if params.convention is Convention.CONSISTENT:
        return (1.0 / rho - params.tau2) / params.delta_tau
    return (1.0 / rho - params.tau1) / params.delta_tau


def concentration_drho(rho, params: FluidParams):
    """d/drho of concentration: -1/(delta_tau rho^2), identical for both conventions."""
    _require_positive_rho(rho)
    return -1.0 / (params.delta_tau * np.asarray(rho, dtype=float) ** 2)


def phase_mass_density(rho, params: FluidParams):
    """rho * c(rho): mass of phase 1 per unit volume."""
    return rho * concentration(rho, params)


def phase_mass_density_drho(rho, params: FluidParams):
    """Exact derivative of rho*c(rho); a constant for this linear closure."""
    _require_positive_rho(rho)
    tau = params.tau2 if params.convention is Convention.CONSISTENT else params.tau1
    return np.full_like(np.asarray(rho, dtype=float), -tau / params.delta_tau)


def bulk_energy(rho, params: FluidParams):
    """theta * W(c(rho)): the double-well energy expressed in density."""
    return params.temperature * params.well.value(concentration(rho, params))


def bulk_energy_drho(rho, params: FluidParams):
    return params.temperature * params.well.derivative(concentration(rho, params)) \
        * concentration_drho(rho, params)


def bulk_energy_d2rho(rho, params: FluidParams):
    c = concentration(rho, params)
    dc = concentration_drho(rho, params)
    d2c = 2.0 / (params.delta_tau * np.asarray(rho, dtype=float) ** 3)
    return params.temperature * (params.well.second_derivative(c) * dc * dc
                                 + params.well.derivative(c) * d2c)


def capillarity(rho, params: FluidParams):
    """Density-gradient energy coefficient delta_star / rho^3."""
    _require_positive_rho(rho)
    return params.delta_star / np.asarray(rho, dtype=float) ** 3


def helmholtz_energy(rho, grad_rho_sq, params: FluidParams):
    """Extended Helmholtz energy: bulk part plus (capillarity/(2 rho)) |grad rho|^2."""
    _require_positive_rho(rho)
    return bulk_energy(rho, params) \
        + 0.5 * params.delta_star * grad_rho_sq / np.asarray(rho, dtype=float) ** 4


def helmholtz_energy_drho(rho, grad_rho_sq, params: FluidParams):
    """Partial derivative in rho at fixed |grad rho|^2."""
    _require_positive_rho(rho)
    return bulk_energy_drho(rho, params) \
        - 2.0 * params.delta_star * grad_rho_sq / np.asarray(rho, dtype=float) ** 5


def augmented_bulk_viscosity(rho, params: FluidParams):
    """lambda + delta_star / (sqrt(delta) rho): the local closure's extra bulk term."""
    _require_positive_rho(rho)
    return params.bulk_viscosity + params.delta_star / (np.sqrt(params.delta) * rho)


def admissible_density_window(params: FluidParams, margin: float = 0.5) -> tuple[float, float]:
    """Density range on which the concentration stays near [0, 1]."""
    lo, hi = sorted(params.pure_phase_densities())
    return lo * (1.0 - margin), hi * (1.0 + margin)


def warn_outside_window(rho, params: FluidParams, margin: float = 0.5, context: str = "") -> bool:
    lo, hi = admissible_density_window(params, margin)
    rmin, rmax = float(np.min(rho)), float(np.max(rho))
    if rmin < lo or rmax > hi:
        log.warning("density range [%.6g, %.6g] leaves admissible window [%.6g, %.6g]%s",
                    rmin, rmax, lo, hi, f" ({context})" if context else "")
        return True
    return False
