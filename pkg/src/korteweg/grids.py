"""Structured uniform grids and discretization descriptors.

Grids are collocated and uniform.  Periodic grids place nodes at
``x_i = i*h`` so that the first node sits on the domain edge and the last
spacing wraps around; bounded (Neumann) grids are cell-centered,
``x_i = (i + 1/2)*h``, which makes even reflection about the walls the
natural ghost-value rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError

MIN_CELLS_PER_AXIS = 8


class BoundaryKind(Enum):
    PERIODIC = "periodic"
    BOUNDED_NEUMANN_1D = "bounded_neumann_1d"


class Scheme(Enum):
    SPECTRAL = "spectral"
    FD2 = "fd2"


@dataclass(frozen=True)
class Grid:
    """Uniform structured grid in one or two dimensions.

    ``n`` counts cells per axis (equal to the number of nodes stored),
    ``length`` is the physical extent per axis, so the spacing is
    ``h = length / n`` on every axis.
    """

    dim: int
    n: tuple[int, ...]
    length: tuple[float, ...]
    boundary: BoundaryKind = BoundaryKind.PERIODIC

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigError(f"grid dim must be 1 or 2, got {self.dim}")
        object.__setattr__(self, "n", tuple(int(k) for k in self.n))
        object.__setattr__(self, "length", tuple(float(l) for l in self.length))
        if len(self.n) != self.dim or len(self.length) != self.dim:
            raise ConfigError("n and length must have one entry per axis")
        if any(k < MIN_CELLS_PER_AXIS for k in self.n):
            raise ConfigError(f"need at least {MIN_CELLS_PER_AXIS} cells per axis, got {self.n}")
        if any(l <= 0.0 for l in self.length):
            raise ConfigError(f"axis lengths must be positive, got {self.length}")
        if self.boundary is BoundaryKind.BOUNDED_NEUMANN_1D and self.dim != 1:
            raise ConfigError("bounded Neumann grids are one-dimensional only")

    @classmethod
    def periodic(cls, n, length=None) -> "Grid":
        n = (n,) if np.isscalar(n) else tuple(n)
        if length is None:
            length = (2.0 * np.pi,) * len(n)
        length = (length,) if np.isscalar(length) else tuple(length)
        return cls(dim=len(n), n=n, length=length, boundary=BoundaryKind.PERIODIC)

    @classmethod
    def bounded_neumann_1d(cls, n: int, length: float = 1.0) -> "Grid":
        return cls(dim=1, n=(int(n),), length=(float(length),),
                   boundary=BoundaryKind.BOUNDED_NEUMANN_1D)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple(l / k for l, k in zip(self.length, self.n))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def is_periodic(self) -> bool:
        return self.boundary is BoundaryKind.PERIODIC

    def axis_coords(self, axis: int) -> np.ndarray:
        h = self.h[axis]
        i = np.arange(self.n[axis], dtype=float)
        if self.is_periodic:
            return i * h
        return (i + 0.5) * h

    def coords(self) -> tuple[np.ndarray, ...]:
        """Node coordinate arrays, broadcast to the full grid shape."""
        axes = [self.axis_coords(a) for a in range(self.dim)]
        if self.dim == 1:
            return (axes[0],)
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def header(self) -> str:
        """Self-describing one-line header used by snapshot files."""
        n = ",".join(str(k) for k in self.n)
        length = ",".join(f"{l!r}" for l in self.length)
        return f"# grid dim={self.dim} n={n} length={length} boundary={self.boundary.value}"


@dataclass(frozen=True)
class Discretization:
    """Choice of discrete calculus: Fourier-spectral or centered differences.

    ``dealias`` enables a 2/3-rule filter on nonlinear advective fluxes;
    it has no effect on the differential operators themselves.
    """

    scheme: Scheme = Scheme.SPECTRAL
    dealias: bool = False

    def require_compatible(self, grid: Grid) -> None:
        if self.scheme is Scheme.SPECTRAL and not grid.is_periodic:
            raise ConfigError("spectral differentiation requires a periodic grid")


SPECTRAL = Discretization(Scheme.SPECTRAL)
FD2 = Discretization(Scheme.FD2)
