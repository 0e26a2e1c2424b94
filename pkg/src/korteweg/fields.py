"""Grid-indexed scalar, vector, and symmetric-tensor fields.

Fields are immutable value types: constructors copy their input and mark
the arrays read-only, and every operation in the package returns new
fields.  Values are stored axis-major (C order), axis 0 = x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grids import Grid


def _frozen_array(values, grid: Grid) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.shape != grid.shape:
        raise DomainError(f"field shape {arr.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("field contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, self.grid))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "ScalarField":
        return cls(grid, fn(*grid.coords()))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))


@dataclass(frozen=True)
class VectorField:
    grid: Grid
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        comps = tuple(_frozen_array(c, self.grid) for c in self.components)
        if len(comps) != self.grid.dim:
            raise DomainError(f"expected {self.grid.dim} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_functions(cls, grid: Grid, fns) -> "VectorField":
        xs = grid.coords()
        return cls(grid, tuple(fn(*xs) for fn in fns))

    @classmethod
    def zero(cls, grid: Grid) -> "VectorField":
        return cls(grid, tuple(np.zeros(grid.shape) for _ in range(grid.dim)))

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.components[i])


def tensor_component_names(dim: int) -> tuple[str, ...]:
    return ("xx",) if dim == 1 else ("xx", "xy", "yy")


@dataclass(frozen=True)
class SymTensorField:
    """Symmetric rank-2 tensor; only the upper triangle is stored.

    Component order: 1-D ``(xx,)``; 2-D ``(xx, xy, yy)``.
    """

    grid: Grid
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        comps = tuple(_frozen_array(c, self.grid) for c in self.components)
        expected = self.grid.dim * (self.grid.dim + 1) // 2
        if len(comps) != expected:
            raise DomainError(f"expected {expected} tensor components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def isotropic(cls, grid: Grid, diag) -> "SymTensorField":
        """diag(s, ..., s) for a scalar grid function s."""
        diag = np.asarray(diag, dtype=float)
        zero = np.zeros(grid.shape)
        if grid.dim == 1:
            return cls(grid, (diag,))
        return cls(grid, (diag, zero, diag.copy()))

    @classmethod
    def outer(cls, grid: Grid, v: tuple[np.ndarray, ...]) -> "SymTensorField":
        """v (x) v for a vector of component arrays."""
        if grid.dim == 1:
            return cls(grid, (v[0] * v[0],))
        return cls(grid, (v[0] * v[0], v[0] * v[1], v[1] * v[1]))

    def comp(self, i: int, j: int) -> np.ndarray:
        if self.grid.dim == 1:
            return self.components[0]
        idx = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}[(i, j)]
        return self.components[idx]

    def add(self, other: "SymTensorField") -> "SymTensorField":
        if other.grid is not self.grid and other.grid != self.grid:
            raise DomainError("tensor grids differ")
        return SymTensorField(self.grid, tuple(a + b for a, b in
                                               zip(self.components, other.components)))

    def sub(self, other: "SymTensorField") -> "SymTensorField":
        return SymTensorField(self.grid, tuple(a - b for a, b in
                                               zip(self.components, other.components)))

    def trace(self) -> np.ndarray:
        if self.grid.dim == 1:
            return self.components[0].copy()
        return self.components[0] + self.components[2]


def sup_norm(field) -> float:
    """Max absolute nodal value of a scalar/vector/tensor field."""
    if isinstance(field, ScalarField):
        return float(np.max(np.abs(field.values)))
    return float(max(np.max(np.abs(c)) for c in field.components))


def write_scalar_csv(field: ScalarField, path, config_hash: str | None = None) -> None:
    """One CSV per field: grid header, then node coordinates + value rows."""
    grid = field.grid
    coords = grid.coords()
    with open(path, "w") as fh:
        fh.write(grid.header() + "\n")
        if config_hash is not None:
            fh.write(f"# config {config_hash}\n")
        cols = ["x", "y"][: grid.dim] + ["value"]
        fh.write(",".join(cols) + "\n")
        flat_coords = [c.ravel() for c in coords]
        flat_vals = field.values.ravel()
        for idx in range(flat_vals.size):
            row = [f"{c[idx]:.17g}" for c in flat_coords] + [f"{flat_vals[idx]:.17g}"]
            fh.write(",".join(row) + "\n")


def read_scalar_csv(path) -> tuple[dict, np.ndarray]:
    """Read back a snapshot CSV; returns (header metadata, value column)."""
    meta = {}
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# grid"):
                for part in line[len("# grid"):].split():
                    key, _, val = part.partition("=")
                    meta[key] = val
            elif line.startswith("# config"):
                meta["config"] = line.split()[-1]
            elif line and not line.startswith("#") and not line[0].isalpha():
                values.append(float(line.split(",")[-1]))
    return meta, np.asarray(values)
