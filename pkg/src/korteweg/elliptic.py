"""The mobility-weighted elliptic operator -div(gamma grad .) and its inverses.

Three inversion settings are provided, each normalized on the
zero-mean subspace (the operator kills constants, so compatible data must
have zero mean and the solution is fixed by mean(phi) = 0):

* periodic grids, constant mobility: diagonal Fourier solve;
* bounded Neumann 1-D grids: preconditioned conjugate gradients on the
  flux-form FD2 matrix (reflected ghosts = zero wall flux);
* free space 1-D: direct convolution with the kernel -|x|/2 on a window,
  for compactly supported data.

Variable mobility on periodic grids falls back to the same conjugate
gradient iteration with the composed discrete operator as matvec.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import CompatibilityError, ConfigError, DomainError, SolverError
from .fields import ScalarField, VectorField
from .grids import Discretization, Grid, Scheme
from .operators import _deriv_wavenumbers, _axis_shaped, div, grad

log = logging.getLogger(__name__)

COMPAT_RTOL = 1e-10
SOLVE_RTOL = 1e-10


@dataclass(frozen=True)
class Mobility:
    """Strictly positive mobility: a constant or one value per node."""

    value: float | np.ndarray

    def __post_init__(self):
        v = self.value
        if np.isscalar(v):
            if v <= 0.0:
                raise ConfigError("mobility must be positive")
            object.__setattr__(self, "value", float(v))
        else:
            arr = np.array(v, dtype=float, copy=True)
            if np.min(arr) <= 0.0:
                raise ConfigError("mobility field must be positive everywhere")
            arr.setflags(write=False)
            object.__setattr__(self, "value", arr)

    @classmethod
    def constant(cls, gamma0: float) -> "Mobility":
        return cls(float(gamma0))

    @classmethod
    def spatial(cls, values) -> "Mobility":
        return cls(np.asarray(values, dtype=float))

    @property
    def is_constant(self) -> bool:
        return np.isscalar(self.value)

    def values_on(self, grid: Grid) -> np.ndarray:
        if self.is_constant:
            return np.full(grid.shape, self.value)
        if self.value.shape != grid.shape:
            raise ConfigError("mobility field shape does not match grid")
        return np.asarray(self.value)


def _check_compatible(f: ScalarField, project: bool, context: str) -> np.ndarray:
    """Enforce (or project off) the zero-mean solvability constraint."""
    fv = f.values
    m = float(fv.mean())
    scale = float(np.max(np.abs(fv)))
    if scale == 0.0:
        return fv
    if abs(m) > COMPAT_RTOL * scale:
        if not project:
            raise CompatibilityError(
                f"{context}: right-hand side mean {m:.3e} exceeds "
                f"{COMPAT_RTOL:.0e} * max|f| = {COMPAT_RTOL * scale:.3e}")
        log.debug("%s: projecting off rhs mean %.3e", context, m)
    return fv - m


def apply_operator(gamma: Mobility, phi: ScalarField, d: Discretization) -> ScalarField:
    """-div(gamma grad phi), assembled in divergence form.

    Periodic grids compose the scheme's grad and div; bounded Neumann
    grids use the compact face-flux form whose wall fluxes vanish exactly
    under even reflection.
    """
    grid = phi.grid
    d.require_compatible(grid)
    gv = gamma.values_on(grid)
    if grid.is_periodic:
        g = grad(phi, d)
        flux = VectorField(grid, tuple(gv * comp for comp in g.components))
        return ScalarField(grid, -div(flux, d).values)
    return ScalarField(grid, _neumann_matvec_arrays(gv, grid)(phi.values))


def _neumann_matvec_arrays(gamma_vals: np.ndarray, grid: Grid):
    """Flux-form FD2 operator on a bounded 1-D grid, as an array->array map."""
    h = grid.h[0]
    gface = 0.5 * (gamma_vals[1:] + gamma_vals[:-1])

    def matvec(phi: np.ndarray) -> np.ndarray:
        flux = gface * (phi[1:] - phi[:-1]) / h
        out = np.empty_like(phi)
        out[0] = flux[0] / h
        out[1:-1] = (flux[1:] - flux[:-1]) / h
        out[-1] = -flux[-1] / h
        return -out

    return matvec


def _pcg_zero_mean(matvec, b: np.ndarray, diag: np.ndarray,
                   rtol: float, max_iter: int, context: str) -> np.ndarray:
    """Jacobi-preconditioned CG on the mean-zero subspace.

    The operators used here map mean-zero vectors to mean-zero vectors
    exactly (divergence form), so a single initial projection suffices.
    """
    b = b - b.mean()
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros_like(b)
    x = np.zeros_like(b)
    r = b.copy()
    z = r / diag
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        ap = matvec(p)
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        rnorm = float(np.linalg.norm(r))
        if rnorm <= rtol * bnorm:
            log.debug("%s: cg converged in %d iterations, residual %.3e",
                      context, it, rnorm / bnorm)
            x -= x.mean()
            return x
        z = r / diag
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverError(f"{context}: cg failed to converge in {max_iter} iterations "
                      f"(relative residual {rnorm / bnorm:.3e})")


def _periodic_symbol(grid: Grid, scheme: Scheme) -> np.ndarray:
    """Fourier symbol of -div(grad .) for the requested scheme."""
    sym = np.zeros(grid.shape)
    for axis in range(grid.dim):
        k = _axis_shaped(_deriv_wavenumbers(grid.n[axis], grid.h[axis]),
                         grid.dim, axis)
        if scheme is Scheme.SPECTRAL:
            sym = sym + k * k
        else:
            h = grid.h[axis]
            sym = sym + (np.sin(k * h) / h) ** 2
    return sym


def invert_periodic(gamma: Mobility, f: ScalarField,
                    d: Discretization = Discretization(Scheme.SPECTRAL),
                    project_mean: bool = False) -> ScalarField:
    """Solve -div(gamma grad phi) = f on a periodic grid, mean(phi) = 0.

    Constant mobility is a diagonal Fourier solve with the scheme-matched
    symbol, so the round trip through :func:`apply_operator` reproduces
    f minus its mean to solver precision.  Variable mobility uses CG with
    the composed operator.
    """
    grid = f.grid
    if not grid.is_periodic:
        raise ConfigError("invert_periodic needs a periodic grid")
    d.require_compatible(grid)
    fv = _check_compatible(f, project_mean, "periodic solve")
    if gamma.is_constant:
        sym = gamma.value * _periodic_symbol(grid, d.scheme)
        fhat = np.fft.fftn(fv)
        with np.errstate(divide="ignore", invalid="ignore"):
            phihat = np.where(sym > 0.0, fhat / np.where(sym > 0.0, sym, 1.0), 0.0)
        phi = np.fft.ifftn(phihat).real
        return ScalarField(grid, phi - phi.mean())
    gv = gamma.values_on(grid)
    size = int(np.prod(grid.shape))

    def matvec(x_flat):
        field = ScalarField(grid, x_flat.reshape(grid.shape))
        return apply_operator(gamma, field, d).values.ravel()

    diag = np.full(size, float(np.mean(gv)) * _periodic_symbol(grid, d.scheme).mean())
    diag = np.maximum(diag, 1e-30)
    x = _pcg_zero_mean(matvec, fv.ravel(), diag, SOLVE_RTOL, 10 * size,
                       "periodic variable-mobility solve")
    return ScalarField(grid, x.reshape(grid.shape))


def invert_neumann_1d(gamma: Mobility, f: ScalarField,
                      rtol: float = SOLVE_RTOL, max_iter: int | None = None,
                      project_mean: bool = False) -> ScalarField:
    """Solve the bounded 1-D problem with zero Neumann flux and zero mean."""
    grid = f.grid
    if grid.is_periodic or grid.dim != 1:
        raise ConfigError("invert_neumann_1d needs a bounded 1-D grid")
    fv = _check_compatible(f, project_mean, "neumann solve")
    gv = gamma.values_on(grid)
    h = grid.h[0]
    n = grid.n[0]
    matvec = _neumann_matvec_arrays(gv, grid)
    gface = 0.5 * (gv[1:] + gv[:-1])
    diag = np.empty(n)
    diag[0] = gface[0] / h**2
    diag[1:-1] = (gface[1:] + gface[:-1]) / h**2
    diag[-1] = gface[-1] / h**2
    x = _pcg_zero_mean(matvec, fv, diag, rtol, max_iter or 10 * n, "neumann solve")
    return ScalarField(grid, x)


def invert_freespace_1d(gamma: Mobility, f: ScalarField,
                        support_rtol: float = 1e-10) -> ScalarField:
    """Kernel-convolution inverse on a 1-D window for compactly supported f.

    phi(x) = -(1/gamma) * integral |x - y|/2 f(y) dy  (trapezoid rule),
    shifted to zero mean over the window.  Requires f to vanish near the
    window edges and to have zero mean; then -gamma phi'' = f holds on the
    support interior at quadrature order.
    """
    grid = f.grid
    if grid.dim != 1:
        raise ConfigError("free-space inversion is one-dimensional only")
    if not gamma.is_constant:
        raise ConfigError("free-space inversion needs constant mobility")
    fv = f.values
    scale = float(np.max(np.abs(fv)))
    edge = max(2, grid.n[0] // 20)
    if scale > 0.0 and float(np.max(np.abs(fv[:edge])) + np.max(np.abs(fv[-edge:]))) \
            > support_rtol * scale:
        raise DomainError("free-space data must be supported away from the window edges")
    fv = _check_compatible(f, False, "free-space solve")
    x = grid.axis_coords(0)
    kernel = -0.5 * np.abs(x[:, None] - x[None, :])
    phi = (grid.h[0] / gamma.value) * (kernel @ fv)
    return ScalarField(grid, phi - phi.mean())


def invert_for_model(gamma: Mobility, f: ScalarField, d: Discretization) -> ScalarField:
    """Inverse used inside the reduced model right-hand sides.

    Routes on the grid's boundary kind and projects off round-off mean
    drift (the data there is a discrete divergence, mean-zero up to
    round-off by construction).
    """
    if f.grid.is_periodic:
        return invert_periodic(gamma, f, d, project_mean=True)
    return invert_neumann_1d(gamma, f, project_mean=True)
