"""
Grids, fields, and the two discrete calculi
===========================================

Build periodic and bounded grids, differentiate with Fourier and centered
differences, and watch the truncation error of each scheme.
"""

import numpy as np

from korteweg import FD2, SPECTRAL, Grid, ScalarField, div, grad, laplacian, mean

# a periodic grid on [0, 2 pi): nodes at i*h
grid = Grid.periodic(64)
x = grid.coords()[0]

f = ScalarField(grid, np.sin(x))
print("spectral d/dx sin = cos, max error:",
      np.max(np.abs(grad(f, SPECTRAL).components[0] - np.cos(x))))
print("spectral Laplacian sin = -sin, max error:",
      np.max(np.abs(laplacian(f, SPECTRAL).values + np.sin(x))))
print("grid average of sin^2 (exact 0.5):", mean(ScalarField(grid, np.sin(x) ** 2)))

# centered differences are second order: halving h quarters the error
print("\ncentered-difference convergence on exp(sin x):")
print(f"{'N':>6} {'max error':>12} {'ratio':>8}")
prev = None
for n in (32, 64, 128, 256):
    g = Grid.periodic(n)
    xs = g.coords()[0]
    df = grad(ScalarField(g, np.exp(np.sin(xs))), FD2).components[0]
    err = np.max(np.abs(df - np.cos(xs) * np.exp(np.sin(xs))))
    print(f"{n:>6} {err:>12.3e} {'' if prev is None else f'{prev / err:>8.2f}'}")
    prev = err

# a bounded grid is cell-centered; wall-even fields see their smooth
# extension through the even-reflection ghosts
bgrid = Grid.bounded_neumann_1d(64, length=1.0)
bx = bgrid.coords()[0]
bf = ScalarField(bgrid, np.cos(np.pi * bx))
dfb = grad(bf, FD2).components[0]
print("\nbounded grid, d/dx cos(pi x), max error:",
      np.max(np.abs(dfb + np.pi * np.sin(np.pi * bx))))
