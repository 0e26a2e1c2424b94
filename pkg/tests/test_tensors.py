"""Stress-tensor assembly and the rewriting identity."""

import numpy as np
import pytest
import sympy as sp

import korteweg.constitutive as law
from korteweg import (FD2, SPECTRAL, DomainError, FluidParams, Grid, MixtureState,
                      ScalarField, VectorField)
from korteweg.fields import sup_norm
from korteweg.manufactured import SymbolicState, exact_korteweg_tensor
from korteweg.operators import div, grad
from korteweg.tensors import (augmented_cauchy_stress, cauchy_stress,
                              korteweg_identity_residual, korteweg_tensor,
                              nonlocal_cauchy_stress, phase_stress, strain)


def interior(values, width=2):
    return values[width:-width] if values.ndim == 1 else values[width:-width, width:-width]


def test_strain_of_linear_field_interior():
    # u = (x, -y) wraps discontinuously; centered differences are exact
    # away from the wrap seam (the first and last node in each axis)
    grid = Grid.periodic((32, 32))
    x, y = grid.coords()
    u = VectorField(grid, (x.copy(), -y.copy()))
    d = strain(u, FD2)
    assert np.max(np.abs(interior(d.comp(0, 0)) - 1.0)) < 1e-13
    assert np.max(np.abs(interior(d.comp(1, 1)) + 1.0)) < 1e-13
    assert np.max(np.abs(interior(d.comp(0, 1)))) < 1e-13


def test_strain_of_rigid_rotation_vanishes():
    grid = Grid.periodic((32, 32))
    x, y = grid.coords()
    u = VectorField(grid, (-y.copy(), x.copy()))
    d = strain(u, FD2)
    assert np.max(np.abs(interior(d.comp(0, 1)))) < 1e-13
    assert np.max(np.abs(interior(d.comp(0, 0)))) < 1e-13


def test_strain_of_sine_velocity():
    grid = Grid.periodic((48, 48))
    x, _ = grid.coords()
    u = VectorField(grid, (np.sin(x), np.zeros(grid.shape)))
    d = strain(u, SPECTRAL)
    assert np.max(np.abs(d.comp(0, 0) - np.cos(x))) < 1e-12
    assert np.max(np.abs(d.comp(0, 1))) < 1e-12


def test_cauchy_stress_basics(params):
    grid = Grid.periodic(64)
    x = grid.coords()[0]
    zero = cauchy_stress(VectorField.zero(grid), params, SPECTRAL)
    assert sup_norm(zero) == 0.0
    p1 = FluidParams(shear_viscosity=1.0, bulk_viscosity=0.0)
    s = cauchy_stress(VectorField(grid, (np.sin(x),)), p1, SPECTRAL)
    assert np.max(np.abs(s.comp(0, 0) - 2.0 * np.cos(x))) < 1e-12


def test_cauchy_stress_trace_of_divergence_free_field(params):
    grid = Grid.periodic((48, 48))
    x, y = grid.coords()
    u = VectorField(grid, (-np.sin(x) * np.cos(y), np.cos(x) * np.sin(y)))
    s = cauchy_stress(u, params, SPECTRAL)
    assert np.max(np.abs(s.trace())) < 1e-12


def test_phase_stress_constant_concentration(params):
    grid = Grid.periodic(48)
    x = grid.coords()[0]
    p = ScalarField(grid, np.sin(x))
    c = ScalarField.constant(grid, 0.3)
    rho = ScalarField.constant(grid, 1.5)
    t = phase_stress(c, p, rho, params, SPECTRAL)
    assert np.max(np.abs(t.comp(0, 0) + p.values)) < 1e-12
    with pytest.raises(DomainError):
        phase_stress(c, p, ScalarField.constant(grid, -1.0), params, SPECTRAL)


def test_phase_stress_matches_capillarity_form_at_scheme_order(params):
    # with c = c(rho) and p = 0, the gradient part equals
    # capillarity(rho) * grad rho (x) grad rho up to the discrete chain rule
    def defect(n):
        grid = Grid.periodic(n)
        x = grid.coords()[0]
        rho = ScalarField(grid, 1.0 + 0.1 * np.sin(x))
        c = ScalarField(grid, law.concentration(rho.values, params))
        zero = ScalarField.constant(grid, 0.0)
        assembled = phase_stress(c, zero, rho, params, FD2)
        gr = grad(rho, FD2).components[0]
        kappa_form = -law.capillarity(rho.values, params) * gr * gr
        return np.max(np.abs(assembled.comp(0, 0) - kappa_form))

    assert 3.5 < defect(64) / defect(128) < 4.5


def test_korteweg_tensor_constant_density(params):
    grid = Grid.periodic(48)
    rho0 = 1.3
    k = korteweg_tensor(ScalarField.constant(grid, rho0), params, FD2)
    expected = -rho0**2 * law.bulk_energy_drho(rho0, params)
    assert np.max(np.abs(k.comp(0, 0) - expected)) < 1e-13
    nowell = FluidParams(well=law.DoubleWell(scale=0.0))
    k0 = korteweg_tensor(ScalarField.constant(grid, rho0), nowell, FD2)
    assert sup_norm(k0) == 0.0
    with pytest.raises(DomainError):
        korteweg_tensor(ScalarField.constant(grid, -0.1), params, FD2)


def test_korteweg_tensor_against_symbolic_oracle(params):
    x = sp.Symbol("x")
    sym = SymbolicState.one_d(1 + sp.Rational(1, 10) * sp.sin(x), sp.S.Zero)
    oracle = exact_korteweg_tensor(sym, params)[0]

    def err(n, d):
        grid = Grid.periodic(n)
        xv = grid.coords()[0]
        k = korteweg_tensor(ScalarField(grid, 1.0 + 0.1 * np.sin(xv)), params, d)
        return np.max(np.abs(k.comp(0, 0) - oracle(xv)))

    assert err(128, SPECTRAL) < 1e-10
    assert 3.5 < err(128, FD2) / err(256, FD2) < 4.5


def test_augmented_stress_relations(params):
    grid = Grid.periodic(64)
    x = grid.coords()[0]
    rho = ScalarField(grid, 1.2 + 0.2 * np.sin(x))
    u = VectorField(grid, (0.3 * np.sin(x),))
    zero_u = VectorField.zero(grid)
    assert sup_norm(augmented_cauchy_stress(zero_u, rho, params, SPECTRAL)) == 0.0
    s = cauchy_stress(u, params, SPECTRAL)
    s_aug = augmented_cauchy_stress(u, rho, params, SPECTRAL)
    divu = div(u, SPECTRAL).values
    expected = (params.delta_star / (np.sqrt(params.delta) * rho.values)) * divu
    assert np.max(np.abs(s_aug.comp(0, 0) - s.comp(0, 0) - expected)) < 1e-13
    # divergence-free u (constant): the augmented term is absent
    const_u = VectorField(grid, (np.full(grid.shape, 0.4),))
    sa = augmented_cauchy_stress(const_u, rho, params, FD2)
    sc = cauchy_stress(const_u, params, FD2)
    assert np.array_equal(sa.comp(0, 0), sc.comp(0, 0))


def test_nonlocal_stress_relations(params):
    grid = Grid.periodic(64)
    x = grid.coords()[0]
    u = VectorField(grid, (np.sin(x),))
    zero = ScalarField.constant(grid, 0.0)
    s = cauchy_stress(u, params, SPECTRAL)
    s_plain = nonlocal_cauchy_stress(u, zero, params, SPECTRAL)
    assert np.max(np.abs(s_plain.comp(0, 0) - s.comp(0, 0))) == 0.0
    assert sup_norm(nonlocal_cauchy_stress(VectorField.zero(grid), zero,
                                           params, SPECTRAL)) == 0.0
    # eigenfunction: the inverse-elliptic image of div(sin x) is cos x
    from korteweg.elliptic import Mobility, invert_periodic
    nl = invert_periodic(Mobility.constant(1.0), div(u, SPECTRAL), SPECTRAL)
    s_g = nonlocal_cauchy_stress(u, nl, params, SPECTRAL)
    scale = params.temperature / params.delta_tau**2
    assert np.max(np.abs(s_g.comp(0, 0) - s.comp(0, 0)
                         - scale * np.cos(x))) < 1e-12


def test_korteweg_identity_residual(params):
    grid = Grid.periodic(64)
    assert korteweg_identity_residual(ScalarField.constant(grid, 1.5),
                                      params, FD2) == 0.0
    assert korteweg_identity_residual(ScalarField.constant(grid, 1.5),
                                      params, SPECTRAL) < 1e-12

    def rho_on(n):
        g = Grid.periodic(n)
        return ScalarField(g, 1.0 + 0.1 * np.sin(g.coords()[0]))

    assert korteweg_identity_residual(rho_on(128), params, SPECTRAL) < 1e-8
    ratio = korteweg_identity_residual(rho_on(128), params, FD2) \
        / korteweg_identity_residual(rho_on(256), params, FD2)
    assert 3.5 < ratio < 4.5


def test_momentum_flux_equivalence_pointwise_tensor(params):
    # the assembled full-model and reduced-model fluxes agree up to the
    # discrete chain rule; refinement halves the gap by ~4 in FD2
    from korteweg.models import ModelKind, momentum_equivalence_gap

    def gap(n):
        g = Grid.periodic(n)
        xv = g.coords()[0]
        st = MixtureState.from_primitive(
            ScalarField(g, 1.5 + 0.3 * np.tanh(2.5 * np.cos(xv)) / np.tanh(2.5)),
            VectorField(g, (0.05 * np.sin(xv),)))
        return momentum_equivalence_gap(st, params, ModelKind.NSK1, None, FD2)

    assert 3.4 < gap(128) / gap(256) < 4.6
