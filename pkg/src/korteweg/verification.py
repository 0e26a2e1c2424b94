"""Certification checks, convergence studies, and model comparison.

Every identity used by the two reduction theorems is checked numerically
here: constitutive algebra at round-off tolerances, elliptic round trips
at solver tolerance, and the tensor/residual identities as refinement
studies with measured convergence orders.  ``run_check_suite`` bundles
them into a pass/fail report; the acceptance tests are thin wrappers
around the same functions.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constitutive as law
from .constitutive import Convention, FluidParams
from .elliptic import (Mobility, apply_operator, invert_freespace_1d,
                       invert_neumann_1d, invert_periodic)
from .errors import ConfigError
from .fields import ScalarField, VectorField, sup_norm
from .grids import Discretization, Grid, Scheme
from .initial import CorpusState, default_corpus, random_band_limited
from .models import (MixtureState, ModelKind, momentum_equivalence_gap,
                     residual_nsac, residual_nsch, rhs_nsk1, rhs_nsk2)
from .operators import div, grad, mean
from .tensors import korteweg_identity_residual, korteweg_tensor
from .timestepping import StepControl, integrate

SPECTRAL = Discretization(Scheme.SPECTRAL)
FD2 = Discretization(Scheme.FD2)

SPECTRAL_PAIR = (64, 128)          # resolutions for the decrease criterion
FD2_TRIPLE = (128, 256, 512)       # resolutions for order measurement
IDENTITY_TRIPLE = (64, 128, 256)   # the milder rewrite-identity study
SPECTRAL_DECREASE_MIN = 1e2
FD2_ORDER_WINDOW = (1.7, 2.3)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: dict
    threshold: str
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.note}]" if self.note else ""
        meas = ", ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in self.measured.items())
        return f"{status}  {self.name}: {meas}  ({self.threshold}){extra}"


@dataclass
class CheckReport:
    results: list[CheckResult] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)
    wallclock: float = 0.0

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"wallclock_s": self.wallclock,
                "n_checks": len(self.results),
                "n_failed": len(self.failures),
                "results": [{"name": r.name, "passed": r.passed,
                             "measured": r.measured, "threshold": r.threshold,
                             "note": r.note} for r in self.results],
                "residual_records": self.records}

    def write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=1, default=float))


def fit_order(resolutions, errors) -> float:
    """Least-squares slope of log(error) against log(1/N)."""
    errors = np.maximum(np.asarray(errors, dtype=float), 1e-300)
    return float(np.polyfit(np.log(1.0 / np.asarray(resolutions, dtype=float)),
                            np.log(errors), 1)[0])


# ---------------------------------------------------------------------------
# constitutive identities


def check_constitutive(params: FluidParams) -> list[CheckResult]:
    lo, hi = law.admissible_density_window(params, margin=0.4)
    rho = np.linspace(lo, hi, 1000)
    results = []

    pivot = np.max(np.abs(law.phase_mass_density(rho, params)
                          - rho * law.phase_mass_density_drho(rho, params)
                          - 1.0 / params.delta_tau))
    results.append(CheckResult("constitutive/pivot_identity", pivot < 1e-14,
                               {"max_defect": float(pivot)}, "< 1e-14"))

    c = law.concentration(rho, params)
    closure = np.max(np.abs(c * params.tau1 + (1.0 - c) * params.tau2 - 1.0 / rho))
    passed = closure < 1e-14
    note = ""
    if not passed and params.convention is Convention.LITERAL:
        note = "expected failure under the literal concentration convention"
    results.append(CheckResult("constitutive/closure_consistency", passed,
                               {"max_defect": float(closure)}, "< 1e-14", note))

    prefactor = np.max(np.abs(
        rho**2 * law.bulk_energy_drho(rho, params)
        + (params.temperature / params.delta_tau) * params.well.derivative(c)))
    results.append(CheckResult("constitutive/pressure_prefactor", prefactor < 1e-12,
                               {"max_defect": float(prefactor)}, "< 1e-12"))

    step = 1e-5
    worst = 0.0
    for fn, dfn in ((lambda r: law.bulk_energy(r, params),
                     lambda r: law.bulk_energy_drho(r, params)),
                    (lambda r: law.phase_mass_density(r, params),
                     lambda r: law.phase_mass_density_drho(r, params)),
                    (lambda r: law.helmholtz_energy(r, 2.0, params),
                     lambda r: law.helmholtz_energy_drho(r, 2.0, params))):
        fd = (fn(rho + step) - fn(rho - step)) / (2.0 * step)
        scale = np.maximum(np.abs(dfn(rho)), 1.0)
        worst = max(worst, float(np.max(np.abs(fd - dfn(rho)) / scale)))
    cs = np.linspace(-0.5, 1.5, 401)
    fd = (params.well.value(cs + step) - params.well.value(cs - step)) / (2.0 * step)
    scale = np.maximum(np.abs(params.well.derivative(cs)), 1.0)
    worst = max(worst, float(np.max(np.abs(fd - params.well.derivative(cs)) / scale)))
    results.append(CheckResult("constitutive/derivatives_vs_fd", worst < 1e-6,
                               {"max_rel_defect": worst}, "< 1e-6 relative"))
    return results


# ---------------------------------------------------------------------------
# discrete calculus and elliptic solves


def check_operators(n: int = 128) -> list[CheckResult]:
    results = []
    for d, label in ((SPECTRAL, "spectral"), (FD2, "fd2")):
        for dim in (1, 2):
            grid = Grid.periodic((n,) * dim if dim == 1 else (n // 2,) * dim)
            rng = np.random.default_rng(7 + dim)
            f = ScalarField(grid, random_band_limited(grid, rng, kmax=5))
            v = VectorField(grid, tuple(random_band_limited(grid, rng, kmax=5)
                                        for _ in range(dim)))
            defect = abs(mean(ScalarField(grid, f.values * div(v, d).values))
                         + mean(ScalarField(grid, sum(
                             g * c for g, c in zip(grad(f, d).components,
                                                   v.components)))))
            results.append(CheckResult(
                f"operators/integration_by_parts_{label}_{dim}d", defect < 1e-12,
                {"defect": float(defect)}, "< 1e-12"))
    grid = Grid.periodic(128)
    x = grid.coords()[0]
    worst = 0.0
    for k in (1, 5, 31, 63):
        f = ScalarField(grid, np.sin(k * x))
        exact = k * np.cos(k * x)
        err = np.max(np.abs(grad(f, SPECTRAL).components[0] - exact)) / k
        worst = max(worst, float(err))
    results.append(CheckResult("operators/spectral_modes_exact", worst < 1e-12,
                               {"max_rel_err": worst}, "< 1e-12 for k < N/2"))
    return results


def check_elliptic(n: int = 128) -> list[CheckResult]:
    results = []
    grid = Grid.periodic(n)
    x = grid.coords()[0]
    rng = np.random.default_rng(11)
    gamma = Mobility.constant(2.0)

    worst = 0.0
    for k in (1, 2, 3):
        f = ScalarField(grid, np.cos(k * x))
        phi = invert_periodic(gamma, f, SPECTRAL)
        worst = max(worst, float(np.max(np.abs(
            phi.values - np.cos(k * x) / (gamma.value * k * k)))))
    results.append(CheckResult("elliptic/periodic_eigenfunctions", worst < 1e-12,
                               {"max_err": worst}, "cos(kx) -> cos(kx)/(gamma k^2) < 1e-12"))

    f = ScalarField(grid, random_band_limited(grid, rng, kmax=12))
    worst = 0.0
    for d in (SPECTRAL, FD2):
        phi = invert_periodic(gamma, f, d)
        back = apply_operator(gamma, phi, d)
        worst = max(worst, float(np.max(np.abs(back.values
                                               - (f.values - f.values.mean())))))
    results.append(CheckResult("elliptic/periodic_roundtrip", worst < 1e-10,
                               {"max_err": worst}, "< 1e-10, both schemes"))

    bgrid = Grid.bounded_neumann_1d(n, 1.0)
    bx = bgrid.coords()[0]
    gvar = Mobility.spatial(2.0 + np.sin(2.0 * np.pi * bx / bgrid.length[0]))
    fb = random_band_limited(bgrid, rng, kmax=6)
    fb -= fb.mean()
    fbf = ScalarField(bgrid, fb)
    phi = invert_neumann_1d(gvar, fbf)
    back = apply_operator(gvar, phi, FD2)
    err = float(np.max(np.abs(back.values - (fb - fb.mean()))))
    results.append(CheckResult("elliptic/neumann_roundtrip_variable", err < 1e-9,
                               {"max_err": err}, "< 1e-9"))
    results.append(CheckResult("elliptic/zero_mean_outputs",
                               abs(float(phi.values.mean())) < 1e-13,
                               {"mean": abs(float(phi.values.mean()))}, "< 1e-13"))

    g = ScalarField(bgrid, random_band_limited(bgrid, np.random.default_rng(13), 6)
                    - np.mean(random_band_limited(bgrid, np.random.default_rng(13), 6)))
    lhs = mean(ScalarField(bgrid, fbf.values * invert_neumann_1d(gvar, g).values))
    rhs = mean(ScalarField(bgrid, g.values * phi.values))
    sym = abs(lhs - rhs)
    pos = mean(ScalarField(bgrid, fbf.values * phi.values))
    results.append(CheckResult("elliptic/selfadjoint_positive",
                               sym < 1e-10 and pos >= -1e-14,
                               {"symmetry_defect": float(sym), "quadratic_form": float(pos)},
                               "symmetry < 1e-10, form >= 0"))

    phi2 = invert_neumann_1d(Mobility.spatial(3.0 * gvar.values_on(bgrid)), fbf)
    scaling = float(np.max(np.abs(3.0 * phi2.values - phi.values)))
    results.append(CheckResult("elliptic/mobility_scaling", scaling < 1e-9,
                               {"defect": scaling}, "inv(c*gamma) = inv(gamma)/c < 1e-9"))

    # free space: derivative-of-bump data against double antidifferentiation
    wide = Grid.periodic(512, 40.0)
    xw = wide.coords()[0] - 20.0
    sigma = 1.0
    bump = np.exp(-((xw) / sigma) ** 2)
    fsf = ScalarField(wide, -2.0 * xw / sigma**2 * bump)
    phi_kernel = invert_freespace_1d(Mobility.constant(1.5), fsf)
    h = wide.h[0]
    first = np.concatenate(([0.0], np.cumsum(0.5 * (fsf.values[1:] + fsf.values[:-1]) * h)))
    second = np.concatenate(([0.0], np.cumsum(0.5 * (first[1:] + first[:-1]) * h)))
    phi_oracle = -second / 1.5
    phi_oracle -= phi_oracle.mean()
    err = float(np.max(np.abs(phi_kernel.values - phi_oracle)))
    results.append(CheckResult("elliptic/freespace_antiderivative", err < 1e-3,
                               {"max_err": err}, "matches double antiderivative at O(h^2)"))
    # quadrature-order contract: the residual is ~ h^2 (about 6e-3 at
    # N = 512 on this window) and drops fourfold per refinement
    lap = grad(ScalarField(wide, grad(phi_kernel, FD2).components[0]), FD2).components[0]
    interior = slice(wide.n[0] // 4, 3 * wide.n[0] // 4)
    resid = float(np.max(np.abs((-1.5 * lap - fsf.values)[interior])))
    results.append(CheckResult("elliptic/freespace_pde_residual", resid < 1e-2,
                               {"max_err": resid}, "-gamma phi'' = f at O(h^2)"))
    return results


# ---------------------------------------------------------------------------
# tensor identity and reduction certificates


def check_korteweg_identity(params: FluidParams) -> list[CheckResult]:
    results = []

    def rho_on(n):
        grid = Grid.periodic(n)
        return ScalarField(grid, 1.0 + 0.1 * np.sin(grid.coords()[0]))

    res128 = korteweg_identity_residual(rho_on(128), params, SPECTRAL)
    results.append(CheckResult("tensors/korteweg_identity_spectral",
                               res128 < 1e-8, {"residual_n128": res128}, "< 1e-8"))
    errs = [korteweg_identity_residual(rho_on(n), params, FD2) for n in IDENTITY_TRIPLE]
    order = fit_order(IDENTITY_TRIPLE, errs)
    lo, hi = FD2_ORDER_WINDOW
    results.append(CheckResult("tensors/korteweg_identity_fd2_order",
                               lo <= order <= hi,
                               {"order": order, "errors": [float(e) for e in errs]},
                               f"order in [{lo}, {hi}]"))
    return results


def _state_mobility(cs: CorpusState, grid: Grid) -> Mobility:
    return cs.mobility_on(grid)


def residual_record(cs: CorpusState, n: int, params: FluidParams,
                    kind: ModelKind, d: Discretization) -> dict:
    """Structured residual record for one state/scheme/resolution.

    Includes the tensor rewriting-identity residual of the state's own
    density, so every certified identity is exercised per corpus state.
    """
    grid = cs.grid(n)
    state = cs.on_grid(grid)
    mobility = _state_mobility(cs, grid)
    if kind is ModelKind.NSK1:
        gap = momentum_equivalence_gap(state, params, kind, None, d)
        rep = residual_nsac(state, params, d)
    else:
        gap = momentum_equivalence_gap(state, params, kind, mobility, d)
        rep = residual_nsch(state, params, mobility, d)
    rewrite = korteweg_identity_residual(state.rho, params, d)
    return {"state_id": cs.name, "model": kind.value, "scheme": d.scheme.value,
            "n": n, "mass_res": rep.mass, "momentum_res": rep.momentum,
            "phase_res": rep.phase, "equivalence_gap": gap,
            "rewrite_identity_res": rewrite}


def gap_and_residual(cs: CorpusState, n: int, params: FluidParams,
                     kind: ModelKind, d: Discretization) -> tuple[float, float]:
    rec = residual_record(cs, n, params, kind, d)
    return rec["equivalence_gap"], rec["phase_res"]


def check_reduction_certificates(params: FluidParams,
                                 corpus: list[CorpusState] | None = None,
                                 records: list[dict] | None = None) -> list[CheckResult]:
    """Spectral-decrease and FD2-order certificates for both theorems.

    When a ``records`` list is supplied, every evaluated residual record
    is appended to it (the check report's structured output).
    """
    corpus = corpus if corpus is not None else default_corpus(params)
    results = []

    def measure(cs, n, kind, d):
        rec = residual_record(cs, n, params, kind, d)
        if records is not None:
            records.append(rec)
        return rec["equivalence_gap"], rec["phase_res"]

    for cs in corpus:
        periodic = cs.boundary.value == "periodic"
        for kind in (ModelKind.NSK1, ModelKind.NSK2):
            tag = f"{cs.name}/{kind.value}"
            if periodic:
                coarse = measure(cs, SPECTRAL_PAIR[0], kind, SPECTRAL)
                fine = measure(cs, SPECTRAL_PAIR[1], kind, SPECTRAL)
                gap_ratio = coarse[0] / max(fine[0], 1e-300)
                res_ratio = coarse[1] / max(fine[1], 1e-300)
                results.append(CheckResult(
                    f"reduction/{tag}/spectral_decrease",
                    gap_ratio >= SPECTRAL_DECREASE_MIN and res_ratio >= SPECTRAL_DECREASE_MIN,
                    {"gap_ratio": gap_ratio, "residual_ratio": res_ratio,
                     "gap_n128": fine[0], "residual_n128": fine[1]},
                    f">= {SPECTRAL_DECREASE_MIN:.0e} decrease, N={SPECTRAL_PAIR[0]}->{SPECTRAL_PAIR[1]}"))
            gaps, resids = [], []
            for n in FD2_TRIPLE:
                g, r = measure(cs, n, kind, FD2)
                gaps.append(g)
                resids.append(r)
            g_order = fit_order(FD2_TRIPLE, gaps)
            r_order = fit_order(FD2_TRIPLE, resids)
            lo, hi = FD2_ORDER_WINDOW
            results.append(CheckResult(
                f"reduction/{tag}/fd2_order",
                lo <= g_order <= hi and lo <= r_order <= hi,
                {"gap_order": g_order, "residual_order": r_order},
                f"orders in [{lo}, {hi}]"))
    return results


def check_equilibrium_and_conservation(params: FluidParams) -> list[CheckResult]:
    results = []
    grid = Grid.periodic(64)
    state = MixtureState.from_primitive(
        ScalarField.constant(grid, 1.4), VectorField.zero(grid))
    worst = 0.0
    for kind in (ModelKind.NSK1, ModelKind.NSK2):
        if kind is ModelKind.NSK1:
            drho, dm = rhs_nsk1(state, params, SPECTRAL)
        else:
            drho, dm = rhs_nsk2(state, params, Mobility.constant(1.0), SPECTRAL)
        worst = max(worst, sup_norm(drho), sup_norm(dm))
    results.append(CheckResult("dynamics/constant_state_equilibrium", worst < 1e-12,
                               {"max_rhs": worst}, "< 1e-12"))

    x = grid.coords()[0]
    s0 = MixtureState.from_primitive(
        ScalarField(grid, 1.5 * (1.0 + 0.05 * np.sin(x))),
        VectorField(grid, (0.02 * np.sin(x),)))
    control = StepControl(t_end=1e9, dt_fixed=2e-4, max_steps=100)
    res = integrate(s0, control, params, ModelKind.NSK1, None, SPECTRAL,
                    record_metrics=True)
    mass0 = res.metrics[0]["mass"]
    mom0 = res.metrics[0]["momentum"][0]
    drift = max(abs(m["mass"] - mass0) for m in res.metrics)
    mdrift = max(abs(m["momentum"][0] - mom0) for m in res.metrics)
    results.append(CheckResult("dynamics/conservation_100_steps",
                               drift < 1e-12 and mdrift < 1e-12,
                               {"mass_drift": float(drift), "momentum_drift": float(mdrift)},
                               "< 1e-12"))
    return results


def check_temporal_order(params: FluidParams) -> CheckResult:
    grid = Grid.periodic(48)
    x = grid.coords()[0]
    s0 = MixtureState.from_primitive(
        ScalarField(grid, 1.5 + 0.15 * np.sin(x)),
        VectorField(grid, (0.05 * np.cos(x),)))
    t_end = 0.08
    finals = []
    for dt in (2e-3, 1e-3, 5e-4):
        control = StepControl(t_end=t_end, dt_fixed=dt)
        res = integrate(s0, control, params, ModelKind.NSK1, None, SPECTRAL)
        finals.append(res.state.rho.values)
    e1 = float(np.max(np.abs(finals[0] - finals[1])))
    e2 = float(np.max(np.abs(finals[1] - finals[2])))
    order = float(np.log2(e1 / e2))
    return CheckResult("dynamics/temporal_order_ssprk3", abs(order - 3.0) <= 0.3,
                       {"order": order, "coarse_diff": e1, "fine_diff": e2},
                       "order = 3 +- 0.3")


def check_shared_capillary_structure(params: FluidParams) -> list[CheckResult]:
    """Both reduced systems share the capillary stress bit for bit."""
    results = []
    grid = Grid.periodic(96)
    x = grid.coords()[0]
    rho = ScalarField(grid, 1.5 + 0.3 * np.tanh(3.0 * np.cos(x)) / np.tanh(3.0))
    # two equal-but-distinct params objects, as two run configs would carry
    params_twin = FluidParams(
        tau1=params.tau1, tau2=params.tau2, temperature=params.temperature,
        delta=params.delta, shear_viscosity=params.shear_viscosity,
        bulk_viscosity=params.bulk_viscosity, mobility=params.mobility,
        well=params.well, convention=params.convention)
    k1 = korteweg_tensor(rho, params, SPECTRAL)
    k2 = korteweg_tensor(rho, params_twin, SPECTRAL)
    identical = all(np.array_equal(a, b) for a, b in
                    zip(k1.components, k2.components))
    results.append(CheckResult("compare/shared_capillary_tensor", identical,
                               {"max_abs_diff": 0.0 if identical else float(max(
                                   np.max(np.abs(a - b)) for a, b in
                                   zip(k1.components, k2.components)))},
                               "bit-identical"))
    # divergence-free velocity over constant density (FD2): the discrete
    # div u vanishes exactly, so both extra stress terms are exact zeros
    # and the two right-hand sides agree bit for bit
    fgrid = Grid.periodic(64)
    state = MixtureState.from_primitive(
        ScalarField.constant(fgrid, 1.4),
        VectorField(fgrid, (np.full(fgrid.shape, 0.3),)))
    d1rho, d1m = rhs_nsk1(state, params, FD2)
    d2rho, d2m = rhs_nsk2(state, params, Mobility.constant(1.0), FD2)
    same = np.array_equal(d1rho.values, d2rho.values) and all(
        np.array_equal(a, b) for a, b in zip(d1m.components, d2m.components))
    diff = max(float(np.max(np.abs(d1rho.values - d2rho.values))),
               max(float(np.max(np.abs(a - b)))
                   for a, b in zip(d1m.components, d2m.components)))
    results.append(CheckResult("compare/divergence_free_rhs_identical", same,
                               {"max_abs_diff": diff}, "bit-identical"))
    return results


def check_two_d_case(params: FluidParams) -> list[CheckResult]:
    results = []

    def state_on(n):
        grid = Grid.periodic((n, n))
        xs = grid.coords()
        carrier = 0.5 * (np.cos(xs[0]) + np.cos(xs[1]))
        rho = ScalarField(grid, 1.5 + 0.3 * np.tanh(2.5 * carrier) / np.tanh(2.5))
        u = VectorField(grid, (0.03 * np.sin(xs[0]) * np.cos(xs[1]),
                               0.02 * np.cos(xs[0] + xs[1])))
        return MixtureState.from_primitive(rho, u)

    gaps = [momentum_equivalence_gap(state_on(n), params, ModelKind.NSK1, None, SPECTRAL)
            for n in (32, 64)]
    ratio = gaps[0] / max(gaps[1], 1e-300)
    results.append(CheckResult("reduction/two_d/spectral_decrease",
                               ratio >= SPECTRAL_DECREASE_MIN,
                               {"gap_ratio": ratio, "gap_n64": gaps[1]},
                               ">= 1e2 decrease, N=32->64"))
    errs = [momentum_equivalence_gap(state_on(n), params, ModelKind.NSK1, None, FD2)
            for n in (64, 128, 256)]
    order = fit_order((64, 128, 256), errs)
    lo, hi = FD2_ORDER_WINDOW
    results.append(CheckResult("reduction/two_d/fd2_order", lo <= order <= hi,
                               {"order": order}, f"order in [{lo}, {hi}]"))
    return results


def run_check_suite(params: FluidParams | None = None,
                    include_2d: bool = True,
                    corpus: list[CorpusState] | None = None) -> CheckReport:
    """Run every certification check; seconds at desk scale."""
    params = params or FluidParams()
    t0 = time.perf_counter()
    report = CheckReport()
    report.results += check_constitutive(params)
    report.results += check_operators()
    report.results += check_elliptic()
    report.results += check_korteweg_identity(params)
    report.results += check_reduction_certificates(params, corpus, report.records)
    report.results += check_equilibrium_and_conservation(params)
    report.results.append(check_temporal_order(params))
    report.results += check_shared_capillary_structure(params)
    if include_2d:
        report.results += check_two_d_case(params)
    report.wallclock = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# manufactured-solution convergence tables


def convergence_table(params: FluidParams, kind: ModelKind, d: Discretization,
                      resolutions, gamma0: float = 1.0) -> list[dict]:
    """Error of the discrete RHS against the symbolic oracle, per resolution."""
    from .manufactured import SymbolicState, exact_rhs
    import sympy as sp

    if len(resolutions) < 3:
        raise ConfigError("a convergence study needs at least 3 resolutions")
    x = sp.Symbol("x")
    sym_state = SymbolicState.one_d(
        sp.Rational(3, 2) + sp.Rational(1, 5) * sp.sin(x),
        sp.Rational(1, 20) * sp.sin(x) + sp.Rational(1, 50) * sp.cos(2 * x))
    drho_exact, dm_exact = exact_rhs(sym_state, params, kind, gamma0)
    rows = []
    for n in resolutions:
        grid = Grid.periodic(int(n))
        xv = grid.coords()[0]
        state = MixtureState.from_primitive(
            ScalarField(grid, 1.5 + 0.2 * np.sin(xv)),
            VectorField(grid, (0.05 * np.sin(xv) + 0.02 * np.cos(2.0 * xv),)))
        if kind is ModelKind.NSK1:
            drho, dm = rhs_nsk1(state, params, d)
        else:
            drho, dm = rhs_nsk2(state, params, Mobility.constant(gamma0), d)
        e_rho = float(np.max(np.abs(drho.values - drho_exact(xv))))
        e_m = float(np.max(np.abs(dm.components[0] - dm_exact[0](xv))))
        rows.append({"n": int(n), "rho_rate_error": e_rho, "momentum_rate_error": e_m})
    ns = [r["n"] for r in rows]
    for key in ("rho_rate_error", "momentum_rate_error"):
        order = fit_order(ns, [max(r[key], 1e-300) for r in rows])
        for r in rows:
            r[f"{key}_order"] = order
    return rows


def write_convergence_csv(rows: list[dict], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = list(rows[0].keys())
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for r in rows:
            fh.write(",".join(f"{r[c]:.6e}" if isinstance(r[c], float) else str(r[c])
                              for c in cols) + "\n")


# ---------------------------------------------------------------------------
# model comparison


@dataclass
class CompareReport:
    capillary_tensor_max_diff: float
    first_rhs_max_diff: float
    divergence: list[dict]

    def to_dict(self) -> dict:
        return {"capillary_tensor_max_diff": self.capillary_tensor_max_diff,
                "first_rhs_max_diff": self.first_rhs_max_diff,
                "divergence": self.divergence}


def compare_models(cfg_a, cfg_b, n_checkpoints: int = 8) -> CompareReport:
    """Quantify how the two reduced systems diverge from a shared start.

    Requires configs that differ only in the model kind (nsk1 vs nsk2);
    verifies that the capillary stress is shared bit for bit, then runs
    both models with a common fixed step and records trajectory distance.
    """
    if {cfg_a.model, cfg_b.model} != {ModelKind.NSK1, ModelKind.NSK2}:
        raise ConfigError("compare needs one nsk1 config and one nsk2 config")
    if cfg_a.model is ModelKind.NSK2:
        cfg_a, cfg_b = cfg_b, cfg_a
    if cfg_a.grid != cfg_b.grid or cfg_a.params != cfg_b.params \
            or cfg_a.initial != cfg_b.initial or cfg_a.disc != cfg_b.disc:
        raise ConfigError("compare needs identical grid, params, scheme, and initial state")

    state = cfg_a.build_initial_state()
    mobility = cfg_b.build_mobility()
    k_a = korteweg_tensor(state.rho, cfg_a.params, cfg_a.disc)
    k_b = korteweg_tensor(state.rho, cfg_b.params, cfg_b.disc)
    k_diff = max(float(np.max(np.abs(a - b)))
                 for a, b in zip(k_a.components, k_b.components))

    d1rho, d1m = rhs_nsk1(state, cfg_a.params, cfg_a.disc)
    d2rho, d2m = rhs_nsk2(state, cfg_b.params, mobility, cfg_b.disc)
    rhs_diff = max(float(np.max(np.abs(d1rho.values - d2rho.values))),
                   max(float(np.max(np.abs(a - b)))
                       for a, b in zip(d1m.components, d2m.components)))

    from .timestepping import dt_candidates
    dt = 0.5 * min(min(dt_candidates(state, cfg_a.params).values()),
                   cfg_a.control.dt_max)
    t_end = cfg_a.control.t_end
    n_steps = max(1, int(np.ceil(t_end / dt)))
    dt = t_end / n_steps
    every = max(1, n_steps // n_checkpoints)
    control = StepControl(t_end=t_end, dt_fixed=dt)

    class Recorder:
        def __init__(self):
            self.states = {}

        def __call__(self, step, st, _dt):
            if step % every == 0 or step == n_steps:
                self.states[step] = st

    rec_a, rec_b = Recorder(), Recorder()
    integrate(state, control, cfg_a.params, ModelKind.NSK1, None, cfg_a.disc,
              observers=(rec_a,))
    integrate(state, control, cfg_b.params, ModelKind.NSK2, mobility, cfg_b.disc,
              observers=(rec_b,))
    divergence = []
    for step in sorted(rec_a.states):
        if step not in rec_b.states:
            continue
        sa, sb = rec_a.states[step], rec_b.states[step]
        divergence.append({
            "step": step, "t": sa.t,
            "rho_distance": float(np.max(np.abs(sa.rho.values - sb.rho.values))),
            "momentum_distance": max(float(np.max(np.abs(a - b))) for a, b in
                                     zip(sa.m.components, sb.m.components))})
    return CompareReport(capillary_tensor_max_diff=k_diff,
                         first_rhs_max_diff=rhs_diff,
                         divergence=divergence)
