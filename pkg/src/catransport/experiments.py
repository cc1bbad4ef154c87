"""Named residual checks over a scenario and grid, shared by the CLI and the test suite.

Each check returns ``Row`` records. Tolerances for discretization-limited
checks scale like ``h^2`` with the relevant grid step; exact checks use fixed
round-off bounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fixtures as fx
from .associated import TwistedClass, check_assoc_transport, matrix_representation
from .catalog import Scenario, get_scenario
from .connection import (check_backtrack_invariance, check_connection_properties, check_reparam_invariance,
                         check_thin_homotopy, horizontal_lift_path, horizontality_residual, omega_surface_residual,
                         surface_horizontal_lift, tangency_residual, transport_variation)
from .crossed import (Morphism2, check_category_laws, check_compose_via_product, check_exchange_law,
                      check_alpha2_semidirect, check_peiffer)
from .decorated import (DecoratedPath, DecoratedSurface, cat_connection_lift_C, cat_connection_lift_phi,
                        check_c_lift, check_horlift_axioms, dd_compose, dd_distance, dd_right_action,
                        dd_target, dec_compose, dec_distance, dec_right_action, dec_target, decorate_surface,
                        kappa_star, kstar, phi_increments, undecorated_lifter, w0)
from .errors import GridError, UnknownNameError
from .lie_ode import w_C, w_C0, w_path
from .paths import SampledPath, insert_backtrack, sample_path, sample_surface, vertical_compose

EXACT = 1e-12
ALGEBRA = 1e-10
# h^2 coefficients, fixed from the 1e-6 at N = 400 and 1e-5 at 100 x 100 bounds
REPARAM_C = 0.16
SURFACE_C = 0.1
TANGENCY_C = 10.0
PHI_C = 0.5
SAMPLES = 50


@dataclass(frozen=True)
class Row:
    check: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual <= self.tolerance


@dataclass
class ExperimentConfig:
    scenario: str = "so3_conj"
    N: int = 200
    M: int = 50
    seed: int = 0
    checks: list = field(default_factory=lambda: ["all"])
    output: Optional[str] = None

    def validate(self) -> None:
        get_scenario(self.scenario)
        if self.N < 8 or self.M < 8:
            raise GridError(f"grid {self.N}x{self.M} is too coarse; need N, M >= 8")
        for c in self.checks:
            if c != "all" and c not in CHECKS:
                raise UnknownNameError(f"unknown check {c!r}; choose from all, {', '.join(CHECKS)}")

    def check_names(self) -> list:
        return list(CHECKS) if "all" in self.checks else sorted(set(self.checks))


def parse_grid(text: str) -> tuple[int, int]:
    """``"200x50"`` -> ``(N, M)``."""
    try:
        n, m = text.lower().split("x")
        return int(n), int(m)
    except ValueError:
        raise GridError(f"grid must look like NxM, got {text!r}") from None


# -- shared fixtures ----------------------------------------------------------

def _chained_paths(rng, N: int):
    """Two random paths on the same grid, the second starting where the first ends."""
    f1, f2 = fx.random_curve(rng), fx.random_curve(rng)
    m = fx.margin_cells(N)
    g1 = sample_path(f1, N, 1.0, m)
    g2 = sample_path(lambda t: f2(t) - f2(0.0) + g1.end, N, 1.0, m)
    return g1, g2


def _stacked_surfaces(M: int, N: int):
    """A surface on ``s in [0, 1]`` and its continuation on ``[1, 1.5]`` with the same steps."""
    M2 = max(M // 2, 2)
    S1 = fx.sampled_surface(M, N)
    S2 = sample_surface(lambda s, t: fx.surface(1.0 + s, t), M2, N, s_duration=M2 / M)
    return S1, S2


def _lifted_pair(scn: Scenario, M: int, N: int, q0):
    S1, S2 = _stacked_surfaces(M, N)
    L1 = surface_horizontal_lift(scn, S1, q0)
    L2 = surface_horizontal_lift(scn, S2, L1.fiber[-1, 0])
    return S1, S2, L1, L2


def _spur_path(N: int):
    gam = fx.sampled_curve(N)
    at = N // 2
    n = max(N // 8, 2)
    spur = SampledPath(gam.points[at] + np.outer(np.linspace(0.0, 0.2, n + 1), [0.3, 0.8]), n * gam.step)
    return insert_backtrack(gam, at, spur)


# -- checks -------------------------------------------------------------------

def check_axioms(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    cm = scn.cm
    p = check_peiffer(cm, 100, seed)
    laws = check_category_laws(cm, 100, seed)
    rows = [Row("axioms.peiffer", max(p["peiffer1"], p["peiffer2"]), ALGEBRA),
            Row("axioms.exchange", check_exchange_law(cm, 100, seed), ALGEBRA),
            Row("axioms.compose_via_product", check_compose_via_product(cm, 100, seed), ALGEBRA),
            Row("axioms.category", max(laws["associativity"], laws["unit"], laws["inverse"]), ALGEBRA)]
    if scn.dm is not None:
        rows.append(Row("axioms.alpha2_semidirect", check_alpha2_semidirect(scn.dm, 100, seed), ALGEBRA))
    return rows


def check_reparam(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    g0, V0 = scn.G.random(rng), scn.G.random_algebra(rng)
    r = check_reparam_invariance(scn, fx.curve, lambda t: fx.vector_field(fx.curve(t)), g0, V0, fx.smoothstep, N=N)
    return [Row("reparam", r, REPARAM_C / N**2)]


def check_backtrack(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    g0, V0 = scn.G.random(rng), scn.G.random_algebra(rng)
    path, window = _spur_path(N)
    r = check_backtrack_invariance(scn, path, fx.vector_field(path.points), g0, V0, window)
    return [Row("backtrack", r, EXACT)]


def check_horizontal(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    lift = horizontal_lift_path(scn.G, scn.abar, fx.sampled_curve(N), scn.G.random(rng))
    return [Row("horizontal", horizontality_residual(scn.G, scn.abar, lift), ALGEBRA)]


def check_tangency(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    G = scn.G
    gam = fx.sampled_curve(N)
    lift = horizontal_lift_path(G, scn.abar, gam, G.random(rng))
    fld = transport_variation(G, scn.abar, lift, fx.vector_field(gam.points), G.random_algebra(rng))
    return [Row("tangency", tangency_residual(G, scn.abar, lift, fld), TANGENCY_C / N**2)]


def check_connection(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    G = scn.G
    gam = fx.sampled_curve(N)
    lift = horizontal_lift_path(G, scn.abar, gam, G.random(rng))
    fld = transport_variation(G, scn.abar, lift, fx.vector_field(gam.points), G.random_algebra(rng))
    eq = vert = 0.0
    for _ in range(20):
        r = check_connection_properties(scn, lift, fld, G.random(rng), G.random_algebra(rng))
        eq, vert = max(eq, r["equivariance"]), max(vert, r["vertical"])
    return [Row("connection.equivariance", eq, 1e-9), Row("connection.vertical", vert, 1e-9)]


def check_surface(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    lift = surface_horizontal_lift(scn, fx.sampled_surface(M, N), scn.G.random(rng))
    h = max(lift.ds, lift.dt)
    return [Row("surface", omega_surface_residual(scn, lift), SURFACE_C * h * h)]


def check_thin(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    th = check_thin_homotopy(scn, fx.thin_family(M, N), scn.G.random(rng))
    rows = [Row("thin.drift", th["drift"], 1e-9), Row("thin.minors", th["minors"], 1e-7),
            Row("thin.rows", th["rows"], 1e-9)]
    if scn.dm is not None:
        K = scn.dm.K
        k = kappa_star(scn, th["lift"], scn.H.random(rng))
        rows.append(Row("thin.holonomy", K.distance(k, K.identity()), 1e-9))
    return rows


def check_functorial(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    G = scn.G
    g1, g2 = _chained_paths(rng, N)
    u = (g1.start, G.random(rng))
    funct = equiv = 0.0
    for _ in range(20):
        r = check_c_lift(scn, g1, g2, u, G.random(rng))
        funct, equiv = max(funct, r["functoriality"]), max(equiv, r["equivariance"])
    rows = [Row("functorial.c_functoriality", funct, EXACT), Row("functorial.c_equivariance", equiv, 1e-11)]
    g = G.random(rng)
    for name, lifter, tol in (("undecorated", undecorated_lifter, 1e-11), ("c", cat_connection_lift_C, 1e-10),
                              ("phi", cat_connection_lift_phi, 1e-9)):
        r = check_horlift_axioms(lifter, scn, g1, g2, u, g)
        rows.append(Row(f"functorial.{name}_axioms", max(r.values()), tol))
    return rows


def phi_agreement(scn: Scenario, N: int, seed: int) -> float:
    """Distance between the C-ODE decoration (C from Phi) and the closed-form Phi decoration."""
    rng = np.random.default_rng(seed)
    gam = fx.sampled_curve(N)
    u = (gam.start, scn.G.random(rng))
    mc = cat_connection_lift_C(scn, gam, u, increments=phi_increments)
    mp = cat_connection_lift_phi(scn, gam, u)
    return scn.H.distance(mc.h, mp.h)


def check_phi(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    return [Row("phi", phi_agreement(scn, N, seed), PHI_C / N**2)]


def _w0_factory(scn: Scenario):
    if scn.dm is not None:
        return scn.dm.K, scn.c2, scn.twist_K, (lambda row: w0(scn, row))
    return scn.H, scn.b, scn.twist_H, (lambda row: w_path(scn.H, scn.c, row, twist=scn.twist_H))


def check_composition(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    _, _, L1, L2 = _lifted_pair(scn, M, N, scn.G.random(rng))
    LL = vertical_compose(L1, L2)
    model, form, twist, w0f = _w0_factory(scn)
    a, b, ab = (w_C(model, form, L, twist) for L in (L1, L2, LL))
    rc = model.distance(ab, model.multiply(a, b))
    a, b, ab = (w_C0(model, form, L, w0f, twist) for L in (L1, L2, LL))
    rc0 = model.distance(ab, model.multiply(a, b))
    return [Row("composition.w_C", rc, EXACT), Row("composition.w_C0", rc0, EXACT)]


def _random_x(scn: Scenario, rng):
    return scn.dm.embed(scn.H.random(rng), scn.G.random(rng))


def check_decorated(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    cm, G, H = scn.cm, scn.G, scn.H
    g1, g2 = _chained_paths(rng, N)
    g3 = sample_path(lambda t: fx.curve(t) - fx.curve(0.0) + g2.end, N, 1.0, fx.margin_cells(N))
    lift = horizontal_lift_path(G, scn.abar, g1, G.random(rng))
    act = assoc = 0.0
    for _ in range(SAMPLES):
        m = DecoratedPath(lift, H.random(rng))
        p1, p2 = Morphism2(H.random(rng), G.random(rng)), Morphism2(H.random(rng), G.random(rng))
        p12 = cm.product(p1, p2)
        lhs = dec_right_action(cm, dec_right_action(cm, m, p1.h, p1.a), p2.h, p2.a)
        act = max(act, dec_distance(cm, lhs, dec_right_action(cm, m, p12.h, p12.a)))
    for _ in range(5):
        m1 = DecoratedPath(horizontal_lift_path(G, scn.abar, g1, G.random(rng)), H.random(rng))
        t1 = dec_target(cm, m1)
        m2 = DecoratedPath(horizontal_lift_path(G, scn.abar, g2, t1[1]), H.random(rng))
        t2 = dec_target(cm, m2)
        m3 = DecoratedPath(horizontal_lift_path(G, scn.abar, g3, t2[1]), H.random(rng))
        left = dec_compose(cm, m3, dec_compose(cm, m2, m1))
        right = dec_compose(cm, dec_compose(cm, m3, m2), m1)
        assoc = max(assoc, dec_distance(cm, left, right))
    rows = [Row("decorated.action", act, ALGEBRA), Row("decorated.associativity", assoc, ALGEBRA)]
    if scn.dm is not None:
        rows += _doubly_decorated(scn, N, M, rng)
    return rows


def _doubly_decorated(scn: Scenario, N: int, M: int, rng) -> list[Row]:
    dm, cm, G, H = scn.dm, scn.cm, scn.G, scn.H
    K = dm.K
    Md, Nd = min(M, 40), min(N, 60)
    _, _, L1, L2 = _lifted_pair(scn, Md, Nd, G.random(rng))
    LL = vertical_compose(L1, L2)
    k1, k2, k12 = kstar(scn, L1), kstar(scn, L2), kstar(scn, LL)
    act = kap1 = kap2 = ks1 = 0.0
    ks2 = K.distance(k12, K.multiply(k1, k2))
    for _ in range(SAMPLES):
        h = H.random(rng)
        m = DecoratedSurface(L1, h, K.random(rng))
        x1, x2 = _random_x(scn, rng), _random_x(scn, rng)
        c1, c2 = K.random(rng), K.random(rng)
        lhs = dd_right_action(scn, dd_right_action(scn, m, c1, x1), c2, x2)
        rhs = dd_right_action(scn, m, K.multiply(c1, dm.alpha2(x1, c2)), K.multiply(x1, x2))
        act = max(act, dd_distance(scn, lhs, rhs))
        h1, gg1 = dm.split(x1)
        moved = L1.right_translate(gg1)
        km = kstar(scn, moved)
        ks1 = max(ks1, K.distance(km, dm.alpha2(dm.embed_g(G.inverse(gg1)), k1)))
        h_act = cm.alpha(G.inverse(gg1), H.multiply(H.inverse(h1), h))
        kap1 = max(kap1, K.distance(kappa_star(scn, moved, h_act, km),
                                    dm.alpha2(K.inverse(x1), kappa_star(scn, L1, h, k1))))
        kap2 = max(kap2, K.distance(kappa_star(scn, LL, h, k12),
                                    K.multiply(kappa_star(scn, L1, h, k1), kappa_star(scn, L2, h, k2))))
    # associativity of doubly decorated composition over three stacked transported surfaces
    h = H.random(rng)
    mA = decorate_surface(scn, L1, h)
    tA = dd_target(scn, mA)
    S_b = sample_surface(lambda s, t: fx.surface(1.0 + s, t), L2.M, Nd, s_duration=L2.s_duration)
    S_c = sample_surface(lambda s, t: fx.surface(1.0 + L2.s_duration + s, t), L2.M, Nd, s_duration=L2.s_duration)
    mB = decorate_surface(scn, surface_horizontal_lift(scn, S_b, tA.lift.fiber[0]), tA.h)
    tB = dd_target(scn, mB)
    mC = decorate_surface(scn, surface_horizontal_lift(scn, S_c, tB.lift.fiber[0]), tB.h)
    left = dd_compose(scn, mC, dd_compose(scn, mB, mA))
    right = dd_compose(scn, dd_compose(scn, mC, mB), mA)
    return [Row("doubly.action", act, ALGEBRA), Row("doubly.associativity", dd_distance(scn, left, right), ALGEBRA),
            Row("doubly.kstar_equivariance", ks1, ALGEBRA), Row("doubly.kstar_composition", ks2, EXACT),
            Row("doubly.kappa_equivariance", kap1, ALGEBRA), Row("doubly.kappa_composition", kap2, EXACT)]


def check_associated(scn: Scenario, N: int, M: int, seed: int) -> list[Row]:
    rng = np.random.default_rng(seed)
    G = scn.G
    rep = matrix_representation(G.n)
    g1, g2 = _chained_paths(rng, N)
    wd = fn = 0.0
    for _ in range(5):
        cls = TwistedClass(g1.start, rng.normal(size=G.n))
        r = check_assoc_transport(scn, rep, g1, g2, cls, G.random(rng))
        wd, fn = max(wd, r["well_defined"]), max(fn, r["functoriality"])
    return [Row("associated.well_defined", wd, 1e-11), Row("associated.functoriality", fn, 1e-11)]


CHECKS: dict[str, Callable] = {
    "associated": check_associated,
    "axioms": check_axioms,
    "backtrack": check_backtrack,
    "composition": check_composition,
    "connection": check_connection,
    "decorated": check_decorated,
    "functorial": check_functorial,
    "horizontal": check_horizontal,
    "phi": check_phi,
    "reparam": check_reparam,
    "surface": check_surface,
    "tangency": check_tangency,
    "thin": check_thin,
}


def run_checks(config: ExperimentConfig) -> list[Row]:
    config.validate()
    scn = get_scenario(config.scenario)
    rows: list[Row] = []
    for name in config.check_names():
        rows.extend(CHECKS[name](scn, config.N, config.M, config.seed))
    return sorted(rows, key=lambda r: r.check)


# -- convergence ----------------------------------------------------------------

def _ladder_reparam(scn, n, seed):
    return check_reparam(scn, n, n, seed)[0].residual


def _ladder_surface(scn, n, seed):
    return check_surface(scn, n, n, seed)[0].residual


def _ladder_phi(scn, n, seed):
    return phi_agreement(scn, n, seed)


def _ladder_tangency(scn, n, seed):
    return check_tangency(scn, n, n, seed)[0].residual


def _ladder_backtrack(scn, n, seed):
    return check_backtrack(scn, n, n, seed)[0].residual


def _ladder_composition(scn, n, seed):
    return max(r.residual for r in check_composition(scn, n, max(n // 4, 8), seed))


LADDERS: dict[str, tuple[Callable, tuple, bool]] = {
    # name: (residual function, default ladder, exact)
    "backtrack": (_ladder_backtrack, (100, 200, 400), True),
    "composition": (_ladder_composition, (40, 80, 160), True),
    "phi": (_ladder_phi, (100, 200, 400), False),
    "reparam": (_ladder_reparam, (100, 200, 400), False),
    "surface": (_ladder_surface, (25, 50, 100), False),
    "tangency": (_ladder_tangency, (100, 200, 400), False),
}


@dataclass(frozen=True)
class OrderRow:
    check: str
    h: float
    residual: float
    order: str  # "", "exact" or a formatted number
    ok: bool


def observed_orders(hs, residuals, exact: bool) -> list[str]:
    """Successive ``log(r_i / r_{i+1}) / log(h_i / h_{i+1})`` values, or ``exact`` below round-off."""
    if exact or all(r <= EXACT for r in residuals):
        return ["exact"] * len(residuals)
    out = [""]
    for i in range(1, len(residuals)):
        r0, r1 = residuals[i - 1], residuals[i]
        if r0 <= 0.0 or r1 <= 0.0:
            out.append("exact")
        else:
            out.append(f"{np.log(r0 / r1) / np.log(hs[i - 1] / hs[i]):.3f}")
    return out


def convergence(scenario: str, checks, ladder=None, seed: int = 0) -> list[OrderRow]:
    scn = get_scenario(scenario)
    names = list(LADDERS) if not checks or "all" in checks else sorted(set(checks))
    rows: list[OrderRow] = []
    for name in names:
        if name not in LADDERS:
            raise UnknownNameError(f"no convergence study for {name!r}; choose from {', '.join(LADDERS)}")
        fn, default, exact = LADDERS[name]
        grid = tuple(ladder) if ladder else default
        if len(grid) < 3:
            raise GridError("a convergence ladder needs at least 3 grids")
        hs = [1.0 / n for n in grid]
        res = [float(fn(scn, n, seed)) for n in grid]
        orders = observed_orders(hs, res, exact)
        for i, (h, r, o) in enumerate(zip(hs, res, orders)):
            if o == "exact":
                ok = r <= EXACT
            else:
                ok = i == 0 or r <= res[i - 1]
            rows.append(OrderRow(name, h, r, o, ok))
    return rows
