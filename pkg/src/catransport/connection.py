"""Connections on the trivial bundle ``R^n x G`` and the induced form on horizontal paths.

A bundle point is ``(x, g)`` with right action ``(x, g) g' = (x, g g')``. A
tangent vector along a lift is stored as its base part ``v`` together with its
vertical part ``V = Abar(v~)``; the connection form is then
``A(v~) = Ad(g^-1)(a - abar)(v) + V``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .catalog import Scenario
from .errors import FiberError, GridError
from .forms import FD_STEP, OneForm
from .groups import GroupModel
from .lie_ode import solve_left_ode
from .paths import SampledPath, SampledSurface, erase_backtrack, reparametrize, BacktrackWindow

POINT_TOL = 1e-9


def horizontal_lift_path(G: GroupModel, abar: OneForm, gamma: SampledPath, g0) -> SampledPath:
    """Lift of ``gamma`` through ``(gamma(0), g0)`` solving ``g' = -abar(gamma') g``.

    The fiber obeys ``(g^-1)^-1 (g^-1)' = abar(gamma')``, so each step multiplies
    by ``exp(-abar_mid dx)`` on the left and lifts through ``g0 g'`` are the
    right translates of lifts through ``g0``.
    """
    if gamma.is_bundle:
        gamma = gamma.base()
    x = gamma.points
    incr = abar(0.5 * (x[1:] + x[:-1]), x[1:] - x[:-1])
    W = solve_left_ode(G, incr, initial=G.inverse(np.asarray(g0, dtype=float)))
    return gamma.with_fiber(G.inverse(W))


def lift_from(G, abar, gamma: SampledPath, u) -> SampledPath:
    """Lift through the bundle point ``u = (x, g)``; ``x`` must be the start of ``gamma``."""
    x, g = u
    d = float(np.max(np.abs(np.asarray(x) - gamma.points[0])))
    if d > POINT_TOL:
        raise FiberError(f"initial point is {d:.3e} away from the start of the path")
    return horizontal_lift_path(G, abar, gamma, g)


def horizontality_residual(G, abar: OneForm, lift: SampledPath) -> float:
    """``max |Abar(lift')|`` over cell midpoints, using the chord and the fiber step."""
    x, f = lift.points, lift.fiber
    X = abar(0.5 * (x[1:] + x[:-1]), x[1:] - x[:-1])
    fi = G.inverse(f[:-1])
    step = G.log_near_identity(G.multiply(fi, f[1:]))
    return float(np.max(np.abs(G.Ad(fi, X) + step))) / lift.step


def curvature(G, form: OneForm, x, v, w, fd_step: float = FD_STEP):
    """``F(v, w) = da(v, w) + [a(v), a(w)]``."""
    return form.d(x, v, w, fd_step) + G.bracket(form(x, v), form(x, w))


@dataclass(frozen=True)
class VariationField:
    """A tangent field along a lift: base part ``(N+1, n)``, vertical part ``(N+1, dim G)``."""

    base: np.ndarray
    vertical: np.ndarray
    one_sided: bool = False

    def right_translate(self, G, g) -> "VariationField":
        return VariationField(self.base, G.Ad(G.inverse(g), self.vertical), self.one_sided)


def _avg_pair(fn, f0, f1, Z):
    return 0.5 * (fn(f0, Z) + fn(f1, Z))


def transport_variation(G, abar: OneForm, lift: SampledPath, base, vertical0) -> VariationField:
    """Integrate ``d/dt Abar(v~) = F(lift', v~)`` from ``vertical0`` with the midpoint rule."""
    x, f = lift.points, lift.fiber
    base = np.asarray(base, dtype=float)
    mid = 0.5 * (x[1:] + x[:-1])
    F = curvature(G, abar, mid, x[1:] - x[:-1], 0.5 * (base[1:] + base[:-1]))
    inc = _avg_pair(lambda g, Z: G.Ad(G.inverse(g), Z), f[:-1], f[1:], F)
    V = np.empty((lift.N + 1, G.dim))
    V[0] = vertical0
    acc = np.array(vertical0, dtype=float)
    for k in range(lift.N):
        acc = acc + inc[k]
        V[k + 1] = acc
    return VariationField(base, V)


def variation_field(G, abar: OneForm, surface_lift: SampledSurface, s_index: int) -> VariationField:
    """The field ``d/ds`` of a lifted family along row ``s_index``.

    Central differences in s give the base part and the vertical part at
    ``t0``; the vertical part is then carried along the row by the tangency
    equation. Boundary rows use one-sided differences and are flagged.
    """
    M, ds = surface_lift.M, surface_lift.ds
    j = s_index
    if not 0 <= j <= M:
        raise GridError(f"row {j} outside 0..{M}")
    lo, hi = (j - 1, j + 1) if 0 < j < M else ((j, j + 1) if j == 0 else (j - 1, j))
    width = (hi - lo) * ds
    x = surface_lift.points
    f = surface_lift.fiber
    base = (x[hi] - x[lo]) / width
    # log(f_lo^-1 f_hi) / width is the left-trivialized s-derivative at row j up to O(ds^2)
    xi = G.log_near_identity(G.multiply(G.inverse(f[lo, 0]), f[hi, 0])) / width
    V0 = G.Ad(G.inverse(f[j, 0]), abar(x[j, 0], base[0])) + xi
    fld = transport_variation(G, abar, surface_lift.row(j), base, V0)
    return VariationField(fld.base, fld.vertical, one_sided=not 0 < j < M)


def tangency_residual(G, abar: OneForm, lift: SampledPath, field: VariationField) -> float:
    """Central-difference residual of ``d/dt Abar(v~) = F(lift', v~)`` at interior samples."""
    x, f, dt = lift.points, lift.fiber, lift.step
    V, v = field.vertical, field.base
    lhs = (V[2:] - V[:-2]) / (2 * dt)
    vel = (x[2:] - x[:-2]) / (2 * dt)
    rhs = G.Ad(G.inverse(f[1:-1]), curvature(G, abar, x[1:-1], vel, v[1:-1]))
    return float(np.max(np.abs(lhs - rhs))) if len(lhs) else 0.0


def eval_omega_AB(scn: Scenario, lift: SampledPath, field: VariationField):
    """``omega(v~) = A(v~(t0)) + tau_alg(int B(lift', v~) dt)`` with the midpoint rule."""
    G = scn.G
    x, f = lift.points, lift.fiber
    v, V = field.base, field.vertical
    g0i = G.inverse(f[0])
    first = G.Ad(g0i, scn.a(x[0], v[0]) - scn.abar(x[0], v[0])) + V[0]
    mid = 0.5 * (x[1:] + x[:-1])
    Zb = scn.b(mid, x[1:] - x[:-1], 0.5 * (v[1:] + v[:-1]))
    chen = _avg_pair(scn.twist_H, f[:-1], f[1:], Zb).sum(axis=0)
    return first + scn.cm.tau_alg(chen)


def omega_along(scn: Scenario, gamma: SampledPath, base_variation, g0, vertical0):
    """Lift ``gamma`` through ``g0``, build the field from its initial vertical part, evaluate omega."""
    lift = horizontal_lift_path(scn.G, scn.abar, gamma, g0)
    fld = transport_variation(scn.G, scn.abar, lift, base_variation, vertical0)
    return eval_omega_AB(scn, lift, fld)


def _interp_rows(values, t_old, t_new):
    values = np.asarray(values)
    return np.stack([np.interp(t_new, t_old, values[:, i]) for i in range(values.shape[1])], axis=1)


def check_reparam_invariance(scn: Scenario, gamma, base_variation, g0, vertical0, phi, N: Optional[int] = None) -> float:
    """``|omega(v~) - omega(v~ o phi)|``.

    With a ``SampledPath``, ``phi`` holds the old times at the new grid nodes and
    the path and base variation are resampled by linear interpolation. With
    callables ``gamma(t)``, ``base_variation(t)`` and ``phi(u)`` on ``[0, 1]``,
    both sides are sampled exactly on uniform ``N``-cell grids.
    """
    if isinstance(gamma, SampledPath):
        w1 = omega_along(scn, gamma, base_variation, g0, vertical0)
        gp = reparametrize(gamma, phi)
        vp = _interp_rows(base_variation, gamma.times, phi)
        w2 = omega_along(scn, gp, vp, g0, vertical0)
    else:
        if N is None:
            raise GridError("N is required when the path is given as a function")
        t = np.linspace(0.0, 1.0, N + 1)
        tp = phi(t)
        w1 = omega_along(scn, SampledPath(gamma(t)), base_variation(t), g0, vertical0)
        w2 = omega_along(scn, SampledPath(gamma(tp)), base_variation(tp), g0, vertical0)
    return float(np.max(np.abs(w1 - w2)))


def check_backtrack_invariance(scn: Scenario, gamma: SampledPath, base_variation, g0, vertical0,
                               window: BacktrackWindow) -> float:
    """``|omega(v~) - omega(v~ with the backtrack erased)|``."""
    w1 = omega_along(scn, gamma, base_variation, g0, vertical0)
    erased = erase_backtrack(gamma, window)
    v = np.asarray(base_variation)
    keep = np.r_[0: window.start + 1, window.stop + 1: gamma.N + 1]
    w2 = omega_along(scn, erased, v[keep], g0, vertical0)
    return float(np.max(np.abs(w1 - w2)))


def surface_horizontal_lift(scn: Scenario, surface: SampledSurface, q0) -> SampledSurface:
    """Lift a base family to an omega-horizontal family of Abar-horizontal rows.

    The initial points ``q(s)`` solve ``q' = -a(d_s Gamma(s, t0)) q - q tau_alg(Z(s))``
    with ``Z(s) = int alpha_alg(g_s(t)^-1) b(d_t Gamma, d_s Gamma) dt``. Writing
    each row as ``g_s(t) = W_s(t)^-1 q(s)`` with ``W_s`` independent of ``q`` turns
    this into ``q' = -(a(d_s Gamma) + tau_alg(Z0(s))) q``, a left ODE of the same
    type as the row lifts.
    """
    G, cm = scn.G, scn.cm
    if surface.M < 2 or surface.N < 2:
        raise GridError("surface lift needs at least 2x2 cells")
    x = surface.base().points
    q0 = np.asarray(q0, dtype=float)
    # row transports from the identity, all rows at once
    row_inc = scn.abar(0.5 * (x[:, 1:] + x[:, :-1]), x[:, 1:] - x[:, :-1])
    W = solve_left_ode(G, row_inc)  # (M+1, N+1, n, n)
    x00, x01, x10, x11 = x[:-1, :-1], x[:-1, 1:], x[1:, :-1], x[1:, 1:]
    centre = 0.25 * (x00 + x01 + x10 + x11)
    d_s = 0.5 * ((x10 - x00) + (x11 - x01))
    d_t = 0.5 * ((x01 - x00) + (x11 - x10))
    Zb = scn.b(centre, d_t, d_s)
    corners = [W[:-1, :-1], W[:-1, 1:], W[1:, :-1], W[1:, 1:]]
    Z0 = sum(cm.alpha_alg(Wc, Zb) for Wc in corners) / 4.0
    Z0 = Z0.sum(axis=1)  # (M, dim H)
    e0 = x[:, 0]
    q_inc = scn.a(0.5 * (e0[1:] + e0[:-1]), e0[1:] - e0[:-1]) + cm.tau_alg(Z0)
    U = solve_left_ode(G, q_inc, initial=G.inverse(q0))
    q = G.inverse(U)  # (M+1, n, n)
    fiber = G.inverse(W) @ q[:, None]
    return SampledSurface(x, surface.s_duration, surface.t_duration, surface.margin, fiber)


def omega_surface_residual(scn: Scenario, surface_lift: SampledSurface, rows=None) -> float:
    """``max |omega(d_s Gamma~)|`` over the given rows (interior rows by default)."""
    rows = range(1, surface_lift.M) if rows is None else rows
    res = 0.0
    for j in rows:
        fld = variation_field(scn.G, scn.abar, surface_lift, j)
        res = max(res, float(np.max(np.abs(eval_omega_AB(scn, surface_lift.row(j), fld)))))
    return res


def lifted_minors(G, abar: OneForm, lift: SampledPath, field: VariationField) -> float:
    """Largest 2x2 minor of the (base, vertical) components of ``lift'`` and ``v~`` at cell midpoints."""
    x, f, dt = lift.points, lift.fiber, lift.step
    fi = G.inverse(f[:-1])
    X = abar(0.5 * (x[1:] + x[:-1]), x[1:] - x[:-1])
    vert_t = (G.Ad(fi, X) + G.log_near_identity(G.multiply(fi, f[1:]))) / dt
    P = np.concatenate([(x[1:] - x[:-1]) / dt, vert_t], axis=1)
    Q = np.concatenate([0.5 * (field.base[1:] + field.base[:-1]),
                        0.5 * (field.vertical[1:] + field.vertical[:-1])], axis=1)
    minors = P[:, :, None] * Q[:, None, :] - P[:, None, :] * Q[:, :, None]
    return float(np.max(np.abs(minors)))


def check_thin_homotopy(scn: Scenario, family: SampledSurface, q0) -> dict:
    """Residuals for the lift of a thin family (all rows reparametrize one path).

    ``drift``: motion of the initial point; ``minors``: 2x2 minors of the lifted
    partials; ``rows``: distance of each row from the Abar-lift through the
    shared initial point.
    """
    G = scn.G
    lift = surface_horizontal_lift(scn, family, q0)
    q = lift.fiber[:, 0]
    drift = float(np.max(np.abs(q - q[0])))
    minors = 0.0
    for j in range(1, lift.M):
        fld = variation_field(G, scn.abar, lift, j)
        minors = max(minors, lifted_minors(G, scn.abar, lift.row(j), fld))
    rows = 0.0
    for j in range(lift.M + 1):
        fresh = horizontal_lift_path(G, scn.abar, family.row(j), q[0])
        rows = max(rows, float(np.max(np.abs(fresh.fiber - lift.fiber[j]))))
    return {"drift": drift, "minors": minors, "rows": rows, "lift": lift}


def check_connection_properties(scn: Scenario, lift: SampledPath, field: VariationField, g, Y) -> dict:
    """``omega(v~ g) = Ad(g^-1) omega(v~)`` and ``omega(Y~) = Y`` for the vertical field of ``Y``."""
    G = scn.G
    w = eval_omega_AB(scn, lift, field)
    wg = eval_omega_AB(scn, lift.right_translate(g), field.right_translate(G, g))
    equiv = float(np.max(np.abs(wg - G.Ad(G.inverse(g), w))))
    vert = VariationField(np.zeros_like(field.base), np.broadcast_to(Y, field.vertical.shape).copy())
    reprod = float(np.max(np.abs(eval_omega_AB(scn, lift, vert) - Y)))
    return {"equivariance": equiv, "vertical": reprod}
