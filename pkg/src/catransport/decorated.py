"""Decorated horizontal paths and surfaces, categorical connections and their transports.

A decorated path ``(lift, h)`` runs from ``s(lift)`` to ``t(lift) tau(h^-1)``.
Structure group elements act on the right: ``(lift, h)(h1, g1) = (lift g1, alpha(g1^-1)(h1^-1 h))``.
Decorated surfaces ``(Gamma~, h, k)`` carry a second decoration in ``K = H x| G``
and are transported with ``kappa* = alpha2(h)(k*)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .catalog import Scenario
from .connection import lift_from, omega_surface_residual, surface_horizontal_lift
from .crossed import CrossedModule, Morphism2
from .errors import CompositionError, DomainError, FiberError
from .forms import FD_STEP
from .lie_ode import path_increments, solve_left_ode, w_C, w_path
from .paths import SampledPath, SampledSurface, compose_paths, vertical_compose

MATCH_TOL = 1e-9


def _d(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return np.inf
    return float(np.max(np.abs(a - b))) if a.size else 0.0


@dataclass(frozen=True)
class DecoratedPath:
    lift: SampledPath
    h: object


def dec_source(cm: CrossedModule, m: DecoratedPath):
    return m.lift.points[0], m.lift.fiber[0]


def dec_target(cm: CrossedModule, m: DecoratedPath):
    return m.lift.points[-1], cm.G.multiply(m.lift.fiber[-1], cm.tau(cm.H.inverse(m.h)))


def point_distance(p, q) -> float:
    return max(_d(p[0], q[0]), _d(p[1], q[1]))


def dec_distance(cm: CrossedModule, m1: DecoratedPath, m2: DecoratedPath) -> float:
    return max(_d(m1.lift.points, m2.lift.points), _d(m1.lift.fiber, m2.lift.fiber), cm.H.distance(m1.h, m2.h))


def dec_compose(cm: CrossedModule, m2: DecoratedPath, m1: DecoratedPath) -> DecoratedPath:
    """``(lift2, h2) o (lift1, h1) = (lift2 tau(h1) o lift1, h2 h1)``."""
    d = point_distance(dec_target(cm, m1), dec_source(cm, m2))
    if d > MATCH_TOL:
        raise CompositionError(f"decorated paths do not meet: gap {d:.3e}", d)
    path = compose_paths(m1.lift, m2.lift.right_translate(cm.tau(m1.h)))
    return DecoratedPath(path, cm.H.multiply(m2.h, m1.h))


def dec_right_action(cm: CrossedModule, m: DecoratedPath, h1, g1) -> DecoratedPath:
    G, H = cm.G, cm.H
    g1i = G.inverse(g1)
    return DecoratedPath(m.lift.right_translate(g1), cm.alpha(g1i, H.multiply(H.inverse(h1), m.h)))


def dec_identity(cm: CrossedModule, point, N: int = 2, step: float = 0.5) -> DecoratedPath:
    x, g = point
    pts = np.repeat(np.asarray(x, dtype=float)[None], N + 1, axis=0)
    fib = np.repeat(np.asarray(g, dtype=float)[None], N + 1, axis=0)
    return DecoratedPath(SampledPath(pts, N * step, N // 2, fib), cm.H.identity())


def reduction(cm: CrossedModule, lift: SampledPath) -> DecoratedPath:
    """Undecorated lift as a decorated one, ``lift -> (lift, e)``."""
    return DecoratedPath(lift, cm.H.identity())


def fiber_transition(cm: CrossedModule, m: DecoratedPath, m0: DecoratedPath):
    """``(h1, g1)`` with ``m (h1, g1) = m0`` for two decorated lifts of the same base path."""
    G, H = cm.G, cm.H
    if _d(m.lift.points, m0.lift.points) > MATCH_TOL:
        raise FiberError("decorated paths lie over different base paths")
    g1 = G.multiply(G.inverse(m.lift.fiber[0]), m0.lift.fiber[0])
    h1 = H.multiply(m.h, cm.alpha(g1, H.inverse(m0.h)))
    return h1, g1


def check_notation_conversion(cm: CrossedModule, samples: int = 50, seed: int = 0) -> float:
    """``alpha(g1^-1)(h1^-1 h)`` equals the kernel element ``phi^-1 theta 1_{s(phi)}``.

    Here ``phi = (h1, g1)`` and ``theta = (h, e)`` is ``h`` read as a morphism
    out of the identity object.
    """
    rng = np.random.default_rng(seed)
    G, H = cm.G, cm.H
    res = 0.0
    for _ in range(samples):
        h, h1, g1 = H.random(rng), H.random(rng), G.random(rng)
        phi = Morphism2(h1, g1)
        theta = Morphism2(h, G.identity())
        r = cm.product(cm.product(cm.inverse(phi), theta), cm.unit(g1))
        direct = cm.alpha(G.inverse(g1), H.multiply(H.inverse(h1), h))
        res = max(res, H.distance(r.h, direct), G.distance(r.a, G.identity()))
    return res


# -- categorical connections -------------------------------------------------

def c_increments(scn: Scenario, lift: SampledPath):
    """Per-cell ``int C(lift')`` for the equivariant extension of the base form ``c``."""
    return path_increments(scn.c, lift, twist=scn.twist_H)


def phi_increments(scn: Scenario, lift: SampledPath, fd_step: float = FD_STEP):
    """Per-cell ``int (dPhi)Phi^-1 (lift')`` by central differences at the cell midpoint."""
    G, H = scn.G, scn.H
    x, f, dt = lift.points, lift.fiber, lift.step
    fl = f[:-1]
    xi = G.log_near_identity(G.multiply(G.inverse(fl), f[1:]))  # left-trivialized fiber step
    xm = 0.5 * (x[1:] + x[:-1])
    gm = G.multiply(fl, G.exp(0.5 * xi))
    vel = (x[1:] - x[:-1]) / dt
    vxi = xi / dt
    plus = scn.Phi(xm + fd_step * vel, G.multiply(gm, G.exp(fd_step * vxi)))
    minus = scn.Phi(xm - fd_step * vel, G.multiply(gm, G.exp(-fd_step * vxi)))
    dphi = (plus - minus) / (2 * fd_step)
    if hasattr(H, "vee"):
        val = H.vee(dphi @ H.inverse(scn.Phi(xm, gm)))
    else:
        val = dphi
    return val * dt


def cat_connection_lift_C(scn: Scenario, gamma: SampledPath, u, increments: Optional[Callable] = None) -> DecoratedPath:
    """Lift ``gamma`` through ``u`` and decorate it with ``h(t1)``, ``h^-1 h' = -C(lift')``, ``h(t0) = e``."""
    lift = lift_from(scn.G, scn.abar, gamma, u)
    inc = (increments or c_increments)(scn, lift)
    h = solve_left_ode(scn.H, -inc)[-1]
    return DecoratedPath(lift, h)


def cat_connection_lift_phi(scn: Scenario, gamma: SampledPath, u) -> DecoratedPath:
    """Decoration ``Phi(u) Phi(v)^-1`` where ``v`` is the end of the lift.

    This is the closed form of the C-lift for ``C = (dPhi) Phi^-1``.
    """
    lift = lift_from(scn.G, scn.abar, gamma, u)
    H = scn.H
    pu = scn.Phi(lift.points[0], lift.fiber[0])
    pv = scn.Phi(lift.points[-1], lift.fiber[-1])
    return DecoratedPath(lift, H.multiply(pu, H.inverse(pv)))


def undecorated_lifter(scn: Scenario, gamma: SampledPath, u) -> DecoratedPath:
    return reduction(scn.cm, lift_from(scn.G, scn.abar, gamma, u))


def check_horlift_axioms(lifter: Callable, scn: Scenario, gamma1: SampledPath, gamma2: SampledPath, u, g) -> dict:
    """Projection, functoriality and rigidity of a lifter ``(gamma, u) -> DecoratedPath``.

    ``gamma2`` must start where ``gamma1`` ends.
    """
    cm = scn.cm
    m1 = lifter(scn, gamma1, u)
    proj = _d(m1.lift.points, gamma1.points)
    m2 = lifter(scn, gamma2, dec_target(cm, m1))
    whole = lifter(scn, compose_paths(gamma1, gamma2), u)
    funct = dec_distance(cm, whole, dec_compose(cm, m2, m1))
    ug = (u[0], cm.G.multiply(u[1], g))
    rigid = dec_distance(cm, lifter(scn, gamma1, ug), dec_right_action(cm, m1, cm.H.identity(), g))
    return {"projection": proj, "functoriality": funct, "rigidity": rigid}


def check_c_lift(scn: Scenario, gamma1: SampledPath, gamma2: SampledPath, u, g) -> dict:
    """``h_{ug} = alpha(g^-1) h_u`` and ``h_u(gamma2 o gamma1) = h_u(gamma1) h_v(gamma2)``."""
    cm, G, H = scn.cm, scn.G, scn.H
    m = cat_connection_lift_C(scn, gamma1, u)
    mg = cat_connection_lift_C(scn, gamma1, (u[0], G.multiply(u[1], g)))
    equiv = H.distance(mg.h, cm.alpha(G.inverse(g), m.h))
    v = (m.lift.points[-1], m.lift.fiber[-1])
    m2 = cat_connection_lift_C(scn, gamma2, v)
    whole = cat_connection_lift_C(scn, compose_paths(gamma1, gamma2), u)
    funct = H.distance(whole.h, H.multiply(m.h, m2.h))
    return {"equivariance": equiv, "functoriality": funct}


# -- second level: decorated surfaces ----------------------------------------

def _need_double(scn: Scenario):
    if scn.dm is None:
        raise DomainError(f"scenario {scn.name!r} has no double module")
    return scn.dm


def w0(scn: Scenario, row: SampledPath):
    """``w1(t1)`` for ``w1^-1 w1' = -C1(row')``, ``w1(t0) = e``."""
    dm = _need_double(scn)
    return w_path(dm.K, scn.c1, row, twist=scn.twist_K)


def kstar(scn: Scenario, surface_lift: SampledSurface):
    """``k*(Gamma~) = w0(s Gamma~) w_C2(Gamma~) w0(t Gamma~)^-1``."""
    dm = _need_double(scn)
    K = dm.K
    core = w_C(K, scn.c2, surface_lift, twist=scn.twist_K)
    return K.multiply(K.multiply(w0(scn, surface_lift.source()), core), K.inverse(w0(scn, surface_lift.target())))


def kappa_star(scn: Scenario, surface_lift: SampledSurface, h, k=None):
    """``kappa*(Gamma~, h) = alpha2(h)(k*(Gamma~))``."""
    dm = _need_double(scn)
    k = kstar(scn, surface_lift) if k is None else k
    return dm.alpha2(dm.embed_h(h), k)


@dataclass(frozen=True)
class DecoratedSurface:
    surface: SampledSurface
    h: object
    k: object


def dd_source(scn: Scenario, m: DecoratedSurface) -> DecoratedPath:
    return DecoratedPath(m.surface.source(), m.h)


def _act_object(scn: Scenario, p: DecoratedPath, x) -> DecoratedPath:
    """Right action of ``x`` in ``H x| G`` (a K element) on a decorated path."""
    h1, g1 = scn.dm.split(x)
    return dec_right_action(scn.cm, p, h1, g1)


def dd_target(scn: Scenario, m: DecoratedSurface) -> DecoratedPath:
    """``(t Gamma~, h) tau2(k^-1)``; ``tau2`` is the identity of K."""
    dm = _need_double(scn)
    return _act_object(scn, DecoratedPath(m.surface.target(), m.h), dm.K.inverse(m.k))


def _act_surface(scn: Scenario, surface: SampledSurface, h, x):
    h1, g1 = scn.dm.split(x)
    G, H = scn.G, scn.H
    return surface.right_translate(g1), scn.cm.alpha(G.inverse(g1), H.multiply(H.inverse(h1), h))


def dd_distance(scn: Scenario, m1: DecoratedSurface, m2: DecoratedSurface) -> float:
    s1, s2 = m1.surface, m2.surface
    return max(_d(s1.points, s2.points), _d(s1.fiber, s2.fiber), scn.H.distance(m1.h, m2.h),
               scn.dm.K.distance(m1.k, m2.k))


def dd_compose(scn: Scenario, m2: DecoratedSurface, m1: DecoratedSurface) -> DecoratedSurface:
    """``(D, h, k) o (G, h', k') = ((D, h) tau2(k') o_v (G, h'), k k')``."""
    dm = _need_double(scn)
    cm = scn.cm
    d = dec_distance(cm, dd_target(scn, m1), dd_source(scn, m2))
    if d > MATCH_TOL:
        raise CompositionError(f"decorated surfaces do not meet: gap {d:.3e}", d)
    moved, h_moved = _act_surface(scn, m2.surface, m2.h, m1.k)
    d = cm.H.distance(h_moved, m1.h)
    if d > MATCH_TOL:
        raise CompositionError(f"decorations differ after transfer by {d:.3e}", d)
    return DecoratedSurface(vertical_compose(m1.surface, moved), m1.h, dm.K.multiply(m2.k, m1.k))


def dd_right_action(scn: Scenario, m: DecoratedSurface, k1, x1) -> DecoratedSurface:
    """``(G, h, k)(k1, x1) = (G g1, alpha1(g1^-1)(h1^-1 h), alpha2(x1^-1)(k1^-1 k))`` with ``x1 = (h1, g1)``."""
    dm = _need_double(scn)
    K = dm.K
    surf, h = _act_surface(scn, m.surface, m.h, x1)
    k = dm.alpha2(K.inverse(x1), K.multiply(K.inverse(k1), m.k))
    return DecoratedSurface(surf, h, k)


def dd_horizontality(scn: Scenario, m: DecoratedSurface) -> tuple[float, float]:
    """omega residual of the surface and the tolerance ``10 h^2`` for its grid."""
    h = max(m.surface.ds, m.surface.dt)
    return omega_surface_residual(scn, m.surface), 10.0 * h * h


def decorate_surface(scn: Scenario, surface_lift: SampledSurface, h) -> DecoratedSurface:
    """The transported decorated surface ``(Gamma~, h, kappa*(Gamma~, h))``."""
    return DecoratedSurface(surface_lift, h, kappa_star(scn, surface_lift, h))


def transport_decorated_path(scn: Scenario, family: SampledSurface, start: DecoratedPath,
                             return_surface: bool = False):
    """Transport ``start`` (lying over the first row of ``family``) across the family."""
    lift = surface_horizontal_lift(scn, family.base(), start.lift.fiber[0])
    d = max(_d(lift.source().points, start.lift.points), _d(lift.source().fiber, start.lift.fiber))
    if d > MATCH_TOL:
        raise FiberError(f"start path is not the horizontal lift of the first row (gap {d:.3e})")
    m = decorate_surface(scn, lift, start.h)
    out = dd_target(scn, m)
    return (out, m) if return_surface else out
