"""Left-invariant ODEs on group models and the path/surface functionals built from them.

``solve_left_ode`` integrates ``w^-1 w' = X(t)`` with the exponential midpoint
scheme ``w_{k+1} = w_k exp(dt X_k)``, where ``X_k`` is the value at the middle
of cell k. Quadratures below use the same midpoint convention: forms are
evaluated at cell centres on chord vectors, and fiber twists are averaged over
the cell's corner samples.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .errors import GridError
from .forms import OneForm, TwoForm
from .groups import AdditiveGroup, GroupModel
from .paths import SampledPath, SampledSurface


def solve_left_ode(model: GroupModel, rhs, step=1.0, initial=None) -> np.ndarray:
    """Samples ``w_0 .. w_N`` of ``w^-1 w' = rhs`` with ``w_0 = initial`` (identity by default).

    ``rhs`` has shape ``(..., N, dim)`` and holds midpoint values per cell;
    ``step`` is a scalar or per-cell array. Leading axes are solved in parallel.
    Restarting from any ``w_k`` with the remaining increments reproduces the
    tail of the solution bit for bit.
    """
    rhs = model.check_algebra(rhs)
    step = np.asarray(step, dtype=float)
    incr = rhs * (step[..., None] if step.ndim else step)
    lead, N = incr.shape[:-2], incr.shape[-2]
    w0 = model.identity() if initial is None else np.asarray(initial, dtype=float)
    w0 = np.broadcast_to(w0, lead + model.shape)
    if isinstance(model, AdditiveGroup):
        # sequential sums rather than cumsum keep the restart property exact
        out = np.empty(lead + (N + 1,) + model.shape)
        out[..., 0, :] = w0
        w = w0.copy()
        for k in range(N):
            w = w + incr[..., k, :]
            out[..., k + 1, :] = w
        return out
    E = model.exp(incr)
    out = np.empty(lead + (N + 1,) + model.shape)
    w = np.array(w0, dtype=float)
    out[..., 0, :, :] = w
    for k in range(N):
        w = w @ E[..., k, :, :]
        out[..., k + 1, :, :] = w
    return out


def _avg_twist(twist: Optional[Callable], fibers, Z):
    """Average of ``twist(f, Z)`` over a list of corner fibers (identity twist if None)."""
    if twist is None or fibers is None:
        return Z
    return sum(twist(f, Z) for f in fibers) / len(fibers)


def path_increments(form: OneForm, path: SampledPath, twist: Optional[Callable] = None) -> np.ndarray:
    """Per-cell ``int_cell C(path')`` with the midpoint rule; shape ``(N, dim)``.

    ``twist(f, Z)`` turns a base value into the bundle value at fiber ``f``.
    """
    x = path.points
    mid = 0.5 * (x[1:] + x[:-1])
    Z = form(mid, x[1:] - x[:-1])
    fib = None if path.fiber is None else [path.fiber[:-1], path.fiber[1:]]
    return _avg_twist(twist, fib, Z)


def surface_cells(surface: SampledSurface):
    """Cell centres and corner-averaged chord vectors ``(x_c, d_s, d_t)``, each ``(M, N, n)``."""
    x = surface.points
    x00, x01, x10, x11 = x[:-1, :-1], x[:-1, 1:], x[1:, :-1], x[1:, 1:]
    centre = 0.25 * (x00 + x01 + x10 + x11)
    d_s = 0.5 * ((x10 - x00) + (x11 - x01))
    d_t = 0.5 * ((x01 - x00) + (x11 - x10))
    return centre, d_s, d_t


def surface_increments(form: TwoForm, surface: SampledSurface, twist: Optional[Callable] = None) -> np.ndarray:
    """Per s-cell ``int C(d_s Gamma, d_t Gamma) dt ds`` summed over the t-cells; shape ``(M, dim)``."""
    centre, d_s, d_t = surface_cells(surface)
    Z = form(centre, d_s, d_t)
    fib = None
    if surface.fiber is not None:
        f = surface.fiber
        fib = [f[:-1, :-1], f[:-1, 1:], f[1:, :-1], f[1:, 1:]]
    return _avg_twist(twist, fib, Z).sum(axis=1)


def w_path(model: GroupModel, form: OneForm, path: SampledPath, twist: Optional[Callable] = None):
    """End value of ``w^-1 w' = -C(path')``, ``w(0) = e``."""
    return solve_left_ode(model, -path_increments(form, path, twist))[-1]


def w_C(model: GroupModel, form: TwoForm, surface: SampledSurface, twist: Optional[Callable] = None,
        full: bool = False):
    """Surface-ordered value of ``w^-1 w'(s) = -int C(d_s f, d_t f) dt`` at the top row.

    The ODE runs in s, the direction in which surfaces are stacked, so stacking
    two surfaces multiplies their values.
    """
    if surface.M < 2 or surface.N < 2:
        raise GridError(f"surface grid {surface.M}x{surface.N} is too coarse; need at least 2x2 cells")
    w = solve_left_ode(model, -surface_increments(form, surface, twist))
    return w if full else w[-1]


def w_C0(model: GroupModel, form: TwoForm, surface: SampledSurface, w0: Callable,
         twist: Optional[Callable] = None):
    """``w0(source row) w_C(surface) w0(target row)^-1``."""
    a = w0(surface.source())
    b = w0(surface.target())
    return model.multiply(model.multiply(a, w_C(model, form, surface, twist)), model.inverse(b))
