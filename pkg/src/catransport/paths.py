"""Sampled paths and surfaces on uniform grids, and backtrack surgery.

Paths start at ``t = 0``; ``duration`` is the length of the parameter interval.
A bundle path carries an extra ``fiber`` array with one group element per
sample. ``margin`` counts the cells at each end over which the path is constant.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import CompositionError, DomainError, GridError, NotABacktrackError

MATCH_TOL = 1e-9
CONST_TOL = 1e-12


def _frozen(a):
    if a is None:
        return None
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SampledPath:
    points: np.ndarray  # (N+1, n)
    duration: float = 1.0
    margin: int = 0
    fiber: Optional[np.ndarray] = None  # (N+1, *element_shape)

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim == 1:
            pts = _frozen(pts[:, None])
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise DomainError(f"path points must have shape (N+1, n), got {pts.shape}")
        object.__setattr__(self, "points", pts)
        if self.fiber is not None:
            fib = _frozen(self.fiber)
            if fib.shape[0] != pts.shape[0]:
                raise DomainError("fiber and base samples differ in length")
            object.__setattr__(self, "fiber", fib)
        if self.N > 0 and not self.duration > 0:
            raise GridError("a path with N >= 1 cells needs a positive duration")
        if self.margin < 0 or 2 * self.margin > self.N:
            raise GridError(f"margin {self.margin} does not fit into {self.N} cells")
        m = self.margin
        if m and (_spread(self.points[: m + 1]) > CONST_TOL or _spread(self.points[-m - 1:]) > CONST_TOL):
            raise GridError(f"path is not constant over its {m}-cell margins")

    @property
    def N(self) -> int:
        return self.points.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def step(self) -> float:
        return self.duration / self.N if self.N else 0.0

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.N + 1)

    @property
    def is_bundle(self) -> bool:
        return self.fiber is not None

    @property
    def start(self):
        return self.points[0] if self.fiber is None else (self.points[0], self.fiber[0])

    @property
    def end(self):
        return self.points[-1] if self.fiber is None else (self.points[-1], self.fiber[-1])

    def base(self) -> "SampledPath":
        return replace(self, fiber=None)

    def with_fiber(self, fiber) -> "SampledPath":
        return replace(self, fiber=fiber)

    def right_translate(self, g) -> "SampledPath":
        """Apply the right action ``(x, f) -> (x, f g)`` to every sample."""
        if self.fiber is None:
            raise DomainError("right translation needs a bundle path")
        return replace(self, fiber=self.fiber @ np.asarray(g))


def _spread(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a[0]))) if a.size else 0.0


def _dist(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def sample_path(func: Callable, N: int, duration: float = 1.0, margin: int = 0) -> SampledPath:
    """Evaluate ``func`` (vectorized over times) on the uniform grid with N cells."""
    t = np.linspace(0.0, duration, N + 1)
    return SampledPath(np.asarray(func(t), dtype=float).reshape(N + 1, -1), duration, margin)


def constant_path(x, N: int, step: float, margin: Optional[int] = None) -> SampledPath:
    pts = np.repeat(np.asarray(x, dtype=float)[None, :], N + 1, axis=0)
    return SampledPath(pts, N * step, N // 2 if margin is None else margin)


def detect_margin(points, tol: float = CONST_TOL) -> int:
    """Smaller of the leading and trailing constant run lengths, in cells."""
    return min(_lead_run(points, tol), _lead_run(points[::-1], tol))


def _lead_run(points, tol) -> int:
    pts = np.asarray(points)
    d = np.max(np.abs(pts.reshape(len(pts), -1) - pts[0].reshape(1, -1)), axis=1)
    bad = np.flatnonzero(d > tol)
    return int(bad[0] - 1) if bad.size else len(pts) - 1


def compose_paths(f: SampledPath, g: SampledPath, tol: float = MATCH_TOL) -> SampledPath:
    """Concatenate ``f`` then ``g``; the shared junction sample is stored once."""
    if f.is_bundle != g.is_bundle:
        raise DomainError("cannot compose a base path with a bundle path")
    if f.N and g.N and abs(f.step - g.step) > 1e-12 * max(f.step, g.step):
        raise GridError(f"grid steps differ: {f.step!r} vs {g.step!r}")
    d = _dist(f.points[-1], g.points[0])
    if f.is_bundle:
        d = max(d, _dist(f.fiber[-1], g.fiber[0]))
    if d > tol:
        raise CompositionError(f"end of first path is {d:.3e} away from start of second", d)
    pts = np.concatenate([f.points, g.points[1:]])
    fib = None if not f.is_bundle else np.concatenate([f.fiber, g.fiber[1:]])
    margin = min(f.margin, g.margin) if f.N and g.N else (f.margin or g.margin)
    return SampledPath(pts, f.duration + g.duration, margin, fib)


def reverse_path(p: SampledPath) -> SampledPath:
    fib = None if p.fiber is None else p.fiber[::-1]
    return SampledPath(p.points[::-1], p.duration, p.margin, fib)


def reparametrize(p: SampledPath, phi, duration: Optional[float] = None) -> SampledPath:
    """Return ``p o phi`` sampled where ``phi`` holds the old times at the new grid nodes.

    Values between samples of ``p`` are linearly interpolated. ``phi`` must be
    monotone and map the new endpoints onto the old ones.
    """
    if p.is_bundle:
        raise DomainError("reparametrize the base path and lift it again")
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 1 or phi.size < 2:
        raise DomainError("phi must be a 1-D array with at least two samples")
    if np.any(np.diff(phi) < 0):
        raise DomainError("phi is not monotone")
    if abs(phi[0]) > 1e-12 or abs(phi[-1] - p.duration) > 1e-12 * max(1.0, p.duration):
        raise DomainError("phi must map the endpoints onto the endpoints")
    t = p.times
    pts = np.stack([np.interp(phi, t, p.points[:, i]) for i in range(p.dim)], axis=1)
    pts[0], pts[-1] = p.points[0], p.points[-1]
    return SampledPath(pts, p.duration if duration is None else duration, detect_margin(pts))


@dataclass(frozen=True)
class BacktrackWindow:
    """Grid-aligned window ``[T, T + 2 delta]`` given by sample indices.

    ``start`` is the index of ``T`` and ``half`` the number of cells in ``delta``.
    """

    start: int
    half: int

    @property
    def stop(self) -> int:
        return self.start + 2 * self.half

    @classmethod
    def from_times(cls, T: float, delta: float, step: float) -> "BacktrackWindow":
        i, d = T / step, delta / step
        if abs(i - round(i)) > 1e-9 or abs(d - round(d)) > 1e-9:
            raise GridError("backtrack window is not aligned with the grid")
        return cls(int(round(i)), int(round(d)))

    def times(self, step: float):
        return self.start * step, self.half * step


def _as_spur(spur, p: SampledPath) -> np.ndarray:
    if isinstance(spur, SampledPath):
        if spur.N and abs(spur.step - p.step) > 1e-12 * p.step:
            raise GridError("spur uses a different grid step")
        return np.asarray(spur.points)
    return np.asarray(spur, dtype=float).reshape(-1, p.dim)


def insert_backtrack(p: SampledPath, at: int, spur) -> tuple[SampledPath, BacktrackWindow]:
    """Insert the spur ``d`` at sample ``at``: run ``p`` up to ``at``, out along ``d``, back, then on.

    Returns the new path and the window of the inserted backtrack.
    """
    if p.is_bundle:
        raise DomainError("insert backtracks into base paths")
    if not 0 <= at <= p.N:
        raise GridError(f"insertion index {at} outside 0..{p.N}")
    d = _as_spur(spur, p)
    gap = _dist(d[0], p.points[at])
    if gap > MATCH_TOL:
        raise CompositionError(f"spur starts {gap:.3e} away from the insertion point", gap)
    k = len(d) - 1
    pts = np.concatenate([p.points[: at + 1], d[1:], d[::-1][1:], p.points[at + 1:]])
    out = SampledPath(pts, p.duration + 2 * k * p.step, min(p.margin, detect_margin(pts)))
    return out, BacktrackWindow(at, k)


def mirror_violation(points, w: BacktrackWindow) -> float:
    seg = np.asarray(points)[w.start: w.stop + 1]
    return _dist(seg, seg[::-1]) if len(seg) else 0.0


def erase_backtrack(p: SampledPath, w: BacktrackWindow, tol: float = MATCH_TOL) -> SampledPath:
    """Remove the samples on ``(T, T + 2 delta]``; the window must satisfy the mirror condition."""
    if w.start < 0 or w.half < 0 or w.stop > p.N:
        raise GridError(f"window {w} does not fit into {p.N} cells")
    v = mirror_violation(p.points, w)
    if p.is_bundle:
        v = max(v, mirror_violation(p.fiber.reshape(p.N + 1, -1), w))
    if v > tol:
        raise NotABacktrackError(f"mirror condition violated by {v:.3e}", v)
    keep = np.r_[0: w.start + 1, w.stop + 1: p.N + 1]
    fib = None if p.fiber is None else p.fiber[keep]
    pts = p.points[keep]
    return SampledPath(pts, p.duration - 2 * w.half * p.step, min(p.margin, detect_margin(pts)), fib)


def detect_backtracks(p: SampledPath, tol: float = MATCH_TOL) -> list[BacktrackWindow]:
    """All maximal grid-aligned mirror windows; windows that only cover a constant run are skipped."""
    pts = p.points if p.fiber is None else np.concatenate([p.points, p.fiber.reshape(p.N + 1, -1)], axis=1)
    N = p.N
    found = []
    for c in range(1, N):
        if _dist(pts[c - 1], pts[c + 1]) > tol:
            continue
        r = 1
        while c - r - 1 >= 0 and c + r + 1 <= N and _dist(pts[c - r - 1], pts[c + r + 1]) <= tol:
            r += 1
        if _spread(pts[c - r: c + r + 1]) <= tol:
            continue
        found.append(BacktrackWindow(c - r, r))
    maximal = [w for w in found
               if not any(o is not w and o.start <= w.start and w.stop <= o.stop and o != w for o in found)]
    return sorted(set(maximal), key=lambda w: (w.start, w.half))


def canonicalize_identity(p: SampledPath, tol: float = CONST_TOL) -> SampledPath:
    """Trim constant runs at either end down to the margin.

    A constant path collapses to the margin-only representative with
    ``max(2 * margin, 1)`` cells.
    """
    if _spread(p.points) <= tol and (p.fiber is None or _spread(p.fiber) <= tol):
        n = max(2 * p.margin, 1)
        step = p.step if p.N else 1.0
        fib = None if p.fiber is None else np.repeat(p.fiber[:1], n + 1, axis=0)
        return SampledPath(np.repeat(p.points[:1], n + 1, axis=0), n * step, p.margin, fib)
    data = p.points if p.fiber is None else np.concatenate([p.points, p.fiber.reshape(p.N + 1, -1)], axis=1)
    lead = _lead_run(data, tol)
    trail = _lead_run(data[::-1], tol)
    i0 = max(lead - p.margin, 0)
    i1 = p.N - max(trail - p.margin, 0)
    fib = None if p.fiber is None else p.fiber[i0: i1 + 1]
    return SampledPath(p.points[i0: i1 + 1], (i1 - i0) * p.step, p.margin, fib)


# -- surfaces ----------------------------------------------------------------

@dataclass(frozen=True)
class SampledSurface:
    """Samples ``points[j, k]`` of ``Gamma(s_j, t_k)``; rows are paths in t."""

    points: np.ndarray  # (M+1, N+1, n)
    s_duration: float = 1.0
    t_duration: float = 1.0
    margin: int = 0
    fiber: Optional[np.ndarray] = None  # (M+1, N+1, *element_shape)

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 3:
            raise DomainError(f"surface points must have shape (M+1, N+1, n), got {pts.shape}")
        object.__setattr__(self, "points", pts)
        if self.fiber is not None:
            fib = _frozen(self.fiber)
            if fib.shape[:2] != pts.shape[:2]:
                raise DomainError("fiber and base samples differ in shape")
            object.__setattr__(self, "fiber", fib)

    @property
    def M(self) -> int:
        return self.points.shape[0] - 1

    @property
    def N(self) -> int:
        return self.points.shape[1] - 1

    @property
    def ds(self) -> float:
        return self.s_duration / self.M

    @property
    def dt(self) -> float:
        return self.t_duration / self.N

    @property
    def is_bundle(self) -> bool:
        return self.fiber is not None

    def row(self, j: int) -> SampledPath:
        fib = None if self.fiber is None else self.fiber[j]
        return SampledPath(self.points[j], self.t_duration, 0, fib)

    def source(self) -> SampledPath:
        return self.row(0)

    def target(self) -> SampledPath:
        return self.row(self.M)

    def base(self) -> "SampledSurface":
        return replace(self, fiber=None)

    def right_translate(self, g) -> "SampledSurface":
        if self.fiber is None:
            raise DomainError("right translation needs a bundle surface")
        return replace(self, fiber=self.fiber @ np.asarray(g))


def sample_surface(func: Callable, M: int, N: int, s_duration: float = 1.0, t_duration: float = 1.0,
                   margin: int = 0) -> SampledSurface:
    """Evaluate ``func(s, t)`` (vectorized) on the ``(M+1) x (N+1)`` grid."""
    s = np.linspace(0.0, s_duration, M + 1)
    t = np.linspace(0.0, t_duration, N + 1)
    S, T = np.meshgrid(s, t, indexing="ij")
    pts = np.asarray(func(S, T), dtype=float)
    return SampledSurface(pts.reshape(M + 1, N + 1, -1), s_duration, t_duration, margin)


def vertical_compose(first: SampledSurface, second: SampledSurface, tol: float = MATCH_TOL) -> SampledSurface:
    """Stack ``second`` on top of ``first`` in s; the shared row is stored once."""
    if first.is_bundle != second.is_bundle:
        raise DomainError("cannot stack a base surface with a bundle surface")
    if first.N != second.N or abs(first.t_duration - second.t_duration) > 1e-12:
        raise GridError("surfaces use different t-grids")
    if abs(first.ds - second.ds) > 1e-12 * max(first.ds, second.ds):
        raise GridError("surfaces use different s-steps")
    d = _dist(first.points[-1], second.points[0])
    if first.is_bundle:
        d = max(d, _dist(first.fiber[-1], second.fiber[0]))
    if d > tol:
        raise CompositionError(f"top row of first surface is {d:.3e} away from bottom row of second", d)
    pts = np.concatenate([first.points, second.points[1:]])
    fib = None if not first.is_bundle else np.concatenate([first.fiber, second.fiber[1:]])
    return SampledSurface(pts, first.s_duration + second.s_duration, first.t_duration,
                          min(first.margin, second.margin), fib)


# -- CSV fixtures ------------------------------------------------------------

def write_path_csv(p: SampledPath, path) -> None:
    """Header ``t,x1..xn[,g11..gkk]``; UTF-8 with LF line endings."""
    cols = ["t"] + [f"x{i + 1}" for i in range(p.dim)]
    data = [p.times[:, None], p.points]
    if p.fiber is not None:
        k = p.fiber.shape[-1]
        cols += [f"g{i + 1}{j + 1}" for i in range(k) for j in range(k)]
        data.append(p.fiber.reshape(p.N + 1, -1))
    table = np.concatenate(data, axis=1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        w.writerows([[repr(float(v)) for v in row] for row in table])


def read_path_csv(path) -> SampledPath:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array([[float(v) for v in r] for r in rows[1:] if r])
    if header[0] != "t":
        raise DomainError("first CSV column must be t")
    n = sum(1 for c in header if c.startswith("x"))
    k2 = sum(1 for c in header if c.startswith("g"))
    t = body[:, 0]
    if len(t) > 1 and np.max(np.abs(np.diff(t) - (t[-1] - t[0]) / (len(t) - 1))) > 1e-9 * max(1.0, abs(t[-1])):
        raise GridError("CSV times are not uniformly spaced")
    pts = body[:, 1: 1 + n]
    fib = None
    if k2:
        k = int(round(np.sqrt(k2)))
        fib = body[:, 1 + n:].reshape(-1, k, k)
    return SampledPath(pts, float(t[-1] - t[0]) if len(t) > 1 else 0.0, detect_margin(pts), fib)
