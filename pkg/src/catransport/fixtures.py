"""Smooth test geometry: curves with constant margins, vector fields, surfaces and thin families."""
from __future__ import annotations

import numpy as np

from .paths import SampledPath, SampledSurface, sample_path, sample_surface

MARGIN = 0.1


def ramp(t, m: float = MARGIN):
    """0 on ``[0, m]``, 1 on ``[1 - m, 1]``, quintic smoothstep in between."""
    u = np.clip((np.asarray(t, dtype=float) - m) / (1.0 - 2.0 * m), 0.0, 1.0)
    return u**3 * (10.0 - 15.0 * u + 6.0 * u * u)


def margin_cells(N: int, m: float = MARGIN) -> int:
    return int(np.floor(m * N + 1e-9))


def curve(t):
    """Planar curve with constant ends."""
    s = ramp(t)
    return np.stack([0.1 + 0.7 * s + 0.1 * np.sin(np.pi * s), 0.2 + 0.35 * np.sin(np.pi * s) - 0.1 * s], axis=-1)


def line(t, x0: float = 0.1, length: float = 0.8):
    """Segment of the axis ``x2 = 0`` with constant ends."""
    s = ramp(t)
    return np.stack([x0 + length * s, np.zeros_like(s)], axis=-1)


def vector_field(x):
    x = np.asarray(x, dtype=float)
    return np.stack([0.3 + 0.2 * x[..., 1] - 0.1 * x[..., 0] ** 2, -0.2 + 0.4 * x[..., 0] * x[..., 1] + 0.3 * x[..., 0]],
                    axis=-1)


def random_curve(rng, scale: float = 0.3):
    """Random smooth planar curve with constant ends, as a vectorized callable."""
    c0 = rng.uniform(-0.3, 0.3, 2)
    lin = rng.uniform(-0.6, 0.6, 2)
    amp = rng.uniform(-scale, scale, (3, 2))

    def f(t):
        s = ramp(t)[..., None]
        out = c0 + lin * s
        for k in range(3):
            out = out + amp[k] * np.sin((k + 1) * np.pi * s)
        return out

    return f


def sampled_curve(N: int, f=curve, duration: float = 1.0) -> SampledPath:
    return sample_path(lambda t: f(t / duration), N, duration, margin_cells(N))


def surface(s, t):
    """A genuinely two-dimensional family of curves."""
    base = curve(t)
    bump = np.sin(np.pi * ramp(t))
    return base + np.stack([0.25 * s * bump, 0.3 * s + 0.1 * s * s * bump], axis=-1)


def sampled_surface(M: int, N: int, f=surface) -> SampledSurface:
    return sample_surface(f, M, N)


def wiggle(u, v, eps: float = 0.1, m: float = MARGIN):
    """Reparametrization family ``v + eps u sin(pi w(v))``, fixing the margins."""
    w = np.clip((np.asarray(v) - m) / (1.0 - 2.0 * m), 0.0, 1.0)
    return v + eps * u * np.sin(np.pi * w)


def thin_family(M: int, N: int, f=line, eps: float = 0.1) -> SampledSurface:
    """``Gamma(u, v) = f(wiggle(u, v))`` sampled on an ``(M+1) x (N+1)`` grid."""
    return sample_surface(lambda u, v: f(wiggle(u, v, eps)), M, N)


def smoothstep(u):
    return 3.0 * u * u - 2.0 * u**3
