"""Lie-algebra valued 1-forms and 2-forms on R^n with vectorized evaluation."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

FD_STEP = 1e-5


class OneForm:
    """``a = sum_i a_i(x) dx^i`` with ``coeff(x)`` of shape ``(..., n, dim)``.

    ``jac(x)``, if given, returns ``d a_i / d x^j`` with shape ``(..., n, n, dim)``
    indexed ``[i, j]``. Without it the exterior derivative falls back to central
    differences.
    """

    def __init__(self, coeff: Callable, n: int, dim: int, jac: Optional[Callable] = None, name: str = ""):
        self.coeff = coeff
        self.n = n
        self.dim = dim
        self.jac = jac
        self.name = name

    def __call__(self, x, v):
        return np.einsum("...i,...ik->...k", np.asarray(v, dtype=float), self.coeff(np.asarray(x, dtype=float)))

    def jacobian(self, x, fd_step: float = FD_STEP):
        x = np.asarray(x, dtype=float)
        if self.jac is not None:
            return self.jac(x)
        cols = []
        for j in range(self.n):
            e = np.zeros(self.n)
            e[j] = fd_step
            cols.append((self.coeff(x + e) - self.coeff(x - e)) / (2 * fd_step))
        return np.stack(cols, axis=-2)  # [..., i, j, :]

    def d(self, x, v, w, fd_step: float = FD_STEP):
        """Exterior derivative ``da(v, w) = v(a(w)) - w(a(v))`` for constant fields."""
        J = self.jacobian(x, fd_step)
        v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
        A = np.einsum("...j,...i->...ij", v, w) - np.einsum("...j,...i->...ij", w, v)
        return np.einsum("...ij,...ijk->...k", A, J)


class TwoForm:
    """``b = 1/2 sum_ij b_ij(x) dx^i ^ dx^j``; ``coeff(x)`` has shape ``(..., n, n, dim)``.

    The coefficient array is antisymmetrized on evaluation.
    """

    def __init__(self, coeff: Callable, n: int, dim: int, name: str = ""):
        self.coeff = coeff
        self.n = n
        self.dim = dim
        self.name = name

    def __call__(self, x, v, w):
        B = self.coeff(np.asarray(x, dtype=float))
        B = 0.5 * (B - np.swapaxes(B, -2, -3))
        return np.einsum("...i,...j,...ijk->...k", np.asarray(v, dtype=float), np.asarray(w, dtype=float), B)


def zero_one_form(n: int, dim: int) -> OneForm:
    def coeff(x):
        return np.zeros(np.shape(x)[:-1] + (n, dim))

    def jac(x):
        return np.zeros(np.shape(x)[:-1] + (n, n, dim))

    return OneForm(coeff, n, dim, jac, name="zero")


def zero_two_form(n: int, dim: int) -> TwoForm:
    return TwoForm(lambda x: np.zeros(np.shape(x)[:-1] + (n, n, dim)), n, dim, name="zero")


def area_form(density: Callable, direction, n: int = 2) -> TwoForm:
    """``density(x) dx^1 ^ dx^2`` times a fixed algebra element ``direction``."""
    direction = np.asarray(direction, dtype=float)

    def coeff(x):
        f = np.asarray(density(x), dtype=float)
        out = np.zeros(f.shape + (n, n, direction.size))
        out[..., 0, 1, :] = f[..., None] * direction
        out[..., 1, 0, :] = -f[..., None] * direction
        return out

    return TwoForm(coeff, n, direction.size, name="area")
