"""Named scenarios: a crossed module plus the local forms of a connection on ``R^2 x G``.

Every scenario supplies

* ``a``, ``abar``: L(G)-valued 1-forms (the connection and the one used for horizontal lifts),
* ``b``: L(H)-valued 2-form and ``c``: L(H)-valued 1-form,
* ``phi``: H-valued function on the base,
* optionally a double module ``dm`` with L(K)-valued forms ``c1`` and ``c2``.

Forms are polynomials in ``(x1, x2)`` with analytic derivatives. The
``double`` scenario is built so that along the axis ``x2 = 0`` both ``abar`` and
``c1`` take values in commuting directions with coefficients affine in ``x1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .crossed import CrossedModule, DoubleModule, abelian_module, conjugation_module, double_module
from .errors import UnknownNameError
from .forms import OneForm, TwoForm, zero_one_form, zero_two_form
from .groups import so2, so3


def _mono(x, p, q):
    return x[..., 0] ** p * x[..., 1] ** q


def _dmono(x, p, q, j):
    if j == 0:
        return p * x[..., 0] ** max(p - 1, 0) * x[..., 1] ** q if p else np.zeros(x.shape[:-1])
    return q * x[..., 0] ** p * x[..., 1] ** max(q - 1, 0) if q else np.zeros(x.shape[:-1])


def poly_one_form(dim: int, terms, n: int = 2, name: str = "") -> OneForm:
    """``sum c x1^p x2^q E dx^i`` over ``terms = [(i, (p, q), E), ...]``."""
    terms = [(i, pq, np.asarray(E, dtype=float)) for i, pq, E in terms]

    def coeff(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (n, dim))
        for i, (p, q), E in terms:
            out[..., i, :] += _mono(x, p, q)[..., None] * E
        return out

    def jac(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (n, n, dim))
        for i, (p, q), E in terms:
            for j in range(n):
                out[..., i, j, :] += _dmono(x, p, q, j)[..., None] * E
        return out

    return OneForm(coeff, n, dim, jac, name=name)


def poly_two_form(dim: int, terms, n: int = 2, name: str = "") -> TwoForm:
    """``(sum c x1^p x2^q E) dx^1 ^ dx^2`` over ``terms = [((p, q), E), ...]``."""
    terms = [(pq, np.asarray(E, dtype=float)) for pq, E in terms]

    def coeff(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (n, n, dim))
        for (p, q), E in terms:
            m = _mono(x, p, q)[..., None] * E
            out[..., 0, 1, :] += m
            out[..., 1, 0, :] -= m
        return out

    return TwoForm(coeff, n, dim, name=name)


def poly_algebra_map(dim: int, terms) -> Callable:
    """``x -> sum x1^p x2^q E``, an algebra-valued polynomial."""
    terms = [(pq, np.asarray(E, dtype=float)) for pq, E in terms]

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (dim,))
        for (p, q), E in terms:
            out += _mono(x, p, q)[..., None] * E
        return out

    return f


@dataclass
class Scenario:
    name: str
    cm: CrossedModule
    a: OneForm
    abar: OneForm
    b: TwoForm
    c: OneForm
    phi: Callable  # base point -> H element
    dm: Optional[DoubleModule] = None
    c1: Optional[OneForm] = None
    c2: Optional[TwoForm] = None
    description: str = ""
    base_dim: int = 2

    @property
    def G(self):
        return self.cm.G

    @property
    def H(self):
        return self.cm.H

    # bundle-level values from base values: equivariant twists by the fiber
    def twist_G(self, g, X):
        return self.G.Ad(self.G.inverse(g), X)

    def twist_H(self, g, Z):
        return self.cm.alpha_alg(self.G.inverse(g), Z)

    def twist_K(self, g, Z):
        return self.dm.twist_g_alg(g, Z)

    def Phi(self, x, g):
        """Equivariant extension ``Phi(x, g) = alpha(g^-1) phi(x)``."""
        return self.cm.alpha(self.G.inverse(g), self.phi(x))


def _exp_map(model, f):
    return lambda x: model.exp(f(x))


def _flat() -> Scenario:
    G = so3()
    cm = conjugation_module(G)
    dm = double_module(cm)
    return Scenario("flat", cm, zero_one_form(2, 3), zero_one_form(2, 3), zero_two_form(2, 3),
                    zero_one_form(2, 3), lambda x: np.broadcast_to(np.eye(3), np.shape(x)[:-1] + (3, 3)).copy(),
                    dm, zero_one_form(2, dm.K.dim), zero_two_form(2, dm.K.dim),
                    description="all forms vanish; every transport is trivial")


def _so2_area() -> Scenario:
    G = so2()
    cm = conjugation_module(G)
    dm = double_module(cm)
    b = poly_two_form(1, [((0, 0), [1.0]), ((1, 1), [0.5])], name="area")
    c = poly_one_form(1, [(0, (0, 1), [0.3]), (1, (0, 0), [0.2]), (1, (1, 0), [-0.4])])
    phi = _exp_map(G, poly_algebra_map(1, [((1, 0), [0.4]), ((0, 2), [-0.3])]))
    c1 = poly_one_form(2, [(0, (0, 0), [0.2, -0.1]), (1, (1, 0), [0.3, 0.5])])
    c2 = poly_two_form(2, [((0, 0), [0.7, 0.2]), ((1, 0), [0.1, -0.3])])
    z = zero_one_form(2, 1)
    return Scenario("so2_area", cm, z, z, b, c, phi, dm, c1, c2,
                    description="SO(2) conjugation module, flat connection, area 2-form")


def _so2_r2() -> Scenario:
    G = so2()
    cm = abelian_module(G)
    abar = poly_one_form(1, [(0, (0, 0), [0.8]), (0, (0, 1), [0.4]), (1, (1, 0), [-0.5]), (1, (0, 0), [0.3])])
    a = poly_one_form(1, [(0, (0, 0), [0.8]), (0, (0, 1), [0.4]), (1, (1, 0), [-0.5]), (1, (0, 0), [0.1])])
    b = poly_two_form(2, [((0, 0), [0.5, -0.2]), ((1, 0), [0.3, 0.1])])
    c = poly_one_form(2, [(0, (0, 0), [0.2, 0.1]), (1, (1, 1), [-0.3, 0.4])])
    phi = poly_algebra_map(2, [((1, 0), [0.5, 0.0]), ((0, 1), [0.0, -0.7]), ((1, 1), [0.2, 0.2])])
    return Scenario("so2_r2", cm, a, abar, b, c, phi,
                    description="SO(2) acting on R^2; used for the associated vector bundle")


def _so3_conj() -> Scenario:
    G = so3()
    cm = conjugation_module(G)
    abar = poly_one_form(3, [
        (0, (0, 0), [0.3, 0.0, 0.5]), (0, (0, 1), [0.0, 0.4, 0.0]), (0, (1, 1), [0.2, 0.0, -0.3]),
        (1, (1, 0), [0.0, -0.4, 0.2]), (1, (0, 0), [0.25, 0.1, 0.0]), (1, (2, 0), [0.0, 0.0, 0.3]),
    ], name="abar")
    a = poly_one_form(3, [
        (0, (0, 0), [0.3, 0.1, 0.5]), (0, (0, 1), [0.0, 0.4, 0.2]), (0, (1, 1), [0.2, 0.0, -0.3]),
        (1, (1, 0), [0.1, -0.4, 0.2]), (1, (0, 0), [0.25, 0.1, -0.2]), (1, (2, 0), [0.0, 0.0, 0.3]),
    ], name="a")
    b = poly_two_form(3, [((0, 0), [0.4, -0.2, 0.3]), ((1, 0), [0.0, 0.3, 0.1]), ((0, 1), [-0.2, 0.0, 0.25]),
                          ((1, 1), [0.1, 0.1, 0.0])], name="b")
    c = poly_one_form(3, [(0, (0, 0), [0.2, 0.3, -0.1]), (0, (1, 0), [0.0, 0.2, 0.3]),
                          (1, (0, 1), [0.3, -0.2, 0.0]), (1, (0, 0), [0.1, 0.0, 0.4])], name="c")
    phi = _exp_map(G, poly_algebra_map(3, [((1, 0), [0.4, 0.1, 0.0]), ((0, 1), [0.0, 0.3, -0.2]),
                                           ((1, 1), [0.2, 0.0, 0.3])]))
    return Scenario("so3_conj", cm, a, abar, b, c, phi,
                    description="SO(3) conjugation module with generic polynomial forms")


def _so3_r3() -> Scenario:
    G = so3()
    cm = abelian_module(G)
    base = _so3_conj()
    b = poly_two_form(3, [((0, 0), [0.5, 0.1, -0.2]), ((1, 1), [0.0, 0.3, 0.2])])
    c = poly_one_form(3, [(0, (0, 0), [0.2, -0.1, 0.1]), (1, (1, 0), [0.3, 0.2, 0.0])])
    phi = poly_algebra_map(3, [((1, 0), [0.3, 0.0, 0.1]), ((0, 1), [0.0, -0.4, 0.2])])
    return Scenario("so3_r3", cm, base.a, base.abar, b, c, phi,
                    description="SO(3) acting on R^3 with trivial boundary map")


def _double() -> Scenario:
    G = so3()
    cm = conjugation_module(G)
    dm = double_module(cm)
    # along x2 = 0: abar(e1) = (0.4 + 0.3 x1) X3 and c1(e1) = (0.2 + 0.5 x1)(X3, 0) + 0.3 x1 (0, X3)
    abar = poly_one_form(3, [
        (0, (0, 0), [0.0, 0.0, 0.4]), (0, (1, 0), [0.0, 0.0, 0.3]), (0, (0, 1), [0.5, -0.2, 0.0]),
        (0, (1, 1), [0.0, 0.3, 0.1]), (1, (0, 0), [0.3, 0.0, 0.1]), (1, (1, 0), [0.0, 0.2, 0.0]),
        (1, (0, 1), [0.0, 0.0, -0.1]),
    ], name="abar")
    a = poly_one_form(3, [
        (0, (0, 0), [0.0, 0.0, 0.4]), (0, (1, 0), [0.0, 0.0, 0.3]), (0, (0, 1), [0.5, -0.2, 0.2]),
        (1, (0, 0), [0.3, 0.1, 0.1]), (1, (1, 0), [0.0, 0.2, -0.2]),
    ], name="a")
    b = poly_two_form(3, [((0, 0), [0.3, -0.2, 0.2]), ((1, 0), [0.1, 0.2, 0.0]), ((0, 1), [0.0, 0.1, -0.3])])
    c = poly_one_form(3, [(0, (0, 0), [0.2, 0.0, 0.3]), (1, (1, 0), [0.0, 0.3, -0.1])])
    phi = _exp_map(G, poly_algebra_map(3, [((1, 0), [0.2, 0.3, 0.0]), ((0, 1), [0.0, 0.1, 0.4])]))
    c1 = poly_one_form(6, [
        (0, (0, 0), [0, 0, 0.2, 0, 0, 0]), (0, (1, 0), [0, 0, 0.5, 0, 0, 0.3]),
        (0, (0, 1), [0.2, -0.1, 0, 0.3, 0, 0.1]), (1, (0, 0), [0.1, 0.2, 0, -0.2, 0.1, 0]),
        (1, (1, 1), [0, 0, 0.2, 0.1, 0, 0]),
    ], name="c1")
    c2 = poly_two_form(6, [((0, 0), [0.3, 0.0, -0.2, 0.1, 0.2, 0.0]), ((1, 0), [0.0, 0.2, 0.1, 0.0, -0.1, 0.3]),
                           ((0, 1), [0.1, 0.1, 0.0, 0.2, 0.0, -0.2])], name="c2")
    return Scenario("double", cm, a, abar, b, c, phi, dm, c1, c2,
                    description="SO(3) conjugation module with its double over H x| G")


_BUILDERS = {
    "flat": _flat,
    "so2_area": _so2_area,
    "so2_r2": _so2_r2,
    "so3_conj": _so3_conj,
    "so3_r3": _so3_r3,
    "double": _double,
}

SCENARIO_NAMES = tuple(_BUILDERS)
_CACHE: dict = {}


def get_scenario(name: str) -> Scenario:
    if name not in _BUILDERS:
        raise UnknownNameError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]
