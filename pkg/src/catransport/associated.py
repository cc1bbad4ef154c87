"""Associated bundles ``P x_G V`` and transport of their points along base paths."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .catalog import Scenario
from .decorated import cat_connection_lift_C, dec_target
from .paths import SampledPath, compose_paths


@dataclass
class Representation:
    """Left action of G on ``R^dim``.

    ``rho_mor(cm, (h, a), (v, w))`` defaults to the pair action
    ``(rho(s(m)) v, rho(t(m)) w)``.
    """

    dim: int
    rho_obj: Callable  # (g, v) -> v'
    rho_mor: Optional[Callable] = None

    def act_mor(self, cm, m, vw):
        if self.rho_mor is not None:
            return self.rho_mor(cm, m, vw)
        v, w = vw
        return self.rho_obj(cm.source(m), v), self.rho_obj(cm.target(m), w)


def matrix_representation(n: int) -> Representation:
    return Representation(n, lambda g, v: np.asarray(g) @ np.asarray(v))


@dataclass(frozen=True)
class TwistedClass:
    """Class ``[(x, e), v]``: every class has exactly one representative over the identity fiber."""

    x: np.ndarray
    v: np.ndarray


def normalize_class(rep: Representation, point, v) -> TwistedClass:
    """``[(x, g), v] = [(x, e), rho(g) v]``."""
    x, g = point
    return TwistedClass(np.asarray(x, dtype=float), np.asarray(rep.rho_obj(g, v), dtype=float))


def class_distance(a: TwistedClass, b: TwistedClass) -> float:
    return max(float(np.max(np.abs(a.x - b.x))), float(np.max(np.abs(a.v - b.v))))


def assoc_transport(scn: Scenario, rep: Representation, gamma: SampledPath, cls: TwistedClass,
                    g=None, lifter: Callable = cat_connection_lift_C) -> TwistedClass:
    """Transport ``[p, v]`` to ``[t(F), v]`` where ``F`` lifts ``gamma`` through ``p``.

    ``g`` selects the representative ``p = (x, g)``, ``v -> rho(g^-1) v``; the
    result does not depend on it.
    """
    G = scn.G
    g = G.identity() if g is None else np.asarray(g, dtype=float)
    v = rep.rho_obj(G.inverse(g), cls.v)
    F = lifter(scn, gamma, (cls.x, g))
    return normalize_class(rep, dec_target(scn.cm, F), v)


def check_assoc_transport(scn: Scenario, rep: Representation, gamma1: SampledPath, gamma2: SampledPath,
                          cls: TwistedClass, g) -> dict:
    """Independence of the representative, and transport along ``gamma2 o gamma1`` in two steps."""
    a = assoc_transport(scn, rep, gamma1, cls)
    b = assoc_transport(scn, rep, gamma1, cls, g=g)
    step = assoc_transport(scn, rep, gamma2, a)
    whole = assoc_transport(scn, rep, compose_paths(gamma1, gamma2), cls)
    return {"well_defined": class_distance(a, b), "functoriality": class_distance(step, whole)}
