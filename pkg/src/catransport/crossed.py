"""Crossed modules, their 2-morphisms and the built-in examples.

A crossed module ``(G, H, alpha, tau)`` determines a categorical group whose
objects are elements ``a`` of G and whose morphisms are pairs ``(h, a)`` with
source ``a`` and target ``tau(h) a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CompositionError, DomainError
from .groups import (AdditiveGroup, FiniteGroup, GroupModel, MatrixGroup, cyclic, product_group,
                     so2, so3, special_euclidean, symmetric)

EQ_TOL = 1e-9


@dataclass(frozen=True)
class Morphism2:
    """Morphism ``(h, a)`` of the categorical group: ``a -> tau(h) a``."""

    h: object
    a: object


@dataclass
class CrossedModule:
    G: GroupModel
    H: GroupModel
    alpha: Callable  # alpha(g, h) -> h'
    tau: Callable  # tau(h) -> g
    alpha_alg: Optional[Callable] = None  # alpha_alg(g, Z) -> Z' on L(H)
    tau_alg: Optional[Callable] = None  # tau_alg(Z) -> Y in L(G)
    name: str = ""

    # -- categorical group structure --------------------------------------
    def source(self, m: Morphism2):
        return m.a

    def target(self, m: Morphism2):
        return self.G.multiply(self.tau(m.h), m.a)

    def unit(self, a) -> Morphism2:
        return Morphism2(self.H.identity(), a)

    def compose(self, m2: Morphism2, m1: Morphism2) -> Morphism2:
        """``m2 o m1`` (first m1, then m2)."""
        d = self.G.distance(self.target(m1), m2.a)
        if d >= EQ_TOL:
            raise CompositionError(f"target of first morphism differs from source of second by {d:.3e}", d)
        return Morphism2(self.H.multiply(m2.h, m1.h), m1.a)

    def product(self, m1: Morphism2, m2: Morphism2) -> Morphism2:
        """Group product ``(h, a)(k, c) = (h alpha(a)(k), ac)``."""
        return Morphism2(self.H.multiply(m1.h, self.alpha(m1.a, m2.h)), self.G.multiply(m1.a, m2.a))

    def inverse(self, m: Morphism2) -> Morphism2:
        ai = self.G.inverse(m.a)
        return Morphism2(self.alpha(ai, self.H.inverse(m.h)), ai)

    def distance(self, m1: Morphism2, m2: Morphism2) -> float:
        return max(self.H.distance(m1.h, m2.h), self.G.distance(m1.a, m2.a))

    def equal(self, m1: Morphism2, m2: Morphism2) -> bool:
        return self.distance(m1, m2) < EQ_TOL

    def random_morphism(self, rng, source=None) -> Morphism2:
        a = self.G.random(rng) if source is None else source
        return Morphism2(self.H.random(rng), a)

    @property
    def finite(self) -> bool:
        return isinstance(self.G, FiniteGroup) and isinstance(self.H, FiniteGroup)


# -- built-in modules --------------------------------------------------------

def conjugation_module(G: MatrixGroup) -> CrossedModule:
    """``H = G``, ``tau = id``, ``alpha`` = conjugation."""

    def alpha(g, h):
        return g @ h @ G.inverse(g)

    return CrossedModule(
        G=G, H=G, alpha=alpha, tau=lambda h: np.asarray(h),
        alpha_alg=G.Ad, tau_alg=lambda Z: np.asarray(Z, dtype=float),
        name=f"conj_{G.name}",
    )


def abelian_module(G: MatrixGroup) -> CrossedModule:
    """``H = R^n`` acted on by the matrix group G, ``tau`` trivial."""
    H = AdditiveGroup(G.n)

    def act(g, h):
        return np.einsum("...ij,...j->...i", g, h)

    def tau(h):
        h = np.asarray(h)
        return np.broadcast_to(G.identity(), h.shape[:-1] + G.shape).copy()

    def tau_alg(Z):
        Z = np.asarray(Z, dtype=float)
        return np.zeros(Z.shape[:-1] + (G.dim,))

    return CrossedModule(G=G, H=H, alpha=act, tau=tau, alpha_alg=act, tau_alg=tau_alg,
                         name=f"R{G.n}_{G.name}")


def broken_module(G: MatrixGroup) -> CrossedModule:
    """``tau = id`` with trivial action on a non-abelian group; violates the first Peiffer identity."""
    return CrossedModule(G=G, H=G, alpha=lambda g, h: np.asarray(h).copy(), tau=lambda h: np.asarray(h),
                         alpha_alg=lambda g, Z: np.asarray(Z, dtype=float).copy(),
                         tau_alg=lambda Z: np.asarray(Z, dtype=float), name=f"broken_{G.name}")


def finite_module(G: FiniteGroup, H: FiniteGroup, alpha_table, tau_table, name="") -> CrossedModule:
    """Finite crossed module from an action table ``alpha_table[g, h]`` and a map ``tau_table[h]``."""
    A = np.asarray(alpha_table, dtype=np.int64)
    T = np.asarray(tau_table, dtype=np.int64)
    if A.shape != (G.order, H.order) or T.shape != (H.order,):
        raise DomainError("action or boundary table has the wrong shape")

    Al, Tl = A.tolist(), T.tolist()

    def alpha(g, h):
        if type(g) is int and type(h) is int and 0 <= g < G.order and 0 <= h < H.order:
            return Al[g][h]
        r = A[G.check_element(g), H.check_element(h)]
        return int(r) if np.ndim(r) == 0 else r

    def tau(h):
        if type(h) is int and 0 <= h < H.order:
            return Tl[h]
        r = T[H.check_element(h)]
        return int(r) if np.ndim(r) == 0 else r

    cm = CrossedModule(G=G, H=H, alpha=alpha, tau=tau, name=name)
    cm.alpha_table, cm.tau_table = A, T
    return cm


def z4_to_z2_module() -> CrossedModule:
    """``tau: Z4 -> Z2`` reduction mod 2 with trivial action."""
    G, H = cyclic(2), cyclic(4)
    A = np.tile(np.arange(4), (2, 1))
    return finite_module(G, H, A, np.arange(4) % 2, name="Z4->Z2")


def z2_inversion_module() -> CrossedModule:
    """Z2 acting on Z4 by inversion, trivial boundary map."""
    G, H = cyclic(2), cyclic(4)
    A = np.array([np.arange(4), (-np.arange(4)) % 4])
    return finite_module(G, H, A, np.zeros(4, dtype=int), name="Z2|Z4")


def finite_conjugation_module(G: FiniteGroup) -> CrossedModule:
    A = np.array([[G.table[G.table[g, h], G.inverse(g)] for h in G.elements] for g in G.elements])
    return finite_module(G, G, A, np.arange(G.order), name=f"conj_{G.name}")


def s3_conjugation_module() -> CrossedModule:
    return finite_conjugation_module(symmetric(3))


# -- double crossed module ---------------------------------------------------

@dataclass
class DoubleModule:
    """Second crossed module over the semidirect product ``H x|_alpha G``.

    The semidirect product is realized as a matrix group ``K`` through
    ``embed(h, g)``; ``cm2`` has object group ``K``, ``H2 = K``, ``tau2 = id``
    and ``alpha2`` = conjugation.
    """

    cm1: CrossedModule
    K: MatrixGroup
    embed: Callable
    split: Callable
    cm2: CrossedModule

    def embed_g(self, g):
        g = np.asarray(g)
        h = np.broadcast_to(self.cm1.H.identity(), g.shape[:-2] + self.cm1.H.shape)
        return self.embed(h, g)

    def embed_h(self, h):
        h = np.asarray(h)
        g = np.broadcast_to(self.cm1.G.identity(), h.shape[: h.ndim - len(self.cm1.H.shape)] + self.cm1.G.shape)
        return self.embed(h, g)

    def alpha2(self, x, k):
        return self.cm2.alpha(x, k)

    def alpha2_alg(self, x, Z):
        return self.K.Ad(x, Z)

    def twist_g_alg(self, g, Z):
        """``alpha2((e, g)^{-1})`` on ``L(K)``."""
        return self.K.Ad(self.embed_g(self.cm1.G.inverse(g)), Z)


def double_module(cm1: CrossedModule) -> DoubleModule:
    G = cm1.G
    if not isinstance(G, MatrixGroup):
        raise DomainError("double module needs a matrix object group")
    if isinstance(cm1.H, MatrixGroup):
        # (h, a) -> diag(h a, a) identifies H x| G with G x G for the conjugation action
        n = G.n
        K = product_group(G, G, name=f"{G.name}x|{G.name}")

        def embed(h, g):
            h, g = np.asarray(h, dtype=float), np.asarray(g, dtype=float)
            shp = np.broadcast_shapes(h.shape[:-2], g.shape[:-2])
            out = np.zeros(shp + (2 * n, 2 * n))
            out[..., :n, :n] = h @ g
            out[..., n:, n:] = g
            return out

        def split(x):
            x = np.asarray(x, dtype=float)
            g = x[..., n:, n:]
            return x[..., :n, :n] @ G.inverse(g), g.copy()

    elif isinstance(cm1.H, AdditiveGroup):
        n = G.n
        K = special_euclidean(G)

        def embed(h, g):
            h, g = np.asarray(h, dtype=float), np.asarray(g, dtype=float)
            shp = np.broadcast_shapes(h.shape[:-1], g.shape[:-2])
            out = np.zeros(shp + (n + 1, n + 1))
            out[..., :n, :n] = g
            out[..., :n, n] = h
            out[..., n, n] = 1.0
            return out

        def split(x):
            x = np.asarray(x, dtype=float)
            return x[..., :n, n].copy(), x[..., :n, :n].copy()

    else:
        raise DomainError("double module needs a matrix or vector H")
    cm2 = conjugation_module(K)
    cm2.name = f"double_{cm1.name}"
    return DoubleModule(cm1=cm1, K=K, embed=embed, split=split, cm2=cm2)


BUILTIN_MODULES = {
    "conj_so2": lambda: conjugation_module(so2()),
    "conj_so3": lambda: conjugation_module(so3()),
    "abelian_so2": lambda: abelian_module(so2()),
    "abelian_so3": lambda: abelian_module(so3()),
    "double_conj_so3": lambda: double_module(conjugation_module(so3())).cm2,
    "double_abelian_so3": lambda: double_module(abelian_module(so3())).cm2,
    "z4_z2": z4_to_z2_module,
    "z2_inversion": z2_inversion_module,
    "s3_conj": s3_conjugation_module,
}


# -- checks ------------------------------------------------------------------

def _samples(cm: CrossedModule, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    return rng, [cm.G.random(rng) for _ in range(samples)], [cm.H.random(rng) for _ in range(samples)], \
        [cm.H.random(rng) for _ in range(samples)]


def check_peiffer(cm: CrossedModule, samples: int = 100, seed: int = 0) -> dict:
    """Residuals of ``tau(alpha(g)h) = g tau(h) g^-1`` and ``alpha(tau(h))h' = h h' h^-1``.

    Finite modules are checked over all triples.
    """
    G, H = cm.G, cm.H
    if cm.finite:
        gs = list(G.elements)
        trip = [(g, h, k) for g in gs for h in H.elements for k in H.elements]
    else:
        _, gs, hs, ks = _samples(cm, samples, seed)
        trip = list(zip(gs, hs, ks))
    r1 = r2 = 0.0
    for g, h, k in trip:
        lhs = cm.tau(cm.alpha(g, h))
        rhs = G.multiply(G.multiply(g, cm.tau(h)), G.inverse(g))
        r1 = max(r1, G.distance(lhs, rhs))
        lhs = cm.alpha(cm.tau(h), k)
        rhs = H.multiply(H.multiply(h, k), H.inverse(h))
        r2 = max(r2, H.distance(lhs, rhs))
    return {"peiffer1": r1, "peiffer2": r2, "seed": seed}


def check_action(cm: CrossedModule, samples: int = 100, seed: int = 0) -> dict:
    """alpha is a homomorphism into Aut(H) and tau is a homomorphism."""
    G, H = cm.G, cm.H
    rng = np.random.default_rng(seed)
    r_aut = r_hom = r_tau = 0.0
    for _ in range(samples):
        g, g2 = G.random(rng), G.random(rng)
        h, k = H.random(rng), H.random(rng)
        r_aut = max(r_aut, H.distance(cm.alpha(g, H.multiply(h, k)), H.multiply(cm.alpha(g, h), cm.alpha(g, k))))
        r_hom = max(r_hom, H.distance(cm.alpha(G.multiply(g, g2), h), cm.alpha(g, cm.alpha(g2, h))))
        r_tau = max(r_tau, G.distance(cm.tau(H.multiply(h, k)), G.multiply(cm.tau(h), cm.tau(k))))
    return {"automorphism": r_aut, "action": r_hom, "tau_hom": r_tau, "seed": seed}


def _chain(cm: CrossedModule, rng, n: int):
    """``n`` composable random morphisms ``m1, m2, ...`` (m_{i+1} starts where m_i ends)."""
    out = [cm.random_morphism(rng)]
    for _ in range(n - 1):
        out.append(cm.random_morphism(rng, source=cm.target(out[-1])))
    return out


def check_compose_via_product(cm: CrossedModule, samples: int = 100, seed: int = 0) -> float:
    """``h o f = f 1_{b^-1} h = h 1_{b^-1} f`` for ``f: a -> b``, ``h: b -> c``."""
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(samples):
        f, h = _chain(cm, rng, 2)
        b_inv = cm.unit(cm.G.inverse(cm.target(f)))
        comp = cm.compose(h, f)
        res = max(res, cm.distance(comp, cm.product(cm.product(f, b_inv), h)),
                  cm.distance(comp, cm.product(cm.product(h, b_inv), f)))
    return res


def check_exchange_law(cm: CrossedModule, samples: int = 100, seed: int = 0) -> float:
    """``(f g)(f' g') = (f f')(g g')`` where juxtaposition inside is composition."""
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(samples):
        f1, f = _chain(cm, rng, 2)
        g1, g = _chain(cm, rng, 2)
        try:
            lhs = cm.compose(cm.product(f, g), cm.product(f1, g1))
        except CompositionError as err:
            # products of composable pairs fail to compose: the law is violated outright
            res = max(res, err.distance)
            continue
        rhs = cm.product(cm.compose(f, f1), cm.compose(g, g1))
        res = max(res, cm.distance(lhs, rhs))
    return res


def check_category_laws(cm: CrossedModule, samples: int = 100, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    assoc = unit = inv = 0.0
    for _ in range(samples):
        f, g, h = _chain(cm, rng, 3)
        assoc = max(assoc, cm.distance(cm.compose(h, cm.compose(g, f)), cm.compose(cm.compose(h, g), f)))
        unit = max(unit, cm.distance(cm.compose(f, cm.unit(f.a)), f),
                   cm.distance(cm.compose(cm.unit(cm.target(f)), f), f))
        e = cm.unit(cm.G.identity())
        inv = max(inv, cm.distance(cm.product(f, cm.inverse(f)), e), cm.distance(cm.product(cm.inverse(f), f), e))
    return {"associativity": assoc, "unit": unit, "inverse": inv, "seed": seed}


def check_alpha2_semidirect(dm: DoubleModule, samples: int = 100, seed: int = 0) -> float:
    """``alpha2(alpha1(g1^-1)(h1^-1 h))(alpha2(g1^-1)k) = alpha2(g1^-1 h1^-1 h)(k)``."""
    cm1, K = dm.cm1, dm.K
    G, H = cm1.G, cm1.H
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(samples):
        g1, h1, h, k = G.random(rng), H.random(rng), H.random(rng), K.random(rng)
        g1i = G.inverse(g1)
        h1ih = H.multiply(H.inverse(h1), h)
        lhs = dm.alpha2(dm.embed_h(cm1.alpha(g1i, h1ih)), dm.alpha2(dm.embed_g(g1i), k))
        rhs = dm.alpha2(K.multiply(dm.embed_g(g1i), dm.embed_h(h1ih)), k)
        res = max(res, K.distance(lhs, rhs))
    return res


def check_embedding(dm: DoubleModule, samples: int = 50, seed: int = 0) -> float:
    """The matrix realization multiplies like the semidirect product and ``split`` inverts it."""
    cm1 = dm.cm1
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(samples):
        m1, m2 = Morphism2(cm1.H.random(rng), cm1.G.random(rng)), Morphism2(cm1.H.random(rng), cm1.G.random(rng))
        p = cm1.product(m1, m2)
        res = max(res, dm.K.distance(dm.embed(p.h, p.a), dm.embed(m1.h, m1.a) @ dm.embed(m2.h, m2.a)))
        h, g = dm.split(dm.embed(m1.h, m1.a))
        res = max(res, cm1.H.distance(h, m1.h), cm1.G.distance(g, m1.a))
    return res
