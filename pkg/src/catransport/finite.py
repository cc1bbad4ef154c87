"""Finite categories, categorical groups and principal categorical bundles, checked exhaustively.

Objects and morphisms are arbitrary hashable values. Every checker returns a
``FiniteReport`` that keeps the first counterexample found for each law.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .crossed import CrossedModule, finite_module
from .errors import CentralityError, DomainError, FreenessError
from .groups import FiniteGroup


@dataclass
class FiniteReport:
    name: str = ""
    failures: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def fail(self, law: str, witness) -> None:
        self.failures.setdefault(law, witness)
        self.counts[law] = self.counts.get(law, 0) + 1

    def check(self, law: str, ok: bool, witness) -> None:
        if not ok:
            self.fail(law, witness)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "FiniteReport", prefix: str = "") -> "FiniteReport":
        for k, w in other.failures.items():
            self.failures.setdefault(prefix + k, w)
            self.counts[prefix + k] = self.counts.get(prefix + k, 0) + other.counts.get(k, 1)
        return self


@dataclass
class FiniteCategory:
    objects: list
    morphisms: list
    source: dict
    target: dict
    identity: dict
    compose: Callable  # compose(g, f) = g o f, only for t(f) == s(g)
    name: str = ""

    def __post_init__(self):
        self.out_of = {o: [] for o in self.objects}
        for m in self.morphisms:
            self.out_of[self.source[m]].append(m)

    def composable_pairs(self):
        """Pairs ``(f, g)`` with ``t(f) = s(g)``."""
        for f in self.morphisms:
            for g in self.out_of[self.target[f]]:
                yield f, g


def check_category(C: FiniteCategory) -> FiniteReport:
    rep = FiniteReport(f"category {C.name}")
    mors = set(C.morphisms)
    for o in C.objects:
        i = C.identity[o]
        rep.check("identity_endpoints", C.source[i] == o and C.target[i] == o, o)
    for f, g in C.composable_pairs():
        gf = C.compose(g, f)
        rep.check("closure", gf in mors, (f, g))
        rep.check("composite_endpoints", C.source.get(gf) == C.source[f] and C.target.get(gf) == C.target[g], (f, g))
    for f in C.morphisms:
        rep.check("left_unit", C.compose(C.identity[C.target[f]], f) == f, f)
        rep.check("right_unit", C.compose(f, C.identity[C.source[f]]) == f, f)
    for f, g in C.composable_pairs():
        gf = C.compose(g, f)
        for h in C.out_of[C.target[g]]:
            rep.check("associativity", C.compose(h, gf) == C.compose(C.compose(h, g), f), (f, g, h))
    return rep


def codiscrete_category(objs, name="") -> FiniteCategory:
    objs = list(objs)
    mors = [(a, b) for a in objs for b in objs]
    return FiniteCategory(objs, mors, {m: m[0] for m in mors}, {m: m[1] for m in mors},
                          {a: (a, a) for a in objs}, lambda g, f: (f[0], g[1]), name=name)


def discrete_category(objs, name="") -> FiniteCategory:
    objs = list(objs)
    mors = [("id", o) for o in objs]
    return FiniteCategory(objs, mors, {m: m[1] for m in mors}, {m: m[1] for m in mors},
                          {o: ("id", o) for o in objs}, lambda g, f: f, name=name)


@dataclass
class FiniteCategoricalGroup:
    cat: FiniteCategory
    obj_mul: Callable
    obj_inv: Callable
    obj_unit: Hashable
    mor_mul: Callable
    mor_inv: Callable
    name: str = ""

    @property
    def mor_unit(self):
        return self.cat.identity[self.obj_unit]


def check_categorical_group(cg: FiniteCategoricalGroup) -> FiniteReport:
    """Category laws, both group structures, functoriality of s, t, 1 and the exchange law."""
    C = cg.cat
    rep = FiniteReport(f"categorical group {cg.name}").merge(check_category(C))
    objs, mors = C.objects, C.morphisms
    for kind, elems, mul, inv, unit in (("obj", objs, cg.obj_mul, cg.obj_inv, cg.obj_unit),
                                        ("mor", mors, cg.mor_mul, cg.mor_inv, cg.mor_unit)):
        for a in elems:
            rep.check(f"{kind}_unit", mul(unit, a) == a and mul(a, unit) == a, a)
            rep.check(f"{kind}_inverse", mul(a, inv(a)) == unit and mul(inv(a), a) == unit, a)
        for a, b, c in itertools.product(elems, repeat=3):
            if mul(mul(a, b), c) != mul(a, mul(b, c)):
                rep.fail(f"{kind}_associativity", (a, b, c))
                break
    for f, g in itertools.product(mors, repeat=2):
        fg = cg.mor_mul(f, g)
        rep.check("source_hom", C.source[fg] == cg.obj_mul(C.source[f], C.source[g]), (f, g))
        rep.check("target_hom", C.target[fg] == cg.obj_mul(C.target[f], C.target[g]), (f, g))
    for a, b in itertools.product(objs, repeat=2):
        rep.check("identity_hom", C.identity[cg.obj_mul(a, b)] == cg.mor_mul(C.identity[a], C.identity[b]), (a, b))
    pairs = list(C.composable_pairs())
    for (f1, f), (g1, g) in itertools.product(pairs, repeat=2):
        lhs = C.compose(cg.mor_mul(f, g), cg.mor_mul(f1, g1))
        rhs = cg.mor_mul(C.compose(f, f1), C.compose(g, g1))
        rep.check("exchange", lhs == rhs, (f1, f, g1, g))
    return rep


def group_category(G: FiniteGroup, kind: str) -> FiniteCategoricalGroup:
    """Discrete (``kind='discrete'``) or codiscrete (``'codiscrete'``) categorical group on G."""
    objs = list(G.elements)
    if kind == "discrete":
        C = discrete_category(objs, f"{G.name}_d")
        mm = lambda f, g: ("id", G.multiply(f[1], g[1]))
        mi = lambda f: ("id", G.inverse(f[1]))
    elif kind == "codiscrete":
        C = codiscrete_category(objs, f"{G.name}_0")
        mm = lambda f, g: (G.multiply(f[0], g[0]), G.multiply(f[1], g[1]))
        mi = lambda f: (G.inverse(f[0]), G.inverse(f[1]))
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return FiniteCategoricalGroup(C, G.multiply, G.inverse, G.identity(), mm, mi, name=C.name)


def subgroup_category(G: FiniteGroup, Z, kind: str = "discrete") -> FiniteCategoricalGroup:
    """Discrete categorical group on the subgroup ``Z`` of G."""
    Z = sorted(set(int(z) for z in Z))
    if not G.is_subgroup(Z):
        raise DomainError(f"{Z} is not a subgroup of {G.name}")
    C = discrete_category(Z, f"{G.name}:{Z}_d")
    return FiniteCategoricalGroup(C, G.multiply, G.inverse, G.identity(),
                                  lambda f, g: ("id", G.multiply(f[1], g[1])), lambda f: ("id", G.inverse(f[1])),
                                  name=C.name)


# -- crossed modules <-> categorical groups ----------------------------------

def categorical_group_from_crossed_module(cm: CrossedModule) -> FiniteCategoricalGroup:
    """Objects ``a`` in G, morphisms ``(h, a): a -> tau(h) a``."""
    G, H = cm.G, cm.H
    objs = list(G.elements)
    mors = [(h, a) for h in H.elements for a in G.elements]
    src = {m: m[1] for m in mors}
    tgt = {m: G.multiply(cm.tau(m[0]), m[1]) for m in mors}
    C = FiniteCategory(objs, mors, src, tgt, {a: (H.identity(), a) for a in objs},
                       lambda g, f: (H.multiply(g[0], f[0]), f[1]), name=f"cg({cm.name})")

    def mm(f, g):
        return H.multiply(f[0], cm.alpha(f[1], g[0])), G.multiply(f[1], g[1])

    def mi(f):
        ai = G.inverse(f[1])
        return cm.alpha(ai, H.inverse(f[0])), ai

    return FiniteCategoricalGroup(C, G.multiply, G.inverse, G.identity(), mm, mi, name=C.name)


def crossed_module_from_categorical_group(cg: FiniteCategoricalGroup):
    """``H = ker s``, ``tau = t|_H``, ``alpha(g) theta = 1_g theta 1_{g^-1}``.

    Returns the crossed module and the index lists ``(objects, kernel)`` used to
    number G and H.
    """
    C = cg.cat
    objs = list(C.objects)
    oi = {o: i for i, o in enumerate(objs)}
    ker = [m for m in C.morphisms if C.source[m] == cg.obj_unit]
    ki = {m: i for i, m in enumerate(ker)}
    G = FiniteGroup([[oi[cg.obj_mul(a, b)] for b in objs] for a in objs], name=f"obj({cg.name})")
    H = FiniteGroup([[ki[cg.mor_mul(a, b)] for b in ker] for a in ker], name=f"ker({cg.name})")
    alpha = [[ki[cg.mor_mul(cg.mor_mul(C.identity[g], th), C.identity[cg.obj_inv(g)])] for th in ker] for g in objs]
    tau = [oi[C.target[th]] for th in ker]
    return finite_module(G, H, alpha, tau, name=f"cm({cg.name})"), (objs, ker)


def check_round_trip(cg: FiniteCategoricalGroup) -> FiniteReport:
    """``cg -> crossed module -> cg'`` is an isomorphism ``phi -> (phi 1_{s(phi)^-1}, s(phi))``."""
    rep = FiniteReport(f"round trip {cg.name}")
    C = cg.cat
    cm, (objs, ker) = crossed_module_from_categorical_group(cg)
    oi = {o: i for i, o in enumerate(objs)}
    ki = {m: i for i, m in enumerate(ker)}
    cg2 = categorical_group_from_crossed_module(cm)
    C2 = cg2.cat

    def F(m):
        s = C.source[m]
        return ki[cg.mor_mul(m, C.identity[cg.obj_inv(s)])], oi[s]

    image = {F(m) for m in C.morphisms}
    rep.check("bijective", len(image) == len(C.morphisms) == len(C2.morphisms), len(image))
    for m in C.morphisms:
        rep.check("source", C2.source[F(m)] == oi[C.source[m]], m)
        rep.check("target", C2.target[F(m)] == oi[C.target[m]], m)
    for o in objs:
        rep.check("identity", F(C.identity[o]) == C2.identity[oi[o]], o)
    for f, g in C.composable_pairs():
        rep.check("composition", F(C.compose(g, f)) == C2.compose(F(g), F(f)), (f, g))
    for f, g in itertools.product(C.morphisms, repeat=2):
        rep.check("product", F(cg.mor_mul(f, g)) == cg2.mor_mul(F(f), F(g)), (f, g))
    return rep.merge(check_categorical_group(cg2), "rebuilt_")


def check_crossed_round_trip(cm: CrossedModule) -> FiniteReport:
    """``cm -> cg -> cm'`` is an isomorphism ``h -> (h, e)``, and both directions are exact."""
    rep = FiniteReport(f"round trip {cm.name}")
    cg = categorical_group_from_crossed_module(cm)
    rep.merge(check_categorical_group(cg), "cg_")
    cm2, (objs, ker) = crossed_module_from_categorical_group(cg)
    ki = {m: i for i, m in enumerate(ker)}
    G, H = cm.G, cm.H
    e = G.identity()
    phi = {h: ki[(h, e)] for h in H.elements}
    rep.check("bijective", len(set(phi.values())) == H.order == cm2.H.order, H.order)
    for h in H.elements:
        rep.check("tau", objs[cm2.tau(phi[h])] == cm.tau(h), h)
        for g in G.elements:
            rep.check("alpha", cm2.alpha(g, phi[h]) == phi[cm.alpha(g, h)], (g, h))
        for k in H.elements:
            rep.check("hom", cm2.H.multiply(phi[h], phi[k]) == phi[H.multiply(h, k)], (h, k))
    return rep.merge(check_round_trip(cg), "")


# -- central extensions -------------------------------------------------------

def build_cg2(hatK: FiniteGroup, Z) -> FiniteCategoricalGroup:
    """Categorical group with objects ``hatK / Z`` and morphisms Z-orbits of pairs.

    A morphism ``[a, b]`` runs from ``[a]`` to ``[b]``; orbits are taken under
    ``(a, b) z = (a z, b z)``. Raises ``CentralityError`` if Z is not central.
    """
    Z = sorted(set(int(z) for z in Z))
    if not hatK.is_subgroup(Z):
        raise DomainError(f"{Z} is not a subgroup of {hatK.name}")
    w = hatK.central_witness(Z)
    if w is not None:
        raise CentralityError(f"subgroup is not central: {w[0]} and {w[1]} do not commute", w)
    mul, inv = hatK.multiply, hatK.inverse
    coset = {a: min(mul(a, z) for z in Z) for a in hatK.elements}
    objs = sorted(set(coset.values()))

    @functools.lru_cache(maxsize=None)
    def canon(a, b):
        return min((mul(a, z), mul(b, z)) for z in Z)

    mors = sorted({canon(a, b) for a in hatK.elements for b in hatK.elements})
    src = {m: coset[m[0]] for m in mors}
    tgt = {m: coset[m[1]] for m in mors}

    def compose(g, f):
        # shift g so that it starts at the representative where f ends
        z = next(z for z in Z if mul(g[0], z) == f[1])
        return canon(f[0], mul(g[1], z))

    C = FiniteCategory(objs, mors, src, tgt, {o: canon(o, o) for o in objs}, compose,
                       name=f"{hatK.name}/{Z}")
    return FiniteCategoricalGroup(
        C, lambda a, b: coset[mul(a, b)], lambda a: coset[inv(a)], coset[hatK.identity()],
        lambda f, g: canon(mul(f[0], g[0]), mul(f[1], g[1])), lambda f: canon(inv(f[0]), inv(f[1])),
        name=C.name,
    )


# -- principal categorical bundles -----------------------------------------------

@dataclass
class CategoricalBundle:
    P: FiniteCategory
    B: FiniteCategory
    proj_obj: dict
    proj_mor: dict
    Z: FiniteCategoricalGroup
    act_obj: Callable  # (p, z) -> p z
    act_mor: Callable  # (F, phi) -> F phi
    name: str = ""


def _orbits(elems, group_elems, act):
    seen, label = set(), {}
    for x in elems:
        if x in seen:
            continue
        orb = frozenset(act(x, z) for z in group_elems)
        key = min(orb, key=repr)
        for y in orb:
            label[y] = key
        seen |= orb
    return label


def quotient_bundle(P: FiniteCategory, Z: FiniteCategoricalGroup, act_obj, act_mor, name="") -> CategoricalBundle:
    """Quotient ``P -> P / Z`` for a free action; composition of orbits uses any composable representatives."""
    zc = Z.cat
    for p in P.objects:
        for z in zc.objects:
            if z != Z.obj_unit and act_obj(p, z) == p:
                raise FreenessError(f"object {p!r} is fixed by {z!r}", (p, z))
    for F in P.morphisms:
        for phi in zc.morphisms:
            if phi != Z.mor_unit and act_mor(F, phi) == F:
                raise FreenessError(f"morphism {F!r} is fixed by {phi!r}", (F, phi))
    lo = _orbits(P.objects, zc.objects, act_obj)
    lm = _orbits(P.morphisms, zc.morphisms, act_mor)
    objs = sorted(set(lo.values()), key=repr)
    mors = sorted(set(lm.values()), key=repr)
    src = {m: lo[P.source[m]] for m in mors}
    tgt = {m: lo[P.target[m]] for m in mors}
    members: dict = {}
    for F, key in lm.items():
        members.setdefault(key, []).append(F)

    def compose(g, f):
        for H in members[g]:
            if P.source[H] == P.target[f]:
                return lm[P.compose(H, f)]
        raise DomainError(f"no composable representatives for {g!r} o {f!r}")

    B = FiniteCategory(objs, mors, src, tgt, {o: lm[P.identity[o]] for o in objs}, compose, name=f"{P.name}/Z")
    return CategoricalBundle(P, B, dict(lo), dict(lm), Z, act_obj, act_mor, name=name or B.name)


def check_orbit_composition(bundle: CategoricalBundle) -> FiniteReport:
    """Every composable pair of representatives composes into the same orbit."""
    rep = FiniteReport("orbit composition")
    P, pm = bundle.P, bundle.proj_mor
    seen: dict = {}
    for f, g in P.composable_pairs():
        key = (pm[f], pm[g])
        val = pm[P.compose(g, f)]
        if seen.setdefault(key, val) != val:
            rep.fail("well_defined", (f, g))
    return rep


def check_principal_axioms(bundle: CategoricalBundle) -> FiniteReport:
    P, B, Z = bundle.P, bundle.B, bundle.Z
    zc = Z.cat
    po, pm = bundle.proj_obj, bundle.proj_mor
    ao, am = bundle.act_obj, bundle.act_mor
    rep = FiniteReport(f"principal bundle {bundle.name}")
    # projection is a surjective functor
    for F in P.morphisms:
        rep.check("proj_source", B.source[pm[F]] == po[P.source[F]], F)
        rep.check("proj_target", B.target[pm[F]] == po[P.target[F]], F)
    for p in P.objects:
        rep.check("proj_identity", pm[P.identity[p]] == B.identity[po[p]], p)
    for f, g in P.composable_pairs():
        rep.check("proj_composition", pm[P.compose(g, f)] == B.compose(pm[g], pm[f]), (f, g))
    missing_o = set(B.objects) - set(po.values())
    missing_m = set(B.morphisms) - set(pm.values())
    rep.check("surjective_objects", not missing_o, sorted(missing_o, key=repr)[:1])
    rep.check("surjective_morphisms", not missing_m, sorted(missing_m, key=repr)[:1])
    # right action
    for p in P.objects:
        rep.check("action_unit_obj", ao(p, Z.obj_unit) == p, p)
        for z in zc.objects:
            pz = ao(p, z)
            rep.check("fiber_obj", po[pz] == po[p], (p, z))
            rep.check("free_obj", z == Z.obj_unit or pz != p, (p, z))
            rep.check("action_identity", am(P.identity[p], zc.identity[z]) == P.identity[pz], (p, z))
            for z2 in zc.objects:
                rep.check("action_assoc_obj", ao(pz, z2) == ao(p, Z.obj_mul(z, z2)), (p, z, z2))
    for F in P.morphisms:
        rep.check("action_unit_mor", am(F, Z.mor_unit) == F, F)
        for phi in zc.morphisms:
            Fp = am(F, phi)
            rep.check("fiber_mor", pm[Fp] == pm[F], (F, phi))
            rep.check("free_mor", phi == Z.mor_unit or Fp != F, (F, phi))
            rep.check("action_source", P.source[Fp] == ao(P.source[F], zc.source[phi]), (F, phi))
            rep.check("action_target", P.target[Fp] == ao(P.target[F], zc.target[phi]), (F, phi))
            for psi in zc.morphisms:
                if am(Fp, psi) != am(F, Z.mor_mul(phi, psi)):
                    rep.fail("action_assoc_mor", (F, phi, psi))
    zpairs = list(zc.composable_pairs())
    for f, g in P.composable_pairs():
        gf = P.compose(g, f)
        for phi, psi in zpairs:
            rep.check("action_functor", am(gf, zc.compose(psi, phi)) == P.compose(am(g, psi), am(f, phi)),
                      (f, g, phi, psi))
    # fiber transitivity
    for elems, proj, act, zs, law in ((P.objects, po, ao, zc.objects, "transitive_obj"),
                                      (P.morphisms, pm, am, zc.morphisms, "transitive_mor")):
        fibers: dict = {}
        for x in elems:
            fibers.setdefault(proj[x], []).append(x)
        for fib in fibers.values():
            orbit = {act(fib[0], z) for z in zs}
            for y in fib:
                if y not in orbit:
                    rep.fail(law, (fib[0], y))
    return rep


def check_reduction(b0: CategoricalBundle, b1: CategoricalBundle, f_obj: Callable, f_mor: Callable,
                    beta_obj: Callable, beta_mor: Callable) -> FiniteReport:
    """``f(p z) = f(p) beta(z)`` on objects and morphisms, ``f`` a fiber-preserving functor, beta a morphism."""
    rep = FiniteReport("reduction")
    P0, P1 = b0.P, b1.P
    Z0, Z1 = b0.Z, b1.Z
    for z, w in itertools.product(Z0.cat.objects, repeat=2):
        rep.check("beta_hom_obj", beta_obj(Z0.obj_mul(z, w)) == Z1.obj_mul(beta_obj(z), beta_obj(w)), (z, w))
    for z, w in itertools.product(Z0.cat.morphisms, repeat=2):
        rep.check("beta_hom_mor", beta_mor(Z0.mor_mul(z, w)) == Z1.mor_mul(beta_mor(z), beta_mor(w)), (z, w))
    for p in P0.objects:
        rep.check("fiber_obj", b1.proj_obj[f_obj(p)] == b0.proj_obj[p], p)
        for z in Z0.cat.objects:
            rep.check("equivariant_obj", f_obj(b0.act_obj(p, z)) == b1.act_obj(f_obj(p), beta_obj(z)), (p, z))
    for F in P0.morphisms:
        rep.check("fiber_mor", b1.proj_mor[f_mor(F)] == b0.proj_mor[F], F)
        rep.check("functor_source", P1.source[f_mor(F)] == f_obj(P0.source[F]), F)
        rep.check("functor_target", P1.target[f_mor(F)] == f_obj(P0.target[F]), F)
        for phi in Z0.cat.morphisms:
            rep.check("equivariant_mor", f_mor(b0.act_mor(F, phi)) == b1.act_mor(f_mor(F), beta_mor(phi)), (F, phi))
    for f, g in P0.composable_pairs():
        rep.check("functor_composition", f_mor(P0.compose(g, f)) == P1.compose(f_mor(g), f_mor(f)), (f, g))
    return rep


# -- fixtures -----------------------------------------------------------------

def example_p1(G: FiniteGroup, n_points: int = 3, merge: bool = False) -> CategoricalBundle:
    """Discrete bundle ``X x G -> X`` for the free G-set ``X x G``.

    With ``merge=True`` the projection sends every point to one base object, so
    fibers contain several orbits.
    """
    objs = [(x, g) for x in range(n_points) for g in G.elements]
    P = discrete_category(objs, "XxG")
    Zg = group_category(G, "discrete")
    ao = lambda p, z: (p[0], G.multiply(p[1], z))
    am = lambda F, phi: ("id", ao(F[1], phi[1]))
    if not merge:
        return quotient_bundle(P, Zg, ao, am, name="P1")
    B = discrete_category([0], "point")
    return CategoricalBundle(P, B, {p: 0 for p in objs}, {F: ("id", 0) for F in P.morphisms}, Zg, ao, am,
                             name="P1_merged")


def cg2_bundle(hatK: FiniteGroup, Z) -> CategoricalBundle:
    """``hatK_0 -> hatK_0 / Z_d``: the codiscrete category on hatK modulo right multiplication."""
    P = codiscrete_category(list(hatK.elements), f"{hatK.name}_0")
    Zd = subgroup_category(hatK, Z)
    ao = lambda p, z: hatK.multiply(p, z)
    am = lambda F, phi: (hatK.multiply(F[0], phi[1]), hatK.multiply(F[1], phi[1]))
    return quotient_bundle(P, Zd, ao, am, name=f"{hatK.name}->{hatK.name}/Z")


def tree_category(n: int = 3) -> FiniteCategory:
    """Backtrack-free paths in the path graph ``0 - 1 - ... - (n-1)``: one per ordered pair."""
    return codiscrete_category(list(range(n)), f"tree{n}")


def example_p2(G: FiniteGroup, n: int = 3) -> CategoricalBundle:
    """Morphisms ``(p, q; gamma)`` over tree paths, acted on by the codiscrete ``G_0``."""
    B = tree_category(n)
    objs = [(x, g) for x in range(n) for g in G.elements]
    mors = [(p, q) for p in objs for q in objs]
    P = FiniteCategory(objs, mors, {m: m[0] for m in mors}, {m: m[1] for m in mors}, {p: (p, p) for p in objs},
                       lambda g, f: (f[0], g[1]), name="P2")
    G0 = group_category(G, "codiscrete")
    ao = lambda p, z: (p[0], G.multiply(p[1], z))
    am = lambda F, phi: (ao(F[0], phi[0]), ao(F[1], phi[1]))
    po = {p: p[0] for p in objs}
    pm = {m: (m[0][0], m[1][0]) for m in mors}
    return CategoricalBundle(P, B, po, pm, G0, ao, am, name="P2")


def tree_transport(G: FiniteGroup, edges):
    """Transport ``T[x, y]`` along the unique tree path from edge elements ``edges[i]`` (i -> i+1)."""
    n = len(edges) + 1
    T = {}
    for x in range(n):
        for y in range(n):
            g = G.identity()
            if y >= x:
                for i in range(x, y):
                    g = G.multiply(edges[i], g)
            else:
                for i in range(x - 1, y - 1, -1):
                    g = G.multiply(G.inverse(edges[i]), g)
            T[x, y] = g
    return T


def decorated_fixture(cm: CrossedModule, edges):
    """Finite analog of the undecorated and decorated path bundles over a tree.

    A horizontal path is ``(x, y, g)``: it runs from ``(x, g)`` to ``(y, T[x, y] g)``.
    Decorated paths ``(x, y, g, h)`` end at ``(y, T[x, y] g tau(h)^-1)``.
    Returns ``(undecorated bundle, decorated bundle)`` over the same tree category.
    """
    G, H = cm.G, cm.H
    n = len(edges) + 1
    T = tree_transport(G, edges)
    B = tree_category(n)
    objs = [(x, g) for x in range(n) for g in G.elements]

    hor = [(x, y, g) for x in range(n) for y in range(n) for g in G.elements]
    P0 = FiniteCategory(objs, hor, {m: (m[0], m[2]) for m in hor},
                        {m: (m[1], G.multiply(T[m[0], m[1]], m[2])) for m in hor},
                        {p: (p[0], p[0], p[1]) for p in objs}, lambda g, f: (f[0], g[1], f[2]), name="P0")
    Gd = group_category(G, "discrete")
    ao = lambda p, z: (p[0], G.multiply(p[1], z))
    b0 = CategoricalBundle(P0, B, {p: p[0] for p in objs}, {m: (m[0], m[1]) for m in hor}, Gd, ao,
                           lambda F, phi: (F[0], F[1], G.multiply(F[2], phi[1])), name="P0")

    dec = [(x, y, g, h) for (x, y, g) in hor for h in H.elements]

    def tgt(m):
        x, y, g, h = m
        return y, G.multiply(G.multiply(T[x, y], g), cm.tau(H.inverse(h)))

    def compose(m2, m1):
        # the second path, translated by tau(h1), starts where the first undecorated lift ends
        return m1[0], m2[1], m1[2], H.multiply(m2[3], m1[3])

    Pd = FiniteCategory(objs, dec, {m: (m[0], m[2]) for m in dec}, {m: tgt(m) for m in dec},
                        {p: (p[0], p[0], p[1], H.identity()) for p in objs}, compose, name="Pdec")
    cg = categorical_group_from_crossed_module(cm)

    def am(F, phi):
        x, y, g, h = F
        h1, g1 = phi
        return x, y, G.multiply(g, g1), cm.alpha(G.inverse(g1), H.multiply(H.inverse(h1), h))

    b1 = CategoricalBundle(Pd, B, {p: p[0] for p in objs}, {m: (m[0], m[1]) for m in dec}, cg, ao, am, name="Pdec")
    return b0, b1


def reduction_maps(cm: CrossedModule, broken: bool = False):
    """``R(x, y, g) = (x, y, g, e)`` and the inclusion ``G_d -> cg(cm)``; ``broken`` uses the trivial map."""
    G, H = cm.G, cm.H
    f_obj = lambda p: p
    f_mor = lambda m: (m[0], m[1], m[2], H.identity())
    if broken:
        beta_obj = lambda z: G.identity()
        beta_mor = lambda phi: (H.identity(), G.identity())
    else:
        beta_obj = lambda z: z
        beta_mor = lambda phi: (H.identity(), phi[1])
    return f_obj, f_mor, beta_obj, beta_mor


# -- free group words ------------------------------------------------------------

def reduce_word(word) -> tuple:
    """Freely reduce a word of nonzero ints (``-k`` is the inverse of generator ``k``)."""
    out: list = []
    for a in word:
        if a == 0:
            raise DomainError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def word_product(u, v) -> tuple:
    return reduce_word(tuple(u) + tuple(v))


def word_inverse(u) -> tuple:
    return tuple(-a for a in reversed(u))
