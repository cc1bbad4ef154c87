import itertools

import numpy as np
import pytest

from catransport.crossed import (BUILTIN_MODULES, Morphism2, abelian_module, broken_module, check_action, check_category_laws,
                                 check_compose_via_product, check_embedding, check_exchange_law,
                                 check_alpha2_semidirect, check_peiffer, conjugation_module, double_module,
                                 finite_conjugation_module, s3_conjugation_module, z2_inversion_module,
                                 z4_to_z2_module)
from catransport.errors import CompositionError
from catransport.groups import so2, so3

MODULES = BUILTIN_MODULES


def rot(theta):
    return so2().exp(np.array([theta]))


@pytest.mark.parametrize("name", sorted(MODULES))
def test_peiffer_and_laws_hold(name):
    cm = MODULES[name]()
    p = check_peiffer(cm, 100, 0)
    assert max(p["peiffer1"], p["peiffer2"]) < 1e-12
    a = check_action(cm, 100, 0)
    assert max(a["automorphism"], a["action"], a["tau_hom"]) < 1e-12
    assert check_exchange_law(cm, 100, 0) < 1e-12
    assert check_compose_via_product(cm, 50, 0) < 1e-11
    laws = check_category_laws(cm, 100, 0)
    assert max(laws["associativity"], laws["unit"], laws["inverse"]) < 1e-12


def test_finite_checks_are_exact():
    for cm in (z4_to_z2_module(), z2_inversion_module(), s3_conjugation_module()):
        p = check_peiffer(cm)
        assert p["peiffer1"] == p["peiffer2"] == 0.0
        assert check_exchange_law(cm) == 0.0


def test_broken_module_detected():
    cm = broken_module(so3())
    p = check_peiffer(cm, 100, 0)
    assert max(p["peiffer1"], p["peiffer2"]) > 0.1
    assert check_exchange_law(cm, 100, 0) > 0.1


def test_source_target():
    cm = conjugation_module(so2())
    m = Morphism2(rot(0.3), rot(0.1))
    assert so2().distance(cm.source(m), rot(0.1)) == 0.0
    assert so2().distance(cm.target(m), rot(0.4)) < 1e-15
    e = cm.unit(rot(0.7))
    assert so2().distance(cm.target(e), rot(0.7)) < 1e-15


def test_abelian_target_equals_source():
    cm = abelian_module(so3())
    rng = np.random.default_rng(0)
    m = cm.random_morphism(rng)
    np.testing.assert_array_equal(cm.target(m), cm.source(m))


def test_compose_by_hand():
    cm = conjugation_module(so2())
    m1 = Morphism2(rot(0.3), rot(0.1))
    m2 = Morphism2(rot(0.2), rot(0.4))
    c = cm.compose(m2, m1)
    assert cm.distance(c, Morphism2(rot(0.5), rot(0.1))) < 1e-15


def test_compose_identity_law():
    cm = conjugation_module(so3())
    m = cm.random_morphism(np.random.default_rng(0))
    assert cm.distance(cm.compose(cm.unit(cm.target(m)), m), m) < 1e-15


def test_compose_mismatch_reports_distance():
    cm = conjugation_module(so2())
    with pytest.raises(CompositionError) as err:
        cm.compose(Morphism2(rot(0.2), rot(1.0)), Morphism2(rot(0.3), rot(0.1)))
    assert err.value.distance > 0.1


def test_product_abelian_by_hand():
    cm = abelian_module(so2())
    h, k = np.array([1.0, 2.0]), np.array([-0.5, 0.3])
    p = cm.product(Morphism2(h, rot(0.4)), Morphism2(k, rot(0.9)))
    np.testing.assert_allclose(p.h, h + rot(0.4) @ k, atol=1e-15)
    np.testing.assert_allclose(p.a, rot(1.3), atol=1e-15)


def test_product_unit_and_inverse():
    cm = conjugation_module(so3())
    rng = np.random.default_rng(4)
    m = cm.random_morphism(rng)
    e = cm.unit(cm.G.identity())
    assert cm.distance(cm.product(e, m), m) < 1e-15
    assert cm.distance(cm.product(m, cm.inverse(m)), e) < 1e-12


def test_hk_equals_kh_for_kernel_composites():
    # t(k) = s(h) = e: hk = h o k = kh
    cm = conjugation_module(so3())
    G = cm.G
    rng = np.random.default_rng(8)
    for _ in range(20):
        kh = G.random(rng)
        k = Morphism2(kh, G.inverse(kh))  # ends at e
        h = Morphism2(G.random(rng), G.identity())
        a, b, c = cm.product(h, k), cm.compose(h, k), cm.product(k, h)
        assert cm.distance(a, b) < 1e-12 and cm.distance(a, c) < 1e-12


def test_identities_are_multiplicative():
    cm = conjugation_module(so3())
    rng = np.random.default_rng(5)
    a, b = cm.G.random(rng), cm.G.random(rng)
    assert cm.distance(cm.product(cm.unit(a), cm.unit(b)), cm.unit(a @ b)) < 1e-12
    fc = s3_conjugation_module()
    for a, b in itertools.product(fc.G.elements, repeat=2):
        assert fc.equal(fc.product(fc.unit(a), fc.unit(b)), fc.unit(fc.G.multiply(a, b)))


def test_source_target_are_homomorphisms():
    cm = conjugation_module(so3())
    G = cm.G
    rng = np.random.default_rng(6)
    for _ in range(50):
        m1, m2 = cm.random_morphism(rng), cm.random_morphism(rng)
        p = cm.product(m1, m2)
        assert G.distance(cm.source(p), cm.source(m1) @ cm.source(m2)) < 1e-11
        assert G.distance(cm.target(p), cm.target(m1) @ cm.target(m2)) < 1e-11


@pytest.mark.parametrize("cm", [conjugation_module(so3()), abelian_module(so3())], ids=["conj", "abelian"])
def test_alpha_alg_compatible_with_tau_alg(cm):
    G, H = cm.G, cm.H
    rng = np.random.default_rng(9)
    for _ in range(30):
        g, Z = G.random(rng), H.random_algebra(rng)
        assert np.max(np.abs(cm.tau_alg(cm.alpha_alg(g, Z)) - G.Ad(g, cm.tau_alg(Z)))) < 1e-10


def test_alpha_alg_is_derivative_of_alpha():
    cm = conjugation_module(so3())
    G, H = cm.G, cm.H
    rng = np.random.default_rng(10)
    g, Z = G.random(rng), H.random_algebra(rng)
    eps = 1e-6
    fd = (H.log_near_identity(cm.alpha(g, H.exp(eps * Z))) - H.log_near_identity(cm.alpha(g, H.exp(-eps * Z)))) / (2 * eps)
    assert np.max(np.abs(fd - cm.alpha_alg(g, Z))) < 1e-8


@pytest.mark.parametrize("base", ["conj", "abelian"])
def test_double_module(base):
    cm1 = conjugation_module(so3()) if base == "conj" else abelian_module(so3())
    dm = double_module(cm1)
    assert check_alpha2_semidirect(dm, 100, 0) < 1e-11
    assert check_embedding(dm, 50, 0) < 1e-12
    p = check_peiffer(dm.cm2, 100, 0)
    assert max(p["peiffer1"], p["peiffer2"]) < 1e-11


def test_alpha2_semidirect_trivial_substitutions():
    dm = double_module(conjugation_module(so3()))
    cm1, K = dm.cm1, dm.K
    rng = np.random.default_rng(11)
    h, k = cm1.H.random(rng), K.random(rng)
    e = cm1.G.identity()
    lhs = dm.alpha2(dm.embed_h(cm1.alpha(e, h)), dm.alpha2(dm.embed_g(e), k))
    assert K.distance(lhs, dm.alpha2(dm.embed_h(h), k)) < 1e-12


def test_finite_conjugation_module_of_quaternions():
    from catransport.groups import quaternion
    cm = finite_conjugation_module(quaternion())
    assert check_exchange_law(cm) == 0.0
