import itertools

import pytest
from hypothesis import given, strategies as st

from catransport.crossed import (finite_conjugation_module, s3_conjugation_module, z2_inversion_module,
                                 z4_to_z2_module)
from catransport.errors import CentralityError, DomainError, FreenessError
from catransport.finite import (FiniteCategory, FiniteReport, build_cg2, categorical_group_from_crossed_module,
                                cg2_bundle, check_categorical_group, check_category, check_crossed_round_trip,
                                check_orbit_composition, check_principal_axioms, check_reduction,
                                check_round_trip, codiscrete_category, decorated_fixture, discrete_category,
                                example_p1, example_p2, group_category, quotient_bundle, reduce_word,
                                reduction_maps, tree_transport, word_inverse, word_product)
from catransport.groups import cyclic, klein, quaternion, symmetric

Z4, Q8 = cyclic(4), quaternion()


def test_report_records_first_witness_and_counts():
    r = FiniteReport("r")
    r.check("law", True, 0)
    r.check("law", False, 1)
    r.check("law", False, 2)
    assert r.failures == {"law": 1} and r.counts == {"law": 2} and not r.ok
    merged = FiniteReport("m").merge(r, "sub_")
    assert merged.failures == {"sub_law": 1} and merged.counts == {"sub_law": 2}


@pytest.mark.parametrize("make", [codiscrete_category, discrete_category])
def test_small_categories(make):
    assert check_category(make([0, 1, 2])).ok


def test_broken_category_has_witness():
    C = codiscrete_category([0, 1])
    bad = FiniteCategory(C.objects, C.morphisms, C.source, C.target, C.identity, lambda g, f: (0, 0))
    rep = check_category(bad)
    assert not rep.ok and rep.failures


@pytest.mark.parametrize("kind", ["discrete", "codiscrete"])
@pytest.mark.parametrize("G", [cyclic(3), klein(), symmetric(3)])
def test_group_categories(G, kind):
    assert check_categorical_group(group_category(G, kind)).ok


def test_group_category_unknown_kind():
    with pytest.raises(DomainError):
        group_category(Z4, "loose")


@pytest.mark.parametrize("K,Z", [(Z4, [0, 2]), (Q8, [0, 1]), (Z4, [0]), (klein(), [0, 3])])
def test_cg2_sizes_and_laws(K, Z):
    cg = build_cg2(K, Z)
    assert len(cg.cat.objects) == K.order // len(Z)
    assert len(cg.cat.morphisms) == K.order ** 2 // len(Z)
    assert check_categorical_group(cg).ok
    b = cg2_bundle(K, Z)
    assert check_principal_axioms(b).ok
    assert check_orbit_composition(b).ok
    assert check_round_trip(cg).ok


def test_cg2_z4_hand_values():
    cg = build_cg2(Z4, [0, 2])
    assert cg.cat.objects == [0, 1]
    # [a, b] is the orbit {(a, b), (a + 2, b + 2)}; representatives minimise the pair
    assert set(cg.cat.morphisms) == {(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3)}
    assert cg.mor_mul((1, 3), (1, 0)) == (0, 1)  # (2, 3) ~ (0, 1)
    assert cg.cat.compose((1, 0), (0, 3)) == (0, 2)  # (3, 2) o (0, 3)


def test_cg2_rejects_non_central_subgroup():
    with pytest.raises(CentralityError) as info:
        build_cg2(Q8, [0, 1, 2, 3])
    a, b = info.value.witness
    assert Q8.multiply(a, b) != Q8.multiply(b, a)


def test_cg2_rejects_non_subgroup():
    with pytest.raises(DomainError):
        build_cg2(Z4, [0, 1])


def test_quotient_rejects_non_free_action():
    P = codiscrete_category(list(Z4.elements))
    Zd = group_category(cyclic(2), "discrete")
    with pytest.raises(FreenessError) as info:
        quotient_bundle(P, Zd, lambda p, z: p, lambda F, phi: F)
    assert info.value.witness == (0, 1)


@pytest.mark.parametrize("G", [cyclic(3), klein(), symmetric(3)])
def test_p1_is_principal(G):
    b = example_p1(G)
    assert check_principal_axioms(b).ok and check_orbit_composition(b).ok
    assert len(b.B.objects) == 3


def test_merged_p1_fails_transitivity_with_witness():
    rep = check_principal_axioms(example_p1(Z4, merge=True))
    assert "transitive_obj" in rep.failures
    p, q = rep.failures["transitive_obj"]
    assert p[0] != q[0]


@pytest.mark.parametrize("G", [cyclic(2), cyclic(3), klein()])
def test_p2_tree_bundle(G):
    b = example_p2(G)
    assert check_category(b.P).ok and check_category(b.B).ok
    assert check_principal_axioms(b).ok


def test_tree_transport_is_functorial():
    G = symmetric(3)
    T = tree_transport(G, [1, 4, 3])
    for x, y, z in itertools.product(range(4), repeat=3):
        assert T[x, z] == G.multiply(T[y, z], T[x, y])
    assert all(T[x, x] == G.identity() for x in range(4))


@pytest.mark.parametrize("cm", [z4_to_z2_module(), z2_inversion_module(), s3_conjugation_module()],
                         ids=lambda cm: cm.name)
def test_decorated_fixture_and_reduction(cm):
    edges = [cm.G.elements[-1], cm.G.elements[1 % cm.G.order]]
    b0, b1 = decorated_fixture(cm, edges)
    assert check_category(b0.P).ok and check_category(b1.P).ok
    assert check_principal_axioms(b0).ok
    assert check_principal_axioms(b1).ok
    assert check_reduction(b0, b1, *reduction_maps(cm)).ok
    broken = check_reduction(b0, b1, *reduction_maps(cm, broken=True))
    assert "equivariant_obj" in broken.failures


@pytest.mark.parametrize("cm", [z4_to_z2_module(), z2_inversion_module(), s3_conjugation_module(),
                                finite_conjugation_module(klein())], ids=lambda cm: cm.name)
def test_crossed_round_trips(cm):
    cg = categorical_group_from_crossed_module(cm)
    assert check_categorical_group(cg).ok
    assert check_crossed_round_trip(cm).ok


def test_words():
    assert reduce_word((1, 2, -2, -1, 3)) == (3,)
    assert word_product((1, 2), (-2, 3)) == (1, 3)
    assert word_inverse((1, -2, 3)) == (-3, 2, -1)
    with pytest.raises(DomainError):
        reduce_word((1, 0))


letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(reduce_word)


@given(letters, letters, letters)
def test_free_group_laws(u, v, w):
    assert word_product(word_product(u, v), w) == word_product(u, word_product(v, w))
    assert word_product(u, word_inverse(u)) == ()
    assert word_product((), u) == u == reduce_word(u)


@given(st.sampled_from([(4, [0, 2]), (6, [0, 3]), (6, [0, 2, 4]), (8, [0, 4])]))
def test_cyclic_quotients_have_full_fibers(case):
    n, Z = case
    b = cg2_bundle(cyclic(n), Z)
    sizes = {}
    for p, base in b.proj_obj.items():
        sizes[base] = sizes.get(base, 0) + 1
    assert set(sizes.values()) == {len(Z)}
