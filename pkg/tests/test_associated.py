import numpy as np
import pytest
from hypothesis import given, strategies as st

from catransport import fixtures as fx
from catransport.associated import (Representation, TwistedClass, assoc_transport, check_assoc_transport,
                                    class_distance, matrix_representation, normalize_class)
from catransport.catalog import get_scenario
from catransport.decorated import cat_connection_lift_phi, undecorated_lifter
from catransport.experiments import _chained_paths


def test_normalize_moves_vector_to_identity_fiber():
    rep = matrix_representation(2)
    g = np.array([[0.0, -1.0], [1.0, 0.0]])
    c = normalize_class(rep, (np.array([0.5, 0.5]), g), np.array([1.0, 0.0]))
    np.testing.assert_array_equal(c.v, [0.0, 1.0])
    np.testing.assert_array_equal(c.x, [0.5, 0.5])


def test_class_distance():
    a = TwistedClass(np.zeros(2), np.array([1.0, 2.0]))
    b = TwistedClass(np.array([0.0, 0.25]), np.array([1.0, 1.5]))
    assert class_distance(a, b) == 0.5 and class_distance(a, a) == 0.0


def test_default_morphism_action_is_pair_action():
    scn = get_scenario("so2_r2")
    rep = matrix_representation(2)
    rng = np.random.default_rng(0)
    from catransport.crossed import Morphism2
    m = Morphism2(scn.H.random(rng), scn.G.random(rng))
    v, w = rng.normal(size=(2, 2))
    out = rep.act_mor(scn.cm, m, (v, w))
    np.testing.assert_allclose(out[0], scn.cm.source(m) @ v)
    np.testing.assert_allclose(out[1], scn.cm.target(m) @ w)


def test_flat_connection_keeps_vector():
    scn = get_scenario("flat")
    rep = matrix_representation(3)
    gam = fx.sampled_curve(40)
    cls = TwistedClass(gam.start, np.array([1.0, -2.0, 0.5]))
    out = assoc_transport(scn, rep, gam, cls)
    np.testing.assert_array_equal(out.v, cls.v)
    np.testing.assert_array_equal(out.x, gam.end)


def test_trivial_representation_keeps_vector():
    scn = get_scenario("so3_conj")
    rep = Representation(2, lambda g, v: np.asarray(v))
    gam = fx.sampled_curve(40)
    cls = TwistedClass(gam.start, np.array([3.0, 4.0]))
    out = assoc_transport(scn, rep, gam, cls, g=scn.G.exp(np.array([0.1, 0.2, 0.3])))
    np.testing.assert_array_equal(out.v, cls.v)


def test_transport_preserves_norm_for_orthogonal_action():
    scn = get_scenario("so3_conj")
    rep = matrix_representation(3)
    gam = fx.sampled_curve(60)
    cls = TwistedClass(gam.start, np.array([1.0, 2.0, 2.0]))
    assert abs(np.linalg.norm(assoc_transport(scn, rep, gam, cls).v) - 3.0) < 1e-12


@pytest.mark.parametrize("name", ["so2_r2", "so2_area", "so3_conj", "so3_r3", "double"])
def test_well_defined_and_functorial(name):
    scn = get_scenario(name)
    rep = matrix_representation(scn.G.identity().shape[0])
    rng = np.random.default_rng(5)
    g1, g2 = _chained_paths(rng, 80)
    for _ in range(5):
        cls = TwistedClass(g1.start, rng.normal(size=rep.dim))
        r = check_assoc_transport(scn, rep, g1, g2, cls, scn.G.random(rng))
        assert r["well_defined"] < 1e-11 and r["functoriality"] < 1e-11, r


@given(st.integers(0, 10_000))
def test_well_defined_property(seed):
    scn = get_scenario("so2_r2")
    rep = matrix_representation(2)
    rng = np.random.default_rng(seed)
    g1, g2 = _chained_paths(rng, 40)
    cls = TwistedClass(g1.start, rng.normal(size=2))
    r = check_assoc_transport(scn, rep, g1, g2, cls, scn.G.random(rng))
    assert max(r.values()) < 1e-11


@pytest.mark.parametrize("lifter", [undecorated_lifter, cat_connection_lift_phi])
def test_other_lifters_are_well_defined(lifter):
    scn = get_scenario("so3_conj")
    rep = matrix_representation(3)
    gam = fx.sampled_curve(50)
    cls = TwistedClass(gam.start, np.array([0.2, -1.0, 0.4]))
    a = assoc_transport(scn, rep, gam, cls, lifter=lifter)
    b = assoc_transport(scn, rep, gam, cls, g=scn.G.exp(np.array([0.7, -0.3, 0.1])), lifter=lifter)
    assert class_distance(a, b) < 1e-11
