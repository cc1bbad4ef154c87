import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from catransport import fixtures as fx
from catransport.errors import CompositionError, DomainError, GridError, NotABacktrackError
from catransport.paths import (BacktrackWindow, SampledPath, SampledSurface, canonicalize_identity, compose_paths,
                               constant_path, detect_backtracks, erase_backtrack, insert_backtrack, read_path_csv,
                               reparametrize, reverse_path, sample_path, sample_surface, vertical_compose,
                               write_path_csv)

STEP = 0.05


def point_arrays(min_n=2, max_n=12):
    return st.integers(min_n, max_n).flatmap(
        lambda n: arrays(np.float64, (n + 1, 2), elements=st.floats(-5, 5, allow_subnormal=False)))


def as_path(pts):
    return SampledPath(pts, STEP * (len(pts) - 1))


def chain(f, pts):
    """Path through ``pts`` translated to start where ``f`` ends."""
    return as_path(pts - pts[0] + f.points[-1])


def circle(t):
    return np.stack([np.cos(np.pi * t / 2), np.sin(np.pi * t / 2)], axis=-1)


def test_compose_constant_paths():
    x = np.array([0.3, -0.1])
    p = compose_paths(constant_path(x, 4, 0.1), constant_path(x, 6, 0.1))
    assert p.N == 10 and abs(p.duration - 1.0) < 1e-15
    assert np.all(p.points == x)


def test_compose_identity_collapses():
    f = fx.sampled_curve(40)
    ident = constant_path(f.end, 10, f.step, margin=f.margin)
    g = canonicalize_identity(compose_paths(f, ident))
    np.testing.assert_array_equal(g.points, canonicalize_identity(f).points)


def test_quarter_arcs_make_half_circle():
    a = sample_path(circle, 50)
    b = sample_path(lambda t: circle(t + 1.0), 50)
    h = sample_path(circle, 100, duration=2.0)
    assert np.max(np.abs(compose_paths(a, b).points - h.points)) < 1e-12


def test_compose_errors():
    a = sample_path(circle, 50)
    with pytest.raises(GridError):
        compose_paths(a, sample_path(lambda t: circle(t + 1.0), 40))
    with pytest.raises(CompositionError) as err:
        compose_paths(a, sample_path(lambda t: circle(t + 1.5), 50))
    assert err.value.distance > 0.1


@given(point_arrays(), point_arrays(), point_arrays())
def test_compose_associative(p, q, r):
    f = as_path(p)
    g = chain(f, q)
    h = chain(g, r)
    left = compose_paths(compose_paths(f, g), h)
    right = compose_paths(f, compose_paths(g, h))
    np.testing.assert_array_equal(left.points, right.points)


@given(point_arrays(), point_arrays())
def test_reverse_anti_homomorphism(p, q):
    f = as_path(p)
    g = chain(f, q)
    np.testing.assert_array_equal(reverse_path(compose_paths(f, g)).points,
                                  compose_paths(reverse_path(g), reverse_path(f)).points)


@given(point_arrays())
def test_reverse_involution(p):
    f = as_path(p)
    np.testing.assert_array_equal(reverse_path(reverse_path(f)).points, f.points)


def test_reverse_segment():
    seg = sample_path(lambda t: np.stack([t, 0 * t], axis=-1), 10)
    r = reverse_path(seg)
    for i in range(11):
        np.testing.assert_array_equal(r.points[i], seg.points[10 - i])
    c = constant_path([1.0, 2.0], 5, 0.1)
    np.testing.assert_array_equal(reverse_path(c).points, c.points)


def test_reparametrize_identity_grid():
    p = fx.sampled_curve(50)
    np.testing.assert_array_equal(reparametrize(p, p.times).points, p.points)


def test_reparametrize_affine_interpolation_error_is_second_order():
    errs = []
    for N in (50, 100, 200):
        p = sample_path(fx.curve, N)
        u = np.linspace(0, 1, 2 * N + 1)
        phi = u.copy()  # affine refinement: twice as many samples
        q = reparametrize(p, phi)
        errs.append(np.max(np.abs(q.points - fx.curve(u))))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 2.0) < 0.3)


def test_reparametrize_smoothstep_endpoints_exact():
    p = fx.sampled_curve(40)
    q = reparametrize(p, fx.smoothstep(np.linspace(0, 1, 61)))
    np.testing.assert_array_equal(q.points[0], p.points[0])
    np.testing.assert_array_equal(q.points[-1], p.points[-1])


def test_reparametrize_rejects_non_monotone():
    p = fx.sampled_curve(20)
    phi = np.linspace(0, 1, 21)
    phi[5], phi[6] = phi[6], phi[5]
    with pytest.raises(DomainError):
        reparametrize(p, phi)


def _spur(p, at, n, direction=(0.3, 0.8), length=0.2):
    return SampledPath(p.points[at] + np.outer(np.linspace(0, length, n + 1), direction), n * p.step)


def test_insert_zero_length_spur_is_erasable():
    p = fx.sampled_curve(40)
    q, w = insert_backtrack(p, 17, p.points[17:18])
    assert w.half == 0
    np.testing.assert_array_equal(erase_backtrack(q, w).points, p.points)


def test_insert_detect_erase_round_trip():
    p = sample_path(lambda t: np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], -1), 64)
    q, w = insert_backtrack(p, 20, _spur(p, 20, 10))
    assert detect_backtracks(q) == [w]
    np.testing.assert_array_equal(erase_backtrack(q, w).points, p.points)
    assert abs(erase_backtrack(q, w).duration - p.duration) < 1e-12


def test_insert_junction_mismatch():
    p = fx.sampled_curve(40)
    with pytest.raises(CompositionError):
        insert_backtrack(p, 10, _spur(p, 11, 4))


def test_palindrome_erases_to_constant():
    d = sample_path(fx.curve, 20)
    p = compose_paths(d, reverse_path(d))
    w = BacktrackWindow(0, 20)
    e = erase_backtrack(p, w)
    assert e.N == 0 and np.array_equal(e.points[0], d.points[0])


def test_nested_backtracks_erase_in_two_passes():
    p = fx.sampled_curve(40)
    q, w1 = insert_backtrack(p, 15, _spur(p, 15, 6))
    # second spur at the tip of the first one
    tip = w1.start + w1.half
    q2, w2 = insert_backtrack(q, tip, _spur(q, tip, 4, direction=(-0.7, 0.2), length=0.1))
    once = erase_backtrack(q2, w2)
    np.testing.assert_array_equal(once.points, q.points)
    windows = detect_backtracks(once)
    assert windows == [w1]
    np.testing.assert_array_equal(erase_backtrack(once, windows[0]).points, p.points)


def test_erase_rejects_non_mirror_window():
    p = fx.sampled_curve(40)
    with pytest.raises(NotABacktrackError) as err:
        erase_backtrack(p, BacktrackWindow(10, 3))
    assert err.value.violation > 1e-9


def test_detect_injective_and_constant():
    assert detect_backtracks(sample_path(circle, 30)) == []
    assert detect_backtracks(constant_path([0.0, 1.0], 10, 0.1)) == []


def test_backtrack_window_from_times():
    assert BacktrackWindow.from_times(0.5, 0.2, 0.1) == BacktrackWindow(5, 2)
    with pytest.raises(GridError):
        BacktrackWindow.from_times(0.55, 0.2, 0.1)


@given(point_arrays(3, 10), point_arrays(3, 10), st.integers(1, 5))
def test_erasure_commutes_with_composition(p, q, k):
    f = as_path(p)
    at = len(p) // 2
    spur = SampledPath(f.points[at] + np.outer(np.arange(k + 1), [0.5, 0.25]), k * STEP)
    fb, w = insert_backtrack(f, at, spur)
    g = chain(fb, q)
    lhs = compose_paths(erase_backtrack(fb, w), g)
    rhs = erase_backtrack(compose_paths(fb, g), w)
    np.testing.assert_array_equal(lhs.points, rhs.points)


def test_canonicalize_constant():
    c = canonicalize_identity(constant_path([1.0, 1.0], 30, 0.1, margin=3))
    assert c.N == 6 and c.margin == 3


def test_canonicalize_trims_long_tail():
    p = fx.sampled_curve(40)  # margin 4
    tail = constant_path(p.end, 20, p.step, margin=p.margin)
    q = canonicalize_identity(compose_paths(p, tail))
    np.testing.assert_array_equal(q.points, p.points)
    np.testing.assert_array_equal(canonicalize_identity(p).points, p.points)


def test_margin_invariant_enforced():
    with pytest.raises(GridError):
        SampledPath(np.arange(12.0).reshape(6, 2), 1.0, margin=2)


def test_margins_preserved_by_operations():
    p = fx.sampled_curve(40)
    for q in (reverse_path(p), compose_paths(p, fx.sampled_curve(40, f=lambda t: fx.curve(t) - fx.curve(0) + p.end))):
        assert q.margin >= fx.margin_cells(40)


def test_csv_round_trip(tmp_path):
    p = fx.sampled_curve(16).with_fiber(np.tile(np.eye(2), (17, 1, 1)))
    write_path_csv(p, tmp_path / "p.csv")
    text = (tmp_path / "p.csv").read_bytes()
    assert text.startswith(b"t,x1,x2,g11,g12,g21,g22\n") and b"\r" not in text
    q = read_path_csv(tmp_path / "p.csv")
    np.testing.assert_array_equal(q.points, p.points)
    np.testing.assert_array_equal(q.fiber, p.fiber)


def test_csv_rejects_non_uniform(tmp_path):
    (tmp_path / "bad.csv").write_text("t,x1\n0,0\n0.1,1\n0.3,2\n")
    with pytest.raises(GridError):
        read_path_csv(tmp_path / "bad.csv")


def test_vertical_compose_and_rows():
    s1 = sample_surface(fx.surface, 4, 10)
    s2 = sample_surface(lambda s, t: fx.surface(1 + s, t), 2, 10, s_duration=0.5)
    s = vertical_compose(s1, s2)
    assert s.M == 6 and abs(s.s_duration - 1.5) < 1e-15
    np.testing.assert_array_equal(s.row(4).points, s1.target().points)
    with pytest.raises(GridError):
        vertical_compose(s1, sample_surface(lambda s, t: fx.surface(1 + s, t), 2, 12, s_duration=0.5))
    with pytest.raises(CompositionError):
        vertical_compose(s1, sample_surface(lambda s, t: fx.surface(2 + s, t), 2, 10, s_duration=0.5))
    assert isinstance(s, SampledSurface)
