import numpy as np
import pytest
from hypothesis import given, strategies as st

from catransport import fixtures as fx
from catransport.catalog import get_scenario, poly_two_form
from catransport.errors import GridError
from catransport.forms import zero_two_form
from catransport.groups import AdditiveGroup, so2, so3
from catransport.lie_ode import solve_left_ode, w_C, w_C0, w_path
from catransport.paths import sample_surface, vertical_compose

C2 = poly_two_form(3, [((0, 0), [0.4, -0.2, 0.3]), ((1, 0), [0.0, 0.5, 0.1]), ((0, 1), [0.2, 0.0, -0.3])])


def stacked(M=20, N=30):
    a = fx.sampled_surface(M, N)
    b = sample_surface(lambda s, t: fx.surface(1 + s, t), M // 2, N, s_duration=0.5)
    return a, b


def test_zero_rhs():
    w = solve_left_ode(so3(), np.zeros((10, 3)))
    assert np.all(w == np.eye(3))


def test_constant_rhs_telescopes():
    G = so3()
    X = np.array([0.3, -0.7, 1.1])
    L, N = 2.0, 64
    w = solve_left_ode(G, np.tile(X, (N, 1)), step=L / N)
    assert np.max(np.abs(w[-1] - G.exp(L * X))) < 1e-12


def test_commuting_rhs_second_order():
    G = so2()
    L = 1.5
    errs = []
    for N in (50, 100, 200):
        h = L / N
        mid = (np.arange(N) + 0.5) * h
        w = solve_left_ode(G, np.cos(mid)[:, None], step=h)
        errs.append(np.max(np.abs(w[-1] - G.exp(np.array([np.sin(L)])))))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4.0) < 0.6)


@given(st.integers(1, 39))
def test_restart_is_bit_exact(k):
    G = so3()
    rhs = np.random.default_rng(0).standard_normal((40, 3))
    full = solve_left_ode(G, rhs, step=0.05)
    tail = solve_left_ode(G, rhs[k:], step=0.05, initial=full[k])
    np.testing.assert_array_equal(tail, full[k:])


def test_restart_additive_bit_exact():
    A = AdditiveGroup(3)
    rhs = np.random.default_rng(1).standard_normal((30, 3))
    full = solve_left_ode(A, rhs, step=0.1)
    np.testing.assert_array_equal(solve_left_ode(A, rhs[11:], step=0.1, initial=full[11]), full[11:])


def test_left_translation_covariance():
    G = so3()
    rng = np.random.default_rng(2)
    rhs, h = rng.standard_normal((40, 3)), G.random(rng)
    w = solve_left_ode(G, rhs, step=0.05)
    wh = solve_left_ode(G, rhs, step=0.05, initial=h)
    assert np.max(np.abs(wh - h @ w)) < 1e-14


def test_batched_solve_matches_loop():
    G = so3()
    rhs = np.random.default_rng(3).standard_normal((4, 25, 3))
    batch = solve_left_ode(G, rhs, step=0.04)
    for i in range(4):
        np.testing.assert_array_equal(batch[i], solve_left_ode(G, rhs[i], step=0.04))


def test_w_C_zero_form_and_constant_surface():
    H = so3()
    assert np.array_equal(w_C(H, zero_two_form(2, 3), fx.sampled_surface(10, 12)), np.eye(3))
    flat = sample_surface(lambda s, t: fx.curve(t) + 0 * s[..., None], 10, 12)
    assert np.array_equal(w_C(H, C2, flat), np.eye(3))


def test_w_C_composition_law():
    H = so3()
    a, b = stacked()
    ab = vertical_compose(a, b)
    assert H.distance(w_C(H, C2, ab), w_C(H, C2, a) @ w_C(H, C2, b)) <= 1e-12


def test_w_C_grid_error():
    with pytest.raises(GridError):
        w_C(so3(), C2, fx.sampled_surface(1, 10))
    with pytest.raises(GridError):
        w_C(so3(), C2, fx.sampled_surface(10, 1))


def test_w_C0_reduces_and_composes():
    scn = get_scenario("so3_conj")
    H = so3()
    a, b = stacked()
    ab = vertical_compose(a, b)
    ident = lambda row: H.identity()
    assert H.distance(w_C0(H, C2, a, ident), w_C(H, C2, a)) == 0.0
    w0 = lambda row: w_path(H, scn.c, row)
    lhs = w_C0(H, C2, ab, w0)
    assert H.distance(lhs, w_C0(H, C2, a, w0) @ w_C0(H, C2, b, w0)) <= 1e-12
    flat = sample_surface(lambda s, t: fx.curve(t) + 0 * s[..., None], 10, 12)
    assert H.distance(w_C0(H, C2, flat, w0), H.identity()) < 1e-15


def test_w_path_constant_form_closed_form():
    from catransport.catalog import poly_one_form
    G = so3()
    c = poly_one_form(3, [(0, (0, 0), [0.2, 0.1, -0.3])])
    seg = fx.sampled_curve(50, f=fx.line)
    # straight segment along x1 of length 0.8: w = exp(-0.8 c(e1))
    assert G.distance(w_path(G, c, seg), G.exp(-0.8 * np.array([0.2, 0.1, -0.3]))) < 1e-12
