"""Groupoid operations on path representatives and Omega at the identity section."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpw.groupoid import (
    GlueError,
    GroupoidElementRep,
    arc_length_split,
    base_pairing,
    concatenate,
    flatten_rate,
    flatten_time,
    horizontal_constant,
    identity_element,
    invert,
    join_tangents,
    multiplicativity_residual,
    nondegeneracy_at_identity,
    omega_gram_at_identity,
    identity_section_checks,
    prop22_checks,
    unit_fiber_lift,
)
from tpw.pathspace import AlgebroidPath, Grid, PathTangent, anchor_residual_norm, momentum, omega, solve_base_path
from tpw.pathspace.sampling import (
    constraint_tangent,
    random_constraint_tangent,
    random_eta,
    random_generator,
    random_on_shell_path,
    random_path_from,
)
from tpw.tensorcalc import Model
from tpw.tensorcalc.fixtures import fixture

NAMES = ("M1", "M2", "M3")
GRID = Grid(200)


@pytest.fixture(scope="module")
def models():
    return {name: fixture(name) for name in NAMES}


def random_element(m, seed, grid=GRID):
    p, x0, eta = random_on_shell_path(m, np.random.default_rng(seed), grid)
    return GroupoidElementRep(p)


# identity and inversion


@pytest.mark.parametrize("name", NAMES)
def test_identity_elements(models, name):
    m = models[name]
    rng = np.random.default_rng(0)
    for point in m.sample_points(rng, 3):
        e = identity_element(point, GRID)
        assert np.array_equal(e.source, point) and np.array_equal(e.target, point)
        assert anchor_residual_norm(m, e.path) == 0.0
        assert momentum(m, random_generator(rng, m.n), e.path) == 0.0


def test_representatives_are_on_shell(models):
    p = AlgebroidPath(GRID, np.zeros((201, 2)), np.ones((201, 2)))
    with pytest.raises(ValueError):
        GroupoidElementRep(p)
    with pytest.raises(ValueError, match="exceeds"):
        GroupoidElementRep.from_path(models["M1"], p, 1e-6)
    q = solve_base_path(models["M1"], [0, 0], [1, 1], GRID)
    flagged = AlgebroidPath(GRID, q.X, q.eta)
    assert GroupoidElementRep.from_path(models["M1"], flagged, 1e-10).path.on_shell


def test_json_round_trip(models):
    g = random_element(models["M2"], 1)
    data = json.loads(json.dumps(g.to_json()))
    h = GroupoidElementRep.from_json(data)
    assert np.array_equal(h.path.X, g.path.X) and np.array_equal(h.source, g.source)
    data["source"] = [9.0, 9.0, 9.0]
    with pytest.raises(ValueError, match="source"):
        GroupoidElementRep.from_json(data)


def test_invert_identity_is_identity():
    e = identity_element([0.1, 0.2, 0.3], GRID)
    i = invert(e)
    assert np.array_equal(i.path.X, e.path.X) and np.array_equal(i.path.eta, e.path.eta)


@pytest.mark.parametrize("name", NAMES)
def test_invert_is_an_involution(models, name):
    g = random_element(models[name], 2)
    gg = invert(invert(g))
    assert np.array_equal(gg.path.X, g.path.X) and np.array_equal(gg.path.eta, g.path.eta)
    assert np.array_equal(invert(g).target, g.source) and np.array_equal(invert(g).source, g.target)


@pytest.mark.parametrize("name", NAMES)
def test_invert_keeps_anchor_residual(models, name):
    m = models[name]
    g = random_element(m, 3)
    assert anchor_residual_norm(m, invert(g).path) == pytest.approx(anchor_residual_norm(m, g.path), rel=1e-6, abs=1e-15)


def test_invert_m1_line(models):
    m = models["M1"]
    g = GroupoidElementRep(solve_base_path(m, [0.5, -0.5], [1, 2], GRID))
    i = invert(g)
    expected = np.array([0.5, -0.5]) + (1 - GRID.nodes[:, None]) * np.array([-2, 1])
    assert np.allclose(i.path.X, expected, atol=1e-13)
    assert anchor_residual_norm(m, i.path) <= 1e-12


# concatenation


def test_flattening_reparametrization():
    t = np.linspace(0, 1, 101)
    assert flatten_time(0.0) == 0.0 and flatten_time(1.0) == pytest.approx(1.0, abs=1e-16)
    assert np.all(np.diff(flatten_time(t)) > 0)
    assert flatten_rate(0.0) == 0.0 and abs(flatten_rate(1.0)) < 1e-15


@pytest.mark.parametrize("name", NAMES)
def test_endpoint_laws(models, name):
    g = random_element(models[name], 4)
    h = GroupoidElementRep(solve_base_path(models[name], g.source, random_eta(np.random.default_rng(5), g.source.size), GRID))
    gh = concatenate(g, h)
    assert np.array_equal(gh.target, g.target) and np.array_equal(gh.source, h.source)
    unit = concatenate(g, identity_element(g.source, GRID))
    assert np.array_equal(unit.target, g.target) and np.array_equal(unit.source, g.source)
    loop = concatenate(g, invert(g))
    assert np.array_equal(loop.target, g.target) and np.array_equal(loop.source, g.target)
    assert gh.grid.N == 400


def test_glue_tolerance(models):
    g = random_element(models["M2"], 6)
    h = identity_element(g.source + 1e-6, GRID)
    with pytest.raises(GlueError):
        concatenate(g, h)
    near = identity_element(g.source + 1e-10, GRID)
    assert np.array_equal(concatenate(g, near).source, near.source)


def test_split_must_leave_two_pieces(models):
    g = random_element(models["M1"], 7)
    with pytest.raises(ValueError):
        concatenate(g, identity_element(g.source, GRID), split=0.0)


def test_m1_two_segments_anchor_bound(models):
    m = models["M1"]
    g = GroupoidElementRep(solve_base_path(m, [0, 0], [1, 2], GRID))
    h = GroupoidElementRep(solve_base_path(m, g.source, [-1, 0.5], GRID))
    gh = concatenate(g, h)
    assert anchor_residual_norm(m, g.path) <= 1e-12 and anchor_residual_norm(m, h.path) <= 1e-12
    # X(s) = x0 + tau(2s) Delta on each half: the second-order stencils err by at most
    # h^2 |X'''| / 3 with |X'''| <= 32 pi^2 |Delta|
    delta = max(np.max(np.abs(g.source - g.target)), np.max(np.abs(h.source - h.target)))
    bound = 32 * np.pi**2 / 3 * gh.grid.h**2 * delta
    assert anchor_residual_norm(m, gh.path) <= bound
    assert np.array_equal(gh.target, [0, 0]) and np.array_equal(gh.source, h.source)


@pytest.mark.parametrize("name", NAMES)
def test_concatenation_stays_on_shell(models, name):
    m = models[name]
    g = random_element(m, 8)
    h = GroupoidElementRep(random_path_from(m, np.random.default_rng(9), g.source, GRID)[0])
    r = anchor_residual_norm(m, concatenate(g, h).path)
    r_fine = anchor_residual_norm(m, concatenate(g, h, intervals=800).path)
    assert r_fine < r / 3


def test_arc_length_split(models):
    m = models["M2"]
    g = random_element(m, 10)
    e = identity_element(g.source, GRID)
    assert arc_length_split(g, e) == 0.8
    assert arc_length_split(e, e) == 0.5
    s = arc_length_split(g, invert(g))
    assert s == pytest.approx(0.5)
    gh = concatenate(g, e, split=arc_length_split(g, e))
    assert np.array_equal(gh.target, g.target) and np.array_equal(gh.source, g.source)


# Omega at the identity section


def test_unit_fiber_lift(models):
    m = models["M1"]
    zero = unit_fiber_lift(m, [0, 0], [0, 0], GRID)
    assert not np.any(zero.xi) and not np.any(zero.e)
    R = unit_fiber_lift(m, [0.3, 0.4], [1, 0], GRID)
    t = GRID.nodes
    assert np.allclose(R.xi, np.stack([0 * t, t - 1], axis=1), atol=0)
    assert np.array_equal(R.e, np.tile([1.0, 0.0], (201, 1)))
    # tangent to the fiber of beta = X(1)
    assert not np.any(R.xi[-1])


@pytest.mark.parametrize("name", ("M1", "M2", "M3", "M4"))
def test_base_pairing(name):
    m = fixture(name)
    for point in m.sample_points(np.random.default_rng(11), 5):
        bp = base_pairing(m, point, GRID)
        assert np.max(np.abs(bp.gamma - m.pi_matrix_at(point))) <= 1e-10
        assert np.max(np.abs(bp.lambda_ - np.eye(m.n))) <= 1e-10


def test_base_pairing_m2_at_north_pole(models):
    bp = base_pairing(models["M2"], [0, 0, 1], GRID)
    expected = np.zeros((3, 3))
    expected[0, 1], expected[1, 0] = 1, -1
    assert np.allclose(bp.gamma, expected, atol=1e-12)


def test_step_one_pairing_value(models):
    # Omega_0 on two lifts is pi(m)(xi1, xi2)
    m = models["M3"]
    point = [0.2, -0.1, 0.3, 0.0]
    rng = np.random.default_rng(12)
    a, b = rng.normal(size=(2, 4))
    e = identity_element(point, GRID)
    value = omega(m, e.path, unit_fiber_lift(m, point, a, GRID), unit_fiber_lift(m, point, b, GRID))
    assert value == pytest.approx(a @ m.pi_matrix_at(point) @ b, abs=1e-10)


@pytest.mark.parametrize("name,tol", [("M1", 1e-10), ("M2", 1e-10), ("M3", 1e-6)])
def test_identity_section_checks(models, name, tol):
    m = models[name]
    point = m.points[0]
    out = identity_section_checks(m, point, Grid(400))
    assert prop22_checks is identity_section_checks
    assert set(out) == {"unit_pullback", "inversion", "orthogonality", "inverted_lifts"}
    assert max(out.values()) <= tol
    assert out["unit_pullback"] == 0.0


@pytest.mark.parametrize("name", NAMES)
def test_nondegeneracy(models, name):
    m = models[name]
    sigma = nondegeneracy_at_identity(m, m.points[0], GRID)
    assert sigma > 0.5
    gram = omega_gram_at_identity(m, m.points[0], GRID)
    assert np.allclose(gram, -gram.T, atol=1e-14)


def test_nondegeneracy_m1_value(models):
    # Gram matrix [[J, I], [-I, 0]]: singular values are the golden ratio and its inverse
    sigma = nondegeneracy_at_identity(models["M1"], [0, 0], GRID)
    assert sigma == pytest.approx((np.sqrt(5) - 1) / 2, abs=1e-12)


def test_nondegeneracy_without_pi():
    m = Model.build(3, {})
    assert nondegeneracy_at_identity(m, [0, 0, 0], GRID) == pytest.approx(1.0, abs=1e-12)


# multiplicativity


def test_multiplicativity_with_identity(models):
    # gluing on an identity only reparametrizes g, so the residual is the O(h^2)
    # error of the resampled quadrature; it reaches 1e-8 on fine grids
    m = models["M1"]
    residuals = []
    for N in (1600, 3200, 6400):
        grid = Grid(N)
        p, x0, eta = random_on_shell_path(m, np.random.default_rng(13), grid)
        g = GroupoidElementRep(p)
        rng = np.random.default_rng(14)
        u, v = (random_constraint_tangent(m, rng, x0, eta, grid) for _ in range(2))
        e = identity_element(g.source, grid)
        zero = PathTangent.zero(e.path)
        residuals.append(multiplicativity_residual(m, g, e, (u, zero), (v, zero)))
    orders = np.log2(np.array(residuals[:-1]) / np.array(residuals[1:]))
    assert np.all(orders >= 1.8)
    assert residuals[-1] <= 1e-8


def test_multiplicativity_m1_segments(models):
    m = models["M1"]
    g = GroupoidElementRep(solve_base_path(m, [0, 0], [1, 2], GRID))
    h = GroupoidElementRep(solve_base_path(m, g.source, [-1, 0.5], GRID))
    a = horizontal_constant([1, 0], GRID) + PathTangent(np.zeros((201, 2)), np.tile([0.0, 1.0], (201, 1)))
    b = horizontal_constant([0, 1], GRID)
    assert multiplicativity_residual(m, g, h, (a, b), (b, a)) <= 1e-6


def composable(m, seed, N):
    rng = np.random.default_rng(seed)
    grid = Grid(N)
    p, x0, eta = random_on_shell_path(m, rng, grid)
    g = GroupoidElementRep(p)
    eta2 = random_eta(rng, m.n)
    h = GroupoidElementRep(solve_base_path(m, g.source, eta2, grid))
    ug, vg = (random_constraint_tangent(m, rng, x0, eta, grid) for _ in range(2))
    uh = constraint_tangent(m, g.source, eta2, ug.xi[-1], random_eta(rng, m.n), grid)
    vh = constraint_tangent(m, g.source, eta2, vg.xi[-1], random_eta(rng, m.n), grid)
    return g, h, (ug, uh), (vg, vh)


def test_multiplicativity_m3(models):
    m = models["M3"]
    g, h, u, v = composable(m, 15, 400)
    assert multiplicativity_residual(m, g, h, u, v) <= 1e-4


@settings(max_examples=5, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_multiplicativity_second_order(seed):
    m = fixture("M2")
    r = [multiplicativity_residual(m, *composable(m, seed, N)) for N in (100, 200)]
    assert r[1] <= r[0] / 3.5 or r[1] <= 1e-12


def test_joined_tangents_follow_paths(models):
    m = models["M2"]
    g, h, u, v = composable(m, 16, 100)
    joined = join_tangents(g, h, u[0], u[1])
    assert np.array_equal(joined.xi[0], u[0].xi[0]) and np.array_equal(joined.xi[-1], u[1].xi[-1])
    assert joined.xi.shape == concatenate(g, h).path.X.shape
