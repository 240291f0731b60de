import numpy as np
import pytest

from trapeze import (TrapezoidClass, check_triangle, continue_branch, elegance_threshold,
                     find_inscriptions, l2_proxy, max_turn_angle, quadrisecant_duality,
                     shrinkout_limits, spectrum, vertex_check)
from trapeze import fixtures as F
from trapeze.errors import MismatchedQuadrisecants, SeedInvalid
from trapeze.spectral import SpectralProxy, match_shrinkout


def _seed(curve, r, theta, k=0):
    return find_inscriptions(curve, TrapezoidClass(r, theta), grid_n=64)[k]


def test_circle_rectangles_keep_the_diameter():
    c = F.circle()
    br = continue_branch(c, 0.5, 1.0, np.pi - 1e-6, _seed(c, 0.5, 1.0))
    assert br.limit["type"] == "RangeEnd"
    assert np.max(np.abs(br.diags - 2.0)) < 1e-9


def test_circle_shrinks_out_at_a_quarter_of_the_area():
    c = F.circle()
    br = continue_branch(c, 0.25, np.pi / 2, np.pi, _seed(c, 0.25, np.pi / 2))
    assert br.limit["type"] == "Shrinkout"
    assert abs(br.limit["limit_action"] - np.pi / 4) < 1e-5
    assert match_shrinkout(c, 0.25, br.limit["limit_action"]) == pytest.approx(np.pi / 4)


def test_branch_respects_the_variation_bound():
    c = F.ellipse()
    br = continue_branch(c, 0.25, 0.5, 2.5, _seed(c, 0.25, 0.5))
    assert not [f for f in br.flags if f.startswith("variation")]
    bound = 2 * 0.25 * 0.75 * c.radius ** 2
    slopes = np.abs(np.diff(br.actions) / np.diff(br.thetas))
    assert np.all(slopes <= bound + 1e-9)


def test_stops_are_hit_exactly():
    c = F.ellipse()
    stops = [0.7, 1.1, 1.9]
    br = continue_branch(c, 0.25, 0.5, 2.0, _seed(c, 0.25, 0.5), stops=stops)
    for t in stops:
        assert np.min(np.abs(br.thetas - t)) == 0.0


def test_zero_length_range():
    c = F.ellipse()
    br = continue_branch(c, 0.25, 1.0, 1.0, _seed(c, 0.25, 1.0))
    assert br.limit["type"] == "RangeEnd" and len(br.samples) == 1


def test_seed_must_solve_the_start_class():
    c = F.ellipse()
    with pytest.raises(SeedInvalid):
        continue_branch(c, 0.25, 1.5, 2.0, _seed(c, 0.25, 1.0))


def test_vertex_check_on_the_ellipse():
    c = F.ellipse()
    for q in find_inscriptions(c, TrapezoidClass(0.25, np.pi / 2)):
        br = continue_branch(c, 0.25, np.pi / 2, np.pi, q)
        rep = vertex_check(c, br)
        assert rep["passed"] and rep["nearest_root_distance"] < 1e-3
    with pytest.raises(ValueError):
        vertex_check(c, continue_branch(c, 0.25, 1.0, 1.2, _seed(c, 0.25, 1.0)))


def test_quadrisecant_pair_and_mismatch():
    c = F.fig6()
    brs = [continue_branch(c, 0.25, np.pi - 0.3, np.pi, q)
           for q in find_inscriptions(c, TrapezoidClass(0.25, np.pi - 0.3))]
    quads = [b for b in brs if b.limit["type"] == "Quadrisecant"]
    shr = [b for b in brs if b.limit["type"] == "Shrinkout"]
    rep = quadrisecant_duality(quads[0], quads[1], c)
    # the shared quadrisecant is the vertical line through both dimple points
    xs = np.array(quads[0].limit["vertices"]).real
    assert np.ptp(xs) < 1e-6
    assert rep["passed"] and rep["residual"] < 1e-9 * c.area
    with pytest.raises(MismatchedQuadrisecants):
        quadrisecant_duality(quads[0], shr[0], c)


def test_l2_proxy_on_the_circle():
    grid = np.pi * np.arange(1, 16) / 16
    px = l2_proxy(F.circle(), 0.25, grid)
    assert np.all(np.diff(px.l2_values) > 0)
    assert check_triangle(px)["passed"]
    # the shrinkout at pi is the last value
    full = l2_proxy(F.circle(), 0.25, np.append(grid, np.pi))
    assert abs(full.l2_values[-1] - np.pi / 4) < 1e-5


def test_triangle_check_finds_a_violation():
    grid = np.array([0.5, 1.0, 1.5])
    px = SpectralProxy(0.25, grid, np.array([0.1, 0.5, 0.6]), ["x"] * 3, 1.0, 1.0)
    rep = check_triangle(px)
    assert not rep["passed"] and rep["violations"][0]["k"] == 1


def test_spectrum_values_and_limits():
    c = F.ellipse()
    sp = spectrum(c, TrapezoidClass(0.25, 1.0), grid_n=64)
    assert len(sp.values) == 4
    assert shrinkout_limits(c, 0.25) == pytest.approx([0.0, 0.25 * c.area, 0.75 * c.area])


def test_turn_angle_and_threshold():
    # at r = 0 the turn angle is (pi - theta) / 2
    assert max_turn_angle(1e-12, 1.0) == pytest.approx((np.pi - 1.0) / 2)
    assert max_turn_angle(0.5, 1.0) == np.pi / 2
    t = elegance_threshold(0.25, 2.0)
    assert (1 - 0.5) * np.tan(t / 2) == pytest.approx(2.0)


def test_threshold_at_a_right_angle():
    # (1 - 2r) tan(theta/2) > K with r = 1/4, K = 1/2 reads tan(theta/2) > 1
    assert elegance_threshold(0.25, 0.5) == pytest.approx(np.pi / 2)
