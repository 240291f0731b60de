import json

import numpy as np
import pytest
from scipy.special import ellipe

from trapeze import PolygonCurve, binormals, curve_from_dict, fourier_from_points, load_curve
from trapeze import fixtures as F
from trapeze.errors import NonSimpleCurve
from trapeze.spectral import kappa_prime_roots


def test_circle_scalars():
    c = F.circle(2.0, 1 + 1j)
    assert abs(c.area - 4 * np.pi) < 1e-12
    assert abs(c.arc_length - 4 * np.pi) < 1e-10
    assert abs(c.diameter - 4) < 1e-10
    assert abs(c.radius - 2) < 1e-10
    assert abs(c.enclosing_radius() - 2) < 1e-6


def test_ellipse_scalars():
    a, b = 2.0, 1.0
    c = F.ellipse(a, b)
    assert abs(c.area - np.pi * a * b) < 1e-12
    assert abs(c.arc_length - 4 * a * ellipe(1 - (b / a) ** 2)) < 1e-10
    assert abs(c.diameter - 2 * a) < 1e-10


def test_square_scalars():
    sq = F.unit_square()
    assert abs(sq.area - 1) < 1e-15
    assert abs(sq.arc_length - 4) < 1e-15
    assert abs(sq.diameter - np.sqrt(2)) < 1e-12
    assert abs(sq.enclosing_radius() - np.sqrt(0.5)) < 1e-12


def test_quartic_oval_satisfies_its_equation():
    c = F.quartic_oval()
    p = c.sample(1000)
    resid = p.real ** 4 / 16 + p.imag ** 2 - 1
    assert np.max(np.abs(resid)) < 1e-10


def test_clockwise_polygon_is_reoriented():
    with pytest.warns(UserWarning, match="reversed"):
        sq = PolygonCurve([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert sq.area > 0 and sq.reversed_on_load


def test_bowtie_is_rejected():
    with pytest.raises(NonSimpleCurve):
        PolygonCurve([[0, 0], [1, 1], [1, 0], [0, 1]])


def test_self_touching_fourier_curve_is_rejected():
    # rho = 1 + b cos(phi) acquires an inner loop for b > 1
    with pytest.raises(NonSimpleCurve):
        F.limacon(1.5)


def test_projection_onto_circle():
    c = F.circle()
    s, d, _ = c.project(np.array([3.0 + 0j, 0.5j]))
    assert abs(s[0] % 1.0) < 1e-9 or abs(s[0] % 1.0 - 1) < 1e-9
    assert abs(s[1] - 0.25) < 1e-9
    assert abs(abs(d[0]) - 2) < 1e-9 and abs(abs(d[1]) - 0.5) < 1e-9
    assert np.sign(d[0]) == -np.sign(d[1])


def test_projection_onto_square():
    sq = F.unit_square()
    s, d, _ = sq.project(np.array([0.5 - 0.25j, 1.5 + 0.5j]))
    assert np.allclose(np.abs(d), [0.25, 0.5], atol=1e-12)
    assert np.allclose(sq.eval(s), [0.5, 1 + 0.5j], atol=1e-12)


def test_curvature_of_ellipse():
    c = F.ellipse(2.0, 1.0)
    # (a cos, b sin): kappa = a/b^2 at the end of the major axis, b/a^2 at the minor one
    assert abs(c.curvature(0.0) - 2.0) < 1e-10
    assert abs(c.curvature(0.25) - 0.25) < 1e-10


def test_curvature_derivative_roots_of_ellipse():
    roots = np.sort(kappa_prime_roots(F.ellipse()))
    assert len(roots) == 4
    assert np.allclose(roots, [0, 0.25, 0.5, 0.75], atol=1e-10)


def test_binormals_of_ellipse_are_the_axes():
    bn = binormals(F.ellipse(2.0, 1.0))
    lengths = sorted({round(b.length, 9) for b in bn}, reverse=True)
    assert np.allclose(lengths[:2], [4.0, 2.0], atol=1e-9)


def test_fourier_from_points_reproduces_a_circle():
    phi = 2 * np.pi * np.arange(64) / 64
    c = fourier_from_points(np.exp(1j * phi))
    p = c.sample(512)
    assert np.max(np.abs(np.abs(p) - 1)) < 1e-6


def test_dict_round_trip(tmp_path):
    for c in (F.ellipse(), F.unit_square()):
        d = c.to_dict()
        again = curve_from_dict(json.loads(json.dumps(d)))
        s = np.linspace(0, 1, 33)
        assert np.max(np.abs(again.eval(s) - c.eval(s))) < 1e-14
    path = tmp_path / "c.json"
    path.write_text(json.dumps(F.ellipse().to_dict()))
    assert abs(load_curve(path).area - 2 * np.pi) < 1e-12


def test_sample_kind():
    d = {"kind": "samples", "points": [[np.cos(t), np.sin(t)] for t in np.linspace(0, 2 * np.pi, 80)[:-1]]}
    c = curve_from_dict(d)
    assert abs(c.area - np.pi) < 1e-4


def test_fixture_corpus_is_simple_and_positive():
    for name, c in F.corpus().items():
        assert c.area > 0, name
        assert c.check_simple()


def test_circle_projection_sign_and_ambiguity():
    s, d, amb = F.circle().project(np.array([2.0 + 0j, 0j]))
    assert s[0] == pytest.approx(0.0, abs=1e-12) and d[0] == pytest.approx(1.0)
    assert d[1] == pytest.approx(-1.0) and amb[1] and not amb[0]


def test_circle_binormals_form_a_family():
    bn = binormals(F.circle())
    assert len(bn) == 1 and bn[0].family
    assert bn[0].length == pytest.approx(2.0, abs=1e-12)
