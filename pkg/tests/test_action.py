import numpy as np
import pytest

from oracles import action_green
from trapeze import (TrapezoidClass, action, almost_elegant_action, capping_path, capping_path_general,
                     elegant_action, find_inscriptions)
from trapeze import fixtures as F
from trapeze.action import winding_number
from trapeze.errors import WrongKind
from trapeze.inscribe import ALMOST, ELEGANT


def _cases():
    fl = F.fig4_left()
    return [("ellipse", F.ellipse(), 0.25, 1.0), ("quartic", F.quartic_oval(), 0.3, 2.0),
            ("limacon", F.limacon(), 0.25, 2.5), ("fig4_left", fl[0]) + fl[1]]


@pytest.mark.parametrize("name,curve,r,theta", _cases(), ids=[c[0] for c in _cases()])
def test_action_matches_dense_green_integral(name, curve, r, theta):
    ins = [q for q in find_inscriptions(curve, TrapezoidClass(r, theta)) if q.kind in (ELEGANT, ALMOST)]
    assert ins
    for q in ins[:4]:
        path = capping_path(curve, q)
        ref = action_green(curve, q, path.lift1, path.lift2, n=20000)
        got = action(curve, q, path).value
        assert abs(got - ref) < 1e-6 * curve.area


def test_general_capping_agrees_mod_area():
    curve, (r, theta) = F.fig4_left()
    for q in find_inscriptions(curve, TrapezoidClass(r, theta))[:10]:
        a = action(curve, q).value
        b = action(curve, q, capping_path_general(curve, q)).value
        k = (a - b) / curve.area
        assert abs(k - round(k)) < 1e-9


def test_general_capping_has_the_requested_winding_and_avoids_the_diagonal():
    curve = F.limacon()
    q = find_inscriptions(curve, TrapezoidClass(0.3, 2.0))[0]
    for k in (-1, 0, 2):
        path = capping_path_general(curve, q, k)
        assert path.winding == k
        assert path.min_separation > 0


def test_area_forms_need_the_right_kind():
    curve, (r, theta) = F.fig4_left()
    ins = find_inscriptions(curve, TrapezoidClass(r, theta))
    al = next(q for q in ins if q.kind == ALMOST)
    with pytest.raises(WrongKind):
        elegant_action(curve, al)
    el = find_inscriptions(F.ellipse(), TrapezoidClass(0.25, 1.0))[0]
    with pytest.raises(WrongKind):
        almost_elegant_action(F.ellipse(), el)


def test_cone_terms():
    curve = F.ellipse()
    q = find_inscriptions(curve, TrapezoidClass(0.25, 1.0))[0]
    v = elegant_action(curve, q)
    L = q.diag_length
    assert abs(v.A1 - 0.5 * 1.0 * 0.25 ** 2 * L ** 2) < 1e-14
    assert abs(v.A2 - 0.5 * 1.0 * 0.75 ** 2 * L ** 2) < 1e-14
    assert abs(v.hamiltonian_term - (0.75 * v.A1 + 0.25 * v.A2)) < 1e-14


def test_winding_number_of_sampled_loops():
    t = np.linspace(0, 1, 401)
    p1 = np.exp(2j * np.pi * t)
    assert winding_number(p1, np.zeros_like(p1)) == 1
    assert winding_number(p1 ** 2, np.zeros_like(p1)) == 2
    assert winding_number(p1 + 3, np.zeros_like(p1)) == 0
    assert winding_number(np.conj(p1), np.zeros_like(p1)) == -1


def test_square_in_circle():
    # r = 1/2, theta = pi/2: both flow arcs run along the circle itself, so the
    # arc regions vanish and the action is the cone term pi/4
    c = F.circle()
    q = find_inscriptions(c, TrapezoidClass(0.5, np.pi / 2), grid_n=64)[0]
    v = elegant_action(c, q)
    assert v.A1 == pytest.approx(np.pi / 4) and v.A2 == pytest.approx(np.pi / 4)
    assert abs(v.A3) < 1e-12 and abs(v.A4) < 1e-12
    path = capping_path(c, q)
    assert action_green(c, q, path.lift1, path.lift2) == pytest.approx(np.pi / 4, abs=1e-7)
