"""Inscribed isosceles trapezoids in Jordan curves: solver, actions and spectral checks."""

from .action import action, almost_elegant_action, capping_path, capping_path_general, elegant_action
from .approx import MollifierKernel, lipschitz_constants, mollify, mollify_preserves, theorem_A_experiment
from .curves import FourierCurve, PolygonCurve, binormals, curve_from_dict, fourier_from_points, load_curve
from .errors import TrapezeError
from .inscribe import classify, find_inscriptions, width
from .spectral import (check_triangle, continue_branch, elegance_threshold, l2_proxy, max_turn_angle,
                       quadrisecant_duality, shrinkout_limits, spectrum, vertex_check)
from .trapezoid import TrapezoidClass, g_map, hamiltonian

__version__ = "0.1.0"
