import numpy as np
import pytest

from oracles import circumradius, unit_trapezoid
from trapeze import TrapezoidClass, g_map, hamiltonian
from trapeze.errors import DomainError
from trapeze.trapezoid import (diagonal_geometry, flow, g_map_matrix, real_jacobian,
                               symplectic_residual)

CLASSES = [(0.1, 0.3), (0.25, 1.0), (0.4, 2.5), (0.5, np.pi / 2)]


@pytest.mark.parametrize("r,theta", CLASSES)
def test_map_builds_the_reference_trapezoid(r, theta):
    z, zp, w, wp = unit_trapezoid(r, theta)
    u, v = g_map(TrapezoidClass(r, theta), z, w)
    assert abs(u - zp) < 1e-14 and abs(v - wp) < 1e-14


@pytest.mark.parametrize("r,theta", CLASSES)
def test_three_routes_agree(r, theta):
    rng = np.random.default_rng(1)
    z = rng.normal(size=50) + 1j * rng.normal(size=50)
    w = rng.normal(size=50) + 1j * rng.normal(size=50)
    cls = TrapezoidClass(r, theta)
    a = g_map(cls, z, w)
    b = g_map_matrix(cls, z, w)
    c = flow(cls, 1.0, z, w)
    for x, y in ((a, b), (a, c)):
        assert np.max(np.abs(x[0] - y[0])) < 1e-13
        assert np.max(np.abs(x[1] - y[1])) < 1e-13


def test_flow_keeps_the_hamiltonian():
    cls = TrapezoidClass(0.3, 2.0)
    z, w = 0.2 + 1j, -1.5 + 0.1j
    h0 = hamiltonian(cls, z, w)
    for t in np.linspace(0, 1, 7):
        assert abs(hamiltonian(cls, *flow(cls, t, z, w)) - h0) < 1e-14


def test_flow_derivative_is_the_hamiltonian_vector_field():
    # X with omega(X, .) = dH for omega = (1-r) dx1^dy1 + r dx2^dy2
    r, theta = 0.3, 1.3
    cls = TrapezoidClass(r, theta)
    z, w = 0.7 - 0.2j, -0.4 + 0.9j
    h = 1e-6
    z1, w1 = flow(cls, h, z, w)
    z0, w0 = flow(cls, -h, z, w)
    vz, vw = (z1 - z0) / (2 * h), (w1 - w0) / (2 * h)
    # dH/dz-bar style gradient: H = theta r (1-r) |z-w|^2 / 2
    gz = theta * r * (1 - r) * (z - w)
    gw = -gz
    # for weight c, omega(X, .) = dH gives X = -i grad / c (clockwise rotation)
    assert abs(vz - (-1j * gz / (1 - r))) < 1e-8
    assert abs(vw - (-1j * gw / r)) < 1e-8


def test_symplectic_residual_scalar_and_array():
    assert symplectic_residual(TrapezoidClass(0.2, 1.1)) < 1e-15
    r = np.array([0.1, 0.3, 0.5])
    th = np.array([0.2, 1.5, 3.0])
    res = symplectic_residual(r, th)
    assert res.shape == (3,) and np.all(res < 1e-15)
    assert real_jacobian(r, th).shape == (3, 4, 4)


def test_jacobian_is_the_linear_map():
    cls = TrapezoidClass(0.35, 0.8)
    jac = real_jacobian(cls)
    z, w = 0.3 - 0.6j, 1.2 + 0.25j
    u, v = g_map(cls, z, w)
    out = jac @ np.array([z.real, z.imag, w.real, w.imag])
    assert np.allclose(out, [u.real, u.imag, v.real, v.imag], atol=1e-15)


def test_diagonal_geometry_reads_back_the_class():
    r, theta = 0.2, 2.2
    z, zp, w, wp = unit_trapezoid(r, theta)
    geo = diagonal_geometry(r, z, zp, w, wp)
    assert abs(geo["t1"] - r) < 1e-14 and abs(geo["t2"] - r) < 1e-14
    assert abs(geo["angle"] - theta) < 1e-14
    assert abs(geo["len1"] - geo["len2"]) < 1e-15


def test_trapezoid_is_cyclic():
    z, zp, w, wp = unit_trapezoid(0.3, 1.7)
    assert abs(circumradius(z, zp, w) - circumradius(z, w, wp)) < 1e-13


@pytest.mark.parametrize("r,theta", [(0.0, 1.0), (0.6, 1.0), (0.3, 0.0), (0.3, np.pi), (-0.1, 1.0)])
def test_domain(r, theta):
    with pytest.raises(DomainError):
        TrapezoidClass(r, theta)


def test_limit_classes_allow_closed_range():
    assert TrapezoidClass.limit(0.25, np.pi).theta == np.pi
    assert TrapezoidClass.limit(0.25, 0.0).theta == 0.0
    with pytest.raises(DomainError):
        TrapezoidClass.limit(0.25, 3.5)
