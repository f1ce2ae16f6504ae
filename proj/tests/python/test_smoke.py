import math

import numpy as np
import pytest

import spectral_poisson as sp


def test_elliptic_and_bounds():
    assert sp.ellipk(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert sp.jacobi_dn(0.0, 0.5) == 1.0
    sharp, relaxed = sp.zolotarev_bound(5, 10.0)
    assert 0 < sharp <= relaxed < 1


def test_shifts_symmetric_intervals():
    p, q = sp.adi_shifts(-4.0, -1.0, 1.0, 4.0, eps=1e-8)
    assert len(p) == len(q) == sp.iteration_count("general", sp.cross_ratio_gamma(-4, -1, 1, 4), 1e-8)
    assert np.allclose(np.array(p), -np.array(q), rtol=1e-12)
    assert all(-4 <= v <= -1 for v in p)


def test_verify_bounds():
    info = sp.verify_bounds(32)
    assert info["contained"]
    assert -1.0 <= info["eigen"][0] <= info["eigen"][1] <= -info["delta"]


def test_square_bubble():
    f = np.zeros((16, 16))
    f[0, 0], f[0, 2], f[2, 0] = -2.0, 1.0, 1.0
    sol, rep = sp.solve_square(f, eps=1e-13)
    assert rep.solver == "square" and rep.iterations > 0
    assert abs(sol.X[0, 0] - 4.0 / 3) < 1e-10
    assert sol.evaluate(0.3, -0.2) == pytest.approx((1 - 0.09) * (1 - 0.04), abs=1e-12)
    assert sol.to_chebyshev().shape == (18, 18)


def test_square_from_samples():
    n = 24
    x = np.asarray(sp.cheb_points(n))
    X, Y = np.meshgrid(x, x)
    u = lambda x, y: (1 - x**2) * (1 - y**2) * np.exp(x)
    f = np.exp(X) * ((1 - X**2) - 4 * X - 2) * (1 - Y**2) - 2 * (1 - X**2) * np.exp(X)
    sol, _ = sp.solve_square(sp.cheb_transform_2d(f), eps=1e-13)
    assert abs(sol.evaluate(0.1, 0.7) - u(0.1, 0.7)) < 1e-10


def test_fd_adi_matches_dst():
    rng = np.random.default_rng(0)
    n = 32
    F = rng.standard_normal((n - 1, n - 1))
    xa, ra = sp.solve_fd(F, n, eps=1e-10, method="adi")
    xd, _ = sp.solve_fd(F, n, method="dst")
    assert np.linalg.norm(xa - xd) <= 1e-9 * np.linalg.norm(xd)
    assert ra.residual < 1e-8


def test_cylinder_polynomial():
    u = lambda r, t, z: (1 - r**2) * (1 - z**2)
    f = lambda r, t, z: -4 * (1 - z**2) - 2 * (1 - r**2)
    sol, rep = sp.solve_cylinder(f, 16, eps=1e-12)
    assert rep.solver == "cylinder"
    assert sol.evaluate(0.5, 1.0, 0.25) == pytest.approx(u(0.5, 1.0, 0.25), abs=1e-11)
    assert sol.evaluate_cartesian(0.0, 0.0, 0.0) == pytest.approx(1.0, abs=1e-11)


def test_cube_bubble():
    u = lambda x, y, z: (1 - x * x) * (1 - y * y) * (1 - z * z)

    def f(x, y, z):
        return -2 * ((1 - y * y) * (1 - z * z) + (1 - x * x) * (1 - z * z) + (1 - x * x) * (1 - y * y))

    coeffs = sp.cheb_coeffs_3d(sp.sample_cube(f, 6))
    sol, rep = sp.solve_cube(coeffs, eps=1e-10)
    assert rep.solver == "cube"
    assert sol.evaluate(0.2, -0.5, 0.7) == pytest.approx(u(0.2, -0.5, 0.7), abs=1e-8)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        sp.adi_shifts(1.0, 2.0, 0.0, 3.0)
    with pytest.raises(ValueError):
        sp.solve_fd(np.zeros((3, 3)), 4, method="fft")
    with pytest.raises(ValueError):
        sp.solve_cube(np.zeros((80, 6400)), eps=1e-8)
