import numpy as np
import pytest

from spherelets.datasets import sphere_sample
from spherelets.exceptions import (
    DimensionError,
    InsufficientDataError,
    SingularProjectionError,
)
from spherelets.numeric import principal_angles, sym_eig
from spherelets.spca import (
    fit_hyperplane,
    fit_sphere,
    optimal_offset,
    project_plane,
    project_sphere,
    reduce_to_plane,
    sphere_distance,
    sphere_fit_loss,
)


# -- hyperplane fit ----------------------------------------------------------


def test_fit_hyperplane_line():
    t = np.linspace(-1, 1, 9)
    X = np.column_stack([t, t])  # y = x
    plane = fit_hyperplane(X, 0)
    v = plane.frame[:, 0]
    assert np.allclose(np.abs(v), [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_fit_hyperplane_full_dimension_is_identity():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(20, 3))
    plane = fit_hyperplane(X, 2)  # d+1 = D
    x = rng.normal(size=3)
    assert np.allclose(project_plane(x, plane), x, atol=1e-10)


def test_fit_hyperplane_matches_eig_oracle():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(200, 4)) * np.array([5.0, 2.0, 1.0, 0.3])
    plane = fit_hyperplane(X, 1)
    Xc = X - X.mean(axis=0)
    oracle = sym_eig(Xc.T @ Xc).eigenvectors[:, :2]
    assert principal_angles(plane.frame, oracle).max() < 1e-10


def test_fit_hyperplane_errors():
    with pytest.raises(InsufficientDataError):
        fit_hyperplane(np.zeros((1, 3)), 1)
    with pytest.raises(DimensionError):
        fit_hyperplane(np.zeros((5, 2)), 2)  # d+1 = 3 > D = 2


# -- reduction ---------------------------------------------------------------


def test_reduce_fixes_points_in_subspace():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(30, 4))
    plane = fit_hyperplane(X, 1)
    Y = reduce_to_plane(X, plane)
    assert np.allclose(reduce_to_plane(Y, plane), Y, atol=1e-10)


def test_reduce_orthogonal_complement_maps_to_mean():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(30, 4))
    plane = fit_hyperplane(X, 1)
    w = rng.normal(size=4)
    w -= plane.frame @ (plane.frame.T @ w)  # orthogonal to the frame
    x = plane.mu + w
    assert np.allclose(project_plane(x, plane), plane.mu, atol=1e-10)


def test_reduce_residual_orthogonal_to_frame():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(25, 5))
    plane = fit_hyperplane(X, 1)
    resid = X - reduce_to_plane(X, plane)
    assert np.max(np.abs(resid @ plane.frame)) < 1e-10


# -- sphere fit --------------------------------------------------------------


def test_fit_sphere_symmetric_four_points():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    s, _ = fit_sphere(X, 1)
    assert np.allclose(s.center, [0.0, 0.0], atol=1e-12)
    assert np.isclose(s.radius, 1.0, atol=1e-12)


def test_fit_sphere_circumcircle():
    # circumcircle through three points, from perpendicular bisectors
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    s, diag = fit_sphere(X, 1)
    assert np.allclose(s.center, [0.5, 0.5], atol=1e-10)
    assert np.isclose(s.radius, np.sqrt(0.5), atol=1e-10)
    assert diag.geometric_mse < 1e-20


def test_fit_sphere_exact_recovery_r5():
    c = np.array([1.0, -2.0, 0.5, 3.0, -1.5])
    X = sphere_sample(50, 2, 5, c, 2.0, seed=9)
    s, _ = fit_sphere(X, 2)
    assert abs(s.radius - 2.0) < 1e-6 * 2.0
    assert np.linalg.norm(s.center - c) < 1e-6 * (1 + np.linalg.norm(c))


def test_fit_sphere_center_in_affine_subspace():
    # circle living in an offset plane: center must lie in mu + span(V)
    theta = np.linspace(0, 2 * np.pi, 24, endpoint=False)
    X = np.column_stack([np.cos(theta), np.sin(theta), np.full_like(theta, 2.5)])
    s, _ = fit_sphere(X, 1)
    assert np.allclose(s.center, [0.0, 0.0, 2.5], atol=1e-9)
    off = s.center - s.plane.mu
    out_of_plane = off - s.frame @ (s.frame.T @ off)
    assert np.linalg.norm(out_of_plane) <= 1e-8 * (1 + np.linalg.norm(s.center))


def test_fit_sphere_insufficient_data():
    with pytest.raises(InsufficientDataError):
        fit_sphere(np.zeros((2, 3)), 1)


def test_fit_sphere_degenerates_on_collinear_points():
    t = np.linspace(0, 1, 30)
    X = np.column_stack([t, 2 * t])
    s, diag = fit_sphere(X, 1)
    assert s.degenerate
    assert diag.h_condition > 1e12
    # degenerate projection delegates to the reduction plane
    x = np.array([0.5, 1.3])
    assert np.allclose(project_sphere(x, s), project_plane(x, s.plane), atol=1e-12)


def test_fit_sphere_rigid_motion_equivariance():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(40, 4)) * np.array([3.0, 2.0, 1.0, 0.5])
    s0, _ = fit_sphere(X, 1)
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    t = rng.normal(size=4)
    s1, _ = fit_sphere(X @ Q.T + t, 1)
    assert np.isclose(s1.radius, s0.radius, rtol=1e-8)
    assert np.linalg.norm(s1.center - (Q @ s0.center + t)) < 1e-8 * (1 + np.linalg.norm(s0.center))
    assert principal_angles(s1.frame, Q @ s0.frame).max() < 1e-8


def test_fit_sphere_similarity_scaling():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(35, 3)) * np.array([2.0, 1.0, 0.4])
    s0, _ = fit_sphere(X, 1)
    s1, _ = fit_sphere(3.5 * X, 1)
    assert np.isclose(s1.radius, 3.5 * s0.radius, rtol=1e-8)
    assert np.allclose(s1.center, 3.5 * s0.center, rtol=1e-8, atol=1e-10)


# -- algebraic loss stationarity ---------------------------------------------


def _fit_and_loss(seed):
    rng = np.random.default_rng(seed)
    X = sphere_sample(30, 1, 3, rng.uniform(-1, 1, 3), 2.0, seed=seed)
    X = X + rng.normal(0, 0.05, X.shape)
    s, _ = fit_sphere(X, 1)
    Y = reduce_to_plane(X, s.plane)
    f_hat = -2.0 * s.center
    return Y, f_hat, sphere_fit_loss(Y, f_hat)


def test_loss_gradient_vanishes_at_minimizer():
    Y, f_hat, g0 = _fit_and_loss(21)
    h = 1e-6
    grad = np.zeros(len(f_hat))
    for j in range(len(f_hat)):
        e = np.zeros(len(f_hat))
        e[j] = h
        grad[j] = (sphere_fit_loss(Y, f_hat + e) - sphere_fit_loss(Y, f_hat - e)) / (2 * h)
    assert np.linalg.norm(grad) <= 1e-6 * (1 + abs(g0))


def test_loss_perturbations_never_decrease():
    Y, f_hat, g0 = _fit_and_loss(22)
    rng = np.random.default_rng(100)
    for _ in range(100):
        delta = rng.normal(size=len(f_hat))
        delta *= 1e-3 / np.linalg.norm(delta)
        assert sphere_fit_loss(Y, f_hat + delta) >= g0 - 1e-9 * (1 + abs(g0))


def test_offset_stationarity():
    # db/dg = 0 at the closed-form optimal offset, by central differences
    Y, f_hat, _ = _fit_and_loss(23)
    b_hat = optimal_offset(Y, f_hat)
    h = 1e-6 * (1 + abs(b_hat))
    db = (sphere_fit_loss(Y, f_hat, b_hat + h) - sphere_fit_loss(Y, f_hat, b_hat - h)) / (2 * h)
    g0 = sphere_fit_loss(Y, f_hat, b_hat)
    assert abs(db) <= 1e-6 * (1 + abs(g0))


# -- sphere projection -------------------------------------------------------


def _unit_circle_r2():
    return fit_sphere(sphere_sample(40, 1, 2, 0.0, 1.0, seed=30), 1)[0]


def test_project_sphere_axis_point():
    s = _unit_circle_r2()
    assert np.allclose(project_sphere(np.array([2.0, 0.0]), s), [1.0, 0.0], atol=1e-9)


def test_project_sphere_345():
    s = _unit_circle_r2()
    assert np.allclose(project_sphere(np.array([3.0, 4.0]), s), [0.6, 0.8], atol=1e-9)


def test_project_sphere_r3_circle_beats_grid():
    theta = np.linspace(0, 2 * np.pi, 48, endpoint=False)
    circ = np.column_stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)])
    s, _ = fit_sphere(circ, 1)
    x = np.array([0.0, 2.0, 5.0])
    p = project_sphere(x, s)
    assert np.allclose(p, [0.0, 1.0, 0.0], atol=1e-9)
    grid_t = np.linspace(0, 2 * np.pi, 10_000, endpoint=False)
    grid = np.column_stack([np.cos(grid_t), np.sin(grid_t), np.zeros_like(grid_t)])
    assert np.linalg.norm(x - p) <= np.linalg.norm(grid - x, axis=1).min() + 1e-12


def test_project_sphere_output_on_sphere_and_idempotent():
    rng = np.random.default_rng(31)
    s, _ = fit_sphere(sphere_sample(50, 2, 4, rng.uniform(-1, 1, 4), 1.7, seed=31), 2)
    for _ in range(20):
        x = rng.uniform(-3, 3, 4)
        p = project_sphere(x, s)
        assert abs(np.linalg.norm(p - s.center) - s.radius) <= 1e-10 * s.radius
        assert np.allclose(project_sphere(p, s), p, atol=1e-10)


def test_project_sphere_singular_at_center():
    s = _unit_circle_r2()
    with pytest.raises(SingularProjectionError):
        project_sphere(s.center, s)


def test_project_sphere_dimension_mismatch():
    s = _unit_circle_r2()
    with pytest.raises(DimensionError):
        project_sphere(np.zeros(3), s)


def test_project_plane_trivial_and_idempotent():
    plane = fit_hyperplane(np.column_stack([np.linspace(0, 1, 10), np.zeros(10)]), 0)
    p = project_plane(np.array([3.0, 4.0]), plane)
    assert np.allclose(p, [3.0, 0.0], atol=1e-12)
    assert np.allclose(project_plane(p, plane), p, atol=1e-12)


# -- spherical distance ------------------------------------------------------


def test_sphere_distance_quarter_arc():
    s = _unit_circle_r2()
    d = sphere_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0]), s)
    assert np.isclose(d, np.pi / 2, atol=1e-9)


def test_sphere_distance_zero_and_antipodal():
    s = _unit_circle_r2()
    x = np.array([1.0, 0.0])
    assert sphere_distance(x, x, s) <= 1e-9
    assert np.isclose(sphere_distance(x, -x, s), np.pi, atol=1e-9)


def test_sphere_distance_clamps_roundoff():
    s = _unit_circle_r2()
    x = np.array([1.0, 0.0])
    # dot product fractionally above r^2 must clamp to distance 0
    y = x * (1.0 + 1e-12)
    assert sphere_distance(x, y, s) < 1e-5


def test_sphere_distance_degenerate_falls_back_to_euclidean():
    t = np.linspace(0, 1, 20)
    s, _ = fit_sphere(np.column_stack([t, 2 * t]), 1)
    assert s.degenerate
    x, y = np.array([0.0, 0.0]), np.array([3.0, 4.0])
    assert np.isclose(sphere_distance(x, y, s), 5.0)


# -- exact recovery sweep (module-level; the full 200-config run is in the
#    acceptance suite) ------------------------------------------------------


def test_exact_recovery_small_sweep():
    rng = np.random.default_rng(77)
    for d in (1, 2, 3):
        for D in (d + 1, min(d + 4, 10)):
            r = float(rng.uniform(0.5, 5.0))
            c = rng.uniform(-2, 2, D)
            seed = int(rng.integers(0, 2**31))
            X = sphere_sample(50, d, D, c, r, seed=seed)
            s, _ = fit_sphere(X, d)
            assert not s.degenerate
            assert abs(s.radius - r) < 1e-6 * r
            assert np.linalg.norm(s.center - c) < 1e-6 * (1 + np.linalg.norm(c))
            g = np.random.default_rng(seed)
            A = g.normal(size=(D, d + 1))
            V, R = np.linalg.qr(A)
            V = V * np.sign(np.diag(R))[None, :]
            assert principal_angles(s.frame, V).max() < 1e-6


def test_reduced_solve_matches_ambient_pseudoinverse_on_centered_data():
    # for mean-zero data the ambient normal equations solved with the
    # Moore-Penrose inverse (H^+ = V Lambda^-1 V') give the same center
    # as the reduced-coordinate solve
    rng = np.random.default_rng(55)
    X = sphere_sample(40, 1, 4, rng.uniform(-1, 1, 4), 1.8, seed=56)
    X = X + rng.normal(0, 0.03, X.shape)
    X = X - X.mean(axis=0)
    s, _ = fit_sphere(X, 1)
    Y = reduce_to_plane(X, s.plane)
    Yc = Y - Y.mean(axis=0)
    H = Yc.T @ Yc
    l = np.sum(Y * Y, axis=1)
    xi = Yc.T @ (l - l.mean())
    c_ambient = 0.5 * (np.linalg.pinv(H) @ xi)
    assert np.allclose(s.center, c_ambient, atol=1e-9)
