import numpy as np
import pytest
from scipy.special import sph_harm_y

from octaframe.sh3 import (
    REFERENCE,
    EulerAngles,
    basis_matrix,
    basis_values,
    compose_xyz,
    compose_zxz,
    eval_basis,
    evaluate,
    harmonic_from_so3,
    orthogonality_residual,
    rotate,
    rotation_x,
    rotation_x_quarter,
    rotation_y,
    rotation_z,
    semisymmetric_from_angles,
    so3_compose_xyz,
    so3_compose_zxz,
    so3_rotation_x,
    so3_rotation_y,
    so3_rotation_z,
    zxz_angles_from_so3,
)


def random_directions(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def scipy_real_sh(m, theta, phi):
    # real basis from the complex one: sqrt(2)*(-1)^m Re / Im for +/-m
    if m > 0:
        return np.sqrt(2.0) * (-1.0) ** m * sph_harm_y(3, m, theta, phi).real
    if m < 0:
        return np.sqrt(2.0) * (-1.0) ** m * sph_harm_y(3, -m, theta, phi).imag
    return sph_harm_y(3, 0, theta, phi).real


def test_basis_matches_scipy():
    rng = np.random.default_rng(0)
    v = random_directions(rng, 500)
    theta = np.arccos(np.clip(v[:, 2], -1.0, 1.0))
    phi = np.arctan2(v[:, 1], v[:, 0])
    ref = np.stack([scipy_real_sh(m, theta, phi) for m in range(-3, 4)], axis=1)
    ours = basis_matrix(v)
    assert np.abs(ref - ours).max() < 1e-13


def test_basis_orthonormal_under_sphere_quadrature():
    # product of two degree-3 basis functions has polynomial degree 6,
    # well inside the exactness range of this quadrature
    n_theta, n_phi = 32, 64
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    st = np.sin(tt)
    dirs = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=-1)
    vals = basis_matrix(dirs.reshape(-1, 3))
    weights = np.repeat(w, n_phi) * (2.0 * np.pi / n_phi)
    gram = vals.T @ (weights[:, None] * vals)
    assert np.abs(gram - np.eye(7)).max() < 1e-12


def test_eval_basis_pole_value():
    val = eval_basis(0, np.array([0.0, 0.0, 1.0]))
    assert abs(val - np.sqrt(7.0 / (16.0 * np.pi)) * 2.0) < 1e-15


def test_eval_basis_rejects_bad_index():
    with pytest.raises(ValueError):
        eval_basis(4, np.array([0.0, 0.0, 1.0]))


def test_basis_rejects_non_unit_direction():
    with pytest.raises(ValueError):
        basis_values(np.array([0.0, 0.0, 2.0]))


def test_evaluate_is_linear_in_coefficients():
    rng = np.random.default_rng(1)
    a = rng.normal(size=7)
    b = rng.normal(size=7)
    v = random_directions(rng, 1)[0]
    lhs = evaluate(2.0 * a - 3.0 * b, v)
    rhs = 2.0 * evaluate(a, v) - 3.0 * evaluate(b, v)
    assert abs(lhs - rhs) < 1e-12


def test_quarter_turn_fourth_power_is_identity():
    r = rotation_x_quarter()
    assert np.abs(np.linalg.matrix_power(r, 4) - np.eye(7)).max() < 1e-14


def test_rotation_z_periodic_and_orthogonal():
    rng = np.random.default_rng(2)
    for t in rng.uniform(-10.0, 10.0, size=20):
        r = rotation_z(t)
        assert orthogonality_residual(r) < 1e-13
        assert np.abs(rotation_z(t + 2.0 * np.pi) - r).max() < 1e-12


def test_generated_rotations_orthogonal():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        al, be, ga = rng.uniform(0.0, 2.0 * np.pi, size=3)
        worst = max(worst, orthogonality_residual(compose_zxz(al, be, ga)))
        worst = max(worst, orthogonality_residual(compose_xyz(al, be, ga)))
    assert worst < 1e-13


def test_coefficient_rotation_matches_function_rotation():
    # rotating coefficients by the 7x7 matrix must equal rotating the
    # evaluation point the opposite way by the matching 3x3 rotation
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=7)
        al, be, ga = rng.uniform(0.0, 2.0 * np.pi, size=3)
        r7 = compose_zxz(al, be, ga)
        q3 = so3_compose_zxz(al, be, ga)
        v = random_directions(rng, 1)[0]
        lhs = evaluate(rotate(a, r7), v)
        rhs = evaluate(a, q3.T @ v)
        worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-10


def test_axis_rotations_match_their_so3_partners():
    rng = np.random.default_rng(5)
    pairs = [
        (rotation_x, so3_rotation_x),
        (rotation_y, so3_rotation_y),
        (rotation_z, so3_rotation_z),
    ]
    for r7_of, q3_of in pairs:
        for t in rng.uniform(-np.pi, np.pi, size=10):
            a = rng.normal(size=7)
            v = random_directions(rng, 1)[0]
            lhs = evaluate(r7_of(t) @ a, v)
            rhs = evaluate(a, q3_of(t).T @ v)
            assert abs(lhs - rhs) < 1e-12


def test_so3_rotations_are_rotations():
    rng = np.random.default_rng(6)
    for t in rng.uniform(-np.pi, np.pi, size=10):
        for q in (so3_rotation_x(t), so3_rotation_y(t), so3_rotation_z(t)):
            assert np.abs(q @ q.T - np.eye(3)).max() < 1e-15
            assert abs(np.linalg.det(q) - 1.0) < 1e-14


def test_so3_rotation_axes_fixed():
    t = 0.7
    assert np.abs(so3_rotation_x(t) @ [1, 0, 0] - [1, 0, 0]).max() < 1e-15
    assert np.abs(so3_rotation_y(t) @ [0, 1, 0] - [0, 1, 0]).max() < 1e-15
    assert np.abs(so3_rotation_z(t) @ [0, 0, 1] - [0, 0, 1]).max() < 1e-15


def test_zxz_angle_extraction_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(200):
        q = so3_compose_zxz(*rng.uniform(0.0, 2.0 * np.pi, size=3))
        angles = zxz_angles_from_so3(q)
        assert np.abs(so3_compose_zxz(*angles) - q).max() < 1e-12


def test_zxz_angle_extraction_gimbal_cases():
    for alpha in (0.0, 0.3, 2.0, -1.1):
        q0 = so3_rotation_z(alpha)
        assert np.abs(so3_compose_zxz(*zxz_angles_from_so3(q0)) - q0).max() < 1e-12
        qpi = so3_rotation_z(alpha) @ so3_rotation_x(np.pi)
        assert np.abs(so3_compose_zxz(*zxz_angles_from_so3(qpi)) - qpi).max() < 1e-12


def test_harmonic_from_so3_round_trip():
    rng = np.random.default_rng(8)
    for _ in range(50):
        al, be, ga = rng.uniform(0.0, 2.0 * np.pi, size=3)
        q = so3_compose_xyz(al, be, ga)
        r_direct = compose_xyz(al, be, ga)
        r_via_q = harmonic_from_so3(q)
        assert np.abs(r_direct - r_via_q).max() < 1e-12


def test_compose_orders_agree_on_so3():
    # both 7x7 compositions must represent their own 3x3 composition
    rng = np.random.default_rng(9)
    al, be, ga = rng.uniform(0.0, 2.0 * np.pi, size=3)
    assert (
        np.abs(
            harmonic_from_so3(so3_compose_xyz(al, be, ga)) - compose_xyz(al, be, ga)
        ).max()
        < 1e-12
    )
    assert (
        np.abs(
            harmonic_from_so3(so3_compose_zxz(al, be, ga)) - compose_zxz(al, be, ga)
        ).max()
        < 1e-12
    )


def test_reference_is_unit_coefficient_vector():
    assert REFERENCE.shape == (7,)
    assert REFERENCE[1] == 1.0
    assert np.linalg.norm(REFERENCE) == 1.0


def test_semisymmetric_from_angles_shape_and_norm():
    rng = np.random.default_rng(10)
    for _ in range(20):
        a = semisymmetric_from_angles(*rng.uniform(0.0, 2.0 * np.pi, size=3))
        assert a.shape == (7,)
        assert abs(np.linalg.norm(a) - 1.0) < 1e-14


def test_euler_angles_namedtuple():
    e = EulerAngles(0.1, 0.2, 0.3)
    assert e.alpha == 0.1 and e.beta == 0.2 and e.gamma == 0.3
    assert tuple(e) == (0.1, 0.2, 0.3)
