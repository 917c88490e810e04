import numpy as np
import pytest

from octaframe.sampling import make_rng, random_unit_octupole
from octaframe.semisymmetry import (
    DEFAULT_WEIGHTS,
    M1,
    M2,
    M3,
    QUADRICS,
    PenaltyWeights,
    So3Quadrature,
    deviation,
    deviation_gradient,
    penalty,
    penalty_gradient,
    quadric_residuals,
    so3_average_trial,
    trial_deviation,
)
from octaframe.sh3 import REFERENCE, compose_xyz


E_M3 = np.eye(7)[0]  # coefficient vector of the lowest basis function


def central_difference(f, x, h=1e-5):
    g = np.zeros_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def test_quadric_matrices_are_symmetric():
    for m in QUADRICS:
        assert np.array_equal(m, m.T)


def test_quadric_matrix_entries():
    assert np.array_equal(np.diag(M1), [-5.0, 0.0, 3.0, 4.0, 3.0, 0.0, -5.0])
    assert M2[0, 1] == 5.0
    assert M2[1, 2] == np.sqrt(15.0)
    assert M2[3, 4] == 2.0
    assert M3[0, 5] == 5.0
    assert M3[1, 6] == -5.0
    assert M3[2, 3] == 2.0
    assert M3[2, 5] == -np.sqrt(15.0)


def test_residuals_vanish_on_reference():
    r = quadric_residuals(REFERENCE)
    assert np.abs(r).max() < 1e-15


def test_residuals_vanish_on_rotated_reference():
    rng = make_rng(11)
    for _ in range(50):
        a = compose_xyz(*(2.0 * np.pi * rng.random(3))) @ REFERENCE
        r = quadric_residuals(a)
        assert np.abs(r).max() < 1e-12


def test_residual_spot_value():
    r = quadric_residuals(E_M3)
    assert r[0] == 0.0  # unit norm
    assert r[1] == -5.0  # first quadric


def test_trial_deviation_is_sum_of_squared_residuals():
    rng = make_rng(12)
    for _ in range(20):
        a = rng.normal(size=7)
        r = quadric_residuals(a)
        assert abs(trial_deviation(a) - (r[1] ** 2 + r[2] ** 2 + r[3] ** 2)) < 1e-9


def test_deviation_spot_values():
    assert deviation(REFERENCE) == 0.0
    assert deviation(E_M3) == 25.0


def test_deviation_nonnegative_near_zero_only_on_manifold_rays():
    rng = make_rng(13)
    for _ in range(100):
        a = rng.normal(size=7)
        assert deviation(a) >= -1e-10


def test_deviation_scales_like_a_quartic():
    rng = make_rng(14)
    a = rng.normal(size=7)
    for s in (0.5, 2.0, -3.0):
        assert abs(deviation(s * a) - s**4 * deviation(a)) < 1e-9 * max(
            1.0, abs(deviation(a))
        )


def test_deviation_rotation_invariant():
    rng = make_rng(15)
    worst = 0.0
    for _ in range(200):
        a = 2.0 * rng.random() * random_unit_octupole(rng)
        r = compose_xyz(*(2.0 * np.pi * rng.random(3)))
        d0 = deviation(a)
        worst = max(worst, abs(deviation(r @ a) - d0) / max(1.0, d0))
    assert worst < 1e-9


def test_deviation_gradient_matches_finite_differences():
    rng = make_rng(16)
    worst = 0.0
    for _ in range(25):
        a = rng.normal(size=7)
        g = deviation_gradient(a)
        fd = central_difference(deviation, a)
        worst = max(worst, np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-12))
    assert worst < 1e-6


def test_penalty_weights_defaults_and_validation():
    assert DEFAULT_WEIGHTS.w1 == 5.0
    assert DEFAULT_WEIGHTS.w2 == 2.5
    with pytest.raises(ValueError):
        PenaltyWeights(w1=0.0, w2=1.0)
    with pytest.raises(ValueError):
        PenaltyWeights(w1=1.0, w2=-2.0)


def test_penalty_value_composition():
    rng = make_rng(17)
    w = PenaltyWeights(w1=3.0, w2=0.25)
    for _ in range(20):
        a = rng.normal(size=7)
        s = a @ a - 1.0
        expected = w.w1 * s * s + w.w2 * deviation(a)
        assert abs(penalty(a, w) - expected) < 1e-10 * max(1.0, abs(expected))


def test_penalty_zero_exactly_on_unit_manifold_points():
    assert penalty(REFERENCE) == 0.0


def test_penalty_gradient_matches_finite_differences():
    rng = make_rng(18)
    worst = 0.0
    for _ in range(25):
        a = rng.normal(size=7)
        g = penalty_gradient(a)
        fd = central_difference(lambda x: penalty(x), a)
        worst = max(worst, np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-12))
    assert worst < 1e-6


def test_quadrature_weights_sum_to_one():
    q = So3Quadrature(n_alpha=16, n_beta=16, n_gamma=16)
    assert abs(q.weights.sum() - 1.0) < 1e-13


def test_quadrature_rejects_tiny_node_counts():
    with pytest.raises(ValueError):
        So3Quadrature(n_alpha=8, n_beta=16, n_gamma=16)


def test_orbit_average_equals_deviation():
    # the group-averaged trial measure and the closed-form quartic must agree
    rng = make_rng(19)
    worst = 0.0
    for _ in range(50):
        a = random_unit_octupole(rng)
        worst = max(worst, abs(so3_average_trial(a) - deviation(a)))
    assert worst < 1e-6


def test_orbit_average_with_small_quadrature():
    # the integrand has bounded trigonometric degree, so a compact rule
    # already resolves it to machine precision
    q = So3Quadrature(n_alpha=16, n_beta=16, n_gamma=16)
    rng = make_rng(20)
    for _ in range(10):
        a = random_unit_octupole(rng)
        assert abs(so3_average_trial(a, q) - deviation(a)) < 1e-9
