"""Degree-3 real spherical harmonics and their 7x7 rotation action.

Octupoles (degree-3 real spherical harmonics) are represented by their
seven coefficients in the orthonormal basis Y_{3,-3}..Y_{3,3}; every array
of shape (7,) in this package uses that fixed index order m = -3..3.

The rotation of an octupole is linear in its coefficients, so each 3-space
rotation acts as an orthogonal 7x7 matrix.  ``rotation_z`` and the constant
x-quarter-turn matrix are closed-form; y- and general x-rotations are built
from them by conjugation.  The convention is anchored so that applying a
harmonic rotation to the coefficients equals actively rotating the function
on the sphere; see ``so3_rotation_y`` for the one sign subtlety this
implies.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

M_INDICES = (-3, -2, -1, 0, 1, 2, 3)

#: Reference semisymmetric octupole: the coefficients of Y_{3,-2}.
REFERENCE = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
REFERENCE.setflags(write=False)

# Normalization constants of the real degree-3 basis (unit-sphere measure).
_C_M3 = math.sqrt(35.0 / (32.0 * math.pi))
_C_M2 = math.sqrt(105.0 / (4.0 * math.pi))
_C_M1 = math.sqrt(21.0 / (32.0 * math.pi))
_C_0 = math.sqrt(7.0 / (16.0 * math.pi))
_C_P2 = math.sqrt(105.0 / (16.0 * math.pi))

_UNIT_TOL = 1e-12


class EulerAngles(NamedTuple):
    """Angle triple in radians; the composition is named by each operation."""

    alpha: float
    beta: float
    gamma: float


def basis_matrix(directions: np.ndarray) -> np.ndarray:
    """Evaluate all seven basis functions at unit directions (n,3) -> (n,7)."""
    v = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    norms = np.linalg.norm(v, axis=1)
    if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
        raise ValueError("directions must be unit vectors")
    x, y, z = v[:, 0], v[:, 1], v[:, 2]
    out = np.empty((len(v), 7))
    out[:, 0] = _C_M3 * y * (3.0 * x * x - y * y)
    out[:, 1] = _C_M2 * x * y * z
    out[:, 2] = _C_M1 * y * (5.0 * z * z - 1.0)
    out[:, 3] = _C_0 * (5.0 * z * z - 3.0) * z
    out[:, 4] = _C_M1 * x * (5.0 * z * z - 1.0)
    out[:, 5] = _C_P2 * (x * x - y * y) * z
    out[:, 6] = _C_M3 * x * (x * x - 3.0 * y * y)
    return out


def basis_values(v) -> np.ndarray:
    """All seven Y_{3,m}(v) for one unit direction, ordered m = -3..3."""
    return basis_matrix(np.asarray(v, dtype=np.float64)[None, :])[0]


def eval_basis(m_index: int, v) -> float:
    """Y_{3,m}(v) for a unit direction v; m_index must lie in -3..3."""
    if not isinstance(m_index, (int, np.integer)) or not -3 <= m_index <= 3:
        raise ValueError(f"m_index must be an integer in -3..3, got {m_index!r}")
    return float(basis_values(v)[m_index + 3])


def evaluate(a: np.ndarray, v) -> float:
    """The octupole function value sum_m a_m Y_{3,m}(v) at a unit direction."""
    return float(np.asarray(a, dtype=np.float64) @ basis_values(v))


def rotation_z(gamma: float) -> np.ndarray:
    """Harmonic action of the rotation about the z axis by ``gamma``."""
    return _rotation_z_stack(np.array([gamma]))[0]


def _rotation_z_stack(gammas: np.ndarray) -> np.ndarray:
    """z-rotation matrices for an array of angles: (k,) -> (k,7,7)."""
    g = np.asarray(gammas, dtype=np.float64)
    c1, s1 = np.cos(g), np.sin(g)
    c2, s2 = np.cos(2 * g), np.sin(2 * g)
    c3, s3 = np.cos(3 * g), np.sin(3 * g)
    out = np.zeros(g.shape + (7, 7))
    out[..., 0, 0] = c3
    out[..., 0, 6] = s3
    out[..., 1, 1] = c2
    out[..., 1, 5] = s2
    out[..., 2, 2] = c1
    out[..., 2, 4] = s1
    out[..., 3, 3] = 1.0
    out[..., 4, 2] = -s1
    out[..., 4, 4] = c1
    out[..., 5, 1] = -s2
    out[..., 5, 5] = c2
    out[..., 6, 0] = -s3
    out[..., 6, 6] = c3
    return out


def _rotation_z_derivative(gamma: float) -> np.ndarray:
    """d/dgamma of ``rotation_z`` (used by Gauss-Newton refinement)."""
    g = float(gamma)
    out = np.zeros((7, 7))
    for k, (i, j) in ((3, (0, 6)), (2, (1, 5)), (1, (2, 4))):
        c, s = math.cos(k * g), math.sin(k * g)
        out[i, i] = -k * s
        out[i, j] = k * c
        out[j, i] = -k * c
        out[j, j] = -k * s
    return out


def _build_x_quarter() -> np.ndarray:
    s6 = math.sqrt(6.0)
    s10 = math.sqrt(10.0)
    s15 = math.sqrt(15.0)
    m = np.array(
        [
            [0.0, 0.0, 0.0, s10, 0.0, -s6, 0.0],
            [0.0, -4.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, s6, 0.0, s10, 0.0],
            [-s10, 0.0, -s6, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -s15],
            [s6, 0.0, -s10, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -s15, 0.0, 1.0],
        ]
    )
    m /= 4.0
    m.setflags(write=False)
    return m


#: Harmonic action of the quarter turn about the x axis (closed form).
ROTATION_X_QUARTER = _build_x_quarter()


def rotation_x_quarter() -> np.ndarray:
    """The constant 7x7 matrix of the x-axis quarter turn."""
    return ROTATION_X_QUARTER


def rotation_y(beta: float) -> np.ndarray:
    """Harmonic y-rotation, defined by conjugating the z-rotation:
    ``Rx(pi/2) Rz(beta) Rx(pi/2)^T``."""
    return ROTATION_X_QUARTER @ rotation_z(beta) @ ROTATION_X_QUARTER.T


def _rotation_y_stack(betas: np.ndarray) -> np.ndarray:
    rz = _rotation_z_stack(betas)
    return np.einsum("ij,...jk,lk->...il", ROTATION_X_QUARTER, rz, ROTATION_X_QUARTER)


_ROTATION_Y_QUARTER = rotation_y(math.pi / 2.0)
_ROTATION_Y_QUARTER.setflags(write=False)


def rotation_x(alpha: float) -> np.ndarray:
    """Harmonic x-rotation: ``Ry(pi/2)^T Rz(alpha) Ry(pi/2)``."""
    return _ROTATION_Y_QUARTER.T @ rotation_z(alpha) @ _ROTATION_Y_QUARTER


def _rotation_x_stack(alphas: np.ndarray) -> np.ndarray:
    rz = _rotation_z_stack(alphas)
    return np.einsum(
        "ji,...jk,kl->...il", _ROTATION_Y_QUARTER, rz, _ROTATION_Y_QUARTER
    )


def compose_zxz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Harmonic rotation ``Rz(alpha) Rx(beta) Rz(gamma)``."""
    return rotation_z(alpha) @ rotation_x(beta) @ rotation_z(gamma)


def compose_xyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Harmonic rotation ``Rx(alpha) Ry(beta) Rz(gamma)``."""
    return rotation_x(alpha) @ rotation_y(beta) @ rotation_z(gamma)


def rotate(a: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Apply a harmonic rotation matrix to octupole coefficients."""
    return np.asarray(r, dtype=np.float64) @ np.asarray(a, dtype=np.float64)


def semisymmetric_from_angles(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Point of the semisymmetric manifold: ``Rx(a) Ry(b) Rz(g)`` applied to
    the reference octupole."""
    return compose_xyz(alpha, beta, gamma) @ REFERENCE


def orthogonality_residual(r: np.ndarray) -> float:
    """max-norm of R^T R - I; small for every constructed harmonic rotation."""
    r = np.asarray(r)
    return float(np.abs(r.T @ r - np.eye(len(r))).max())


# ---------------------------------------------------------------------------
# 3-space counterparts.
#
# The pairing below is fixed by the closed-form matrices above: the harmonic
# z- and x-rotations by an angle t act on coefficients exactly as the
# 3-space rotations about +z and +x by t act on the function, while the
# conjugation defining the harmonic y-rotation lands on the 3-space rotation
# about y by -t.  The function-consistency tests pin this down numerically.
# ---------------------------------------------------------------------------


def so3_rotation_z(gamma: float) -> np.ndarray:
    """3x3 counterpart of ``rotation_z``."""
    c, s = math.cos(gamma), math.sin(gamma)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def so3_rotation_x(alpha: float) -> np.ndarray:
    """3x3 counterpart of ``rotation_x``."""
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def so3_rotation_y(beta: float) -> np.ndarray:
    """3x3 counterpart of ``rotation_y`` (rotation about y by ``-beta``)."""
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def so3_compose_zxz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """3x3 counterpart of ``compose_zxz``."""
    return so3_rotation_z(alpha) @ so3_rotation_x(beta) @ so3_rotation_z(gamma)


def so3_compose_xyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """3x3 counterpart of ``compose_xyz``; maps the frame angles returned by
    manifold projection to the rotation carried by that frame."""
    return so3_rotation_x(alpha) @ so3_rotation_y(beta) @ so3_rotation_z(gamma)


def zxz_angles_from_so3(q: np.ndarray) -> EulerAngles:
    """Decompose a 3x3 rotation as ``so3_compose_zxz(alpha, beta, gamma)``."""
    q = np.asarray(q, dtype=np.float64)
    cb = min(1.0, max(-1.0, q[2, 2]))
    beta = math.acos(cb)
    if math.sin(beta) > 1e-12:
        alpha = math.atan2(q[0, 2], -q[1, 2])
        gamma = math.atan2(q[2, 0], q[2, 1])
    elif cb > 0.0:  # beta ~ 0: pure z-rotation by alpha + gamma
        alpha = math.atan2(q[1, 0], q[0, 0])
        gamma = 0.0
    else:  # beta ~ pi: z-rotations combine as alpha - gamma
        alpha = math.atan2(q[0, 1], q[0, 0])
        gamma = 0.0
    return EulerAngles(alpha, beta, gamma)


def harmonic_from_so3(q: np.ndarray) -> np.ndarray:
    """7x7 harmonic action of an arbitrary 3x3 rotation matrix."""
    return compose_zxz(*zxz_angles_from_so3(q))
