"""Spherical glyph meshes: r(v) = |sum_m a_m Y_m(v)| over an icosphere.

The absolute value makes the glyph of ``a`` and ``-a`` literally the same
surface, matching the sign-agnostic frame interpretation.
"""

from __future__ import annotations

import math

import numpy as np

from .sh3 import basis_matrix


def icosphere(subdivisions: int):
    """Unit icosphere: (vertices (V,3), faces (F,3)) with
    V = 10*4^n + 2 and F = 20*4^n."""
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    verts = [np.array(v, dtype=np.float64) for v in verts]
    verts = [v / np.linalg.norm(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]

    for _ in range(subdivisions):
        midpoint = {}

        def midpoint_index(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint:
                v = verts[i] + verts[j]
                verts.append(v / np.linalg.norm(v))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        next_faces = []
        for i, j, k in faces:
            ij = midpoint_index(i, j)
            jk = midpoint_index(j, k)
            ki = midpoint_index(k, i)
            next_faces += [(i, ij, ki), (j, jk, ij), (k, ki, jk), (ij, jk, ki)]
        faces = next_faces

    return np.array(verts), np.array(faces, dtype=np.int64)


def glyph_mesh(a, subdivisions: int = 3):
    """Radial glyph of an octupole: vertices r(v)*v, faces as the sphere.

    Raises ValueError for the zero octupole (the surface collapses to a
    point).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (7,):
        raise ValueError(f"expected 7 coefficients, got shape {a.shape}")
    if not np.any(a):
        raise ValueError("zero octupole has a degenerate glyph")
    verts, faces = icosphere(subdivisions)
    radii = np.abs(basis_matrix(verts) @ a)
    return radii[:, None] * verts, faces
