"""Seedable random octupoles and angles.

The generator is pinned to PCG64 and normals are produced by an explicit
Box-Muller transform of its uniform doubles, so a seed identifies the same
draw sequence on any platform (and in reimplementations that only share
the PCG64 bitstream).
"""

from __future__ import annotations

import math

import numpy as np

from .sh3 import EulerAngles


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    """n standard normals via Box-Muller on consecutive uniform pairs."""
    pairs = (n + 1) // 2
    u = rng.random((pairs, 2))
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    theta = 2.0 * math.pi * u[:, 1]
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:n]


def random_unit_octupole(rng: np.random.Generator) -> np.ndarray:
    """Uniform direction on the unit sphere of coefficient space."""
    while True:
        z = standard_normals(rng, 7)
        norm = float(np.linalg.norm(z))
        if norm > 1e-12:
            return z / norm


def random_angles(rng: np.random.Generator) -> EulerAngles:
    a, b, g = 2.0 * math.pi * rng.random(3)
    return EulerAngles(float(a), float(b), float(g))
