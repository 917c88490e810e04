import os
import subprocess
import sys

import numpy as np
import pytest

from octaframe import _kernels_py
from octaframe.backend import backend_name

try:
    from octaframe import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

needs_compiled = pytest.mark.skipif(
    _kernels_c is None, reason="compiled extension not built"
)


def random_batch(seed, n):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, 7))


def random_field(seed, n):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(n, 7))
    edges = []
    for i in range(n - 1):
        edges.append([i, i + 1])
    edges.append([0, n - 1])
    edges = np.array(edges, dtype=np.int64)
    pinned = np.zeros(n, dtype=bool)
    pinned[n // 2] = True
    return values, edges, pinned


def test_backend_names():
    assert _kernels_py.BACKEND_NAME == "python"
    if _kernels_c is not None:
        assert _kernels_c.BACKEND_NAME == "cython"
    assert backend_name() in ("python", "cython")


def test_env_var_forces_python_backend():
    code = "from octaframe.backend import backend_name; print(backend_name())"
    env = dict(os.environ, OCTAFRAME_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "python"


@needs_compiled
def test_backends_agree_on_deviation():
    a = random_batch(0, 200)
    d_py = _kernels_py.deviation_batch(a)
    d_c = _kernels_c.deviation_batch(a)
    scale = np.maximum(1.0, np.abs(d_py))
    assert (np.abs(d_py - d_c) / scale).max() < 1e-12


@needs_compiled
def test_backends_agree_on_deviation_gradient():
    a = random_batch(1, 200)
    g_py = _kernels_py.deviation_gradient_batch(a)
    g_c = _kernels_c.deviation_gradient_batch(a)
    scale = max(1.0, np.abs(g_py).max())
    assert np.abs(g_py - g_c).max() / scale < 1e-12


@needs_compiled
def test_backends_agree_on_penalty():
    a = random_batch(2, 200)
    p_py = _kernels_py.penalty_batch(a, 5.0, 2.5)
    p_c = _kernels_c.penalty_batch(a, 5.0, 2.5)
    scale = np.maximum(1.0, np.abs(p_py))
    assert (np.abs(p_py - p_c) / scale).max() < 1e-12


@needs_compiled
def test_backends_agree_on_penalty_gradient():
    a = random_batch(3, 200)
    g_py = _kernels_py.penalty_gradient_batch(a, 5.0, 2.5)
    g_c = _kernels_c.penalty_gradient_batch(a, 5.0, 2.5)
    scale = max(1.0, np.abs(g_py).max())
    assert np.abs(g_py - g_c).max() / scale < 1e-12


@needs_compiled
def test_backends_agree_on_smoothness():
    a = random_batch(4, 200)
    b = random_batch(5, 200)
    s_py = _kernels_py.smoothness_batch(a, b)
    s_c = _kernels_c.smoothness_batch(a, b)
    scale = np.maximum(1.0, np.abs(s_py))
    assert (np.abs(s_py - s_c) / scale).max() < 1e-12


@needs_compiled
def test_backends_agree_on_field_energy():
    values, edges, pinned = random_field(6, 40)
    e_py = _kernels_py.field_energy(values, edges, 5.0, 2.5)
    e_c = _kernels_c.field_energy(values, edges, 5.0, 2.5)
    assert abs(e_py - e_c) / max(1.0, abs(e_py)) < 1e-12


@needs_compiled
def test_backends_agree_on_field_gradient():
    values, edges, pinned = random_field(7, 40)
    g_py = _kernels_py.field_gradient(values, edges, pinned, 5.0, 2.5)
    g_c = _kernels_c.field_gradient(values, edges, pinned, 5.0, 2.5)
    scale = max(1.0, np.abs(g_py).max())
    assert np.abs(g_py - g_c).max() / scale < 1e-12


def test_python_field_gradient_accepts_uint8_pins():
    values, edges, pinned = random_field(8, 10)
    g_bool = _kernels_py.field_gradient(values, edges, pinned, 5.0, 2.5)
    g_u8 = _kernels_py.field_gradient(
        values, edges, pinned.astype(np.uint8), 5.0, 2.5
    )
    assert np.array_equal(g_bool, g_u8)


def test_field_gradient_zeroes_pinned_rows():
    values, edges, pinned = random_field(9, 10)
    g = _kernels_py.field_gradient(values, edges, pinned, 5.0, 2.5)
    assert np.all(g[pinned] == 0.0)


def test_kernels_accept_readonly_inputs():
    a = random_batch(10, 8)
    a.setflags(write=False)
    d = _kernels_py.deviation_batch(a)
    assert d.shape == (8,)
    if _kernels_c is not None:
        assert np.array_equal(_kernels_c.deviation_batch(a), d) or (
            np.abs(_kernels_c.deviation_batch(a) - d).max() < 1e-12
        )
