"""Sign-agnostic smooth octupole fields on node graphs.

The field energy couples neighboring octupoles through
|a-b|^2 |a+b|^2 — zero when neighbors agree up to sign — and adds the
per-node penalty so values stay near the semisymmetric manifold.  On
grids the optimizer runs coarse-to-fine; loop holonomy around node cycles
is classified into the 24-element octahedral rotation group, which is what
detects singular field lines.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import parallel, sh3
from .backend import kernels
from .descent import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERS,
    DescentConfig,
    gradient_descent,
)
from .projection import distance_to_manifold
from .semisymmetry import DEFAULT_WEIGHTS, PenaltyWeights

__all__ = [
    "FrameField",
    "FieldOptConfig",
    "FieldOptResult",
    "GroupElement",
    "OctahedralGroup",
    "ClassificationError",
    "octahedral_group",
    "grid_boundary_mask",
    "smoothness_term",
    "total_energy",
    "energy_gradient",
    "optimize_field",
    "coarsen",
    "prolong",
    "loop_index",
]


class ClassificationError(RuntimeError):
    """Loop holonomy could not be classified (field too far off-manifold)."""


@dataclass
class FrameField:
    """Octupole per node, undirected smoothness edges, per-node pin flags.

    ``dims`` carries (nx, ny, nz) for fields built on box grids and enables
    the coarse-to-fine hierarchy; graph fields leave it None.
    """

    values: np.ndarray  # (n, 7)
    pinned: np.ndarray  # (n,) bool
    edges: np.ndarray  # (m, 2) int64, endpoints sorted low-high per row
    dims: Optional[Tuple[int, int, int]] = None

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[1] != 7:
            raise ValueError(f"values must be (n, 7), got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        n = len(self.values)
        self.pinned = np.ascontiguousarray(self.pinned, dtype=bool)
        if self.pinned.shape != (n,):
            raise ValueError(f"pinned must be ({n},), got {self.pinned.shape}")
        self.edges = np.ascontiguousarray(
            np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        )
        if len(self.edges):
            if self.edges.min() < 0 or self.edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
            hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
            if np.any(lo == hi):
                raise ValueError("self-loop edge")
            self.edges = np.ascontiguousarray(np.stack([lo, hi], axis=1))
            seen = set(map(tuple, self.edges.tolist()))
            if len(seen) != len(self.edges):
                raise ValueError("duplicate edge")
        if self.dims is not None:
            self.dims = tuple(int(d) for d in self.dims)
            if len(self.dims) != 3 or min(self.dims) < 1:
                raise ValueError(f"bad grid dims {self.dims}")
            if int(np.prod(self.dims)) != n:
                raise ValueError(
                    f"dims {self.dims} do not match node count {n}"
                )

    @property
    def n_nodes(self) -> int:
        return len(self.values)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def with_values(self, values: np.ndarray) -> "FrameField":
        return FrameField(values, self.pinned.copy(), self.edges.copy(), self.dims)

    def edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    @staticmethod
    def grid(
        nx: int, ny: int, nz: int, fill: np.ndarray = sh3.REFERENCE
    ) -> "FrameField":
        """Box grid with 6-neighborhood edges; node (x,y,z) has linear
        index x + nx*(y + ny*z)."""
        if min(nx, ny, nz) < 1:
            raise ValueError("grid dims must be >= 1")
        n = nx * ny * nz
        idx = np.arange(n, dtype=np.int64).reshape(nz, ny, nx)
        groups = [
            (idx[:, :, :-1], idx[:, :, 1:]),  # x-direction
            (idx[:, :-1, :], idx[:, 1:, :]),  # y-direction
            (idx[:-1, :, :], idx[1:, :, :]),  # z-direction
        ]
        parts = [
            np.stack([lo.ravel(), hi.ravel()], axis=1)
            for lo, hi in groups
            if lo.size
        ]
        edges = np.concatenate(parts) if parts else np.empty((0, 2), np.int64)
        values = np.tile(np.asarray(fill, dtype=np.float64), (n, 1))
        return FrameField(values, np.zeros(n, dtype=bool), edges, (nx, ny, nz))


def grid_boundary_mask(dims: Tuple[int, int, int]) -> np.ndarray:
    """Boolean mask of the outer shell of a grid in linear-index order."""
    nx, ny, nz = dims
    x, y, z = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij")
    on = (
        (x == 0) | (x == nx - 1) | (y == 0) | (y == ny - 1) | (z == 0) | (z == nz - 1)
    )
    # meshgrid is (x,y,z)-indexed; linear order is x fastest
    return on.transpose(2, 1, 0).ravel()


def smoothness_term(a, b) -> float:
    """Edge energy |a-b|^2 |a+b|^2; zero iff b = +-a."""
    a = np.asarray(a, dtype=np.float64).reshape(1, 7)
    b = np.asarray(b, dtype=np.float64).reshape(1, 7)
    return float(kernels.smoothness_batch(a, b)[0])


def total_energy(f: FrameField, w: PenaltyWeights = DEFAULT_WEIGHTS) -> float:
    """Sum of edge smoothness terms plus per-node penalties (fixed order,
    so the value is reproducible bit-for-bit)."""
    return float(kernels.field_energy(f.values, f.edges, w.w1, w.w2))


def energy_gradient(
    f: FrameField, w: PenaltyWeights = DEFAULT_WEIGHTS
) -> np.ndarray:
    """(n, 7) gradient of ``total_energy``; pinned rows are zero."""
    return kernels.field_gradient(f.values, f.edges, f.pinned, w.w1, w.w2)


@dataclass(frozen=True)
class FieldOptConfig:
    """Descent settings for field optimization.

    ``descent.tol`` is the gradient max-norm threshold here (a field has no
    single penalty to take the square root of).
    """

    weights: PenaltyWeights = DEFAULT_WEIGHTS
    descent: DescentConfig = DescentConfig(step=0.1, max_iters=5000, tol=1e-6)
    levels: int = 1

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")


@dataclass
class FieldOptResult:
    field: FrameField
    histories: List[List[float]]  # energy per iterate, one list per level
    status: str  # status of the finest level

    @property
    def energy_history(self) -> List[float]:
        return self.histories[-1]


def _descend_level(f: FrameField, cfg: FieldOptConfig):
    w = cfg.weights
    shape = f.values.shape

    def objective(x):
        return float(kernels.field_energy(x.reshape(shape), f.edges, w.w1, w.w2))

    def gradient(x):
        return kernels.field_gradient(
            x.reshape(shape), f.edges, f.pinned, w.w1, w.w2
        ).ravel()

    def converged(x, fx, g):
        return g is not None and float(np.abs(g).max()) < cfg.descent.tol

    result = gradient_descent(
        f.values.ravel(), objective, gradient, cfg.descent, converged
    )
    status = result.status
    if status != STATUS_CONVERGED:
        # the final iterate may satisfy the gradient test even when the
        # line search gave out or the iteration budget ran dry
        if float(np.abs(gradient(result.x)).max()) < cfg.descent.tol:
            status = STATUS_CONVERGED
    return f.with_values(result.x.reshape(shape)), result.history, status


def optimize_field(f: FrameField, cfg: FieldOptConfig = FieldOptConfig()) -> FieldOptResult:
    """Minimize the field energy over free nodes, coarse-to-fine on grids.

    Returns a new field (inputs are never mutated) plus per-level energy
    histories, coarsest level first; each history is non-increasing.
    """
    if f.n_nodes == 0:
        raise ValueError("field has no nodes")
    levels = cfg.levels if f.dims is not None else 1

    pyramid = [f]
    for _ in range(levels - 1):
        if min(pyramid[-1].dims) < 2:
            break
        pyramid.append(coarsen(pyramid[-1]))

    histories: List[List[float]] = []
    status = STATUS_MAX_ITERS
    current = pyramid[-1]
    for level in range(len(pyramid) - 1, -1, -1):
        opt, history, status = _descend_level(current, cfg)
        histories.append(history)
        if level > 0:
            current = prolong(opt, pyramid[level - 1])
        else:
            current = opt
    return FieldOptResult(current, histories, status)


def _parent_indices(dims, coarse_dims) -> np.ndarray:
    nx, ny, nz = dims
    cnx, cny, _ = coarse_dims
    z, y, x = np.unravel_index(np.arange(nx * ny * nz), (nz, ny, nx))
    return (x // 2) + cnx * ((y // 2) + cny * (z // 2))


def coarsen(f: FrameField) -> FrameField:
    """Halve each grid axis: parent value = renormalized mean of its
    children (reference octupole if they cancel); parent is pinned iff any
    child is, taking the first pinned child's value."""
    if f.dims is None:
        raise ValueError("coarsen requires grid metadata")
    if min(f.dims) < 2:
        raise ValueError(f"grid dims {f.dims} too small to coarsen")
    nx, ny, nz = f.dims
    cdims = ((nx + 1) // 2, (ny + 1) // 2, (nz + 1) // 2)
    parent = _parent_indices(f.dims, cdims)
    cn = int(np.prod(cdims))

    sums = np.zeros((cn, 7))
    np.add.at(sums, parent, f.values)
    norms = np.linalg.norm(sums, axis=1, keepdims=True)
    values = np.where(norms > 1e-12, sums / np.where(norms == 0, 1.0, norms),
                      sh3.REFERENCE)

    pinned = np.zeros(cn, dtype=bool)
    for child in np.flatnonzero(f.pinned):
        p = parent[child]
        if not pinned[p]:
            pinned[p] = True
            values[p] = f.values[child]

    coarse = FrameField.grid(*cdims)
    return FrameField(values, pinned, coarse.edges, cdims)


def prolong(coarse: FrameField, fine_template: FrameField) -> FrameField:
    """Copy each parent's value onto its children; nodes pinned in the
    template keep the template's values (and stay pinned)."""
    if coarse.dims is None or fine_template.dims is None:
        raise ValueError("prolong requires grid metadata on both fields")
    expected = tuple((d + 1) // 2 for d in fine_template.dims)
    if coarse.dims != expected:
        raise ValueError(
            f"coarse dims {coarse.dims} do not match template {fine_template.dims}"
        )
    parent = _parent_indices(fine_template.dims, coarse.dims)
    values = coarse.values[parent].copy()
    values[fine_template.pinned] = fine_template.values[fine_template.pinned]
    return FrameField(
        values, fine_template.pinned.copy(), fine_template.edges.copy(),
        fine_template.dims,
    )


# ---------------------------------------------------------------------------
# Octahedral rotation group and loop holonomy.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    """One of the 24 octahedral rotations with its harmonic image and the
    sign it gives the reference octupole (+1 on the even subgroup)."""

    index: int
    rotation: np.ndarray  # 3x3, exact 0/+-1 entries
    harmonic: np.ndarray  # 7x7
    sign: int

    def _key(self):
        return tuple(int(round(v)) for v in self.rotation.ravel())

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def order(self) -> int:
        """Smallest k >= 1 with rotation^k = identity (1, 2, 3, or 4)."""
        m = self.rotation
        for k in range(1, 7):
            if np.array_equal(m, np.eye(3)):
                return k
            m = m @ self.rotation
        raise AssertionError("element order exceeds group bound")

    def __repr__(self):
        axis = "" if self.is_identity else f", order={self.order}"
        return f"GroupElement(index={self.index}, sign={self.sign:+d}{axis})"

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.rotation, np.eye(3)))


def _exact_rotation_z_quarter_7() -> np.ndarray:
    """rotation_z(pi/2) with exact integer entries (cos/sin of multiples of
    pi/2 evaluated symbolically rather than through floating pi)."""
    m = np.zeros((7, 7))
    # frequencies 3, 2, 1 at angle pi/2: (cos, sin) = (0,-1), (-1,0), (0,1)
    m[0, 6] = -1.0
    m[6, 0] = 1.0
    m[1, 1] = -1.0
    m[5, 5] = -1.0
    m[2, 4] = 1.0
    m[4, 2] = -1.0
    m[3, 3] = 1.0
    return m


class OctahedralGroup:
    """The 24 rotations of the cube, built by closing two exact quarter-turn
    generators; provides snapping, products, and inverses by table lookup."""

    SIGN_TOL = 1e-12

    def __init__(self):
        gen3 = [
            np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
        ]
        gen7 = [_exact_rotation_z_quarter_7(), sh3.ROTATION_X_QUARTER.copy()]

        elements = {}
        order = []
        frontier = [(np.eye(3), np.eye(7))]
        key = lambda r: tuple(int(round(v)) for v in r.ravel())
        elements[key(frontier[0][0])] = frontier[0]
        order.append(key(frontier[0][0]))
        while frontier:
            nxt = []
            for r, h in frontier:
                for g3, g7 in zip(gen3, gen7):
                    r2, h2 = r @ g3, h @ g7
                    k = key(r2)
                    if k not in elements:
                        elements[k] = (r2, h2)
                        order.append(k)
                        nxt.append((r2, h2))
            frontier = nxt
        if len(order) != 24:
            raise AssertionError(f"group closure produced {len(order)} elements")

        self.elements: List[GroupElement] = []
        self._by_key = {}
        ref = sh3.REFERENCE
        for i, k in enumerate(order):
            r, h = elements[k]
            image = h @ ref
            if np.max(np.abs(image - ref)) <= self.SIGN_TOL:
                sign = 1
            elif np.max(np.abs(image + ref)) <= self.SIGN_TOL:
                sign = -1
            else:
                raise AssertionError("harmonic image does not fix the reference")
            r = np.round(r)
            r.setflags(write=False)
            h.setflags(write=False)
            element = GroupElement(i, r, h, sign)
            self.elements.append(element)
            self._by_key[k] = element
        self._rot_stack = np.stack([e.rotation for e in self.elements])

    @property
    def identity(self) -> GroupElement:
        return self.elements[0]

    def lookup(self, rotation: np.ndarray) -> GroupElement:
        k = tuple(int(round(v)) for v in np.asarray(rotation).ravel())
        return self._by_key[k]

    def multiply(self, e1: GroupElement, e2: GroupElement) -> GroupElement:
        return self.lookup(e1.rotation @ e2.rotation)

    def inverse(self, e: GroupElement) -> GroupElement:
        return self.lookup(e.rotation.T)

    def snap(self, q: np.ndarray, tol_deg: float = 25.0) -> GroupElement:
        """Nearest group element to an arbitrary rotation, by geodesic
        angle; raises ClassificationError beyond ``tol_deg`` degrees."""
        q = np.asarray(q, dtype=np.float64)
        traces = np.einsum("kij,ij->k", self._rot_stack, q)
        cos_angle = np.clip((traces - 1.0) / 2.0, -1.0, 1.0)
        best = int(np.argmax(cos_angle))
        angle = math.degrees(math.acos(cos_angle[best]))
        if angle > tol_deg:
            raise ClassificationError(
                f"rotation is {angle:.1f} deg from the nearest octahedral "
                f"element (tolerance {tol_deg} deg)"
            )
        return self.elements[best]


@functools.lru_cache(maxsize=1)
def octahedral_group() -> OctahedralGroup:
    return OctahedralGroup()


#: Loop nodes farther than this from the manifold make holonomy meaningless.
LOOP_DISTANCE_LIMIT = 0.3


def loop_index(
    f: FrameField,
    loop: Sequence[int],
    group: Optional[OctahedralGroup] = None,
    snap_deg: float = 25.0,
) -> GroupElement:
    """Holonomy of the frame field around a closed node cycle.

    Each node's octupole is projected to the manifold to recover a frame;
    consecutive relative rotations are snapped to the octahedral group and
    multiplied in loop order.  Identity means the loop encloses no
    singularity; the result is well-defined up to conjugacy (the per-node
    frame choice is only unique up to a cube symmetry), so its order and
    class are the meaningful outputs.
    """
    if group is None:
        group = octahedral_group()
    loop = [int(i) for i in loop]
    if len(loop) >= 2 and loop[0] == loop[-1]:
        loop = loop[:-1]
    if len(loop) < 2:
        raise ValueError("loop must visit at least two distinct nodes")
    if any(i < 0 or i >= f.n_nodes for i in loop):
        raise ValueError("loop node index out of range")
    edge_set = f.edge_set()
    for a, b in zip(loop, loop[1:] + loop[:1]):
        if (min(a, b), max(a, b)) not in edge_set:
            raise ValueError(f"loop nodes {a} and {b} are not adjacent")

    unique = sorted(set(loop))
    projections = dict(
        zip(
            unique,
            parallel.map_indexed(
                lambda i: distance_to_manifold(f.values[i]), unique
            ),
        )
    )
    frames = {}
    for i, proj in projections.items():
        if proj.distance > LOOP_DISTANCE_LIMIT:
            raise ClassificationError(
                f"node {i} is {proj.distance:.3f} from the manifold "
                f"(limit {LOOP_DISTANCE_LIMIT}); cannot classify"
            )
        frames[i] = sh3.so3_compose_xyz(*proj.angles)

    result = group.identity
    for a, b in zip(loop, loop[1:] + loop[:1]):
        delta = frames[a].T @ frames[b]
        result = group.multiply(result, group.snap(delta, snap_deg))
    return result
