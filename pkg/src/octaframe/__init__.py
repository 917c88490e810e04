"""octaframe: degree-3 spherical-harmonic frames and sign-agnostic frame
fields.

An octupole is a 7-vector of coefficients in the real degree-3 harmonic
basis; the semisymmetric ones encode octahedral frames.  This package
provides the harmonic rotation algebra, the rotation-invariant deviation
penalty with gradients, single-octupole symmetrization, smooth field
optimization on node graphs, and loop-holonomy singularity classification.
"""

from .backend import backend_name
from .descent import DescentConfig
from .field import (
    ClassificationError,
    FieldOptConfig,
    FieldOptResult,
    FrameField,
    GroupElement,
    OctahedralGroup,
    coarsen,
    energy_gradient,
    grid_boundary_mask,
    loop_index,
    octahedral_group,
    optimize_field,
    prolong,
    smoothness_term,
    total_energy,
)
from .glyph import glyph_mesh, icosphere
from .projection import (
    ManifoldProjection,
    Trajectory,
    TrajectoryPoint,
    distance_to_manifold,
    semisymmetrize,
    sqrt_penalty_vs_distance,
)
from .sampling import make_rng, random_angles, random_unit_octupole
from .semisymmetry import (
    DEFAULT_WEIGHTS,
    M1,
    M2,
    M3,
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
from .sh3 import (
    REFERENCE,
    EulerAngles,
    basis_values,
    compose_xyz,
    compose_zxz,
    eval_basis,
    evaluate,
    rotate,
    rotation_x,
    rotation_x_quarter,
    rotation_y,
    rotation_z,
    semisymmetric_from_angles,
)

__version__ = "0.1.0"
