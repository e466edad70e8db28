"""Expected number and fraction of real roots of random trigonometric polynomial systems.

The expected number of real roots on the torus is ``n!`` times the mixed
volume of the moment ellipsoids of the supports; the generic number of
complex roots is ``n!`` times the mixed volume of the Newton polytopes. This
package computes both, their ratio, the large-support limits, and checks the
predictions against root counts of sampled polynomials.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .geometry import (
    Ellipsoid,
    LatticePolytope,
    convex_hull,
    ellipsoid_in_polytope,
    ellipsoid_volume,
    hausdorff_distance,
    minkowski_sum,
    support_function,
    volume,
)
from .lattice import (
    Ball,
    PolytopeBody,
    SupportSet,
    check_condition_star,
    dilate_and_intersect,
    random_support,
    symmetric_range,
    validate_support,
)
from .mixedvol import (
    RootStatistics,
    af_inequality_gap,
    bkk_count,
    expected_real_roots,
    expected_real_roots_estimate,
    limit_real_fraction,
    mixed_volume_ellipsoids,
    mixed_volume_ellipsoids_exact,
    mixed_volume_ellipsoids_oracle_2d,
    mixed_volume_polytopes,
    real_fraction,
)
from .moments import ball_limit_constants, beta_n, limit_moment_matrix, moment_matrix, sigma_n
from .montecarlo import MVEstimate
from .rootcount import count_complex_roots_1d, count_real_roots_1d, count_real_roots_2d, mc_expected_roots
from .sampler import TrigPolynomial, evaluate, gradient, sample, to_laurent
