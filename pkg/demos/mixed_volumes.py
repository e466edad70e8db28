"""Mixed volumes of ellipses three ways.

V(E1, E2) for two ellipses is computed by a closed form (half the
perimeter of an auxiliary ellipse), by the support-function integral
(1/2) int (h1 h2 - h1' h2') over the circle, and by the Gaussian
determinant estimator. The same estimator works in any dimension; for
n = 3 the deterministic value comes from a quadrature over the sphere.

Run:  python demos/mixed_volumes.py
"""

import numpy as np

from realroots import Ellipsoid, mixed_volume_ellipsoids, mixed_volume_ellipsoids_exact
from realroots.mixedvol import mixed_volume_ellipsoids_oracle_2d

rng = np.random.default_rng(3)


def random_ellipsoid(n):
    A = rng.normal(size=(n, n))
    return Ellipsoid(A @ A.T + 0.05 * np.eye(n))


print(f"{'closed form':>12} {'quadrature':>12} {'estimate':>22}")
for _ in range(5):
    E1, E2 = random_ellipsoid(2), random_ellipsoid(2)
    est = mixed_volume_ellipsoids(E1, E2, samples=100_000, seed=0, use_shortcuts=False)
    print(f"{mixed_volume_ellipsoids_exact(E1, E2):12.6f} {mixed_volume_ellipsoids_oracle_2d(E1, E2):12.6f} "
          f"{est.value:12.6f} +- {est.std_error:.4f}")

E = [random_ellipsoid(3) for _ in range(3)]
est = mixed_volume_ellipsoids(*E, samples=200_000, seed=0)
print(f"\nn = 3: quadrature {mixed_volume_ellipsoids_exact(*E):.6f}, estimate {est.value:.6f} +- {est.std_error:.4f}")
print(f"diagonal check: V(E, E, E) = {mixed_volume_ellipsoids_exact(E[0], E[0], E[0]):.6f}, "
      f"vol(E) = {E[0].volume():.6f}")
