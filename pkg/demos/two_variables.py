"""A system of two random trigonometric polynomials in two variables.

Both equations use the cross support {0, +-e1, +-e2}. The moment
ellipsoid is the disk of radius sqrt(2/5), so the expected number of real
roots on the torus is 2! * pi * 2/5 = 4 pi / 5, while the Newton polygon
(a diamond of area 2) gives 4 complex roots. Roots of sampled systems are
found by tracing the zero curve of f1 and locating sign changes of f2.

Run:  python demos/two_variables.py
"""

from math import pi

import numpy as np

from realroots import bkk_count, expected_real_roots, mc_expected_roots, validate_support
from realroots.rootcount import real_roots_2d
from realroots.sampler import evaluate, sample

cross = validate_support([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
print(f"prediction   {expected_real_roots(cross, cross):.5f}  (4 pi / 5 = {4 * pi / 5:.5f})")
print(f"BKK count    {bkk_count(cross, cross)}")

rng = np.random.default_rng(1)
f1, f2 = sample(cross, rng), sample(cross, rng)
roots = real_roots_2d(f1, f2)
print(f"\none sample has {len(roots)} real roots:")
for r in roots:
    print(f"  theta = ({r[0]:.6f}, {r[1]:.6f})   residual {abs(evaluate(f1, r)) + abs(evaluate(f2, r)):.1e}")

est = mc_expected_roots(cross, cross, samples=3000, seed=2)
print(f"\nMonte Carlo over {est.samples} systems: {est.value:.4f} +- {est.std_error:.4f} "
      f"(z = {est.zscore(4 * pi / 5):+.2f})")
print(f"diagnostics: {est.diagnostics}")
