"""Real-root fraction for supports filling dilated disks and squares.

For the lattice points of m * Delta, (1/m) ell(Lambda_m) converges to the
ellipsoid of the normalised inertia form of Delta, and the real fraction
converges to V(ell(Delta), ...) / V(Delta, ...). For the unit disk that is
1/(n+2) per axis, giving (1/4)^(n/2) = 0.25 at n = 2. A second candidate
constant, (beta_n / sigma_n)^(n/2) = 0.125, drops the (n-1)-ball slice
volume; the finite-m fractions show which of the two is the limit.

Run:  python demos/ball_asymptotics.py
"""

from realroots import (
    Ball,
    PolytopeBody,
    ball_limit_constants,
    dilate_and_intersect,
    limit_real_fraction,
    real_fraction,
)

square = PolytopeBody(((1, 1), (-1, 1), (-1, -1), (1, -1)))
for name, body in (("unit disk", Ball(1, 2)), ("unit square", square)):
    print(f"{name}: limit fraction {limit_real_fraction(body, body):.5f}")
    for m in (1, 2, 5, 10, 20, 50, 100):
        L = dilate_and_intersect(body, m)
        print(f"  m = {m:3d}  N = {L.size:6d}  fraction = {real_fraction(L, L).fraction:.5f}")

print("\ncandidate limits for balls:")
print(f"{'n':>3} {'inertia':>10} {'beta ratio':>11}")
for n in range(1, 7):
    c = ball_limit_constants(n)
    print(f"{n:3d} {c['inertia']:10.6f} {c['beta_ratio']:11.6f}")
