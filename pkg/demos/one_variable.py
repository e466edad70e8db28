"""Random trigonometric polynomials in one variable.

For the support {-lam, ..., lam} the moment ellipsoid is the segment
[-r, r] with r = sqrt(lam (lam + 1) / 3), so a random polynomial has
2 r real zeros on average out of 2 lam complex ones. The fraction tends to
1/sqrt(3), not to zero. For the two-point support {-lam, lam} every zero is
real.

Run:  python demos/one_variable.py
"""

from math import sqrt

from realroots import mc_expected_roots, real_fraction, symmetric_range, validate_support

print(f"{'lam':>4} {'theory':>9} {'sampled':>16} {'bkk':>4} {'fraction':>9}")
for lam in (1, 2, 3, 5, 8, 13):
    L = symmetric_range(lam)
    stats = real_fraction(L)
    est = mc_expected_roots(L, samples=2000, seed=lam)
    print(f"{lam:4d} {stats.expected_real:9.4f} {est.value:9.4f} +- {est.std_error:.3f} {stats.bkk:4d} {stats.fraction:9.4f}")

print(f"\nlimit of the fraction: 1/sqrt(3) = {1 / sqrt(3):.5f}")
for lam in (50, 58, 500, 5000):
    print(f"  lam = {lam:5d}: {real_fraction(symmetric_range(lam)).fraction:.5f}")

pair = validate_support([[-4], [4]])
est = mc_expected_roots(pair, samples=500, seed=0)
print(f"\nsupport {{-4, 4}}: mean real roots {est.value} (standard error {est.std_error}), fraction "
      f"{real_fraction(pair).fraction}")
