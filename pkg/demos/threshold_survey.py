# Where does (m,n)_q stop being a first-player win?
#
# T(n,q) is the smallest dimension m at which the game is a draw; above it,
# monotonicity keeps it a draw.  Nobody knows T exactly beyond a few small
# cases, but the package assembles certified intervals from several
# independent bounds.  This script prints the survey.

from affine_ttt.bounds import (
    threshold_report,
    es_lower_bound,
    fourier_upper_bound,
    beck_mb_threshold,
    AlphaSeq,
    alpha_closed_form,
)

print("binary games, n = 1..5")
print(f"{'n':>2} {'interval':>10}  tags")
for n in range(1, 6):
    rep = threshold_report(n, 2)
    lo, hi = rep.interval()
    tags = ", ".join(f"{k}={v}" for k, v in sorted(rep.lower.items()))
    mark = " (exact)" if rep.exact else ""
    print(f"{n:>2} {f'[{lo},{hi}]':>10}  {tags}{mark}")

# The n=2 row across growing field sizes.  The potential-method lower bound
# kicks in once the subspace family is small against 2^(q^n - 1).
print()
print("planes (n = 2), potential-method lower bound by field size")
for q in (3, 4, 5, 7):
    print(f"  q={q}: draw from dimension {es_lower_bound(2, q)} on")

# Beck's Maker-Breaker criterion answers a different question (the
# Maker-Breaker variant, not the strong game) but is cheap to tabulate.
print()
print("Maker-Breaker breaker-win thresholds, q = 2")
row = [beck_mb_threshold(n, 2) for n in range(1, 6)]
print("  n = 1..5:", row)

# alpha(n) = 1 - 2^(1-n) controls the density loss in the recursive upper
# bound; the recurrence and the closed form agree to machine-free exactness
# because everything is a Fraction.
seq = AlphaSeq.recurrence(10)
assert all(seq[n] == alpha_closed_form(n) for n in range(1, 11))
print()
print("alpha(1..6):", [str(seq[n]) for n in range(1, 7)])

# Caveat worth repeating: the fourier_upper_bound column is a theorem about
# q = 2 only.  For odd q the package has lower bounds and exhaustive small
# cases, nothing more.
print()
print("fourier upper bounds, n = 1..5:", [fourier_upper_bound(n) for n in range(1, 6)])
