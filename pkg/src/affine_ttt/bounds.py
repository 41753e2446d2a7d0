"""Threshold bound calculators and assembled interval reports.

Lower bounds on the first-player winning threshold come from potential
counting (the drawing condition on the number of winning subspaces) and
from explicit drawing strategies; upper bounds, available for the binary
field only, come from the free-set recursion f and its closed forms.
Everything is evaluated in exact integer or rational arithmetic; floating
point appears only as a cross-check, never as the authority.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import geometry
from .errors import InternalInconsistency, InvalidArgs
from .extremal import f_recursive

# Exactly known thresholds, (n, q) -> T(n, q).  The line game on 4, 9 and
# 16 cells is a first-player win in dimension 2, and every 8-point subset
# of the 16-cell binary board contains a 2-flat, which settles T(2, 2).
_EXACT_THRESHOLDS = {(1, 2): 2, (1, 3): 2, (1, 4): 2, (2, 2): 4}


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


# ---------------------------------------------------------------------------
# exponent sequence for the uniform free-set bound


@dataclass(frozen=True)
class AlphaSeq:
    """Exponents alpha(n) of the uniform free-set bound f(n,m) <= 8*2^(alpha(n)m),
    held as exact rationals.  Built from the recurrence alpha(1) = 0,
    alpha(2) = 1/2, alpha(n) = (3 + alpha(n-2)) / 4; the solved form
    1 - 2^(1-n) lives in alpha_closed_form so the two can be compared.
    """

    values: tuple[Fraction, ...]

    @classmethod
    def recurrence(cls, n_max: int) -> "AlphaSeq":
        if n_max < 1:
            raise InvalidArgs(f"need n_max >= 1, got {n_max}")
        vals: list[Fraction] = []
        for n in range(1, n_max + 1):
            if n == 1:
                vals.append(Fraction(0))
            elif n == 2:
                vals.append(Fraction(1, 2))
            else:
                vals.append((3 + vals[n - 3]) / 4)
        return cls(tuple(vals))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        if not 1 <= n <= len(self.values):
            raise InvalidArgs(f"alpha({n}) not in this sequence of length {len(self.values)}")
        return self.values[n - 1]


def alpha_closed_form(n: int) -> Fraction:
    """Solved form of the alpha recurrence: 1 - 2^(1-n), exact."""
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    return 1 - Fraction(1, 2 ** (n - 1))


def uniform_bound_holds(n: int, m: int) -> bool:
    """Exact check of f(n,m) <= 8 * 2^(alpha(n) m) for the binary field.

    alpha(n) = (2^(n-1) - 1) / 2^(n-1), so raising both sides to the power
    e = 2^(n-1) clears the rational exponent and the comparison becomes
    f(n,m)^e <= 2^(3e + m(e-1)) between plain integers.
    """
    e = 2 ** (n - 1)
    return f_recursive(n, m) ** e <= 1 << (3 * e + m * (e - 1))


# ---------------------------------------------------------------------------
# lower bounds


def es_draw_condition(m: int, n: int, q: int) -> bool:
    """True when the winning-subspace count is below the potential barrier:
    q^(m-n) * [m choose n]_q < 2^(q^n - 1).  A true value certifies that the
    board is drawing, hence T(n, q) > m.  Exact integers throughout.
    """
    if n < 1 or m < n or q < 2:
        raise InvalidArgs(f"need 1 <= n <= m and q >= 2, got m={m}, n={n}, q={q}")
    count = q ** (m - n) * geometry.gaussian_binomial(m, n, q)
    return count < 2 ** (q**n - 1)


def es_lower_bound(n: int, q: int) -> int:
    """Smallest m at which the potential drawing inequality fails; every
    smaller board is drawing, so T(n, q) is at least the returned value.

    The authority is the exact integer inequality with denominators cleared,
        q^n * q^((n+1)(m-n)) < 2^(q^n - 1) * (q-1)^n,
    whose failure set is upward closed in m (the left side grows, the right
    is fixed), so the first failure is found by doubling and bisection.  The
    equivalent ceiling formula
        n + ceil((q^n - 1 - n log2(q/(q-1))) / ((n+1) log2 q))
    is evaluated in floating point as a cross-check, but only when q^n is
    well inside the double mantissa and the inner value is clear of an
    integer boundary; a disagreement there is an internal bug, not a
    rounding allowance.
    """
    if n < 1 or q < 2:
        raise InvalidArgs(f"need n >= 1 and q >= 2, got n={n}, q={q}")
    rhs = 2 ** (q**n - 1) * (q - 1) ** n

    def drawing(m: int) -> bool:
        return q**n * q ** ((n + 1) * (m - n)) < rhs

    if not drawing(n):
        first_bad = n
    else:
        gap = 1
        while drawing(n + gap):
            gap *= 2
        lo, hi = n + gap // 2, n + gap  # lo verified drawing, hi verified not
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if drawing(mid):
                lo = mid
            else:
                hi = mid
        first_bad = hi

    if q**n < 2**40:
        x = (q**n - 1 - n * math.log2(q / (q - 1))) / ((n + 1) * math.log2(q))
        if abs(x - round(x)) > 1e-9 and n + math.ceil(x) != first_bad:
            raise InternalInconsistency(
                f"ceiling formula gives {n + math.ceil(x)}, exact scan {first_bad}"
            )
    return first_bad


def geometric_lower_bound(n: int) -> int:
    """Threshold lower bound from explicit drawing strategies: n + 2 for
    n >= 2 (a drawing strategy exists on every board of dimension up to
    n + 1), and 2 for the line game, where dimension 1 is a trivial draw.
    Valid for every field size.
    """
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    return 2 if n == 1 else n + 2


# ---------------------------------------------------------------------------
# upper bounds (binary field)


def fourier_upper_bound(n: int) -> int:
    """First m >= n with f(n, m) <= 2^(m-1): one of the two half-boards
    already contains an n-flat, which converts to a first-player win on the
    binary board of that dimension.  Scans m upward; the uniform bound
    guarantees success by m = 2^(n+1).
    """
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    for m in range(n, 2 ** (n + 1) + 1):
        if f_recursive(n, m) <= 2 ** (m - 1):
            return m
    raise InternalInconsistency(f"scan for n={n} exceeded the guaranteed ceiling")


def closed_form_upper(n: int) -> int:
    """Closed-form binary upper bound 7 * 2^(n-3) + 3, valid from n = 5 on.
    The scanned bound is sharper where both apply; reports take the min.
    """
    if n < 5:
        raise InvalidArgs(f"closed form applies for n >= 5, got {n}")
    return 7 * 2 ** (n - 3) + 3


def exponential_upper(n: int) -> int:
    """Coarser one-line restatement 2^(n+1) of the binary upper bound; it
    dominates both sharper bounds at every n, so it is safe for any n >= 1.
    """
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    return 2 ** (n + 1)


# ---------------------------------------------------------------------------
# Maker-Breaker side information


def beck_mb_condition(m: int, n: int, q: int) -> bool:
    """True when q^m - 1 > q^n (q^n - 1) 2^(q^n - 3), the weight-function
    criterion under which Maker completes an n-subspace in the Maker-Breaker
    variant.  This is side information about the weaker game only; it never
    feeds the threshold report, because a Maker win there says nothing about
    the strong game's draws.

    Both sides are scaled by 8 so the 2^(q^n - 3) factor stays integral even
    when q^n < 8.
    """
    if m < 1 or n < 1 or q < 2:
        raise InvalidArgs(f"need m, n >= 1 and q >= 2, got m={m}, n={n}, q={q}")
    return 8 * (q**m - 1) > q**n * (q**n - 1) * 2 ** (q**n)


def beck_mb_threshold(n: int, q: int) -> int:
    """Least m for which beck_mb_condition(m, n, q) holds."""
    if n < 1 or q < 2:
        raise InvalidArgs(f"need n >= 1 and q >= 2, got n={n}, q={q}")
    bar = q**n * (q**n - 1) * 2 ** (q**n)
    m = 1
    while 8 * (q**m - 1) <= bar:
        m += 1
    return m


# ---------------------------------------------------------------------------
# assembled reports


@dataclass(frozen=True)
class ThresholdReport:
    """Proven bounds on T(n, q), each tagged by the argument that produced
    it, plus the combined interval.  lower maps tag -> proven lower bound,
    upper maps tag -> proven upper bound (binary field only, apart from the
    exactly known values).  lo is the max of the lower bounds, hi the min of
    the upper bounds or None when no finite upper bound applies, and exact
    is set when the interval collapses to a point.

    The minimum span forced in a fixed dimension (the smallest m such that
    every two-coloring of that board has a monochromatic n-flat) is known to
    be finite but has no computable definition here, so it is carried as a
    note rather than a number.
    """

    n: int
    q: int
    lower: dict[str, int]
    upper: dict[str, int]
    lo: int
    hi: int | None
    exact: bool
    affine_ramsey: str = field(default="finite, not computed")

    def interval(self) -> tuple[int, int | None]:
        return (self.lo, self.hi)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "lower": dict(self.lower),
            "upper": dict(self.upper),
            "interval": [self.lo, self.hi],
            "exact": self.exact,
            "affine_ramsey": self.affine_ramsey,
        }


def threshold_report(n: int, q: int) -> ThresholdReport:
    """Collects every applicable bound on T(n, q) with provenance tags and
    combines them into an interval.

    Lower tags: "geometric" (explicit drawing strategies), "erdos_selfridge"
    (potential counting), "pairing" (the line game in dimension 2 is drawing
    for q >= 5), "known_exact".  Upper tags, binary field only: "fourier"
    (free-set scan), "closed_form" (7 * 2^(n-3) + 3 for n >= 5), plus
    "known_exact" where a threshold is settled.  The combined edge takes the
    max of the lowers and the min of the uppers; from n = 4 on the potential
    bound beats the geometric one in the binary field, so the combined lower
    edge can exceed the geometric entry.
    """
    if n < 1:
        raise InvalidArgs(f"need n >= 1, got {n}")
    if not _is_prime_power(q):
        raise InvalidArgs(f"threshold is defined for prime power q >= 2, got {q}")

    lower = {
        "geometric": geometric_lower_bound(n),
        "erdos_selfridge": es_lower_bound(n, q),
    }
    if n == 1 and q >= 5:
        lower["pairing"] = 3

    upper: dict[str, int] = {}
    if q == 2:
        upper["fourier"] = fourier_upper_bound(n)
        if n >= 5:
            upper["closed_form"] = closed_form_upper(n)

    known = _EXACT_THRESHOLDS.get((n, q))
    if known is not None:
        lower["known_exact"] = known
        upper["known_exact"] = known

    lo = max(lower.values())
    hi = min(upper.values()) if upper else None
    if hi is not None and lo > hi:
        raise InternalInconsistency(
            f"crossed bounds for (n, q) = ({n}, {q}): lower {lower}, upper {upper}"
        )
    return ThresholdReport(
        n=n, q=q, lower=lower, upper=upper, lo=lo, hi=hi,
        exact=hi is not None and lo == hi,
    )
