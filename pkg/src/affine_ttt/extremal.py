"""Extremal set computations on small affine boards.

Quadruple counting by Walsh-Hadamard transform, exact 2-plane counts and the
rational plane-count lower bound, quotient sets and subspace lifting over F_2,
exact maximum subspace-free sets and minimum blocking sets by branch and
bound, and the recursive free-set size bound f(n, m).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import geometry
from .errors import (
    InternalInconsistency,
    InvalidArgs,
    ResourceExhausted,
    Undefined,
    WrongCharacteristic,
)

EXHAUSTIVE_LIMIT = 81  # largest board searched to proven optimality


@dataclass(frozen=True)
class PointSet:
    """Subset of the board F_q^m as a bitset (bit p <=> point p)."""

    q: int
    m: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.q**self.m:
            raise InvalidArgs("bitset reaches outside the board")

    @classmethod
    def from_points(cls, q, m, points):
        size = q**m
        bits = 0
        for p in points:
            if not 0 <= p < size:
                raise InvalidArgs(f"point {p} outside [0, {size})")
            bits |= 1 << p
        return cls(q, m, bits)

    @property
    def size(self):
        return self.bits.bit_count()

    def points(self):
        return [p for p in range(self.q**self.m) if self.bits >> p & 1]

    def __contains__(self, p):
        return 0 <= p < self.q**self.m and bool(self.bits >> p & 1)


@dataclass(frozen=True)
class ExtremalResult:
    m: int
    n: int
    q: int
    value: int  # maximum size of an n-subspace-free set (or best found)
    witness: PointSet
    exhaustive: bool

    def to_certificate(self) -> str:
        return geometry.format_point_set(self.q, self.m, self.witness.points())

    def to_sidecar(self) -> dict:
        return {
            "kind": "extremal",
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "value": self.value,
            "exhaustive": self.exhaustive,
        }


@dataclass(frozen=True)
class BlockingResult:
    m: int
    n: int
    q: int
    beta: int  # minimum size of a set meeting every n-subspace
    witness: PointSet
    exhaustive: bool

    def to_certificate(self) -> str:
        return geometry.format_point_set(self.q, self.m, self.witness.points())

    def to_sidecar(self) -> dict:
        return {
            "kind": "blocking",
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "value": self.beta,
            "exhaustive": self.exhaustive,
        }


# ---------------------------------------------------------------------------
# quadruple counting over F_2

def count_quadruples_wht(s: PointSet) -> int:
    """Ordered (a, b, c, d) in S^4 with a+b+c+d = 0, exactly.

    Transform of the indicator, fourth-power sum, divided by the board size.
    int64 is exact up to m = 12 (values bounded by 2^(5m)); larger boards
    fall back to arbitrary-precision object arrays.
    """
    if s.q != 2:
        raise WrongCharacteristic(f"quadruple transform needs q = 2, got {s.q}")
    n = 1 << s.m
    dtype = np.int64 if s.m <= 12 else object
    g = np.fromiter(((s.bits >> p) & 1 for p in range(n)), dtype=object, count=n)
    g = g.astype(dtype)
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            x = g[i:i + h].copy()
            y = g[i + h:i + 2 * h].copy()
            g[i:i + h] = x + y
            g[i + h:i + 2 * h] = x - y
        h *= 2
    fourth = int((g * g * g * g).sum())
    n4, r = divmod(fourth, n)
    if r:
        raise InternalInconsistency("fourth moment not divisible by the board size")
    return n4


def count_2planes(s: PointSet) -> int:
    """Number of 2-dim affine subspaces contained in S (q = 2).

    Quadruples with a repeated entry pair up the other two, giving 3s^2 - 2s
    degenerate solutions; each genuine plane contributes 4! ordered ones.
    """
    n4 = count_quadruples_wht(s)
    sz = s.size
    num = n4 - (3 * sz * sz - 2 * sz)
    planes, r = divmod(num, 24)
    if r or planes < 0:
        raise InternalInconsistency(f"degenerate accounting failed: N4={n4}, s={sz}")
    return planes


def plane_count_lower_bound(s: int, m: int) -> Fraction:
    """P(s, m) = (s^4/2^m - 3s^2 + 2s)/24, exact and unclamped.

    Negative values are vacuous; callers clamp to zero.
    """
    if s < 0 or m < 1:
        raise InvalidArgs(f"need s >= 0 and m >= 1, got s={s}, m={m}")
    return Fraction(s**4, 24 * 2**m) - Fraction(3 * s * s - 2 * s, 24)


# ---------------------------------------------------------------------------
# quotient by a 2-dim direction and lifting back

def _nonpivot_positions(direction: geometry.Direction, m: int):
    return [j for j in range(m) if j not in direction.pivots]


def quotient_set(s: PointSet, direction: geometry.Direction) -> PointSet:
    """Classes of direction-cosets entirely inside S, as a set over F_2^(m-2).

    Coordinates: reduce a point modulo the direction's echelon basis; the
    residue vanishes on the pivot columns and its non-pivot coordinates,
    packed in ascending position order, index the quotient point.
    """
    if s.q != 2:
        raise WrongCharacteristic(f"quotient needs q = 2, got {s.q}")
    if len(direction.pivots) != 2:
        raise InvalidArgs("direction must be 2-dimensional")
    m = s.m
    if m < 3:
        raise InvalidArgs(f"quotient needs m >= 3, got m={m}")
    codec = geometry.PointCodec(2, m)
    fieldt = geometry.make_field(2)
    nonpivots = _nonpivot_positions(direction, m)
    qcodec = geometry.PointCodec(2, m - 2)
    bits = 0
    for qidx in range(1 << (m - 2)):
        beta = qcodec.decode(qidx)
        coords = [0] * m
        for j, b in zip(nonpivots, beta):
            coords[j] = b
        base = codec.encode(coords)
        if all(
            s.bits >> geometry.point_add(base, u, codec, fieldt) & 1
            for u in direction.span
        ):
            bits |= 1 << qidx
    return PointSet(2, m - 2, bits)


def quotient_point(p: int, direction: geometry.Direction, m: int) -> int:
    """Quotient index of the coset of p, in the encoding of quotient_set."""
    codec = geometry.PointCodec(2, m)
    fieldt = geometry.make_field(2)
    coords = list(codec.decode(p))
    for i, c in enumerate(direction.pivots):
        f = coords[c]
        if f:
            row = direction.basis[i]
            for j in range(m):
                coords[j] = fieldt.sub(coords[j], fieldt.mul[f][row[j]])
    nonpivots = _nonpivot_positions(direction, m)
    qcodec = geometry.PointCodec(2, m - 2)
    return qcodec.encode([coords[j] for j in nonpivots])


def lift_subspace(direction: geometry.Direction, qsub: geometry.AffineSubspace,
                  m: int) -> geometry.AffineSubspace:
    """Preimage of a k-dim quotient subspace: a (k+2)-dim subspace of F_2^m."""
    if len(direction.pivots) != 2:
        raise InvalidArgs("direction must be 2-dimensional")
    if len(qsub.rep) != m - 2:
        raise InvalidArgs(f"quotient subspace lives over F_2^{m - 2}")
    nonpivots = _nonpivot_positions(direction, m)

    def embed(coords):
        out = [0] * m
        for j, c in zip(nonpivots, coords):
            out[j] = c
        return out

    rows = [embed(r) for r in qsub.basis] + [list(r) for r in direction.basis]
    lifted = geometry.affine_subspace_from(rows, embed(qsub.rep), m, 2)
    if lifted.dim != qsub.dim + 2:
        raise InternalInconsistency("lift lost a dimension")
    return lifted


# ---------------------------------------------------------------------------
# exact small extremal numbers

def _translations(index: geometry.IncidenceIndex):
    """perm[a][j] = j + a, so (T - a) contains j iff T contains perm[a][j]."""
    codec, fieldt = index.codec, index.field
    size = index.n_points
    return [
        [geometry.point_add(j, a, codec, fieldt) for j in range(size)]
        for a in range(size)
    ]


def _greedy_free_set(index: geometry.IncidenceIndex):
    full = index.q**index.n
    counts = [0] * len(index)
    bits = 0
    for p in range(index.n_points):
        sids = index.through[p]
        if all(counts[sid] < full - 1 for sid in sids):
            bits |= 1 << p
            for sid in sids:
                counts[sid] += 1
    return bits


def ex_search(m: int, n: int, q: int, budget: int | None = None) -> ExtremalResult:
    """Maximum n-subspace-free set, exhaustive on boards up to 81 points.

    Branch and bound over point inclusion in index order.  Symmetry is cut by
    lexicographic-leader pruning under translations: membership sequences are
    compared position by position with presence sorting first, so a branch
    dies as soon as some translate of the decided prefix is strictly smaller.
    Larger boards (or an exceeded node budget) return the best witness found
    with exhaustive=False.
    """
    index = geometry.enumerate_subspaces(m, n, q)
    size = index.n_points
    full = q**n
    through = [list(map(int, t)) for t in index.through]

    if size > EXHAUSTIVE_LIMIT:
        bits = _greedy_free_set(index)
        return ExtremalResult(m, n, q, bits.bit_count(), PointSet(q, m, bits), False)

    trans = _translations(index)
    counts = [0] * len(index)
    decided = bytearray(size)
    chosen: list[int] = []
    state = {"best": 0, "bits": 0, "nodes": 0, "aborted": False}

    def leader_pruned(frontier):
        for a in chosen:
            perm = trans[a]
            for j in range(frontier):
                k = perm[j]
                if k >= frontier:
                    break  # translate undecided here; cannot conclude
                tj, tk = decided[j], decided[k]
                if tk != tj:
                    if tk:  # translate has a point where T does not: smaller
                        return True
                    break
        return False

    def walk(i, chosen_size):
        state["nodes"] += 1
        if budget is not None and state["nodes"] > budget:
            state["aborted"] = True
            return
        if chosen_size + (size - i) <= state["best"]:
            return
        if leader_pruned(i):
            return
        if i == size:
            state["best"] = chosen_size
            state["bits"] = sum(1 << p for p in chosen)
            return
        completed = False
        for sid in through[i]:
            counts[sid] += 1
            if counts[sid] == full:
                completed = True
        if not completed:
            decided[i] = 1
            chosen.append(i)
            walk(i + 1, chosen_size + 1)
            chosen.pop()
            decided[i] = 0
        for sid in through[i]:
            counts[sid] -= 1
        if state["aborted"]:
            return
        walk(i + 1, chosen_size)

    walk(0, 0)
    witness = PointSet(q, m, state["bits"])
    return ExtremalResult(m, n, q, state["best"], witness, not state["aborted"])


# ---------------------------------------------------------------------------
# minimum blocking sets

def _greedy_blocking(index: geometry.IncidenceIndex):
    size = index.n_points
    unhit = list(index.masks)
    bits = 0
    while unhit:
        cover = [0] * size
        for mask in unhit:
            mm = mask
            while mm:
                p = (mm & -mm).bit_length() - 1
                cover[p] += 1
                mm &= mm - 1
        p = max(range(size), key=lambda x: cover[x])
        bits |= 1 << p
        unhit = [mask for mask in unhit if not mask >> p & 1]
    return bits


def _packing_bound(masks, chosen_bits):
    """Greedy pairwise-disjoint unhit subspaces; each needs its own point."""
    used = 0
    packed = 0
    for mask in masks:
        if mask & chosen_bits or mask & used:
            continue
        used |= mask
        packed += 1
    return packed


def blocking_min(m: int, n: int, q: int, budget: int | None = None) -> BlockingResult:
    """Minimum set meeting every n-subspace, exhaustive on boards up to 81.

    Branch and bound: always branch on the points of the lowest-id unhit
    subspace; the lower bound is a greedy packing of pairwise-disjoint unhit
    subspaces.  Exceeding the node budget raises ResourceExhausted.
    """
    index = geometry.enumerate_subspaces(m, n, q)
    size = index.n_points
    masks = index.masks

    if size > EXHAUSTIVE_LIMIT:
        bits = _greedy_blocking(index)
        return BlockingResult(m, n, q, bits.bit_count(), PointSet(q, m, bits), False)

    start = _greedy_blocking(index)
    state = {"best": start.bit_count(), "bits": start, "nodes": 0}

    def walk(chosen_bits, chosen_size):
        state["nodes"] += 1
        if budget is not None and state["nodes"] > budget:
            raise ResourceExhausted(
                f"blocking search exceeded {budget} nodes", nodes=state["nodes"]
            )
        target = None
        for mask in masks:
            if not mask & chosen_bits:
                target = mask
                break
        if target is None:
            if chosen_size < state["best"]:
                state["best"] = chosen_size
                state["bits"] = chosen_bits
            return
        if chosen_size + _packing_bound(masks, chosen_bits) >= state["best"]:
            return
        mm = target
        while mm:
            p = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            walk(chosen_bits | 1 << p, chosen_size + 1)

    walk(0, 0)
    return BlockingResult(m, n, q, state["best"], PointSet(q, m, state["bits"]), True)


# ---------------------------------------------------------------------------
# the recursive size bound over F_2

@functools.lru_cache(maxsize=None)
def f_recursive(n: int, m: int) -> int:
    """Recursive free-set size bound: f(1,m) = 2, f(2,m) = isqrt(3*2^m) + 1,
    and for n >= 3 the least s such that every t in [s, 2^m] satisfies
    t^4 - 2^m (3t^2 - 2t) > 24 * 2^m * G_m * (f(n-2, m-2) - 1) with G_m the
    number of 2-dim linear directions.  Exact integers throughout.

    The answer is (largest violating t) + 1.  For t^2 > 1.5 * 2^m the left
    side g(t) = t^4 - 2^m (3t^2 - 2t) is strictly increasing (there
    4t^3 > 6 * 2^m t, so g' >= 2^(m+1)), hence violators form a prefix of
    that region and the largest one can be bisected instead of scanned;
    boards up to 2^24 stay cheap that way.
    """
    if not 1 <= n <= m:
        raise InvalidArgs(f"need 1 <= n <= m, got n={n}, m={m}")
    if n == 1:
        return 2
    if n == 2:
        return math.isqrt(3 * 2**m) + 1
    gm = geometry.gaussian_binomial(m, 2, 2)
    rhs = 24 * 2**m * gm * (f_recursive(n - 2, m - 2) - 1)
    board = 2**m

    def holds(t: int) -> bool:
        return t**4 - 2**m * (3 * t * t - 2 * t) > rhs

    if not holds(board):
        raise Undefined(f"no admissible size up to 2^{m} for n={n}")
    lo = math.isqrt(3 * 2 ** (m - 1)) + 1  # smallest t with t^2 > 1.5 * 2^m
    if lo >= board or holds(lo):
        # No violator in the monotone region (can only happen for rhs = 0,
        # since g(lo) < 0 <= rhs otherwise); finish with the plain scan.
        t = min(lo, board) - 1
        while t >= 1 and holds(t):
            t -= 1
        return t + 1
    a, b = lo, board  # invariant: a violates, b holds
    while b - a > 1:
        mid = (a + b) // 2
        if holds(mid):
            b = mid
        else:
            a = mid
    return a + 1
