"""Finite affine geometry over GF(q).

Field tables, point index coding, and enumeration of the affine n-subspaces
of F_q^m together with their point incidence structure.  Points of F_q^m are
integers in [0, q^m): coordinate 0 is the least significant base-q digit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BoardTooLarge,
    InternalInconsistency,
    InvalidArgs,
    NotPrimePower,
    OutOfRange,
)

# Fixed moduli for the non-prime orders in the supported range, written as
# low-order-first coefficient tuples of the non-leading terms.
#   4: x^2 + x + 1,  8: x^3 + x + 1,  9: x^2 + 1
_FIXED_MODULI = {4: (1, 1), 8: (1, 1, 0), 9: (1, 0)}

DEFAULT_BOARD_LIMIT = 4096


def _prime_power(q: int):
    """Return (p, k) with q == p**k, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"field order must be >= 2, got {q}")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    k = 0
    t = q
    while t % p == 0:
        t //= p
        k += 1
    if t != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


def _poly_mul_mod(a, b, modulus, p):
    """Multiply digit tuples a, b in F_p[x] and reduce modulo `modulus`.

    `modulus` holds the non-leading coefficients of a monic degree-k poly.
    """
    k = len(modulus)
    prod = [0] * (2 * k)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^k == -modulus
    for d in range(2 * k - 1, k - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for j, mj in enumerate(modulus):
            prod[d - k + j] = (prod[d - k + j] - c * mj) % p
    return tuple(prod[:k])


def _find_modulus(p, k):
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    for tail in itertools.product(range(p), repeat=k):
        # tail is low-order-first; constant term must be nonzero
        if tail[0] == 0:
            continue
        if _is_irreducible(tail, p, k):
            return tail
    raise InternalInconsistency(f"no irreducible polynomial of degree {k} over F_{p}")


def _is_irreducible(tail, p, k):
    # trial division by all monic polynomials of degree 1..k//2
    full = list(tail) + [1]
    for d in range(1, k // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            div = list(lower) + [1]
            if _poly_divides(div, full, p):
                return False
    return True


def _poly_divides(div, poly, p):
    rem = list(poly)
    dd = len(div) - 1
    inv_lead = pow(div[-1], p - 2, p)  # div is monic so this is 1, kept general
    while len(rem) - 1 >= dd:
        lead = rem[-1] % p
        if lead:
            f = (lead * inv_lead) % p
            off = len(rem) - 1 - dd
            for i, c in enumerate(div):
                rem[off + i] = (rem[off + i] - f * c) % p
        rem.pop()
        while rem and rem[-1] % p == 0 and len(rem) - 1 >= dd:
            rem.pop()
    return all(c % p == 0 for c in rem)


@dataclass(frozen=True)
class FieldTable:
    """Dense arithmetic tables for GF(q) under the element indexing
    e = sum(c_i * p**i) over the polynomial coefficients c_i.

    Index 0 is the additive identity and index 1 the multiplicative one.
    """

    q: int
    p: int
    k: int
    add: tuple
    mul: tuple
    neg: tuple
    inv: tuple

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def div(self, a, b):
        if b == 0:
            raise OutOfRange("division by zero field element")
        return self.mul[a][self.inv[b]]

    @property
    def add_np(self):
        return _field_np_tables(self.q)[0]

    @property
    def mul_np(self):
        return _field_np_tables(self.q)[1]


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    """Build the GF(q) tables; raises NotPrimePower for composite non-powers."""
    p, k = _prime_power(q)
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
        neg = tuple((-a) % p for a in range(p))
        inv = (0,) + tuple(pow(a, p - 2, p) for a in range(1, p))
        return FieldTable(q, p, k, add, mul, neg, inv)

    modulus = _FIXED_MODULI.get(q) or _find_modulus(p, k)
    digits = [tuple((e // p**i) % p for i in range(k)) for e in range(q)]
    enc = {d: e for e, d in enumerate(digits)}
    add = tuple(
        tuple(enc[tuple((x + y) % p for x, y in zip(digits[a], digits[b]))] for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(enc[_poly_mul_mod(digits[a], digits[b], modulus, p)] for b in range(q))
        for a in range(q)
    )
    neg = tuple(enc[tuple((-x) % p for x in digits[a])] for a in range(q))
    inv = [0] * q
    for a in range(1, q):
        for b in range(1, q):
            if mul[a][b] == 1:
                inv[a] = b
                break
        else:
            raise InternalInconsistency(f"no inverse for element {a} in GF({q})")
    return FieldTable(q, p, k, add, mul, neg, tuple(inv))


@lru_cache(maxsize=None)
def _field_np_tables(q):
    f = make_field(q)
    return (
        np.array(f.add, dtype=np.int64),
        np.array(f.mul, dtype=np.int64),
    )


@dataclass(frozen=True)
class PointCodec:
    """Base-q positional coding of F_q^m points, coordinate 0 least significant."""

    q: int
    m: int

    @property
    def size(self):
        return self.q**self.m

    @property
    def powers(self):
        return tuple(self.q**i for i in range(self.m))

    def encode(self, coords) -> int:
        if len(coords) != self.m:
            raise InvalidArgs(f"expected {self.m} coordinates, got {len(coords)}")
        idx = 0
        for i, c in enumerate(coords):
            if not 0 <= c < self.q:
                raise OutOfRange(f"coordinate {c} not in [0, {self.q})")
            idx += c * self.q**i
        return idx

    def decode(self, index: int):
        if not 0 <= index < self.size:
            raise OutOfRange(f"point index {index} not in [0, {self.size})")
        out = []
        for _ in range(self.m):
            out.append(index % self.q)
            index //= self.q
        return tuple(out)


def point_add(x: int, y: int, codec: PointCodec, fieldt: FieldTable) -> int:
    """Coordinatewise field addition on point indices."""
    q = codec.q
    out = 0
    mult = 1
    for _ in range(codec.m):
        out += fieldt.add[x % q][y % q] * mult
        x //= q
        y //= q
        mult *= q
    return out


def point_neg(x: int, codec: PointCodec, fieldt: FieldTable) -> int:
    q = codec.q
    out = 0
    mult = 1
    for _ in range(codec.m):
        out += fieldt.neg[x % q] * mult
        x //= q
        mult *= q
    return out


def scalar_mul(c: int, x: int, codec: PointCodec, fieldt: FieldTable) -> int:
    if not 0 <= c < codec.q:
        raise OutOfRange(f"scalar {c} not in [0, {codec.q})")
    q = codec.q
    out = 0
    mult = 1
    for _ in range(codec.m):
        out += fieldt.mul[c][x % q] * mult
        x //= q
        mult *= q
    return out


def gaussian_binomial(m: int, n: int, q: int) -> int:
    """Number of n-dimensional linear subspaces of F_q^m, exact."""
    if n < 0 or n > m:
        return 0
    num, den = 1, 1
    for i in range(n):
        num *= q**m - q**i
        den *= q**n - q**i
    if num % den:
        raise InternalInconsistency("Gaussian binomial is not an integer")
    return num // den


def subspace_count(m: int, n: int, q: int) -> int:
    """Number of affine n-subspaces of F_q^m: q^(m-n) cosets per direction."""
    return q ** (m - n) * gaussian_binomial(m, n, q)


def enumeration_census(m: int, n: int, q: int) -> int:
    """Subspace count as the enumerator derives it: sum over pivot-column
    choices of q^(free entries) reduced-echelon bases, times q^(m-n) coset
    representatives.  Must agree with subspace_count; kept separate so the
    agreement stays an actual cross-check.
    """
    total = 0
    for pivots in itertools.combinations(range(m), n):
        free = _free_cells(pivots, m)
        total += q ** len(free)
    return q ** (m - n) * total


def _free_cells(pivots, m):
    """Coordinates of the free entries of an RREF basis with these pivots."""
    pivot_set = set(pivots)
    cells = []
    for row, c in enumerate(pivots):
        for col in range(c + 1, m):
            if col not in pivot_set:
                cells.append((row, col))
    return cells


@dataclass(frozen=True)
class Direction:
    """An n-dimensional linear subspace in reduced echelon form."""

    id: int
    pivots: tuple
    basis: tuple  # n rows, each an m-tuple of field element indices
    span: tuple  # the q^n point indices of the subspace through 0


@dataclass(frozen=True)
class AffineSubspace:
    """One coset rep + direction basis, with its full point set.

    `rep` is the unique coset representative with zeros at the direction's
    pivot coordinates.  `mask` is the point bitset (bit i <=> point i).
    """

    id: int
    dim: int
    basis: tuple
    rep: tuple
    points: tuple
    mask: int
    direction_id: int


class IncidenceIndex:
    """All affine n-subspaces of F_q^m plus point -> subspace-id lists."""

    def __init__(self, m, n, q, directions, subspaces, through):
        self.m = m
        self.n = n
        self.q = q
        self.field = make_field(q)
        self.codec = PointCodec(q, m)
        self.directions = directions
        self.subspaces = subspaces
        self.through = through  # tuple of np.int32 arrays, one per point
        self.masks = [s.mask for s in subspaces]
        self.n_points = q**m

    def __len__(self):
        return len(self.subspaces)


def _coeff_matrix(n, q):
    """All of F_q^n as a (q^n, n) digit matrix in index order."""
    idx = np.arange(q**n, dtype=np.int64)
    cols = [(idx // q**i) % q for i in range(n)]
    return np.stack(cols, axis=1)


def linear_directions(m: int, n: int, q: int):
    """All n-dim linear subspaces of F_q^m as echelon-form Direction records,
    ordered by (pivot columns, free-entry assignment), ids dense from 0.
    """
    if not 1 <= n <= m:
        raise InvalidArgs(f"need 1 <= n <= m, got n={n}, m={m}")
    fieldt = make_field(q)
    add_np, mul_np = fieldt.add_np, fieldt.mul_np
    powers = np.array([q**i for i in range(m)], dtype=np.int64)
    coeffs = _coeff_matrix(n, q)

    out = []
    for pivots in itertools.combinations(range(m), n):
        free = _free_cells(pivots, m)
        for assign in itertools.product(range(q), repeat=len(free)):
            rows = np.zeros((n, m), dtype=np.int64)
            for row, c in enumerate(pivots):
                rows[row][c] = 1
            for (row, col), v in zip(free, assign):
                rows[row][col] = v
            # span digits: fold coeff_i * row_i under the field tables
            acc = np.zeros((q**n, m), dtype=np.int64)
            for i in range(n):
                term = mul_np[coeffs[:, i].reshape(-1, 1), rows[i].reshape(1, -1)]
                acc = add_np[acc, term]
            span = acc @ powers
            out.append(
                Direction(
                    id=len(out),
                    pivots=pivots,
                    basis=tuple(tuple(int(v) for v in r) for r in rows),
                    span=tuple(int(v) for v in span),
                )
            )
    return out


def _coset_reps(pivots, m, q):
    """Digit matrix of the q^(m-n) canonical representatives: zero at pivots."""
    nonpivot = [j for j in range(m) if j not in set(pivots)]
    reps = np.zeros((q ** len(nonpivot), m), dtype=np.int64)
    if nonpivot:
        fill = _coeff_matrix(len(nonpivot), q)
        for col, j in enumerate(nonpivot):
            reps[:, j] = fill[:, col]
    return reps


def enumerate_subspaces(m: int, n: int, q: int, *, limit: int = DEFAULT_BOARD_LIMIT) -> IncidenceIndex:
    """Materialize every affine n-subspace of F_q^m with incidence lists.

    Raises BoardTooLarge when q^m exceeds `limit`.
    """
    if q**m > limit:
        raise BoardTooLarge(f"q^m = {q**m} exceeds limit {limit}")
    fieldt = make_field(q)
    add_np = fieldt.add_np
    powers = np.array([q**i for i in range(m)], dtype=np.int64)
    directions = linear_directions(m, n, q)

    subspaces = []
    through = [[] for _ in range(q**m)]
    for d in directions:
        span_digits = np.stack(
            [np.array(PointCodec(q, m).decode(p), dtype=np.int64) for p in d.span]
        )
        reps = _coset_reps(d.pivots, m, q)
        # all coset point indices at once: (reps, span) -> (n_reps, q^n)
        summed = add_np[reps[:, None, :], span_digits[None, :, :]]
        pts = summed @ powers
        for r in range(pts.shape[0]):
            row = sorted(int(v) for v in pts[r])
            mask = 0
            for p in row:
                mask |= 1 << p
            sid = len(subspaces)
            subspaces.append(
                AffineSubspace(
                    id=sid,
                    dim=n,
                    basis=d.basis,
                    rep=tuple(int(v) for v in reps[r]),
                    points=tuple(row),
                    mask=mask,
                    direction_id=d.id,
                )
            )
            for p in row:
                through[p].append(sid)

    expected = subspace_count(m, n, q)
    if len(subspaces) != expected:
        raise InternalInconsistency(
            f"enumerated {len(subspaces)} subspaces, expected {expected}"
        )
    through_np = tuple(np.array(t, dtype=np.int32) for t in through)
    return IncidenceIndex(m, n, q, directions, subspaces, through_np)


def iter_subspace_masks(m: int, n: int, q: int):
    """Stream the point bitsets of all affine n-subspaces without storing them.

    Same ordering as enumerate_subspaces; no board-size guard, so callers can
    walk families too large to materialize.
    """
    fieldt = make_field(q)
    add_np = fieldt.add_np
    powers = np.array([q**i for i in range(m)], dtype=np.int64)
    codec = PointCodec(q, m)
    for d in linear_directions(m, n, q):
        span_digits = np.stack([np.array(codec.decode(p), dtype=np.int64) for p in d.span])
        reps = _coset_reps(d.pivots, m, q)
        summed = add_np[reps[:, None, :], span_digits[None, :, :]]
        pts = summed @ powers
        for r in range(pts.shape[0]):
            mask = 0
            for v in pts[r]:
                mask |= 1 << int(v)
            yield mask


def affine_subspace_from(basis_rows, rep, m: int, q: int) -> AffineSubspace:
    """Canonical AffineSubspace from an arbitrary basis + representative.

    Reduces the basis to echelon form and the representative modulo the
    direction, so equal cosets produce equal records.  id is -1: the record
    does not belong to an enumeration index.
    """
    fieldt = make_field(q)
    codec = PointCodec(q, m)
    rows = [list(r) for r in basis_rows]
    if any(len(r) != m for r in rows) or len(rep) != m:
        raise InvalidArgs("basis rows and rep must have length m")
    rows = _rref(rows, m, q, fieldt)
    n = len(rows)
    pivots = tuple(next(j for j in range(m) if r[j] != 0) for r in rows)
    red = list(rep)
    for i, c in enumerate(pivots):
        f = red[c]
        if f:
            for j in range(m):
                red[j] = fieldt.sub(red[j], fieldt.mul[f][rows[i][j]])
    rep_idx = codec.encode(red)
    span = [0]
    for r in rows:
        r_idx = codec.encode(r)
        mults = [scalar_mul(c, r_idx, codec, fieldt) for c in range(q)]
        span = [point_add(p, mu, codec, fieldt) for mu in mults for p in span]
    pts = sorted(point_add(rep_idx, u, codec, fieldt) for u in span)
    mask = 0
    for p in pts:
        mask |= 1 << p
    return AffineSubspace(
        id=-1,
        dim=n,
        basis=tuple(tuple(r) for r in rows),
        rep=tuple(red),
        points=tuple(pts),
        mask=mask,
        direction_id=-1,
    )


def _rref(rows, m, q, fieldt):
    """Row-reduce over GF(q); drops zero rows; raises on dependent input."""
    mat = [list(r) for r in rows]
    out = []
    col = 0
    while mat and col < m:
        pivot_row = next((i for i, r in enumerate(mat) if r[col] != 0), None)
        if pivot_row is None:
            col += 1
            continue
        row = mat.pop(pivot_row)
        f = fieldt.inv[row[col]]
        row = [fieldt.mul[f][v] for v in row]
        for r in mat:
            g = r[col]
            if g:
                for j in range(m):
                    r[j] = fieldt.sub(r[j], fieldt.mul[g][row[j]])
        for r in out:
            g = r[col]
            if g:
                for j in range(m):
                    r[j] = fieldt.sub(r[j], fieldt.mul[g][row[j]])
        out.append(row)
        col += 1
    if any(any(v for v in r) for r in mat):
        raise InternalInconsistency("row reduction left unprocessed nonzero rows")
    if len(out) != len(rows):
        raise InvalidArgs("basis rows are linearly dependent")
    return out


# ---------------------------------------------------------------------------
# point-set certificates

def format_point_set(q: int, m: int, points) -> str:
    """Two-line text certificate: header 'q m', then sorted point indices."""
    size = q**m
    pts = sorted(set(int(p) for p in points))
    if pts and not (0 <= pts[0] and pts[-1] < size):
        raise OutOfRange("certificate point index outside the board")
    body = " ".join(str(p) for p in pts)
    return f"{q} {m}\n{body}\n"


def parse_point_set(text: str):
    """Inverse of format_point_set; returns (q, m, points tuple)."""
    lines = text.strip("\n").split("\n")
    if not lines or not lines[0].strip():
        raise InvalidArgs("empty certificate")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidArgs(f"malformed certificate header: {lines[0]!r}")
    q, m = int(head[0]), int(head[1])
    _prime_power(q)
    body = lines[1].split() if len(lines) > 1 else []
    pts = [int(t) for t in body]
    size = q**m
    seen = set()
    for p in pts:
        if not 0 <= p < size:
            raise OutOfRange(f"point {p} outside board of size {size}")
        if p in seen:
            raise InvalidArgs(f"duplicate point {p} in certificate")
        seen.add(p)
    return q, m, tuple(sorted(pts))
