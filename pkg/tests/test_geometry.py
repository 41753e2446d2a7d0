"""Geometry layer: field tables, point coding, subspace enumeration.

The enumeration oracle below rebuilds affine subspace families from scratch
(span all n-tuples of vectors, dedupe, form all cosets) so the echelon-form
enumerator is checked against an independent construction.
"""

import itertools
import random

import pytest

from affine_ttt import geometry
from affine_ttt.errors import (
    BoardTooLarge,
    InvalidArgs,
    NotPrimePower,
    OutOfRange,
)

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9]


# ---------------------------------------------------------------------------
# fields

def test_field_axioms_exhaustive():
    for q in PRIME_POWERS:
        f = geometry.make_field(q)
        for a in range(q):
            assert f.add[a][0] == a
            assert f.mul[a][1] == a
            assert f.mul[a][0] == 0
            assert f.add[a][f.neg[a]] == 0
            if a:
                assert f.mul[a][f.inv[a]] == 1
            for b in range(q):
                assert f.add[a][b] == f.add[b][a]
                assert f.mul[a][b] == f.mul[b][a]
                for c in range(q):
                    assert f.add[f.add[a][b]][c] == f.add[a][f.add[b][c]]
                    assert f.mul[f.mul[a][b]][c] == f.mul[a][f.mul[b][c]]
                    assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]


def test_field_characteristic():
    for q, p in [(2, 2), (4, 2), (8, 2), (3, 3), (9, 3), (5, 5), (7, 7)]:
        f = geometry.make_field(q)
        assert f.p == p
        acc = 0
        for _ in range(p):
            acc = f.add[acc][1]
        assert acc == 0


def test_field_known_products():
    gf4 = geometry.make_field(4)
    # elements 2 = x, 3 = x + 1 under x^2 + x + 1
    assert gf4.mul[2][2] == 3
    assert gf4.add[2][3] == 1
    assert gf4.mul[2][3] == 1
    gf8 = geometry.make_field(8)
    # x * x^2 = x^3 = x + 1 under x^3 + x + 1
    assert gf8.mul[2][4] == 3
    gf9 = geometry.make_field(9)
    # x * x = -1 = 2 under x^2 + 1
    assert gf9.mul[3][3] == 2
    gf5 = geometry.make_field(5)
    assert gf5.mul[2][4] == 3
    assert gf5.inv[2] == 3


def test_not_prime_power():
    for q in [1, 6, 10, 12, 15]:
        with pytest.raises(NotPrimePower):
            geometry.make_field(q)


def test_larger_prime_powers_construct():
    # outside the required 2..9 range but allowed; axioms spot-checked
    for q in [16, 25, 27]:
        f = geometry.make_field(q)
        rng = random.Random(q)
        for _ in range(200):
            a, b, c = (rng.randrange(q) for _ in range(3))
            assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]
            if a:
                assert f.mul[a][f.inv[a]] == 1


# ---------------------------------------------------------------------------
# point codec and vector ops

def test_codec_roundtrip():
    for q, m in [(2, 4), (3, 3), (4, 2), (5, 2), (9, 1), (7, 2)]:
        codec = geometry.PointCodec(q, m)
        for idx in range(codec.size):
            assert codec.encode(codec.decode(idx)) == idx


def test_codec_little_endian():
    codec = geometry.PointCodec(3, 2)
    assert codec.encode((1, 2)) == 1 + 2 * 3
    assert codec.decode(5) == (2, 1)


def test_codec_range_errors():
    codec = geometry.PointCodec(3, 2)
    with pytest.raises(OutOfRange):
        codec.decode(9)
    with pytest.raises(OutOfRange):
        codec.encode((3, 0))
    with pytest.raises(InvalidArgs):
        codec.encode((1, 1, 1))


def test_point_ops_examples():
    codec = geometry.PointCodec(3, 2)
    f = geometry.make_field(3)
    x = codec.encode((1, 2))
    y = codec.encode((2, 2))
    assert codec.decode(geometry.point_add(x, y, codec, f)) == (0, 1)
    assert geometry.point_add(x, geometry.point_neg(x, codec, f), codec, f) == 0

    codec2 = geometry.PointCodec(2, 3)
    f2 = geometry.make_field(2)
    for p in range(8):
        assert geometry.point_add(p, p, codec2, f2) == 0

    codec4 = geometry.PointCodec(4, 1)
    f4 = geometry.make_field(4)
    assert geometry.point_add(2, 3, codec4, f4) == 1
    assert geometry.scalar_mul(2, 2, codec4, f4) == 3


def test_point_ops_linearity_random():
    rng = random.Random(7)
    for q, m in [(2, 4), (3, 2), (4, 2), (5, 2)]:
        codec = geometry.PointCodec(q, m)
        f = geometry.make_field(q)
        for _ in range(100):
            x = rng.randrange(codec.size)
            y = rng.randrange(codec.size)
            c = rng.randrange(q)
            left = geometry.scalar_mul(c, geometry.point_add(x, y, codec, f), codec, f)
            right = geometry.point_add(
                geometry.scalar_mul(c, x, codec, f),
                geometry.scalar_mul(c, y, codec, f),
                codec,
                f,
            )
            assert left == right


# ---------------------------------------------------------------------------
# enumeration oracle: rebuild families from spans and cosets

def brute_affine_families(m, n, q):
    """All affine n-subspaces of F_q^m as a set of frozen point-index sets,
    built with no echelon-form machinery."""
    f = geometry.make_field(q)
    codec = geometry.PointCodec(q, m)
    size = q**m

    def span_of(vecs):
        pts = {0}
        for v in vecs:
            mults = [geometry.scalar_mul(c, v, codec, f) for c in range(q)]
            pts = {geometry.point_add(p, mu, codec, f) for p in pts for mu in mults}
        return frozenset(pts)

    linear = set()
    for vecs in itertools.combinations(range(1, size), n):
        s = span_of(vecs)
        if len(s) == q**n:
            linear.add(s)

    families = set()
    for sub in linear:
        for a in range(size):
            families.add(
                frozenset(geometry.point_add(a, u, codec, f) for u in sub)
            )
    return families


ORACLE_CASES = [
    (2, 1, 2),
    (2, 1, 3),
    (2, 1, 4),
    (2, 1, 5),
    (3, 1, 2),
    (3, 2, 2),
    (3, 2, 3),
    (4, 2, 2),
    (4, 3, 2),
    (2, 2, 3),
]


@pytest.mark.parametrize("m,n,q", ORACLE_CASES)
def test_enumeration_matches_brute_force(m, n, q, index_cache):
    idx = index_cache(m, n, q)
    enumerated = {frozenset(s.points) for s in idx.subspaces}
    assert enumerated == brute_affine_families(m, n, q)
    assert len(idx.subspaces) == len(enumerated)  # no duplicates


def test_spot_family_sizes(index_cache):
    assert len(index_cache(2, 1, 3)) == 12
    assert len(index_cache(3, 2, 2)) == 14
    assert len(index_cache(4, 2, 3)) == 1170


def test_gaussian_binomial_values():
    gb = geometry.gaussian_binomial
    assert gb(3, 2, 2) == 7
    assert gb(4, 2, 3) == 130
    assert gb(4, 1, 2) == 15
    assert gb(4, 2, 2) == 35
    for m in range(7):
        for q in (2, 3, 4):
            assert gb(m, 0, q) == 1
            assert gb(m, m, q) == 1
            for n in range(m + 1):
                assert gb(m, n, q) == gb(m, m - n, q)


def test_census_equals_formula_across_grid():
    for q in (2, 3, 4, 5):
        m = 1
        while q**m <= 2500:
            for n in range(1, m + 1):
                assert geometry.enumeration_census(m, n, q) == geometry.subspace_count(m, n, q)
            m += 1


def test_whole_board_is_single_subspace(index_cache):
    for m, q in [(2, 2), (2, 3), (1, 5), (2, 4)]:
        idx = index_cache(m, m, q)
        assert len(idx) == 1
        assert idx.subspaces[0].points == tuple(range(q**m))


# ---------------------------------------------------------------------------
# canonical forms and incidence structure

def subspace_invariants(idx):
    q, m, n = idx.q, idx.m, idx.n
    for s in idx.subspaces:
        assert len(s.points) == q**n
        assert bin(s.mask).count("1") == q**n
        pivots = [next(j for j in range(m) if row[j]) for row in s.basis]
        assert pivots == sorted(pivots) and len(set(pivots)) == n
        for i, c in enumerate(pivots):
            assert s.basis[i][c] == 1
            for i2 in range(n):
                if i2 != i:
                    assert s.basis[i2][c] == 0
            assert s.rep[c] == 0


@pytest.mark.parametrize("m,n,q", [(3, 2, 2), (2, 1, 3), (4, 2, 3), (3, 1, 4)])
def test_canonical_forms(m, n, q, index_cache):
    subspace_invariants(index_cache(m, n, q))


@pytest.mark.parametrize("m,n,q", [(3, 2, 2), (2, 1, 3), (4, 2, 3)])
def test_through_lists(m, n, q, index_cache):
    idx = index_cache(m, n, q)
    per_point = geometry.gaussian_binomial(m, n, q)
    total = 0
    for p in range(idx.n_points):
        ids = list(idx.through[p])
        assert len(ids) == per_point
        assert ids == sorted(ids)
        for sid in ids:
            assert idx.masks[sid] >> p & 1
        total += len(ids)
    assert total == q**n * len(idx)


def test_affine_closure_random(index_cache):
    rng = random.Random(11)
    for m, n, q in [(3, 2, 3), (4, 2, 2), (2, 1, 5)]:
        idx = index_cache(m, n, q)
        f, codec = idx.field, idx.codec
        for _ in range(200):
            s = idx.subspaces[rng.randrange(len(idx))]
            x, y = rng.choice(s.points), rng.choice(s.points)
            c = rng.randrange(q)
            # c*x + (1-c)*y is an affine combination, must stay inside
            one_minus = f.sub(1, c)
            p = geometry.point_add(
                geometry.scalar_mul(c, x, codec, f),
                geometry.scalar_mul(one_minus, y, codec, f),
                codec,
                f,
            )
            assert s.mask >> p & 1


def test_cosets_partition_board(index_cache):
    for m, n, q in [(3, 2, 2), (4, 2, 3), (2, 1, 5)]:
        idx = index_cache(m, n, q)
        by_dir = {}
        for s in idx.subspaces:
            by_dir.setdefault(s.direction_id, []).append(s)
        for group in by_dir.values():
            union = 0
            count = 0
            for s in group:
                assert union & s.mask == 0
                union |= s.mask
                count += 1
            assert union == (1 << idx.n_points) - 1
            assert count == q ** (m - n)


def test_streaming_enumeration_agrees(index_cache):
    idx = index_cache(3, 2, 2)
    assert list(geometry.iter_subspace_masks(3, 2, 2)) == idx.masks


def test_board_limit():
    with pytest.raises(BoardTooLarge):
        geometry.enumerate_subspaces(13, 1, 2)
    with pytest.raises(BoardTooLarge):
        geometry.enumerate_subspaces(3, 1, 2, limit=7)
    with pytest.raises(InvalidArgs):
        geometry.enumerate_subspaces(2, 3, 2)


def test_affine_subspace_from_canonicalizes():
    # same plane given by two different bases / reps must canonicalize equal
    a = geometry.affine_subspace_from([(1, 0, 0), (0, 1, 0)], (0, 0, 1), 3, 2)
    b = geometry.affine_subspace_from([(0, 1, 0), (1, 1, 0)], (1, 1, 1), 3, 2)
    assert a.basis == b.basis and a.rep == b.rep and a.mask == b.mask
    assert a.dim == 2
    with pytest.raises(InvalidArgs):
        geometry.affine_subspace_from([(1, 0, 0), (1, 0, 0)], (0, 0, 0), 3, 2)


# ---------------------------------------------------------------------------
# certificates

def test_certificate_roundtrip():
    text = geometry.format_point_set(3, 2, [8, 0, 4])
    assert text == "3 2\n0 4 8\n"
    assert geometry.parse_point_set(text) == (3, 2, (0, 4, 8))
    q, m, pts = geometry.parse_point_set("2 4\n\n")
    assert (q, m, pts) == (2, 4, ())


def test_certificate_errors():
    with pytest.raises(OutOfRange):
        geometry.parse_point_set("2 2\n0 4\n")
    with pytest.raises(InvalidArgs):
        geometry.parse_point_set("2 2\n1 1\n")
    with pytest.raises(NotPrimePower):
        geometry.parse_point_set("6 2\n0\n")
    with pytest.raises(InvalidArgs):
        geometry.parse_point_set("2\n0\n")
