"""Quadruple counting, quotient lifting, exact ex/beta searches, f(n, m)."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from affine_ttt import extremal, geometry, solver
from affine_ttt.errors import (
    InternalInconsistency,
    InvalidArgs,
    ResourceExhausted,
    WrongCharacteristic,
)
from affine_ttt.extremal import (
    PointSet,
    blocking_min,
    count_2planes,
    count_quadruples_wht,
    ex_search,
    f_recursive,
    lift_subspace,
    plane_count_lower_bound,
    quotient_point,
    quotient_set,
)


def random_set(rng, m, density=0.5):
    board = 1 << m
    bits = 0
    for p in range(board):
        if rng.random() < density:
            bits |= 1 << p
    return PointSet(2, m, bits)


def quadruples_pair_count(points, m):
    """Independent oracle: N4 = sum_x r(x)^2 with r the XOR pair counts."""
    if not points:
        return 0
    a = np.array(points, dtype=np.int64)
    r = np.bincount(np.bitwise_xor.outer(a, a).ravel(), minlength=1 << m)
    return int((r * r).sum())


def quadruples_cubic(points):
    """Literal cubic loop for small sets."""
    s = set(points)
    total = 0
    for a in points:
        for b in points:
            for c in points:
                if a ^ b ^ c in s:
                    total += 1
    return total


def test_pointset_basics():
    s = PointSet.from_points(2, 3, [0, 5, 7])
    assert s.size == 3
    assert s.points() == [0, 5, 7]
    assert 5 in s and 1 not in s and 8 not in s
    with pytest.raises(InvalidArgs):
        PointSet.from_points(2, 3, [8])
    with pytest.raises(InvalidArgs):
        PointSet(2, 3, 1 << 8)


def test_quadruples_full_board():
    for m in (3, 4, 5, 13):
        full = PointSet(2, m, (1 << (1 << m)) - 1)
        assert count_quadruples_wht(full) == 2 ** (3 * m)


def test_quadruples_need_characteristic_two():
    with pytest.raises(WrongCharacteristic):
        count_quadruples_wht(PointSet(3, 2, 0b1011))


def test_quadruples_on_a_plane(index_cache):
    index = index_cache(3, 2, 2)
    plane = PointSet(2, 3, index.subspaces[0].mask)
    assert plane.size == 4
    assert count_quadruples_wht(plane) == 64


def test_quadruples_match_pair_count_oracle():
    rng = random.Random(101)
    for m in range(4, 11):
        for _ in range(100):
            s = random_set(rng, m)
            assert count_quadruples_wht(s) == quadruples_pair_count(s.points(), m)


def test_quadruples_match_cubic_oracle():
    rng = random.Random(102)
    for m in (4, 5):
        for _ in range(10):
            pts = rng.sample(range(1 << m), rng.randrange(3, 13))
            s = PointSet.from_points(2, m, pts)
            assert count_quadruples_wht(s) == quadruples_cubic(pts)


def test_two_planes_examples(index_cache):
    index = index_cache(3, 2, 2)
    assert count_2planes(PointSet(2, 3, index.subspaces[3].mask)) == 1
    rng = random.Random(103)
    for sz in (0, 1, 2, 3):
        pts = rng.sample(range(16), sz)
        assert count_2planes(PointSet.from_points(2, 4, pts)) == 0


def test_two_planes_match_incidence_scan():
    rng = random.Random(104)
    cases = [(4, 20), (5, 20), (6, 10), (7, 3), (8, 1)]
    for m, reps in cases:
        for _ in range(reps):
            s = random_set(rng, m)
            direct = sum(
                1 for mask in geometry.iter_subspace_masks(m, 2, 2)
                if mask & ~s.bits == 0
            )
            assert count_2planes(s) == direct


def test_plane_lower_bound_values():
    assert plane_count_lower_bound(4, 3) == Fraction(-1, 3)
    for m in range(1, 8):
        assert plane_count_lower_bound(0, m) == 0
    with pytest.raises(InvalidArgs):
        plane_count_lower_bound(-1, 4)


def test_plane_lower_bound_is_a_lower_bound():
    rng = random.Random(105)
    for m in range(4, 9):
        for _ in range(100):
            s = random_set(rng, m, density=rng.choice([0.3, 0.5, 0.8]))
            bound = plane_count_lower_bound(s.size, m)
            assert Fraction(count_2planes(s)) >= max(Fraction(0), bound)


# -- quotients and lifts ------------------------------------------------------

def test_quotient_full_board_and_single_coset(index_cache):
    m = 4
    index = index_cache(4, 2, 2)
    direction = index.directions[5]
    full = PointSet(2, m, (1 << (1 << m)) - 1)
    assert quotient_set(full, direction).bits == (1 << (1 << (m - 2))) - 1
    sub = next(s for s in index.subspaces if s.direction_id == direction.id)
    coset = PointSet(2, m, sub.mask)
    qs = quotient_set(coset, direction)
    assert qs.size == 1
    assert qs.points() == [quotient_point(sub.points[0], direction, m)]


def test_quotient_points_partition_cosets(index_cache):
    index = index_cache(4, 2, 2)
    direction = index.directions[2]
    seen = {}
    for p in range(16):
        seen.setdefault(quotient_point(p, direction, 4), set()).add(p)
    assert len(seen) == 4
    cosets = {
        frozenset(s.points) for s in index.subspaces if s.direction_id == direction.id
    }
    assert {frozenset(v) for v in seen.values()} == cosets


def test_quotient_sizes_sum_to_plane_count():
    rng = random.Random(106)
    for m, reps in [(4, 10), (5, 6), (6, 3)]:
        directions = geometry.linear_directions(m, 2, 2)
        gm = geometry.gaussian_binomial(m, 2, 2)
        assert len(directions) == gm
        for _ in range(reps):
            s = random_set(rng, m)
            sizes = [quotient_set(s, u).size for u in directions]
            n2 = count_2planes(s)
            assert sum(sizes) == n2
            assert gm * max(sizes) >= n2


def test_quotient_validation(index_cache):
    index3 = index_cache(3, 1, 2)
    with pytest.raises(InvalidArgs):
        quotient_set(PointSet(2, 3, 0b1), index3.directions[0])
    with pytest.raises(WrongCharacteristic):
        direction = geometry.linear_directions(3, 2, 2)[0]
        quotient_set(PointSet(3, 3, 0b1), direction)


def test_lift_single_point_and_whole_space(index_cache):
    m = 4
    index = index_cache(4, 2, 2)
    direction = index.directions[1]
    sub = next(s for s in index.subspaces if s.direction_id == direction.id)
    qp = quotient_point(sub.points[0], direction, m)
    qcodec = geometry.PointCodec(2, m - 2)
    single = geometry.affine_subspace_from([], qcodec.decode(qp), m - 2, 2)
    lifted = lift_subspace(direction, single, m)
    assert lifted.dim == 2
    assert set(lifted.points) == set(sub.points)
    whole = geometry.affine_subspace_from(
        [[1, 0], [0, 1]], [0, 0], m - 2, 2
    )
    assert lift_subspace(direction, whole, m).mask == (1 << (1 << m)) - 1


def test_lift_recovers_planted_plane():
    m = 6
    rng = random.Random(107)
    directions3 = geometry.linear_directions(m, 3, 2)
    big = directions3[7]
    inside = set(big.span)
    u = next(
        d for d in geometry.linear_directions(m, 2, 2) if set(d.span) <= inside
    )
    codec = geometry.PointCodec(2, m)
    fieldt = geometry.make_field(2)
    shift = 37
    plane = {geometry.point_add(shift, p, codec, fieldt) for p in big.span}
    noise = {rng.randrange(1 << m) for _ in range(10)}
    s = PointSet.from_points(2, m, plane | noise)
    qimage = sorted({quotient_point(p, u, m) for p in plane})
    assert len(qimage) == 2
    qs = quotient_set(s, u)
    assert all(qp in qs for qp in qimage)
    qcodec = geometry.PointCodec(2, m - 2)
    a, b = (qcodec.decode(x) for x in qimage)
    diff = [(x - y) % 2 for x, y in zip(a, b)]
    qline = geometry.affine_subspace_from([diff], a, m - 2, 2)
    lifted = lift_subspace(u, qline, m)
    assert lifted.dim == 3
    assert set(lifted.points) == plane
    assert lifted.mask & ~s.bits == 0


# -- exact extremal numbers ---------------------------------------------------

def contains_no_subspace(witness, index):
    return all(mask & ~witness.bits for mask in index.masks)


def test_ex_known_values(index_cache):
    res = ex_search(4, 2, 2)
    assert (res.value, res.exhaustive) == (6, True)
    assert res.witness.size == 6
    assert contains_no_subspace(res.witness, index_cache(4, 2, 2))

    res = ex_search(2, 1, 3)
    assert (res.value, res.exhaustive) == (4, True)
    assert contains_no_subspace(res.witness, index_cache(2, 1, 3))

    assert ex_search(3, 2, 2).value == 4


def test_ex_whole_board_cases():
    for (m, q) in [(2, 2), (3, 2), (2, 3)]:
        res = ex_search(m, m, q)
        assert res.value == q**m - 1
        assert res.exhaustive


def test_ex_respects_root_bound():
    # squared form of the degree-two bound: ex(m, 2)^2 <= 3 * 2^m
    for m in (2, 3, 4, 5):
        res = ex_search(m, 2, 2)
        assert res.exhaustive
        assert res.value**2 <= 3 * 2**m


def test_ex_stays_below_f():
    for (m, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (4, 3), (4, 4)]:
        res = ex_search(m, n, 2)
        assert res.exhaustive
        assert res.value < f_recursive(n, m)


def test_ex_budget_degrades_gracefully(index_cache):
    res = ex_search(4, 2, 2, budget=50)
    assert not res.exhaustive
    assert res.value <= 6
    assert contains_no_subspace(res.witness, index_cache(4, 2, 2))


def test_ex_heuristic_on_large_board():
    res = ex_search(7, 2, 2)
    assert not res.exhaustive
    assert res.witness.size == res.value > 0
    free = all(
        mask & ~res.witness.bits for mask in geometry.iter_subspace_masks(7, 2, 2)
    )
    assert free


def test_every_eight_points_of_dim_four_hold_a_plane(index_cache):
    masks = index_cache(4, 2, 2).masks
    for combo in itertools.combinations(range(16), 8):
        bits = 0
        for p in combo:
            bits |= 1 << p
        assert any(mask & ~bits == 0 for mask in masks)


# -- minimum blocking sets ----------------------------------------------------

def hits_everything(witness, index):
    return all(mask & witness.bits for mask in index.masks)


def test_blocking_known_values(index_cache):
    cases = [(2, 1, 2, 3), (2, 1, 3, 5), (2, 1, 4, 7)]
    for m, n, q, beta in cases:
        res = blocking_min(m, n, q)
        assert (res.beta, res.exhaustive) == (beta, True)
        assert res.witness.size == beta
        assert hits_everything(res.witness, index_cache(m, n, q))
        assert res.beta >= 2 * q - 1


def test_blocking_whole_board_cases():
    for (m, q) in [(2, 2), (3, 2), (2, 3)]:
        res = blocking_min(m, m, q)
        assert res.beta == 1


def test_blocking_duality_with_ex():
    for (m, n, q) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 2, 2), (4, 2, 2), (4, 3, 2)]:
        ex = ex_search(m, n, q)
        beta = blocking_min(m, n, q)
        assert ex.exhaustive and beta.exhaustive
        assert ex.value + beta.beta == q**m


def test_blocking_budget_raises():
    with pytest.raises(ResourceExhausted):
        blocking_min(4, 2, 2, budget=10)


def test_blocking_beats_half_board_forces_first_player_win():
    res = blocking_min(2, 1, 3)
    assert res.beta > 9 // 2
    outcome = solver.solve(2, 1, 3)
    assert outcome.outcome is solver.Outcome.P1_WIN


# -- the recursive bound ------------------------------------------------------

def test_f_base_cases():
    for m in range(1, 11):
        assert f_recursive(1, m) == 2
    assert f_recursive(2, 4) == 7
    assert f_recursive(2, 2) == 4
    with pytest.raises(InvalidArgs):
        f_recursive(3, 2)
    with pytest.raises(InvalidArgs):
        f_recursive(0, 4)


def test_f_three_seven():
    assert f_recursive(3, 7) == 56
    gm = geometry.gaussian_binomial(7, 2, 2)
    assert gm == 2667
    rhs = 24 * 128 * gm * (f_recursive(1, 5) - 1)
    assert 55**4 - 128 * (3 * 55**2 - 2 * 55) <= rhs
    for t in range(56, 129):
        assert t**4 - 128 * (3 * t * t - 2 * t) > rhs


def test_f_higher_values():
    assert f_recursive(3, 4) == 12
    assert f_recursive(4, 4) == 16
    assert f_recursive(3, 3) == 8


def test_f_bisection_matches_literal_scan():
    # the production search bisects the monotone tail; replay the definition
    # as a plain downward walk and compare
    def literal(n, m):
        if n == 1:
            return 2
        if n == 2:
            return math.isqrt(3 * 2**m) + 1
        rhs = 24 * 2**m * geometry.gaussian_binomial(m, 2, 2) * (literal(n - 2, m - 2) - 1)
        t = 2**m
        while t >= 1 and t**4 - 2**m * (3 * t * t - 2 * t) > rhs:
            t -= 1
        assert t != 2**m
        return t + 1

    for n in (3, 4, 5):
        for m in range(n, 12):
            assert f_recursive(n, m) == literal(n, m), (n, m)


# -- serialization ------------------------------------------------------------

def test_results_serialize_roundtrip():
    res = ex_search(2, 1, 3)
    q, m, pts = geometry.parse_point_set(res.to_certificate())
    assert (q, m) == (3, 2)
    assert list(pts) == res.witness.points()
    assert res.to_sidecar() == {
        "kind": "extremal", "m": 2, "n": 1, "q": 3, "value": 4, "exhaustive": True,
    }
    blk = blocking_min(2, 1, 2)
    assert blk.to_sidecar() == {
        "kind": "blocking", "m": 2, "n": 1, "q": 2, "value": 3, "exhaustive": True,
    }
