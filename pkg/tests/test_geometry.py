import math
import random
from decimal import Decimal, getcontext

import numpy as np
import pytest

from chainalign.errors import DegenerateTriple, IncompatibleTriple
from chainalign.geometry import (
    Chain3D,
    Point3,
    RigidMotion,
    apply_motion,
    chain_from_coords,
    dist,
    motion_from_triples,
    triangle_area,
)


def decimal_dist(p, q):
    # independent oracle: exact decimal arithmetic, 50 digits
    getcontext().prec = 50
    total = sum((Decimal(a) - Decimal(b)) ** 2 for a, b in zip(p, q))
    return float(total.sqrt())


def rodrigues(axis, angle):
    # reference rotation built here, independently of the library
    ux, uy, uz = axis
    n = math.sqrt(ux * ux + uy * uy + uz * uz)
    ux, uy, uz = ux / n, uy / n, uz / n
    c, s = math.cos(angle), math.sin(angle)
    return (
        (c + ux * ux * (1 - c), ux * uy * (1 - c) - uz * s, ux * uz * (1 - c) + uy * s),
        (uy * ux * (1 - c) + uz * s, c + uy * uy * (1 - c), uy * uz * (1 - c) - ux * s),
        (uz * ux * (1 - c) - uy * s, uz * uy * (1 - c) + ux * s, c + uz * uz * (1 - c)),
    )


def random_motion(rng):
    rot = rodrigues(
        (rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 1)),
        rng.uniform(0, 2 * math.pi),
    )
    return RigidMotion(rot, (rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)))


def test_dist_matches_decimal_oracle():
    rng = random.Random(7)
    cases = [((1.0, 1.0, 0.0), (2.0, 4.0, 0.05))]
    for _ in range(100):
        cases.append(
            (
                (rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)),
                (rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)),
            )
        )
    for p, q in cases:
        got = dist(Point3(*p), Point3(*q))
        want = decimal_dist(p, q)
        assert abs(got - want) <= 1e-9, (p, q, got, want)


def test_dist_single_axis_offset_is_exact():
    # points differing in one coordinate: sqrt of a single square is exact
    assert dist(Point3(3.0, 9.0, 0.0), Point3(3.0, 9.0, 0.05)) == 0.05
    assert dist(Point3(1.0, 1.0, 0.0), Point3(1.0, 1.0, 0.007)) == 0.007
    assert dist(Point3(0.0, 0.0, 0.0), Point3(2.5, 0.0, 0.0)) == 2.5


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point3(float("nan"), 0.0, 0.0)
    with pytest.raises(ValueError):
        Point3(0.0, float("inf"), 0.0)


def test_chain_basics():
    with pytest.raises(ValueError):
        Chain3D("e", ())
    c = chain_from_coords("abc", [(0, 0, 0), (1, 2, 3)])
    assert len(c) == 2
    assert c.id == "abc"
    arr = c.as_array()
    assert arr.shape == (2, 3)
    assert arr[1, 2] == 3.0


def test_rigid_motion_validation():
    RigidMotion.identity()
    with pytest.raises(ValueError):
        RigidMotion(((1, 0, 0), (0, 1, 0), (0, 0, 2)), (0, 0, 0))  # not orthonormal
    with pytest.raises(ValueError):
        # reflection: orthonormal but determinant -1
        RigidMotion(((1, 0, 0), (0, 1, 0), (0, 0, -1)), (0, 0, 0))


def test_apply_motion_preserves_pairwise_distances():
    rng = random.Random(21)
    for _ in range(25):
        chain = chain_from_coords(
            "c", [(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)) for _ in range(6)]
        )
        moved = apply_motion(random_motion(rng), chain)
        for i in range(6):
            for j in range(i + 1, 6):
                before = dist(chain.points[i], chain.points[j])
                after = dist(moved.points[i], moved.points[j])
                assert abs(before - after) <= 1e-9


def test_motion_from_triples_recovers_planted():
    rng = random.Random(33)
    for _ in range(25):
        src = None
        while src is None:
            cand = [
                Point3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3))
                for _ in range(3)
            ]
            if triangle_area(*cand) > 0.1:
                src = tuple(cand)
        planted = random_motion(rng)
        dst = tuple(apply_motion(planted, Chain3D("t", src)).points)
        got = motion_from_triples(src, dst, tolerance=1e-6)
        mapped = apply_motion(got, Chain3D("t", src))
        for p, q in zip(mapped.points, dst):
            assert dist(p, q) <= 1e-9
        assert np.max(np.abs(got.matrix() - planted.matrix())) <= 1e-9


def test_motion_from_triples_errors():
    line = (Point3(0, 0, 0), Point3(1, 0, 0), Point3(2, 0, 0))
    spread = (Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0))
    with pytest.raises(DegenerateTriple):
        motion_from_triples(line, spread)
    stretched = (Point3(0, 0, 0), Point3(2, 0, 0), Point3(0, 2, 0))
    with pytest.raises(IncompatibleTriple):
        motion_from_triples(spread, stretched, tolerance=1e-6)
    with pytest.raises(ValueError):
        motion_from_triples(spread[:2], spread[:2])


def test_triangle_area_known_values():
    assert triangle_area(Point3(0, 0, 0), Point3(3, 0, 0), Point3(0, 4, 0)) == pytest.approx(6.0)
    assert triangle_area(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)) == pytest.approx(0.5)
    assert triangle_area(Point3(0, 0, 0), Point3(1, 1, 1), Point3(2, 2, 2)) == pytest.approx(0.0)


def test_motion_inverse_round_trip():
    rng = random.Random(55)
    for _ in range(10):
        motion = random_motion(rng)
        rot = np.asarray(motion.rotation)
        inv_rot = rot.T
        inv_t = -inv_rot @ np.asarray(motion.translation)
        inverse = RigidMotion(tuple(map(tuple, inv_rot)), tuple(inv_t))
        chain = chain_from_coords(
            "c", [(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(5)]
        )
        back = apply_motion(inverse, apply_motion(motion, chain))
        for p, q in zip(back.points, chain.points):
            assert dist(p, q) <= 1e-9
