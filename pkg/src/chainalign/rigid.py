"""Alignment of two chains under an unknown rigid motion.

The second chain is moved by candidate rotations+translations and each moved
copy is scored with the static two-chain alignment; the best-scoring motion
wins.  Two candidate generators are provided: an exhaustive scan over vertex
triples (a congruent triple pair determines the motion up to reflection) and
a seeded random sampler over rotations and vertex-anchored translations.

The identity motion is always scored first, so the result is never worse
than the static alignment of the chains as given.  Ties keep the earlier
candidate, which makes the search deterministic for a fixed configuration.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DegenerateTriple, IncompatibleTriple, NegativeDelta
from .geometry import Chain3D, RigidMotion, apply_motion, motion_from_triples
from .plsa import AlignmentResult, plsa_static_pair_fast

__all__ = [
    "SearchConfig",
    "enumerate_candidate_motions",
    "plsa_rigid_pair",
]

MODES = ("triples", "random")


@dataclass(frozen=True)
class SearchConfig:
    """How candidate motions are generated.

    mode "triples" scans vertex triples of both chains in lexicographic
    order; mode "random" draws uniformly random rotations with vertex-pair
    anchored translations from a seeded generator.  budget caps how many
    candidates are produced.  prune_tolerance is the congruence slack for
    the triples mode; None means 2 * delta at search time.
    """

    mode: str = "triples"
    budget: int = 1000
    seed: int | None = None
    prune_tolerance: float | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.prune_tolerance is not None and self.prune_tolerance < 0:
            raise ValueError("prune_tolerance must be >= 0")


def _rotation_from_quaternion(
    w: float, x: float, y: float, z: float
) -> tuple[tuple[float, float, float], ...]:
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    rot = (
        (1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)),
        (2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)),
        (2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)),
    )
    return rot


def _random_rotation(rng: random.Random) -> tuple[tuple[float, float, float], ...]:
    # uniform over rotations: subgroup-algorithm quaternion sampling
    u1, u2, u3 = rng.random(), rng.random(), rng.random()
    a, b = math.sqrt(1.0 - u1), math.sqrt(u1)
    t2, t3 = 2.0 * math.pi * u2, 2.0 * math.pi * u3
    return _rotation_from_quaternion(
        b * math.cos(t3), a * math.sin(t2), a * math.cos(t2), b * math.sin(t3)
    )


def enumerate_candidate_motions(
    a: Chain3D, b: Chain3D, delta: float, config: SearchConfig
) -> Iterator[RigidMotion]:
    """Yield up to config.budget motions that map chain b onto chain a.

    Triples mode pairs each vertex triple of a with each triple of b
    (both in lexicographic index order), skips pairs whose three pairwise
    distances differ by more than the prune tolerance or whose b-triple is
    degenerate, and yields the least-squares superposition of the b-triple
    onto the a-triple.  Random mode yields rotations drawn uniformly with a
    translation matching a random b-vertex to a random a-vertex.

    The stream is deterministic for a fixed (a, b, delta, config).
    """
    if delta < 0:
        raise NegativeDelta(f"delta must be >= 0, got {delta}")
    tol = config.prune_tolerance if config.prune_tolerance is not None else 2.0 * delta

    if config.mode == "random":
        rng = random.Random(config.seed)
        pa, pb = a.as_array(), b.as_array()
        for _ in range(config.budget):
            rot = _random_rotation(rng)
            i = rng.randrange(len(pa))
            j = rng.randrange(len(pb))
            moved = np.asarray(rot) @ pb[j]
            t = tuple(float(v) for v in (pa[i] - moved))
            yield RigidMotion(rot, t)
        return

    produced = 0
    d = math.dist
    ta_pool = list(itertools.combinations(range(len(a)), 3))
    tb_pool = list(itertools.combinations(range(len(b)), 3))
    pa = [p.as_tuple() for p in a.points]
    pb = [p.as_tuple() for p in b.points]
    for ia in ta_pool:
        da = [d(pa[ia[0]], pa[ia[1]]), d(pa[ia[0]], pa[ia[2]]), d(pa[ia[1]], pa[ia[2]])]
        for ib in tb_pool:
            if produced >= config.budget:
                return
            db = [d(pb[ib[0]], pb[ib[1]]), d(pb[ib[0]], pb[ib[2]]), d(pb[ib[1]], pb[ib[2]])]
            if any(abs(x - y) > tol for x, y in zip(da, db)):
                continue
            src = tuple(b.points[k] for k in ib)
            dst = tuple(a.points[k] for k in ia)
            try:
                motion = motion_from_triples(src, dst, tolerance=tol)
            except (DegenerateTriple, IncompatibleTriple):
                continue
            produced += 1
            yield motion


def plsa_rigid_pair(
    a: Chain3D, b: Chain3D, delta: float, config: SearchConfig
) -> tuple[RigidMotion, AlignmentResult]:
    """Best (motion, alignment) over the identity plus the candidate stream.

    Each candidate moves b and is scored with the static pair alignment of
    (a, moved b); strictly larger values replace the incumbent, so ties keep
    the earliest candidate and the identity is the floor.  Stops early when
    a candidate aligns every vertex of both chains.  The returned alignment
    indexes the original chains; its polylines refer to b after the motion.
    """
    ceiling = len(a) + len(b)
    best_motion = RigidMotion.identity()
    best = plsa_static_pair_fast(a, b, delta)
    if best.value == ceiling:
        return best_motion, best
    for motion in enumerate_candidate_motions(a, b, delta, config):
        res = plsa_static_pair_fast(a, apply_motion(motion, b), delta)
        if res.value > best.value:
            best_motion, best = motion, res
            if best.value == ceiling:
                break
    return best_motion, best
