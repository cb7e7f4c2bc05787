"""Discrete Frechet distance between polygonal chains.

The distance is the smallest worst vertex-pair distance achievable by a
coupling: a monotone walk of two pointers that starts on the first vertices,
ends on the last, and advances one chain or both by one vertex per step.
The quadratic dynamic program computes it exactly; two tiny enumerators
re-derive it by brute force for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NegativeDelta, TooLarge
from .geometry import Chain3D

__all__ = [
    "PairedWalk",
    "FrechetResult",
    "discrete_frechet",
    "frechet_decision",
    "brute_force_frechet",
    "brute_force_frechet_segments",
    "validate_paired_walk",
]

BRUTE_FORCE_LIMIT = 16
SEGMENT_LIMIT = 10


@dataclass(frozen=True)
class PairedWalk:
    """A coupling as 1-based index pairs, from (1, 1) to (|A|, |B|)."""

    steps: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class FrechetResult:
    value: float
    walk: PairedWalk
    witness: tuple[int, int]


def validate_paired_walk(walk: PairedWalk, n_a: int, n_b: int) -> None:
    """Raise ValueError unless the walk is a well-formed coupling."""
    steps = walk.steps
    if not steps:
        raise ValueError("empty walk")
    if steps[0] != (1, 1):
        raise ValueError(f"walk must start at (1, 1), got {steps[0]}")
    if steps[-1] != (n_a, n_b):
        raise ValueError(f"walk must end at ({n_a}, {n_b}), got {steps[-1]}")
    for (i0, j0), (i1, j1) in zip(steps, steps[1:]):
        di, dj = i1 - i0, j1 - j0
        if di not in (0, 1) or dj not in (0, 1) or (di, dj) == (0, 0):
            raise ValueError(f"illegal step ({i0},{j0}) -> ({i1},{j1})")


def _points(chain: Chain3D) -> list[tuple[float, float, float]]:
    return [p.as_tuple() for p in chain.points]


def discrete_frechet(a: Chain3D, b: Chain3D) -> FrechetResult:
    """Exact discrete Frechet distance with an optimal coupling.

    dp[i][j] is the best achievable worst pair over couplings of the
    prefixes ending at (i, j).  Walk reconstruction prefers, on ties,
    advancing both chains, then chain A, then chain B.
    """
    pa, pb = _points(a), _points(b)
    n, m = len(pa), len(pb)
    d = math.dist
    inf = math.inf

    dp = [[0.0] * m for _ in range(n)]
    for i in range(n):
        ai = pa[i]
        row = dp[i]
        prev = dp[i - 1] if i else None
        for j in range(m):
            cost = d(ai, pb[j])
            if i == 0 and j == 0:
                best = cost
            elif i == 0:
                best = max(row[j - 1], cost)
            elif j == 0:
                best = max(prev[0], cost)
            else:
                best = max(min(prev[j - 1], prev[j], row[j - 1]), cost)
            row[j] = best

    steps = [(n - 1, m - 1)]
    i, j = n - 1, m - 1
    while (i, j) != (0, 0):
        if i == 0:
            i, j = 0, j - 1
        elif j == 0:
            i, j = i - 1, 0
        else:
            best = min(dp[i - 1][j - 1], dp[i - 1][j], dp[i][j - 1])
            if dp[i - 1][j - 1] == best:
                i, j = i - 1, j - 1
            elif dp[i - 1][j] == best:
                i, j = i - 1, j
            else:
                i, j = i, j - 1
        steps.append((i, j))
    steps.reverse()

    value = dp[n - 1][m - 1]
    witness = next((i + 1, j + 1) for i, j in steps if d(pa[i], pb[j]) == value)
    walk = PairedWalk(tuple((i + 1, j + 1) for i, j in steps))
    return FrechetResult(value, walk, witness)


def frechet_decision(a: Chain3D, b: Chain3D, delta: float) -> bool:
    """True iff the discrete Frechet distance is at most delta (closed)."""
    if delta < 0:
        raise NegativeDelta(f"delta must be >= 0, got {delta}")
    return discrete_frechet(a, b).value <= delta


def brute_force_frechet(a: Chain3D, b: Chain3D) -> float:
    """Minimum over all unit-step couplings of the worst pair distance.

    Exponential; guarded to |A| + |B| <= 16.  Used as the independent
    oracle for discrete_frechet.
    """
    pa, pb = _points(a), _points(b)
    n, m = len(pa), len(pb)
    if n + m > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"|A| + |B| = {n + m} exceeds {BRUTE_FORCE_LIMIT}")
    d = math.dist
    best = math.inf

    def walk(i: int, j: int, worst: float) -> None:
        nonlocal best
        worst = max(worst, d(pa[i], pb[j]))
        if worst >= best:
            return
        if i == n - 1 and j == m - 1:
            best = worst
            return
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, worst)
        if i + 1 < n:
            walk(i + 1, j, worst)
        if j + 1 < m:
            walk(i, j + 1, worst)

    walk(0, 0, 0.0)
    return best


def brute_force_frechet_segments(a: Chain3D, b: Chain3D) -> float:
    """Same distance via the segment-partition form of the definition.

    Both chains are cut into the same number of consecutive runs, where in
    each aligned run pair at least one side is a single vertex; the cost of
    a run pair is its largest cross distance.  Minimizing the walk maximum
    over all partitions must agree with the unit-step form exactly.
    Guarded to |A| + |B| <= 10.
    """
    pa, pb = _points(a), _points(b)
    n, m = len(pa), len(pb)
    if n + m > SEGMENT_LIMIT:
        raise TooLarge(f"|A| + |B| = {n + m} exceeds {SEGMENT_LIMIT}")
    d = math.dist
    best = math.inf

    def seg_cost(i0: int, i1: int, j0: int, j1: int) -> float:
        return max(d(pa[i], pb[j]) for i in range(i0, i1) for j in range(j0, j1))

    def go(i: int, j: int, worst: float) -> None:
        nonlocal best
        if worst >= best:
            return
        if i == n and j == m:
            best = worst
            return
        if i == n or j == m:
            return
        # one A vertex against a run of B vertices
        for j2 in range(j + 1, m + 1):
            go(i + 1, j2, max(worst, seg_cost(i, i + 1, j, j2)))
        # a run of at least two A vertices against one B vertex
        for i2 in range(i + 2, n + 1):
            go(i2, j + 1, max(worst, seg_cost(i, i2, j, j + 1)))

    go(0, 0, 0.0)
    return best
