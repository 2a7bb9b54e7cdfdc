"""Subsequence dynamic time warping.

Aligns a short feature sequence X (N frames) against a subsequence of a
long one Y (M frames). Unlike global DTW, the path may start at any column
of the first row (free start) and ends at the column of the last row with
the smallest accumulated cost. Indices in paths and results are 1-based,
following the usual DTW matrix convention.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InconsistentCostMatrixError, NoAlignmentError

DEFAULT_STEPS = ((1, 1), (3, 2), (1, 3))


@dataclass(frozen=True)
class StepSet:
    """Allowed (row_delta, col_delta) path moves with optional weights.

    Each transition into cell (n, m) from (n - dr, m - dc) contributes
    mul * D[n - dr, m - dc] + add to the recurrence minimum. Every step
    must advance at least one row and one column.
    """

    steps: tuple = DEFAULT_STEPS
    mul_weights: tuple = None
    add_weights: tuple = None

    def __post_init__(self):
        steps = tuple((int(dr), int(dc)) for dr, dc in self.steps)
        if not steps:
            raise ValueError("step set must not be empty")
        for dr, dc in steps:
            if dr < 1 or dc < 1:
                raise ValueError(f"step ({dr}, {dc}) must advance both row and column")
        muls = self.mul_weights
        adds = self.add_weights
        muls = tuple(float(x) for x in muls) if muls is not None else (1.0,) * len(steps)
        adds = tuple(float(x) for x in adds) if adds is not None else (0.0,) * len(steps)
        if len(muls) != len(steps) or len(adds) != len(steps):
            raise ValueError("weights must match the number of steps")
        if any(x <= 0 for x in muls) or any(x < 0 for x in adds):
            raise ValueError("mul_weights must be positive, add_weights non-negative")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "mul_weights", muls)
        object.__setattr__(self, "add_weights", adds)


@dataclass
class WarpPath:
    """Optimal alignment path as 1-based (row, column) pairs.

    The list runs forward from (1, a_star) to (N, b_star); consecutive
    pairs differ by exactly one step of the step set.
    """

    pairs: list
    a_star: int
    b_star: int


def _as_feature_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise ValueError("feature sequences must be K x T matrices")
    return x


def local_cost(X, Y) -> np.ndarray:
    """Pairwise Euclidean distances between columns of X (K x N) and Y (K x M)."""
    X = _as_feature_matrix(X)
    Y = _as_feature_matrix(Y)
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"feature dimensions differ: {X.shape[0]} vs {Y.shape[0]}")
    return cdist(X.T, Y.T, metric="euclidean")


def accumulate(C: np.ndarray, steps: StepSet = StepSet()) -> np.ndarray:
    """Accumulated cost matrix D with a free start along the first row.

    D[0, :] = C[0, :]; every later cell adds its local cost to the best
    weighted predecessor reachable by one step. Cells with no in-range
    predecessor are +inf.
    """
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2:
        raise ValueError("local cost matrix must be 2-D")
    N, M = C.shape
    D = np.full((N, M), np.inf)
    D[0] = C[0]
    for n in range(1, N):
        best = np.full(M, np.inf)
        for (dr, dc), mul, add in zip(steps.steps, steps.mul_weights, steps.add_weights):
            if n - dr >= 0 and dc < M:
                candidate = mul * D[n - dr, :M - dc] + add
                np.minimum(best[dc:], candidate, out=best[dc:])
        D[n] = C[n] + best
    return D


def best_end(D: np.ndarray) -> int:
    """Column (1-based) of the smallest value in the last row; ties take the smallest index."""
    last = D[-1]
    idx = int(np.argmin(last))
    if not np.isfinite(last[idx]):
        raise NoAlignmentError(
            "no step-conformant path reaches the last row; "
            "the reference is too short for this query"
        )
    return idx + 1


def backtrack(C: np.ndarray, D: np.ndarray, steps: StepSet, b_star: int) -> WarpPath:
    """Walk the recurrence backwards from (N, b_star) to the first row.

    At each cell the first step (in list order) whose predecessor attains
    the recurrence minimum is taken, which makes the path deterministic.
    """
    C = np.asarray(C, dtype=np.float64)
    D = np.asarray(D, dtype=np.float64)
    N, M = D.shape
    if not 1 <= b_star <= M or not np.isfinite(D[N - 1, b_star - 1]):
        raise ValueError(f"b_star={b_star} does not point at a finite cell of the last row")

    n, m = N, b_star
    pairs = [(n, m)]
    while n > 1:
        found = False
        for (dr, dc), mul, add in zip(steps.steps, steps.mul_weights, steps.add_weights):
            pn, pm = n - dr, m - dc
            if pn < 1 or pm < 1 or not np.isfinite(D[pn - 1, pm - 1]):
                continue
            # same expression tree as accumulate(), so the match is bit-exact
            if C[n - 1, m - 1] + (mul * D[pn - 1, pm - 1] + add) == D[n - 1, m - 1]:
                n, m = pn, pm
                pairs.append((n, m))
                found = True
                break
        if not found:
            raise InconsistentCostMatrixError(
                f"no predecessor of cell ({n}, {m}) attains its accumulated cost"
            )
    pairs.reverse()
    return WarpPath(pairs=pairs, a_star=pairs[0][1], b_star=b_star)


def sdtw(X, Y, steps: StepSet = StepSet()):
    """Align X against the best-matching subsequence of Y.

    Returns (cost, path): the accumulated cost at the optimal end column
    and the warping path from (1, a_star) to (N, b_star).
    """
    C = local_cost(X, Y)
    D = accumulate(C, steps)
    b = best_end(D)
    path = backtrack(C, D, steps, b)
    return float(D[-1, b - 1]), path
