"""Exhaustive-enumeration oracle for the subsequence aligner.

Enumerates every step-conformant path that starts anywhere in row 1 and
ends in row N, sums local costs over visited cells, and applies the same
tie rules as the production code: the optimal end column is the smallest
one attaining the minimum cost, and among minimum-cost paths to that end
the one a first-step-wins backtrack would produce (smallest step index at
each stage, walking from the end). Only feasible for tiny instances.
"""

import numpy as np


def enumerate_paths(N, M, steps):
    """Yield (cells, step_indices) for all conformant paths, 1-based cells."""

    def extend(cells, step_indices):
        n, m = cells[-1]
        if n == N:
            yield cells, step_indices
            return
        for idx, (dr, dc) in enumerate(steps):
            nn, mm = n + dr, m + dc
            if nn <= N and mm <= M:
                yield from extend(cells + [(nn, mm)], step_indices + [idx])

    for a in range(1, M + 1):
        yield from extend([(1, a)], [])


def sdtw_oracle(C, steps=((1, 1), (3, 2), (1, 3))):
    """Return (cost, b_star, path_cells) or None when no path reaches row N."""
    C = np.asarray(C, dtype=np.float64)
    N, M = C.shape

    candidates = []
    for cells, step_indices in enumerate_paths(N, M, steps):
        cost = sum(C[n - 1, m - 1] for n, m in cells)
        candidates.append((cost, cells[-1][1], cells, step_indices))
    if not candidates:
        return None

    best_cost = min(c[0] for c in candidates)
    b_star = min(c[1] for c in candidates if c[0] == best_cost)
    finalists = [c for c in candidates if c[0] == best_cost and c[1] == b_star]
    # replicate backtracking's tie rule: smallest step index, chosen from the end
    _, _, cells, _ = min(finalists, key=lambda c: tuple(reversed(c[3])))
    return best_cost, b_star, cells
