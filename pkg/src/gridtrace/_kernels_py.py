"""Pure-Python kernels. Signatures mirror ``_kernels.pyx`` exactly."""
from __future__ import annotations

import math

import numpy as np


def min_dist_matrix(xy, offsets):
    """Element-to-element minimum coordinate distance.

    ``xy`` stacks every element's coordinates; element ``i`` owns rows
    ``offsets[i]:offsets[i + 1]``.
    """
    xy = np.asarray(xy, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.int64)
    n = len(offsets) - 1
    out = np.zeros((n, n), dtype=np.float64)
    if n == 0:
        return out
    for i in range(n):
        a = xy[offsets[i]:offsets[i + 1]]
        for j in range(i + 1, n):
            b = xy[offsets[j]:offsets[j + 1]]
            best = math.inf
            for p in a:
                for q in b:
                    dx = p[0] - q[0]
                    dy = p[1] - q[1]
                    d = math.sqrt(dx * dx + dy * dy)
                    if d < best:
                        best = d
            out[i, j] = out[j, i] = best
    return out


def nearest_owner(query, query_owner, xy, offsets, candidate, rank):
    """For each query point, the candidate element nearest to it.

    Ties on distance go to the lower ``rank``. The query's own element is
    never returned. -1 marks a query with no eligible candidate.
    """
    query = np.asarray(query, dtype=np.float64)
    xy = np.asarray(xy, dtype=np.float64)
    n = len(offsets) - 1
    result = np.full(len(query), -1, dtype=np.int64)
    for k in range(len(query)):
        qx, qy = query[k, 0], query[k, 1]
        owner = query_owner[k]
        best_d = math.inf
        best_r = 0
        best = -1
        for j in range(n):
            if j == owner or not candidate[j]:
                continue
            d = math.inf
            for r in range(offsets[j], offsets[j + 1]):
                dx = qx - xy[r, 0]
                dy = qy - xy[r, 1]
                dd = math.sqrt(dx * dx + dy * dy)
                if dd < d:
                    d = dd
            if best == -1 or d < best_d or (d == best_d and rank[j] < best_r):
                best, best_d, best_r = j, d, rank[j]
        result[k] = best
    return result


def expand_paths(
    start,
    first,
    indptr,
    indices,
    hop,
    internal,
    terminal,
    blocked,
    tcode,
    board,
    max_length,
    max_distance,
    max_elements,
    no_repeat_type,
    one_board,
):
    """Depth-first expansion from ``start`` toward terminal elements.

    A branch is extended with ``v`` only if ``v`` is unused, not blocked, and
    the running length stays strictly below ``max_length`` and at most
    ``max_distance``. Reaching a terminal element completes the path.
    """
    n = len(internal)
    on_path = [False] * n
    path = [start]
    lengths = [0.0]
    boards = [1 if board[start] else 0]
    pos = [0]
    on_path[start] = True
    found = []
    first = [int(v) for v in first]

    while path:
        depth = len(path) - 1
        u = path[depth]
        if depth == 0:
            cands = first
            end = len(first)
            idx = pos[0]
        else:
            lo, hi = indptr[u], indptr[u + 1]
            idx = lo + pos[depth]
            end = hi
            cands = indices
        if idx >= end:
            path.pop()
            lengths.pop()
            boards.pop()
            pos.pop()
            on_path[u] = False
            continue
        pos[depth] += 1
        v = int(cands[idx])
        if on_path[v] or blocked[v]:
            continue
        if depth + 2 > max_elements:
            continue
        if no_repeat_type and tcode[v] == tcode[u]:
            continue
        nb = boards[depth] + (1 if board[v] else 0)
        if one_board and nb > 1:
            continue
        new_len = lengths[depth] + (hop[u, v] + internal[u])
        if not new_len < max_length or new_len > max_distance:
            continue
        if terminal[v]:
            found.append(path + [v])
            continue
        path.append(v)
        lengths.append(new_len)
        boards.append(nb)
        pos.append(0)
        on_path[v] = True
    return found
