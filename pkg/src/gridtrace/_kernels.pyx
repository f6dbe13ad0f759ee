# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Signatures mirror ``_kernels_py`` exactly."""
import numpy as np

from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free


def min_dist_matrix(xy, offsets):
    cdef double[:, ::1] pts = np.ascontiguousarray(xy, dtype=np.float64).reshape(-1, 2)
    cdef long long[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t n = off.shape[0] - 1
    out_arr = np.zeros((max(n, 0), max(n, 0)), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, p, q
    cdef double best, d, dx, dy
    for i in range(n):
        for j in range(i + 1, n):
            best = INFINITY
            for p in range(off[i], off[i + 1]):
                for q in range(off[j], off[j + 1]):
                    dx = pts[p, 0] - pts[q, 0]
                    dy = pts[p, 1] - pts[q, 1]
                    d = sqrt(dx * dx + dy * dy)
                    if d < best:
                        best = d
            out[i, j] = best
            out[j, i] = best
    return out_arr


def nearest_owner(query, query_owner, xy, offsets, candidate, rank):
    cdef double[:, ::1] qs = np.ascontiguousarray(query, dtype=np.float64).reshape(-1, 2)
    cdef long long[::1] owner = np.ascontiguousarray(query_owner, dtype=np.int64)
    cdef double[:, ::1] pts = np.ascontiguousarray(xy, dtype=np.float64).reshape(-1, 2)
    cdef long long[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef unsigned char[::1] cand = np.ascontiguousarray(candidate, dtype=np.uint8)
    cdef long long[::1] rk = np.ascontiguousarray(rank, dtype=np.int64)
    cdef Py_ssize_t n = off.shape[0] - 1
    cdef Py_ssize_t nq = qs.shape[0]
    result_arr = np.full(nq, -1, dtype=np.int64)
    cdef long long[::1] result = result_arr
    cdef Py_ssize_t k, j, r
    cdef long long best, best_r
    cdef double best_d, d, dd, qx, qy, dx, dy
    for k in range(nq):
        qx = qs[k, 0]
        qy = qs[k, 1]
        best = -1
        best_d = INFINITY
        best_r = 0
        for j in range(n):
            if j == owner[k] or not cand[j]:
                continue
            d = INFINITY
            for r in range(off[j], off[j + 1]):
                dx = qx - pts[r, 0]
                dy = qy - pts[r, 1]
                dd = sqrt(dx * dx + dy * dy)
                if dd < d:
                    d = dd
            if best == -1 or d < best_d or (d == best_d and rk[j] < best_r):
                best = j
                best_d = d
                best_r = rk[j]
        result[k] = best
    return result_arr


def expand_paths(
    Py_ssize_t start,
    first,
    indptr,
    indices,
    hop,
    internal,
    terminal,
    blocked,
    tcode,
    board,
    double max_length,
    double max_distance,
    long long max_elements,
    bint no_repeat_type,
    bint one_board,
):
    cdef long long[::1] fst = np.ascontiguousarray(first, dtype=np.int64)
    cdef long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[::1] idx_arr = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[:, ::1] hp = np.ascontiguousarray(hop, dtype=np.float64)
    cdef double[::1] inl = np.ascontiguousarray(internal, dtype=np.float64)
    cdef unsigned char[::1] term = np.ascontiguousarray(terminal, dtype=np.uint8)
    cdef unsigned char[::1] blk = np.ascontiguousarray(blocked, dtype=np.uint8)
    cdef long long[::1] tc = np.ascontiguousarray(tcode, dtype=np.int64)
    cdef unsigned char[::1] brd = np.ascontiguousarray(board, dtype=np.uint8)
    cdef Py_ssize_t n = inl.shape[0]
    cdef Py_ssize_t nfirst = fst.shape[0]

    found = []
    if n == 0:
        return found

    cdef long long *path = <long long *> malloc((n + 1) * sizeof(long long))
    cdef double *lengths = <double *> malloc((n + 1) * sizeof(double))
    cdef long long *boards = <long long *> malloc((n + 1) * sizeof(long long))
    cdef long long *pos = <long long *> malloc((n + 1) * sizeof(long long))
    cdef unsigned char *on_path = <unsigned char *> malloc(n * sizeof(unsigned char))
    if not path or not lengths or not boards or not pos or not on_path:
        free(path); free(lengths); free(boards); free(pos); free(on_path)
        raise MemoryError()

    cdef Py_ssize_t depth = 0, i, u, v, k, end
    cdef long long nb
    cdef double new_len
    try:
        for i in range(n):
            on_path[i] = 0
        path[0] = start
        lengths[0] = 0.0
        boards[0] = 1 if brd[start] else 0
        pos[0] = 0
        on_path[start] = 1
        while depth >= 0:
            u = path[depth]
            if depth == 0:
                k = pos[0]
                end = nfirst
            else:
                k = ptr[u] + pos[depth]
                end = ptr[u + 1]
            if k >= end:
                on_path[u] = 0
                depth -= 1
                continue
            pos[depth] += 1
            if depth == 0:
                v = fst[k]
            else:
                v = idx_arr[k]
            if on_path[v] or blk[v]:
                continue
            if depth + 2 > max_elements:
                continue
            if no_repeat_type and tc[v] == tc[u]:
                continue
            nb = boards[depth] + (1 if brd[v] else 0)
            if one_board and nb > 1:
                continue
            new_len = lengths[depth] + (hp[u, v] + inl[u])
            if not (new_len < max_length) or new_len > max_distance:
                continue
            if term[v]:
                found.append([path[i] for i in range(depth + 1)] + [v])
                continue
            depth += 1
            path[depth] = v
            lengths[depth] = new_len
            boards[depth] = nb
            pos[depth] = 0
            on_path[v] = 1
    finally:
        free(path)
        free(lengths)
        free(boards)
        free(pos)
        free(on_path)
    return found
