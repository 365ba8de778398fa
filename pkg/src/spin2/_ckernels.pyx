# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Gray-code subset enumeration and walk-tree recursion.

Mirror of _pykernels.py; spin2.kernels picks whichever is importable.
"""

import numpy as np

from .errors import DomainError

cdef extern from *:
    int __builtin_ctzll(unsigned long long)
    int __builtin_popcountll(unsigned long long)


def partition_sum(adj_masks, plus_nbrs, minus_nbrs, free_deg,
                  start_cpp, start_cmm, nplus_base,
                  pow_beta, pow_gamma, pow_lam):
    """Sum of beta^{m+} gamma^{m-} lam^{n+} over all completions."""
    cdef unsigned long long[::1] masks = np.ascontiguousarray(adj_masks, dtype=np.uint64)
    cdef long long[::1] pp = np.ascontiguousarray(plus_nbrs, dtype=np.int64)
    cdef long long[::1] pm = np.ascontiguousarray(minus_nbrs, dtype=np.int64)
    cdef long long[::1] fd = np.ascontiguousarray(free_deg, dtype=np.int64)
    cdef double complex[::1] pb = np.ascontiguousarray(pow_beta, dtype=np.complex128)
    cdef double complex[::1] pg = np.ascontiguousarray(pow_gamma, dtype=np.complex128)
    cdef double complex[::1] pl = np.ascontiguousarray(pow_lam, dtype=np.complex128)

    cdef int k = masks.shape[0]
    cdef long long cpp = start_cpp
    cdef long long cmm = start_cmm
    cdef long long npl = nplus_base
    cdef unsigned long long subset = 0, bit, i, total
    cdef int j, in_s
    cdef double complex acc = pb[cpp] * pg[cmm] * pl[npl]

    total = (<unsigned long long>1) << k
    for i in range(1, total):
        j = __builtin_ctzll(i)
        bit = (<unsigned long long>1) << j
        if subset & bit:
            subset ^= bit
            in_s = __builtin_popcountll(masks[j] & subset)
            cpp -= pp[j] + in_s
            cmm += pm[j] + fd[j] - in_s
            npl -= 1
        else:
            in_s = __builtin_popcountll(masks[j] & subset)
            cpp += pp[j] + in_s
            cmm -= pm[j] + fd[j] - in_s
            npl += 1
            subset ^= bit
        acc = acc + pb[cpp] * pg[cmm] * pl[npl]
    return complex(acc)


def coeff_sums(adj_masks, plus_nbrs, minus_nbrs, free_deg,
               start_cpp, start_cmm, nplus_base,
               pow_beta, pow_gamma, n_coeffs):
    """Like partition_sum but accumulates per +-count: coefficients in lam."""
    cdef unsigned long long[::1] masks = np.ascontiguousarray(adj_masks, dtype=np.uint64)
    cdef long long[::1] pp = np.ascontiguousarray(plus_nbrs, dtype=np.int64)
    cdef long long[::1] pm = np.ascontiguousarray(minus_nbrs, dtype=np.int64)
    cdef long long[::1] fd = np.ascontiguousarray(free_deg, dtype=np.int64)
    cdef double complex[::1] pb = np.ascontiguousarray(pow_beta, dtype=np.complex128)
    cdef double complex[::1] pg = np.ascontiguousarray(pow_gamma, dtype=np.complex128)

    out = np.zeros(n_coeffs, dtype=np.complex128)
    cdef double complex[::1] coeffs = out
    cdef int k = masks.shape[0]
    cdef long long cpp = start_cpp
    cdef long long cmm = start_cmm
    cdef long long npl = nplus_base
    cdef unsigned long long subset = 0, bit, i, total
    cdef int j, in_s

    coeffs[npl] = coeffs[npl] + pb[cpp] * pg[cmm]
    total = (<unsigned long long>1) << k
    for i in range(1, total):
        j = __builtin_ctzll(i)
        bit = (<unsigned long long>1) << j
        if subset & bit:
            subset ^= bit
            in_s = __builtin_popcountll(masks[j] & subset)
            cpp -= pp[j] + in_s
            cmm += pm[j] + fd[j] - in_s
            npl -= 1
        else:
            in_s = __builtin_popcountll(masks[j] & subset)
            cpp += pp[j] + in_s
            cmm -= pm[j] + fd[j] - in_s
            npl += 1
            subset ^= bit
        coeffs[npl] = coeffs[npl] + pb[cpp] * pg[cmm]
    return [complex(c) for c in out]


cdef struct SawCtx:
    int* indptr
    int* indices
    signed char* pins
    int* successor  # -2 not on path, -1 path end, else next vertex
    double complex beta
    double complex gamma
    double complex lam
    double complex boundary
    int depth_limit
    bint flip
    bint beta_zero


cdef double complex _saw_eval(SawCtx* ctx, int u, int prev, int depth) except *:
    cdef int idx, w, s1 = 0, s2 = 0, i
    cdef double complex x, denom, prod, val
    cdef bint plus
    if 0 <= ctx.depth_limit <= depth:
        return ctx.boundary
    cdef int nfree = 0
    # classify pinned / cycle-closing children first, collect free ones after
    for idx in range(ctx.indptr[u], ctx.indptr[u + 1]):
        w = ctx.indices[idx]
        if w == prev:
            continue
        if ctx.pins[w] > 0:
            s1 += 1
        elif ctx.pins[w] < 0:
            s2 += 1
        elif ctx.successor[w] != -2:
            plus = (u > ctx.successor[w]) != ctx.flip
            if plus:
                s1 += 1
            else:
                s2 += 1
        else:
            nfree += 1
    if ctx.beta_zero and s1 > 0:
        return 0
    prod = 1
    if nfree > 0:
        for idx in range(ctx.indptr[u], ctx.indptr[u + 1]):
            w = ctx.indices[idx]
            if w == prev or ctx.pins[w] != 0 or ctx.successor[w] != -2:
                continue
            ctx.successor[u] = w
            ctx.successor[w] = -1
            x = _saw_eval(ctx, w, u, depth + 1)
            ctx.successor[w] = -2
            denom = x + ctx.gamma
            if denom == 0:
                raise DomainError(f"pole: child ratio {complex(x)} equals -gamma")
            prod = prod * (ctx.beta * x + 1) / denom
    val = ctx.lam
    for i in range(s1):
        val = val * ctx.beta
    for i in range(s2):
        val = val / ctx.gamma
    return val * prod


def saw_ratio(indptr, indices, pins, root,
              beta, gamma, lam, depth_limit, boundary, flip):
    """Evaluate the walk-tree ratio recursion lazily from `root`."""
    cdef int[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef int[::1] inds = np.ascontiguousarray(indices, dtype=np.int32)
    cdef signed char[::1] pin_arr = np.ascontiguousarray(pins, dtype=np.int8)
    cdef int n = pin_arr.shape[0]
    succ_np = np.full(n, -2, dtype=np.int32)
    cdef int[::1] succ = succ_np

    cdef SawCtx ctx
    ctx.indptr = &iptr[0]
    ctx.indices = &inds[0] if inds.shape[0] > 0 else NULL
    ctx.pins = &pin_arr[0]
    ctx.successor = &succ[0]
    ctx.beta = beta
    ctx.gamma = gamma
    ctx.lam = lam
    ctx.boundary = boundary
    ctx.depth_limit = depth_limit
    ctx.flip = bool(flip)
    ctx.beta_zero = (complex(beta) == 0)

    succ[root] = -1
    return complex(_saw_eval(&ctx, root, -1, 0))
