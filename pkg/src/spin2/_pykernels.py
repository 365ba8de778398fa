"""Pure-Python kernels: Gray-code subset enumeration and walk-tree recursion.

Same contracts as the compiled twin in _ckernels.pyx; selected at import by
spin2.kernels when the extension is unavailable (or forced via SPIN2_BACKEND).
"""

from __future__ import annotations

from .errors import DomainError

_NOT_ON_PATH = -2
_PATH_END = -1


def partition_sum(adj_masks, plus_nbrs, minus_nbrs, free_deg,
                  start_cpp, start_cmm, nplus_base,
                  pow_beta, pow_gamma, pow_lam) -> complex:
    """Sum of beta^{m+} gamma^{m-} lam^{n+} over all completions.

    Iterates subsets of the free vertices in Gray-code order, updating the
    (+,+) and (-,-) edge counts incrementally from the adjacency bitmasks.
    """
    k = len(adj_masks)
    masks = [int(m) for m in adj_masks]
    pp = [int(x) for x in plus_nbrs]
    pm = [int(x) for x in minus_nbrs]
    fd = [int(x) for x in free_deg]
    pb = list(pow_beta)
    pg = list(pow_gamma)
    pl = list(pow_lam)

    cpp = int(start_cpp)
    cmm = int(start_cmm)
    npl = int(nplus_base)
    subset = 0
    acc = pb[cpp] * pg[cmm] * pl[npl]
    for i in range(1, 1 << k):
        j = (i & -i).bit_length() - 1
        bit = 1 << j
        if subset & bit:
            subset ^= bit
            in_s = (masks[j] & subset).bit_count()
            cpp -= pp[j] + in_s
            cmm += pm[j] + fd[j] - in_s
            npl -= 1
        else:
            in_s = (masks[j] & subset).bit_count()
            cpp += pp[j] + in_s
            cmm -= pm[j] + fd[j] - in_s
            npl += 1
            subset ^= bit
        acc += pb[cpp] * pg[cmm] * pl[npl]
    return acc


def coeff_sums(adj_masks, plus_nbrs, minus_nbrs, free_deg,
               start_cpp, start_cmm, nplus_base,
               pow_beta, pow_gamma, n_coeffs) -> list[complex]:
    """Like partition_sum but accumulates per +-count: coefficients in lam."""
    k = len(adj_masks)
    masks = [int(m) for m in adj_masks]
    pp = [int(x) for x in plus_nbrs]
    pm = [int(x) for x in minus_nbrs]
    fd = [int(x) for x in free_deg]
    pb = list(pow_beta)
    pg = list(pow_gamma)

    coeffs = [0j] * n_coeffs
    cpp = int(start_cpp)
    cmm = int(start_cmm)
    npl = int(nplus_base)
    subset = 0
    coeffs[npl] += pb[cpp] * pg[cmm]
    for i in range(1, 1 << k):
        j = (i & -i).bit_length() - 1
        bit = 1 << j
        if subset & bit:
            subset ^= bit
            in_s = (masks[j] & subset).bit_count()
            cpp -= pp[j] + in_s
            cmm += pm[j] + fd[j] - in_s
            npl -= 1
        else:
            in_s = (masks[j] & subset).bit_count()
            cpp += pp[j] + in_s
            cmm -= pm[j] + fd[j] - in_s
            npl += 1
            subset ^= bit
        coeffs[npl] += pb[cpp] * pg[cmm]
    return coeffs


def saw_ratio(indptr, indices, pins, root,
              beta, gamma, lam, depth_limit, boundary, flip) -> complex:
    """Evaluate the walk-tree ratio recursion lazily from `root`.

    pins[v]: 0 free, +1 / -1 pinned. depth_limit < 0 means full depth;
    truncated free nodes take the value `boundary`. A walk revisiting a
    vertex contributes a pinned leaf whose spin compares the returning
    neighbor with the first-exit neighbor (flip reverses the convention).
    """
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    pins = [int(x) for x in pins]
    beta = complex(beta)
    gamma = complex(gamma)
    lam = complex(lam)
    boundary = complex(boundary)
    n = len(pins)
    successor = [_NOT_ON_PATH] * n
    beta_zero = beta == 0

    def eval_node(u: int, prev: int, depth: int) -> complex:
        if 0 <= depth_limit <= depth:
            return boundary
        s1 = 0
        s2 = 0
        free_children = []
        for idx in range(indptr[u], indptr[u + 1]):
            w = indices[idx]
            if w == prev:
                continue
            pw = pins[w]
            if pw > 0:
                s1 += 1
            elif pw < 0:
                s2 += 1
            elif successor[w] != _NOT_ON_PATH:
                plus = (u > successor[w]) != flip
                if plus:
                    s1 += 1
                else:
                    s2 += 1
            else:
                free_children.append(w)
        if beta_zero and s1 > 0:
            return 0j
        prod = 1 + 0j
        for w in free_children:
            successor[u] = w
            successor[w] = _PATH_END
            x = eval_node(w, u, depth + 1)
            successor[w] = _NOT_ON_PATH
            denom = x + gamma
            if denom == 0:
                raise DomainError(f"pole: child ratio {x} equals -gamma")
            prod *= (beta * x + 1) / denom
        val = lam
        for _ in range(s1):
            val *= beta
        for _ in range(s2):
            val /= gamma
        return val * prod

    successor[root] = _PATH_END
    return eval_node(root, -1, 0)
