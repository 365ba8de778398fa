"""Ground-truth brute force: partition function, conditional ratios, and the
coefficients of Z as a polynomial in the vertex weight.

Everything here enumerates the 2^k completions of a pinned configuration and
is capped at SPIN2_MAX_FREE free vertices (default 22).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError, InstanceTooLargeError
from .graphs import EMPTY_PINS, Graph, PinnedConfig, SPIN_MINUS, SPIN_PLUS
from .params import Params

DEFAULT_MAX_FREE = 22


def resolve_max_free(max_free: Optional[int] = None) -> int:
    if max_free is not None:
        return max_free
    env = os.environ.get("SPIN2_MAX_FREE")
    return int(env) if env else DEFAULT_MAX_FREE


@dataclass(frozen=True)
class PolyCoeffs:
    """Coefficients of Z viewed as a polynomial in lam; index j holds a_j."""

    coeffs: tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, lam: complex) -> complex:
        acc = 0j
        for a in reversed(self.coeffs):
            acc = acc * lam + a
        return acc


def _power_table(base: complex, length: int) -> np.ndarray:
    table = np.empty(length, dtype=np.complex128)
    table[0] = 1.0
    for i in range(1, length):
        table[i] = table[i - 1] * base
    return table


def _prepare(g: Graph, cfg: PinnedConfig, max_free: Optional[int]):
    for v in cfg.domain():
        if not 0 <= v < g.n:
            raise DomainError(f"pinned vertex {v} not in graph")
    free = [v for v in range(g.n) if not cfg.is_pinned(v)]
    cap = resolve_max_free(max_free)
    if len(free) > cap:
        raise InstanceTooLargeError(
            f"{len(free)} free vertices exceeds cap {cap} (set SPIN2_MAX_FREE to raise)"
        )
    if len(free) > 62:
        raise InstanceTooLargeError("more than 62 free vertices cannot be enumerated")
    index = {v: i for i, v in enumerate(free)}
    k = len(free)
    masks = np.zeros(k, dtype=np.uint64)
    plus_nbrs = np.zeros(k, dtype=np.int64)
    minus_nbrs = np.zeros(k, dtype=np.int64)
    free_deg = np.zeros(k, dtype=np.int64)
    base_pp = 0
    base_mm = 0
    for u, v in g.edges:
        su, sv = cfg.spin(u), cfg.spin(v)
        if su is not None and sv is not None:
            if su == SPIN_PLUS and sv == SPIN_PLUS:
                base_pp += 1
            elif su == SPIN_MINUS and sv == SPIN_MINUS:
                base_mm += 1
        elif su is None and sv is None:
            iu, iv = index[u], index[v]
            masks[iu] |= np.uint64(1 << iv)
            masks[iv] |= np.uint64(1 << iu)
            free_deg[iu] += 1
            free_deg[iv] += 1
        else:
            freev, spin = (u, sv) if su is None else (v, su)
            if spin == SPIN_PLUS:
                plus_nbrs[index[freev]] += 1
            else:
                minus_nbrs[index[freev]] += 1
    nplus_base = sum(1 for _, s in cfg.items() if s == SPIN_PLUS)
    ff_edges = int(free_deg.sum()) // 2
    start_cpp = base_pp
    start_cmm = base_mm + int(minus_nbrs.sum()) + ff_edges
    return masks, plus_nbrs, minus_nbrs, free_deg, start_cpp, start_cmm, nplus_base


def partition_exact(
    g: Graph,
    p: Params,
    cfg: PinnedConfig = EMPTY_PINS,
    max_free: Optional[int] = None,
) -> complex:
    """Z summed over all completions of cfg, by subset enumeration."""
    prep = _prepare(g, cfg, max_free)
    masks, pp, pm, fd, start_cpp, start_cmm, nplus_base = prep
    pow_beta = _power_table(p.beta, g.num_edges + 1)
    pow_gamma = _power_table(p.gamma, g.num_edges + 1)
    pow_lam = _power_table(p.lam, g.n + 1)
    return complex(
        kernels.partition_sum(
            masks, pp, pm, fd, start_cpp, start_cmm, nplus_base,
            pow_beta, pow_gamma, pow_lam,
        )
    )


def lambda_coeffs(
    g: Graph,
    beta: complex,
    gamma: complex,
    cfg: PinnedConfig = EMPTY_PINS,
    max_free: Optional[int] = None,
) -> PolyCoeffs:
    """Coefficients a_0..a_n of Z as a polynomial in the vertex weight."""
    prep = _prepare(g, cfg, max_free)
    masks, pp, pm, fd, start_cpp, start_cmm, nplus_base = prep
    pow_beta = _power_table(beta, g.num_edges + 1)
    pow_gamma = _power_table(gamma, g.num_edges + 1)
    coeffs = kernels.coeff_sums(
        masks, pp, pm, fd, start_cpp, start_cmm, nplus_base,
        pow_beta, pow_gamma, g.n + 1,
    )
    return PolyCoeffs(tuple(complex(c) for c in coeffs))


def conditional_pair(
    g: Graph,
    v: int,
    cfg: PinnedConfig,
    p: Params,
    max_free: Optional[int] = None,
) -> tuple[complex, complex]:
    """(Z with v pinned +, Z with v pinned -); division is left to callers
    so a vanishing denominator stays an explicit error."""
    if cfg.is_pinned(v):
        raise DomainError(f"vertex {v} is pinned")
    z_plus = partition_exact(g, p, cfg.with_pin(v, SPIN_PLUS), max_free)
    z_minus = partition_exact(g, p, cfg.with_pin(v, SPIN_MINUS), max_free)
    return z_plus, z_minus


def marginal_ratio_exact(
    g: Graph,
    v: int,
    cfg: PinnedConfig,
    p: Params,
    max_free: Optional[int] = None,
) -> complex:
    """Ratio of the two conditional partition functions at a free vertex."""
    z_plus, z_minus = conditional_pair(g, v, cfg, p, max_free)
    if z_minus == 0:
        raise DomainError(f"conditional partition function with {v} pinned - vanishes")
    return z_plus / z_minus


def marginal_prob_exact(
    g: Graph,
    v: int,
    cfg: PinnedConfig,
    p: Params,
    max_free: Optional[int] = None,
) -> complex:
    """R/(1+R); flags the ratio -1 case instead of dividing by zero."""
    ratio = marginal_ratio_exact(g, v, cfg, p, max_free)
    if ratio == -1:
        raise DomainError(f"ratio at vertex {v} is -1; probability undefined")
    return ratio / (1 + ratio)
