"""Walk-tree ratio evaluation, telescoped partition-function estimation, and
spatial-mixing decay measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError
from .graphs import (
    EMPTY_PINS,
    Graph,
    PinnedConfig,
    SPIN_MINUS,
    dist_to_set,
    is_feasible,
)
from .params import Params


@dataclass(frozen=True)
class WeitzResult:
    estimate: complex
    ratios: tuple[complex, ...]
    depth: Optional[int]  # None = full tree
    boundary: complex


def _csr(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(g.n + 1, dtype=np.int32)
    indices = np.empty(2 * g.num_edges, dtype=np.int32)
    pos = 0
    for v in range(g.n):
        for w in g.adjacency[v]:
            indices[pos] = w
            pos += 1
        indptr[v + 1] = pos
    return indptr, indices


def _pins_array(g: Graph, cfg: PinnedConfig) -> np.ndarray:
    pins = np.zeros(g.n, dtype=np.int8)
    for v, s in cfg.items():
        pins[v] = s
    return pins


def saw_ratio(
    g: Graph,
    v: int,
    cfg: PinnedConfig = EMPTY_PINS,
    p: Params = None,
    depth: Optional[int] = None,
    boundary: Optional[complex] = None,
    flip_convention: bool = False,
) -> complex:
    """Conditional +/- ratio at v computed on the walk tree.

    Full-depth evaluation reproduces the exact conditional ratio; a finite
    depth truncates free leaves at the boundary value (default lam).
    """
    p.require_gamma()
    if cfg.is_pinned(v):
        raise DomainError(f"vertex {v} is pinned")
    if not is_feasible(g, cfg, p):
        raise DomainError("infeasible pinned configuration")
    if p.lam == 0:
        return 0j
    indptr, indices = _csr(g)
    pins = _pins_array(g, cfg)
    limit = -1 if depth is None else int(depth)
    if depth is not None and depth < 0:
        raise DomainError("depth must be nonnegative")
    bval = p.lam if boundary is None else complex(boundary)
    return kernels.saw_ratio(
        indptr, indices, pins, v, p.beta, p.gamma, p.lam, limit, bval, flip_convention
    )


def weitz_partition(
    g: Graph,
    p: Params,
    depth: Optional[int] = None,
    boundary: Optional[complex] = None,
    flip_convention: bool = False,
) -> WeitzResult:
    """Z via telescoping: pin vertices to - one at a time, multiply 1 + ratio.

    The all-minus base case contributes gamma^{|E|}; pinning to - preserves
    feasibility for every parameter point.
    """
    p.require_gamma()
    ratios: list[complex] = []
    estimate: complex = p.gamma ** g.num_edges
    cfg = EMPTY_PINS
    for v in range(g.n):
        r = saw_ratio(g, v, cfg, p, depth=depth, boundary=boundary,
                      flip_convention=flip_convention)
        if r == -1:
            raise DomainError(f"telescoping ratio at vertex {v} is -1")
        ratios.append(r)
        estimate *= 1 + r
        cfg = cfg.with_pin(v, SPIN_MINUS)
    bval = p.lam if boundary is None else complex(boundary)
    return WeitzResult(estimate=estimate, ratios=tuple(ratios), depth=depth, boundary=bval)


def fptas_depth(n: int, eps: float, eta: float) -> int:
    """Truncation depth making the boundary-guess error polynomially small:
    ceil(log(n/eps) / -log(1 - eta))."""
    if not 0 < eta <= 1:
        raise DomainError("eta must be in (0, 1]")
    if eps <= 0 or n < 1:
        raise DomainError("need n >= 1 and eps > 0")
    if eta == 1.0:
        return 1
    target = math.log(n / eps)
    if target <= 0:
        return 1
    return max(1, math.ceil(target / -math.log1p(-eta)))


@dataclass(frozen=True)
class SsmProbe:
    distance: float
    gap: float
    p_first: complex
    p_second: complex


def _marginal_from_ratio(r: complex, v: int) -> complex:
    if r == -1:
        raise DomainError(f"ratio at vertex {v} is -1; marginal undefined")
    return r / (1 + r)


def differing_set(sigma: PinnedConfig, tau: PinnedConfig) -> frozenset[int]:
    """Vertices pinned differently, or pinned in one config and free in the
    other."""
    out = set()
    for v in sigma.domain() | tau.domain():
        if sigma.spin(v) != tau.spin(v):
            out.add(v)
    return frozenset(out)


def ssm_probe(
    g: Graph,
    v: int,
    sigma: PinnedConfig,
    tau: PinnedConfig,
    p: Params,
) -> SsmProbe:
    """Distance to the differing pinned set and the marginal gap it induces."""
    r_sigma = saw_ratio(g, v, sigma, p)
    r_tau = saw_ratio(g, v, tau, p)
    p_sigma = _marginal_from_ratio(r_sigma, v)
    p_tau = _marginal_from_ratio(r_tau, v)
    diff = differing_set(sigma, tau)
    return SsmProbe(
        distance=dist_to_set(g, v, diff),
        gap=abs(p_sigma - p_tau),
        p_first=p_sigma,
        p_second=p_tau,
    )


def decay_fit(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares decay rate of log(gap) against distance: (rate, r^2)."""
    if len(points) < 3:
        raise DomainError("decay fit needs at least 3 points")
    d = np.array([q[0] for q in points], dtype=float)
    gap = np.array([q[1] for q in points], dtype=float)
    if np.any(gap <= 0):
        raise DomainError("decay fit needs positive gaps")
    logs = np.log(gap)
    slope, intercept = np.polyfit(d, logs, 1)
    predicted = slope * d + intercept
    ss_res = float(np.sum((logs - predicted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(-slope), r2
