"""Taylor interpolation of log Z inside a zero-free disk: low-order
coefficients, inverse-root power sums, and the truncated series."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .errors import DomainError, InstanceTooLargeError
from .exact import lambda_coeffs, resolve_max_free
from .graphs import Graph
from .roots import poly_roots

DEFAULT_SUBSET_BUDGET = 1 << 22


def low_order_coeffs(
    g: Graph,
    beta: complex,
    gamma: complex,
    m: int,
    budget: Optional[int] = None,
) -> list[complex]:
    """a_0..a_m of Z in the vertex weight, by enumerating +-sets of size <= m.

    a_j sums beta^{edges inside S} gamma^{edges inside complement} over
    j-subsets S.
    """
    if m < 0:
        raise DomainError("order must be nonnegative")
    m = min(m, g.n)
    if budget is None:
        budget = max(DEFAULT_SUBSET_BUDGET, 1 << resolve_max_free(None))
    total = sum(math.comb(g.n, j) for j in range(m + 1))
    if total > budget:
        raise InstanceTooLargeError(
            f"{total} subsets exceed the enumeration budget {budget}"
        )
    neighbor_mask = [0] * g.n
    for u, v in g.edges:
        neighbor_mask[u] |= 1 << v
        neighbor_mask[v] |= 1 << u
    degrees = [g.degree(v) for v in range(g.n)]
    n_edges = g.num_edges
    pow_beta = [1 + 0j]
    pow_gamma = [1 + 0j]
    for _ in range(n_edges):
        pow_beta.append(pow_beta[-1] * beta)
        pow_gamma.append(pow_gamma[-1] * gamma)

    coeffs = [0j] * (m + 1)
    coeffs[0] = pow_gamma[n_edges]
    for j in range(1, m + 1):
        acc = 0j
        for subset in combinations(range(g.n), j):
            bits = 0
            inside = 0
            deg_sum = 0
            for v in subset:
                inside += (neighbor_mask[v] & bits).bit_count()
                bits |= 1 << v
                deg_sum += degrees[v]
            cross = deg_sum - 2 * inside
            acc += pow_beta[inside] * pow_gamma[n_edges - inside - cross]
        coeffs[j] = acc
    return coeffs


def inverse_power_sums(coeffs: Sequence[complex]) -> list[complex]:
    """s_k = sum over roots of root^{-k}, k = 1..m, from a_0..a_m alone.

    Uses the recurrence k a_k = -sum_{j=1..k} s_j a_{k-j}, i.e. the
    logarithmic derivative of the polynomial read off coefficient by
    coefficient.
    """
    a = [complex(c) for c in coeffs]
    if not a or a[0] == 0:
        raise DomainError("constant coefficient must be nonzero")
    m = len(a) - 1
    s: list[complex] = []
    for k in range(1, m + 1):
        acc = k * a[k]
        for j in range(1, k):
            acc += s[j - 1] * a[k - j]
        s.append(-acc / a[0])
    return s


@dataclass(frozen=True)
class TaylorEstimate:
    order: int
    log_z_truncated: complex
    z_estimate: complex
    zero_free_radius: float
    error_bound: float
    radius_source: str  # "supplied" or "scanned"

    def as_json_dict(self) -> dict:
        return {
            "order": self.order,
            "log_Z_truncated": {"re": self.log_z_truncated.real, "im": self.log_z_truncated.imag},
            "Z_estimate": {"re": self.z_estimate.real, "im": self.z_estimate.imag},
            "zero_free_radius": self.zero_free_radius,
            "error_bound": self.error_bound,
            "radius_source": self.radius_source,
        }


def truncation_error_bound(n: int, lam_abs: float, radius: float, m: int) -> float:
    """n (|lam|/R)^{m+1} / ((m+1)(1 - |lam|/R)); inf outside the disk."""
    if radius <= 0 or lam_abs >= radius:
        return math.inf
    ratio = lam_abs / radius
    return n * ratio ** (m + 1) / ((m + 1) * (1.0 - ratio))


def scanned_radius(g: Graph, beta: complex, gamma: complex) -> float:
    """Smallest root modulus of the full polynomial (oracle-sized graphs)."""
    coeffs = lambda_coeffs(g, beta, gamma)
    roots = poly_roots(coeffs)
    if not roots:
        return math.inf
    return min(abs(r) for r in roots)


def taylor_log_z(
    g: Graph,
    beta: complex,
    gamma: complex,
    lam: complex,
    m: int,
    radius: Optional[float] = None,
) -> TaylorEstimate:
    """Truncated log Z = log a_0 - sum_{k<=m} s_k lam^k / k, with the
    geometric tail bound valid when |lam| is inside the zero-free radius."""
    source = "supplied"
    if radius is None:
        radius = scanned_radius(g, beta, gamma)
        source = "scanned"
    coeffs = low_order_coeffs(g, beta, gamma, m)
    if coeffs[0] == 0:
        raise DomainError("Z(0) = 0 (gamma = 0 or degenerate); not supported")
    coeffs = coeffs + [0j] * (m - (len(coeffs) - 1))
    # run the recurrence on lam-scaled coefficients: it yields s_k lam^k
    # directly, which stays bounded by n (|lam|/R)^k instead of R^{-k}
    scaled = [c for c in coeffs]
    power = 1 + 0j
    for j in range(1, m + 1):
        power *= lam
        scaled[j] = coeffs[j] * power
    scaled_sums = inverse_power_sums(scaled)
    log_z = cmath.log(coeffs[0])
    for k in range(1, m + 1):
        log_z -= scaled_sums[k - 1] / k
    bound = truncation_error_bound(g.n, abs(lam), radius, m)
    return TaylorEstimate(
        order=m,
        log_z_truncated=log_z,
        z_estimate=cmath.exp(log_z),
        zero_free_radius=radius,
        error_bound=bound,
        radius_source=source,
    )


def choose_order(n: int, eps: float, ratio: float) -> int:
    """Smallest m with n ratio^{m+1} / ((m+1)(1-ratio)) <= eps."""
    if not 0 <= ratio < 1:
        raise DomainError("ratio must be in [0, 1)")
    if eps <= 0:
        raise DomainError("eps must be positive")
    m = 0
    while truncation_error_bound(n, ratio, 1.0, m) > eps:
        m += 1
        if m > 10_000_000:
            raise DomainError("order search runaway")
    return m


def swapped_params(beta: complex, gamma: complex, lam: complex) -> tuple[complex, complex, complex]:
    """The involution Z_{b,c}(x) = x^n Z_{c,b}(1/x): swap edge weights and
    invert the vertex weight. Used to move large-weight points into the
    small-weight regime where the disk interpolation applies."""
    if lam == 0:
        raise DomainError("cannot invert lam = 0")
    return gamma, beta, 1 / lam


def taylor_log_z_swapped(
    g: Graph,
    beta: complex,
    gamma: complex,
    lam: complex,
    m: int,
    radius: Optional[float] = None,
) -> TaylorEstimate:
    """Estimate Z_{beta,gamma}(lam) as lam^n times the swapped-system value."""
    b2, g2, l2 = swapped_params(beta, gamma, lam)
    inner = taylor_log_z(g, b2, g2, l2, m, radius=radius)
    log_z = inner.log_z_truncated + g.n * cmath.log(lam)
    return TaylorEstimate(
        order=m,
        log_z_truncated=log_z,
        z_estimate=cmath.exp(log_z),
        zero_free_radius=inner.zero_free_radius,
        error_bound=inner.error_bound,
        radius_source=inner.radius_source,
    )
