"""The ratio recursion of tree nodes, its potential-conjugated form, and
analytic gradients in both the child ratios and the parameters."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError
from .params import Params
from .potentials import IdentityPotential, LogPotential, Potential, SqrtIntegralPotential


@dataclass(frozen=True)
class Signature:
    """Child profile of a tree node: s1 pinned +, s2 pinned -, k free."""

    s1: int
    s2: int
    k: int

    def __post_init__(self):
        if self.s1 < 0 or self.s2 < 0 or self.k < 0:
            raise DomainError("signature counts must be nonnegative")

    @property
    def norm1(self) -> int:
        return self.s1 + self.s2 + self.k


def signatures_up_to(max_norm: int, skip_plus_pins: bool = False) -> Iterator[Signature]:
    """All child profiles of total arity <= max_norm (s1 = 0 when asked,
    matching the zero-beta restriction of the recursion family)."""
    for total in range(max_norm + 1):
        for s1 in range(0, 1 if skip_plus_pins else total + 1):
            for s2 in range(total - s1 + 1):
                yield Signature(s1, s2, total - s1 - s2)


def signatures_exactly(norm: int, skip_plus_pins: bool = False) -> Iterator[Signature]:
    for s in signatures_up_to(norm, skip_plus_pins):
        if s.norm1 == norm:
            yield s


def _check_inputs(p: Params, s: Signature, xs: Sequence[complex]) -> None:
    p.require_gamma()
    if len(xs) != s.k:
        raise DomainError(f"expected {s.k} child ratios, got {len(xs)}")
    if p.beta == 0 and s.s1 > 0:
        raise DomainError("beta = 0 admits no pinned-+ children in the recursion")
    for x in xs:
        if x + p.gamma == 0:
            raise DomainError(f"pole: child ratio {x} equals -gamma")


def recursion_value(p: Params, s: Signature, xs: Sequence[complex]) -> complex:
    """lam beta^{s1} gamma^{-s2} prod (beta x_i + 1)/(x_i + gamma)."""
    _check_inputs(p, s, xs)
    val = p.lam
    for _ in range(s.s1):
        val *= p.beta
    for _ in range(s.s2):
        val /= p.gamma
    for x in xs:
        val *= (p.beta * x + 1) / (x + p.gamma)
    return val


def transformed_value(
    p: Params, s: Signature, phi: Potential, xs_img: Sequence[complex]
) -> complex:
    """phi(F(p, phi^{-1}(xs_img)))."""
    ys = [phi.inverse(x) for x in xs_img]
    return phi.forward(recursion_value(p, s, ys))


def grad_transformed(
    p: Params, s: Signature, phi: Potential, xs_img: Sequence[complex]
) -> list[complex]:
    """Partials of the conjugated recursion in each child coordinate.

    Chain rule: phi'(F) * dF/dy_i / phi'(y_i) with
    dF/dy_i = F (beta gamma - 1) / ((beta y_i + 1)(y_i + gamma)).
    The log kind collapses to the closed form
    y_i (beta gamma - 1) / ((beta y_i + 1)(y_i + gamma)).
    """
    ys = [phi.inverse(x) for x in xs_img]
    _check_inputs(p, s, ys)
    bg1 = p.beta * p.gamma - 1
    if isinstance(phi, LogPotential):
        return [bg1 * y / ((p.beta * y + 1) * (y + p.gamma)) for y in ys]
    f = recursion_value(p, s, ys)
    common = _f_times_dphi(phi, f)
    grads = []
    for y in ys:
        base = common * bg1 / ((p.beta * y + 1) * (y + p.gamma))
        grads.append(base / phi.derivative(y))
    return grads


def _f_times_dphi(phi: Potential, f: complex) -> complex:
    """F * phi'(F), stabilized for the sqrt-integral kind near F = 0."""
    if isinstance(phi, SqrtIntegralPotential):
        if f == 0:
            return 0j
        u = f * (phi.beta * f + 1) * (f + phi.gamma)
        return f / cmath.sqrt(u)
    if isinstance(phi, IdentityPotential):
        return f
    return f * phi.derivative(f)


def grad_norm1(grads: Sequence[complex]) -> float:
    return sum(abs(g) for g in grads)


def grad_params(
    p: Params, s: Signature, phi: Potential, xs_img: Sequence[complex]
) -> tuple[complex, complex, complex]:
    """Partials of the conjugated recursion in (beta, gamma, lam) at fixed
    child coordinates; the potential itself is held fixed.

    All three have closed forms:
      dF/dlam = beta^{s1} gamma^{-s2} prod(...)      (F / lam when lam != 0)
      dF/dbeta = F (s1/beta + sum y_i/(beta y_i + 1))
      dF/dgamma = F (-s2/gamma - sum 1/(y_i + gamma))
    each multiplied by phi'(F).
    """
    ys = [phi.inverse(x) for x in xs_img]
    _check_inputs(p, s, ys)
    if isinstance(phi, LogPotential) and p.lam == 0:
        raise DomainError("log-conjugated parameter gradient needs lam != 0")
    f = recursion_value(p, s, ys)

    prod_part = 1 + 0j  # F without its lam factor
    for _ in range(s.s1):
        prod_part *= p.beta
    for _ in range(s.s2):
        prod_part /= p.gamma
    for y in ys:
        prod_part *= (p.beta * y + 1) / (y + p.gamma)

    beta_sum = sum(y / (p.beta * y + 1) for y in ys)
    if s.s1 > 0:
        beta_sum += s.s1 / p.beta
    gamma_sum = -(s.s2 / p.gamma) - sum(1 / (y + p.gamma) for y in ys)

    if isinstance(phi, LogPotential):
        return (beta_sum, gamma_sum, 1 / p.lam)
    common = _f_times_dphi(phi, f)
    d_lam = phi.derivative(f) * prod_part
    return (common * beta_sum, common * gamma_sum, d_lam)
