"""Invertible change-of-variable maps used to tame the ratio recursion.

Three kinds:
  * identity      - used in the trivial zero-field regime,
  * log           - principal branch, for the ferromagnetic-window regimes,
  * sqrt-integral - phi(x) = int_1^x dy / sqrt(y (b y + 1)(y + c)), the map
    with no closed form, realized numerically.

The sqrt-integral map is evaluated on the positive real axis from a cached
cumulative quadrature table (adaptive quadrature per log-spaced segment,
fixed Gauss-Legendre inside a segment) and continued into the strip
|Im| <= 0.2 by stepped order-4 Taylor expansion; its derivative
1/sqrt(x (b x + 1)(x + c)) is exact.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError

IM_STRIP_LIMIT = 0.2
_TAYLOR_STEP = 0.05
_NEWTON_TOL = 1e-13
_CELLS_PER_DECADE = 64
_LOG_STEP = math.log(10.0) / _CELLS_PER_DECADE
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class Potential:
    """Base interface: forward, inverse, derivative, and interval image."""

    kind = "base"

    def forward(self, x: complex) -> complex:
        raise NotImplementedError

    def inverse(self, y: complex) -> complex:
        raise NotImplementedError

    def derivative(self, x: complex) -> complex:
        raise NotImplementedError

    def image_interval(self, lo: float, hi: float) -> tuple[float, float]:
        """Image of [lo, hi]; all kinds here are increasing on their domain."""
        a = self.forward(complex(lo)).real
        b = self.forward(complex(hi)).real
        return (a, b) if a <= b else (b, a)

    def describe(self) -> dict:
        return {"kind": self.kind}


class IdentityPotential(Potential):
    kind = "identity"

    def forward(self, x: complex) -> complex:
        return complex(x)

    def inverse(self, y: complex) -> complex:
        return complex(y)

    def derivative(self, x: complex) -> complex:
        return 1.0 + 0j


class LogPotential(Potential):
    """Principal-branch logarithm; touching the cut is an error, not a wrap."""

    kind = "log"

    def forward(self, x: complex) -> complex:
        x = complex(x)
        if x == 0 or (x.real <= 0 and x.imag == 0):
            raise DomainError(f"log argument {x} on the branch cut")
        return cmath.log(x)

    def inverse(self, y: complex) -> complex:
        return cmath.exp(y)

    def derivative(self, x: complex) -> complex:
        x = complex(x)
        if x == 0:
            raise DomainError("log derivative at 0")
        return 1.0 / x


class SqrtIntegralPotential(Potential):
    """phi(x) = int_1^x dy / sqrt(u(y)) with u(y) = y (b y + 1)(y + c).

    b >= 0 and c > 0 are fixed real anchor parameters; u > 0 on the positive
    axis, so phi is strictly increasing there.
    """

    kind = "sqrt-integral"

    def __init__(self, beta: float, gamma: float, quad_tol: float = 1e-12):
        if beta < 0 or gamma <= 0:
            raise DomainError("sqrt-integral potential needs beta >= 0, gamma > 0")
        self.beta = float(beta)
        self.gamma = float(gamma)
        self.quad_tol = quad_tol
        # u(y) = c3 y^3 + c2 y^2 + c1 y
        self._c3 = self.beta
        self._c2 = 1.0 + self.beta * self.gamma
        self._c1 = self.gamma
        # cumulative table at nodes exp(i * _LOG_STEP), i in [lo_idx, hi_idx]
        self._lo_idx = 0
        self._hi_idx = 0
        self._table = {0: 0.0}  # phi at node exp(0) = 1

    def describe(self) -> dict:
        return {"kind": self.kind, "beta": self.beta, "gamma": self.gamma}

    def _u(self, x: complex) -> complex:
        return x * (self.beta * x + 1.0) * (x + self.gamma)

    def _integrand(self, y: float) -> float:
        return 1.0 / math.sqrt(y * (self.beta * y + 1.0) * (y + self.gamma))

    def _check_domain(self, x: complex, slack: float = 1.0) -> None:
        if x.real <= 0:
            raise DomainError(f"sqrt-integral potential needs Re > 0, got {x}")
        if abs(x.imag) > slack * IM_STRIP_LIMIT + 1e-12:
            raise DomainError(f"|Im {x}| exceeds the working strip {IM_STRIP_LIMIT}")

    def _node(self, idx: int) -> float:
        return math.exp(idx * _LOG_STEP)

    def _segment(self, a: float, b: float) -> float:
        val, _err = quad(self._integrand, a, b, epsabs=self.quad_tol, epsrel=0.0)
        return val

    def _ensure_index(self, idx: int) -> None:
        while self._hi_idx < idx:
            nxt = self._hi_idx + 1
            self._table[nxt] = self._table[self._hi_idx] + self._segment(
                self._node(self._hi_idx), self._node(nxt)
            )
            self._hi_idx = nxt
        while self._lo_idx > idx:
            nxt = self._lo_idx - 1
            self._table[nxt] = self._table[self._lo_idx] - self._segment(
                self._node(nxt), self._node(self._lo_idx)
            )
            self._lo_idx = nxt

    def _forward_real(self, x: float) -> float:
        if x <= 0:
            raise DomainError(f"sqrt-integral potential needs a positive argument, got {x}")
        idx = math.floor(math.log(x) / _LOG_STEP)
        self._ensure_index(idx)
        a = self._node(idx)
        # Gauss-Legendre remainder over [a, x]; the cell is narrow and smooth
        half = 0.5 * (x - a)
        mid = 0.5 * (x + a)
        rem = half * float(
            np.sum(_GL_WEIGHTS / np.sqrt(
                (mid + half * _GL_NODES)
                * (self.beta * (mid + half * _GL_NODES) + 1.0)
                * ((mid + half * _GL_NODES) + self.gamma)
            ))
        )
        return self._table[idx] + rem

    def _forward_complex(self, x: complex, slack: float) -> complex:
        self._check_domain(x, slack)
        val: complex = complex(self._forward_real(x.real))
        if x.imag == 0.0:
            return val
        # integrate the explicit derivative up the vertical segment; the
        # nearest branch point sits on the nonpositive real axis, so short
        # Gauss-Legendre panels converge to machine precision
        panel = min(_TAYLOR_STEP, max(0.5 * x.real, 1e-4))
        steps = max(1, math.ceil(abs(x.imag) / panel))
        lo = 0.0
        step = x.imag / steps
        for _ in range(steps):
            half = 0.5 * step
            mid = lo + half
            ts = mid + half * _GL_NODES
            seg = sum(
                w / cmath.sqrt(self._u(complex(x.real, t)))
                for w, t in zip(_GL_WEIGHTS, ts)
            )
            val += 1j * half * seg
            lo += step
        return val

    def forward(self, x: complex) -> complex:
        return self._forward_complex(complex(x), slack=1.0)

    def derivative(self, x: complex) -> complex:
        x = complex(x)
        self._check_domain(x, slack=2.0)
        return 1.0 / cmath.sqrt(self._u(x))

    def _inverse_real(self, y: float) -> float:
        # phi is increasing with phi(1) = 0; bracket by doubling, then refine.
        if y == 0.0:
            return 1.0
        lo, hi = (1.0, 2.0) if y > 0 else (0.5, 1.0)
        while True:
            if y > 0 and self._forward_real(hi) >= y:
                break
            if y < 0 and self._forward_real(lo) <= y:
                break
            if y > 0:
                lo, hi = hi, hi * 2.0
                if hi > 1e15:
                    raise DomainError(f"value {y} above the image of the potential")
            else:
                lo, hi = lo / 2.0, lo
                if lo < 1e-18:
                    raise DomainError(f"value {y} below the image of the potential")
        return brentq(
            lambda t: self._forward_real(t) - y, lo, hi, xtol=1e-15, rtol=8.9e-16
        )

    def inverse(self, y: complex) -> complex:
        y = complex(y)
        x = complex(self._inverse_real(y.real))
        if y.imag == 0.0:
            return x
        # Newton in the plane; iterates get strip slack, the result must not.
        for _ in range(100):
            f = self._forward_complex(x, slack=2.0) - y
            if abs(f) <= _NEWTON_TOL * (1.0 + abs(y)):
                self._check_domain(x, slack=1.0 + 1e-9)
                return x
            x = x - f / self.derivative(x)
            if x.real <= 0:
                raise DomainError(f"inverse of {y} left the working region")
        raise DomainError(f"inverse iteration for {y} did not converge")


def make_potential(kind: str, beta: float = 0.0, gamma: float = 1.0) -> Potential:
    if kind == "identity":
        return IdentityPotential()
    if kind == "log":
        return LogPotential()
    if kind == "sqrt-integral":
        return SqrtIntegralPotential(beta, gamma)
    raise DomainError(f"unknown potential kind {kind!r}")
