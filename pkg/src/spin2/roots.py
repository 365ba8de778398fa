"""Polynomial roots by simultaneous iteration (Durand-Kerner, Aberth fallback).

Good for the degrees this package produces (<= ~25), including graph
polynomials whose coefficients span many orders of magnitude: the variable is
rescaled by the geometric mean root modulus and initial guesses are placed on
the Newton-polygon circles. Coefficients are given lowest-degree first,
matching PolyCoeffs.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, NoConvergenceError
from .exact import PolyCoeffs

_PHASE_RNG_SEED = 0x5EED
_DK_STAGE_ITERS = 200  # switch to Aberth if Durand-Kerner stalls this long


def _as_array(coeffs: Union[PolyCoeffs, Sequence[complex]]) -> np.ndarray:
    if isinstance(coeffs, PolyCoeffs):
        coeffs = coeffs.coeffs
    a = np.asarray(list(coeffs), dtype=np.complex128)
    if a.size == 0 or not np.any(a != 0):
        raise DomainError("need at least one nonzero coefficient")
    return a


def _eval_many(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, a[-1])
    for c in a[-2::-1]:
        acc = acc * z + c
    return acc


def _newton_polygon_radii(a: np.ndarray) -> np.ndarray:
    """One initial radius per root from the upper hull of (i, log|a_i|)."""
    n = a.size - 1
    pts = [(i, math.log(abs(c))) for i, c in enumerate(a) if c != 0]
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    radii = np.empty(n)
    pos = 0
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        r = math.exp((y1 - y2) / (x2 - x1))
        radii[pos : pos + (x2 - x1)] = r
        pos += x2 - x1
    return radii


def poly_roots(
    coeffs: Union[PolyCoeffs, Sequence[complex]],
    tol: float = 1e-12,
    max_iter: int = 2000,
) -> list[complex]:
    """All roots of sum a_j z^j after stripping trailing zero coefficients."""
    a = _as_array(coeffs)
    while a.size > 1 and a[-1] == 0:
        a = a[:-1]
    zeros_at_origin = 0
    while a[0] == 0:
        a = a[1:]
        zeros_at_origin += 1
    n = a.size - 1
    if n == 0:
        return [0j] * zeros_at_origin

    # rescale so root moduli cluster near 1
    scale = abs(a[0] / a[-1]) ** (1.0 / n)
    if scale == 0 or not math.isfinite(scale):
        scale = 1.0
    a = a * scale ** np.arange(n + 1)
    a = a / np.max(np.abs(a))

    rng = np.random.default_rng(_PHASE_RNG_SEED)
    radii = _newton_polygon_radii(a)
    angles = 2 * np.pi * (np.arange(n) + rng.random(n)) / n + 0.3
    z = radii * np.exp(1j * angles)

    abs_a = np.abs(a)
    powers = np.arange(n + 1)

    def backward_small(pv: np.ndarray, z: np.ndarray) -> bool:
        # |P(z)| below the evaluation's own conditioning bound means z is a
        # root of a nearby polynomial; this also ends clusters at multiple
        # roots, where the step criterion alone stalls
        cond = np.abs(z)[:, None] ** powers[None, :] @ abs_a
        return bool(np.all(np.abs(pv) <= tol * np.maximum(cond, 1e-300)))

    deriv = a[1:] * np.arange(1, n + 1)
    aberth = False
    converged = False
    for it in range(max_iter):
        pv = _eval_many(a, z)
        if backward_small(pv, z):
            converged = True
            break
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        if aberth:
            dpv = _eval_many(deriv, z)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                ratio = np.where(pv != 0, dpv / np.where(pv != 0, pv, 1.0), 0.0)
                # row sums include the unit diagonal planted above
                corr = ratio - (np.sum(1.0 / diffs, axis=1) - 1.0)
                step = np.where(pv != 0, 1.0 / corr, 0.0)
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                denom = a[-1] * np.prod(diffs, axis=1)
                step = np.where(pv != 0, pv / np.where(denom != 0, denom, 1.0), 0.0)
        if not np.all(np.isfinite(step)):
            # collision or overflow: nudge and continue
            z = z + 1e-3 * (1.0 + np.abs(z)) * np.exp(1j * rng.random(n) * 2 * np.pi)
            continue
        z = z - step
        if np.max(np.abs(step)) <= tol * (1.0 + np.max(np.abs(z))):
            converged = True
            break
        if not aberth and it >= _DK_STAGE_ITERS:
            aberth = True
    if not converged:
        raise NoConvergenceError(f"root iteration did not converge in {max_iter} steps")
    roots = [0j] * zeros_at_origin + [complex(r) * scale for r in z]
    return roots


def residuals(coeffs: Union[PolyCoeffs, Sequence[complex]], roots: Sequence[complex]) -> list[float]:
    a = _as_array(coeffs)
    z = np.asarray(list(roots), dtype=np.complex128)
    if z.size == 0:
        return []
    return [float(abs(v)) for v in _eval_many(a, z)]


def min_root_distance(
    coeffs: Union[PolyCoeffs, Sequence[complex]],
    targets: Sequence[complex],
    tol: float = 1e-12,
    max_iter: int = 2000,
) -> float:
    """min over targets and roots of their distance; inf for a nonzero constant."""
    roots = poly_roots(coeffs, tol=tol, max_iter=max_iter)
    if not roots:
        return math.inf
    return min(abs(t - r) for t in targets for r in roots)
