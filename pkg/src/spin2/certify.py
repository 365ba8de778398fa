"""Certified real-parameter families, contraction margins, and the numerical
perturbation-radius estimate.

A certificate is produced in three stages:
  1. closed-form membership and margin eta for the matched family,
  2. a strip half-width eps around the potential image keeping the sampled
     gradient norm at most 1 - eta/2 and keeping -gamma and -1 away from the
     preimage region,
  3. a parameter-ball radius capped by the boundary distances and by
     eps * eta / (2 M), with M the sampled parameter-gradient bound.

Every supremum here is estimated by grids plus seeded random sampling; the
resulting certificate is explicitly empirical, never rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (
    CertificationError,
    DomainError,
    InternalInconsistencyError,
)
from .params import Params
from .potentials import Potential, make_potential
from .recursion import (
    grad_norm1,
    grad_params,
    grad_transformed,
    recursion_value,
    signatures_exactly,
    signatures_up_to,
)

SET_IDS = ("S1", "S2", "S3", "S4")
UNIQUENESS_SLACK = 1e-9
_AVOID_TOL = 1e-9  # how close -1 / -gamma may come to the certified region


def _real_triple(p) -> tuple[float, float, float]:
    if isinstance(p, Params):
        return p.as_real_triple()
    beta, gamma, lam = p
    return float(beta), float(gamma), float(lam)


def fixed_point(beta: float, gamma: float, lam: float, d: int) -> float:
    """Unique positive solution of lam ((beta x + 1)/(x + gamma))^d = x."""
    if lam <= 0 or gamma <= 0 or beta < 0 or beta * gamma >= 1 or d < 1:
        raise DomainError("fixed point needs lam > 0, gamma > 0, 0 <= beta, beta*gamma < 1")

    def g(x: float) -> float:
        return lam * ((beta * x + 1.0) / (x + gamma)) ** d - x

    hi = lam / gamma ** d + 1.0
    return brentq(g, 0.0, hi, xtol=1e-14, rtol=8.9e-16)


def uniqueness_check(beta: float, gamma: float, lam: float, delta_max: int) -> tuple[bool, float]:
    """Whether every arity below delta_max has a contracting fixed point.

    Returns (holds, c) with c the largest fixed-point derivative magnitude
    d (1 - beta gamma) x / ((beta x + 1)(x + gamma)) over arities 1..delta_max-1.
    """
    if beta * gamma >= 1 or beta < 0 or gamma <= 0 or lam < 0:
        raise DomainError("uniqueness check needs beta*gamma < 1, beta >= 0, gamma > 0, lam >= 0")
    if lam == 0:
        return True, 0.0
    c = 0.0
    for d in range(1, delta_max):
        x = fixed_point(beta, gamma, lam, d)
        c = max(c, d * (1.0 - beta * gamma) * x / ((beta * x + 1.0) * (x + gamma)))
    return c < 1.0 - UNIQUENESS_SLACK, c


def membership_all(p_real, delta_max: int) -> list[str]:
    """Every family containing the point, in index order."""
    beta, gamma, lam = _real_triple(p_real)
    if delta_max < 3:
        raise DomainError("membership needs delta_max >= 3")
    if gamma == 0:
        raise DomainError("gamma = 0 is outside every certified family")
    out = []
    if beta > 0 and gamma > 0 and lam >= 0:
        s = math.sqrt(beta * gamma)
        if (delta_max - 2) / delta_max < s < delta_max / (delta_max - 2):
            out.append("S1")
    if beta >= 0 and gamma > 0 and beta * gamma < 1 and lam >= 0:
        holds, _c = uniqueness_check(beta, gamma, lam, delta_max)
        if holds:
            out.append("S2")
    if beta > 0 and gamma > 0 and beta * gamma > delta_max / (delta_max - 2):
        edge = (delta_max - 2) * beta * gamma - delta_max
        t = max(1.0, beta)
        if 0 <= lam < gamma / (t ** (delta_max - 1) * edge):
            out.append("S3")
        r = min(1.0, 1.0 / gamma)
        if lam > edge / (beta * r ** (delta_max - 1)):
            out.append("S4")
    return out


def membership(p_real, delta_max: int) -> Optional[str]:
    """First matching family (ties resolve to the lowest index), None if none."""
    ids = membership_all(p_real, delta_max)
    return ids[0] if ids else None


@dataclass(frozen=True)
class RegionInterval:
    """Real compact interval kept invariant by the recursion family."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")


def contraction_interval(p_real, delta_max: int, set_id: str) -> tuple[RegionInterval, Potential]:
    """Invariant interval and potential for a point of the given family."""
    beta, gamma, lam = _real_triple(p_real)
    ids = membership_all(p_real, delta_max)
    if set_id not in ids:
        raise CertificationError(f"point is not in {set_id} (matches: {ids or 'none'})")
    if lam == 0:
        return RegionInterval(0.0, 1.0), make_potential("identity")
    if set_id == "S1":
        r = min(1.0, beta, 1.0 / gamma)
        t = max(1.0, beta, 1.0 / gamma)
        return (
            RegionInterval(lam * r ** (delta_max - 1), lam * t ** (delta_max - 1)),
            make_potential("log"),
        )
    if set_id in ("S3", "S4"):
        r = min(1.0, 1.0 / gamma)
        t = max(1.0, beta)
        return (
            RegionInterval(lam * r ** (delta_max - 1), lam * t ** (delta_max - 1)),
            make_potential("log"),
        )
    if set_id == "S2":
        if beta > 0:
            r = min(1.0, beta, 1.0 / gamma)
            t = max(1.0, beta, 1.0 / gamma)
            lo, hi = lam * r ** (delta_max - 1), lam * t ** (delta_max - 1)
        else:
            hi = max(lam, lam / gamma ** (delta_max - 1))
            lo = min(lam, lam / (hi + gamma) ** (delta_max - 1))
        return RegionInterval(lo, hi), make_potential("sqrt-integral", beta, gamma)
    raise DomainError(f"unknown set id {set_id!r}")


# ---------------------------------------------------------------- margins

def _h_profile(beta: float, gamma: float, lam: float, d: int, x: float) -> float:
    """Symmetrized single-variable bound on the conjugated gradient norm for
    the sqrt-integral potential at arity d."""
    if x <= 0:
        return 0.0
    f = lam * ((beta * x + 1.0) / (x + gamma)) ** d
    inner = x / ((beta * x + 1.0) * (x + gamma))
    outer = f / ((beta * f + 1.0) * (f + gamma))
    return d * (1.0 - beta * gamma) * math.sqrt(inner) * math.sqrt(outer)


def _h_peak(beta: float, gamma: float, lam: float, d: int) -> float:
    """Location of the maximum of _h_profile: the unique sign change of the
    derivative factor (decreasing left side minus increasing right side)."""

    def q(x: float) -> float:
        f = lam * ((beta * x + 1.0) / (x + gamma)) ** d
        lhs = (gamma - beta * x * x) / (d * (1.0 - beta * gamma) * x)
        rhs = (gamma - beta * f * f) / ((beta * f + 1.0) * (f + gamma))
        return lhs - rhs

    lo = 1e-12
    hi = 1.0
    while q(hi) > 0:
        hi *= 2.0
        if hi > 1e18:
            raise DomainError("gradient profile peak not bracketed")
    return brentq(q, lo, hi, xtol=1e-13, rtol=8.9e-16)


def _grid_points(lo: float, hi: float, count: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    return np.linspace(lo, hi, count)


def _sampled_real_sup(
    beta: float,
    gamma: float,
    lam: float,
    delta_max: int,
    interval: RegionInterval,
    phi: Potential,
    grid: int,
    samples: int,
    seed: int,
) -> float:
    """Grid+random estimate of the gradient-norm supremum over the image box."""
    p0 = Params(complex(beta), complex(gamma), complex(lam))
    ilo, ihi = phi.image_interval(interval.lo, interval.hi)
    rng = np.random.default_rng(seed)
    sup = 0.0
    for s in signatures_up_to(delta_max - 1, skip_plus_pins=(beta == 0)):
        if s.k == 0:
            continue
        per_dim = grid if s.k <= 2 else 8
        axes = [_grid_points(ilo, ihi, per_dim)] * s.k
        mesh = np.meshgrid(*axes) if s.k > 1 else [axes[0]]
        points = np.stack([m.ravel() for m in mesh], axis=-1)
        extra = rng.uniform(ilo, ihi, size=(samples, s.k)) if ihi > ilo else np.empty((0, s.k))
        for xs in np.concatenate([points, extra]):
            sup = max(sup, grad_norm1(grad_transformed(p0, s, phi, [complex(x) for x in xs])))
    return sup


@dataclass(frozen=True)
class MarginReport:
    eta: float
    sampled_sup: float
    set_id: str


def real_contraction_margin(
    p_real,
    delta_max: int,
    set_id: Optional[str] = None,
    grid: int = 64,
    samples: int = 1024,
    seed: int = 0,
) -> MarginReport:
    """Closed-form margin eta for the matched family, cross-checked against a
    sampled gradient supremum (which must not exceed 1 - eta)."""
    beta, gamma, lam = _real_triple(p_real)
    if set_id is None:
        set_id = membership(p_real, delta_max)
        if set_id is None:
            raise CertificationError("no set matched")
    interval, phi = contraction_interval(p_real, delta_max, set_id)

    if lam == 0:
        return MarginReport(eta=1.0, sampled_sup=0.0, set_id=set_id)

    if set_id == "S1":
        q = abs(1.0 - math.sqrt(beta * gamma)) / (1.0 + math.sqrt(beta * gamma))
        eta = 1.0 - (delta_max - 1) * q
    elif set_id == "S3":
        t = max(1.0, beta)
        eta = 1.0 - (delta_max - 1) * (beta * gamma - 1.0) / (
            gamma / (lam * t ** (delta_max - 1)) + 1.0 + beta * gamma
        )
    elif set_id == "S4":
        r = min(1.0, 1.0 / gamma)
        eta = 1.0 - (delta_max - 1) * (beta * gamma - 1.0) / (
            beta * lam * r ** (delta_max - 1) + 1.0 + beta * gamma
        )
    elif set_id == "S2":
        _holds, c = uniqueness_check(beta, gamma, lam, delta_max)
        eta = 1.0 - math.sqrt(c)
    else:
        raise DomainError(f"unknown set id {set_id!r}")

    if set_id == "S2":
        # single-variable reduction: evaluate the profile at its solved peak
        # and on a wide log grid instead of sampling the k-dimensional box
        sup = 0.0
        xs = np.logspace(-6, 6, 4096)
        for d in range(1, delta_max):
            vals = [_h_profile(beta, gamma, lam, d, float(x)) for x in xs]
            sup = max(sup, max(vals), _h_profile(beta, gamma, lam, d, _h_peak(beta, gamma, lam, d)))
    else:
        sup = _sampled_real_sup(
            beta, gamma, lam, delta_max, interval, phi, grid, samples, seed
        )

    if sup > (1.0 - eta) + 1e-6:
        raise InternalInconsistencyError(
            f"sampled gradient sup {sup} exceeds analytic bound {1.0 - eta}"
        )
    return MarginReport(eta=eta, sampled_sup=sup, set_id=set_id)


# ------------------------------------------------------- strip machinery

def _dist_to_interval(z: complex, ilo: float, ihi: float) -> float:
    x = min(max(z.real, ilo), ihi)
    return abs(z - x)


def _strip_random(rng, ilo: float, ihi: float, eps: float, count: int) -> list[complex]:
    """Random points of the closed eps-neighborhood of [ilo, ihi]."""
    centers = rng.uniform(ilo, ihi, count) if ihi > ilo else np.full(count, ilo)
    radii = eps * np.sqrt(rng.random(count))
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    pts = centers + radii * np.exp(1j * angles)
    return [complex(z) for z in pts]


def _strip_boundary(ilo: float, ihi: float, eps: float, count: int) -> list[complex]:
    """Deterministic points on the stadium boundary of the strip."""
    length = ihi - ilo
    per_edge = max(count // 4, 8)
    pts: list[complex] = []
    if length > 0:
        xs = np.linspace(ilo, ihi, per_edge)
        pts.extend(complex(x, eps) for x in xs)
        pts.extend(complex(x, -eps) for x in xs)
    for theta in np.linspace(0.5 * np.pi, 1.5 * np.pi, per_edge):
        pts.append(ilo + eps * complex(math.cos(theta), math.sin(theta)))
    for theta in np.linspace(-0.5 * np.pi, 0.5 * np.pi, per_edge):
        pts.append(ihi + eps * complex(math.cos(theta), math.sin(theta)))
    return pts


def _ball_offsets(rng, radius: float, count: int) -> list[complex]:
    """Complex offsets of modulus <= radius, biased toward the sphere."""
    radii = radius * np.sqrt(rng.random(count))
    radii[: max(1, count // 4)] = radius  # stress the boundary
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    return [complex(z) for z in radii * np.exp(1j * angles)]


def sample_in_ball(anchor, delta: float, rng, count: int) -> list[Params]:
    """Params with each coordinate within `delta` of the real anchor."""
    beta, gamma, lam = _real_triple(anchor)
    out = []
    db = _ball_offsets(rng, delta, count)
    dg = _ball_offsets(rng, delta, count)
    dl = _ball_offsets(rng, delta, count)
    for i in range(count):
        out.append(Params(beta + db[i], gamma + dg[i], lam + dl[i]))
    return out


@dataclass(frozen=True)
class ContractionCert:
    """Empirical contraction certificate around a real anchor."""

    set_id: str
    all_matches: tuple[str, ...]
    anchor: tuple[float, float, float]
    max_degree: int
    interval: RegionInterval
    potential: dict
    eta: float
    eta_strip: float
    epsilon: float
    M: float
    delta: float
    sampled_grad_sup: float
    caps: dict
    empirical: bool = True

    def as_json_dict(self) -> dict:
        return {
            "set_id": self.set_id,
            "all_matches": list(self.all_matches),
            "anchor": {"beta": self.anchor[0], "gamma": self.anchor[1], "lambda": self.anchor[2]},
            "max_degree": self.max_degree,
            "interval": {"lo": self.interval.lo, "hi": self.interval.hi},
            "potential": self.potential,
            "eta": self.eta,
            "eta_strip": self.eta_strip,
            "epsilon": self.epsilon,
            "M": self.M,
            "delta": self.delta,
            "sampled_grad_sup": self.sampled_grad_sup,
            "caps": self.caps,
            "empirical": self.empirical,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ContractionCert":
        return ContractionCert(
            set_id=data["set_id"],
            all_matches=tuple(data["all_matches"]),
            anchor=(
                data["anchor"]["beta"],
                data["anchor"]["gamma"],
                data["anchor"]["lambda"],
            ),
            max_degree=data["max_degree"],
            interval=RegionInterval(data["interval"]["lo"], data["interval"]["hi"]),
            potential=data["potential"],
            eta=data["eta"],
            eta_strip=data["eta_strip"],
            epsilon=data["epsilon"],
            M=data["M"],
            delta=data["delta"],
            sampled_grad_sup=data["sampled_grad_sup"],
            caps=data["caps"],
            empirical=data["empirical"],
        )

    def rebuild_potential(self) -> Potential:
        kind = self.potential["kind"]
        return make_potential(kind, self.potential.get("beta", 0.0), self.potential.get("gamma", 1.0))


def _signature_lists(delta_max: int, beta: float):
    skip = beta == 0
    inner = [s for s in signatures_up_to(delta_max - 1, skip_plus_pins=skip)]
    top = [s for s in signatures_exactly(delta_max, skip_plus_pins=skip)]
    return inner, top


def estimate_delta(
    p_real,
    delta_max: int,
    seed: int = 0,
    n_samples: int = 4096,
    eps_start: float = 0.2,
    eps_shrink: float = 0.7,
    set_id: Optional[str] = None,
) -> ContractionCert:
    """Estimate a perturbation radius delta realizing the contraction
    construction: strip search, boundary caps, then eps * eta / (2 M)."""
    beta, gamma, lam = _real_triple(p_real)
    ids = membership_all(p_real, delta_max)
    if not ids:
        raise CertificationError("no set matched")
    if set_id is None:
        set_id = ids[0]
    elif set_id not in ids:
        raise CertificationError(f"point is not in {set_id} (matches: {ids})")
    interval, phi = contraction_interval(p_real, delta_max, set_id)
    margin = real_contraction_margin(p_real, delta_max, set_id=set_id, seed=seed)
    eta = margin.eta
    ilo, ihi = phi.image_interval(interval.lo, interval.hi)
    p0 = Params(complex(beta), complex(gamma), complex(lam))
    inner_sigs, top_sigs = _signature_lists(delta_max, beta)
    k_sigs = [s for s in inner_sigs if s.k >= 1]
    per_sig = max(96, n_samples // max(1, len(inner_sigs)))
    rng = np.random.default_rng(seed)
    grad_cap = 1.0 - 0.5 * eta

    def anchors_ok(eps: float) -> bool:
        try:
            boundary = _strip_boundary(ilo, ihi, eps, 128)
            for z in boundary:
                q = phi.inverse(z)
                if abs(q + gamma) <= _AVOID_TOL or abs(q + 1.0) <= _AVOID_TOL:
                    return False
            interior = _strip_random(rng, ilo, ihi, eps, 64)
            for z in interior + boundary:
                q = phi.inverse(z)
                if abs(q + gamma) <= _AVOID_TOL or abs(q + 1.0) <= _AVOID_TOL:
                    return False
            for s in k_sigs:
                for _ in range(max(1, per_sig // 8)):
                    xs = _strip_random(rng, ilo, ihi, eps, s.k)
                    if grad_norm1(grad_transformed(p0, s, phi, xs)) > grad_cap:
                        return False
            for s in top_sigs:
                for _ in range(max(1, per_sig // 8)):
                    xs = _strip_random(rng, ilo, ihi, eps, s.k)
                    qs = [phi.inverse(x) for x in xs]
                    if abs(recursion_value(p0, s, qs) + 1.0) <= _AVOID_TOL:
                        return False
        except DomainError:
            return False
        return True

    eps = eps_start
    while not anchors_ok(eps):
        eps *= eps_shrink
        if eps < 1e-12:
            raise CertificationError(
                f"strip search collapsed to zero for {set_id} anchor {p_real}"
            )

    boundary = _strip_boundary(ilo, ihi, eps, 1024)
    qs_boundary = [phi.inverse(z) for z in boundary]
    d_gamma = float(min(abs(q + gamma) for q in qs_boundary))
    d_lambda = float(min(abs(q - lam) for q in qs_boundary))
    d_minus1 = float(min(abs(q + 1.0) for q in qs_boundary))
    ball = min(d_gamma, d_lambda, eps, 0.9 * gamma)
    caps = {
        "dist_to_minus_gamma": d_gamma,
        "dist_to_minus_one": d_minus1,
        "lambda_interior": d_lambda,
        "gamma_nonzero": 0.9 * gamma,
        "epsilon": eps,
    }

    M = 0.0
    for _attempt in range(60):
        if ball < 1e-14:
            raise CertificationError(
                f"parameter-ball search collapsed to zero for {set_id} anchor {p_real}"
            )
        ok = True
        M = 0.0
        try:
            beta_offs = _ball_offsets(rng, ball, per_sig)
            gamma_offs = _ball_offsets(rng, ball, per_sig)
            lam_offs = _ball_offsets(rng, ball, per_sig)
            for s in inner_sigs:
                for i in range(per_sig):
                    pz = Params(beta + beta_offs[i], gamma + gamma_offs[i], lam + lam_offs[i])
                    xs = _strip_random(rng, ilo, ihi, eps, s.k)
                    if s.k >= 1 and grad_norm1(grad_transformed(pz, s, phi, xs)) > grad_cap:
                        ok = False
                        break
                    M = max(M, grad_norm1(grad_params(pz, s, phi, xs)))
                if not ok:
                    break
            if ok:
                for s in top_sigs:
                    for i in range(per_sig):
                        pz = Params(beta + beta_offs[i], gamma + gamma_offs[i], lam + lam_offs[i])
                        xs = _strip_random(rng, ilo, ihi, eps, s.k)
                        qs = [phi.inverse(x) for x in xs]
                        if abs(recursion_value(pz, s, qs) + 1.0) <= _AVOID_TOL:
                            ok = False
                            break
                    if not ok:
                        break
        except DomainError:
            ok = False
        if ok:
            break
        ball *= 0.5
    else:
        raise CertificationError(f"parameter-ball search failed for {set_id} anchor {p_real}")

    delta = ball if M == 0 else min(ball, eps * eta / (2.0 * M))
    caps["ball"] = float(ball)
    caps["grad_cap"] = float(eps * eta / (2.0 * M)) if M > 0 else math.inf
    return ContractionCert(
        set_id=set_id,
        all_matches=tuple(ids),
        anchor=(beta, gamma, lam),
        max_degree=delta_max,
        interval=interval,
        potential=phi.describe(),
        eta=eta,
        eta_strip=0.5 * eta,
        epsilon=eps,
        M=M,
        delta=delta,
        sampled_grad_sup=margin.sampled_sup,
        caps=caps,
    )


@dataclass
class ProbeReport:
    """Sampling report for the containment and gradient conditions at a
    (possibly complex) parameter point against a certificate."""

    lambda_in_region: bool
    containment_violations: int = 0
    top_violations: int = 0
    gradient_violations: int = 0
    worst_containment_margin: float = math.inf
    min_top_distance: float = math.inf
    grad_sup: float = 0.0
    samples_used: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def condition1_ok(self) -> bool:
        return self.containment_violations == 0 and self.top_violations == 0 and self.lambda_in_region

    @property
    def condition2_ok(self) -> bool:
        return self.gradient_violations == 0


def complex_contraction_probe(
    p: Params,
    delta_max: int,
    cert: ContractionCert,
    n_samples: int = 10_000,
    seed: int = 0,
) -> ProbeReport:
    """Sample the certified strip and check region containment, avoidance of
    -1 at the top arity, and the strip gradient bound at the given point."""
    phi = cert.rebuild_potential()
    ilo, ihi = phi.image_interval(cert.interval.lo, cert.interval.hi)
    eps = cert.epsilon
    beta0 = cert.anchor[0]
    inner_sigs, top_sigs = _signature_lists(delta_max, beta0)
    per_sig = max(1, n_samples // max(1, len(inner_sigs) + len(top_sigs)))
    rng = np.random.default_rng(seed)
    slack = 1e-9

    try:
        lam_in = _dist_to_interval(phi.forward(p.lam), ilo, ihi) <= eps + slack
    except DomainError:
        lam_in = False
    report = ProbeReport(lambda_in_region=lam_in)
    grad_cap = 1.0 - cert.eta_strip

    def witness(kind, s, xs, value):
        if len(report.witnesses) < 8:
            report.witnesses.append(
                {"kind": kind, "signature": (s.s1, s.s2, s.k), "xs": [str(x) for x in xs], "value": str(value)}
            )

    for s in inner_sigs:
        for _ in range(per_sig):
            xs = _strip_random(rng, ilo, ihi, eps, s.k)
            report.samples_used += 1
            try:
                qs = [phi.inverse(x) for x in xs]
                f = recursion_value(p, s, qs)
                img = phi.forward(f)
            except DomainError as exc:
                report.containment_violations += 1
                witness("containment-domain", s, xs, exc)
                continue
            margin = eps - _dist_to_interval(img, ilo, ihi)
            report.worst_containment_margin = min(report.worst_containment_margin, margin)
            if margin < -slack:
                report.containment_violations += 1
                witness("containment", s, xs, f)
            if s.k >= 1:
                try:
                    g = grad_norm1(grad_transformed(p, s, phi, xs))
                except DomainError as exc:
                    report.gradient_violations += 1
                    witness("gradient-domain", s, xs, exc)
                    continue
                report.grad_sup = max(report.grad_sup, g)
                if g > grad_cap + slack:
                    report.gradient_violations += 1
                    witness("gradient", s, xs, g)

    for s in top_sigs:
        for _ in range(per_sig):
            xs = _strip_random(rng, ilo, ihi, eps, s.k)
            report.samples_used += 1
            try:
                qs = [phi.inverse(x) for x in xs]
                f = recursion_value(p, s, qs)
            except DomainError as exc:
                report.top_violations += 1
                witness("top-domain", s, xs, exc)
                continue
            dist = abs(f + 1.0)
            report.min_top_distance = min(report.min_top_distance, dist)
            if dist <= 1e-12:
                report.top_violations += 1
                witness("top", s, xs, f)

    return report
