"""Grid sweeps over parameter space and the graph corpora they run on."""

from __future__ import annotations

import csv
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .certify import estimate_delta, membership, real_contraction_margin
from .errors import DomainError, Spin2Error
from .exact import lambda_coeffs, partition_exact
from .graphs import Graph, PinnedConfig, SPIN_MINUS, SPIN_PLUS, dist_to_set
from .params import Params, format_complex, parse_complex
from .roots import min_root_distance
from .weitz import decay_fit, ssm_probe

AXIS_NAMES = (
    "beta", "gamma", "lambda",
    "re_beta", "im_beta", "re_gamma", "im_gamma", "re_lambda", "im_lambda",
)
MEASUREMENTS = ("min_root_distance", "membership", "eta", "delta", "decay_rate", "abs_Z")


# ------------------------------------------------------------------ corpus

def _path(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)], name=f"path-{k}")


def _cycle(k: int) -> Graph:
    edges = [(i, (i + 1) % k) for i in range(k)]
    return Graph.from_edges(k, edges, name=f"cycle-{k}")


def _star(k: int) -> Graph:
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)], name=f"star-{k}")


def regular_tree(degree: int, depth: int) -> Graph:
    """Tree whose root has `degree` children and every other internal vertex
    has degree - 1 children, to the given edge depth."""
    if degree < 2 or depth < 0:
        raise DomainError("regular tree needs degree >= 2, depth >= 0")
    edges = []
    frontier = [0]
    next_id = 1
    for level in range(depth):
        new_frontier = []
        for v in frontier:
            kids = degree if level == 0 else degree - 1
            for _ in range(kids):
                edges.append((v, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return Graph.from_edges(next_id, edges, name=f"rtree-{degree}-{depth}")


def random_graphs(max_degree: int, n: int, count: int, seed: int) -> list[Graph]:
    """Deterministic random graphs with bounded degree (greedy edge fill)."""
    rng = np.random.default_rng(seed)
    out = []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for idx in range(count):
        order = rng.permutation(len(pairs))
        target = int(rng.integers(max(1, n - 1), len(pairs) + 1))
        deg = [0] * n
        edges = []
        for t in order:
            if len(edges) >= target:
                break
            i, j = pairs[t]
            if deg[i] < max_degree and deg[j] < max_degree:
                edges.append((i, j))
                deg[i] += 1
                deg[j] += 1
        out.append(Graph.from_edges(n, edges, name=f"random-{max_degree}-{n}-s{seed}-{idx}"))
    return out


def _refine_colors(n: int, adj: list[set[int]]) -> list[int]:
    colors = [len(adj[v]) for v in range(n)]
    for _ in range(n):
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)]
        ranks = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == colors:
            break
        colors = new
    return colors


def canonical_form(n: int, edges: Sequence[tuple[int, int]]) -> tuple:
    """Canonical certificate: lexicographically minimal adjacency rows over
    permutations that respect the color refinement classes."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    colors = _refine_colors(n, adj)
    # positions take classes in canonical (color rank) order
    order = sorted(range(n), key=lambda v: colors[v])
    slot_color = [colors[v] for v in order]
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)

    best: Optional[list[int]] = None
    perm: list[int] = []
    used = [False] * n
    rows: list[int] = []

    def dfs(pos: int) -> None:
        nonlocal best
        if pos == n:
            if best is None or rows < best:
                best = rows.copy()
            return
        for v in by_color[slot_color[pos]]:
            if used[v]:
                continue
            row = 0
            for j in range(pos):
                row = (row << 1) | (1 if perm[j] in adj[v] else 0)
            rows.append(row)
            if best is not None and rows > best[: len(rows)]:
                rows.pop()
                continue
            used[v] = True
            perm.append(v)
            dfs(pos + 1)
            perm.pop()
            used[v] = False
            rows.pop()

    dfs(0)
    return (n, tuple(best or []))


@lru_cache(maxsize=None)
def connected_bounded_graphs(n_max: int, max_degree: int) -> tuple[Graph, ...]:
    """All connected graphs with <= n_max vertices and bounded degree, one per
    isomorphism class, grown by vertex augmentation."""
    if n_max < 1:
        return ()
    levels: list[list[tuple[int, tuple[tuple[int, int], ...]]]] = [[(1, ())]]
    for size in range(2, n_max + 1):
        seen = {}
        for prev_n, prev_edges in levels[-1]:
            deg = [0] * prev_n
            for u, v in prev_edges:
                deg[u] += 1
                deg[v] += 1
            candidates = [v for v in range(prev_n) if deg[v] < max_degree]
            from itertools import combinations as _comb
            for arity in range(1, min(max_degree, len(candidates)) + 1):
                for attach in _comb(candidates, arity):
                    edges = prev_edges + tuple((a, prev_n) for a in attach)
                    key = canonical_form(size, edges)
                    if key not in seen:
                        seen[key] = edges
        levels.append([(size, e) for e in seen.values()])
    out = []
    for level in levels:
        for n, edges in level:
            out.append(Graph.from_edges(n, edges, name=f"conn{n}d{max_degree}-{len(out)}"))
    return tuple(out)


_CORPUS_RE = re.compile(r"^([a-z-]+)\(([^)]*)\)$")


def corpus(name: str) -> list[Graph]:
    """Deterministic graph lists by selector, e.g. 'paths(6)', 'cycles(5)',
    'stars(4)', 'regular-trees(3,2)', 'random(3,8,5,7)', 'all-connected(8,3)'."""
    m = _CORPUS_RE.match(name.strip())
    if not m:
        raise DomainError(f"unknown corpus selector {name!r}")
    kind, arg_text = m.groups()
    args = [int(a) for a in arg_text.split(",")] if arg_text.strip() else []
    if kind == "paths" and len(args) == 1:
        return [_path(k) for k in range(1, args[0] + 1)]
    if kind == "cycles" and len(args) == 1:
        if args[0] < 3:
            raise DomainError("cycles need length >= 3")
        return [_cycle(k) for k in range(3, args[0] + 1)]
    if kind == "stars" and len(args) == 1:
        return [_star(k) for k in range(1, args[0] + 1)]
    if kind == "regular-trees" and len(args) == 2:
        return [regular_tree(args[0], args[1])]
    if kind == "random" and len(args) == 4:
        return random_graphs(*args)
    if kind == "all-connected" and len(args) == 2:
        return list(connected_bounded_graphs(args[0], args[1]))
    raise DomainError(f"unknown corpus selector {name!r}")


# -------------------------------------------------------------------- spec

@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    resolution: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"unknown axis {self.name!r}")
        if self.resolution < 2:
            raise DomainError("axis resolution must be >= 2")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("axis range must be finite")

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.resolution)


@dataclass(frozen=True)
class ScanSpec:
    axis1: AxisSpec
    axis2: AxisSpec
    measurement: str
    fixed: tuple[tuple[str, complex], ...] = ()
    corpus_name: Optional[str] = None
    max_degree: int = 3
    seed: int = 0
    samples: int = 256

    def __post_init__(self):
        if self.measurement not in MEASUREMENTS:
            raise DomainError(f"unknown measurement {self.measurement!r}")

    def as_json_dict(self) -> dict:
        return {
            "axis1": {"name": self.axis1.name, "lo": self.axis1.lo, "hi": self.axis1.hi,
                      "resolution": self.axis1.resolution},
            "axis2": {"name": self.axis2.name, "lo": self.axis2.lo, "hi": self.axis2.hi,
                      "resolution": self.axis2.resolution},
            "measurement": self.measurement,
            "fixed": {k: format_complex(v) for k, v in self.fixed},
            "corpus": self.corpus_name,
            "max_degree": self.max_degree,
            "seed": self.seed,
            "samples": self.samples,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ScanSpec":
        def axis(d):
            return AxisSpec(d["name"], float(d["lo"]), float(d["hi"]), int(d["resolution"]))

        fixed = tuple(
            (k, parse_complex(v) if isinstance(v, str) else complex(v))
            for k, v in data.get("fixed", {}).items()
        )
        return ScanSpec(
            axis1=axis(data["axis1"]),
            axis2=axis(data["axis2"]),
            measurement=data["measurement"],
            fixed=fixed,
            corpus_name=data.get("corpus"),
            max_degree=int(data.get("max_degree", 3)),
            seed=int(data.get("seed", 0)),
            samples=int(data.get("samples", 256)),
        )


def _apply_axis(values: dict[str, complex], name: str, x: float) -> None:
    if name in ("beta", "gamma", "lambda"):
        values[name] = complex(x)
    else:
        part, key = name.split("_", 1)
        z = values[key]
        values[key] = complex(x, z.imag) if part == "re" else complex(z.real, x)


def _cell_params(spec: ScanSpec, x1: float, x2: float) -> Params:
    values = {"beta": 1 + 0j, "gamma": 1 + 0j, "lambda": 1 + 0j}
    for k, v in spec.fixed:
        values[k] = complex(v)
    _apply_axis(values, spec.axis1.name, x1)
    _apply_axis(values, spec.axis2.name, x2)
    return Params(values["beta"], values["gamma"], values["lambda"])


def _measure(spec: ScanSpec, p: Params) -> tuple[str, str]:
    """(value, witness) for one cell; raises Spin2Error on degenerate cells."""
    if spec.measurement == "membership":
        set_id = membership(p.as_real_triple(), spec.max_degree)
        return set_id or "none", ""
    if spec.measurement == "eta":
        report = real_contraction_margin(p.as_real_triple(), spec.max_degree, seed=spec.seed)
        return repr(report.eta), report.set_id
    if spec.measurement == "delta":
        cert = estimate_delta(p.as_real_triple(), spec.max_degree, seed=spec.seed,
                              n_samples=spec.samples)
        return repr(cert.delta), cert.set_id

    if spec.corpus_name is None:
        raise DomainError(f"measurement {spec.measurement} needs a corpus")
    graphs = corpus(spec.corpus_name)

    if spec.measurement == "min_root_distance":
        best = math.inf
        witness = ""
        for g in graphs:
            d = min_root_distance(lambda_coeffs(g, p.beta, p.gamma), [p.lam])
            if d < best:
                best, witness = d, g.name
        return repr(best), witness
    if spec.measurement == "abs_Z":
        best = math.inf
        witness = ""
        for g in graphs:
            z = abs(partition_exact(g, p))
            if z < best:
                best, witness = z, g.name
        return repr(best), witness
    if spec.measurement == "decay_rate":
        points = []
        for g in graphs:
            far = [v for v in range(g.n)
                   if dist_to_set(g, 0, [v]) == max(dist_to_set(g, 0, [w]) for w in range(g.n))]
            if not far or far == [0]:
                continue
            sigma = PinnedConfig(tuple((v, SPIN_PLUS) for v in far))
            tau = PinnedConfig(tuple((v, SPIN_MINUS) for v in far))
            probe = ssm_probe(g, 0, sigma, tau, p)
            if probe.gap > 0 and math.isfinite(probe.distance):
                points.append((probe.distance, probe.gap))
        rate, r2 = decay_fit(points)
        return repr(rate), repr(r2)
    raise DomainError(f"unknown measurement {spec.measurement!r}")


def _run_cell(args: tuple[dict, float, float]) -> dict:
    spec_data, x1, x2 = args
    spec = ScanSpec.from_json_dict(spec_data)
    row = {"axis1": repr(float(x1)), "axis2": repr(float(x2)),
           "value": "", "witness": "", "error": ""}
    try:
        p = _cell_params(spec, x1, x2)
        value, witness = _measure(spec, p)
        row["value"] = value
        row["witness"] = witness
    except Spin2Error as exc:
        row["error"] = str(exc)
    return row


def run_scan(spec: ScanSpec, out_path: Optional[str] = None, threads: int = 1) -> list[dict]:
    """One row per grid cell, axis1 outer; per-cell errors land in the row."""
    cells = [
        (spec.as_json_dict(), float(x1), float(x2))
        for x1 in spec.axis1.points()
        for x2 in spec.axis2.points()
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_run_cell, cells, chunksize=8))
    else:
        rows = [_run_cell(c) for c in cells]
    if out_path is not None:
        with open(out_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["axis1", "axis2", "value", "witness", "error"])
            writer.writeheader()
            writer.writerows(rows)
        sidecar = {"spec": spec.as_json_dict(), "tool": "spin2", "version": __version__}
        with open(out_path + ".spec.json", "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return rows
