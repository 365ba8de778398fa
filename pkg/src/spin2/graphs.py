"""Simple graphs, partial spin pinnings, and the self-avoiding-walk tree."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import DomainError, GraphFormatError
from .params import Params

SPIN_PLUS = 1
SPIN_MINUS = -1

_SPIN_CHARS = {"+": SPIN_PLUS, "-": SPIN_MINUS}


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Adjacency lists preserve input edge order; the order matters for the
    walk-tree leaf convention, which compares neighbors by vertex index.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    max_degree: int
    name: str = ""

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        edge_list: list[tuple[int, int]] = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex out of range in edge ({u}, {v})")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            edge_list.append(key)
            adj[u].append(v)
            adj[v].append(u)
        max_degree = max((len(a) for a in adj), default=0)
        return Graph(
            n=n,
            edges=tuple(edge_list),
            adjacency=tuple(tuple(a) for a in adj),
            max_degree=max_degree,
            name=name,
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class PinnedConfig:
    """Partial assignment vertex -> spin (+1 / -1). Empty by default."""

    assignments: tuple[tuple[int, int], ...] = ()
    _map: Mapping[int, int] = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        m = {}
        for v, s in self.assignments:
            if v in m:
                raise GraphFormatError(f"vertex {v} pinned twice")
            if s not in (SPIN_PLUS, SPIN_MINUS):
                raise DomainError(f"invalid spin {s!r} for vertex {v}")
            m[v] = s
        object.__setattr__(self, "_map", m)

    @staticmethod
    def from_dict(pins: Mapping[int, int]) -> "PinnedConfig":
        return PinnedConfig(tuple(sorted(pins.items())))

    def spin(self, v: int) -> Optional[int]:
        return self._map.get(v)

    def is_pinned(self, v: int) -> bool:
        return v in self._map

    def domain(self) -> frozenset[int]:
        return frozenset(self._map)

    def with_pin(self, v: int, spin: int) -> "PinnedConfig":
        if v in self._map:
            raise GraphFormatError(f"vertex {v} pinned twice")
        return PinnedConfig(self.assignments + ((v, spin),))

    def __len__(self) -> int:
        return len(self.assignments)

    def items(self):
        return self._map.items()


EMPTY_PINS = PinnedConfig()


def parse_graph(text: str) -> tuple[Graph, PinnedConfig]:
    """Parse the graph file format.

    One directive per line, '#' starts a comment:
        n <int>        vertex count, must come first
        e <u> <v>      undirected edge
        pin <v> <+|->  pin directive
    """
    n: Optional[int] = None
    edges: list[tuple[int, int]] = []
    pins: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "n":
                if n is not None:
                    raise GraphFormatError("repeated 'n' directive", lineno)
                if len(parts) != 2:
                    raise GraphFormatError("expected 'n <int>'", lineno)
                n = int(parts[1])
                if n < 0:
                    raise GraphFormatError("vertex count must be nonnegative", lineno)
            elif kind == "e":
                if n is None:
                    raise GraphFormatError("'n' directive must come first", lineno)
                if len(parts) != 3:
                    raise GraphFormatError("expected 'e <u> <v>'", lineno)
                edges.append((int(parts[1]), int(parts[2])))
            elif kind == "pin":
                if n is None:
                    raise GraphFormatError("'n' directive must come first", lineno)
                if len(parts) != 3 or parts[2] not in _SPIN_CHARS:
                    raise GraphFormatError("expected 'pin <v> <+|->'", lineno)
                v = int(parts[1])
                if not 0 <= v < n:
                    raise GraphFormatError(f"pinned vertex {v} out of range", lineno)
                pins.append((v, _SPIN_CHARS[parts[2]]))
            else:
                raise GraphFormatError(f"unknown directive {kind!r}", lineno)
        except ValueError:
            raise GraphFormatError(f"bad integer in {line!r}", lineno) from None
        except GraphFormatError as exc:
            if exc.line is None:
                raise GraphFormatError(str(exc), lineno) from None
            raise
    if n is None:
        raise GraphFormatError("missing 'n' directive")
    graph = Graph.from_edges(n, edges)
    try:
        config = PinnedConfig(tuple(pins))
    except GraphFormatError as exc:
        raise GraphFormatError(str(exc)) from None
    return graph, config


def is_feasible(g: Graph, cfg: PinnedConfig, p: Params) -> bool:
    """False iff the pins force every completion to have weight zero.

    That happens exactly when lam = 0 with a + pin, or beta = 0 with two
    adjacent + pins.
    """
    for v in cfg.domain():
        if not 0 <= v < g.n:
            raise DomainError(f"pinned vertex {v} not in graph")
    if p.lam == 0 and any(s == SPIN_PLUS for _, s in cfg.items()):
        return False
    if p.beta == 0:
        for v, s in cfg.items():
            if s != SPIN_PLUS:
                continue
            for w in g.adjacency[v]:
                if cfg.spin(w) == SPIN_PLUS:
                    return False
    return True


def dist_to_set(g: Graph, v: int, vertices: Iterable[int]) -> float:
    """BFS distance from v to the nearest vertex of the set, inf if none."""
    targets = set(vertices)
    if not targets:
        return math.inf
    if v in targets:
        return 0
    dist = [-1] * g.n
    dist[v] = 0
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                if w in targets:
                    return dist[w]
                queue.append(w)
    return math.inf


@dataclass(frozen=True)
class SawNode:
    vertex: int
    depth: int
    status: Optional[int]  # None = free, else SPIN_PLUS / SPIN_MINUS
    children: tuple[int, ...]


@dataclass(frozen=True)
class SawTree:
    root: int
    nodes: tuple[SawNode, ...]

    def __len__(self) -> int:
        return len(self.nodes)


def cycle_leaf_spin(walk_end: int, first_exit: int, flip: bool = False) -> int:
    """Spin imposed on a copy that closes a cycle.

    When the walk returns to an already-visited vertex, compare the neighbor
    it returns from (walk_end) against the neighbor it first left through
    (first_exit), in vertex-index order: higher return neighbor pins +.
    The flip flag reverses the convention; both choices are valid orderings
    and leave full-depth ratios unchanged.
    """
    plus = walk_end > first_exit
    if flip:
        plus = not plus
    return SPIN_PLUS if plus else SPIN_MINUS


def build_saw_tree(
    g: Graph,
    root: int,
    cfg: PinnedConfig = EMPTY_PINS,
    depth_limit: Optional[int] = None,
    flip_convention: bool = False,
) -> SawTree:
    """Materialize the tree of self-avoiding walks from a free root.

    Copies of pinned vertices keep their pin and are not expanded. A walk
    that would revisit a vertex stops at a leaf copy pinned by
    cycle_leaf_spin. Nodes at depth_limit are kept free and unexpanded.
    """
    if cfg.is_pinned(root):
        raise DomainError(f"root {root} is pinned")
    nodes: list[list] = []  # [vertex, depth, status, children]

    def new_node(vertex: int, depth: int, status: Optional[int]) -> int:
        nodes.append([vertex, depth, status, []])
        return len(nodes) - 1

    root_id = new_node(root, 0, None)
    # stack entries: (node_id, vertex, prev, depth, on_path dict vertex -> successor)
    stack = [(root_id, root, -1, 0, {root: -1})]
    while stack:
        node_id, u, prev, depth, successor = stack.pop()
        if depth_limit is not None and depth >= depth_limit:
            continue
        for w in g.adjacency[u]:
            if w == prev:
                continue
            if cfg.is_pinned(w):
                child = new_node(w, depth + 1, cfg.spin(w))
            elif w in successor:
                spin = cycle_leaf_spin(u, successor[w], flip_convention)
                child = new_node(w, depth + 1, spin)
            else:
                child = new_node(w, depth + 1, None)
                succ = dict(successor)
                succ[u] = w
                succ[w] = -1
                stack.append((child, w, u, depth + 1, succ))
            nodes[node_id][3].append(child)
    frozen = tuple(
        SawNode(vertex=v, depth=d, status=s, children=tuple(c))
        for v, d, s, c in nodes
    )
    return SawTree(root=root_id, nodes=frozen)
