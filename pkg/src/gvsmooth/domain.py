"""Finite discrete domains, guiding samples, level sequences and fields.

A :class:`Domain` is a connected, undirected, unweighted graph on the dense
vertex ids ``0..V-1``. Paths and grids carry coordinates (grids are
row-major, ``v = y * width + x``) so that a Euclidean metric is available
for them; general graphs only have the hop-count metric.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from gvsmooth.errors import DisconnectedDomainError, InvalidArgument

__all__ = [
    "Domain",
    "LevelSequence",
    "SampleSet",
    "ScalarField",
    "build_path_domain",
    "build_grid_domain",
    "build_graph_domain",
    "geodesic_distance",
    "multi_source_distances",
]

KINDS = ("path", "grid4", "grid8", "graph")


@dataclass(frozen=True)
class Domain:
    """Connected graph with symmetric, irreflexive adjacency.

    Use the ``build_*_domain`` constructors rather than instantiating
    directly; they validate the invariants.
    """

    n_vertices: int
    adjacency: tuple[tuple[int, ...], ...]
    kind: str
    width: int | None = None
    height: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown domain kind {self.kind!r}")
        if len(self.adjacency) != self.n_vertices:
            raise InvalidArgument("adjacency must list every vertex")

    @property
    def is_grid(self) -> bool:
        return self.kind in ("grid4", "grid8")

    @property
    def shape(self) -> tuple[int, ...]:
        """``(n,)`` for paths, ``(height, width)`` for grids."""
        if self.is_grid:
            return (self.height, self.width)
        return (self.n_vertices,)

    def neighbors(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once, as ``(u, v)`` with ``u < v``."""
        return [(u, w) for u, nbrs in enumerate(self.adjacency) for w in nbrs if u < w]

    def check_vertex(self, v) -> int:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise InvalidArgument(f"vertex id must be an integer, got {v!r}")
        if not 0 <= v < self.n_vertices:
            raise InvalidArgument(f"vertex {v} outside domain of {self.n_vertices} vertices")
        return int(v)

    def coords(self) -> np.ndarray:
        """Vertex coordinates, shape ``(V, 1)`` for paths or ``(V, 2)`` as ``(x, y)`` for grids."""
        if self.kind == "path":
            return np.arange(self.n_vertices, dtype=float)[:, None]
        if self.is_grid:
            ys, xs = np.divmod(np.arange(self.n_vertices), self.width)
            return np.stack([xs, ys], axis=1).astype(float)
        raise InvalidArgument("general graph domains carry no coordinates")

    def vertex_at(self, x: int, y: int | None = None) -> int:
        """Vertex id for a path index ``x`` or grid position ``(x, y)``."""
        if self.is_grid:
            if y is None:
                raise InvalidArgument("grid domains need both x and y")
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise InvalidArgument(f"({x}, {y}) outside {self.width}x{self.height} grid")
            return y * self.width + x
        if y is not None:
            raise InvalidArgument("y coordinate given for a non-grid domain")
        return self.check_vertex(x)


@dataclass(frozen=True)
class LevelSequence:
    """Strictly increasing values ``A_1 < ... < A_n`` addressed by 1-based index."""

    levels: tuple[float, ...]

    def __post_init__(self):
        levels = tuple(float(a) for a in self.levels)
        if not levels:
            raise InvalidArgument("level sequence must have at least one level")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise InvalidArgument("levels must be strictly increasing")
        object.__setattr__(self, "levels", levels)

    def __len__(self):
        return len(self.levels)

    def value(self, index: int) -> float:
        self.check_index(index)
        return self.levels[index - 1]

    def check_index(self, index) -> int:
        if not 1 <= index <= len(self.levels):
            raise InvalidArgument(f"level index {index} outside 1..{len(self.levels)}")
        return int(index)

    def values_of(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=int)
        if idx.size and (idx.min() < 1 or idx.max() > len(self.levels)):
            raise InvalidArgument("level index outside 1..n")
        return np.asarray(self.levels)[idx - 1]


@dataclass(frozen=True)
class SampleSet:
    """Guiding points ``J`` with their values ``f(J)``.

    Values are reals for Lipschitz extensions and 1-based level indices
    for gradual variation.
    """

    vertices: tuple[int, ...]
    values: tuple = field(default=())

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        values = tuple(self.values)
        if not vertices:
            raise InvalidArgument("sample set must be nonempty")
        if len(values) != len(vertices):
            raise InvalidArgument("need exactly one value per sample vertex")
        if len(set(vertices)) != len(vertices):
            raise InvalidArgument("sample vertices must be distinct")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "SampleSet":
        pairs = list(pairs)
        return cls(tuple(v for v, _ in pairs), tuple(y for _, y in pairs))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(zip(self.vertices, self.values))

    def check_in(self, dom: Domain) -> None:
        for v in self.vertices:
            dom.check_vertex(v)

    def real_values(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A total function on the vertices of ``domain``."""

    domain: Domain
    values: np.ndarray
    is_level_indexed: bool = False

    def __post_init__(self):
        dtype = int if self.is_level_indexed else float
        values = np.array(self.values, dtype=dtype).reshape(-1)
        if values.shape != (self.domain.n_vertices,):
            raise InvalidArgument(
                f"field has {values.size} values for {self.domain.n_vertices} vertices"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, v):
        return self.values[v]

    def as_array(self) -> np.ndarray:
        """Values shaped like the domain: ``(n,)`` or ``(height, width)``."""
        return self.values.reshape(self.domain.shape)

    def to_real(self, levels: LevelSequence) -> "ScalarField":
        if not self.is_level_indexed:
            return self
        return ScalarField(self.domain, levels.values_of(self.values))


def build_path_domain(n: int) -> Domain:
    """Path ``0 - 1 - ... - (n-1)``."""
    if n < 1:
        raise InvalidArgument("path needs at least one vertex")
    adj = tuple(
        tuple(w for w in (v - 1, v + 1) if 0 <= w < n) for v in range(n)
    )
    return Domain(n, adj, "path")


def build_grid_domain(width: int, height: int, adjacency: int = 4) -> Domain:
    """Row-major ``width x height`` grid with 4- or 8-neighbourhood."""
    if width < 1 or height < 1:
        raise InvalidArgument("grid dimensions must be positive")
    if adjacency == 4:
        offsets = ((-1, 0), (1, 0), (0, -1), (0, 1))
    elif adjacency == 8:
        offsets = tuple(
            (dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dx, dy) != (0, 0)
        )
    else:
        raise InvalidArgument("grid adjacency must be 4 or 8")
    adj = []
    for y in range(height):
        for x in range(width):
            nbrs = [
                (y + dy) * width + (x + dx)
                for dx, dy in offsets
                if 0 <= x + dx < width and 0 <= y + dy < height
            ]
            adj.append(tuple(sorted(nbrs)))
    return Domain(width * height, tuple(adj), f"grid{adjacency}", width, height)


def build_graph_domain(v_count: int, edges: Sequence[tuple[int, int]]) -> Domain:
    """General graph from an edge list; duplicates and orientation are ignored."""
    if v_count < 1:
        raise InvalidArgument("graph needs at least one vertex")
    nbrs = [set() for _ in range(v_count)]
    for u, v in edges:
        if not (0 <= u < v_count and 0 <= v < v_count):
            raise InvalidArgument(f"edge ({u}, {v}) has an endpoint outside 0..{v_count - 1}")
        if u == v:
            raise InvalidArgument(f"self-loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    dom = Domain(v_count, tuple(tuple(sorted(s)) for s in nbrs), "graph")
    reached = _bfs(dom, [0])
    if (reached < 0).any():
        missing = int(np.flatnonzero(reached < 0)[0])
        raise DisconnectedDomainError(f"vertex {missing} is not reachable from vertex 0")
    return dom


def _bfs(dom: Domain, sources: Iterable[int]) -> np.ndarray:
    dist = np.full(dom.n_vertices, -1, dtype=np.int64)
    queue = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    adj = dom.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def multi_source_distances(dom: Domain, sources: Iterable[int]) -> np.ndarray:
    """Hop distance from every vertex to its nearest source (one BFS).

    Returns an int array indexed by vertex id.
    """
    sources = [dom.check_vertex(s) for s in sources]
    if not sources:
        raise InvalidArgument("need at least one source vertex")
    return _bfs(dom, sources)


def geodesic_distance(dom: Domain, u: int, v: int) -> int:
    dom.check_vertex(u)
    dom.check_vertex(v)
    if u == v:
        return 0
    return int(_bfs(dom, [u])[v])
