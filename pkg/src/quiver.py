"""
Finite acyclic quivers, their paths and the standard kQ-modules.

Vertices are numbered 1..n. A path is stored as (source, target, arrows) with
the arrow indices in traversal order, so the first arrow leaves the source.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, List, NamedTuple, Tuple

import pandas as pd

from .errors import QuiverError

if TYPE_CHECKING:
    from .exactlin import Field
    from .monrep import Representation

logger = logging.getLogger(__name__)


class Path(NamedTuple):
    source: int
    target: int
    arrows: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def label(self) -> str:
        if self.is_trivial:
            return f"e{self.source}"
        return "a" + ".".join(str(a) for a in self.arrows)


@dataclass(frozen=True)
class Quiver:
    """A finite quiver without oriented cycles; parallel arrows allowed."""
    vertex_count: int
    arrows: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple((int(s), int(e)) for s, e in self.arrows))
        if self.vertex_count < 1:
            raise QuiverError("a quiver needs at least one vertex", "/vertices")
        for k, (s, e) in enumerate(self.arrows):
            for end, v in (("from", s), ("to", e)):
                if not 1 <= v <= self.vertex_count:
                    raise QuiverError(f"vertex {v} out of range 1..{self.vertex_count}", f"/arrows/{k}/{end}")
            if s == e:
                raise QuiverError(f"loop at vertex {s}", f"/arrows/{k}")
        topological_order(self)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrows_into(self, i: int) -> List[int]:
        return [k for k, (_, e) in enumerate(self.arrows) if e == i]

    def arrows_from(self, i: int) -> List[int]:
        return [k for k, (s, _) in enumerate(self.arrows) if s == i]

    def is_source(self, i: int) -> bool:
        return not self.arrows_into(i)

    def is_sink(self, i: int) -> bool:
        return not self.arrows_from(i)

    def check_vertex(self, i: int) -> None:
        if not 1 <= i <= self.vertex_count:
            raise QuiverError(f"vertex {i} out of range 1..{self.vertex_count}")

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, tuple((e, s) for s, e in self.arrows))

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """A_n oriented n -> n-1 -> ... -> 1."""
        return cls(n, tuple((k + 1, k) for k in range(1, n)))

    @classmethod
    def kronecker(cls) -> "Quiver":
        return cls(2, ((2, 1), (2, 1)))


@lru_cache(maxsize=None)
def topological_order(q: Quiver) -> Tuple[int, ...]:
    """
    Order in which every arrow's target precedes its source.

    A vertex becomes admissible once all targets of its outgoing arrows are
    placed; among admissible vertices the smallest comes first.
    """
    pending = {v: len(q.arrows_from(v)) for v in q.vertices}
    incoming: Dict[int, List[int]] = {v: [] for v in q.vertices}
    for s, e in q.arrows:
        incoming[e].append(s)
    heap = [v for v, c in pending.items() if c == 0]
    heapq.heapify(heap)
    order: List[int] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for s in incoming[v]:
            pending[s] -= 1
            if pending[s] == 0:
                heapq.heappush(heap, s)
    if len(order) != q.vertex_count:
        stuck = sorted(v for v in q.vertices if v not in set(order))
        raise QuiverError(f"oriented cycle through vertices {stuck}", "/arrows")
    return tuple(order)


@lru_cache(maxsize=None)
def paths(q: Quiver) -> Tuple[Path, ...]:
    """All paths, ordered by (target in topological order, source, arrow sequence)."""
    found: List[Path] = []

    def extend(p: Path) -> None:
        found.append(p)
        for k in q.arrows_from(p.target):
            extend(Path(p.source, q.arrows[k][1], p.arrows + (k,)))

    for v in q.vertices:
        extend(Path(v, v, ()))
    position = {v: k for k, v in enumerate(topological_order(q))}
    found.sort(key=lambda p: (position[p.target], p.source, p.arrows))
    return tuple(found)


@lru_cache(maxsize=None)
def path_index(q: Quiver) -> Dict[Path, int]:
    return {p: k for k, p in enumerate(paths(q))}


def paths_between(q: Quiver, source: int, target: int) -> List[Path]:
    return [p for p in paths(q) if p.source == source and p.target == target]


@dataclass(frozen=True)
class PathCountMatrix:
    """counts.loc[j, i] is the number of paths from j to i"""
    counts: pd.DataFrame

    def count(self, j: int, i: int) -> int:
        return int(self.counts.loc[j, i])

    @property
    def total(self) -> int:
        return int(self.counts.to_numpy().sum())

    def to_rows(self) -> List[List[int]]:
        return [[int(c) for c in row] for row in self.counts.to_numpy()]


def path_count_matrix(q: Quiver) -> PathCountMatrix:
    table = pd.DataFrame(0, index=list(q.vertices), columns=list(q.vertices), dtype=int)
    for p in paths(q):
        table.loc[p.source, p.target] += 1
    return PathCountMatrix(table)


def kq_standard_module(q: Quiver, field: "Field", kind: str, i: int) -> "Representation":
    """P(i), I(i) or S(i) as a representation over the ground field."""
    from .algebra import ground_algebra, zero_module
    from .exactlin import Matrix
    from .monrep import Representation

    q.check_vertex(i)
    k = ground_algebra(field)

    if kind == "projective":
        bases = {v: paths_between(q, i, v) for v in q.vertices}
    elif kind == "injective":
        bases = {v: paths_between(q, v, i) for v in q.vertices}
    elif kind == "simple":
        bases = {v: ([Path(i, i, ())] if v == i else []) for v in q.vertices}
    else:
        raise QuiverError(f"unknown standard module kind {kind!r}")

    branches = tuple(k.free_module(len(bases[v])) if bases[v] else zero_module(k) for v in q.vertices)
    maps = []
    for a, (s, e) in enumerate(q.arrows):
        rows, cols = len(bases[e]), len(bases[s])
        entries = [[0] * cols for _ in range(rows)]
        if kind == "projective":
            # p -> a.p for p a path from i to s
            where = {p.arrows: r for r, p in enumerate(bases[e])}
            for c, p in enumerate(bases[s]):
                entries[where[p.arrows + (a,)]][c] = 1
        elif kind == "injective":
            # (a.f)(q) = f(q.a) on the dual basis of paths into i
            where = {p.arrows: c for c, p in enumerate(bases[s])}
            for r, p in enumerate(bases[e]):
                c = where.get((a,) + p.arrows)
                if c is not None:
                    entries[r][c] = 1
        maps.append(Matrix.from_rows(field, entries, shape=(rows, cols)))
    label = {"projective": "P", "injective": "I", "simple": "S"}[kind]
    return Representation(q, k, branches, tuple(maps), label=f"{label}({i})")
