"""Finite connected graphs given by darts, and free bases for their loops.

A graph is a set of darts (directed edge sides): each dart has a source,
a target and a reverse partner. Reversal must be a fixed-point-free
involution that swaps endpoints, so undirected edges are dart pairs and
loops contribute two darts like any other edge.

A spanning tree picks out a free basis of the loops at the base vertex:
one generator per non-tree edge, oriented along the dart with the
smaller id. The tree is grown breadth-first from the base vertex taking
darts in ascending id order, which makes every derived structure (chord
order, generator names, tree paths) deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    BadInvolutionError,
    DisconnectedError,
    NotALoopError,
    NotIncidentError,
    UnknownGeneratorError,
)
from .groups import Word, reduce_word

__all__ = [
    "BaseGraph",
    "Pi1Basis",
    "EdgePath",
    "validate_graph",
    "build_graph",
    "circle",
    "wedge",
    "spanning_tree",
    "path_to_word",
    "word_to_path",
    "path_concat",
]


@dataclass(frozen=True)
class BaseGraph:
    """An immutable dart-based graph with a chosen base vertex."""

    vertex_count: int
    dart_source: tuple[int, ...]
    dart_target: tuple[int, ...]
    dart_reverse: tuple[int, ...]
    base_vertex: int
    # per-vertex out-darts in ascending id order; derived, not compared
    out_darts: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def n_darts(self) -> int:
        return len(self.dart_source)

    @property
    def edge_count(self) -> int:
        return self.n_darts // 2

    def __repr__(self) -> str:
        return (
            f"BaseGraph(vertices={self.vertex_count}, edges={self.edge_count}, "
            f"base={self.base_vertex})"
        )


def validate_graph(
    vertex_count: int,
    dart_source: Sequence[int],
    dart_target: Sequence[int],
    dart_reverse: Sequence[int],
    base_vertex: int = 0,
) -> BaseGraph:
    """Check raw dart data and assemble a BaseGraph.

    Raises BadInvolutionError when reversal is not a fixed-point-free
    involution swapping source and target, and DisconnectedError naming an
    unreachable vertex when the graph is not connected.
    """
    src = tuple(dart_source)
    tgt = tuple(dart_target)
    rev = tuple(dart_reverse)
    n = len(src)
    if len(tgt) != n or len(rev) != n:
        raise ValueError("dart arrays must have equal length")
    if vertex_count < 1:
        raise ValueError("graph needs at least one vertex")
    if not 0 <= base_vertex < vertex_count:
        raise ValueError(f"base vertex {base_vertex} out of range")
    for d in range(n):
        if not 0 <= src[d] < vertex_count or not 0 <= tgt[d] < vertex_count:
            raise ValueError(f"dart {d} has an endpoint outside the vertex range")
        r = rev[d]
        if not 0 <= r < n:
            raise BadInvolutionError(f"dart {d} reverses to {r}, out of range")
        if r == d:
            raise BadInvolutionError(f"dart {d} is its own reverse")
        if rev[r] != d:
            raise BadInvolutionError(f"reversal is not an involution at dart {d}")
        if src[r] != tgt[d] or tgt[r] != src[d]:
            raise BadInvolutionError(f"reverse of dart {d} does not swap its endpoints")

    out: list[list[int]] = [[] for _ in range(vertex_count)]
    for d in range(n):
        out[src[d]].append(d)  # ascending since darts are scanned in order

    seen = [False] * vertex_count
    seen[base_vertex] = True
    queue = deque([base_vertex])
    while queue:
        v = queue.popleft()
        for d in out[v]:
            w = tgt[d]
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    for v in range(vertex_count):
        if not seen[v]:
            raise DisconnectedError(v)

    return BaseGraph(
        vertex_count, src, tgt, rev, base_vertex,
        tuple(tuple(o) for o in out),
    )


def build_graph(
    vertex_count: int,
    edges: Iterable[tuple[int, int]],
    base_vertex: int = 0,
) -> BaseGraph:
    """Build a graph from undirected edges given as vertex pairs.

    Edge k becomes darts 2k (forward, as written) and 2k+1 (backward), so
    dart ids and hence all downstream orientation choices are fixed by the
    edge order.
    """
    src: list[int] = []
    tgt: list[int] = []
    rev: list[int] = []
    for u, v in edges:
        d = len(src)
        src += [u, v]
        tgt += [v, u]
        rev += [d + 1, d]
    return validate_graph(vertex_count, src, tgt, rev, base_vertex)


def circle() -> BaseGraph:
    """One vertex, one loop."""
    return build_graph(1, [(0, 0)])


def wedge(loops: int = 2) -> BaseGraph:
    """One vertex with the given number of loops."""
    return build_graph(1, [(0, 0)] * loops)


@dataclass(frozen=True)
class Pi1Basis:
    """A spanning tree plus its chords: a free basis of loops at the base.

    ``tree`` holds the tree darts (closed under reversal). ``chords`` has
    one dart per non-tree edge, ascending, each the positive orientation
    of its generator. ``parent_dart[v]`` is the tree dart entering v from
    its parent (-1 at the base vertex).
    """

    graph: BaseGraph
    tree: frozenset[int]
    chords: tuple[int, ...]
    generator_names: tuple[str, ...]
    parent_dart: tuple[int, ...] = field(repr=False, compare=False, default=())

    @property
    def rank(self) -> int:
        return len(self.chords)

    def __repr__(self) -> str:
        return f"Pi1Basis(rank={self.rank}, generators={list(self.generator_names)})"


def _generator_name(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else f"g{i}"


def spanning_tree(graph: BaseGraph) -> Pi1Basis:
    """Breadth-first spanning tree from the base vertex.

    Darts are explored in ascending id order at every step, so ties are
    broken the same way on every run. The rank always comes out as
    edges - vertices + 1.
    """
    parent = [-1] * graph.vertex_count
    visited = [False] * graph.vertex_count
    visited[graph.base_vertex] = True
    tree: set[int] = set()
    queue = deque([graph.base_vertex])
    while queue:
        v = queue.popleft()
        for d in graph.out_darts[v]:
            w = graph.dart_target[d]
            if not visited[w]:
                visited[w] = True
                parent[w] = d
                tree.add(d)
                tree.add(graph.dart_reverse[d])
                queue.append(w)

    chords = tuple(
        d for d in range(graph.n_darts)
        if d not in tree and d < graph.dart_reverse[d]
    )
    names = tuple(_generator_name(i) for i in range(len(chords)))
    basis = Pi1Basis(graph, frozenset(tree), chords, names, tuple(parent))
    assert basis.rank == graph.edge_count - graph.vertex_count + 1
    return basis


@dataclass(frozen=True)
class EdgePath:
    """A dart sequence with its endpoints; may be empty (a constant path)."""

    darts: tuple[int, ...]
    start: int
    end: int

    def __len__(self) -> int:
        return len(self.darts)


def path_concat(graph: BaseGraph, first: EdgePath, second: EdgePath) -> EdgePath:
    if first.end != second.start:
        raise NotIncidentError(
            f"cannot concatenate: path ends at {first.end}, next starts at {second.start}"
        )
    return EdgePath(first.darts + second.darts, first.start, second.end)


def _tree_darts_from_base(basis: Pi1Basis, v: int) -> list[int]:
    """Tree darts leading from the base vertex to v."""
    graph = basis.graph
    out: list[int] = []
    while v != graph.base_vertex:
        d = basis.parent_dart[v]
        out.append(d)
        v = graph.dart_source[d]
    out.reverse()
    return out


def path_to_word(basis: Pi1Basis, path: EdgePath) -> Word:
    """Read off the generator word of a loop at the base vertex.

    Tree darts contribute nothing; a chord contributes its generator and a
    reversed chord the inverse. The result is freely reduced.
    """
    graph = basis.graph
    if path.start != graph.base_vertex or path.end != graph.base_vertex:
        raise NotALoopError(
            f"path runs {path.start} -> {path.end}, not a loop at {graph.base_vertex}"
        )
    gen_of_chord = {d: i for i, d in enumerate(basis.chords)}
    cur = path.start
    letters: list[tuple[int, int]] = []
    for d in path.darts:
        if not 0 <= d < graph.n_darts:
            raise NotIncidentError(f"dart {d} does not exist")
        if graph.dart_source[d] != cur:
            raise NotIncidentError(
                f"dart {d} starts at {graph.dart_source[d]}, path is at {cur}"
            )
        cur = graph.dart_target[d]
        if d in basis.tree:
            continue
        if d in gen_of_chord:
            letters.append((gen_of_chord[d], 1))
        else:
            letters.append((gen_of_chord[graph.dart_reverse[d]], -1))
    if cur != path.end:
        raise NotIncidentError(f"path claims to end at {path.end} but walks to {cur}")
    return reduce_word(letters)


def word_to_path(basis: Pi1Basis, word: Word) -> EdgePath:
    """The canonical loop of a word: per letter, walk the tree to the
    chord, cross it, and walk back to the base vertex."""
    graph = basis.graph
    darts: list[int] = []
    for g, s in word.letters:
        if g >= basis.rank:
            raise UnknownGeneratorError(g, basis.rank)
        chord = basis.chords[g]
        d = chord if s > 0 else graph.dart_reverse[chord]
        darts.extend(_tree_darts_from_base(basis, graph.dart_source[d]))
        darts.append(d)
        back = _tree_darts_from_base(basis, graph.dart_target[d])
        darts.extend(graph.dart_reverse[t] for t in reversed(back))
    return EdgePath(tuple(darts), graph.base_vertex, graph.base_vertex)
