"""Directed mixed graphs: representation, text format, structural queries.

A graph holds directed (``A -> B``) and bi-directed (``A <-> B``) edges
only.  Every edge carries one :class:`Mark` per endpoint; an edge with two
tails cannot be built.  Graphs are immutable and hashable, so they can be
used as dictionary keys and cached freely.
"""

from __future__ import annotations

import enum
import hashlib
import itertools as itr
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from dmag.exceptions import GraphError, GraphFormatError


class Mark(enum.Enum):
    ARROW = "arrow"
    TAIL = "tail"

    def __str__(self):
        return self.value


ARROW = Mark.ARROW
TAIL = Mark.TAIL


class Edge(NamedTuple):
    """An edge ``u *-* v`` in canonical form (``u < v``)."""

    u: str
    v: str
    mark_u: Mark
    mark_v: Mark

    @property
    def pair(self) -> tuple[str, str]:
        return self.u, self.v

    @property
    def bidirected(self) -> bool:
        return self.mark_u is ARROW and self.mark_v is ARROW

    def mark_at(self, x: str) -> Mark:
        if x == self.u:
            return self.mark_u
        if x == self.v:
            return self.mark_v
        raise GraphError(f"{x} is not an endpoint of {self.u}-{self.v}")

    def __str__(self):
        if self.bidirected:
            return f"{self.u} <-> {self.v}"
        if self.mark_v is ARROW:
            return f"{self.u} -> {self.v}"
        return f"{self.v} -> {self.u}"


_NAME_RE = re.compile(r"[A-Za-z0-9_.]+\Z")


def _check_name(name) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise GraphError(f"invalid vertex name {name!r}")
    return name


class MixedGraph:
    """An immutable directed mixed graph.

    Parameters
    ----------
    vertices:
        Vertex names; endpoints of ``edges`` are added automatically.
    edges:
        Iterable of ``(u, v, mark_at_u, mark_at_v)`` tuples.

    Examples
    --------
    >>> g = MixedGraph.from_edges(directed=[("A", "B")], bidirected=[("B", "C")])
    >>> g.parents("B"), g.spouses("B")
    (('A',), ('C',))
    """

    __slots__ = ("_vertices", "_edges", "_ends", "_nbrs", "_hash", "_text")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple] = ()):
        vs = {_check_name(v) for v in vertices}
        ends: dict[tuple[str, str], Mark] = {}
        for u, v, mu, mv in edges:
            _check_name(u)
            _check_name(v)
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if (u, v) in ends:
                raise GraphError(f"duplicate edge between {u} and {v}")
            if not isinstance(mu, Mark) or not isinstance(mv, Mark):
                raise GraphError(f"edge {u}-{v}: marks must be Mark values")
            if mu is TAIL and mv is TAIL:
                raise GraphError(f"edge {u}-{v} has two tails (undirected edges unsupported)")
            # _ends[(x, y)] is the mark at y on the edge x *-* y
            ends[(u, v)] = mv
            ends[(v, u)] = mu
            vs.add(u)
            vs.add(v)
        self._vertices = tuple(sorted(vs))
        self._ends = ends
        nbrs: dict[str, list[str]] = {v: [] for v in self._vertices}
        for x, y in ends:
            nbrs[x].append(y)
        self._nbrs = {v: tuple(sorted(ns)) for v, ns in nbrs.items()}
        self._edges = tuple(
            Edge(x, y, ends[(y, x)], ends[(x, y)])
            for x in self._vertices
            for y in self._nbrs[x]
            if x < y
        )
        self._text = None
        self._hash = hash((self._vertices, self._edges))

    @classmethod
    def from_edges(cls, directed=(), bidirected=(), vertices=()) -> "MixedGraph":
        """Build from ``(tail, head)`` pairs and bi-directed pairs."""
        edges = [(a, b, TAIL, ARROW) for a, b in directed]
        edges += [(a, b, ARROW, ARROW) for a, b in bidirected]
        return cls(vertices, edges)

    # === basic queries
    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __contains__(self, v) -> bool:
        return v in self._nbrs

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = "; ".join(map(str, self._edges))
        iso = [v for v in self._vertices if not self._nbrs[v]]
        if iso:
            body = "; ".join(filter(None, [body, "vertices: " + " ".join(iso)]))
        return f"MixedGraph({body})"

    def _require(self, *vs):
        for v in vs:
            if v not in self._nbrs:
                raise GraphError(f"unknown vertex {v!r}")

    def adjacent(self, u: str, v: str) -> bool:
        return (u, v) in self._ends

    def neighbors(self, v: str) -> tuple[str, ...]:
        self._require(v)
        return self._nbrs[v]

    def mark(self, at: str, other: str) -> Mark | None:
        """Mark at ``at`` on the edge between ``at`` and ``other`` (None if absent)."""
        return self._ends.get((other, at))

    def edge(self, u: str, v: str) -> Edge | None:
        if (u, v) not in self._ends:
            return None
        a, b = sorted((u, v))
        return Edge(a, b, self._ends[(b, a)], self._ends[(a, b)])

    def is_directed(self, u: str, v: str) -> bool:
        """True iff ``u -> v`` is in the graph."""
        return self._ends.get((u, v)) is ARROW and self._ends.get((v, u)) is TAIL

    def is_bidirected(self, u: str, v: str) -> bool:
        return self._ends.get((u, v)) is ARROW and self._ends.get((v, u)) is ARROW

    def parents(self, v: str) -> tuple[str, ...]:
        return tuple(u for u in self.neighbors(v) if self.is_directed(u, v))

    def children(self, v: str) -> tuple[str, ...]:
        return tuple(u for u in self.neighbors(v) if self.is_directed(v, u))

    def spouses(self, v: str) -> tuple[str, ...]:
        return tuple(u for u in self.neighbors(v) if self.is_bidirected(u, v))

    def directed_edges(self) -> tuple[tuple[str, str], ...]:
        """All ``(tail, head)`` pairs, in canonical edge order."""
        return tuple((e.u, e.v) if e.mark_v is ARROW else (e.v, e.u)
                     for e in self._edges if not e.bidirected)

    def bidirected_edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(e.pair for e in self._edges if e.bidirected)

    def skeleton(self) -> frozenset[tuple[str, str]]:
        return frozenset(e.pair for e in self._edges)

    def canonical(self) -> str:
        """Canonical text form; equal graphs have equal text."""
        if self._text is None:
            self._text = serialize_graph(self)
        return self._text

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def with_marks(self, changes: dict[tuple[str, str], Mark]) -> "MixedGraph":
        """Copy with ``changes[(at, other)]`` as the mark at ``at`` on ``at - other``."""
        edges = []
        for e in self._edges:
            mu = changes.get((e.u, e.v), e.mark_u)
            mv = changes.get((e.v, e.u), e.mark_v)
            edges.append((e.u, e.v, mu, mv))
        return MixedGraph(self._vertices, edges)


# === text format

def parse_graph(text: str) -> MixedGraph:
    """Parse the line-oriented graph format.

    >>> parse_graph("A <-> B\\nB -> C  # comment")
    MixedGraph(A <-> B; B -> C)
    """
    vertices: list[str] = []
    edges: list[tuple] = []
    seen: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not tokens:
            continue
        if tokens[0][0] == "vertices:":
            for name, col in tokens[1:]:
                if not _NAME_RE.match(name):
                    raise GraphFormatError(f"invalid vertex name {name!r}", lineno, col)
                vertices.append(name)
            continue
        for name, col in tokens:
            if name == "--":
                raise GraphFormatError(
                    "undirected edges unsupported (directed MAGs only: use -> or <->)",
                    lineno, col)
        if len(tokens) != 3:
            col = tokens[3][1] if len(tokens) > 3 else len(line.rstrip()) + 1
            raise GraphFormatError("expected 'X -> Y' or 'X <-> Y'", lineno, col)
        (a, ca), (op, cop), (b, cb) = tokens
        for name, col in ((a, ca), (b, cb)):
            if not _NAME_RE.match(name):
                raise GraphFormatError(f"invalid vertex name {name!r}", lineno, col)
        if op == "->":
            marks = (TAIL, ARROW)
        elif op == "<->":
            marks = (ARROW, ARROW)
        else:
            raise GraphFormatError(f"unknown edge operator {op!r}", lineno, cop)
        if a == b:
            raise GraphFormatError(f"self-loop at {a}", lineno, ca)
        key = frozenset((a, b))
        if key in seen:
            raise GraphFormatError(
                f"duplicate edge between {a} and {b} (first on line {seen[key]})", lineno, ca)
        seen[key] = lineno
        edges.append((a, b, *marks))
    return MixedGraph(vertices, edges)


def serialize_graph(g: MixedGraph) -> str:
    """Canonical text: isolated vertices first, then edges in pair order."""
    lines = []
    iso = [v for v in g.vertices if not g.neighbors(v)]
    if iso:
        lines.append("vertices: " + " ".join(iso))
    lines.extend(str(e) for e in g.edges)
    return "".join(line + "\n" for line in lines)


def to_dot(g: MixedGraph, name: str = "G") -> str:
    out = [f"digraph {name} {{"]
    for v in g.vertices:
        out.append(f'  "{v}";')
    for e in g.edges:
        if e.bidirected:
            out.append(f'  "{e.u}" -> "{e.v}" [dir=both, arrowhead=normal, arrowtail=normal];')
        else:
            tail, head = (e.u, e.v) if e.mark_v is ARROW else (e.v, e.u)
            out.append(f'  "{tail}" -> "{head}" [dir=both, arrowhead=normal, arrowtail=none];')
    out.append("}")
    return "\n".join(out) + "\n"


# === verdicts

@dataclass(frozen=True)
class Witness:
    """Why a check failed.

    ``tag`` is one of a1 (directed cycle), a2 (spouse that is an ancestor),
    max (inducing path between non-adjacent vertices), t1/t2/t3 (mark change
    conditions), pa/sp (reversal conditions), e1/e2/e3 (equivalence
    conditions).  ``vertices`` lists the offending vertices or path.
    """

    tag: str
    vertices: tuple[str, ...]
    detail: str = ""

    def __str__(self):
        s = f"{self.tag} ⟨{','.join(self.vertices)}⟩"
        return f"{s} {self.detail}" if self.detail else s


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witnesses: tuple[Witness, ...] = field(default=())

    def __post_init__(self):
        if self.holds and self.witnesses:
            raise ValueError("a positive verdict carries no witnesses")
        if not self.holds and not self.witnesses:
            raise ValueError("a negative verdict needs a witness")

    def __bool__(self):
        return self.holds

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(w.tag for w in self.witnesses)

    def describe(self) -> str:
        return "holds" if self.holds else "; ".join(map(str, self.witnesses))

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def fail(cls, tag: str, vertices: Iterable[str], detail: str = "") -> "Verdict":
        return cls(False, (Witness(tag, tuple(vertices), detail),))


# === ancestry

def _closure(g: MixedGraph, start: Iterable[str], step) -> set[str]:
    seen = set(start)
    stack = list(seen)
    while stack:
        for w in step(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def ancestors(g: MixedGraph, v: str) -> frozenset[str]:
    """Vertices with a directed path into ``v``, including ``v`` itself."""
    g._require(v)
    return frozenset(_closure(g, [v], g.parents))


def ancestors_of_set(g: MixedGraph, vs: Iterable[str]) -> frozenset[str]:
    vs = list(vs)
    g._require(*vs)
    return frozenset(_closure(g, vs, g.parents))


def descendants(g: MixedGraph, v: str) -> frozenset[str]:
    """Vertices reachable from ``v`` along directed edges, including ``v``."""
    g._require(v)
    return frozenset(_closure(g, [v], g.children))


def find_directed_cycle(g: MixedGraph) -> list[str] | None:
    """A directed cycle as ``[v0, ..., vk, v0]``, or None for acyclic graphs."""
    color = dict.fromkeys(g.vertices, 0)
    for root in g.vertices:
        if color[root]:
            continue
        path = [root]
        iters = [iter(g.children(root))]
        color[root] = 1
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                iters.pop()
            elif color[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif color[nxt] == 0:
                color[nxt] = 1
                path.append(nxt)
                iters.append(iter(g.children(nxt)))
    return None


def is_ancestral(g: MixedGraph) -> Verdict:
    """Check (a1) acyclicity and (a2) no spouse is an ancestor."""
    cycle = find_directed_cycle(g)
    if cycle is not None:
        return Verdict.fail("a1", cycle, "directed cycle")
    for a, b in g.bidirected_edges():
        if a in ancestors(g, b):
            return Verdict.fail("a2", (a, b), f"{a} is a spouse and an ancestor of {b}")
        if b in ancestors(g, a):
            return Verdict.fail("a2", (b, a), f"{b} is a spouse and an ancestor of {a}")
    return Verdict.ok()


# === mark changes

@dataclass(frozen=True)
class MarkChange:
    """Set the mark at endpoint ``at`` of the edge ``edge`` to ``to``."""

    edge: tuple[str, str]
    at: str
    to: Mark

    def __post_init__(self):
        a, b = self.edge
        if a == b:
            raise GraphError("mark change on a self-loop")
        object.__setattr__(self, "edge", tuple(sorted((a, b))))
        if self.at not in self.edge:
            raise GraphError(f"{self.at} is not an endpoint of {a}-{b}")
        if not isinstance(self.to, Mark):
            object.__setattr__(self, "to", Mark(self.to))

    @property
    def other(self) -> str:
        a, b = self.edge
        return b if self.at == a else a

    def inverse(self) -> "MarkChange":
        return MarkChange(self.edge, self.at, TAIL if self.to is ARROW else ARROW)

    def __str__(self):
        return f"CHANGE {self.edge[0]} {self.edge[1]} at {self.at} to {self.to.value}"


def apply_mark_change(g: MixedGraph, c: MarkChange) -> MixedGraph:
    old = g.mark(c.at, c.other)
    if old is None:
        raise GraphError(f"no edge between {c.edge[0]} and {c.edge[1]}")
    if old is c.to:
        raise GraphError(f"mark at {c.at} on {c.edge[0]}-{c.edge[1]} is already {c.to}")
    if c.to is TAIL and g.mark(c.other, c.at) is TAIL:
        raise GraphError(f"change would give {c.edge[0]}-{c.edge[1]} two tails")
    return g.with_marks({(c.at, c.other): c.to})


def mark_changes(g: MixedGraph) -> Iterator[MarkChange]:
    """Every single mark change applicable to ``g``, in canonical order."""
    for e in g.edges:
        for at, mine, theirs in ((e.u, e.mark_u, e.mark_v), (e.v, e.mark_v, e.mark_u)):
            if mine is TAIL:
                yield MarkChange(e.pair, at, ARROW)
            elif theirs is ARROW:
                yield MarkChange(e.pair, at, TAIL)


def mark_difference(g1: MixedGraph, g2: MixedGraph) -> int:
    """Number of edge endpoints whose marks differ (graphs share a skeleton)."""
    if g1.vertices != g2.vertices or g1.skeleton() != g2.skeleton():
        raise GraphError("mark difference needs graphs with the same skeleton")
    return sum((e1.mark_u is not e2.mark_u) + (e1.mark_v is not e2.mark_v)
               for e1, e2 in zip(g1.edges, g2.edges))


def iter_mixed_graphs(vertices: Iterable[str]) -> Iterator[MixedGraph]:
    """All directed mixed graphs on ``vertices``: four states per vertex pair."""
    vs = sorted(vertices)
    pairs = list(itr.combinations(vs, 2))
    states = (None, (TAIL, ARROW), (ARROW, TAIL), (ARROW, ARROW))
    for choice in itr.product(states, repeat=len(pairs)):
        yield MixedGraph(vs, [(u, v, *m) for (u, v), m in zip(pairs, choice) if m])
