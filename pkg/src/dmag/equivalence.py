"""Markov equivalence of DMAGs: the syntactic criterion and a semantic oracle.

The criterion compares adjacencies, unshielded colliders and the collider
status of vertices discriminated by a path in both graphs.  The oracle
compares every pairwise m-separation statement; it is exponential in the
number of vertices and meant for small graphs and cross-checking.
"""

from __future__ import annotations

import functools
import itertools as itr
from dataclasses import dataclass

from dmag.exceptions import GraphError, NotDMAGError
from dmag.mixed_graph import ARROW, MixedGraph, Verdict
from dmag.reachability import SeparationQuery, is_dmag, m_separated


@dataclass(frozen=True, order=True)
class UnshieldedTriple:
    a: str
    b: str
    c: str
    collider: bool

    def __str__(self):
        return f"⟨{self.a},{self.b},{self.c}⟩"


@dataclass(frozen=True)
class DiscriminatingPath:
    vertices: tuple[str, ...]
    collider_at_v: bool

    @property
    def discriminated(self) -> str:
        return self.vertices[-2]

    @property
    def endpoints(self) -> tuple[str, str]:
        return self.vertices[0], self.vertices[-1]

    def __str__(self):
        return f"⟨{','.join(self.vertices)}⟩"


def unshielded_triples(g: MixedGraph) -> list[UnshieldedTriple]:
    out = []
    for b in g.vertices:
        for a, c in itr.combinations(g.neighbors(b), 2):
            if not g.adjacent(a, c):
                collider = g.mark(b, a) is ARROW and g.mark(b, c) is ARROW
                out.append(UnshieldedTriple(a, b, c, collider))
    return sorted(out)


def unshielded_colliders(g: MixedGraph) -> list[UnshieldedTriple]:
    """Unshielded colliders ``a *-> b <-* c`` with ``a < c``, sorted."""
    return [t for t in unshielded_triples(g) if t.collider]


def discriminating_paths_for(g: MixedGraph, v: str, y: str) -> list[DiscriminatingPath]:
    """All discriminating paths ``<x, ..., w, v, y>`` for ``v`` ending at ``y``.

    Searches backwards from ``v`` through vertices that are colliders on the
    path and parents of ``y``, stopping at any vertex not adjacent to ``y``.
    """
    if not g.adjacent(v, y):
        return []
    found: list[tuple[str, ...]] = []

    def extend(rev: list[str]):
        cur = rev[-1]
        for p in g.neighbors(cur):
            if p in rev or p == y or g.mark(cur, p) is not ARROW:
                continue
            if not g.adjacent(p, y):
                found.append(tuple(reversed(rev + [p])) + (y,))
            elif g.is_directed(p, y) and g.mark(p, cur) is ARROW:
                extend(rev + [p])

    for w in g.neighbors(v):
        if w != y and g.is_directed(w, y) and g.mark(w, v) is ARROW:
            extend([v, w])
    collider = g.mark(v, y) is ARROW
    return [DiscriminatingPath(p, collider and g.mark(v, p[-3]) is ARROW) for p in sorted(found)]


@functools.lru_cache(maxsize=1 << 16)
def all_discriminating_paths(g: MixedGraph) -> tuple[DiscriminatingPath, ...]:
    out = []
    for v in g.vertices:
        for y in g.neighbors(v):
            out.extend(discriminating_paths_for(g, v, y))
    return tuple(out)


def is_discriminating(g: MixedGraph, path) -> bool:
    """Whether the vertex sequence ``path`` is a discriminating path in ``g``."""
    path = tuple(path)
    if len(path) < 4 or len(set(path)) != len(path):
        return False
    if any(u not in g for u in path):
        return False
    if not all(g.adjacent(u, w) for u, w in zip(path, path[1:])):
        return False
    x, y = path[0], path[-1]
    if g.adjacent(x, y):
        return False
    for i in range(1, len(path) - 2):
        q = path[i]
        if not (g.mark(q, path[i - 1]) is ARROW and g.mark(q, path[i + 1]) is ARROW):
            return False
        if not g.is_directed(q, y):
            return False
    return True


def _collider_on(g: MixedGraph, path, i: int) -> bool:
    return g.mark(path[i], path[i - 1]) is ARROW and g.mark(path[i], path[i + 1]) is ARROW


def _require_dmag(g: MixedGraph):
    verdict = is_dmag(g)
    if not verdict:
        raise NotDMAGError(verdict)


def _same_vertices(g1: MixedGraph, g2: MixedGraph):
    if g1.vertices != g2.vertices:
        raise GraphError(
            f"graphs have different vertex sets: {list(g1.vertices)} vs {list(g2.vertices)}")


def markov_equivalent(g1: MixedGraph, g2: MixedGraph) -> Verdict:
    """Decide Markov equivalence of two DMAGs syntactically.

    Fails with tag e1 (an adjacency present in one graph only), e2 (an
    unshielded collider present in one graph only) or e3 (a path that is
    discriminating in both graphs but disagrees on the collider status of
    the discriminated vertex).
    """
    _same_vertices(g1, g2)
    _require_dmag(g1)
    _require_dmag(g2)
    diff = sorted(g1.skeleton() ^ g2.skeleton())
    if diff:
        a, b = diff[0]
        where = "first" if g1.adjacent(a, b) else "second"
        return Verdict.fail("e1", (a, b), f"adjacent only in the {where} graph")
    uc1, uc2 = set(unshielded_colliders(g1)), set(unshielded_colliders(g2))
    if uc1 != uc2:
        t = min(uc1 ^ uc2)
        where = "first" if t in uc1 else "second"
        return Verdict.fail("e2", (t.a, t.b, t.c), f"unshielded collider only in the {where} graph")
    for p in all_discriminating_paths(g1):
        if not is_discriminating(g2, p.vertices):
            continue
        if p.collider_at_v != _collider_on(g2, p.vertices, len(p.vertices) - 2):
            return Verdict.fail("e3", p.vertices,
                                f"collider status of {p.discriminated} differs")
    return Verdict.ok()


@functools.lru_cache(maxsize=1 << 16)
def separation_signature(g: MixedGraph) -> frozenset[tuple[str, str, frozenset]]:
    """All ``(a, b, Z)`` with ``a < b`` and ``a``, ``b`` m-separated by ``Z``."""
    out = set()
    for a, b in itr.combinations(g.vertices, 2):
        rest = [v for v in g.vertices if v not in (a, b)]
        for k in range(len(rest) + 1):
            for z in itr.combinations(rest, k):
                if m_separated(g, SeparationQuery({a}, {b}, z)):
                    out.add((a, b, frozenset(z)))
    return frozenset(out)


def markov_equivalent_oracle(g1: MixedGraph, g2: MixedGraph) -> bool:
    """Compare every pairwise separation statement of the two graphs."""
    _same_vertices(g1, g2)
    return separation_signature(g1) == separation_signature(g2)


def distinguishing_query(g1: MixedGraph, g2: MixedGraph):
    """The first ``(a, b, Z)`` separated in exactly one graph, or None."""
    _same_vertices(g1, g2)
    diff = separation_signature(g1) ^ separation_signature(g2)
    if not diff:
        return None
    return min(diff, key=lambda t: (t[0], t[1], len(t[2]), sorted(t[2])))
