"""m-separation, inducing paths, maximality and the DMAG validator.

Searches run over ``(vertex, arrived-with-arrowhead)`` states, so each
query is linear in the number of edges instead of enumerating paths.
"""

from __future__ import annotations

import enum
import functools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from dmag.exceptions import GraphError, NotAncestralError
from dmag.mixed_graph import (
    ARROW,
    MixedGraph,
    Verdict,
    ancestors,
    ancestors_of_set,
    is_ancestral,
)


class Role(enum.Enum):
    COLLIDER = "collider"
    NON_COLLIDER = "non-collider"


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple[str, ...]
    roles: tuple[Role, ...]  # one per interior vertex

    def __post_init__(self):
        if len(self.roles) != max(len(self.vertices) - 2, 0):
            raise ValueError("one role per interior vertex")

    @classmethod
    def of(cls, g: MixedGraph, vertices) -> "PathWitness":
        vertices = tuple(vertices)
        return cls(vertices, tuple(
            collider_role(g, *vertices[i - 1:i + 2]) for i in range(1, len(vertices) - 1)))

    @property
    def colliders(self) -> tuple[str, ...]:
        return tuple(v for v, r in zip(self.vertices[1:-1], self.roles) if r is Role.COLLIDER)

    def __str__(self):
        return "⟨" + ",".join(self.vertices) + "⟩"


@dataclass(frozen=True)
class SeparationQuery:
    x: frozenset[str]
    y: frozenset[str]
    z: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.x or not self.y:
            raise GraphError("separation query needs nonempty X and Y")
        if self.x & self.y or self.x & self.z or self.y & self.z:
            raise GraphError("X, Y and Z must be pairwise disjoint")

    def check(self, g: MixedGraph):
        for v in self.x | self.y | self.z:
            if v not in g:
                raise GraphError(f"unknown vertex {v!r}")


def collider_role(g: MixedGraph, a: str, v: str, b: str) -> Role:
    if g.mark(v, a) is ARROW and g.mark(v, b) is ARROW:
        return Role.COLLIDER
    return Role.NON_COLLIDER


def _walk_search(g: MixedGraph, a: str, targets, z: frozenset, anc_z: frozenset):
    """BFS over (vertex, into) states from ``a``; returns the walk to the first target hit."""
    parent: dict[tuple[str, bool], tuple[str, bool] | None] = {}
    queue = deque()
    for w in g.neighbors(a):
        state = (w, g.mark(w, a) is ARROW)
        if state not in parent:
            parent[state] = None
            queue.append(state)
    while queue:
        state = queue.popleft()
        v, into = state
        if v in targets:
            walk = [v]
            while parent[state] is not None:
                state = parent[state]
                walk.append(state[0])
            walk.append(a)
            return walk[::-1]
        for w in g.neighbors(v):
            collider = into and g.mark(v, w) is ARROW
            if collider and v not in anc_z:
                continue
            if not collider and v in z:
                continue
            nxt = (w, g.mark(w, v) is ARROW)
            if nxt not in parent:
                parent[nxt] = state
                queue.append(nxt)
    return None


def is_active(g: MixedGraph, path, z: Iterable[str], anc_z=None) -> bool:
    """Whether a simple path is m-connecting relative to ``z``."""
    z = frozenset(z)
    anc_z = ancestors_of_set(g, z) if anc_z is None else anc_z
    for i in range(1, len(path) - 1):
        if not g.adjacent(path[i - 1], path[i]) or not g.adjacent(path[i], path[i + 1]):
            return False
        if collider_role(g, *path[i - 1:i + 2]) is Role.COLLIDER:
            if path[i] not in anc_z:
                return False
        elif path[i] in z:
            return False
    return len(path) >= 2 and g.adjacent(path[-2], path[-1])


def _first_active_path(g, a, b, z, anc_z):
    # Depth-first over simple paths; only used to turn a walk into a path.
    stack = [(a, [a])]
    while stack:
        v, path = stack.pop()
        for w in reversed(g.neighbors(v)):
            if w in path:
                continue
            cand = path + [w]
            if len(cand) >= 3:
                i = len(cand) - 2
                if collider_role(g, *cand[i - 1:i + 2]) is Role.COLLIDER:
                    if cand[i] not in anc_z:
                        continue
                elif cand[i] in z:
                    continue
            if w == b:
                return cand
            stack.append((w, cand))
    return None


def _check_pair(g: MixedGraph, a: str, b: str, z: frozenset):
    for v in (a, b, *z):
        if v not in g:
            raise GraphError(f"unknown vertex {v!r}")
    if a == b:
        raise GraphError("endpoints must differ")
    if a in z or b in z:
        raise GraphError("endpoints must not be in the conditioning set")


def m_connecting_path(g: MixedGraph, a: str, b: str, z: Iterable[str] = ()) -> PathWitness | None:
    """An active path between ``a`` and ``b`` relative to ``z``, or None.

    >>> from dmag.mixed_graph import parse_graph
    >>> coll = parse_graph("A -> B\\nC -> B")
    >>> m_connecting_path(coll, "A", "C") is None
    True
    >>> str(m_connecting_path(coll, "A", "C", {"B"}))
    '⟨A,B,C⟩'
    """
    z = frozenset(z)
    _check_pair(g, a, b, z)
    anc_z = ancestors_of_set(g, z)
    walk = _walk_search(g, a, {b}, z, anc_z)
    if walk is None:
        return None
    if len(set(walk)) != len(walk):
        walk = _first_active_path(g, a, b, z, anc_z)
        assert walk is not None, "active walk without an active path"
    return PathWitness.of(g, walk)


def m_separated(g: MixedGraph, q: SeparationQuery) -> bool:
    """True iff no member of X is m-connected to a member of Y given Z."""
    q.check(g)
    anc_z = ancestors_of_set(g, q.z)
    for a in sorted(q.x):
        if _walk_search(g, a, q.y, q.z, anc_z) is not None:
            return False
    return True


def msep(g: MixedGraph, x, y, z=()) -> bool:
    """Shorthand accepting single vertices or iterables for each set."""
    def as_set(s):
        return frozenset([s]) if isinstance(s, str) else frozenset(s)
    return m_separated(g, SeparationQuery(as_set(x), as_set(y), as_set(z)))


def _require_ancestral(g: MixedGraph):
    verdict = _ancestral_cached(g)
    if not verdict:
        raise NotAncestralError(verdict)


@functools.lru_cache(maxsize=1 << 16)
def _ancestral_cached(g: MixedGraph) -> Verdict:
    return is_ancestral(g)


def inducing_path(g: MixedGraph, a: str, b: str) -> PathWitness | None:
    """A shortest inducing path between ``a`` and ``b``, or None.

    Every interior vertex must be a collider and an ancestor of ``a`` or
    ``b`` (ancestor sets taken over the whole graph).
    """
    _check_pair(g, a, b, frozenset())
    _require_ancestral(g)
    allowed = (ancestors(g, a) | ancestors(g, b)) - {a, b}
    # A vertex is entered with an arrowhead and left through an edge that is
    # also into it, so plain vertex-BFS suffices and yields simple paths.
    parent = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w in parent:
                continue
            if v != a and g.mark(v, w) is not ARROW:
                continue
            if w != b and (w not in allowed or g.mark(w, v) is not ARROW):
                continue
            parent[w] = v
            if w == b:
                path = [b]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return PathWitness.of(g, path[::-1])
            queue.append(w)
    return None


def is_maximal(g: MixedGraph) -> Verdict:
    """Holds iff no two non-adjacent vertices are joined by an inducing path."""
    _require_ancestral(g)
    vs = g.vertices
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            if g.adjacent(a, b):
                continue
            path = inducing_path(g, a, b)
            if path is not None:
                return Verdict.fail("max", path.vertices,
                                    f"inducing path between non-adjacent {a} and {b}")
    return Verdict.ok()


@functools.lru_cache(maxsize=1 << 16)
def is_dmag(g: MixedGraph) -> Verdict:
    """Ancestral and maximal; the first failing check provides the witness."""
    verdict = _ancestral_cached(g)
    if not verdict:
        return verdict
    return is_maximal(g)
