"""Equivalence-preserving mark changes and transformations between DMAGs.

A mark change is *legitimate* when its result is again a DMAG that is
Markov equivalent to the input.  This module tests legitimacy of single
changes and edge reversals, enumerates equivalence classes by closing
under legitimate changes, and builds change sequences between equivalent
DMAGs.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from dmag.equivalence import (
    _require_dmag,
    _same_vertices,
    discriminating_paths_for,
    distinguishing_query,
    markov_equivalent,
)
from dmag.exceptions import CapExceeded, GraphError, NotEquivalentError
from dmag.mixed_graph import (
    ARROW,
    TAIL,
    MarkChange,
    MixedGraph,
    Verdict,
    Witness,
    ancestors,
    apply_mark_change,
    descendants,
    mark_changes,
)
from dmag.reachability import is_dmag

DEFAULT_CAP = 100_000


# === legitimacy

def _directed_path(g: MixedGraph, src: str, dst: str, avoid_edge: tuple[str, str]):
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in g.children(v):
            if (v, w) == avoid_edge or w in parent:
                continue
            parent[w] = v
            if w == dst:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    return None


def _arrowhead_conditions(g: MixedGraph, a: str, b: str) -> Verdict:
    """Conditions t1-t3 for turning ``a -> b`` into ``a <-> b``."""
    path = _directed_path(g, a, b, avoid_edge=(a, b))
    if path is not None:
        return Verdict.fail("t1", path, f"another directed path from {a} to {b}")
    for c in g.parents(a):
        if not g.is_directed(c, b):
            return Verdict.fail("t2", (c, a, b), f"{c} -> {a} but not {c} -> {b}")
    for d in g.spouses(a):
        if g.mark(b, d) is not ARROW:
            return Verdict.fail("t2", (d, a, b), f"{d} <-> {a} but no edge from {d} into {b}")
    paths = discriminating_paths_for(g, a, b)
    if paths:
        return Verdict.fail("t3", paths[0].vertices, f"discriminating path for {a}")
    return Verdict.ok()


def _check_change(g: MixedGraph, c: MarkChange):
    old = g.mark(c.at, c.other)
    if old is None:
        raise GraphError(f"no edge between {c.edge[0]} and {c.edge[1]}")
    if old is c.to:
        raise GraphError(f"mark at {c.at} on {c.edge[0]}-{c.edge[1]} is already {c.to}")
    if c.to is TAIL and g.mark(c.other, c.at) is TAIL:
        raise GraphError(f"change would give {c.edge[0]}-{c.edge[1]} two tails")


@functools.lru_cache(maxsize=1 << 18)
def mark_change_legitimate(g: MixedGraph, c: MarkChange) -> Verdict:
    """Whether applying ``c`` to the DMAG ``g`` preserves DMAG-ness and equivalence.

    Adding an arrowhead at ``A`` on ``A -> B`` is checked directly with
    t1-t3.  Dropping the arrowhead at ``A`` on ``A <-> B`` is checked as the
    reverse move: the candidate result must be a DMAG in which re-adding
    the arrowhead satisfies t1-t3.
    """
    _require_dmag(g)
    _check_change(g, c)
    a, b = c.at, c.other
    if c.to is ARROW:
        return _arrowhead_conditions(g, a, b)
    result = apply_mark_change(g, c)
    verdict = is_dmag(result)
    if not verdict:
        return verdict
    return _arrowhead_conditions(result, a, b)


def reversal_legitimate(g: MixedGraph, a: str, b: str) -> Verdict:
    """Whether reversing ``a -> b`` is legitimate.

    Holds iff ``Pa(b) = Pa(a) | {a}`` and ``Sp(b) = Sp(a)``.  The answer is
    cross-checked against the two constituent mark changes (add the
    arrowhead at ``a``, then drop the one at ``b``).
    """
    _require_dmag(g)
    if not g.is_directed(a, b):
        raise GraphError(f"{a} -> {b} is not in the graph")
    witnesses = []
    pa_a, pa_b = set(g.parents(a)) | {a}, set(g.parents(b))
    if pa_a != pa_b:
        witnesses.append(Witness("pa", tuple(sorted(pa_a ^ pa_b)),
                                 f"Pa({b}) differs from Pa({a}) + {a}"))
    sp_a, sp_b = set(g.spouses(a)), set(g.spouses(b))
    if sp_a != sp_b:
        witnesses.append(Witness("sp", tuple(sorted(sp_a ^ sp_b)),
                                 f"Sp({a}) differs from Sp({b})"))
    verdict = Verdict(not witnesses, tuple(witnesses))

    first = MarkChange((a, b), a, ARROW)
    composite = bool(mark_change_legitimate(g, first))
    if composite:
        middle = apply_mark_change(g, first)
        composite = bool(mark_change_legitimate(middle, MarkChange((a, b), b, TAIL)))
    if composite != verdict.holds:
        raise AssertionError(
            f"reversal of {a} -> {b}: parent/spouse test says {verdict.holds}, "
            f"mark-change test says {composite}")
    return verdict


@functools.lru_cache(maxsize=1 << 16)
def legitimate_moves(g: MixedGraph) -> tuple[tuple[MarkChange, MixedGraph], ...]:
    """Every legitimate single mark change of ``g`` with its result."""
    return tuple((c, apply_mark_change(g, c)) for c in mark_changes(g)
                 if mark_change_legitimate(g, c))


# === sequences

@dataclass(frozen=True)
class Step:
    change: MarkChange
    digest: str


@dataclass(frozen=True)
class TransformationSequence:
    start: MixedGraph
    steps: tuple[Step, ...] = ()

    @classmethod
    def from_changes(cls, start: MixedGraph, changes: Iterable[MarkChange]):
        steps = []
        g = start
        for c in changes:
            g = apply_mark_change(g, c)
            steps.append(Step(c, g.digest()))
        return cls(start, tuple(steps))

    @property
    def start_hash(self) -> str:
        return self.start.digest()

    @property
    def changes(self) -> tuple[MarkChange, ...]:
        return tuple(s.change for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def graphs(self) -> Iterator[MixedGraph]:
        """Start graph followed by the graph after each step."""
        g = self.start
        yield g
        for s in self.steps:
            g = apply_mark_change(g, s.change)
            yield g

    @property
    def final(self) -> MixedGraph:
        *_, last = self.graphs()
        return last

    def verify(self) -> bool:
        """Replay the steps and compare every digest."""
        return all(g.digest() == s.digest for g, s in zip(list(self.graphs())[1:], self.steps))

    def inverse(self) -> "TransformationSequence":
        return TransformationSequence.from_changes(
            self.final, [c.inverse() for c in reversed(self.changes)])

    def then(self, other: "TransformationSequence") -> "TransformationSequence":
        if other.start != self.final:
            raise GraphError("sequences do not chain")
        return TransformationSequence(self.start, self.steps + other.steps)

    def lines(self) -> list[str]:
        out = [f"START {self.start_hash}"]
        for s in self.steps:
            out.append(str(s.change))
            out.append(f"DIGEST {s.digest}")
        return out


def prune_inverse_steps(changes: Iterable[MarkChange]) -> list[MarkChange]:
    """Cancel adjacent pairs of mutually inverse changes, repeatedly."""
    stack: list[MarkChange] = []
    for c in changes:
        if stack and stack[-1] == c.inverse():
            stack.pop()
        else:
            stack.append(c)
    return stack


def _check_equivalent(g1: MixedGraph, g2: MixedGraph):
    _same_vertices(g1, g2)
    _require_dmag(g1)
    _require_dmag(g2)
    verdict = markov_equivalent(g1, g2)
    if not verdict:
        query = distinguishing_query(g1, g2) if len(g1.vertices) <= 10 else None
        raise NotEquivalentError(f"graphs are not Markov equivalent: {verdict.describe()}", query)


def _pick_edge(g: MixedGraph, diff: dict[str, set[str]]) -> tuple[str, str]:
    """Choose ``A -> B`` with B minimal and A maximal among differences; ties go to the least name.

    ``diff`` maps each B in Diff to Diff_B.
    """
    b = min(y for y in diff if not (ancestors(g, y) - {y}) & diff.keys())
    diff_b = diff[b]
    a = min(x for x in diff_b if not (descendants(g, x) - {x}) & diff_b)
    return a, b


def _same_skeleton(g1: MixedGraph, g2: MixedGraph):
    diff = sorted(g1.skeleton() ^ g2.skeleton())
    if diff:
        raise GraphError(f"precondition: adjacency {diff[0]} is in only one graph")


def transform_theorem1(g: MixedGraph, g2: MixedGraph) -> TransformationSequence:
    """Add arrowheads to ``g`` until it becomes ``g2``.

    Every difference must be a directed edge in ``g`` that is bi-directed in
    ``g2``.  Each step removes one difference and is legitimate.
    """
    _check_equivalent(g, g2)
    _same_skeleton(g, g2)
    for e1, e2 in zip(g.edges, g2.edges):
        if e1 != e2 and not (not e1.bidirected and e2.bidirected):
            raise GraphError(f"precondition: edge {e1} vs {e2} is not directed-to-bidirected")
    cur = g
    changes = []
    while True:
        diff: dict[str, set[str]] = {}
        for x, y in cur.directed_edges():
            if g2.is_bidirected(x, y):
                diff.setdefault(y, set()).add(x)
        if not diff:
            break
        a, b = _pick_edge(cur, diff)
        change = MarkChange((a, b), a, ARROW)
        verdict = mark_change_legitimate(cur, change)
        if not verdict:
            raise AssertionError(f"selected change {change} is not legitimate: {verdict.describe()}")
        changes.append(change)
        cur = apply_mark_change(cur, change)
    return TransformationSequence.from_changes(g, changes)


def transform_theorem2(g: MixedGraph, g2: MixedGraph, summary: "ClassSummary | None" = None,
                       cap: int = DEFAULT_CAP) -> TransformationSequence:
    """Reverse directed edges of ``g`` until it becomes ``g2``.

    Both graphs may only have invariant bi-directed edges.  Each reversal is
    legitimate and contributes two mark changes.
    """
    _check_equivalent(g, g2)
    _same_skeleton(g, g2)
    if summary is None:
        summary = enumerate_class(g, cap)
    for h in (g, g2):
        for pair in h.bidirected_edges():
            if pair not in summary.invariant_bidirected:
                raise GraphError(f"precondition: bi-directed edge {pair[0]} <-> {pair[1]} "
                                 "is not invariant")
    for e1, e2 in zip(g.edges, g2.edges):
        if e1 != e2 and (e1.bidirected or e2.bidirected):
            raise GraphError(f"precondition: edge {e1} vs {e2} is not a reversal")
    cur = g
    changes = []
    while True:
        diff: dict[str, set[str]] = {}
        for x, y in cur.directed_edges():
            if g2.is_directed(y, x):
                diff.setdefault(y, set()).add(x)
        if not diff:
            break
        a, b = _pick_edge(cur, diff)
        verdict = reversal_legitimate(cur, a, b)
        if not verdict:
            raise AssertionError(f"selected reversal of {a} -> {b} is not legitimate: "
                                 f"{verdict.describe()}")
        for change in (MarkChange((a, b), a, ARROW), MarkChange((a, b), b, TAIL)):
            changes.append(change)
            cur = apply_mark_change(cur, change)
    return TransformationSequence.from_changes(g, changes)


# === equivalence classes

@dataclass(frozen=True)
class ClassSummary:
    members: tuple[MixedGraph, ...]
    invariant_arrowheads: frozenset[tuple[tuple[str, str], str]]
    invariant_tails: frozenset[tuple[tuple[str, str], str]]
    invariant_bidirected: frozenset[tuple[str, str]]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self._index

    @classmethod
    def from_members(cls, members: Iterable[MixedGraph]) -> "ClassSummary":
        members = tuple(sorted(set(members), key=MixedGraph.canonical))
        arrows, tails = set(), set()
        first = members[0]
        for e in first.edges:
            for at in e.pair:
                marks = {m.mark(at, e.u if at == e.v else e.v) for m in members}
                if marks == {ARROW}:
                    arrows.add((e.pair, at))
                elif marks == {TAIL}:
                    tails.add((e.pair, at))
        bidirected = {e.pair for e in first.edges
                      if (e.pair, e.u) in arrows and (e.pair, e.v) in arrows}
        return cls(members, frozenset(arrows), frozenset(tails), frozenset(bidirected))


def enumerate_class(g: MixedGraph, cap: int = DEFAULT_CAP) -> ClassSummary:
    """Markov equivalence class of ``g`` by breadth-first legitimate changes.

    Raises :class:`CapExceeded` (with the partial summary) when more than
    ``cap`` members are found.
    """
    _require_dmag(g)
    seen = {g}
    queue = deque([g])
    while queue:
        h = queue.popleft()
        for _, nxt in legitimate_moves(h):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise CapExceeded(cap, ClassSummary.from_members(seen))
                queue.append(nxt)
    return ClassSummary.from_members(seen)


def invariant_marks(g: MixedGraph, cap: int = DEFAULT_CAP) -> ClassSummary:
    return enumerate_class(g, cap)


def is_leg_of(h: MixedGraph, g: MixedGraph, summary: ClassSummary) -> bool:
    """Whether ``h`` is a loyal equivalent graph of ``g`` within ``summary``."""
    if h not in summary:
        return False
    if any(pair not in summary.invariant_bidirected for pair in h.bidirected_edges()):
        return False
    return all(h.is_directed(x, y) for x, y in g.directed_edges())


def find_leg(g: MixedGraph, summary: ClassSummary | None = None,
             cap: int = DEFAULT_CAP) -> MixedGraph:
    """The canonically least loyal equivalent graph of ``g``.

    A loyal equivalent graph keeps every directed edge of ``g`` and has only
    invariant bi-directed edges.
    """
    if summary is None:
        summary = enumerate_class(g, cap)
    elif g not in summary:
        raise GraphError("graph is not a member of the given class")
    for h in summary.members:  # already in canonical order
        if is_leg_of(h, g, summary):
            return h
    raise AssertionError(f"no loyal equivalent graph found for {g!r}")


def transform_full(g: MixedGraph, g2: MixedGraph, cap: int = DEFAULT_CAP) -> TransformationSequence:
    """Legitimate mark changes from ``g`` to ``g2`` via loyal equivalent graphs.

    ``g`` goes to its LEG by dropping arrowheads, the LEG is turned into the
    LEG of ``g2`` by reversals, which then gains arrowheads to become ``g2``.
    Adjacent mutually inverse steps are cancelled.
    """
    _check_equivalent(g, g2)
    summary = enumerate_class(g, cap)
    h, h2 = find_leg(g, summary), find_leg(g2, summary)
    s1 = transform_theorem1(h, g).inverse()
    s2 = transform_theorem2(h, h2, summary)
    s3 = transform_theorem1(h2, g2)
    changes = prune_inverse_steps(s1.changes + s2.changes + s3.changes)
    seq = TransformationSequence.from_changes(g, changes)
    cur = g
    for c in seq.changes:
        if not mark_change_legitimate(cur, c):
            raise AssertionError(f"step {c} is not legitimate")
        cur = apply_mark_change(cur, c)
    if cur != g2:
        raise AssertionError("transformation does not end at the target")
    return seq


def shortest_transform(g: MixedGraph, g2: MixedGraph, cap: int = DEFAULT_CAP) -> TransformationSequence:
    """A minimum-length sequence of legitimate mark changes from ``g`` to ``g2``."""
    _check_equivalent(g, g2)
    parent: dict[MixedGraph, tuple[MixedGraph, MarkChange] | None] = {g: None}
    queue = deque([g])
    while queue:
        h = queue.popleft()
        if h == g2:
            break
        for c, nxt in legitimate_moves(h):
            if nxt not in parent:
                parent[nxt] = (h, c)
                if len(parent) > cap:
                    raise CapExceeded(cap)
                queue.append(nxt)
    if g2 not in parent:
        raise AssertionError("equivalent target not reachable by legitimate changes")
    changes = []
    node = g2
    while parent[node] is not None:
        node, c = parent[node]
        changes.append(c)
    return TransformationSequence.from_changes(g, changes[::-1])
