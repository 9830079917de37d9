"""Latent projection: the DMAG over the observed vertices of a DAG with latents."""

from __future__ import annotations

import itertools as itr
from dataclasses import dataclass
from typing import Iterable

from dmag.exceptions import GraphError
from dmag.mixed_graph import ARROW, TAIL, MixedGraph, ancestors, find_directed_cycle
from dmag.reachability import SeparationQuery, is_dmag, m_separated


@dataclass(frozen=True)
class LatentDag:
    dag: MixedGraph
    latents: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "latents", frozenset(self.latents))
        if self.dag.bidirected_edges():
            raise GraphError("a latent DAG has directed edges only")
        cycle = find_directed_cycle(self.dag)
        if cycle is not None:
            raise GraphError("latent DAG has a directed cycle " + "->".join(cycle))
        unknown = self.latents - set(self.dag.vertices)
        if unknown:
            raise GraphError(f"latent vertices not in the DAG: {sorted(unknown)}")
        if not self.observed:
            raise GraphError("at least one vertex must be observed")

    @property
    def observed(self) -> tuple[str, ...]:
        return tuple(v for v in self.dag.vertices if v not in self.latents)


def d_separated(d: LatentDag, q: SeparationQuery) -> bool:
    """d-separation in the underlying DAG (m-separation restricted to DAGs)."""
    return m_separated(d.dag, q)


def _inseparable(d: LatentDag, a: str, b: str) -> bool:
    rest = [v for v in d.observed if v not in (a, b)]
    for k in range(len(rest) + 1):
        for z in itr.combinations(rest, k):
            if m_separated(d.dag, SeparationQuery({a}, {b}, z)):
                return False
    return True


def project(d: LatentDag) -> MixedGraph:
    """Marginalize the latents of ``d`` into a DMAG over its observed vertices.

    Observed vertices are adjacent iff no set of other observed vertices
    d-separates them; the mark at ``a`` is a tail iff ``a`` is an ancestor
    of the other endpoint in ``d``.
    """
    obs = d.observed
    edges = []
    for a, b in itr.combinations(obs, 2):
        if not _inseparable(d, a, b):
            continue
        mark_a = TAIL if a in ancestors(d.dag, b) else ARROW
        mark_b = TAIL if b in ancestors(d.dag, a) else ARROW
        if mark_a is TAIL and mark_b is TAIL:
            raise AssertionError(f"{a} and {b} are ancestors of each other in an acyclic graph")
        edges.append((a, b, mark_a, mark_b))
    g = MixedGraph(obs, edges)
    verdict = is_dmag(g)
    if not verdict:
        raise AssertionError(f"projection is not a DMAG: {verdict.describe()}")
    return g


def latent_dag(directed: Iterable[tuple[str, str]], latents=(), vertices=()) -> LatentDag:
    return LatentDag(MixedGraph.from_edges(directed=directed, vertices=vertices), frozenset(latents))
