"""Seeded random instances: DAGs with latents and the DMAGs they project to."""

from __future__ import annotations

import random

from dmag.mixed_graph import MixedGraph
from dmag.projection import LatentDag, project


def random_latent_dag(rng: random.Random, n_observed: int, n_latent: int = 0,
                      density: float = 0.5) -> LatentDag:
    """Random DAG on ``O1..On`` plus latents ``L1..Lk``.

    A random topological order is drawn and each forward pair becomes an
    edge with probability ``density``.
    """
    if n_observed < 1:
        raise ValueError("need at least one observed vertex")
    observed = [f"O{i}" for i in range(1, n_observed + 1)]
    latents = [f"L{i}" for i in range(1, n_latent + 1)]
    order = observed + latents
    rng.shuffle(order)
    arcs = [(order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, len(order))
            if rng.random() < density]
    return LatentDag(MixedGraph.from_edges(directed=arcs, vertices=order), frozenset(latents))


def random_dmag(rng: random.Random, n_observed: int, max_latent: int = 2,
                density: float = 0.5) -> MixedGraph:
    return project(random_latent_dag(rng, n_observed, rng.randint(0, max_latent), density))
