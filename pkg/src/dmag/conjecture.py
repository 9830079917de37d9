"""Empirical probe of the no-detour conjecture.

For random pairs of equivalent DMAGs, compare the length of a shortest
legitimate transformation with the number of differing marks.  A positive
excess would be a counterexample; it is recorded, not raised.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from dmag.equivalence import markov_equivalent, markov_equivalent_oracle
from dmag.generate import random_dmag
from dmag.mixed_graph import MixedGraph, mark_difference
from dmag.transform import DEFAULT_CAP, enumerate_class, shortest_transform


@dataclass
class Counterexample:
    source: MixedGraph
    target: MixedGraph
    length: int
    difference: int


@dataclass
class SweepReport:
    trials: int
    seed: int
    histogram: Counter = field(default_factory=Counter)  # excess -> count
    counterexamples: list[Counterexample] = field(default_factory=list)
    criterion_disagreements: int = 0

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "counterexamples": len(self.counterexamples),
            "criterion_disagreements": self.criterion_disagreements,
        }


def sweep(max_vertices: int = 5, trials: int = 500, seed: int = 0,
          cap: int = DEFAULT_CAP, density: float = 0.5) -> SweepReport:
    """Sample ``trials`` equivalent pairs on 2..``max_vertices`` observed vertices.

    Each pair is two members drawn from the enumerated class of a projected
    random latent DAG.
    """
    rng = random.Random(seed)
    report = SweepReport(trials, seed)
    for _ in range(trials):
        g = random_dmag(rng, rng.randint(2, max_vertices), density=density)
        members = enumerate_class(g, cap).members
        g1, g2 = rng.choice(members), rng.choice(members)
        if not markov_equivalent(g1, g2) or not markov_equivalent_oracle(g1, g2):
            report.criterion_disagreements += 1
        length = len(shortest_transform(g1, g2, cap))
        diff = mark_difference(g1, g2)
        report.histogram[length - diff] += 1
        if length > diff:
            report.counterexamples.append(Counterexample(g1, g2, length, diff))
    return report


def archive(report: SweepReport, directory) -> list[Path]:
    """Write each counterexample as a pair of graph files plus a JSON index."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    index = []
    for i, cx in enumerate(report.counterexamples):
        a = directory / f"counterexample_{report.seed}_{i}_source.g"
        b = directory / f"counterexample_{report.seed}_{i}_target.g"
        a.write_text(cx.source.canonical())
        b.write_text(cx.target.canonical())
        written += [a, b]
        index.append({"source": a.name, "target": b.name,
                      "length": cx.length, "difference": cx.difference})
    idx = directory / f"counterexamples_{report.seed}.json"
    idx.write_text(json.dumps({"report": report.as_dict(), "pairs": index}, indent=2) + "\n")
    written.append(idx)
    return written
