"""Directed maximal ancestral graphs: validation, Markov equivalence,
legitimate mark changes and transformations between equivalent graphs."""

from dmag.equivalence import (
    discriminating_paths_for,
    markov_equivalent,
    markov_equivalent_oracle,
    unshielded_colliders,
)
from dmag.exceptions import (
    CapExceeded,
    GraphError,
    GraphFormatError,
    NotAncestralError,
    NotDMAGError,
    NotEquivalentError,
)
from dmag.mixed_graph import (
    ARROW,
    TAIL,
    Mark,
    MarkChange,
    MixedGraph,
    Verdict,
    ancestors,
    apply_mark_change,
    is_ancestral,
    parse_graph,
    serialize_graph,
    to_dot,
)
from dmag.projection import LatentDag, d_separated, project
from dmag.reachability import (
    SeparationQuery,
    inducing_path,
    is_dmag,
    is_maximal,
    m_connecting_path,
    m_separated,
)
from dmag.transform import (
    ClassSummary,
    TransformationSequence,
    enumerate_class,
    find_leg,
    invariant_marks,
    mark_change_legitimate,
    reversal_legitimate,
    shortest_transform,
    transform_full,
    transform_theorem1,
    transform_theorem2,
)

__version__ = "0.1.0"
