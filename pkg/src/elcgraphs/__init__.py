"""Edge local complementation orbits, ELC-preserved graphs and their binary codes."""

from __future__ import annotations

from .canonical import (
    CanonicalForm,
    are_isomorphic,
    bipartite_canonical_form,
    canonical_form,
    canonical_labeling,
)
from .codes import (
    CodeReport,
    LinearCode,
    code_from_graph,
    code_report,
    dual,
    graph_from_code,
    is_self_dual,
    min_distance_bruteforce,
    min_distance_via_orbit,
)
from .constructions import ConstructionSpec, build, grammar_classes, parse_spec
from .enumeration import (
    Census,
    ClassificationEntry,
    classify_preserved,
    connected_graphs,
    count_orbits,
    count_preserved,
    count_size_two,
    extend_bipartite,
)
from .formats import from_graph6, to_graph6
from .graph import Bipartition, Graph, GraphError
from .orbits import Orbit, elc_orbit, is_elc_preserved, is_lc_preserved, lc_orbit

__version__ = "0.1.0"

__all__ = [
    "Bipartition", "CanonicalForm", "Census", "ClassificationEntry", "CodeReport",
    "ConstructionSpec", "Graph", "GraphError", "LinearCode", "Orbit", "are_isomorphic",
    "bipartite_canonical_form", "build", "canonical_form", "canonical_labeling",
    "classify_preserved", "code_from_graph", "code_report", "connected_graphs",
    "count_orbits", "count_preserved", "count_size_two", "dual", "elc_orbit",
    "extend_bipartite", "from_graph6", "grammar_classes", "graph_from_code",
    "is_elc_preserved", "is_lc_preserved", "is_self_dual", "lc_orbit",
    "min_distance_bruteforce", "min_distance_via_orbit", "parse_spec", "to_graph6",
]
