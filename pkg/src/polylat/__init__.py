"""polylat: exact enumeration and adsorption thermodynamics for lattice
polymers (animals, trees, walks, rings, combs) with quenched topology."""

__version__ = "0.1.0"

from .enumeration import (BudgetExceededError, EnsembleSpec,
                          EnumerationSummary, InvalidSpecError, TopologyTable,
                          count_by_topology, enumerate_ensemble,
                          max_topology_class)
from .lattice import (LatticePolymer, from_line, lex_min_site, lex_normalize,
                      longest_path, spans, to_line, translate, validate,
                      visits)
from .topology import (CombSignature, KnotInvariant, TopologyKey,
                       comb_signature, graph_key, knot_invariant, tree_key)

__all__ = [
    "BudgetExceededError", "CombSignature", "EnsembleSpec",
    "EnumerationSummary", "InvalidSpecError", "KnotInvariant",
    "LatticePolymer", "TopologyKey", "TopologyTable", "comb_signature",
    "count_by_topology", "enumerate_ensemble", "from_line", "graph_key",
    "knot_invariant", "lex_min_site", "lex_normalize", "longest_path",
    "max_topology_class", "spans", "to_line", "translate", "tree_key",
    "validate", "visits", "__version__",
]
