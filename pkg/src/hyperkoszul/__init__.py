"""Exact discrete calculus, Koszul complexes and constrained (co)homology on hypergraphs."""
from .errors import (ChainMapError, FiltrationError, HeaderMismatchError, HyperkoszulError,
                     NonAdmissibleError, ParseError, VerificationError)
from .fields import GF, QQ, PrimeField, RationalField, default_field, parse_field
from .hypergraph import (Hypergraph, VertexTable, apply_vertex_map, bar_delta_closure, bar_lower_delta,
                         classify, complement, delta_closure, density, lower_delta, parse_hypergraph,
                         sample_random, serialize_hypergraph)
from .exterior import (LOWER, UPPER, Chain, ExtOperator, admissible_lower_vertices, admissible_upper_vertices,
                       apply_operator, induced_ext_map, insertion_derivative, parse_operator, partial_derivative,
                       wedge)
from .koszul import GradedChainComplex, build_koszul_complex, check_exactness, koszul_differential
from .homology import (ConstrainedComplex, ConstrainedGrading, HomologySummary, constrained_cocomplex,
                       constrained_complex, induced_map_on_homology, localized_homology, usual_homology,
                       weighted_boundary_matrix, weighted_coboundary_matrix)
from .mayer_vietoris import (LESDiagram, MVLadder, mv_hypergraph, mv_independence, mv_morphism, mv_simplicial,
                             verify_les)
from .persistence import (Barcode, Filtration, derived_filtration, load_filtration, persistence_rank,
                          persistent_homology, persistent_mv)

__version__ = "0.1.0"
