"""Length-reducing rewriting systems, Cayley balls and geodetic-graph checks."""

from .cayley import CayleyBall, CertifiedView, build_ball, certified, load_ball_json
from .errors import (
    DisconnectedGraphError,
    NotGeodeticError,
    ParseError,
    PlainRwsError,
    PreconditionError,
    VertexCapExceeded,
)
from .graph_metrics import (
    SimpleGraph,
    bfs,
    block_cut_tree,
    blocks,
    check_stemple_4circuits,
    enumerate_iecs,
    is_geodetic,
    is_s_broomlike,
    max_embedded_circuit_diameter,
    max_iec_length,
    parse_edge_list,
)
from .presentations import (
    FiniteGroupTable,
    PlainSpec,
    cyclic_group,
    free_product,
    gen_finite_group,
    gen_infinite_cyclic,
    gen_plain,
    parse_factors,
    table_from_csv,
)
from .rewrite_core import (
    Alphabet,
    Rule,
    StringRewritingSystem,
    check_convergent,
    check_presents_group,
    critical_pairs,
    equal_in_group,
    format_system,
    is_length_reducing,
    normalize,
    parse_system,
)
from .verifiers import (
    geodetic_corpus,
    plainness_evidence,
    run_suite,
    verify_apex_circuits,
    verify_circuit_rules,
    verify_circuit_diameter,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyBall",
    "CertifiedView",
    "build_ball",
    "certified",
    "load_ball_json",
    "DisconnectedGraphError",
    "NotGeodeticError",
    "ParseError",
    "PlainRwsError",
    "PreconditionError",
    "VertexCapExceeded",
    "SimpleGraph",
    "bfs",
    "block_cut_tree",
    "blocks",
    "check_stemple_4circuits",
    "enumerate_iecs",
    "is_geodetic",
    "is_s_broomlike",
    "max_embedded_circuit_diameter",
    "max_iec_length",
    "parse_edge_list",
    "FiniteGroupTable",
    "PlainSpec",
    "cyclic_group",
    "free_product",
    "gen_finite_group",
    "gen_infinite_cyclic",
    "gen_plain",
    "parse_factors",
    "table_from_csv",
    "Alphabet",
    "Rule",
    "StringRewritingSystem",
    "check_convergent",
    "check_presents_group",
    "critical_pairs",
    "equal_in_group",
    "format_system",
    "is_length_reducing",
    "normalize",
    "parse_system",
    "geodetic_corpus",
    "plainness_evidence",
    "run_suite",
    "verify_apex_circuits",
    "verify_circuit_rules",
    "verify_circuit_diameter",
]
