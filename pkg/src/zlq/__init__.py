"""Exact and heuristic toolkit for limited augmented Zarankiewicz numbers
on the incidence boards of complete graphs."""

from .board import (
    BoardError,
    Cell,
    CountingSummary,
    Mode,
    Row,
    TwoEdge,
    available_cells,
    candidate_family,
    classify,
    counting_summary,
    make_edge,
    rows,
)
from .families import Family, FamilyFormatError, parse_family, serialize_family
from .admissibility import (
    Board,
    ScratchBoard,
    VerifyResult,
    Violation,
    build_board,
    check_C2,
    check_C3,
    incremental_check,
    verify,
)
from .ilp import IlpModel, build_model, export_lp, import_solution, witness_set
from .exact import ExactResult, pairwise_conflicts, solve_exact, upper_bound
from .search import SearchConfig, SearchResult, greedy_fill, local_improve, run_search
from .lifting import LiftReport, embed, lift_extend
from .recognition import (
    BipartiteGraph,
    Isomorphism,
    NotExtremal,
    incidence_graph,
    is_c4_free,
    recognize_incidence,
)
from .fixtures import gap_ratio, k4t_bound, reference_family, reference_table

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "Board",
    "BoardError",
    "Cell",
    "CountingSummary",
    "ExactResult",
    "Family",
    "FamilyFormatError",
    "IlpModel",
    "Isomorphism",
    "LiftReport",
    "Mode",
    "NotExtremal",
    "Row",
    "ScratchBoard",
    "SearchConfig",
    "SearchResult",
    "TwoEdge",
    "VerifyResult",
    "Violation",
    "available_cells",
    "build_board",
    "build_model",
    "candidate_family",
    "check_C2",
    "check_C3",
    "classify",
    "counting_summary",
    "embed",
    "export_lp",
    "gap_ratio",
    "greedy_fill",
    "import_solution",
    "incidence_graph",
    "incremental_check",
    "is_c4_free",
    "k4t_bound",
    "lift_extend",
    "local_improve",
    "make_edge",
    "pairwise_conflicts",
    "parse_family",
    "recognize_incidence",
    "reference_family",
    "reference_table",
    "rows",
    "run_search",
    "serialize_family",
    "solve_exact",
    "upper_bound",
    "verify",
]
