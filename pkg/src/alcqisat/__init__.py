"""Satisfiability reasoning for the description logic ALCQI with axioms."""

from .branch import (
    Branch,
    ClashKind,
    CutSet,
    EMPTY_CUT_SET,
    branch_satisfies,
    cut_set_for_child,
    enumerate_branches,
    fine_tune,
    primitive_clash,
)
from .engine import (
    Limits,
    NogoodStore,
    NogoodTriple,
    ResourceLimitError,
    RunStats,
    Tableau,
    Verdict,
    decide,
)
from .lii import (
    AtomSet,
    LiiSystem,
    Solution,
    SolverLimitError,
    atomic_decomposition,
    build_lii,
    collect_fillers,
    feasible,
    zero_column,
)
from .oracle import (
    Interpretation,
    NoneFound,
    OracleLimitError,
    evaluate,
    find_model,
)
from .problems import (
    CorpusProfile,
    ProblemFile,
    ProblemFileError,
    generate_corpus,
    parse_problem_text,
    parse_tbox_text,
)
from .syntax import (
    And,
    AtLeast,
    AtMost,
    Atom,
    BOTTOM,
    Bottom,
    Concept,
    ConceptSyntaxError,
    CutFormula,
    NegAtom,
    Not,
    Or,
    Problem,
    Role,
    TOP,
    Top,
    build_problem,
    concept_to_text,
    conj,
    cut_formulae,
    cut_table,
    disj,
    internalize,
    modal_subformulae,
    negate,
    parse_concept,
    to_nnf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
