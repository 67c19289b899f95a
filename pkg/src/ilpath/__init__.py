"""ILP feasibility through unary solution graphs, width-bounded path
decompositions and bounded-counter automata, cross-validated by a
brute-force oracle."""

from ilpath.instance import (
    Constraint,
    IlpError,
    IlpInstance,
    ParseError,
    Solution,
    evaluate,
    is_solution,
    parse_instance,
    strip_slack,
    to_standard_form,
)
from ilpath.solution_graph import (
    GraphVerdict,
    SolutionGraph,
    build_graph,
    from_dot,
    sol_of,
    to_dot,
    validate_graph,
)
from ilpath.decomposition import (
    PathDecomposition,
    ScheduleTrace,
    SpecialFormGraph,
    build_special_form,
    check_schedule_invariants,
    decompose,
    max_label_occupancy,
    schedule,
    validate_decomposition,
)
from ilpath.automaton import (
    AutomatonGraph,
    CounterAutomaton,
    FeasibilityResult,
    StateLimitExceeded,
    check_feasible,
    emit_boolean_program,
    export_automaton,
    interpret_boolean_program,
    parikh,
    parse_boolean_program,
    residue_bounds,
    schedule_to_word,
    step,
)
from ilpath.oracle import (
    BruteForceResult,
    SolutionSet,
    brute_force_feasible,
    enumerate_solutions,
    solutions_to_csv,
)
from ilpath._kernels import backend_name, compiled_available

__version__ = "0.1.0"

__all__ = [
    "Constraint",
    "IlpError",
    "IlpInstance",
    "ParseError",
    "Solution",
    "evaluate",
    "is_solution",
    "parse_instance",
    "strip_slack",
    "to_standard_form",
    "GraphVerdict",
    "SolutionGraph",
    "build_graph",
    "from_dot",
    "sol_of",
    "to_dot",
    "validate_graph",
    "PathDecomposition",
    "ScheduleTrace",
    "SpecialFormGraph",
    "build_special_form",
    "check_schedule_invariants",
    "decompose",
    "max_label_occupancy",
    "schedule",
    "validate_decomposition",
    "AutomatonGraph",
    "CounterAutomaton",
    "FeasibilityResult",
    "StateLimitExceeded",
    "check_feasible",
    "emit_boolean_program",
    "export_automaton",
    "interpret_boolean_program",
    "parikh",
    "parse_boolean_program",
    "residue_bounds",
    "schedule_to_word",
    "step",
    "BruteForceResult",
    "SolutionSet",
    "brute_force_feasible",
    "enumerate_solutions",
    "solutions_to_csv",
    "backend_name",
    "compiled_available",
    "__version__",
]
