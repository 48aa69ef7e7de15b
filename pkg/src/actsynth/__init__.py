"""Learning typed STRIPS action schemas from state traces whose actions carry
only a label, with parameters, effects and substitutions found by
incremental SAT."""

__version__ = "0.1.0"

from .effects import EffectSolution, SynthLimits, check_witness, synth_label, synth_num_params
from .errors import ActSynthError, ParamBudgetExceeded, ParseError, TimeLimit
from .evaluation import DiffReport, diff_domains, fidelity
from .learn import LearnConfig, LearnResult, learn_domain
from .model import ActionSchema, GroundFact, LiftedFact, TypeHierarchy
from .pddl import Domain, ProblemInstance, emit_domain, parse_domain, parse_problem
from .traces import Trace, decompose, emit_trace, parse_trace

__all__ = [
    "ActSynthError",
    "ActionSchema",
    "DiffReport",
    "Domain",
    "EffectSolution",
    "GroundFact",
    "LearnConfig",
    "LearnResult",
    "LiftedFact",
    "ParamBudgetExceeded",
    "ParseError",
    "ProblemInstance",
    "SynthLimits",
    "TimeLimit",
    "Trace",
    "TypeHierarchy",
    "__version__",
    "check_witness",
    "decompose",
    "diff_domains",
    "emit_domain",
    "emit_trace",
    "fidelity",
    "learn_domain",
    "parse_domain",
    "parse_problem",
    "parse_trace",
    "synth_label",
    "synth_num_params",
]
