"""uncprover: decide unique normal forms w.r.t. conversion (UNC) of TRSs."""

from .config import Budgets, DEFAULT_BUDGETS
from .terms import App, Signature, Term, Var, match, mgu, unifiable_rational
from .trs import (
    TRS,
    ConvStep,
    CriticalPair,
    RewriteRule,
    bounded_conversions,
    critical_pairs,
    development_step_reducts,
    is_normal_form,
    parallel_step_reducts,
    rewrite_steps,
)
from .ctrs import (
    CTRS,
    ConditionalCriticalPair,
    ConditionalRule,
    CongruenceClosure,
    Equation,
    cc_entails,
    conditional_critical_pairs,
    conditional_linearize,
    lr_separated_linearize,
)
from .criteria import (
    CriterionReport,
    SimState,
    eq_states,
    non_omega_overlapping,
    parallel_closed_check,
    right_reducible,
    strongly_closed_check,
    strongly_non_overlapping,
    weight_decreasing_unc,
    wd_ccp_satisfied,
)
from .completion import (
    DEVELOPMENT_CLOSED,
    STRONGLY_CLOSED,
    ConfluencePredicate,
    Verdict,
    Witness,
    direct_sum_decompose,
    disprove_search,
    rule_reverse,
    unc_complete,
    validate_witness,
)
from .cops import CopsParseError, ProblemFile, parse_cops, render_cops
from .strategy import DEFAULT_METHODS, ProofResult, StrategyConfig, prove_unc

__all__ = [
    "App", "Budgets", "CTRS", "ConditionalCriticalPair", "ConditionalRule",
    "ConfluencePredicate", "CongruenceClosure", "ConvStep", "CopsParseError",
    "CriterionReport", "CriticalPair", "DEFAULT_BUDGETS", "DEFAULT_METHODS",
    "DEVELOPMENT_CLOSED", "Equation", "ProblemFile", "ProofResult",
    "RewriteRule", "STRONGLY_CLOSED", "Signature", "SimState", "StrategyConfig",
    "TRS", "Term", "Var", "Verdict", "Witness", "bounded_conversions",
    "cc_entails", "conditional_critical_pairs", "conditional_linearize",
    "critical_pairs", "development_step_reducts", "direct_sum_decompose",
    "disprove_search", "eq_states", "is_normal_form", "lr_separated_linearize",
    "match", "mgu", "non_omega_overlapping", "parallel_closed_check",
    "parallel_step_reducts", "parse_cops", "prove_unc", "render_cops",
    "rewrite_steps", "right_reducible", "rule_reverse", "strongly_closed_check",
    "strongly_non_overlapping", "unc_complete", "unifiable_rational",
    "validate_witness", "wd_ccp_satisfied", "weight_decreasing_unc",
]
