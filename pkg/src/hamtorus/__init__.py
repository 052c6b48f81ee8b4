"""Bootstrap percolation on Hamming tori.

The torus has vertex set {0..n-1}^d with edges between vertices that differ
in exactly one coordinate, so each axis line is a clique.  At threshold 2 a
closed vertex opens once two neighbors are open, and the final configuration
is always a union of disjoint combinatorial subtori.  This package provides
the exact subtorus merge engine, a dense reference automaton, closed-form
scaling predictions, and a reproducible Monte Carlo harness for measuring
spanning probabilities and spanned-subtorus counts at the critical density.
"""

__version__ = "0.1.0"

from .errors import BudgetExceededError, VerificationError
from .torus import (
    Dimensions,
    Subtorus,
    contains,
    enclosing,
    make_subtorus,
    point_distance,
    point_subtorus,
    subtorus_distance,
    vertex_distance,
    vertices,
    whole_torus,
)
from .cellular import Configuration, evolve, evolve_incremental, neighbors, step
from .spanning import (
    GeneratedFamily,
    MaximalDecomposition,
    SeedSet,
    closure,
    conditional_closure,
    event_covered,
    event_spanned,
    generated_family,
    is_internally_spanned,
    seed_set,
    spanned_count,
)
from . import theory
from .montecarlo import (
    EventEstimate,
    ExperimentConfig,
    Summary,
    TrialResult,
    config_from_dict,
    config_to_dict,
    estimate_spanning_probability,
    run_experiment,
    run_trial,
    run_trials,
    sample_seeds,
    summarize,
    sweep,
    trial_rng,
    verify_oracle,
    verify_perfect,
    verify_properties,
    wilson_interval,
)

__all__ = [
    "__version__",
    "BudgetExceededError",
    "VerificationError",
    "Dimensions",
    "Subtorus",
    "contains",
    "enclosing",
    "make_subtorus",
    "point_distance",
    "point_subtorus",
    "subtorus_distance",
    "vertex_distance",
    "vertices",
    "whole_torus",
    "Configuration",
    "evolve",
    "evolve_incremental",
    "neighbors",
    "step",
    "GeneratedFamily",
    "MaximalDecomposition",
    "SeedSet",
    "closure",
    "conditional_closure",
    "event_covered",
    "event_spanned",
    "generated_family",
    "is_internally_spanned",
    "seed_set",
    "spanned_count",
    "theory",
    "EventEstimate",
    "ExperimentConfig",
    "Summary",
    "TrialResult",
    "config_from_dict",
    "config_to_dict",
    "estimate_spanning_probability",
    "run_experiment",
    "run_trial",
    "run_trials",
    "sample_seeds",
    "summarize",
    "sweep",
    "trial_rng",
    "verify_oracle",
    "verify_perfect",
    "verify_properties",
    "wilson_interval",
]
