"""Stochastic Schrodinger unravelings of GKLS master equations.

Generators, a dephasing/decay classifier, correlated complex noise, linear
SSE integrators and a small model zoo with a command-line front end.
"""

from .classifier import (
    ChannelKind,
    ChannelVerdict,
    ClassificationReport,
    PhaseFit,
    classify_generator,
    classify_single,
    decompose_self_dual,
    self_dual_phase,
)
from .errors import DimensionMismatch, NonHermitianLindblad, NotSelfDual, ScenarioError
from .generator import (
    GklsGenerator,
    KossakowskiForm,
    StratonovichForm,
    evolve_exact,
    is_self_dual,
    is_trace_preserving,
    stationary_states,
    to_stratonovich,
)
from .noise import (
    ComplexNoiseModel,
    MinimalReduction,
    NotPositiveSemidefinite,
    check_picinbono,
    make_rng,
    minimal_reduction,
    model_from_coeffs,
    sample_complex,
    sample_wiener,
)
from .scenarios import Scenario, build_scenario, load_scenario, save_scenario
from .trajectory import Scheme, SsePlan, compare_to_exact, run_ensemble, run_trajectory

__version__ = "0.1.0"

__all__ = [
    "ChannelKind", "ChannelVerdict", "ClassificationReport", "PhaseFit",
    "classify_generator", "classify_single", "decompose_self_dual", "self_dual_phase",
    "DimensionMismatch", "NonHermitianLindblad", "NotSelfDual", "ScenarioError",
    "GklsGenerator", "KossakowskiForm", "StratonovichForm", "evolve_exact",
    "is_self_dual", "is_trace_preserving", "stationary_states", "to_stratonovich",
    "ComplexNoiseModel", "MinimalReduction", "NotPositiveSemidefinite",
    "check_picinbono", "make_rng", "minimal_reduction", "model_from_coeffs",
    "sample_complex", "sample_wiener",
    "Scenario", "build_scenario", "load_scenario", "save_scenario",
    "Scheme", "SsePlan", "compare_to_exact", "run_ensemble", "run_trajectory",
]
