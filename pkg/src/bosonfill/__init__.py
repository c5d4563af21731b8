"""Boson sampling validation via sample-space filling analysis.

Simulates exact boson sampling and its classically simulatable mock-ups
(uniform, distinguishable particles, mean-field), builds wave function
networks over collected samples, fits the filling-curve coefficients
(alpha_mu, alpha_sigma, beta_sigma) and renders accept/reject verdicts.
"""
from .amplitudes import (Amplitude, ProbabilityTable, build_submatrix,
                         full_distribution, output_amplitude)
from .filling import (AveragingMode, ExperimentPlan, FillingCurve,
                      RadiusScanResult, default_checkpoints, default_radius_grid,
                      fit_curves, optimize_radius, prefix_degree_stats,
                      run_experiment, run_experiment_multi_radius)
from .permanent import DEFAULT_PERMANENT_CAP, permanent
from .samplers import (SamplerKind, SampleSet, StarvationError, boson_raw_draws,
                       boson_sample, distinguishable_raw_draws,
                       distinguishable_sample, mean_field_raw_draws,
                       mean_field_sample, mean_field_weights, sample,
                       split_seed, uniform_raw_draws, uniform_sample)
from .states import (DEFAULT_ENUMERATION_CAP, CapacityError,
                     collision_free_rank, collision_free_size,
                     collision_free_unrank, enumerate_outcomes, outcome_rank,
                     outcome_space_size, outcome_unrank, single_photon_input)
from .unitary import (haar_random_unitary, load_unitary, save_unitary,
                      unitarity_defect, unitary_fingerprint, check_unitary)
from .validator import (FitFingerprint, Hypothesis, Verdict, VerdictRow,
                        separation, validate)
from .wfn import DegreeStats, WfnGraph, build_graph, degree_stats, l1_distance

__version__ = "0.1.0"

__all__ = [
    "Amplitude", "AveragingMode", "CapacityError", "DEFAULT_ENUMERATION_CAP",
    "DEFAULT_PERMANENT_CAP", "DegreeStats", "ExperimentPlan", "FillingCurve",
    "FitFingerprint", "Hypothesis", "ProbabilityTable", "RadiusScanResult",
    "SampleSet", "SamplerKind", "StarvationError", "Verdict", "VerdictRow",
    "WfnGraph", "boson_raw_draws", "boson_sample", "build_graph",
    "build_submatrix", "check_unitary", "collision_free_rank",
    "collision_free_size", "collision_free_unrank", "default_checkpoints",
    "default_radius_grid", "degree_stats", "distinguishable_raw_draws",
    "distinguishable_sample", "enumerate_outcomes", "fit_curves",
    "full_distribution", "haar_random_unitary", "l1_distance", "load_unitary",
    "mean_field_raw_draws", "mean_field_sample", "mean_field_weights",
    "optimize_radius", "outcome_rank", "outcome_space_size", "outcome_unrank",
    "output_amplitude", "permanent", "prefix_degree_stats", "run_experiment",
    "run_experiment_multi_radius", "sample", "save_unitary", "separation",
    "single_photon_input", "split_seed", "unitarity_defect",
    "unitary_fingerprint", "uniform_raw_draws", "uniform_sample", "validate",
]
