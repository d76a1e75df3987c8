"""Closed-form phase macromodels of planar nonlinear oscillators.

Pipeline: locate the limit cycle, evaluate the closed-form Floquet
basis (tangent/isochron eigenvectors and the perturbation projection
vector), cross-verify against direct variational/adjoint integrations,
then simulate phase deviation under deterministic or stochastic
forcing.
"""

from .adjoint import numeric_ppv, state_transition, verify_basis
from .cycle import LimitCycle, cycle_point, find_cycle, sample_cycle
from .diliberto import (DilibertoBasis, FloquetSpectrum, compute_a, compute_b,
                        covector_v1, covector_v2, eigenvector_u1,
                        eigenvector_u2, floquet_spectrum, lie_bracket,
                        orthogonality_defect)
from .isochron import asymptotic_phase, isochron_experiment
from .models import (OscillatorModel, eval_divergence, eval_field,
                     eval_jacobian, get_model, perp)
from .phase import (Perturbation, PhasePath, PPVSpectrum,
                    injection_lock_scan, phase_rhs, ppv_fourier,
                    simulate_phase)
from .stochastic import (DensityField, NoiseModel, PhaseEnsemble,
                         diffusion_summary, effective_noise_v,
                         simulate_sde_ensemble, solve_fp)

__version__ = "0.1.0"

__all__ = [
    "DensityField", "DilibertoBasis", "FloquetSpectrum", "LimitCycle",
    "NoiseModel", "OscillatorModel", "Perturbation", "PhaseEnsemble",
    "PhasePath", "PPVSpectrum", "asymptotic_phase", "compute_a", "compute_b",
    "covector_v1", "covector_v2", "cycle_point", "diffusion_summary",
    "effective_noise_v", "eigenvector_u1", "eigenvector_u2",
    "eval_divergence", "eval_field", "eval_jacobian", "find_cycle",
    "floquet_spectrum", "get_model", "injection_lock_scan",
    "isochron_experiment", "lie_bracket", "numeric_ppv",
    "orthogonality_defect", "perp", "phase_rhs", "ppv_fourier",
    "sample_cycle", "simulate_phase", "simulate_sde_ensemble", "solve_fp",
    "state_transition", "verify_basis",
]
