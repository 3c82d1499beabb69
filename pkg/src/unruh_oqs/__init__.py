"""Open-system dynamics of uniformly accelerated two-level atoms.

The modules build the thermal correlations seen along a hyperbolic
trajectory, turn them into Kossakowski matrices, and evolve one atom
(Bloch equations) or two atoms sharing the bath (collective Lindblad
generator on 16 Pauli components).
"""
from .dissipator import (CorrelationTransforms, KossakowskiMatrix, check_positivity,
                         kossakowski_from_coefficients, kossakowski_general,
                         kossakowski_large_acceleration, kossakowski_scalar, psi_matrices)
from .errors import (ConvergenceError, DegenerateSpectrumError, DomainError, HermiticityError,
                     PositivityError, RankDeficiencyError, ShapeError, SingularGeneratorError,
                     StepSizeError, UnruhError)
from .field_correlations import (QuadratureConfig, TrajectoryParams, fourier_g, fourier_g_numeric,
                                 hilbert_k_acc, unruh_beta, wightman_along_trajectory)
from .ode_engine import LinearSystem, affine_flow, expm, integrate, stationary_solve
from .qstate import (TwoAtomState, bloch_decode, bloch_encode, concurrence, gibbs_state,
                     partial_trace, pauli4_decode, pauli4_encode)
from .single_atom import (SingleAtomParams, acceleration_frequency_shift, asymptotic_state,
                          build_bloch_generator, evolve_state, excitation_rate,
                          propagator_closed_form, transition_probability)
from .two_atom import (CollectiveLiouvillian, asymptotic_concurrence, asymptotic_two_atom,
                       build_collective_liouvillian, entanglement_threshold, evolve_two_atom,
                       scenario_product, scenario_werner, stationary_components)

__version__ = "0.1.0"
