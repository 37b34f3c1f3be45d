"""Estimation games, convex conjugates, quantum divergences, channels."""

from .channels import (AdditivityReport, CapacityReport, CompoundState,
                       QuantumChannel, additivity_report,
                       amplitude_damping_channel, capacity, channel_compose,
                       channel_tensor, conditional_entropy, dephasing_channel,
                       depolarizing_channel, entangled_entropy,
                       identity_channel, mutual_information, pinching_channel,
                       product_input_additivity_check, random_channel,
                       standard_compound, unitary_channel)
from .classical_game import (BiconjugateResult, ZeroSumSolution,
                             best_response, biconjugate_relent,
                             check_distribution, log_partition, maxminimizer,
                             minimax_estimate, minimax_orders_report,
                             nash_check, relative_entropy, zero_sum_value)
from .convex_conjugate import (SampledFunction, affine_conjugate,
                               conjugate_at, conjugate_function,
                               exp_conjugate, fenchel_gap, inf_convolution,
                               inf_convolution_check, norm_conjugate,
                               quadratic_conjugate, sample_function,
                               support_function, uniform_grid)
from .errors import ConvergenceError, DomainError, ValidationError
from .extreal import ExtReal
from .herm_core import (SUPPORT_CUTOFF, Spectrum, basis_transpose,
                        check_density, eig_hermitian, grad_trace_exp,
                        herm_exp, herm_inv, herm_log, herm_sqrt, hermitize,
                        make_rng, mat_fn, partial_trace, random_density,
                        random_hermitian, random_kraus, tensor)
from .quantum_entropy import (DivergenceSpec, EntropyResult, OptimOptions,
                              bs_relent, gamma_relent, log_trace_exp,
                              quantum_minimax_estimate, relent, scaling_check,
                              umegaki, variational_relent)

__version__ = "0.1.0"
