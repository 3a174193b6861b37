"""Subordinated semigroups on finite metric measure spaces.

Stable subordinator densities, spectral functional calculus for symmetric
generators, subordination integrals, pointwise domination sweeps, ergodic
maximal functions and square-function norms, with verification reports.
"""

from ._quadrature import QuadratureError, integrate
from .domination import (AssumptionViolation, SectorSpec, cauchy_constant, complex_domination,
                         default_f_family, default_t_grid, derivative_domination,
                         dominated_variant, faa_di_bruno_constant)
from .hardy import (HardyParams, RegularityProfile, TimeSpaceGrid, bmo_norm, calderon_check,
                    calderon_constant, decay_average_check, equivalence_experiment, hardy_f_family,
                    hardy_norm, hl_maximal, kernel_bound_audit, peetre_maximal, phi_closed_form,
                    phi_identity_check, regularity_audit, square_functions)
from .maximal import (LaplaceTypeFunction, MaximalGrid, averaging_apply, fourier_l1_bound_check,
                      laplace_type_check, maximal_average, poisson_maximal, sector_maximal_check,
                      strong_type_bound, strong_type_rows, weak_type_bound, weak_type_table)
from .reports import DominationReport, VerificationReport, write_csv
from .spectral import (DiscreteMeasureSpace, MarkovAudit, SelfAdjointOperator,
                       SpectralDecomposition, apply_scalar_function, cycle, decompose, from_matrix,
                       grid, kernel_of, load_operator, markov_audit, operator_matrix, path,
                       save_operator, symbols)
from .stable import (AuditGrid, StableDensityModel, density_audit, laplace_transform,
                     p1_derivative, stable_density, stable_density_complex)
from .subordination import (SemigroupRequest, kernel_matrix, poisson_derivative_apply,
                            subordinate_apply)

__version__ = "0.1.0"
