"""Heat-trace sums over Riemann zeta zeros and their small-t expansion.

The library verifies, at desk scale, that the spectral sum
2 sum_{rho>0} exp(-t rho^2) over zero ordinates matches both the
Riemann-Weil explicit formula (archimedean term plus prime-power sum)
and the closed-form asymptotic expansion whose coefficients are exact
rationals built from Bernoulli and Euler numbers.
"""

from .counting_asymptotics import (I_integral, J_integral, LeadingTerms,
                                   R_integral, i_asymptote, j_asymptote,
                                   n_model, verify_theorem51)
from .errors import (AccuracyError, CoverageError, DomainError,
                     IntegrityError, TransportError, ValidationError,
                     ZetaHeatError)
from .expansion import (CoefficientTable, ExactCoefficient, ExpansionValue,
                        a_coeff, b_coeff, evaluate_expansion,
                        optimal_truncation, r_function, remainder_bound)
from .explicit_formula import (GaussianTestFunction, IdentityReport,
                               prime_sum, psi_bound, splitting_anchor,
                               verify_identity, von_mangoldt,
                               w_arch_digamma, w_arch_quadrature)
from .heat_trace import (TraceReport, discrepancy, figure_data,
                         six_term_approximation, spectral_trace)
from .quadrature import QuadratureSpec
from .special_numbers import (bernoulli, digamma, euler_number,
                              gamma_half_integer, incomplete_gamma0)
from .zeros import (ZeroList, counting_function, fetch_remote, load_bundled,
                    load_zeros, model_counting)

__version__ = "0.1.0"
