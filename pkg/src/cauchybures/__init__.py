"""Numerics for the theta-deformed Cauchy two-matrix model and the Bures
ensemble: Fox H-function kernels, bi-orthogonal polynomial families,
partition functions, correlation kernels and their hard-edge limits.
"""
from .exceptions import (CauchyBuresError, ComplexityError, DimensionError,
                         DomainError, NonConverged, PoleCollisionError,
                         PoleError, SignError, SingularPointError,
                         SingularSystemError)
from .numerics import LogValue, SkewMatrix, pfaffian, pfaffian_bordered
from .foxh import (ContourPlan, FoxHSpec, fox_h, g_inf, g_n, g_tilde_inf,
                   g_tilde_n, mellin_eval)
from .ensembles import (EnsembleParams, moment_b, moment_c, partition_bures,
                        partition_bures_closed,
                        partition_bures_squared_identity, partition_cauchy,
                        partition_cauchy_det)
from .polynomials import (PolySeries, coeff_c, jacobi_p, jacobi_series_value,
                          monic_pair, p_hat, p_hat_det, phi_bures, q_hat,
                          q_hat_det)
from .kernels import (KernelGrid, cd_kernel, hard_edge_kernel, hatted, k01,
                      k10, k11, make_grid)
from .correlations import (CorrelationRequest, brute_force_correlation,
                           rho_bures, rho_bures_hard_edge, rho_cauchy)
from .raney import fuss_catalan_moment, raney, sz_density, sz_moment

__version__ = "0.1.0"

__all__ = [
    "CauchyBuresError", "ComplexityError", "DimensionError", "DomainError",
    "NonConverged", "PoleCollisionError", "PoleError", "SignError",
    "SingularPointError", "SingularSystemError",
    "LogValue", "SkewMatrix", "pfaffian", "pfaffian_bordered",
    "ContourPlan", "FoxHSpec", "fox_h", "g_inf", "g_n", "g_tilde_inf",
    "g_tilde_n", "mellin_eval",
    "EnsembleParams", "moment_b", "moment_c", "partition_bures",
    "partition_bures_closed", "partition_bures_squared_identity",
    "partition_cauchy", "partition_cauchy_det",
    "PolySeries", "coeff_c", "jacobi_p", "jacobi_series_value", "monic_pair",
    "p_hat", "p_hat_det", "phi_bures", "q_hat", "q_hat_det",
    "KernelGrid", "cd_kernel", "hard_edge_kernel", "hatted", "k01", "k10",
    "k11", "make_grid",
    "CorrelationRequest", "brute_force_correlation", "rho_bures",
    "rho_bures_hard_edge", "rho_cauchy",
    "fuss_catalan_moment", "raney", "sz_density", "sz_moment",
]
