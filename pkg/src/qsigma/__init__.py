"""Transverse conductivity and dielectric function of a quantum collisional plasma."""

from .degenerate import (DegenerateSigma, evaluate_safe, sigma1_deg, sigma2_deg,
                         sigma_classic_deg, sigma_quant_deg, sigma_quant_series,
                         sigma_tr_deg, sigma_tr_deg_quadrature)
from .fermi import FermiKernel, f2
from .general import (J_angular, SigmaBreakdown, sigma1_general, sigma2_general_1d,
                      sigma2_general_2d, sigma_classic_general, sigma_quant_smallh,
                      sigma_tr_general)
from .lindhard import (ComparisonRow, closed_form_difference, compare, sigma2_lindhard,
                       sigma_lindhard, sigma_tr_corrected)
from .params import (DegenerateParams, GeneralParams, KineticAux, ParameterError,
                     PoleError, epsilon_tr, fermi_to_thermal, from_kinetic_aux, log_ratio,
                     to_kinetic_aux)
from .quad import QuadratureError, QuadResult

__version__ = "0.1.0"
