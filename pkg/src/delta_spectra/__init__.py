"""Spectral analysis of the complex double-delta potential.

``H = -d^2/dx^2 + z_- delta(x + a) + z_+ delta(x - a)`` with complex
couplings: spectral singularities, bound states (complex and real), and a
coupling neighbourhood on which ``H`` is quasi-Hermitian.
"""

__version__ = "0.1.0"

from .core_model import (CouplingConfig, PhysicalConfig, ScaledCoupling, Wavenumber, nondimensionalize,
                         scale, w_coefficients)
from .errors import (ContourDegenerateError, DeltaSpectraError, InvalidInputError, OriginError,
                     ResolutionError, UnsupportedConfigurationError)
from .overlap_kernel import det_k, overlap_matrix, real_zeros_det_k
from .quasi_hermiticity import (HalfDiscSpec, QuasiBound, compute_bound, eval_G, eval_J, eval_L,
                                verify_lemma1, verify_lemma2)
from .singularity_finder import SingularityRecord, cubic_g, find_singularities, solve_cubic
from .transfer import TransferMatrix, eigenfunction, f_factor, f_plus, m22, transfer_matrix
from .zero_locator import (ContourSpec, SearchRegion, ZeroRecord, eval_F, locate_zeros, multiplicity_analysis,
                           real_bound_states, region_bound, winding_count)

__all__ = [
    "__version__",
    "CouplingConfig", "PhysicalConfig", "ScaledCoupling", "Wavenumber", "nondimensionalize", "scale",
    "w_coefficients",
    "DeltaSpectraError", "InvalidInputError", "OriginError", "UnsupportedConfigurationError",
    "ContourDegenerateError", "ResolutionError",
    "TransferMatrix", "transfer_matrix", "m22", "f_factor", "f_plus", "eigenfunction",
    "overlap_matrix", "det_k", "real_zeros_det_k",
    "SingularityRecord", "cubic_g", "solve_cubic", "find_singularities",
    "ContourSpec", "SearchRegion", "ZeroRecord", "eval_F", "winding_count", "locate_zeros", "region_bound",
    "multiplicity_analysis", "real_bound_states",
    "HalfDiscSpec", "QuasiBound", "eval_L", "eval_G", "eval_J", "compute_bound", "verify_lemma1",
    "verify_lemma2",
]
