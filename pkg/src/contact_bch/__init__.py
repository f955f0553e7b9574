"""Contact Heisenberg algebra and its exact Baker-Campbell-Hausdorff product."""

from .adjoint import (
    StructuredExpMatrix,
    StructuredMatrix,
    ad_matrix,
    exp_ad_apply,
    exp_ad_matrix,
    matrix_exp,
    matrix_pow_closed,
    product_matrix,
    series_sum_closed,
)
from .algebra import (
    BasisIndex,
    ChaElement,
    ad_pow,
    add,
    basis_element,
    commutator,
    in_heisenberg_ideal,
    is_central,
    scale,
)
from .bch import bch, bch_first_order, bch_heisenberg, f_coeff, g1_coeff, g2_coeff, x1_coeffs
from .errors import ChaError, ConvergenceError, DimensionError, NumericError
from .kernels import DEFAULT_KERNELS, ScalarKernelSet, exp_divdiff
from .oracle import (
    BchDiagnostics,
    OracleOptions,
    bch_series,
    exp_ad_series,
    verify_group_law,
)

__version__ = "0.1.0"
