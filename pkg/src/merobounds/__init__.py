"""Coefficient-bound toolkit for univalent functions with one pole in the disc."""

from .family import (
    BOUNDARY,
    EXTRA_POLE,
    EXTREMAL,
    FROM_W,
    FROM_W1,
    MEMBER,
    NON_MEMBER,
    ClassParams,
    ContourError,
    MemberFunction,
    MembershipVerdict,
    a2_region_check,
    build_from_w,
    build_from_w1,
    closed_form_a3,
    closed_form_a4,
    closed_form_a5,
    conjectured_bound,
    diff_bound_check,
    extremal_coeffs,
    extremal_member,
    membership_check,
    nonsharp_bound,
    normalized_form,
    pole_condition_residual,
    rogosinski_l2_check,
    univalence_residual,
    winding_number,
)
from .schur import (
    SchurParams,
    random_schur,
    schur_coeff_inequality_check,
    schur_to_series,
    schur_validate,
)
from .search import (
    MajorantCase,
    SearchReport,
    coeff_majorant,
    coeff_majorant_deriv,
    majorant_case,
    member_from_witness,
    monotone_check,
    search_max_coeff,
    verify_bound_argument,
    witness_payload,
)
from .series import (
    DEFAULT_ORDER,
    PowerSeries,
    SingularSeriesError,
    make_series,
    ps_add,
    ps_antiderivative,
    ps_derivative,
    ps_eval,
    ps_mul,
    ps_reciprocal,
)
from .verify import VerifySettings, run_verification

__version__ = "0.1.0"
