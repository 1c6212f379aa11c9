"""qzeta: numerics for q-deformed Euler-Zagier multiple zeta functions.

Evaluate zeta_q at complex multi-indices inside Zhao's convergence domain,
continue the depth-2 case across the strip 1 < Re(s) <= 2, and verify, at
configurable precision, the sum-formula identities, their complex
interpolation in arbitrary depth, the auxiliary chain-series identities, the
supporting analytic lemmas, and the classical limit q -> 1.
"""
from .analysis import (DecayFit, check_alpha_derivative, check_pointwise_bounds,
                       check_pole_term_split, check_reciprocal_telescoping,
                       inner_integral, ramp_moment, ramp_quadrature,
                       ramp_representation, tail_decay_fit,
                       weighted_piece_integral, weighted_ramp_representation)
from .auxseries import (AuxSpec, aux_series, chain_sum, chain_suffix_table,
                        check_aux_bound, check_aux_identity)
from .limits import ExtrapolationReport, mzv_reference, q_to_1_extrapolate
from .qcore import (DEFAULT_POLICY, DomainError, NeumaierSum,
                    PoleProximityError, QParam, QZetaError, SummationResult,
                    TruncationPolicy, beta_fn, q_floor, q_int, q_int_log,
                    q_term, series_sum)
from .qmzf import (POLE_GUARD_RADIUS, DomainReport, convergence_margin,
                   is_admissible, pole_distance, twisted_tail, zeta_q,
                   zeta_q_depth1_continued, zeta_q_two_cont)
from .sumformula import (InterpSpec, SumFormulaReport, admissible_compositions,
                         check_interp_collapse, check_sum_formula,
                         interp_closed_form, interp_recursive,
                         interpolated_sum_depth2)

__version__ = "0.1.0"

__all__ = [
    "AuxSpec", "DecayFit", "DEFAULT_POLICY", "DomainError", "DomainReport",
    "ExtrapolationReport", "InterpSpec", "NeumaierSum", "POLE_GUARD_RADIUS",
    "PoleProximityError", "QParam", "QZetaError", "SumFormulaReport",
    "SummationResult", "TruncationPolicy", "admissible_compositions",
    "aux_series", "beta_fn", "chain_sum", "chain_suffix_table",
    "check_alpha_derivative", "check_aux_bound", "check_aux_identity",
    "check_interp_collapse", "check_pointwise_bounds", "check_pole_term_split",
    "check_reciprocal_telescoping", "check_sum_formula", "convergence_margin",
    "inner_integral", "interp_closed_form", "interp_recursive",
    "interpolated_sum_depth2", "is_admissible", "mzv_reference",
    "pole_distance", "q_floor", "q_int", "q_int_log", "q_term",
    "q_to_1_extrapolate", "ramp_moment", "ramp_quadrature",
    "ramp_representation", "series_sum", "tail_decay_fit", "twisted_tail",
    "weighted_piece_integral", "weighted_ramp_representation", "zeta_q",
    "zeta_q_depth1_continued", "zeta_q_two_cont",
]
