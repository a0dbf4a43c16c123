"""Finite-scale verification of Riesz bases and Riesz families for group generators."""

__version__ = "0.1.0"

from .calculus import (CalculusResult, ContourCalculus, ContourSpec, fcalc_contour,
                       fcalc_exact, resolvent, verify_lemma21)
from .exceptions import (ClusterOverflowError, ConditioningError, ContourError,
                         ConvergenceError, DecompositionError, GapError, InfeasibleError,
                         PoleError, RecursionStepError, RieszError, SpanError, SpectrumError)
from .functions import Constant, Indicator, Polynomial, Resolvent, StripFunction
from .gaps import (BallGroup, Decomposition, GapDecomposer, decompose, uniform_gap,
                   verify_hypotheses)
from .halfplane import (BlaschkeProduct, blaschke_deriv, blaschke_eval, separation,
                        shift_to_halfplane)
from .interpolation import (GroupedInterpolant, GroupedInterpolator, Interpolant,
                            PickInterpolator, grouped_interpolant, np_interpolant,
                            np_min_norm, pick_matrix, quotient_bound_ratio, sample_sup)
from .linalg import is_psd, jacobi_singular_values, spectral_norm
from .riesz import (ProjectionFamily, RieszReport, block_groups, counterexample_study,
                    frame_bounds, pipeline_theorem_1_1, pipeline_theorem_1_6,
                    riesz_family_bounds, spectral_projection, wermer_bound, wermer_scan)
from .spectrum import (EigenChain, OperatorMatrix, Spectrum, conjugate, emit_operator,
                       emit_spectrum, example_counterexample, example_jordan,
                       example_perturbed_skew, load_operator, load_spectrum, verify_chains)

__all__ = [name for name in dir() if not name.startswith("_")]
