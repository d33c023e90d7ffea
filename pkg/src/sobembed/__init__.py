"""Bounded and compact Sobolev-type embeddings on metric measure spaces, decided numerically."""

from .covering import CoverFamily, OverlapReport, build_cover, guaranteed_overlap_bound, measure_overlap
from .criteria import (CriticalExponents, EmbeddingQuery, EmbeddingVerdict, ThetaScan, classify,
                       critical_exponents, cusp_exponent, distance_weight_criterion, theta_scan)
from .doubling import DimensionFit, DoublingReport, doubling_constant, fit_exponents
from .errors import (BudgetExceededError, DegenerateMeasureError, FitFailureError, HypothesisViolation,
                     RangeError, SobembedError, SpaceSpecError)
from .poincare import (DiscreteField, PIReport, bump_certificate, check_pi, hajlasz_check, truncate,
                       two_weight_pi_check)
from .scenarios import ScenarioReport, run_scenario
from .spaces import (BallSpec, Domain, MeasureEstimate, MeasureSpec, Metric, SpaceModel, ball_measure,
                     distance_to_boundary, sample_region)

__version__ = "0.1.0"
