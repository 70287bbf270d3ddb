"""Numerical toolkit for light-like points of zero mean curvature
hypersurface graphs in Lorentzian manifolds."""

from .errors import (ConfigError, DegenerateMetric, DomainError,
                     ExpressionSyntaxError, GeodesicFailure,
                     IdentityViolation, LightconeError, NotLightLike,
                     ReGraphFailure, SingularC, UnknownIdentifier,
                     VariableOutOfRange, WrongSignature, ZeroVector)
from .expr import eval_jet3, eval_value, parse
from .jet import Jet3
from .lorentz import (CausalCharacter, GeodesicPath, MetricField,
                      causal_character, christoffel_at, integrate_geodesic,
                      metric_at, validate_signature)
from .reduction import (AxisProfile, OdeState, alpha, alpha_l, decompose,
                        is_degenerate_initial, normalize_graph, ode_rhs)
from .surface import (Box, FirstFundamental, GraphHypersurface, LocusScan,
                      PointClass, PointKind, B_value, classify_point,
                      first_fundamental, gradient_B, induced_metric,
                      normal_vector, operator_A, operator_tildeA,
                      scan_lightlike_locus)
from .verify import (TheoremReport, Tolerances, Verdict, estimate_lipschitz,
                     integrate_reduced_ode, verify_theorem,
                     zmc_residual_scan)

__version__ = "0.1.0"
