"""Mean-distance invariants of metric measure spaces and comparison with round spheres."""

__version__ = "0.1.0"

from .comparison import (
    ComparisonReport,
    bishop_gromov_check,
    default_radius_grid,
    generalized_stability_margins,
    mean_distance_upper_bound,
    sphere_proximity_report,
    stability_margins,
)
from .errors import KernelError, ValidationError
from .estimate import Estimate, exact_pair_reduction, mc_estimate
from .functions import IDENTITY, MonotoneFunction, monotone_function
from .invariants import (
    InvariantReport,
    compute_invariants,
    generalized_mean,
    mean_distance,
    model_reference,
    observable_diameter_bound,
    pointwise_mean_distance,
    radius_diameter,
)
from .mmspace import (
    DiscreteMMSpace,
    ModelSphere,
    ValidationReport,
    from_distance_matrix,
    from_graph,
    make_suspension,
    sample_sphere,
    validate,
)
from .quadrature import ModelProfile, invert_v, profile_v, sin_power_integral
