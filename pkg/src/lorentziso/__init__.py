"""Lorentzian isoperimetric functionals for graphs over hyperbolic domains.

Hypersurfaces are graphs S_f = {f(x) x : x in Omega} over a domain Omega of the
hyperboloid in Minkowski space.  The package evaluates their cone volume,
area and distance to the origin, the isoperimetric deficits built from them,
Fraenkel-type asymmetries, and the stability estimates that relate the two.
"""
from .errors import (
    AdmissibilityError,
    DegenerateError,
    DomainError,
    EmptyDomainError,
    InvalidInputError,
    LorentzIsoError,
    NumericError,
    PreconditionError,
    UnsupportedDomainError,
)
from .functionals import (
    DeficitReport,
    SplitChain,
    StabilityGaps,
    be_proof_routes,
    be_subset_check,
    deficit_relation_check,
    deficits,
    excess_asymmetry_check,
    exhaustion_convergence_check,
    fraenkel_asymmetry,
    fraenkel_radius,
    median_split,
    sigma,
    stability_check,
    sym_diff_volume,
    tilde_asymmetry,
)
from .hypersurface import (
    Atoms,
    CurveSample,
    DomainMesh,
    GraphHypersurface,
    RadialProfile,
    area,
    check_achronal,
    check_achronal_paths,
    cone_volume,
    dist_origin,
    exhaustion_sequence,
    restrict,
    timelike_connectable,
)
from .kernels import BACKEND
from .median import l1_residual, weighted_median
from .minkowski import (
    CausalClass,
    HyperbolicPoint,
    MinkowskiVector,
    ball_measure,
    classify,
    hyperbolic_dist,
    lorentz_norm,
    mink_inner,
    nu_weight,
    radial_project,
)
from .quadrature import gauss_legendre_composite
from .scalar import (
    L_function,
    L_tilde,
    bernoulli_l2_check,
    counterexample_family,
    holder_stability_distance,
    improved_constant,
    jensen_gap,
    jensen_series_coefficients,
    minkowski_gap,
)
from .sharpness import (
    BumpFunction,
    SharpnessLadder,
    analytic_expansion,
    build_perturbation,
    default_bump,
    mean_zero_projection,
    run_ladder,
)
from .simplex import (
    SpacelikeSimplex,
    cone_formula_check,
    cone_volume_simplex,
    containment_check,
    induction_step_check,
    lorentzian_height,
    projected_measure,
    simplex_area,
)

__version__ = "0.1.0"
