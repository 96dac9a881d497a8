"""Numerical laboratory for radial limits and boundary uniqueness of bounded analytic functions."""

from .boundary_sets import (
    ArcUnion,
    AtomList,
    AtomMeasure,
    CantorMeasure,
    CantorSystem,
    cantor_arcs,
    cantor_cdf,
    complement_samples,
    measure_upper_bound,
    test_points,
)
from .complex_core import (
    INFINITY,
    DiskPoint,
    LeftHalfPlaneValue,
    UnitCirclePoint,
    herglotz_kernel,
    left_log,
    mobius_lhp_to_disk,
    unwrap_argument,
)
from .functions import (
    Blaschke,
    MobiusComposed,
    Product,
    SingularInner,
    Transformed,
    analytic_log,
    blaschke_condition,
    blaschke_eval,
    corollary1_pipeline,
    lusin_function,
    psi_compose,
    singular_inner_eval,
    transform_g,
)
from .radial import (
    RadialTrace,
    TraceVerdict,
    ae_statistics,
    classify,
    oscillation_diameter,
    partial_product_l2_gap,
    radial_sample,
)

__version__ = "0.1.0"
