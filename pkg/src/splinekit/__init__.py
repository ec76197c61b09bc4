"""B-spline modeling kernel built around unclamped-uniform control polygons.

The float (unclamped uniform) format is the stable working representation:
conversions to clamped/Bezier form subdivide only, while the reverse
direction extrapolates and amplifies perturbations.  On top of the
evaluation core sit curvature metrics (evolute deviation, discrete polygon
curvature, level-n curvature, shape signatures), generators for
monotone-curvature polygons, endpoint positioning, and composite-curve
joins.
"""

from .convert import (
    ConversionReport,
    extract_bezier_segments,
    insert_knot,
    to_clamped,
    to_float,
)
from .errors import (
    CurvatureSingularityError,
    DomainError,
    NoExactFloatFormError,
    RegularityError,
    SplinekitError,
)
from .evaluate import (
    CurvatureProfile,
    FrenetData,
    de_boor_point,
    derivative_curve,
    derivatives,
    evolute_point,
    frenet,
    max_evolute_deviation,
    profile,
)
from .generators import (
    CURVE_REGISTRY,
    AnalyticCurve,
    MineurFarinParams,
    SamplingSpec,
    analytic_circle,
    bezier_arc_polygon,
    conical_spiral,
    mineur_farin_polygon,
    mineur_farin_vertices,
    sample_analytic_to_polygon,
)
from .geometry import (
    FORMAT_CLAMPED,
    FORMAT_FLOAT,
    BSplineCurve,
    ControlPolygon,
    curve_of,
    load_polygon,
    make_clamped_polygon,
    make_float_polygon,
    polygon_from_dict,
    polygon_of,
    polygon_to_dict,
    regular_polygon_vertices,
    save_polygon,
    uniform_float_knots,
)
from .metrics import (
    DiscreteGeometry,
    HarmonicityReport,
    HarmonicitySpec,
    SampledFunction,
    ShapeSignature,
    SignatureEvent,
    discrete_geometry,
    graph_curvature,
    harmonicity_report,
    level_curvature,
    monotone_runs,
    shape_equivalent,
    shape_signature,
)
from .positioning import (
    EndMismatch,
    EndTarget,
    PositioningReport,
    apply_end_correction,
    default_bridge,
    join_float_polygons,
    junction_smoothness_check,
    measure_end_mismatch,
    position_endpoints,
)

__version__ = "0.1.0"
