"""Principal-curvature configurations of generic quadric hypersurfaces."""

from .core import (
    ALL_FAMILIES,
    OffSurfaceError,
    PrincipalData,
    QpcError,
    QuadricSpec,
    R3_FAMILIES,
    R4_FAMILIES,
    SpecError,
    SurfacePoint,
    evaluate,
    principal_data,
    project_to_surface,
    shape_operator,
    surface_point,
    unit_normal,
)
from .charts import (
    ChartCoords,
    ChartDegenerateError,
    ChartRangeError,
    ConfocalFamily,
    FundamentalForms,
    chart_from_point,
    chart_intervals,
    closed_form_curvatures,
    confocal_slice,
    fundamental_forms,
    point_from_chart,
)
from .conformal import ConformalStructure, build_transfer
from .r3 import (
    ConformalRect,
    R3Chart,
    conformal_rect,
    conformal_reparametrization,
    ellipsoid_conformal_map,
    r3_chart_from_point,
    r3_point_from_chart,
    r3_umbilics,
)
from .locus import (
    GraphChart,
    LocusSample,
    PartiallyUmbilicCurve,
    graph_chart_forms,
    locus_torsion_profile,
    partially_umbilic_locus,
    sample_locus,
    torsion_zeros,
)
from .tracer import (
    CensusReport,
    DegenerateDirectionError,
    LeafTrace,
    TraceConfig,
    census_seeds,
    direction_at,
    leaf_census,
    trace_leaf,
)

__version__ = "0.1.0"
