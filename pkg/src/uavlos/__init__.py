"""Monte-Carlo estimation of UAV-to-ground line-of-sight probability.

Two independent engines estimate P_LoS in ITU-parameterized Manhattan
cities: :mod:`uavlos.sim3d` materializes a full height grid and ray
traces each link, while :mod:`uavlos.simgeom` enumerates only the
street-grid lines a link can cross.  :mod:`uavlos.baselines` holds
closed-form reference models, and :mod:`uavlos.harness` runs seeded
sweeps with Wilson confidence intervals and CSV output.
"""

from .baselines import GridProduct, Sigmoid, StepTable, evaluate, load_model_set
from .citygeom import (
    ENVIRONMENTS,
    GHENT,
    Building,
    BuiltUpParams,
    CityLayout,
    Crossroad,
    LinkGeometry,
    Node,
    Street,
    classify_point,
    derive_layout,
    sample_height,
    sample_heights,
    uav_position_from_angles,
)
from .errors import (
    DegenerateLink,
    IllegalSpec,
    InvalidAngle,
    InvalidParams,
    ParseError,
    UavLosError,
)
from .harness import (
    CompareRow,
    SweepAxis,
    SweepResult,
    SweepSpec,
    compare_engines,
    result_to_csv,
    run_sweep,
    write_csv,
)
from .sim3d import (
    BuildingTop,
    City,
    CrossroadCenter,
    FixedPoint,
    RandomOverCity,
    StreetCenter,
    check_los_dense,
    check_los_edges,
    generate_city,
    load_city,
    place_uav,
    place_users_circle,
    save_city,
)
from .simgeom import GeomScenario, candidate_ops, estimate_plos, sample_user, simulate_link
from .stats import PLosEstimate, wilson_interval

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # parameters and geometry
    "BuiltUpParams",
    "CityLayout",
    "ENVIRONMENTS",
    "GHENT",
    "Node",
    "LinkGeometry",
    "Building",
    "Street",
    "Crossroad",
    "derive_layout",
    "classify_point",
    "sample_height",
    "sample_heights",
    "uav_position_from_angles",
    # 3D engine
    "City",
    "generate_city",
    "check_los_edges",
    "check_los_dense",
    "place_uav",
    "place_users_circle",
    "FixedPoint",
    "RandomOverCity",
    "BuildingTop",
    "CrossroadCenter",
    "StreetCenter",
    "save_city",
    "load_city",
    # geometry engine
    "GeomScenario",
    "sample_user",
    "candidate_ops",
    "simulate_link",
    "estimate_plos",
    # baselines
    "GridProduct",
    "Sigmoid",
    "StepTable",
    "evaluate",
    "load_model_set",
    # harness and statistics
    "SweepAxis",
    "SweepSpec",
    "SweepResult",
    "CompareRow",
    "run_sweep",
    "compare_engines",
    "result_to_csv",
    "write_csv",
    "PLosEstimate",
    "wilson_interval",
    # errors
    "UavLosError",
    "InvalidParams",
    "InvalidAngle",
    "DegenerateLink",
    "IllegalSpec",
    "ParseError",
]
