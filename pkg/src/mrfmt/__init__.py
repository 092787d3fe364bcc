"""Multi-resolution Fast Marching Tree motion planning.

Planners: FMT* (single resolution), MRFMT* (selective densification over
nested sample layers), and BMRFMT* (bidirectional). The bench subpackage
adds scenarios, seeded sweeps, CSV metrics, and SVG rendering.
"""

from .cspace import Config, SpaceSpec, Topology
from .errors import QueryInCollisionError, RenderUnsupportedError, SamplingStarvedError
from .multigraph import (
    EdgeKind,
    LayerSchedule,
    LayeredSampleSet,
    Neighbor,
    NeighborSpec,
    NodeId,
    build,
    connection_radius,
    sample_free,
    unit_ball_volume,
)
from .planners import (
    GoalSpec,
    PlanRequest,
    PlanResult,
    PlanStatus,
    SearchTrace,
    SearchTree,
    Stats,
    extract_path,
    plan_bmrfmt,
    plan_fmt,
    plan_mrfmt,
)
from .world import (
    Aabb,
    ConvexPolygon,
    DiscRobot,
    Obstacle,
    OccupancyGrid,
    PlanarChain,
    PointRobot,
    PolygonBody,
    RobotModel,
    WorldModel,
    forward_kinematics,
    motion_free,
)

__version__ = "0.1.0"

__all__ = [
    "Aabb",
    "Config",
    "ConvexPolygon",
    "DiscRobot",
    "EdgeKind",
    "GoalSpec",
    "LayerSchedule",
    "LayeredSampleSet",
    "Neighbor",
    "NeighborSpec",
    "NodeId",
    "Obstacle",
    "OccupancyGrid",
    "PlanRequest",
    "PlanResult",
    "PlanStatus",
    "PlanarChain",
    "PointRobot",
    "PolygonBody",
    "QueryInCollisionError",
    "RenderUnsupportedError",
    "RobotModel",
    "SamplingStarvedError",
    "SearchTrace",
    "SearchTree",
    "SpaceSpec",
    "Stats",
    "Topology",
    "WorldModel",
    "build",
    "connection_radius",
    "extract_path",
    "forward_kinematics",
    "motion_free",
    "plan_bmrfmt",
    "plan_fmt",
    "plan_mrfmt",
    "sample_free",
    "unit_ball_volume",
]
