"""Perception-aware probabilistic roadmap planner for a mobile camera robot.

A 5-DoF robot (planar base plus a pan-tilt camera) plans collision-free
paths that keep a weighted set of scene objects well observed. Roadmap
nodes are sampled toward low perception cost, edges carry motion and
perception channels, and an A* search with a consistent hop heuristic
trades the two off under a single weight.
"""

from .baselines import (
    BASELINE_KINDS,
    CLOSEST,
    CLOSEST_LOW_DOF,
    LOWEST_COST,
    METHODS,
    MOPS,
    UNIFORM,
    MethodSetup,
    baseline_sample,
    closest_object_target,
    lowest_cost_target,
    make_method,
)
from .bench import (
    FrameRecord,
    MetricsRow,
    PathEvaluation,
    ScenarioSpec,
    SweepRow,
    evaluate_path,
    generate_problems,
    run_benchmark,
    run_scaling_sweep,
    write_metrics_csv,
    write_metrics_json,
    write_sweep_csv,
    write_timings_csv,
)
from .costmap import (
    MlpCostmap,
    TrainingConfig,
    TrainingReport,
    encode_features,
    load_model,
    train_costmap,
)
from .errors import (
    FileFormatError,
    InvalidConfigurationError,
    NoPathError,
    PerceptionError,
    PlanningError,
    RoadmapError,
    SamplingError,
    SceneError,
)
from .geometry import (
    Box,
    CameraPose,
    Configuration,
    Cylinder,
    RobotModel,
    config_distance,
    config_in_collision,
    forward_kinematics,
    in_fov,
    lateral_residual,
    occluded,
    wrap_angle,
)
from .perception import (
    OracleCostmap,
    OracleParams,
    PerceptionSample,
    aggregate_cost,
    batch_cost,
    generate_dataset,
    load_samples,
    oracle_score,
    sample_camera_pose,
    save_samples,
    score_to_label,
)
from .reeds_shepp import RSPath, path_between, sample_pose, solve
from .roadmap import (
    Edge,
    GoalSpec,
    NormBounds,
    PlannerParams,
    QueryView,
    Roadmap,
    attach_query,
    build_roadmap,
    edge_perception_cost,
    knn_indices,
    load_roadmap,
    roadmap_hash,
    save_roadmap,
)
from .sampling import (
    LocalSamplingParams,
    ProjectionParams,
    ProjectionResult,
    local_sample,
    perception_aware_sample,
    project_to_centroid,
    projection_gradient,
    projection_objective,
    sample_free,
    select_node,
)
from .scenegraph import (
    CentroidSet,
    ObjectNode,
    SceneGraph,
    extract_centroids,
    load_scene,
    save_scene,
)
from .scenes import make_gallery_scene, make_office_scene, make_sweep_scene
from .search import (
    EUCLIDEAN,
    HOP,
    ZERO,
    HopField,
    PathResult,
    astar,
    compute_hop_field,
    load_path_waypoints,
    plan,
    save_path,
)
from .steering import (
    REEDS_SHEPP,
    STRAIGHT,
    LocalMotion,
    SteeringSpec,
    discretize,
    motion_collision_free,
    steer,
)

__version__ = "0.1.0"
