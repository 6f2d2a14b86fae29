"""Exact laboratory for the outer zone of a convex body in a hyperplane arrangement."""
from .arrangement import (
    Arrangement,
    Face,
    Hyperplane,
    build_arrangement,
    enumerate_faces_oracle,
    face_counts,
    is_subface,
    restrict_to_hyperplane,
)
from .body import (
    ConvexBody,
    FaceClass,
    classify_face,
    classify_faces,
    general_position_check,
    intersect_body_with_flat,
)
from .exact import LinearConstraint, Relation, feasible, solve_affine_system
from .instances import GenConfig, Instance, generate, perturb, random_body, random_hyperplanes
from .verify import CheckResult, Status, run_checks
from .zone import ZoneReport, analyze, count_borders, count_crossing_faces, zone_cells, zone_report

__version__ = "0.1.0"
