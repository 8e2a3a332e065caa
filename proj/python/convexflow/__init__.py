"""Ricci flow from convex surfaces: smoothing, conformal flow and intrinsic distances."""

import json

from ._convexflow import (
    ConvexBody,
    Error,
    FlowState,
    FlowTrace,
    IntrinsicMesh,
    RadialField,
    SphereMesh,
    SupportField,
    TraceRow,
    adaptive_run,
    area_law_check,
    constant_radial,
    convex_hull,
    dijkstra,
    ellipsoid_radial,
    embed,
    fast_march,
    hausdorff_distance,
    heat_mollify,
    icosphere,
    init_flow,
    make_panel_pairs,
    margin_repair,
    nearest_direction,
    project_support,
    sample_radial,
    unfold_polyhedron,
)
from ._convexflow import run_study as _run_study


def run_study(body, config=""):
    """Run the verification study on `body` and return the parsed report."""
    return json.loads(_run_study(body, config))


__all__ = [name for name in dir() if not name.startswith("_")]
