import math

import numpy as np
import pytest

import convexflow as cf


def cube(half=0.5):
    return cf.convex_hull(np.array([[x, y, z] for x in (-half, half) for y in (-half, half) for z in (-half, half)]))


def test_hull_and_unfolding():
    body = cube()
    assert body.vertices.shape == (8, 3)
    assert len(body.facets) == 12
    assert body.inradius == pytest.approx(0.5)
    d = cf.unfold_polyhedron(body, np.array([-0.5, -0.5, -0.5]), np.array([0.5, 0.5, 0.5]))
    assert d == pytest.approx(math.sqrt(5.0))


def test_degenerate_input_raises():
    with pytest.raises(cf.Error, match="DegenerateInput"):
        cf.convex_hull(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]]))


def test_smoothing_shrinks_hausdorff_distance():
    body = cube()
    raw = cf.project_support(body, 24)
    dist = [cf.hausdorff_distance(cf.margin_repair(cf.heat_mollify(raw, eps)), body) for eps in (0.2, 0.1, 0.05)]
    assert dist[0] > dist[1] > dist[2]


def test_round_sphere_flow():
    sphere = cf.icosphere(4)
    state = cf.init_flow(cf.embed(cf.constant_radial(sphere, 1.0), sphere))
    a = cf.nearest_direction(sphere, np.array([1.0, 0, 0]))
    b = cf.nearest_direction(sphere, np.array([-1.0, 0, 0]))
    end, trace = cf.adaptive_run(state, 0.2, pairs=[(a, b)])
    assert end.time == pytest.approx(0.2)
    assert abs(end.mesh.defect_sum - 4 * math.pi) < 1e-9
    assert cf.area_law_check(trace) < 1e-3
    k = np.array(end.mesh.curvature)
    assert np.max(np.abs(k * (1 - 0.4) - 1)) < 0.02
    assert trace.rows[-1].panel[0] == pytest.approx(math.sqrt(0.6) * math.pi, rel=0.02)


def test_fast_marching_bounded_by_graph_distance():
    sphere = cf.icosphere(3)
    mesh = cf.embed(cf.ellipsoid_radial(sphere, np.array([1.0, 1.0, 1.5])), sphere)
    assert np.all(np.array(cf.fast_march(mesh, 0)) <= np.array(cf.dijkstra(mesh, 0)) + 1e-12)


def test_small_study_report():
    report = cf.run_study(cube(), "level = 2\ncompanion_level = -1\nalexandrov_samples = 10\n")
    names = {c["name"] for c in report["checks"]}
    assert {"gauss_bonnet", "area_law", "initial_convergence", "alexandrov_comparison"} <= names
    gb = next(c for c in report["checks"] if c["name"] == "gauss_bonnet")
    assert gb["verdict"] == "pass"
