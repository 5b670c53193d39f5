import math

import pytest

import sgsolver as sg


def test_gasket_counts():
    for m in range(4):
        g = sg.build_gasket(points=3, level=m)
        assert g.vertex_count == (3 ** (m + 1) + 3) // 2
        assert g.edge_count == 3 ** (m + 1)
        assert g.cell_count == 3**m


def test_weights_sum_to_one():
    g = sg.build_gasket(points=3, level=3)
    assert math.isclose(sum(g.weights), 1.0, rel_tol=0, abs_tol=1e-14)


def test_dimension():
    assert math.isclose(sg.hausdorff_dimension(3), math.log(3) / math.log(2), rel_tol=1e-14)


def test_energy_indicator():
    # unit spike at one midpoint of the level-1 graph
    g = sg.build_gasket(points=3, level=1)
    spike = [0.0] * g.vertex_count
    interior = [v for v in range(g.vertex_count) if not g.is_boundary(v)]
    spike[interior[0]] = 1.0
    assert math.isclose(sg.energy(g, spike, zero_boundary=True), 20.0 / 3.0, rel_tol=1e-14)


def test_harmonic_extension_preserves_energy():
    g = sg.build_gasket(points=3, level=1)
    vals = [float(i * i % 7) for i in range(g.vertex_count)]
    fine, ext = sg.harmonic_extension(g, vals)
    assert fine.level == 2
    e0 = sg.energy(g, vals)
    e1 = sg.energy(fine, ext)
    assert math.isclose(e0, e1, rel_tol=1e-12)


def test_constants():
    c = sg.compute_constants(points=3, q=4.0, s=1.8)
    assert c["c"] == 9.0
    assert math.isclose(c["R"], 1.0 / 81.0, rel_tol=1e-14)
    assert math.isclose(c["barrier"], (1.0 / 81.0) ** 2 / 8.0, rel_tol=1e-12)
    assert 1.5e-3 < c["Lambda"] < 2.0e-3


def test_eval_I_matches_quadratic_part():
    g = sg.build_gasket(points=3, level=1)
    spike = [0.0] * g.vertex_count
    interior = [v for v in range(g.vertex_count) if not g.is_boundary(v)]
    spike[interior[0]] = 1.0
    # lambda = eta = 0 leaves 0.5*energy minus the q-term
    got = sg.eval_I(g, spike, q=4.0)
    assert math.isclose(got, 10.0 / 3.0 - (2.0 / 9.0) / 4.0, rel_tol=1e-13)


@pytest.mark.parametrize("level", [2])
def test_pipeline_smoke(level):
    out = sg.three_solutions(points=3, level=level)
    assert out["status"] in {"ok", "out-of-regime", "falsified", "solver-failure"}
    assert len(out["solutions"]) == 3
    assert out["thresholds"]["c"] == 9.0
