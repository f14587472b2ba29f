from fractions import Fraction

import pytest

from barrierflow.ergodic import (
    analyse_recurrent_set,
    critical_decomposition,
    detect_orbit_depth,
    endpoint_decomposition,
    induced_on_region,
    overlapping_graph,
)
from barrierflow.errors import EndpointsNotInOrbit
from barrierflow.extension import run_extension
from barrierflow.flow import build_dissipative_map
from barrierflow.intervals import IntervalSet
from barrierflow.numeric import Coord
from barrierflow.surface import glued_reversed_l_surfaces, l_surface, square_torus

from instances import GOLDEN, INV_SQRT2

# critical cells of the L-surface in section order, and which cells the step carries onto which
L_ORDER = ["L11", "L12", "L13", "L14", "L41", "L42", "L21", "L22", "L23", "L3"]
L_IMAGES = {
    ("L13",): ("L21",), ("L23",): ("L11",), ("L14",): ("L22", "L23"), ("L41",): ("L12", "L13"),
    ("L3",): ("L41",), ("L42",): ("L14",), ("L11", "L12"): ("L42",), ("L21", "L22"): ("L3",),
}
L_EDGES = {
    tuple(sorted((L_ORDER.index(u), L_ORDER.index(v))))
    for src, dst in L_IMAGES.items() for u in src for v in dst
}


@pytest.fixture(scope="module")
def l_quarter():
    inst = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))
    res, _ = run_extension(inst)
    return inst, res


def test_l_surface_graph_is_connected(l_quarter):
    inst, res = l_quarter
    out = analyse_recurrent_set(inst, res.recurrent)
    assert out["minimal"] is True and out["partition"] == "critical"
    g = out["graph"]
    assert len(g.vertices) == 10
    assert g.edges == L_EDGES
    assert g.is_connected()


def test_l_surface_map_projects_to_rotation_covering_twice(l_quarter):
    # mod one, each piece moves by alpha and the section covers the circle twice
    inst, res = l_quarter
    ind = induced_on_region(inst, res.recurrent)
    a = Coord._mk(Fraction(0), 1, INV_SQRT2)
    for p in ind.pieces:
        d = p.shift - a
        assert d.mult == 0 and d.rat.denominator == 1
        assert p.steps == 1
    pts = [Fraction(k, 97) for k in range(97)]
    for x in pts:
        hits = sum(1 for lo, hi in res.recurrent.trace for i in range(inst.s) if lo <= x + i < hi)
        assert hits == 2


def _segments():
    # the recurrent part of the three left edges, cut where the step's images break
    F = INV_SQRT2
    a = Coord._mk(Fraction(0), 1, F)
    c = lambda x: Coord.of(x, F)
    iv = lambda lo, hi: IntervalSet([(c(lo), c(hi))])
    return {
        "L11": iv(0, 3 * a - 2), "L12": iv(3 * a - 2, 1 - a), "L13": iv(1 - a, 2 * a - 1), "L14": iv(2 * a - 1, a),
        "L21": iv(2 + 0, 2 + 3 * a - 2), "L22": iv(2 + 3 * a - 2, 2 + 1 - a), "L23": iv(2 + 1 - a, 2 + 2 * a - 1),
        "L3": iv(2 + a, 3),
        "L41": iv(1 + 2 * a - 1, 1 + a), "L42": iv(1 + a, 2),
    }


def test_l_surface_segment_images(l_quarter):
    inst, res = l_quarter
    L = _segments()
    union = IntervalSet()
    for seg in L.values():
        union = union | seg
    assert union == res.recurrent.trace
    f = build_dissipative_map(inst)
    join = lambda names: IntervalSet([iv for n in names for iv in L[n]])
    for src, dst in L_IMAGES.items():
        assert f.image(join(src)) == join(dst)
    cells = critical_decomposition(induced_on_region(inst, res.recurrent))
    assert [IntervalSet([c]) for c in cells] == [L[n] for n in L_ORDER]


def test_critical_cells_are_cut_at_orbit_points(l_quarter):
    inst, res = l_quarter
    ind = induced_on_region(inst, res.recurrent)
    l0 = detect_orbit_depth(ind)
    cells = critical_decomposition(ind)
    a = float(INV_SQRT2)
    orbit = {round((j * a) % 1, 12) for j in range(-1, l0 + 1)} | {0.0}
    for lo, hi in cells:
        for p in orbit:
            for i in range(inst.s):
                assert not float(lo) + 1e-12 < p + i < float(hi) - 1e-12
    assert sum((hi - lo for lo, hi in cells), Coord.of(0, INV_SQRT2)) == res.recurrent.area()


def test_explicit_depth_too_small_raises(l_quarter):
    inst, res = l_quarter
    ind = induced_on_region(inst, res.recurrent)
    if detect_orbit_depth(ind) > 0:
        with pytest.raises(EndpointsNotInOrbit):
            critical_decomposition(ind, ell0=0)


def test_glued_surfaces_are_not_minimal():
    inst = glued_reversed_l_surfaces(INV_SQRT2, Fraction(4, 5))
    res, _ = run_extension(inst)
    out = analyse_recurrent_set(inst, res.recurrent)
    assert out["minimal"] is False
    assert out["components"] >= 2
    # each component is an invariant union of positive measure
    comp = out["graph"].components()[0]
    U = IntervalSet([out["graph"].vertices[i] for i in comp])
    assert 0 < U.measure() < res.recurrent.area()
    assert build_dissipative_map(inst).image(U) == U


def test_rational_endpoints_fall_back():
    inst = l_surface(GOLDEN, ((Fraction(1, 10), Fraction(2, 5)),))
    res, _ = run_extension(inst)
    ind = induced_on_region(inst, res.recurrent)
    with pytest.raises(EndpointsNotInOrbit):
        detect_orbit_depth(ind)
    out = analyse_recurrent_set(inst, res.recurrent)
    assert out["partition"] == "endpoints"
    assert out["minimal"] in (None, False)
    assert len(endpoint_decomposition(ind)) == out["vertices"]


def test_whole_torus_graph():
    inst = square_torus(2, GOLDEN)
    res, _ = run_extension(inst)
    g = overlapping_graph(induced_on_region(inst, res.recurrent))
    assert g.is_connected()


def test_dot_output(l_quarter):
    inst, res = l_quarter
    g = analyse_recurrent_set(inst, res.recurrent)["graph"]
    dot = g.to_dot()
    assert dot.startswith("graph overlapping {")
    assert dot.count(" -- ") == len(L_EDGES)
    assert dot == g.to_dot()
