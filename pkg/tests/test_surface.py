import json
from fractions import Fraction
from pathlib import Path

import pytest

from barrierflow.errors import (
    DenominatorMismatch,
    DisconnectedSurface,
    InstanceError,
    LengthMismatch,
    NonRationalEndpoints,
    NotAPermutation,
    NotIrrational,
    SchemaError,
    StreetMismatch,
)
from barrierflow.extension import run_extension
from barrierflow.surface import (
    EdgeSet,
    Surface,
    SystemInstance,
    glued_reversed_l_surfaces,
    l_surface,
    parse_instance,
    rescale_by,
    serialize_instance,
    square_torus,
    two_square_torus,
    validate,
)
from barrierflow.intervals import IntervalSet
from barrierflow.numeric import Coord

from instances import INV_SQRT2

CONFIGS = sorted((Path(__file__).parent.parent / "configs").glob("*.json"))


def _base():
    return json.loads(serialize_instance(l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))))


def test_config_corpus_round_trips():
    assert len(CONFIGS) >= 10
    for path in CONFIGS:
        text = path.read_text()
        inst = parse_instance(text)
        validate(inst)
        assert serialize_instance(parse_instance(serialize_instance(inst))) == serialize_instance(inst)
        assert json.loads(serialize_instance(inst)) == json.loads(text)


def test_streets_of_l_surface():
    surf = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),)).surface
    assert sorted(map(sorted, surf.horizontal_streets())) == [[0, 1], [2]]
    assert sorted(map(sorted, surf.vertical_streets())) == [[0, 2], [1]]
    assert surf.left == (1, 0, 2)
    assert surf.bottom == (2, 1, 0)


def test_not_a_permutation():
    with pytest.raises(NotAPermutation):
        Surface([0, 0], [0, 1]).check()


def test_disconnected():
    with pytest.raises(DisconnectedSurface):
        Surface([0, 1], [0, 1]).check()


def test_target_on_other_street():
    inst = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))
    a = IntervalSet([(Coord.of(0, INV_SQRT2), Coord.of(Fraction(1, 4), INV_SQRT2))])
    moved = inst.with_target((EdgeSet(2, a),))
    with pytest.raises(StreetMismatch):
        validate(moved)


def test_length_mismatch():
    d = _base()
    d["target"]["intervals"] = [["0", "1/3"]]
    with pytest.raises(LengthMismatch):
        validate(parse_instance(d))


def test_overlapping_barrier_and_target():
    inst = square_torus(2, INV_SQRT2, (1, ((0, Fraction(1, 2)),)), (1, ((Fraction(1, 4), Fraction(3, 4)),)))
    with pytest.raises(InstanceError):
        validate(inst)


def test_validation_report():
    rep = validate(l_surface(INV_SQRT2, ((0, Fraction(1, 4)),)))
    assert rep.aligned and rep.rational_endpoints
    assert rep.barrier_streets == rep.target_streets
    d = _base()
    d["target"]["intervals"] = [["1/2", "3/4"]]
    assert not validate(parse_instance(d)).aligned
    json.dumps(rep.to_json())


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.pop("squares"), "squares"),
        (lambda d: d.__setitem__("right", [1, 0]), "right"),
        (lambda d: d["barrier"].__setitem__("square", 7), "barrier.square"),
        (lambda d: d["barrier"]["intervals"][0].__setitem__(1, "abc"), "barrier.intervals[0][1]"),
        (lambda d: d["barrier"].__setitem__("intervals", [["1/2", "1/4"]]), "barrier.intervals[0]"),
        (lambda d: d["barrier"].__setitem__("intervals", [["0", "1/2"], ["1/4", "3/4"]]), "barrier.intervals"),
        (lambda d: d.__setitem__("alpha", {"surd": {"p": 1, "q": 1, "d": 2, "r": 0}}), "alpha"),
        (lambda d: d["target"]["intervals"][0].__setitem__(0, {"rat": "0", "mult": 1.5}), "target.intervals[0][0]"),
    ],
)
def test_schema_errors_name_the_field(mutate, path):
    d = _base()
    mutate(d)
    with pytest.raises(SchemaError) as info:
        parse_instance(d)
    assert info.value.path == path


def test_rational_slope_rejected():
    d = _base()
    d["alpha"] = {"surd": {"p": 1, "q": 1, "d": 4, "r": 1}}
    with pytest.raises(NotIrrational):
        parse_instance(d)


def test_schema_error_reports_line():
    with pytest.raises(SchemaError) as info:
        parse_instance('{\n  "squares": 2,\n  oops\n}')
    assert info.value.line == 3


def test_endpoint_forms():
    d = _base()
    d["barrier"]["intervals"] = [[0, {"rat": "1/4"}]]
    d["target"] = [{"square": 0, "intervals": [["0", "1/4"]]}]
    inst = parse_instance(d)
    assert inst.barrier_positions() == IntervalSet([(Coord.of(1, INV_SQRT2), Coord.of(Fraction(5, 4), INV_SQRT2))])


def test_irrational_endpoint_round_trip():
    d = _base()
    d["barrier"]["intervals"] = [[{"rat": "0", "mult": 0}, {"rat": "1", "mult": -1}]]
    d["target"]["intervals"] = [[{"rat": "0", "mult": 0}, {"rat": "1", "mult": -1}]]
    inst = parse_instance(d)
    assert not validate(inst).rational_endpoints
    assert parse_instance(serialize_instance(inst)) == inst


def test_rescale_geometry_and_partition():
    inst = two_square_torus(INV_SQRT2, ((0, Fraction(1, 2)),))
    big = rescale_by(inst, 2)
    validate(big)
    assert big.s == 8
    assert big.barrier_positions().measure() == 1
    r_small, _ = run_extension(inst)
    r_big, _ = run_extension(big)
    # magnification by 2 multiplies areas by 4
    assert r_big.recurrent.area() == 4 * r_small.recurrent.area()
    assert r_big.transient.area() == 4 * r_small.transient.area()


def test_rescale_errors():
    inst = two_square_torus(INV_SQRT2, ((0, Fraction(1, 4)),))
    with pytest.raises(DenominatorMismatch):
        rescale_by(inst, 2)
    irr = square_torus(2, INV_SQRT2, (1, ((0, Coord._mk(Fraction(1), -1, INV_SQRT2)),)),
                       (0, ((0, Coord._mk(Fraction(1), -1, INV_SQRT2)),)))
    with pytest.raises(NonRationalEndpoints):
        rescale_by(irr, 4)


def test_glued_surfaces_structure():
    inst = glued_reversed_l_surfaces(INV_SQRT2, Fraction(4, 5))
    rep = validate(inst)
    assert inst.s == 6
    assert len(inst.barrier) == 2 and len(inst.target) == 2
    assert rep.aligned
    assert sorted(map(sorted, inst.surface.horizontal_streets())) == [[0, 1], [2], [3, 4], [5]]
    assert isinstance(inst, SystemInstance)
