"""Invariants over randomly drawn instances."""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from barrierflow.extension import run_extension
from barrierflow.flow import build_dissipative_map, build_geodesic_map, first_return_map, kac_check
from barrierflow.intervals import IntervalSet
from barrierflow.numeric import Coord
from barrierflow.regions import RegionSet
from barrierflow.surface import parse_instance, serialize_instance

from instances import random_instance

slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(0, 10 ** 6)


@slow
@given(seeds)
def test_partition_is_exact_cover_with_invariant_recurrent_part(seed):
    inst = random_instance(seed, max_squares=5)
    res, trace = run_extension(inst)
    whole = RegionSet.whole(inst.s, inst.alpha)
    assert (res.recurrent | res.transient) == whole
    assert not (res.recurrent & res.transient)
    f = build_dissipative_map(inst)
    assert f.image(res.recurrent.trace) == res.recurrent.trace
    area = Coord.of(res.recurrent.area(), inst.alpha)
    assert area.mult == 0 and area.rat.denominator == 1
    assert 1 <= area.rat <= inst.s - 1 or inst.barrier_positions().measure() == 0


@slow
@given(seeds)
def test_transient_part_never_returns(seed):
    # the image of W minus W lands in R, and R is never mapped back into W
    inst = random_instance(seed, max_squares=5)
    res, _ = run_extension(inst)
    f = build_dissipative_map(inst)
    assert not (f.image(res.recurrent.trace) & res.transient.trace)


@slow
@given(seeds)
def test_dissipative_image_loses_barrier_length(seed):
    inst = random_instance(seed, aligned=seed % 2 == 0)
    f = build_dissipative_map(inst)
    whole = IntervalSet([(Coord.of(0, inst.alpha), Coord.of(inst.s, inst.alpha))])
    assert whole.measure() - f.image(whole).measure() == inst.barrier_positions().measure()


@slow
@given(seeds)
def test_kac_total_equals_surface_area(seed):
    # every crossing of the section returns, so return-time mass is the full area
    inst = random_instance(seed)
    g = build_geodesic_map(inst.surface, inst.alpha)
    S = inst.barrier_positions() | inst.target_positions()
    assert kac_check(first_return_map(g, S)) == inst.s


@settings(max_examples=40, deadline=None)
@given(seeds, st.booleans())
def test_serialization_round_trip(seed, aligned):
    inst = random_instance(seed, aligned=aligned)
    text = serialize_instance(inst)
    assert serialize_instance(parse_instance(text)) == text


@slow
@given(seeds, st.integers(0, 7))
def test_images_are_nested(seed, j):
    inst = random_instance(seed, max_squares=4)
    f = build_dissipative_map(inst)
    Y = IntervalSet([(Coord.of(0, inst.alpha), Coord.of(inst.s, inst.alpha))])
    prev = Y
    for _ in range(j):
        Y = f.image(Y)
        assert Y.issubset(prev)
        prev = Y
    assert Y.measure() >= Fraction(0)
