import random
from fractions import Fraction

import pytest

from barrierflow.errors import InstanceError, RoundCapExceeded
from barrierflow.extension import (
    IMBALANCED,
    PERFECT,
    detect_balance,
    minimal_clear_region,
    report_json,
    run_extension,
    sigma_map,
    verify_partition,
)
from barrierflow.flow import build_dissipative_map
from barrierflow.intervals import IntervalSet
from barrierflow.numeric import Coord
from barrierflow.surface import glued_reversed_l_surfaces, l_surface, square_torus, two_square_torus

from instances import GOLDEN, INV_SQRT2, random_instance
from oracles import fixpoint_recurrent, float_orbit


def test_two_square_torus_splits_evenly():
    inst = two_square_torus(INV_SQRT2)
    res, trace = run_extension(inst)
    assert res.recurrent.area() == 1 and res.transient.area() == 1
    assert res.case_flag == PERFECT
    assert res.recurrent.trace == fixpoint_recurrent(inst)


def test_l_surface_quarter_barrier():
    inst = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))
    res, trace = run_extension(inst)
    assert res.recurrent.area() == 2 and res.transient.area() == 1
    assert res.case_flag == PERFECT
    assert res.recurrent.trace == fixpoint_recurrent(inst)


def test_l_surface_wide_barrier_is_imbalanced():
    inst = l_surface(INV_SQRT2, ((0, Fraction(4, 5)),))
    res, trace = run_extension(inst)
    assert res.case_flag == IMBALANCED
    assert res.rounds == 2
    assert res.recurrent.area() == 1
    assert trace.special_sums == [2, 2]
    assert trace.horizontal_lengths == [0, 3]
    assert res.recurrent.trace == fixpoint_recurrent(inst)
    flag, overlap = detect_balance(inst)
    assert flag == IMBALANCED and overlap > 0


def test_empty_barrier_keeps_everything():
    inst = square_torus(3, GOLDEN)
    res, _ = run_extension(inst)
    assert res.recurrent.area() == 3 and res.rounds == 0


def test_glued_surfaces_agree_with_fixpoint():
    inst = glued_reversed_l_surfaces(INV_SQRT2, Fraction(4, 5))
    res, _ = run_extension(inst)
    assert res.recurrent.trace == fixpoint_recurrent(inst)
    assert res.recurrent.area() + res.transient.area() == 6


@pytest.mark.parametrize("seed", range(12))
def test_random_partition_matches_fixpoint_and_shrinking(seed):
    inst = random_instance(seed)
    res, trace = run_extension(inst)
    assert res.recurrent.trace == fixpoint_recurrent(inst)
    assert all(verify_partition(inst, res).values())
    assert minimal_clear_region(inst) == res.recurrent
    A = res.A_sequence
    for prev, nxt in zip(A, A[1:]):
        assert nxt.issubset(prev) and nxt.measure() < prev.measure()


def test_seeding_with_the_limit_is_idempotent():
    inst = l_surface(INV_SQRT2, ((0, Fraction(4, 5)),))
    res, _ = run_extension(inst)
    again, trace = run_extension(inst, seed=res.A_limit)
    assert again.rounds == 0 and not trace.rounds
    assert again.recurrent == res.recurrent


def test_seed_must_lie_in_target():
    inst = two_square_torus(INV_SQRT2)
    bad = IntervalSet([(Coord.of(Fraction(1, 2), INV_SQRT2), Coord.of(Fraction(3, 2), INV_SQRT2))])
    with pytest.raises(ValueError):
        run_extension(inst, seed=bad)


def test_round_cap_on_non_terminating_instance():
    inst = random_instance(62, aligned=False)
    with pytest.raises(RoundCapExceeded):
        run_extension(inst, round_cap=20)


def test_non_aligned_area_need_not_be_integer():
    inst = random_instance(61, aligned=False)
    res, _ = run_extension(inst, round_cap=200)
    checks = verify_partition(inst, res)
    assert "recurrent_area_integer" not in checks and all(checks.values())
    assert res.recurrent.trace == fixpoint_recurrent(inst)


def test_sigma_map_matches_float_orbit():
    inst = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))
    I = (Fraction(3, 10), Fraction(31, 100))
    stable, clear, sigma = sigma_map(inst, I, 3)
    assert stable
    for i, target in enumerate(sigma):
        orbit = float_orbit(inst, i, 0.305, 3)
        assert orbit[-1][0] == target


def test_sigma_map_unstable_interval():
    inst = l_surface(INV_SQRT2, ((0, Fraction(1, 4)),))
    stable, clear, sigma = sigma_map(inst, (Fraction(1, 10), Fraction(9, 10)), 1)
    assert not stable and sigma is None
    with pytest.raises(ValueError):
        sigma_map(inst, (Fraction(1, 2), Fraction(1, 4)), 1)


def test_clear_interval_definition():
    # clear for k means no multiple d*alpha, 1 <= d <= k, lies within |I| of an integer
    inst = two_square_torus(INV_SQRT2)
    _, clear, _ = sigma_map(inst, (Fraction(0), Fraction(1, 100)), 5)
    a = float(INV_SQRT2)
    expected = all(abs(d * a - round(d * a)) >= 0.01 for d in range(1, 6))
    assert clear == expected


def test_shrinking_requires_alignment():
    with pytest.raises(InstanceError):
        minimal_clear_region(random_instance(61, aligned=False))


def test_shrinking_trace_grows_k():
    inst = l_surface(INV_SQRT2, ((0, Fraction(4, 5)),))
    region, history = minimal_clear_region(inst, return_trace=True)
    ks = [h["k"] for h in history]
    assert ks == sorted(ks)
    assert region.area() == 1


def test_recurrent_set_is_invariant_and_transient_drains():
    inst = l_surface(GOLDEN, ((Fraction(1, 10), Fraction(2, 5)),))
    res, _ = run_extension(inst)
    f = build_dissipative_map(inst)
    assert f.image(res.recurrent.trace) == res.recurrent.trace
    rng = random.Random(7)
    W = [(float(lo), float(hi)) for lo, hi in res.transient.trace]
    R = [(float(lo), float(hi)) for lo, hi in res.recurrent.trace]
    for _ in range(50):
        lo, hi = rng.choice(W)
        x = lo + rng.random() * (hi - lo)
        sq, y = float_orbit(inst, int(x), x - int(x), 400)[-1]
        assert any(a <= sq + y < b for a, b in R)


def test_report_json_fields():
    inst = l_surface(INV_SQRT2, ((0, Fraction(4, 5)),))
    res, trace = run_extension(inst)
    rep = report_json(inst, res, trace)
    assert rep["case"] == IMBALANCED
    assert rep["area_R"] == {"rat": "1", "mult": 0, "float": 1.0}
    assert rep["S_sequence"] == [2, 2]
    assert len(rep["A_lengths"]) == rep["rounds"] + 1
