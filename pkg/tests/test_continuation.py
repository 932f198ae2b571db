"""Sweeps, fold location, and quasi-static hysteresis ramps."""

import math

import numpy as np
import pytest

from twomode.continuation import (HysteresisResult, SweepSpec, Trace,
                                  axis_grid, clamped_hysteresis_sweep,
                                  hysteresis_sweep, locate_folds, sweep_1d)
from twomode.errors import NoStableBranchError, ParameterError
from twomode.params import DrivePoint, replace_params
from twomode.stability import solve_and_classify
from twomode.steady import SolverOptions, Verdict, steady_branches

from test_steady import _drive

# Frozen loop device: the preset cavity with the mechanical quality factor
# lowered to 5 so the whole upper branch is dynamically stable, pump
# detuned to twice the bistability threshold, readout off or weak.
LOOP_FOLDS = (1.3004470633603326e-12, 2.835530696694626e-12)
LOOP_JUMP_UP = 2.835531542520485e-12
LOOP_JUMP_DOWN = 1.3004472092537456e-12
BLUE_FOLDS = (1.2886040169400154e-12, 2.758441553818781e-12)
BLUE_JUMP_UP = 2.7584425585956857e-12
BLUE_JUMP_DOWN = 1.288603744079165e-12


@pytest.fixture(scope="module")
def heavy():
    return replace_params(preset_module(), q_m=5.0)


def preset_module():
    from twomode.params import preset_hill_params
    return preset_hill_params()


def _loop_drive(heavy, delta2_sign=1, power_r=0.0):
    return _drive(heavy, delta1=2.0 * math.sqrt(3.0) * heavy.kappa1,
                  delta2=delta2_sign * heavy.omega_m,
                  power_l=1e-12, power_r=power_r)


def test_spec_validation(preset):
    d = _drive(preset, delta1=0.0, delta2=0.0, power_l=1e-12, power_r=0.0)
    with pytest.raises(ParameterError):
        SweepSpec(axis="power", start=0.0, stop=1.0, drive=d)
    with pytest.raises(ParameterError):
        SweepSpec(axis="power_l", start=0.0, stop=1.0, drive=d, direction="sideways")
    with pytest.raises(ParameterError):
        SweepSpec(axis="power_l", start=0.0, stop=1.0, drive=d, points=1)
    with pytest.raises(ParameterError):
        SweepSpec(axis="power_l", start=1.0, stop=1.0, drive=d)
    with pytest.raises(ParameterError):
        SweepSpec(axis="power_l", start=-1.0, stop=1.0, drive=d)
    with pytest.raises(ParameterError):
        SweepSpec(axis="delta1", start=0.0, stop=math.inf, drive=d)
    SweepSpec(axis="delta1", start=-1.0, stop=1.0, drive=d)


def test_axis_grid_spacing_rules(preset):
    d = _drive(preset, delta1=0.0, delta2=0.0, power_l=1e-12, power_r=0.0)
    wide = SweepSpec(axis="power_l", start=1e-14, stop=1e-10, drive=d, points=41)
    g = axis_grid(wide)
    assert g[0] == 1e-14 and g[-1] == 1e-10
    ratios = g[1:] / g[:-1]
    assert np.all(np.abs(ratios - ratios[0]) <= 1e-12 * ratios[0])
    narrow = SweepSpec(axis="power_l", start=1e-12, stop=5e-12, drive=d, points=11)
    g = axis_grid(narrow)
    diffs = np.diff(g)
    assert np.all(np.abs(diffs - diffs[0]) <= 1e-9 * diffs[0])
    detuning = SweepSpec(axis="delta1", start=-1e9, stop=1e9, drive=d, points=11)
    g = axis_grid(detuning)
    diffs = np.diff(g)
    assert np.all(np.abs(diffs - diffs[0]) <= 1e-9 * abs(diffs[0]))


def test_sweep_records_match_pointwise_solves(preset, options):
    d = _drive(preset, delta1=preset.omega_m, delta2=0.5 * preset.omega_m,
               power_l=1e-12, power_r=2e-12)
    spec = SweepSpec(axis="delta1", start=0.0, stop=2.0 * preset.omega_m,
                     drive=d, points=25)
    res = sweep_1d(preset, spec, options)
    assert len(res.records) == 25
    grid = axis_grid(spec)
    for (v, branches), gv in zip(res.records, grid):
        assert v == float(gv)
        point = d.with_value(preset, "delta1", v)
        again, _ = solve_and_classify(preset, point, options)
        assert [b.q_s for b in branches] == [b.q_s for b in again]
        assert [b.verdict for b in branches] == [b.verdict for b in again]


def test_decoupled_pump_sweep_is_flat(preset, options):
    # g1 = 0: nothing the pump detuning does can reach the mechanics, so
    # the readout photon number must be bit-identical along the sweep
    p0 = replace_params(preset, g1=0.0)
    d = _drive(p0, delta1=0.0, delta2=preset.omega_m,
               power_l=1e-9, power_r=3e-12)
    spec = SweepSpec(axis="delta1", start=-2.0 * preset.omega_m,
                     stop=2.0 * preset.omega_m, drive=d, points=50)
    res = sweep_1d(p0, spec, options)
    assert res.folds == ()
    ref = res.records[0][1]
    assert len(ref) == 1
    for _, branches in res.records:
        assert len(branches) == 1
        assert branches[0].q_s == ref[0].q_s
        assert branches[0].n_p2 == ref[0].n_p2
        assert branches[0].verdict == ref[0].verdict


def test_subthreshold_power_sweep_single_branch(preset, options):
    d = _drive(preset, delta1=preset.omega_m, delta2=0.3 * preset.omega_m,
               power_l=1e-15, power_r=0.0)
    spec = SweepSpec(axis="power_l", start=1e-16, stop=1e-13, drive=d,
                     points=40)
    res = sweep_1d(preset, spec, options)
    assert res.folds == ()
    qs = [branches[0].q_s for _, branches in res.records]
    assert all(len(branches) == 1 for _, branches in res.records)
    # displacement grows monotonically with pump power below threshold
    assert all(a < b for a, b in zip(qs, qs[1:]))


def test_locate_folds_linear_system_is_empty(preset, options):
    p0 = replace_params(preset, g1=0.0, g2=0.0)
    d = _drive(p0, delta1=preset.omega_m, delta2=preset.omega_m,
               power_l=1e-12, power_r=1e-12)
    folds = locate_folds(p0, d, "power_l", 1e-14, 1e-6, options, samples=64)
    assert folds == ()


def test_locate_folds_frozen_loop_device(heavy, options):
    d = _loop_drive(heavy)
    folds = locate_folds(heavy, d, "power_l", 1e-14, 1e-9, options)
    assert len(folds) == 2
    assert folds[0] == pytest.approx(LOOP_FOLDS[0], rel=1e-8)
    assert folds[1] == pytest.approx(LOOP_FOLDS[1], rel=1e-8)
    # counts: one branch outside the fold pair, three inside
    for v, want in ((0.5 * folds[0], 1), (0.5 * (folds[0] + folds[1]), 3),
                    (2.0 * folds[1], 1)):
        point = d.with_value(heavy, "power_l", v)
        assert len(steady_branches(heavy, point, options)) == want


def test_hysteresis_loop_frozen(heavy, options):
    d = _loop_drive(heavy)
    spec = SweepSpec(axis="power_l", start=LOOP_FOLDS[0] / 2.0,
                     stop=LOOP_FOLDS[1] * 1.8, drive=d, points=200,
                     direction="both")
    res = hysteresis_sweep(heavy, spec, options)
    assert res.diagnostics == ()
    assert isinstance(res.hysteresis, HysteresisResult)
    assert len(res.folds) == 2
    up, down = res.hysteresis.up, res.hysteresis.down
    assert up.jumps == (pytest.approx(LOOP_JUMP_UP, rel=1e-8),)
    assert down.jumps == (pytest.approx(LOOP_JUMP_DOWN, rel=1e-8),)
    # the upward ramp lets go at a strictly higher power than the downward
    assert up.jumps[0] > down.jumps[0]
    # jump locations are the fold locations
    assert up.jumps[0] == pytest.approx(res.folds[1], rel=1e-5)
    assert down.jumps[0] == pytest.approx(res.folds[0], rel=1e-5)


def test_hysteresis_traces_coincide_outside_loop(heavy, options):
    d = _loop_drive(heavy)
    spec = SweepSpec(axis="power_l", start=LOOP_FOLDS[0] / 2.0,
                     stop=LOOP_FOLDS[1] * 1.8, drive=d, points=200,
                     direction="both")
    res = hysteresis_sweep(heavy, spec, options)
    up = dict(res.hysteresis.up.points)
    down = dict(res.hysteresis.down.points)
    assert set(up) == set(down)
    lo, hi = res.folds
    for v in up:
        inside = lo <= v <= hi
        same = abs(up[v].q_s - down[v].q_s) <= 1e-8 * (1.0 + abs(up[v].q_s))
        if not inside:
            assert same
        if v > 1.02 * hi or v < 0.98 * lo:
            assert same
    # inside the loop the ramps sit on different branches
    mid = min(up, key=lambda v: abs(v - 0.5 * (lo + hi)))
    assert down[mid].q_s > up[mid].q_s * 1.5


def test_hysteresis_trace_points_are_stable(heavy, options):
    d = _loop_drive(heavy)
    spec = SweepSpec(axis="power_l", start=LOOP_FOLDS[0] / 2.0,
                     stop=LOOP_FOLDS[1] * 1.8, drive=d, points=120,
                     direction="both")
    res = hysteresis_sweep(heavy, spec, options)
    for trace in (res.hysteresis.up, res.hysteresis.down):
        assert isinstance(trace, Trace)
        for _, b in trace.points:
            assert b.verdict is Verdict.STABLE
    # ramp order: up ascends the axis, down descends
    ups = [v for v, _ in res.hysteresis.up.points]
    downs = [v for v, _ in res.hysteresis.down.points]
    assert ups == sorted(ups)
    assert downs == sorted(downs, reverse=True)


def test_blue_readout_hysteresis_frozen(heavy, options):
    # readout on the other side of its resonance, weakly driven; the
    # upward ramp starts on the high-photon readout branch and sheds
    # photons at the jump
    d = _drive(heavy, delta1=2.0 * math.sqrt(3.0) * heavy.kappa1,
               delta2=-heavy.omega_m, power_l=1e-12, power_r=1e-13)
    folds = locate_folds(heavy, d, "power_l", 1e-14, 1e-9, options)
    assert folds == (pytest.approx(BLUE_FOLDS[0], rel=1e-8),
                     pytest.approx(BLUE_FOLDS[1], rel=1e-8))
    spec = SweepSpec(axis="power_l", start=BLUE_FOLDS[0] / 2.0,
                     stop=BLUE_FOLDS[1] * 1.8, drive=d, points=200,
                     direction="both")
    res = hysteresis_sweep(heavy, spec, options)
    assert res.diagnostics == ()
    up = res.hysteresis.up
    assert up.jumps == (pytest.approx(BLUE_JUMP_UP, rel=1e-8),)
    assert res.hysteresis.down.jumps == (pytest.approx(BLUE_JUMP_DOWN, rel=1e-8),)
    assert up.points[0][1].n_p2 == pytest.approx(101094.89096677376, rel=1e-10)
    jump = up.jumps[0]
    before = max((v for v, _ in up.points if v < jump))
    after = min((v for v, _ in up.points if v > jump))
    by_value = dict(up.points)
    assert by_value[before].n_p2 == pytest.approx(91262.82485140329, rel=1e-8)
    assert by_value[after].n_p2 == pytest.approx(69812.45778801662, rel=1e-8)
    assert by_value[after].n_p2 < by_value[before].n_p2


def test_uncoupled_control_shows_no_loop(preset, options):
    p0 = replace_params(preset, g1=0.0, g2=0.0)
    d = _drive(p0, delta1=preset.omega_m, delta2=preset.omega_m,
               power_l=1e-12, power_r=1e-12)
    spec = SweepSpec(axis="power_l", start=1e-13, stop=1e-11, drive=d,
                     points=60, direction="both")
    res = hysteresis_sweep(p0, spec, options)
    assert res.folds == ()
    assert res.hysteresis.up.jumps == ()
    assert res.hysteresis.down.jumps == ()
    up = dict(res.hysteresis.up.points)
    down = dict(res.hysteresis.down.points)
    for v in up:
        assert up[v].q_s == down[v].q_s


def test_high_q_device_cannot_ramp_past_fold(preset, options):
    # on the preset device the surviving branch past the upper fold is
    # anti-damped, so the strict quasi-static ramp must refuse
    d = _drive(preset, delta1=preset.omega_m, delta2=preset.omega_m,
               power_l=1e-12, power_r=1e-12)
    spec = SweepSpec(axis="power_l", start=1.28e-12, stop=3.886e-11,
                     drive=d, points=60, direction="both")
    with pytest.raises(NoStableBranchError):
        hysteresis_sweep(preset, spec, options)
    res = clamped_hysteresis_sweep(preset, spec, options)
    assert res.hysteresis is not None
    notes = [n for n in res.diagnostics if n.startswith("ramp truncated")]
    assert notes
    assert res.hysteresis.up.points[-1][0] < spec.stop


def test_low_power_displacement_tracks_readout_push(preset, options):
    # with only the readout coupled and far below threshold the steady
    # displacement is the perturbative push (2 g2 / omega_m) n_2
    p0 = replace_params(preset, g1=0.0)
    d = _drive(p0, delta1=0.0, delta2=preset.omega_m,
               power_l=0.0, power_r=1e-15)
    spec = SweepSpec(axis="power_r", start=1e-17, stop=1e-14, drive=d,
                     points=30)
    res = sweep_1d(p0, spec, options)
    for _, branches in res.records:
        b = branches[0]
        push = 2.0 * p0.g2 * b.n_p2 / p0.omega_m
        assert b.q_s == pytest.approx(push, rel=1e-6)
