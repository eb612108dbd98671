import csv
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holowave.dynamics import (
    BlowUpError,
    ConfigError,
    CoupledState,
    LinearizedState,
    StepperConfig,
    Trajectory,
    commutator_residual,
    dispersion_check,
    linear_sources,
    linearized_direction,
    max_stable_dt,
    para_material_residuals,
    para_reduction_wr,
    rhs_linearized,
    rhs_para_linear,
    rhs_wq,
    rhs_wr,
    simulate,
    step,
)
from holowave.fields import DegenerateJacobianError, DiffState, PhysicalParams, SurfaceState, differentiate_state
from holowave.paracalc import sobolev_norm
from holowave.spectral_core import GridSpec, SpectralField, clip_holo

from conftest import random_field

G = GridSpec(64)
P11 = PhysicalParams(1.0, 1.0)


def mode(k, c=1.0, grid=G):
    return SpectralField.from_modes(grid, {k: c})


def band_state(eps, seed=0, grid=G, params=P11, k_max=6):
    rng = np.random.default_rng(seed)
    W = {-k: eps * (rng.normal() + 1j * rng.normal()) / k ** 2 for k in range(1, k_max)}
    Q = {-k: eps * (rng.normal() + 1j * rng.normal()) / k ** 2 for k in range(1, k_max)}
    return SurfaceState(SpectralField.from_modes(grid, W), SpectralField.from_modes(grid, Q), params)


def pair_norm(a, b):
    return math.hypot(a.l2(), b.l2())


# -- right-hand sides ---------------------------------------------------------------------
def test_rhs_zero_states():
    for r in (rhs_wq(SurfaceState.zeros(G)), rhs_wr(DiffState.zeros(G))):
        assert r.first.max_abs() == 0 and r.second.max_abs() == 0
    bg = differentiate_state(band_state(0.01))
    for fn in (rhs_linearized, rhs_para_linear):
        wt, rt = fn(LinearizedState.zeros(G), bg)
        assert wt.max_abs() < 1e-18 and rt.max_abs() < 1e-18


@pytest.mark.parametrize("g,sigma", [(0, 1), (1, 1), (2, 3)])
def test_rhs_wq_is_quadratic_perturbation_of_linear_flow(g, sigma):
    p = PhysicalParams(g, sigma)
    errs = []
    for eps in (0.02, 0.01):
        s = band_state(eps, params=p)
        Wt, Qt = rhs_wq(s)
        lin_W = -s.Q.dx()
        lin_Q = 1j * g * s.W - 1j * sigma * s.W.dx(2)
        errs.append(pair_norm(Wt - lin_W, Qt - lin_Q))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_rhs_wq_grid_refinement():
    a = rhs_wq(band_state(0.01, grid=GridSpec(64)))
    b = rhs_wq(band_state(0.01, grid=GridSpec(128)))
    for fa, fb in zip(a, b):
        diff = max(abs(fa.mode(k) - fb.mode(k)) for k in range(-31, 32))
        assert diff <= 1e-10 * fb.max_abs()


def test_rhs_wr_matches_chain_rule():
    s = band_state(0.01)
    d = differentiate_state(s)
    Wt, Qt = rhs_wq(s)
    Wdt, Rt = rhs_wr(d)
    R_from_wq = clip_holo((Qt.dx() - d.R * Wt.dx()) / (1.0 + d.Wd))
    assert (clip_holo(Wdt) - Wt.dx()).max_abs() <= 1e-10 * Wt.dx().max_abs()
    assert (clip_holo(Rt) - R_from_wq).max_abs() <= 1e-10 * R_from_wq.max_abs()


def test_rhs_wr_anti_defect_is_small():
    defects = [rhs_wr(differentiate_state(band_state(eps))).anti_defect for eps in (0.02, 0.01)]
    scale = rhs_wr(differentiate_state(band_state(0.01))).first.l2()
    assert defects[1] <= 1e-10 * scale or defects[0] / defects[1] > 3.0


def test_zero_background_linearized_example():
    bg = DiffState.zeros(G, PhysicalParams(0.0, 1.0))
    l = LinearizedState(mode(-1), SpectralField.zeros(G))
    wt, rt = rhs_linearized(l, bg)
    assert wt.max_abs() < 1e-15
    assert (rt - mode(-1, 1j)).max_abs() < 1e-14


@given(st.integers(0, 2 ** 32 - 1))
def test_zero_background_para_flow_matches_linearized(seed):
    bg = DiffState.zeros(G, P11)
    rng = np.random.default_rng(seed)
    l = LinearizedState(random_field(G, rng, 1, True, True), random_field(G, rng, 1, True, True))
    a, b = rhs_linearized(l, bg), rhs_para_linear(l, bg)
    assert (a.first - b.first).max_abs() < 1e-10 and (a.second - b.second).max_abs() < 1e-10


def test_linearized_rhs_matches_directional_derivative():
    s = band_state(0.01)
    rng = np.random.default_rng(3)
    dw = random_field(G, rng, 2, True, True, k_max=6)
    dq = random_field(G, rng, 2, True, True, k_max=6)
    d = differentiate_state(s)
    fd = linearized_direction(s, dw, dq)
    Wt, Qt = rhs_wq(s)
    Rt = clip_holo((Qt.dx() - d.R * Wt.dx()) / (1 + d.Wd))
    r = clip_holo(dq - d.R * dw)
    wt, rt = rhs_linearized(LinearizedState(dw, r), d)
    rt_fd = fd.second - Rt * dw - d.R * fd.first
    assert (wt - fd.first).l2() <= 1e-8 * fd.first.l2()
    assert (rt - rt_fd).l2() <= 1e-8 * rt_fd.l2()


def test_para_flow_difference_is_order_eps():
    rng = np.random.default_rng(4)
    l = LinearizedState(random_field(G, rng, 2, True, True, k_max=8), random_field(G, rng, 2, True, True, k_max=8))
    diffs = []
    for eps in (0.02, 0.01):
        bg = differentiate_state(band_state(eps))
        a, b = rhs_linearized(l, bg), rhs_para_linear(l, bg)
        src = linear_sources(l, bg)
        diffs.append(pair_norm(a.first - b.first, a.second - b.second))
        assert np.isfinite(src.first.l2()) and np.isfinite(src.second.l2())
    assert diffs[0] / diffs[1] == pytest.approx(2.0, rel=0.2)


# -- residual diagnostics --------------------------------------------------------------------
def test_residuals_vanish_at_zero():
    d = DiffState.zeros(G, PhysicalParams(0.0, 1.0))
    assert para_reduction_wr(d).norm == 0
    rep = para_material_residuals(d)
    assert all(v == 0 for v in rep.sobolev.values())
    u = SpectralField.from_modes(G, {-k: 1.0 / k ** 2 for k in range(1, 20)})
    for form in ("printed", "printed_half", "derived"):
        assert commutator_residual(d, u, form=form) == 0
    with pytest.raises(ValueError):
        commutator_residual(d, u, form="other")


def test_para_material_residuals_are_quadratic():
    reps = [para_material_residuals(differentiate_state(band_state(eps, params=PhysicalParams(0, 1))))
            for eps in (0.02, 0.01)]
    for name in reps[0].sobolev:
        assert reps[0].sobolev[name] / reps[1].sobolev[name] == pytest.approx(4.0, rel=0.25), name
        assert reps[1].ratio(name) < 0.1  # residual much smaller than the leading term


# -- stepping -------------------------------------------------------------------------------
def test_dispersion_examples():
    assert dispersion_check(-4, PhysicalParams(0, 1)) == pytest.approx(8)
    assert dispersion_check(-1, PhysicalParams(1, 1)) == pytest.approx(math.sqrt(2))
    assert dispersion_check(-2, PhysicalParams(2, 3)) == pytest.approx(math.sqrt(28))
    with pytest.raises(ValueError):
        dispersion_check(0, P11)


def test_stepper_config_validation():
    with pytest.raises(ConfigError):
        StepperConfig(dt=0)
    with pytest.raises(ConfigError):
        StepperConfig(dt=1e-3, scheme="euler")
    with pytest.raises(ConfigError):
        StepperConfig(dt=1e-3, t_end=-1)
    limit = max_stable_dt(G, P11)
    assert limit == pytest.approx(0.5 / (32 ** 1.5 + 32 ** 0.5))
    with pytest.raises(ConfigError):
        StepperConfig(dt=2 * limit).check_cfl(G, P11)
    with pytest.raises(ConfigError):
        simulate(SurfaceState.zeros(G, P11), StepperConfig(dt=2 * limit, t_end=0.01))


@pytest.mark.parametrize("scheme", ["rk4", "ifrk4"])
def test_zero_state_stays_zero(scheme):
    cfg = StepperConfig(dt=max_stable_dt(G, P11), scheme=scheme, t_end=0.05)
    traj = simulate(SurfaceState.zeros(G, P11), cfg)
    assert all(s.W.max_abs() == 0 and s.Q.max_abs() == 0 for s in traj.states)
    assert np.all(traj.series("E") == 0)


def test_ifrk4_exact_on_linear_single_mode():
    p = PhysicalParams(1.0, 2.0)
    k, x0, y0 = -5, 0.3 + 0.1j, -0.2j
    state = CoupledState(SurfaceState.zeros(G, p), LinearizedState(mode(k, x0), mode(k, y0)))
    cfg = StepperConfig(dt=max_stable_dt(G, p), scheme="ifrk4", t_end=0.25)
    end = simulate(state, cfg, monitors=None).states[-1].pert
    lam = p.g + p.sigma * k ** 2
    tau = math.sqrt(-k * lam)
    c, sn = math.cos(tau * cfg.t_end), math.sin(tau * cfg.t_end)
    x = x0 * c + (-1j * k * y0) * sn / tau
    y = y0 * c + (1j * lam * x0) * sn / tau
    assert abs(end.w.mode(k) - x) < 1e-13 and abs(end.r.mode(k) - y) < 1e-13


def test_holomorphy_is_kept_along_trajectory():
    s = band_state(0.02)
    traj = simulate(s, StepperConfig(dt=max_stable_dt(G, P11), t_end=0.2, snapshot_every=20))
    assert np.max(traj.series("holo_defect_W")) <= 1e-8
    assert np.max(traj.series("holo_defect_R")) <= 1e-8


def test_differentiation_commutes_with_flow():
    s = band_state(0.01)
    cfg = StepperConfig(dt=max_stable_dt(G, P11), t_end=0.5)
    a = differentiate_state(simulate(s, cfg, monitors=None).states[-1])
    b = simulate(differentiate_state(s), cfg, monitors=None).states[-1]
    assert pair_norm(a.Wd - b.Wd, a.R - b.R) <= 1e-9 * pair_norm(b.Wd, b.R)


def test_single_step_matches_simulate():
    s = band_state(0.01)
    cfg = StepperConfig(dt=max_stable_dt(G, P11), t_end=max_stable_dt(G, P11))
    one = step(s, cfg)
    traj = simulate(s, cfg, monitors=None)
    assert (traj.states[-1].W - one.W).max_abs() == 0


def test_blow_up_is_reported():
    s = SurfaceState(mode(-1, 0.85j), SpectralField.zeros(G), P11)
    with pytest.raises(BlowUpError) as info:
        simulate(s, StepperConfig(dt=max_stable_dt(G, P11), t_end=0.1), monitors=None)
    assert info.value.last_state is not None and info.value.t > 0


def test_inadmissible_initial_data_rejected():
    s = SurfaceState(mode(-1, 0.95j), SpectralField.zeros(G), P11)
    with pytest.raises(DegenerateJacobianError):
        simulate(s, StepperConfig(dt=max_stable_dt(G, P11), t_end=0.01))


def test_trajectory_csv_round_trip(tmp_path):
    s = band_state(0.01)
    traj = simulate(s, StepperConfig(dt=max_stable_dt(G, P11), t_end=0.02, snapshot_every=5))
    path = traj.to_csv(tmp_path / "t.csv")
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "E", "P", "A0", "A1", "holo_defect_W", "holo_defect_R", "Es", "Elin"]
    assert [float(r[0]) for r in rows[1:]] == traj.times
    assert float(rows[1][1]) == traj.series("E")[0]  # 17 digits round-trip exactly
    assert rows[1][7] == ""
    paths = traj.save_states(tmp_path / "states")
    assert len(paths) == len(traj.states)


def test_trajectory_times_must_increase():
    traj = Trajectory()
    traj.append(0.0, None, {})
    with pytest.raises(ValueError):
        traj.append(0.0, None, {})
