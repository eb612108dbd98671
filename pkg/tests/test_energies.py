import numpy as np
import pytest
from hypothesis import given, strategies as st

from holowave.cli_harness import random_diff_state
from holowave.dynamics.rhs import LinearizedState
from holowave.fields import DiffState, PhysicalParams, holomorphy_defect
from holowave.normal_forms_energies import (
    get_family,
    hs_norm_sq,
    linearized_energy,
    linearized_energy_terms,
    linearized_nf_correction,
    modified_energy,
    quadratic_correction,
    z_variables,
)
from holowave.spectral_core import GridSpec, SpectralField

G = GridSpec(128)


def two_mode(eps, k1=-1, k2=-20):
    return DiffState(SpectralField.from_modes(G, {k1: eps, k2: eps}), SpectralField.zeros(G))


def coef(f, k):
    return f.coeffs[k % f.grid.n_modes]


def test_quadratic_correction_of_zero_state():
    q = quadratic_correction(DiffState.zeros(G))
    for part in (q.W_bal, q.R_bal, q.W_lh, q.R_lh):
        assert np.max(np.abs(part.coeffs)) == 0


def test_quadratic_correction_one_pair_limit():
    # as eps -> 0 the dressings drop out and each output mode is one symbol value
    eps = 1e-4
    q = quadratic_correction(two_mode(eps))
    hlh, alh, hhh = (get_family(n) for n in ("full_hlh", "full_alh", "full_hhh"))
    assert coef(q.W_lh, -21) / eps**2 == pytest.approx(hlh.evaluate("b", -1.0, -20.0), rel=1e-6)
    assert coef(q.W_lh, -19) / eps**2 == pytest.approx(alh.evaluate("b", -1.0, -20.0), rel=1e-6)
    assert coef(q.W_bal, -40) / eps**2 == pytest.approx(hhh.evaluate("b", -20.0, -20.0), rel=1e-6)
    assert coef(q.W_bal, -2) / eps**2 == pytest.approx(hhh.evaluate("b", -1.0, -1.0), rel=1e-6)
    assert np.max(np.abs(q.R.coeffs)) == 0  # R = 0 feeds no R-correction


def test_quadratic_correction_scales_quadratically():
    d = random_diff_state(G, PhysicalParams(), 1.0, seed=5)
    norms = []
    for eps in (2e-3, 1e-3):
        s = DiffState(eps * d.Wd, eps * d.R, d.params)
        q = quadratic_correction(s)
        norms.append(np.linalg.norm(q.W.coeffs) + np.linalg.norm(q.R.coeffs))
    assert norms[0] / norms[1] == pytest.approx(4.0, rel=1e-2)


def test_quadratic_correction_is_holomorphic():
    d = random_diff_state(G, PhysicalParams(), 0.02, seed=6)
    q = quadratic_correction(d)
    assert holomorphy_defect(q.W) < 1e-12 and holomorphy_defect(q.R) < 1e-12


def test_modified_energy_of_zero_state():
    rep = modified_energy(DiffState.zeros(G))
    assert rep.total == 0 and rep.norm_sq == 0 and rep.equivalence_ratio == 1.0


def test_modified_energy_rejects_low_regularity():
    with pytest.raises(ValueError):
        modified_energy(DiffState.zeros(G), s=0.5)


def test_modified_energy_ratio_tends_to_one():
    d = random_diff_state(G, PhysicalParams(), 1.0, seed=7)
    dev = []
    for eps in (2e-3, 1e-3, 5e-4):
        rep = modified_energy(DiffState(eps * d.Wd, eps * d.R, d.params))
        assert rep.norm_sq == pytest.approx(hs_norm_sq(DiffState(eps * d.Wd, eps * d.R), 1.25))
        dev.append(abs(rep.equivalence_ratio - 1))
    assert dev[-1] < 1e-3
    assert dev[0] / dev[1] == pytest.approx(2.0, rel=0.05)
    assert dev[1] / dev[2] == pytest.approx(2.0, rel=0.05)


@given(st.integers(-60, -1), st.floats(0.0, 3.0), st.floats(0.1, 3.0))
def test_linearized_energy_at_zero_background(k, g, sigma):
    eps = 1e-2
    p = PhysicalParams(g=g, sigma=sigma)
    bg = DiffState.zeros(G, p)
    l = LinearizedState(SpectralField.from_modes(G, {k: eps}), SpectralField.zeros(G))
    assert linearized_energy(l, bg) == pytest.approx(2 * np.pi * eps**2 * (sigma * k * k + abs(k) + g), rel=1e-12)


def test_linearized_energy_r_part_at_zero_background():
    bg = DiffState.zeros(G)
    l = LinearizedState(SpectralField.zeros(G), SpectralField.from_modes(G, {-5: 0.1}))
    t = linearized_energy_terms(l, bg)
    assert t["r_half"] == pytest.approx(2 * np.pi * 0.01 * 5)
    assert t["r_l2"] == pytest.approx(2 * np.pi * 0.01)
    assert t["high"] == 0


def test_linearized_energy_zero_inputs():
    assert linearized_energy(LinearizedState.zeros(G), DiffState.zeros(G)) == 0


def test_linearized_nf_vanishes_without_background():
    l = LinearizedState(*(random_diff_state(G, PhysicalParams(), 0.1, seed=8).Wd,) * 2)
    nf = linearized_nf_correction(l, DiffState.zeros(G))
    assert np.max(np.abs(nf.w.coeffs)) == 0 and np.max(np.abs(nf.r.coeffs)) == 0


def test_linearized_nf_is_linear_in_perturbation():
    bg = random_diff_state(G, PhysicalParams(), 0.02, seed=9)
    a = random_diff_state(G, PhysicalParams(), 0.01, seed=10)
    b = random_diff_state(G, PhysicalParams(), 0.01, seed=11)
    la, lb = LinearizedState(a.Wd, a.R), LinearizedState(b.Wd, b.R)
    lc = LinearizedState(2 * a.Wd - 3 * b.Wd, 2 * a.R - 3 * b.R)
    na, nb, nc = (linearized_nf_correction(l, bg) for l in (la, lb, lc))
    for f in ("w", "r"):
        lhs = getattr(nc, f).coeffs
        rhs = 2 * getattr(na, f).coeffs - 3 * getattr(nb, f).coeffs
        assert np.max(np.abs(lhs - rhs)) <= 1e-14 * max(1.0, np.max(np.abs(lhs)))


def test_linearized_nf_one_pair_limit():
    eps = 1e-4
    bg = DiffState(SpectralField.from_modes(G, {-1: eps}), SpectralField.zeros(G))
    l = LinearizedState(SpectralField.from_modes(G, {-20: 1.0}), SpectralField.zeros(G))
    nf = linearized_nf_correction(l, bg)
    # low-frequency background times high-frequency perturbation lands on -21
    out = coef(nf.w_lh, -21) / eps
    assert abs(out) > 0
    assert np.max(np.abs(nf.r.coeffs)) == 0


def test_z_variables_single_mode():
    Wd = SpectralField.from_modes(G, {-1: 1.0})
    d = DiffState(Wd, SpectralField.zeros(G))
    z = z_variables(d, LinearizedState.zeros(G))
    assert coef(z.Zp, -1) == pytest.approx(1j) and coef(z.Zm, -1) == pytest.approx(-1j)
    assert np.max(np.abs(z.zp.coeffs)) == 0


def test_z_variables_sum_and_difference():
    d = random_diff_state(G, PhysicalParams(), 0.1, seed=12)
    z = z_variables(d, LinearizedState(d.Wd, d.R))
    k = np.abs(G.k)
    assert np.allclose((z.Zp + z.Zm).coeffs, 2 * d.R.coeffs, atol=1e-15)
    assert np.allclose((z.Zp - z.Zm).coeffs, 2j * np.sqrt(k) * d.Wd.coeffs, atol=1e-15)
    assert np.allclose(z.zp.coeffs, z.Zp.coeffs, atol=0)
