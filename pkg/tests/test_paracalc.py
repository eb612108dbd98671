import numpy as np
import pytest
from hypothesis import given, strategies as st

from holowave.paracalc import (
    BilinearSymbol,
    balanced,
    bilinear_apply,
    norm_report,
    para_commutator,
    paraproduct,
    product_norm,
    sobolev_norm,
    zygmund_norm,
)
from holowave.spectral_core import GridSpec, SpectralField, chi1, para_chi, psi

from conftest import random_field

G = GridSpec(64)
G256 = GridSpec(256)
seeds = st.integers(0, 2 ** 32 - 1)


def mode(grid, k, c=1.0):
    return SpectralField.from_modes(grid, {k: c})


def lattice_paraproduct(a, u):
    """Literal double sum of the paraproduct quantization."""
    grid = a.grid
    half = grid.n_modes // 2
    out = {}
    for p in grid.k_sorted:
        for q in grid.k_sorted:
            s = p + q
            if not -half < s < half:
                continue
            w = para_chi(p, q) * psi(q)
            out[s] = out.get(s, 0) + w * a.mode(p) * u.mode(q)
    return SpectralField.from_modes(grid, out)


# -- paraproduct examples --------------------------------------------------------------
def test_paraproduct_with_constant_symbol_drops_mean():
    one = SpectralField.from_modes(G, {0: 1.0})
    u = SpectralField.from_modes(G, {-1: 1.0, 0: 5.0})
    assert (paraproduct(one, u) - mode(G, -1)).max_abs() < 1e-15


def test_paraproduct_low_high_pair():
    out = paraproduct(mode(G256, -1), mode(G256, -64))
    assert (out - mode(G256, -65)).max_abs() < 1e-15


def test_paraproduct_zero():
    assert paraproduct(random_field(G, np.random.default_rng(0)), SpectralField.zeros(G)).max_abs() == 0


def test_paraproduct_matches_lattice_sum():
    rng = np.random.default_rng(5)
    g = GridSpec(16)
    a, u = random_field(g, rng), random_field(g, rng)
    assert (paraproduct(a, u) - lattice_paraproduct(a, u)).max_abs() < 1e-13


def test_balanced_examples():
    rng = np.random.default_rng(1)
    a = random_field(G, rng)
    assert balanced(a, SpectralField.zeros(G)).max_abs() == 0
    out = balanced(mode(G, -8), mode(G, -9))
    assert out.mode(-17) == pytest.approx(1.0)
    assert paraproduct(mode(G, -8), mode(G, -9)).max_abs() == 0


# -- bilinear symbols ------------------------------------------------------------------
def test_identity_symbol_is_product(rng):
    u, v = random_field(G, rng, decay=1), random_field(G, rng, decay=1)
    m = BilinearSymbol(lambda p, q: np.ones_like(p), "full")
    assert (bilinear_apply(m, u, v) - u * v).max_abs() < 1e-12


def test_derivative_symbol(rng):
    u, v = random_field(G, rng, decay=1), random_field(G, rng, decay=1)
    m = BilinearSymbol(lambda p, q: 1j * p, "full")
    assert (bilinear_apply(m, u, v) - u.dx() * v).max_abs() < 1e-11


def test_holo_lowhigh_single_pair():
    m = BilinearSymbol(lambda p, q: np.ones_like(p), "holo_lowhigh")
    assert chi1(-1, -65) == 1.0
    assert (bilinear_apply(m, mode(G256, -1), mode(G256, -64)) - mode(G256, -65)).max_abs() < 1e-15


def test_mixed_region_conjugates_first_argument():
    m = BilinearSymbol(lambda p, q: 2.0 + 0 * p, "mixed_full")
    out = bilinear_apply(m, mode(G, -2, 1j), mode(G, -5, 3.0))
    # conj(i) * 3 * 2 lands on -5 - (-2) = -3
    assert (out - mode(G, -3, -6j)).max_abs() < 1e-15
    assert bilinear_apply(m, mode(G, -5), mode(G, -2)).max_abs() == 0


def test_unknown_region_rejected():
    with pytest.raises(ValueError):
        BilinearSymbol(lambda p, q: p, "diagonal")


def test_non_finite_symbol_on_live_pair_raises():
    m = BilinearSymbol(lambda p, q: 1.0 / p, "full")
    with pytest.raises(FloatingPointError):
        bilinear_apply(m, mode(G, 0), mode(G, -1))
    assert bilinear_apply(m, mode(G, -1), mode(G, -1)).mode(-2) == pytest.approx(-1.0)


# -- norms ------------------------------------------------------------------------------
def test_norm_examples():
    assert sobolev_norm(mode(G, -1), 1) == pytest.approx(2 * np.sqrt(np.pi), rel=1e-15)
    assert zygmund_norm(SpectralField.zeros(G), 0.5) == 0
    assert zygmund_norm(mode(G, -4), 1) == pytest.approx(4.0, rel=1e-12)


def test_product_norm_and_report(rng):
    f, g = random_field(G, rng, decay=2), random_field(G, rng, decay=2)
    assert product_norm((f, g), 1.0) == pytest.approx(np.hypot(sobolev_norm(f, 1.5), sobolev_norm(g, 1.0)))
    rep = norm_report(f, pair=(f, g))
    assert rep.sobolev[0.0] == pytest.approx(f.l2())
    assert rep.product_Hs == pytest.approx(product_norm((f, g), 1.0))


def test_commutator_of_equal_symbols_vanishes(rng):
    f, u = random_field(G, rng, decay=2), random_field(G, rng, decay=1)
    assert para_commutator(f, f, u).max_abs() < 1e-14


def test_commutator_hand_chained():
    # low modes act on a high mode: each T passes the pair untouched
    f, g, u = mode(G256, -1), mode(G256, -2), mode(G256, -80)
    assert (paraproduct(f, paraproduct(g, u)) - mode(G256, -83)).max_abs() < 1e-15
    assert para_commutator(f, g, u).max_abs() < 1e-15
    # a mode pushed across a cutoff transition breaks the symmetry
    f, g, u = mode(G256, -3), mode(G256, -5), mode(G256, -40)
    direct = (para_chi(-3, -45) * para_chi(-5, -40) - para_chi(-5, -43) * para_chi(-3, -40))
    assert para_commutator(f, g, u).mode(-48) == pytest.approx(direct, abs=1e-15)


def test_commutator_bound_is_finite():
    ratios = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        f, g = random_field(G, rng, decay=3), random_field(G, rng, decay=3)
        u = random_field(G, rng, decay=1)
        num = sobolev_norm(para_commutator(f, g, u), 1.0 + 1.0 + 1.0)
        den = zygmund_norm(f, 1.0) * zygmund_norm(g, 1.0) * sobolev_norm(u, 1.0)
        ratios.append(num / den)
    assert np.all(np.isfinite(ratios)) and max(ratios) < 1e3


# -- properties --------------------------------------------------------------------------
@given(seeds)
def test_bony_decomposition(seed):
    rng = np.random.default_rng(seed)
    a, u = random_field(G, rng, decay=1), random_field(G, rng, decay=1)
    lhs = a * u
    rhs = paraproduct(a, u) + paraproduct(u, a) + balanced(a, u)
    assert (lhs - rhs).max_abs() <= 1e-12 * max(lhs.max_abs(), 1.0)


@given(seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_paraproduct_bilinear(seed, x, y):
    rng = np.random.default_rng(seed)
    a, b, u, v = (random_field(G, rng) for _ in range(4))
    lhs = paraproduct(x * a + y * b, u)
    assert (lhs - x * paraproduct(a, u) - y * paraproduct(b, u)).max_abs() < 1e-11
    lhs = paraproduct(a, x * u + y * v)
    assert (lhs - x * paraproduct(a, u) - y * paraproduct(a, v)).max_abs() < 1e-11


@given(seeds, st.integers(1, 63))
def test_paraproduct_commutes_with_translation(seed, shift):
    rng = np.random.default_rng(seed)
    a, u = random_field(G, rng), random_field(G, rng)
    phase = np.exp(1j * G.k * 2 * np.pi * shift / G.n_modes)
    sh = lambda f: SpectralField(G, f.coeffs * phase)  # noqa: E731
    assert (paraproduct(sh(a), sh(u)) - sh(paraproduct(a, u))).max_abs() < 1e-12


@given(seeds, st.sampled_from(["holo_lowhigh", "holo_balanced", "full"]))
def test_holomorphic_regions_preserve_holomorphy(seed, region):
    rng = np.random.default_rng(seed)
    u = random_field(G, rng, holomorphic=True)
    v = random_field(G, rng, holomorphic=True)
    m = BilinearSymbol(lambda p, q: 1.0 + p * q, region)
    out = bilinear_apply(m, u, v)
    assert np.all(out.coeffs[G.k > 0] == 0)


@given(seeds, st.floats(-1, 2), st.floats(0, 2))
def test_sobolev_monotone(seed, s1, ds):
    u = random_field(G, np.random.default_rng(seed), zero_mean=True)
    assert sobolev_norm(u, s1) <= sobolev_norm(u, s1 + ds) * (1 + 1e-14)


@given(seeds)
def test_paraproduct_bound_sweep(seed):
    # ||T_a u||_{H^s} <= C ||a||_{L^inf} ||u||_{H^s}: finite, modest constant
    rng = np.random.default_rng(seed)
    a, u = random_field(G, rng, decay=2), random_field(G, rng, decay=1)
    ratio = sobolev_norm(paraproduct(a, u), 1.0) / (np.max(np.abs(a.values)) * sobolev_norm(u, 1.0))
    assert np.isfinite(ratio) and ratio < 10
