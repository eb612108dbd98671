"""Quadratic normal-form corrections, modified energies and the linearized energy."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..dynamics.rhs import LinearizedState, operator_para_L
from ..fields import DiffState, check_jacobian
from ..paracalc import bilinear_apply, paraproduct as T, product_norm
from ..spectral_core import SpectralField, abs_d, japanese
from .symbols import get_family

__all__ = [
    "QuadraticCorrection",
    "EnergyReport",
    "LinearizedNF",
    "ZVariables",
    "hs_norm_sq",
    "pairing",
    "quadratic_correction",
    "base_energy",
    "cubic_corrections",
    "modified_energy",
    "linearized_energy",
    "linearized_energy_terms",
    "linearized_nf_correction",
    "z_variables",
]


def pairing(f: SpectralField, g: SpectralField) -> complex:
    """∫ f g dα over one period."""
    return complex(2 * np.pi * np.vdot(g.conj().coeffs, f.coeffs))


def hs_norm_sq(d: DiffState, s: float) -> float:
    """||(Wd, R)||^2 on H^{s+1/2} x H^s."""
    return product_norm((d.Wd, d.R), s) ** 2


@lru_cache(maxsize=None)
def _symbol(family: str, name: str, block: str | None = None):
    return get_family(family).bilinear(name, block)


def _B(family: str, name: str, u: SpectralField, v: SpectralField, block: str | None = None) -> SpectralField:
    return bilinear_apply(_symbol(family, name, block), u, v)


class _Coef:
    """Para-coefficients built from the background slope on the padded grid."""

    def __init__(self, Wd: SpectralField):
        check_jacobian(Wd)
        self.Wd = Wd
        self._cache = {}

    def __call__(self, key: str, fn) -> SpectralField:
        if key not in self._cache:
            self._cache[key] = self.Wd.apply(fn)
        return self._cache[key]

    # 1 - Y = 1/(1 + W), J = |1 + W|^2
    def one_minus_Y(self):
        return self("1-Y", lambda w: 1.0 / (1.0 + w))

    def one_minus_Yb(self):
        return self("1-Yb", lambda w: 1.0 / (1.0 + np.conj(w)))

    def J_pow(self, p: float):
        return self(f"J^{p}", lambda w: np.abs(1.0 + w) ** (2 * p))


# -- quadratic normal form of the full system ----------------------------------
@dataclass(frozen=True, eq=False)
class QuadraticCorrection:
    W_bal: SpectralField
    R_bal: SpectralField
    W_lh: SpectralField
    R_lh: SpectralField

    @property
    def W(self) -> SpectralField:
        return self.W_bal + self.W_lh

    @property
    def R(self) -> SpectralField:
        return self.R_bal + self.R_lh


def quadratic_correction(d: DiffState) -> QuadraticCorrection:
    """Balanced and low-high parts of (W_[2], R_[2]) with the displayed dressings."""
    W, R = d.Wd, d.R
    co = _Coef(W)
    YW = T(co.one_minus_Y(), W)                                   # T_{1-Y} W
    YbW = T(co.one_minus_Yb(), W)                                 # T_{1-Ȳ} W
    YR = T(co.one_minus_Y(), R)                                   # T_{1-Y} R
    YbR = T(co.one_minus_Yb(), R)                                 # T_{1-Ȳ} R
    ChR = T(co("Ch", lambda w: np.abs(1 + w) * (1 + w) ** 2 / (1 + np.conj(w))), R)
    CaR = T(co("Ca", lambda w: np.abs(1 + w) * (1 + w)), R)
    AaW = T(co("Aa", lambda w: (1 + np.conj(w)) / (1 + w) ** 2), W)

    W_bal = (_B("full_hhh", "b", W, YW) + _B("full_hhh", "c", R, ChR)
             + _B("full_ahh", "b", W, YbW) + _B("full_ahh", "c", R, CaR))
    R_bal = (_B("full_hhh", "a", R, YW) + _B("full_ahh", "a", R, AaW) + _B("full_ahh", "d", W, YbR))
    W_lh = (_B("full_hlh", "b", W, YW) + _B("full_hlh", "c", R, ChR)
            + _B("full_alh", "b", W, YbW) + _B("full_alh", "c", R, CaR))
    R_lh = (_B("full_hlh", "a", R, YW) + _B("full_hlh", "d", W, YR)
            + _B("full_alh", "a", R, AaW) + _B("full_alh", "d", W, YbR))
    return QuadraticCorrection(W_bal, R_bal, W_lh, R_lh)


# -- modified energy -------------------------------------------------------------
@dataclass(frozen=True)
class EnergyReport:
    base: float
    """E_s^1 of the unmodified state."""
    base_modified: float
    """E_s^1 of the state corrected by the balanced normal form."""
    cubic: tuple[float, float, float, float]
    total: float
    norm_sq: float
    equivalence_ratio: float
    s: float
    metadata: dict = field(default_factory=dict)


def base_energy(W: SpectralField, R: SpectralField, Jm32: SpectralField, s: float) -> float:
    """∫ T_{J^{-3/2}} <D>^{s+1/2} W · conj(<D>^{s+1/2} W) + |<D>^s R|^2."""
    DW = japanese(W, s + 0.5)
    DR = japanese(R, s)
    return pairing(T(Jm32, DW), DW.conj()).real + pairing(DR, DR.conj()).real


def cubic_corrections(d: DiffState, s: float, co: _Coef | None = None) -> tuple[float, float, float, float]:
    """Leading parts of the four low-high cubic energy corrections."""
    W, R = d.Wd, d.R
    co = co or _Coef(W)
    Jm32 = co.J_pow(-1.5)
    one_Y = co.one_minus_Y()
    WYW = T(W, T(one_Y, W))                                       # conj gives T_{W̄} T_{1-Ȳ} W̄
    I1 = -2 * pairing(japanese(T(Jm32, W), s + 0.5), japanese(WYW.conj(), s + 0.5)).real
    RcR = T(R, T(co("Aa~", lambda w: (1 + w) / (1 + np.conj(w)) ** 2), R))  # conj: T_{R̄} T_{(1+W̄)(1-Y)^2} R̄
    I2 = -2 / 3 * pairing(japanese(W, s + 0.5), japanese(RcR.conj(), s - 0.5)).real
    RYW = T(R, T(one_Y, W))
    I3 = 2 / 3 * pairing(japanese(R, s), japanese(RYW.conj(), s)).real
    WYR = T(W, T(one_Y, R))
    I4 = -2 * pairing(japanese(R, s), japanese(WYR.conj(), s)).real
    return (I1, I2, I3, I4)


def modified_energy(d: DiffState, s: float = 1.25) -> EnergyReport:
    """E_s^1(W + W_[2]^hh, R + R_[2]^hh) plus the leading cubic corrections."""
    if s <= 0.5:
        raise ValueError("modified energy needs s > 1/2")
    co = _Coef(d.Wd)
    Jm32 = co.J_pow(-1.5)
    base = base_energy(d.Wd, d.R, Jm32, s)
    nf = quadratic_correction(d)
    base_mod = base_energy(d.Wd + nf.W_bal, d.R + nf.R_bal, Jm32, s)
    cubic = cubic_corrections(d, s, co)
    total = base_mod + sum(cubic)
    norm = hs_norm_sq(d, s)
    ratio = total / norm if norm > 0 else 1.0
    return EnergyReport(
        base=base, base_modified=base_mod, cubic=cubic, total=total, norm_sq=norm,
        equivalence_ratio=ratio, s=s,
        metadata={"omitted": ["I5", "quartic correction"], "cubic_terms": ["I1", "I2", "I3", "I4"]},
    )


# -- linearized energy -----------------------------------------------------------
def linearized_energy_terms(l: LinearizedState, bg: DiffState, imag_tol: float = 1e-10) -> dict:
    """Individual integrals of E_lin and the three high-frequency cubic terms."""
    w, r = l.w, l.r
    p = bg.params
    co = _Coef(bg.Wd)
    Jm12 = co.J_pow(-0.5)
    wa = w.dx()
    Lw = p.sigma * operator_para_L(w, bg)
    gauge = {"gravity": p.g * pairing(w, w.conj()), "r_l2": pairing(r, r.conj())}
    scale = max(1.0, *(abs(v) for v in gauge.values()))
    for k, v in gauge.items():
        if abs(v.imag) > imag_tol * scale:
            raise FloatingPointError(f"{k} integral has imaginary residue {v.imag:.3g}")
    terms = {
        "capillary": -pairing(Lw, w.conj()).real,
        "w_half": pairing(w, T(Jm12, wa).conj()).imag,
        "gravity": gauge["gravity"].real,
        "r_half": pairing(r, r.dx().conj()).imag,
        "r_l2": gauge["r_l2"].real,
    }
    ReR = bg.R.real
    ImWa = bg.Wd.dx().imag
    x = T(ReR, wa)
    y = T(ImWa, w)
    z = T(ImWa, r)
    high = (-2 / 3 * pairing(x, r.conj())
            - 1 / 3 * pairing(y, T(co("YJ", lambda q: 1 / ((1 + q) * np.abs(1 + q))), wa).conj())
            + 1 / 3 * pairing(z, T(co.one_minus_Y(), r).conj())).imag
    terms["high"] = high
    return terms


def linearized_energy(l: LinearizedState, bg: DiffState, include_high: bool = True) -> float:
    """E_lin(w, r) plus the leading high-frequency cubic correction."""
    t = linearized_energy_terms(l, bg)
    total = t["capillary"] + t["w_half"] + t["gravity"] + t["r_half"] + t["r_l2"]
    return total + (t["high"] if include_high else 0.0)


# -- normal forms of the linearized flow -------------------------------------------
@dataclass(frozen=True, eq=False)
class LinearizedNF:
    w_bal: SpectralField
    r_bal: SpectralField
    w_lh: SpectralField
    r_lh: SpectralField

    @property
    def w(self) -> SpectralField:
        return self.w_bal + self.w_lh

    @property
    def r(self) -> SpectralField:
        return self.r_bal + self.r_lh


def linearized_nf_correction(l: LinearizedState, bg: DiffState) -> LinearizedNF:
    """Quadratic normal-form corrections (w_NF - w, r_NF - r), split balanced / low-high."""
    w, r = l.w, l.r
    W, R = bg.Wd, bg.R
    co = _Coef(W)
    YW = T(co.one_minus_Y(), W)                                   # T_{1-Y} W
    YbW = T(co.one_minus_Yb(), W)                                 # T_{1-Ȳ} W
    R_m12 = T(co("Jm12(1+W)^2", lambda q: (1 + q) ** 2 / np.abs(1 + q)), R)
    R_ybw = T(co("(1-Yb)(1+W)", lambda q: (1 + q) / (1 + np.conj(q))), R)
    R_32 = T(co("J32(1-Yb)^2", lambda q: np.abs(1 + q) ** 3 / (1 + np.conj(q)) ** 2), R)
    R_12 = T(co.J_pow(0.5), R)                                    # conj: T_{J^{1/2}} R̄

    # YW passed as the conjugated argument gives T_{1-Ȳ} W̄; likewise for R_12, R_ybw
    w1 = _B("lin_bal1", "b", w, YbW) + _B("lin_bal1", "c", r, R_m12)
    r1 = _B("lin_bal1", "a", r, YW) + _B("lin_bal1", "d", w, R_ybw)
    w2 = (_B("lin_bal2h", "b", YW, w) + _B("lin_bal2h", "c", R_32, r)
          + _B("lin_bal2a", "b", YW, w) + _B("lin_bal2a", "c", R_12, r))
    r2 = (_B("lin_bal2h", "a", YW, r) + _B("lin_bal2h", "d", R, w)
          + _B("lin_bal2a", "a", YW, r) + _B("lin_bal2a", "d", R_ybw, w))

    wl1 = (_B("lin_lh1", "b", YW, w, "h") + _B("lin_lh1", "c", R_32, r, "h")
           + _B("lin_lh1", "b", YW, w, "a") + _B("lin_lh1", "c", R_12, r, "a"))
    rl1 = (_B("lin_lh1", "a", YW, r, "h") + _B("lin_lh1", "d", R, w, "h")
           + _B("lin_lh1", "a", YW, r, "a") + _B("lin_lh1", "d", R_ybw, w, "a"))
    wl2 = _B("lin_lh2h", "b", w, YW) + _B("lin_lh2h", "c", r, R_32)
    rl2 = _B("lin_lh2h", "a", r, YW) + _B("lin_lh2h", "d", w, R)
    wl3 = _B("lin_lh2a", "b", w, YW) + _B("lin_lh2a", "c", r, R_m12)
    rl3 = _B("lin_lh2a", "a", r, YW) + _B("lin_lh2a", "d", w, R_ybw)
    return LinearizedNF(w1 + w2, r1 + r2, wl1 + wl2 + wl3, rl1 + rl2 + rl3)


# -- auxiliary variables -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class ZVariables:
    Zp: SpectralField
    Zm: SpectralField
    zp: SpectralField
    zm: SpectralField


def z_variables(d: DiffState, l: LinearizedState) -> ZVariables:
    """Z± = R ± i|D|^{1/2} Wd and z± = r ± i|D|^{1/2} w."""
    hW = 1j * abs_d(d.Wd, 0.5)
    hw = 1j * abs_d(l.w, 0.5)
    return ZVariables(d.R + hW, d.R - hW, l.r + hw, l.r - hw)
