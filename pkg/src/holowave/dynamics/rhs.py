"""Right-hand sides of the surface, differentiated, linearized and paradifferential flows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fields import (
    DiffState,
    PhysicalParams,
    SurfaceState,
    aux_fields,
    check_jacobian,
    holomorphy_defect,
)
from ..paracalc import Pi, T
from ..spectral_core import SpectralField, clip_holo, project_anti, project_holo

__all__ = [
    "LinearizedState",
    "Rate",
    "rhs_wq",
    "rhs_wr",
    "rhs_linearized",
    "rhs_para_linear",
    "linear_sources",
    "operator_L",
    "operator_para_L",
    "linearized_direction",
]

P = project_holo
Pbar = project_anti

# coefficient of W_a w_a / (J^{1/2} (1 + W)^2) in p
P_COEF = 1.5


@dataclass(frozen=True, eq=False)
class LinearizedState:
    """Linearized position w and good variable r = q - R w."""

    w: SpectralField
    r: SpectralField

    @classmethod
    def zeros(cls, grid) -> "LinearizedState":
        return cls(SpectralField.zeros(grid), SpectralField.zeros(grid))

    def defects(self) -> dict:
        return {"w": holomorphy_defect(self.w), "r": holomorphy_defect(self.r)}


@dataclass(frozen=True, eq=False)
class Rate:
    """A pair of time derivatives; unpacks as (first, second)."""

    first: SpectralField
    second: SpectralField
    anti_defect: float = 0.0

    def __iter__(self):
        yield self.first
        yield self.second


def _anti_norm(f: SpectralField) -> float:
    pos = np.where(f.grid.k > 0, f.coeffs, 0.0)
    return float(np.sqrt(2 * np.pi * np.sum(np.abs(pos) ** 2)))


# -- full systems -------------------------------------------------------------
def rhs_wq(s: SurfaceState) -> Rate:
    """Time derivatives of (W, Q), cleaned of positive frequencies."""
    W, Q = s.W, s.Q
    g, sig = s.params.g, s.params.sigma
    Wa = W.dx()
    check_jacobian(Wa)
    Qa = Q.dx()
    F = P(Qa.pointwise(lambda q, w: (q - np.conj(q)) / np.abs(1.0 + w) ** 2, Wa))
    Wt = -(F * (1.0 + Wa))
    X = Wa.dx().pointwise(lambda x, w: x / (np.abs(1.0 + w) * (1.0 + w)), Wa)
    kinetic = Qa.pointwise(lambda q, w: np.abs(q) ** 2 / np.abs(1.0 + w) ** 2, Wa)
    Qt = -(F * Qa) + 1j * g * W - P(kinetic) - 1j * sig * P(X - X.conj())
    defect = _anti_norm(Wt) + _anti_norm(Qt)
    return Rate(clip_holo(Wt), clip_holo(Qt), defect)


def rhs_wr(d: DiffState) -> Rate:
    """Time derivatives of (Wd, R), unprojected; ``anti_defect`` = ||P̄ Wd_t|| + ||P̄ R_t||."""
    Wd, R = d.Wd, d.R
    g, sig = d.params.g, d.params.sigma
    aux = aux_fields(d)
    Ra, Wa = R.dx(), Wd.dx()
    transport = Ra.pointwise(lambda ra, w: (1.0 + w) * ra / (1.0 + np.conj(w)), Wd)
    Wt = -(aux.b * Wa) - transport + (1.0 + Wd) * aux.M
    X = Wa.pointwise(lambda x, w: x / (np.abs(1.0 + w) * (1.0 + w)), Wd)
    cap = (P(X) - P(X.conj())).dx()
    forcing = 1j * (g * Wd - aux.a) - 1j * sig * cap
    Rt = -(aux.b * Ra) + forcing.pointwise(lambda f, w: f / (1.0 + w), Wd)
    return Rate(Wt, Rt, _anti_norm(Wt) + _anti_norm(Rt))


# -- linearized flow ------------------------------------------------------------
def operator_L(w: SpectralField, bg: DiffState, aux=None) -> SpectralField:
    """L w = ∂(J^{-1/2} w_a) - i c w_a - i (P c_a) w (without the sigma factor)."""
    aux = aux or aux_fields(bg)
    Jm12 = bg.Wd.apply(lambda x: 1.0 / np.abs(1.0 + x))
    wa = w.dx()
    return (Jm12 * wa).dx() - 1j * (aux.c * wa) - 1j * (P(aux.c.dx()) * w)


def operator_para_L(w: SpectralField, bg: DiffState) -> SpectralField:
    """Leading paradifferential part ∂ T_{J^{-1/2}} ∂ of L."""
    Jm12 = bg.Wd.apply(lambda x: 1.0 / np.abs(1.0 + x))
    return T(Jm12, w.dx()).dx()


def _coeffs(bg: DiffState):
    Wd = bg.Wd
    return dict(
        inv=Wd.apply(lambda x: 1.0 / (1.0 + x)),                 # 1 - Y
        inv_bar=Wd.apply(lambda x: 1.0 / (1.0 + np.conj(x))),    # 1 - Ȳ
        invJ=Wd.apply(lambda x: 1.0 / np.abs(1.0 + x) ** 2),
        inv2=Wd.apply(lambda x: 1.0 / (1.0 + x) ** 2),
        Jm12=Wd.apply(lambda x: 1.0 / np.abs(1.0 + x)),
        Jm32=Wd.apply(lambda x: np.abs(1.0 + x) ** -3),
        Jm12_inv=Wd.apply(lambda x: 1.0 / (np.abs(1.0 + x) * (1.0 + x))),
        Jm12_inv2=Wd.apply(lambda x: 1.0 / (np.abs(1.0 + x) * (1.0 + x) ** 2)),
    )


def rhs_linearized(l: LinearizedState, bg: DiffState, printed_p: bool = False,
                   close_mean: bool = True) -> Rate:
    """Linearized equations around ``bg`` in the unknowns (w, r), term by term.

    ``printed_p`` uses the coefficient 1 in front of W_a w_a / (J^{1/2}(1+W)^2)
    inside p; the default 3/2 is what the exact linearization produces.
    ``close_mean`` replaces the zero modes by their exact periodic values.
    """
    w, r = l.w, l.r
    p_coef = 1.0 if printed_p else P_COEF
    g, sig = bg.params.g, bg.params.sigma
    check_jacobian(bg.Wd)
    aux = aux_fields(bg)
    cf = _coeffs(bg)
    Wd, R = bg.Wd, bg.R
    Rb, Yb = R.conj(), aux.Y.conj()
    Y = aux.Y
    wa, ra = w.dx(), r.dx()
    Ra = R.dx()

    RYa = R * Yb.dx()
    m = (ra + Ra * w) * cf["invJ"] + Rb * wa * cf["inv2"]
    G0 = (1.0 + Wd) * (P(m.conj()) + Pbar(m)) + w * Pbar(Ra * Yb) - T(P(RYa), w)
    wt = (-P(aux.b * wa) - P(ra * cf["inv_bar"]) - P(aux.b.dx()) * w
          + P(G0 - T(w, RYa) - Pi(w, P(RYa))))

    n = Rb * (ra + Ra * w) * cf["inv"]
    p = sig * (w.dx(2) * cf["Jm12_inv"]
               - (p_coef * Wd.dx() * cf["Jm12_inv2"] - 0.5 * Wd.dx().conj() * cf["Jm32"]) * wa)
    Ta_w = T(1.0 - Y, T(aux.a, w))
    K0 = Pbar(n) - P(n.conj()) + 1j * P(p.conj()) + 1j * Ta_w
    Lw = sig * operator_L(w, bg, aux)
    rt = (-P(aux.b * ra) - 1j * P(Lw * cf["inv"]) + 1j * g * P(w * cf["inv"])
          + P(K0) + 1j * P(aux.a * w * cf["inv"]) - 1j * Ta_w)
    if close_mean:
        mw, mr = _exact_means(l, bg, aux, cf, wt)
        wt = _set_mean(wt, mw)
        rt = _set_mean(rt, mr)
    return Rate(wt, rt)


def _set_mean(f: SpectralField, value: complex) -> SpectralField:
    c = f.coeffs.copy()
    c[0] = value
    return SpectralField(f.grid, c)


def _exact_means(l: LinearizedState, bg: DiffState, aux, cf, wt_modes: SpectralField):
    """Zero modes of (w_t, r_t) from the direct linearization of the (W, Q) equations.

    The term-by-term system fixes every nonzero mode; its projections halve
    the zero mode, which the periodic problem does not allow.
    """
    w, r = l.w, l.r
    g, sig = bg.params.g, bg.params.sigma
    Wd, R = bg.Wd, bg.R
    Rb = R.conj()
    wa, ra, Ra = w.dx(), r.dx(), R.dx()
    qa = ra + Ra * w + R * wa
    dQJ = (ra + Ra * w) * cf["invJ"] - R * wa.conj() * cf["inv_bar"] ** 2
    m = (ra + Ra * w) * cf["invJ"] + Rb * wa * cf["inv2"]
    wt_exact = (-(aux.b * wa) - ra * cf["inv_bar"] - Ra * w * cf["inv_bar"]
                + (1.0 + Wd) * (P(m.conj()) + Pbar(m)))
    dF = P(m - m.conj())
    dK = qa.conj() * (R * cf["inv_bar"]) + (Rb * (1.0 + Wd.conj())) * dQJ
    dX = (w.dx(2) * cf["Jm12_inv"] - 1.5 * Wd.dx() * wa * cf["Jm12_inv2"]
          - 0.5 * Wd.dx() * wa.conj() * cf["Jm32"])
    qt = (-(dF * (R * (1.0 + Wd))) - aux.F * qa + 1j * g * w - P(dK)
          - 1j * sig * P(dX - dX.conj()))
    Rt = clip_holo(rhs_wr(bg).second)
    wt_full = _set_mean(wt_modes, wt_exact.mean)
    rt = qt - Rt * w - R * wt_full
    return wt_exact.mean, rt.mean


def rhs_para_linear(l: LinearizedState, bg: DiffState) -> Rate:
    """Homogeneous paradifferential flow: T_{D_t} = ∂_t + T_b ∂ moved to the right."""
    w, r = l.w, l.r
    g, sig = bg.params.g, bg.params.sigma
    check_jacobian(bg.Wd)
    aux = aux_fields(bg)
    one_m_Y = 1.0 - aux.Y
    one_m_Yb = one_m_Y.conj()
    wt = -T(aux.b, w.dx()) - T(one_m_Yb, r.dx()) - 0.5 * T(aux.b.dx(), w)
    rt = (-T(aux.b, r.dx()) - 1j * sig * T(one_m_Y, operator_para_L(w, bg))
          + 1j * g * T(one_m_Y, w))
    return Rate(wt, rt)


def linear_sources(l: LinearizedState, bg: DiffState) -> Rate:
    """The sources (P(G0 + G1), P(K0 + K1)) of the paradifferential linearized form."""
    w, r = l.w, l.r
    p_coef = P_COEF
    g, sig = bg.params.g, bg.params.sigma
    aux = aux_fields(bg)
    cf = _coeffs(bg)
    Wd, R = bg.Wd, bg.R
    Rb, Y = R.conj(), aux.Y
    Yb = Y.conj()
    one_m_Y = 1.0 - Y
    b, a, c = aux.b, aux.a, aux.c
    wa, ra = w.dx(), r.dx()
    Ra = R.dx()
    ba = b.dx()
    RYa = R * Yb.dx()

    m = (ra + Ra * w) * cf["invJ"] + Rb * wa * cf["inv2"]
    G0 = (1.0 + Wd) * (P(m.conj()) + Pbar(m)) + w * Pbar(Ra * Yb) - T(P(RYa), w)
    G1 = (Pi(ra, Yb) - (T(wa, b) + Pi(wa, b)) - T(w, ba) - Pi(w, P(ba)) - T(w, RYa)
          - Pi(w, P(RYa)) + 0.5 * T(Pbar(ba) - P(ba), w))

    n = Rb * (ra + Ra * w) * cf["inv"]
    p = sig * (w.dx(2) * cf["Jm12_inv"]
               - (p_coef * Wd.dx() * cf["Jm12_inv2"] - 0.5 * Wd.dx().conj() * cf["Jm32"]) * wa)
    K0 = Pbar(n) - P(n.conj()) + 1j * P(p.conj()) + 1j * T(one_m_Y, T(a, w))
    Lw = sig * operator_L(w, bg, aux)
    Jm1 = cf["Jm12"] - 1.0
    cs = sig * c
    gaw = (g + a) * w
    K1 = (-(T(ra, b) + Pi(ra, b)) + 1j * (T(Lw, Y) + Pi(Lw, Y))
          - 1j * sig * T(one_m_Y, T(wa, Jm1).dx()) - T(one_m_Y, T(w, P(cs)).dx())
          - 1j * sig * T(one_m_Y, Pi(wa, Jm1).dx()) - T(one_m_Y, Pi(wa, cs))
          - T(one_m_Y, Pi(w, P(cs.dx()))) + 1j * T(one_m_Y, T(w, a))
          + 1j * T(one_m_Y, Pi(w, a)) - 1j * T(gaw, Y) - 1j * Pi(gaw, Y)
          - T(one_m_Y, T(cs, wa)) - T(one_m_Y, T(P(cs.dx()), w)))
    return Rate(P(G0 + G1), P(K0 + K1))


def linearized_direction(s: SurfaceState, dW: SpectralField, dQ: SpectralField,
                         h: float = 1e-6) -> Rate:
    """Central-difference directional derivative of the (W, Q) right-hand side."""
    plus = rhs_wq(SurfaceState(s.W + h * dW, s.Q + h * dQ, s.params))
    minus = rhs_wq(SurfaceState(s.W - h * dW, s.Q - h * dQ, s.params))
    return Rate((plus.first - minus.first) / (2 * h), (plus.second - minus.second) / (2 * h))
