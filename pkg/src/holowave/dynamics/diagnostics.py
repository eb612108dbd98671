"""Residuals of the paradifferential reduction and the para-material expansions.

Each diagnostic evaluates "left side minus leading right side" with the time
derivatives taken from the right-hand side of the flow, never by finite
differences.  T_{D_t} = ∂_t + T_b ∂.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fields import DiffState, aux_fields, check_jacobian
from ..paracalc import Pi, T, product_norm, sobolev_norm, zygmund_norm
from ..spectral_core import SpectralField, antiderivative, clip_holo, project_holo
from .rhs import operator_para_L, rhs_wr

__all__ = [
    "ParaReduction",
    "ResidualReport",
    "para_reduction_terms",
    "para_reduction_wr",
    "para_material_residuals",
    "commutator_terms",
    "commutator_residual",
]

P = project_holo


def _pointwise(bg: DiffState):
    Wd = bg.Wd
    return dict(
        inv=Wd.apply(lambda x: 1.0 / (1.0 + x)),
        inv_bar=Wd.apply(lambda x: 1.0 / (1.0 + np.conj(x))),
        Jm12=Wd.apply(lambda x: 1.0 / np.abs(1.0 + x)),
        Jm32=Wd.apply(lambda x: np.abs(1.0 + x) ** -3),
    )


@dataclass(frozen=True, eq=False)
class ParaReduction:
    G: SpectralField
    K: SpectralField
    s: float
    norm: float
    """||(G, K)|| in H^{s+1/2} x H^s."""
    leading_norm: float
    """Norm of the time derivatives (Wd_t, R_t) for scale."""

    def __iter__(self):
        yield self.G
        yield self.K


def para_reduction_terms(d: DiffState) -> dict:
    """The individual terms of the non-perturbative sources (calG, calK)."""
    Wd, R = d.Wd, d.R
    sig = d.params.sigma
    aux = aux_fields(d)
    pw = _pointwise(d)
    Y = aux.Y
    one_m_Y, one_m_Yb = pw["inv"], pw["inv_bar"]
    Wb, Rb = Wd.conj(), R.conj()
    Wa, Waa, Ra = Wd.dx(), Wd.dx(2), R.dx()
    b = aux.b
    TR = T(one_m_Yb, Ra) + T(one_m_Y, Rb.dx())
    TRbar = T(one_m_Yb, R) + T(one_m_Y, Rb)
    g_terms = {
        "transport": -T(b, Wa),
        "R_coefficient": -T(one_m_Yb * Wa - one_m_Yb * one_m_Yb * (1.0 + Wd) * Wb.dx(), R),
        "W_coefficient": -T(TR, Wd),
        "balanced_WbarR": T((1.0 + Wd) * one_m_Yb * one_m_Yb, P(Pi(Wb, R).dx())),
        "balanced_W": -P(Pi(TRbar, Wd).dx()),
    }
    c3 = pw["Jm12"] * one_m_Y ** 3
    c1 = pw["Jm32"] * one_m_Y
    k_terms = {
        "cap_low_Wa": 3j * sig * T(c3 * Wa, Wa),
        "cap_low_Waa": 2.5j * sig * T(T(c3, Waa), Wd),
        "cap_low_Wbaraa": -0.5j * sig * T(T(c1, Wb.dx(2)), Wd),
        "cap_bal_W_Waa": 2.5j * sig * T(c3, Pi(Wd, Waa)),
        "cap_bal_Wa_Wa": 1.5j * sig * T(c3, Pi(Wa, Wa)),
        "cap_bal_Wbar_Waa": 0.5j * sig * T(c1, P(Pi(Wb, Waa))),
        "cap_bal_Wbaraa_W": -0.5j * sig * T(c1, P(Pi(Wb.dx(2), Wd))),
        "transport": -T(b, Ra),
        "R_low_holo": -T(T(one_m_Yb, Ra), R),
        "R_low_anti": -T(T(one_m_Y, Rb.dx()), R),
        "R_balanced": -Pi(Ra, T(one_m_Yb, R)),
        "R_balanced_bar": -T(one_m_Y, P(Pi(Rb, R).dx())),
    }
    return {"G": g_terms, "K": k_terms, "Y": Y}


def para_reduction_wr(d: DiffState, s: float = 1.5) -> ParaReduction:
    """Residuals G = Wd_t + T_{(1-Ȳ)(1+Wd)} R_a - calG and K = R_t + i T_{J^{-1/2}(1-Y)^2} Wd_aa - calK."""
    check_jacobian(d.Wd)
    Wt, Rt = rhs_wr(d)
    terms = para_reduction_terms(d)
    pw = _pointwise(d)
    sig = d.params.sigma
    calG = sum(terms["G"].values(), SpectralField.zeros(d.grid))
    calK = sum(terms["K"].values(), SpectralField.zeros(d.grid))
    G = Wt + T(pw["inv_bar"] * (1.0 + d.Wd), d.R.dx()) - calG
    K = Rt + 1j * sig * T(pw["Jm12"] * pw["inv"] ** 2, d.Wd.dx(2)) - calK
    return ParaReduction(G, K, s, product_norm((G, K), s), product_norm((Wt, Rt), s))


@dataclass(frozen=True, eq=False)
class ResidualReport:
    residuals: dict
    sobolev: dict
    zygmund: dict
    leading: dict = field(default_factory=dict)
    s: float = 1.0

    def ratio(self, name: str) -> float:
        lead = self.leading.get(name, 0.0)
        return self.sobolev[name] / lead if lead else float("nan")


def para_material_residuals(d: DiffState, s: float = 1.0,
                            exponents: tuple = (-0.5, 0.5)) -> ResidualReport:
    """Residuals of the leading-term identities for T_{D_t} of W, Wd, Y, R and J^s."""
    check_jacobian(d.Wd)
    Wd, R = d.Wd, d.R
    sig = d.params.sigma
    aux = aux_fields(d)
    pw = _pointwise(d)
    b = aux.b
    one_m_Y, one_m_Yb = pw["inv"], pw["inv_bar"]
    Y = aux.Y
    Wt, Rt = rhs_wr(d)
    Wt, Rt = clip_holo(Wt), clip_holo(Rt)
    W = antiderivative(Wd)
    W_t = clip_holo(-(aux.F * (1.0 + Wd)))
    Ra = R.dx()

    def Dt(f, f_t):
        return f_t + T(b, f.dx())

    res, lead = {}, {}
    DtW = Dt(W, W_t)
    res["Dt_W_projected"] = DtW + T(1.0 + Wd, P(one_m_Yb * R)) + P(Pi(Wd, b))
    lead["Dt_W_projected"] = T(1.0 + Wd, P(one_m_Yb * R))
    res["Dt_W"] = DtW + T(1.0 + Wd, T(one_m_Yb, R))
    lead["Dt_W"] = T(1.0 + Wd, T(one_m_Yb, R))
    res["Dt_Wa"] = Dt(Wd, Wt) + T((1.0 + Wd) * one_m_Yb, Ra)
    lead["Dt_Wa"] = T((1.0 + Wd) * one_m_Yb, Ra)
    Y_t = one_m_Y * one_m_Y * Wt
    absY2 = one_m_Y * one_m_Yb
    res["Dt_Y"] = Dt(Y, Y_t) + T(absY2, Ra)
    lead["Dt_Y"] = T(absY2, Ra)
    res["Dt_R"] = Dt(R, Rt) + 1j * sig * T(pw["Jm12"] * one_m_Y ** 2, Wd.dx(2))
    lead["Dt_R"] = 1j * sig * T(pw["Jm12"] * one_m_Y ** 2, Wd.dx(2))
    J_t = 2.0 * ((1.0 + Wd.conj()) * Wt).real
    for e in exponents:
        Js = Wd.apply(lambda x, e=e: np.abs(1.0 + x) ** (2 * e))
        Js_t = e * Wd.apply(lambda x, e=e: np.abs(1.0 + x) ** (2 * e - 2)) * J_t
        res[f"Dt_J[{e:g}]"] = Dt(Js, Js_t) + e * Js * b.dx()
        lead[f"Dt_J[{e:g}]"] = e * Js * b.dx()
        main = e * (T(Js * one_m_Yb, Ra) + T(Js * one_m_Y, R.conj().dx()))
        res[f"J_t[{e:g}]"] = Js_t + main
        lead[f"J_t[{e:g}]"] = main
    return ResidualReport(
        residuals=res,
        sobolev={k: sobolev_norm(v, s) for k, v in res.items()},
        zygmund={k: zygmund_norm(v, 0.5) for k, v in res.items()},
        leading={k: sobolev_norm(v, s) for k, v in lead.items()},
        s=s,
    )


def commutator_terms(d: DiffState, u: SpectralField) -> dict:
    """[T_{D_t}, calL] u and candidate leading terms, calL = ∂ T_{J^{-1/2}} ∂.

    ``printed``: -∂ T_{Re T_{J^{-1/2}(1-Ȳ)} R_a} ∂ u.
    ``printed_half``: -(1/2) ∂ T_{J^{-1/2} b_a} ∂ u.
    ``derived``: -(3/2) ∂ T_{b_a} ∂ u + T_{b_aa} ∂ u, which also keeps the
    outer commutator [T_b ∂, ∂] that the printed form leaves out.
    """
    check_jacobian(d.Wd)
    aux = aux_fields(d)
    pw = _pointwise(d)
    Wt = clip_holo(rhs_wr(d).first)
    J_t = 2.0 * ((1.0 + d.Wd.conj()) * Wt).real
    Jm12_t = -0.5 * pw["Jm32"] * J_t
    b = aux.b
    ba = b.dx()
    L = lambda f: operator_para_L(f, d)  # noqa: E731
    ua = u.dx()
    comm = T(Jm12_t, ua).dx() + T(b, L(u).dx()) - L(T(b, ua))
    coeff = T(pw["Jm12"] * pw["inv_bar"], d.R.dx()).real
    return {
        "commutator": comm,
        "printed": -T(coeff, ua).dx(),
        "printed_half": -0.5 * T(pw["Jm12"] * ba, ua).dx(),
        "derived": -1.5 * T(ba, ua).dx() + T(ba.dx(), ua),
    }


def commutator_residual(d: DiffState, u: SpectralField, s: float = 0.0,
                        form: str = "printed") -> float:
    """||[T_{D_t}, calL] u - leading(u)||_{H^s} for the chosen leading form."""
    terms = commutator_terms(d, u)
    if form not in ("printed", "printed_half", "derived"):
        raise ValueError(f"unknown leading form {form!r}")
    return sobolev_norm(terms["commutator"] - terms[form], s)
