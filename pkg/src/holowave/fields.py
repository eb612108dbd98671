"""Water-wave states, auxiliary fields, conserved functionals and scaling.

Two formulations are carried side by side: the surface pair (W, Q) and the
differentiated pair (Wd, R) = (W_a, Q_a / (1 + W_a)).  Everything nonlinear
and non-polynomial is evaluated on the padded physical grid and truncated;
holomorphic outputs are re-projected with P.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .paracalc import zygmund_norm
from .spectral_core import GridSpec, SpectralField, clip_holo, project_anti, project_holo

__all__ = [
    "DegenerateJacobianError",
    "PhysicalParams",
    "SurfaceState",
    "DiffState",
    "AuxFields",
    "ControlNorms",
    "EnergyTerms",
    "JACOBIAN_FLOOR",
    "holomorphy_defect",
    "check_jacobian",
    "differentiate_state",
    "aux_fields",
    "b_from_surface",
    "M_forms",
    "energy_terms",
    "conserved_energy",
    "conserved_momentum",
    "control_norms",
    "scale_state",
    "state_to_json",
    "state_from_json",
    "save_state",
    "load_state",
]

JACOBIAN_FLOOR = 0.1


class DegenerateJacobianError(ArithmeticError):
    """Raised when min |1 + W_a| drops below the admissibility floor."""


@dataclass(frozen=True)
class PhysicalParams:
    g: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.g < 0:
            raise ValueError("g must be non-negative")


def holomorphy_defect(f: SpectralField) -> float:
    """||P̄ f|| / ||f|| with the zero mode excluded (0 for the zero field)."""
    norm = f.l2()
    if norm == 0:
        return 0.0
    pos = np.where(f.grid.k > 0, f.coeffs, 0.0)
    return float(np.sqrt(2 * np.pi * np.sum(np.abs(pos) ** 2)) / norm)


@dataclass(frozen=True, eq=False)
class SurfaceState:
    W: SpectralField
    Q: SpectralField
    params: PhysicalParams = PhysicalParams()

    def __post_init__(self):
        if self.W.grid.n_modes != self.Q.grid.n_modes:
            raise ValueError("W and Q live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.W.grid

    @classmethod
    def zeros(cls, grid: GridSpec, params: PhysicalParams = PhysicalParams()) -> "SurfaceState":
        return cls(SpectralField.zeros(grid), SpectralField.zeros(grid), params)

    def defects(self) -> dict:
        return {"W": holomorphy_defect(self.W), "Q": holomorphy_defect(self.Q),
                "mean_W": abs(self.W.mean), "mean_Q": abs(self.Q.mean)}

    def validate(self, tol: float = 1e-8) -> None:
        d = self.defects()
        bad = {k: v for k, v in d.items() if v > tol * max(1.0, self.W.l2() + self.Q.l2())}
        if bad:
            raise ValueError(f"state is not holomorphic with zero mean: {bad}")


@dataclass(frozen=True, eq=False)
class DiffState:
    Wd: SpectralField
    R: SpectralField
    params: PhysicalParams = PhysicalParams()
    holo_defect_R: float = 0.0

    def __post_init__(self):
        if self.Wd.grid.n_modes != self.R.grid.n_modes:
            raise ValueError("Wd and R live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.Wd.grid

    @classmethod
    def zeros(cls, grid: GridSpec, params: PhysicalParams = PhysicalParams()) -> "DiffState":
        return cls(SpectralField.zeros(grid), SpectralField.zeros(grid), params)


def check_jacobian(Wd: SpectralField, floor: float = JACOBIAN_FLOOR) -> float:
    """Return min |1 + Wd| on the padded grid; raise below ``floor``."""
    m = float(np.min(np.abs(1.0 + Wd.padded_values())))
    if not np.isfinite(m) or m < floor:
        raise DegenerateJacobianError(f"min |1 + W_a| = {m:.3g} is below {floor}")
    return m


def differentiate_state(s: SurfaceState) -> DiffState:
    Wd = s.W.dx()
    check_jacobian(Wd)
    raw = s.Q.dx() / (1.0 + Wd)
    R = clip_holo(raw)
    return DiffState(Wd, R, s.params, holomorphy_defect(raw))


@dataclass(frozen=True, eq=False)
class AuxFields:
    Y: SpectralField
    J: SpectralField
    a: SpectralField
    b: SpectralField
    M: SpectralField
    c: SpectralField
    F: SpectralField
    a_half: SpectralField
    """The alternative a = Im P[R R̄_a], kept for comparison."""
    M_alt: SpectralField
    """M from its projected (second) expression."""

    @property
    def one_minus_Y(self) -> SpectralField:
        return 1.0 - self.Y


def M_forms(Wd: SpectralField, R: SpectralField, Y: SpectralField, b: SpectralField):
    """Both expressions for M: the pointwise form and the projected form."""
    Ra = R.dx()
    pointwise = Ra.pointwise(lambda ra, w: ra / (1.0 + np.conj(w)), Wd)
    M1 = pointwise + pointwise.conj() - b.dx()
    Yb, Rb = Y.conj(), R.conj()
    M2 = project_anti(Rb * Y.dx() - Ra * Yb) + project_holo(R * Yb.dx() - Rb.dx() * Y)
    return M1, M2


def aux_fields(d: DiffState) -> AuxFields:
    Wd, R = d.Wd, d.R
    check_jacobian(Wd)
    Y = clip_holo(Wd / (1.0 + Wd))
    J = Wd.apply(lambda w: np.abs(1.0 + w) ** 2).real
    Ra = R.dx()
    Rb = R.conj()
    a = (1j * (project_anti(Rb * Ra) - project_holo(R * Rb.dx()))).real
    a_half = project_holo(R * Rb.dx()).imag
    RY = R.pointwise(lambda r, w: r / (1.0 + np.conj(w)), Wd)  # (1 - Ȳ) R
    b = 2.0 * project_holo(RY).real
    M1, M2 = M_forms(Wd, R, Y, b)
    Wa = Wd.dx()
    X = Wa.pointwise(lambda wa, w: wa / (np.abs(1.0 + w) * (1.0 + w)), Wd)
    c = 2.0 * X.imag
    F = project_holo(RY - RY.conj())
    return AuxFields(Y=Y, J=J, a=a, b=b, M=M1.real, c=c, F=F, a_half=a_half, M_alt=M2)


def b_from_surface(s: SurfaceState) -> SpectralField:
    """b = 2 Re P[Q_a / J] straight from (W, Q)."""
    Wa = s.W.dx()
    return 2.0 * project_holo(s.Q.dx().pointwise(lambda q, w: q / np.abs(1.0 + w) ** 2, Wa)).real


# -- conserved quantities ---------------------------------------------------
def _integral(values: np.ndarray) -> complex:
    """∫_0^{2pi} of a sampled periodic function (exact for band-limited data)."""
    return complex(2 * np.pi * np.mean(values))


@dataclass(frozen=True)
class EnergyTerms:
    """Separate pieces of the conserved energy.

    kinetic: Re ∫ -i Q Q̄_a;  kinetic_literal: Re ∫ Q Q̄_a;
    capillary: ∫ (J^{1/2} - 1 - Re W_a);  gravity: Re ∫ |W|^2 (1 + W_a);
    potential: ∫ (Im W)^2 (1 + Re W_a), the potential energy of the surface.
    g and sigma are not included.
    """

    kinetic: float
    kinetic_literal: float
    capillary: float
    gravity: float
    potential: float


def energy_terms(s: SurfaceState) -> EnergyTerms:
    W, Q = s.W, s.Q
    q = Q.padded_values()
    qb_a = np.conj(Q.dx().padded_values())
    w = W.padded_values()
    wa = W.dx().padded_values()
    return EnergyTerms(
        kinetic=_integral(-1j * q * qb_a).real,
        kinetic_literal=_integral(q * qb_a).real,
        capillary=_integral(np.abs(1.0 + wa) - 1.0 - wa.real).real,
        gravity=_integral(np.abs(w) ** 2 * (1.0 + wa)).real,
        potential=_integral(w.imag ** 2 * (1.0 + wa.real)).real,
    )


# The flow conserves  ∫ -i Q Q̄_a + 4σ (J^{1/2} - 1 - Re W_a) + 2g (Im W)^2 (1 + Re W_a).
# Its quadratic part is σ||w||^2_{Ḣ^1} + ||q||^2_{Ḣ^{1/2}} + g||w||^2_{L^2}.  The printed
# weights (2σ and g|W|^2(1 + W_a)) are kept as variants for comparison.
CAPILLARY_WEIGHT = 4.0
PRINTED_CAPILLARY_WEIGHT = 2.0


def conserved_energy(s: SurfaceState, variant: str = "default") -> float:
    """Energy of the surface state.

    ``default``: the functional the flow conserves (-i kinetic convention).
    ``printed_weight``: -i kinetic term with capillary weight 2 and gravity g|W|^2(1 + W_a).
    ``literal``: Re ∫ Q Q̄_a kinetic term with the same printed weights.
    """
    t = energy_terms(s)
    g, sig = s.params.g, s.params.sigma
    if variant == "default":
        return t.kinetic + CAPILLARY_WEIGHT * sig * t.capillary + 2.0 * g * t.potential
    if variant == "printed_weight":
        return t.kinetic + PRINTED_CAPILLARY_WEIGHT * sig * t.capillary + g * t.gravity
    if variant == "literal":
        return t.kinetic_literal + PRINTED_CAPILLARY_WEIGHT * sig * t.capillary + g * t.gravity
    raise ValueError(f"unknown energy variant {variant!r}")


def conserved_momentum(s: SurfaceState, rtol: float = 1e-10) -> float:
    q = s.Q.padded_values()
    w_a = s.W.dx().padded_values()
    val = -1j * _integral(q * np.conj(w_a) - np.conj(q) * w_a)
    scale = 2 * np.pi * max(np.max(np.abs(q)) * np.max(np.abs(w_a)), 1e-300)
    if abs(val.imag) > rtol * scale:
        raise FloatingPointError(f"momentum has imaginary residue {val.imag:.3e}")
    return float(val.real)


# -- control norms ------------------------------------------------------------
@dataclass(frozen=True)
class ControlNorms:
    a0: float
    a1: float
    a32: float
    eps: float

    def __post_init__(self):
        if min(self.a0, self.a1, self.a32) < 0:
            raise ValueError("control norms must be non-negative")


def control_norms(d: DiffState, eps: float = 0.01) -> ControlNorms:
    if not 0 < eps <= 0.25:
        raise ValueError("eps must lie in (0, 1/4]")
    Z = zygmund_norm
    return ControlNorms(
        a0=Z(d.Wd, eps) + Z(d.R, eps),
        a1=Z(d.Wd, 1 + eps) + Z(d.R, 0.5 + eps),
        a32=Z(d.Wd, 1.5) + Z(d.R, 1 + eps),
        eps=eps,
    )


# -- scaling ------------------------------------------------------------------
def _dilate(f: SpectralField, lam: int, tail_tol: float) -> SpectralField:
    """u(α) -> u(λα): mode k moves to λk.

    Modes pushed off the lattice are dropped when their amplitude is below
    ``tail_tol`` times the largest coefficient; otherwise the dilation is refused.
    """
    grid = f.grid
    out = np.zeros_like(f.coeffs)
    half = grid.n_modes // 2
    scale = max(f.max_abs(), 1e-300)
    for idx, k in enumerate(grid.k):
        if f.coeffs[idx] == 0:
            continue
        kk = lam * int(k)
        if not -half < kk < half:
            if abs(f.coeffs[idx]) > tail_tol * scale:
                raise ValueError(f"mode {k} leaves the lattice under dilation by {lam}")
            continue
        out[grid.index(kk)] += f.coeffs[idx]
    return SpectralField(grid, out)


def scale_state(d: DiffState, lam: int, tail_tol: float = 1e-10,
                gravity_rule: str = "consistent") -> DiffState:
    """Apply the scaling symmetry at t = 0: (Wd, R)(λα), with R multiplied by λ^{1/2}.

    Time is rescaled by λ^{3/2}: the scaled data evolved to time t matches the
    original evolved to λ^{3/2} t. This holds when gravity becomes λ^2 g
    (``gravity_rule="consistent"``); ``"printed"`` uses g/λ^2 instead, which
    only agrees when g = 0.
    """
    lam_i = int(lam)
    if lam_i != lam or lam_i < 1 or lam_i & (lam_i - 1):
        raise ValueError("lambda must be a positive power of two")
    if gravity_rule == "consistent":
        g = d.params.g * lam_i ** 2
    elif gravity_rule == "printed":
        g = d.params.g / lam_i ** 2
    else:
        raise ValueError(f"unknown gravity_rule {gravity_rule!r}")
    params = replace(d.params, g=g)
    return DiffState(_dilate(d.Wd, lam_i, tail_tol), np.sqrt(lam_i) * _dilate(d.R, lam_i, tail_tol), params)


# -- JSON ---------------------------------------------------------------------
def _pairs(f: SpectralField) -> list:
    return [[float(z.real), float(z.imag)] for z in f.ordered]


def _field(grid: GridSpec, pairs) -> SpectralField:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (grid.n_modes, 2):
        raise ValueError(f"expected {grid.n_modes} [re, im] pairs")
    return SpectralField.from_ordered(grid, arr[:, 0] + 1j * arr[:, 1])


def state_to_json(state: SurfaceState | DiffState) -> dict:
    doc = {"grid": {"n_modes": state.grid.n_modes},
           "params": {"g": state.params.g, "sigma": state.params.sigma}}
    if isinstance(state, SurfaceState):
        doc.update(W=_pairs(state.W), Q=_pairs(state.Q))
    else:
        doc.update(Wd=_pairs(state.Wd), R=_pairs(state.R))
    return doc


def state_from_json(doc: dict) -> SurfaceState | DiffState:
    grid = GridSpec(int(doc["grid"]["n_modes"]))
    params = PhysicalParams(**{k: float(v) for k, v in doc["params"].items()})
    if "W" in doc:
        return SurfaceState(_field(grid, doc["W"]), _field(grid, doc["Q"]), params)
    if "Wd" in doc:
        return DiffState(_field(grid, doc["Wd"]), _field(grid, doc["R"]), params)
    raise ValueError("document holds neither (W, Q) nor (Wd, R)")


def save_state(state, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(state_to_json(state), indent=1))
    return path


def load_state(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read state file {path}: {exc}") from exc
    return state_from_json(doc)
