"""Closed-form normal-form symbols and the linear systems that define them.

Holomorphic blocks are functions of (xi, eta): the first argument sits at xi,
the second at eta, the output at xi + eta.  Mixed blocks are functions of
(eta, zeta): the conjugated argument has (pre-conjugation) frequency eta, the
holomorphic one zeta, and the output sits at zeta - eta.  The toy cubic block
uses (xi, eta) with zeta = xi + eta.

Every symbol carries its own cutoff, so it is applied with the unrestricted
bilinear region.  Symbols vanish when an input frequency is zero (all fields
involved have zero mean) and, for mixed blocks, when the output is not strictly
negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from ..paracalc import BilinearSymbol
from ..spectral_core import DEFAULT_CUTOFF, CutoffParams, chi1, chi2

__all__ = [
    "SymbolBlock",
    "SymbolFamily",
    "VerifyResult",
    "FAMILY_NAMES",
    "symbol_catalog",
    "get_family",
    "verify_family",
    "sample_support",
    "quad_holo",
    "quad_mixed",
]

FAMILY_NAMES = (
    "full_hlh", "full_alh", "full_hhh", "full_ahh", "toy_cubic",
    "lin_bal1", "lin_bal2h", "lin_bal2a", "lin_lh1", "lin_lh2h", "lin_lh2a",
)


def quad_holo(x, y):
    """9 xi^2 + 14 xi eta + 9 eta^2, positive away from the origin."""
    return 9 * x * x + 14 * x * y + 9 * y * y


def quad_mixed(y, z):
    """4 eta^2 - 4 eta zeta + 9 zeta^2, positive away from the origin."""
    return 4 * y * y - 4 * y * z + 9 * z * z


# -- cutoffs -----------------------------------------------------------------
def _cut_lh(p, q, cut):
    return chi1(p, q, cut)


def _cut_hh(p, q, cut):
    return chi2(p, q, cut)


def _cut_hh_proj(p, q, cut):
    return chi2(p, q, cut) * (q < p)


CUTOFFS = {"chi1": _cut_lh, "chi2": _cut_hh, "chi2_proj": _cut_hh_proj}


@dataclass(frozen=True, eq=False)
class SymbolBlock:
    """One algebraic system together with the closed forms that solve it.

    ``forms`` maps symbol names to rational functions without the cutoff.
    ``system(p, q, c)`` returns (matrix, rhs) for cutoff value ``c``, with the
    unknown vector ordered by ``unknowns(p, q, forms)``.
    """

    kind: str  # "holo", "mixed" or "toy"
    cutoff: str
    forms: Mapping[str, Callable]
    system: Callable
    unknowns: Callable
    printed: Mapping[str, Callable] = field(default_factory=dict)

    def cutoff_value(self, p, q, cut: CutoffParams = DEFAULT_CUTOFF):
        return CUTOFFS[self.cutoff](np.asarray(p, float), np.asarray(q, float), cut)

    def _live(self, p, q):
        live = (p != 0) & (q != 0)
        if self.kind == "mixed":
            live &= q < p
        elif self.kind == "toy":
            live &= (p + q) != 0
        return live

    def evaluate(self, name: str, p, q, cut: CutoffParams = DEFAULT_CUTOFF, printed: bool = False):
        """Symbol value including its cutoff; zero off the active lattice."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        table = self.printed if printed and name in self.printed else self.forms
        live = self._live(p, q)
        c = self.cutoff_value(p, q, cut)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = table[name](p, q) * c
        return np.where(live & (c != 0), val, 0.0)

    def bilinear(self, name: str, cut: CutoffParams = DEFAULT_CUTOFF, printed: bool = False) -> BilinearSymbol:
        if self.kind == "toy":
            raise TypeError("the toy cubic symbols are trilinear")
        region = "mixed_full" if self.kind == "mixed" else "full"
        return BilinearSymbol(lambda p, q: self.evaluate(name, p, q, cut, printed), region=region, name=name)

    def denominator(self, p, q):
        return quad_mixed(p, q) if self.kind == "mixed" else quad_holo(p, q)


@dataclass(frozen=True, eq=False)
class SymbolFamily:
    name: str
    blocks: Mapping[str, SymbolBlock]

    @property
    def symbols(self) -> dict:
        return {f"{b}:{s}" if len(self.blocks) > 1 else s: (blk, s)
                for b, blk in self.blocks.items() for s in blk.forms}

    def block(self, key: str | None = None) -> SymbolBlock:
        if key is None:
            if len(self.blocks) != 1:
                raise KeyError(f"{self.name} has blocks {list(self.blocks)}")
            return next(iter(self.blocks.values()))
        return self.blocks[key]

    def evaluate(self, symbol: str, p, q, cut: CutoffParams = DEFAULT_CUTOFF, block: str | None = None):
        return self.block(block).evaluate(symbol, p, q, cut)

    def bilinear(self, symbol: str, block: str | None = None, cut: CutoffParams = DEFAULT_CUTOFF) -> BilinearSymbol:
        return self.block(block).bilinear(symbol, cut)


# -- helpers to assemble 4x4 systems ----------------------------------------
def _stack(rows, rhs):
    A = np.stack([np.stack(np.broadcast_arrays(*r), axis=-1) for r in rows], axis=-2)
    b = np.stack(np.broadcast_arrays(*rhs), axis=-1)
    return A, b


def _abcd(p, q, f):
    return np.stack([f["a"](p, q), f["b"](p, q), f["c"](p, q), f["d"](p, q)], axis=-1)


Q1, Q2 = quad_holo, quad_mixed


# -- low-high holomorphic (water waves) --------------------------------------
def _hlh_system(x, y, c):
    s, z0 = x + y, 0 * x
    return _stack(
        [(s, -x, y * y, z0), (z0, y, -x * x, -s), (y, z0, s * s, x), (x * x, -s * s, z0, y * y)],
        [s * c, -x * c, -s * c, (3 * x * y + 2.5 * x * x) * c],
    )


HLH = {
    "a": lambda x, y: (-9 * x**4 - x**3 * y + 26 * x**2 * y**2 + 28 * x * y**3 + 12 * y**4) / (2 * x * y * Q1(x, y)),
    "b": lambda x, y: -(9 * x**3 + 28 * x**2 * y + 27 * x * y**2 + 4 * y**3) / (2 * y * Q1(x, y)),
    "c": lambda x, y: -(3 * x**3 + 6 * x**2 * y + 11 * x * y**2 + 6 * y**3) / (x * y * Q1(x, y)),
    "d": lambda x, y: (6 * x**3 + 15 * x**2 * y + 7 * x * y**2 - 4 * y**3) / (2 * y * Q1(x, y)),
}


# -- low-high mixed (water waves) --------------------------------------------
def _alh_system(y, z, c):
    s, z0 = z - y, 0 * y
    return _stack(
        [(s, y, z * z, z0), (z0, z, y * y, -s), (z, z0, s * s, -y), (y * y, s * s, z0, -z * z)],
        [s * c, -y * c, -s * c, 0.5 * y * y * c],
    )


ALH = {
    "a": lambda y, z: -(6 * y**4 - 15 * y**3 * z + 20 * y**2 * z**2 - 20 * y * z**3 + 12 * z**4) / (2 * y * (z - y) * Q2(y, z)),
    "b": lambda y, z: (2 * y**3 - 3 * y**2 * z + 7 * y * z**2 - 14 * z**3) / (2 * (z - y) * Q2(y, z)),
    "c": lambda y, z: z * (5 * y**2 - 7 * y * z + 6 * z**2) / (y * (z - y) * Q2(y, z)),
    "d": lambda y, z: (8 * y**3 - 20 * y**2 * z + 23 * y * z**2 - 14 * z**3) / (2 * (z - y) * Q2(y, z)),
}


# -- balanced holomorphic (water waves): symmetrized system -------------------
def _hhh_system(x, y, c):
    # unknowns: a(xi, eta), a(eta, xi), b, c; b and c are symmetric
    s, z0 = x + y, 0 * x
    return _stack(
        [(s, z0, -2 * x, 2 * y * y), (z0, s, -2 * y, 2 * x * x),
         (0.5 * y, 0.5 * x, z0, s * s), (0.5 * x * x, 0.5 * y * y, -s * s, z0)],
        [s * c, s * c, -0.5 * s * c, 0.25 * (5 * x * x + 6 * x * y + 5 * y * y) * c],
    )


def _hhh_unknowns(x, y, f):
    return np.stack([f["a"](x, y), f["a"](y, x), f["b"](x, y), f["c"](x, y)], axis=-1)


HHH = {
    "a": lambda x, y: (6 * y**4 + 21 * y**3 * x + 15 * y**2 * x**2 - y * x**3 - 9 * x**4) / (2 * x * y * Q1(x, y)),
    "b": lambda x, y: -(x + y) ** 2 * (9 * x**2 + 10 * x * y + 9 * y**2) / (4 * x * y * Q1(x, y)),
    "c": lambda x, y: -3 * (x + y) ** 3 / (2 * x * y * Q1(x, y)),
}
HHH_PRINTED = {
    "a": lambda x, y: -(27 * x**4 + 39 * x**3 * y + 23 * x**2 * y**2 - 3 * x * y**3 - 6 * y**4) / (2 * x * y * Q1(x, y)),
    "b": lambda x, y: -3 * (x + y) ** 2 * (9 * x**2 + 10 * x * y + 9 * y**2) / (4 * x * y * Q1(x, y)),
}


# -- balanced mixed (water waves) --------------------------------------------
def _ahh_system(y, z, c):
    s, z0 = z - y, 0 * y
    return _stack(
        [(s, y, z * z, z0), (z0, z, y * y, -s), (z, z0, s * s, -y), (y * y, s * s, z0, -z * z)],
        [s * c, s * c, -s * c, 0.5 * (y * y - z * z) * c],
    )


AHH = {
    "a": lambda y, z: 3 * (y - z) * (2 * y**2 - y * z + 2 * z**2) / (2 * y * Q2(y, z)),
    "b": lambda y, z: -(y - z) * (2 * y**2 + y * z + 9 * z**2) / (2 * y * Q2(y, z)),
    "c": lambda y, z: -3 * z * (y - z) / (y * Q2(y, z)),
    "d": lambda y, z: -(y - z) * (8 * y**2 - 8 * y * z + 9 * z**2) / (2 * y * Q2(y, z)),
}
AHH_PRINTED = {"c": lambda y, z: -3 * z / (y * Q2(y, z))}


# -- toy cubic energy correction ----------------------------------------------
def _toy_system(x, y, c):
    z, z0 = x + y, 0 * x
    return _stack(
        [(z * z, -y * y, x, z0), (z0, x * x, -y, -z * z), (x * x, z0, z, y * y), (-y, z, z0, -x)],
        [-0.5 * x * y * z * c, z0, z0, z0],
    )


TOY = {
    "a": lambda x, y: -3 * (x + y) ** 3 / (2 * Q1(x, y)),
    "b": lambda x, y: -(x + y) * (2 * x**2 + 3 * x * y + 3 * y**2) / (2 * Q1(x, y)),
    "c": lambda x, y: x * (x + y) * (3 * x**2 + 3 * x * y + 2 * y**2) / (2 * Q1(x, y)),
    "d": lambda x, y: -x * (x + y) ** 2 / Q1(x, y),
}


# -- linearized flow: balanced, first group (also the low-high G0/K0 group) ----
def _bal1_system(y, z, c):
    s, z0 = z - y, 0 * y
    return _stack(
        [(s, y, z * z, z0), (z0, z, y * y, -s), (z, z0, s * s, -y), (y * y, s * s, z0, -z * z)],
        [-y * c, -y * c, y * c, 0.5 * y * (y + z) * c],
    )


BAL1 = {
    "a": lambda y, z: 3 * (2 * y**2 - y * z + 2 * z**2) / (2 * Q2(y, z)),
    "b": lambda y, z: -(2 * y**2 + y * z + 9 * z**2) / (2 * Q2(y, z)),
    "c": lambda y, z: -3 * z / Q2(y, z),
    "d": lambda y, z: -(8 * y**2 - 8 * y * z + 9 * z**2) / (2 * Q2(y, z)),
}


# -- linearized flow: balanced holomorphic, second group ----------------------
def _bal2h_system(x, y, c):
    s, z0 = x + y, 0 * x
    return _stack(
        [(s, -y, x * x, z0), (z0, x, -y * y, -s), (x, z0, s * s, y), (y * y, -s * s, z0, x * x)],
        [z0, -s * c, -y * c, s * (x + 1.5 * y) * c],
    )


BAL2H = {
    "a": lambda x, y: (2 * x**3 - 9 * x**2 * y - 16 * x * y**2 - 9 * y**3) / (2 * x * Q1(x, y)),
    "b": lambda x, y: -(15 * x**3 + 31 * x**2 * y + 25 * x * y**2 + 9 * y**3) / (2 * x * Q1(x, y)),
    "c": lambda x, y: -(x**2 + 4 * x * y + 3 * y**2) / (x * Q1(x, y)),
    "d": lambda x, y: (3 * x**3 + 12 * x**2 * y + 11 * x * y**2 + 6 * y**3) / (2 * x * Q1(x, y)),
}


# -- linearized flow: balanced mixed, second group ----------------------------
def _bal2a_system(y, z, c):
    s, z0 = z - y, 0 * y
    return _stack(
        [(s, -z, -y * y, z0), (z0, y, z * z, s), (y, z0, -s * s, -z), (z * z, -s * s, z0, -y * y)],
        [-z * c, 0.5 * z * c, z * c, 0.5 * z * (y + z) * c],
    )


BAL2A = {
    "a": lambda y, z: z * (8 * y**2 - 6 * y * z + 9 * z**2) / (2 * y * Q2(y, z)),
    "b": lambda y, z: 3 * z**3 * (2 * y - 3 * z) / (2 * y * (y - z) * Q2(y, z)),
    "c": lambda y, z: 3 * z**2 * (2 * y - z) / (2 * y * (y - z) * Q2(y, z)),
    "d": lambda y, z: -z * (4 * y**2 + 3 * z**2) / (2 * y * Q2(y, z)),
}
BAL2A_PRINTED = {
    "a": lambda y, z: z * (8 * y**2 - 8 * y * z + 9 * z**2) / (2 * y * Q2(y, z)),
    "b": lambda y, z: z * (2 * y**2 + y * z + 9 * z**2) / (2 * y * Q2(y, z)),
    "c": lambda y, z: 3 * z**2 / (y * Q2(y, z)),
    "d": lambda y, z: -z * (2 * y**2 - y * z + 2 * z**2) / (2 * y * Q2(y, z)),
}


# -- linearized flow: low-high, linearized variables at high frequency --------
def _lh_h1_system(x, y, c):
    s, z0 = x + y, 0 * x
    return _stack(
        [(s, -y, x * x, z0), (z0, x, -y * y, -s), (x, z0, s * s, y), (y * y, -s * s, z0, x * x)],
        [z0, -0.5 * x * c, z0, x * s * c],
    )


LH_H1 = {
    "a": lambda x, y: -(x**3 + 3 * x**2 * y + 5 * x * y**2 + 3 * y**3) / (Q1(x, y) * y),
    "b": lambda x, y: -(3 * x**3 + 15 * x**2 * y + 16 * x * y**2 + 6 * y**3) / (2 * Q1(x, y) * y),
    "c": lambda x, y: (2 * x**2 + 5 * x * y + y**2) / (2 * Q1(x, y) * y),
    "d": lambda x, y: -(3 * x**3 + 3 * x**2 * y + x * y**2 + y**3) / (2 * Q1(x, y) * y),
}


def _lh_a1_system(y, z, c):
    s, z0 = z - y, 0 * y
    return _stack(
        [(s, -z, -y * y, z0), (z0, y, z * z, s), (y, z0, -s * s, -z), (z * z, -s * s, z0, -y * y)],
        [z0, 0.5 * y * c, z0, y * z * c],
    )


LH_A1 = {
    "a": lambda y, z: -z * (y**2 - y * z + 3 * z**2) / ((y - z) * Q2(y, z)),
    "b": lambda y, z: (2 * y**3 - 5 * y**2 * z + 8 * y * z**2 - 6 * z**3) / (2 * (y - z) * Q2(y, z)),
    "c": lambda y, z: z**2 / (2 * (y - z) * Q2(y, z)),
    "d": lambda y, z: -(2 * y**3 - y**2 * z + 4 * y * z**2 + z**3) / (2 * (y - z) * Q2(y, z)),
}
LH_A1_PRINTED = {
    "a": lambda y, z: z * (y**2 - y * z + 3 * z**2) / ((y - z) * Q2(y, z)),
    "c": lambda y, z: 3 * z**2 / (2 * (y - z) * Q2(y, z)),
}


# -- linearized flow: low-high, linearized variables at low frequency ---------
def _lh_h2_system(x, y, c):
    s, z0 = x + y, 0 * x
    return _stack(
        [(s, -x, y * y, z0), (z0, y, -x * x, -s), (y, z0, s * s, x), (x * x, -s * s, z0, y * y)],
        [z0, -s * c, -x * c, (1.5 * x * s + y * y) * c],
    )


LH_H2 = {
    "a": lambda x, y: -(9 * x**3 + 10 * x**2 * y + 3 * x * y**2 - 6 * y**3) / (2 * y * Q1(x, y)),
    "b": lambda x, y: -(9 * x**3 + 19 * x**2 * y + 19 * x * y**2 + 9 * y**3) / (2 * y * Q1(x, y)),
    "c": lambda x, y: -3 * (x + y) ** 2 / (y * Q1(x, y)),
    "d": lambda x, y: 3 * (2 * x**3 + 5 * x**2 * y + 6 * x * y**2 + 3 * y**3) / (2 * y * Q1(x, y)),
}


def _build() -> dict:
    def blk(kind, cutoff, forms, system, printed=None, unknowns=_abcd):
        return SymbolBlock(kind, cutoff, forms, system, unknowns, printed or {})

    fams = [
        SymbolFamily("full_hlh", {"h": blk("holo", "chi1", HLH, _hlh_system)}),
        SymbolFamily("full_alh", {"a": blk("mixed", "chi1", ALH, _alh_system)}),
        SymbolFamily("full_hhh", {"h": blk("holo", "chi2", HHH, _hhh_system, HHH_PRINTED, _hhh_unknowns)}),
        SymbolFamily("full_ahh", {"a": blk("mixed", "chi2_proj", AHH, _ahh_system, AHH_PRINTED)}),
        SymbolFamily("toy_cubic", {"t": blk("toy", "chi1", TOY, _toy_system)}),
        SymbolFamily("lin_bal1", {"a": blk("mixed", "chi2_proj", BAL1, _bal1_system)}),
        SymbolFamily("lin_bal2h", {"h": blk("holo", "chi2", BAL2H, _bal2h_system)}),
        SymbolFamily("lin_bal2a", {"a": blk("mixed", "chi2_proj", BAL2A, _bal2a_system, BAL2A_PRINTED)}),
        SymbolFamily("lin_lh1", {"h": blk("holo", "chi1", LH_H1, _lh_h1_system),
                                 "a": blk("mixed", "chi1", LH_A1, _lh_a1_system, LH_A1_PRINTED)}),
        SymbolFamily("lin_lh2h", {"h": blk("holo", "chi1", LH_H2, _lh_h2_system)}),
        # same system as the first balanced group, with the low-high cutoff
        SymbolFamily("lin_lh2a", {"a": blk("mixed", "chi1", BAL1, _bal1_system)}),
    ]
    return {f.name: f for f in fams}


_CATALOG = _build()


def symbol_catalog() -> list[SymbolFamily]:
    return [_CATALOG[n] for n in FAMILY_NAMES]


def get_family(name: str) -> SymbolFamily:
    try:
        return _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown symbol family {name!r}; expected one of {FAMILY_NAMES}") from None


# -- verification --------------------------------------------------------------
def sample_support(block: SymbolBlock, n: int, rng: np.random.Generator,
                   k_max: int = 4096, cut: CutoffParams = DEFAULT_CUTOFF):
    """Integer frequency pairs strictly inside the block's cutoff support."""
    ps, qs = [], []
    while sum(len(p) for p in ps) < n:
        m = 4 * n
        p = -rng.integers(1, k_max, size=m)
        q = -rng.integers(1, k_max, size=m)
        c = block.cutoff_value(p, q, cut)
        ok = (c > 0) & block._live(p.astype(float), q.astype(float))
        ps.append(p[ok])
        qs.append(q[ok])
    return np.concatenate(ps)[:n].astype(float), np.concatenate(qs)[:n].astype(float)


@dataclass(frozen=True)
class VerifyResult:
    family: str
    n_samples: int
    max_residual: float
    min_denominator: float

    def to_dict(self) -> dict:
        return {"family": self.family, "n_samples": self.n_samples,
                "max_residual": self.max_residual, "min_denominator": self.min_denominator}


def block_residual(block: SymbolBlock, p, q, cut: CutoffParams = DEFAULT_CUTOFF, printed: bool = False) -> np.ndarray:
    """Per-sample relative residual max_i |(A s - b)_i| / max(sum_j |A_ij s_j|, |b_i|)."""
    c = block.cutoff_value(p, q, cut)
    A, b = block.system(p, q, c)
    forms = dict(block.forms)
    if printed:
        forms.update(block.printed)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = block.unknowns(p, q, forms) * c[..., None]
    terms = A * s[..., None, :]
    res = np.abs(terms.sum(-1) - b)
    scale = np.maximum(np.abs(terms).sum(-1), np.abs(b))
    scale = np.where(scale > 0, scale, 1.0)
    return np.max(res / scale, axis=-1)


def verify_family(f: SymbolFamily, sample=None, n: int = 1000, seed: int = 0,
                  cut: CutoffParams = DEFAULT_CUTOFF, printed: bool = False) -> VerifyResult:
    """Max relative residual of the closed forms in their systems, plus min denominator.

    ``sample`` may be a mapping from block key to (p, q) arrays, or a single
    (p, q) pair used for every block.
    """
    rng = np.random.default_rng(seed)
    worst, min_den, count = 0.0, np.inf, 0
    for key, blk in f.blocks.items():
        if sample is None:
            p, q = sample_support(blk, n, rng, cut=cut)
        elif isinstance(sample, Mapping):
            p, q = sample[key]
        else:
            p, q = sample
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        den = blk.denominator(p, q)
        if np.any(den <= 0):
            raise ArithmeticError(f"{f.name}: resonant denominator at a sampled point")
        min_den = min(min_den, float(den.min()))
        r = block_residual(blk, p, q, cut, printed)
        if not np.all(np.isfinite(r)):
            raise ArithmeticError(f"{f.name}: singular closed form at a sampled point")
        worst = max(worst, float(r.max()))
        count += len(p)
    return VerifyResult(f.name, count, worst, min_den)
