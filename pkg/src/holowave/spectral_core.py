"""Periodic spectral fields and the elementary Fourier-side operators.

Fields live on the torus [0, 2pi) and are stored by their Fourier coefficients

    u_hat(k) = (1/2pi) * int_0^{2pi} u(alpha) exp(-i k alpha) d alpha,

for the integer frequencies k in {-N/2, ..., N/2 - 1}.  Coefficients are kept in
numpy's FFT ordering internally; ``SpectralField.ordered`` gives them sorted by k.

Holomorphic fields have coefficients only at k <= 0.  ``project_holo`` keeps
negative frequencies, halves the mean and kills positive frequencies, which is
exactly P = (I - iH)/2 with the Hilbert symbol -i sign(k).

Nonlinear evaluation (products, pointwise functions) goes through a padded
physical grid and is truncated back to |k| < N/2.  The Nyquist mode k = -N/2
has no conjugate partner on the lattice, so conjugation and every nonlinear
operation drop it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "GridSpec",
    "SpectralField",
    "CutoffParams",
    "to_spectral",
    "to_physical",
    "hilbert",
    "project_holo",
    "project_anti",
    "derivative",
    "antiderivative",
    "multiplier",
    "japanese",
    "abs_d",
    "lp_block",
    "lp_block_index",
    "chi1",
    "chi2",
    "psi",
    "para_chi",
    "smoothstep",
    "clip_holo",
    "product",
]


@dataclass(frozen=True)
class GridSpec:
    """Collocation grid on [0, 2pi) with ``n_modes`` points (a power of two >= 16)."""

    n_modes: int
    dealias_pad: float = 2

    def __post_init__(self):
        n = self.n_modes
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise ValueError(f"n_modes must be a power of two >= 16, got {n!r}")
        if self.dealias_pad < 1:
            raise ValueError(f"dealias_pad must be >= 1, got {self.dealias_pad!r}")
        m = self.dealias_pad * n
        if abs(m - round(m)) > 1e-12 or int(round(m)) % 2:
            raise ValueError("dealias_pad * n_modes must be an even integer")

    @cached_property
    def k(self) -> np.ndarray:
        """Integer frequencies in FFT order."""
        return np.fft.fftfreq(self.n_modes, d=1.0 / self.n_modes).round().astype(np.int64)

    @cached_property
    def k_sorted(self) -> np.ndarray:
        return np.arange(-self.n_modes // 2, self.n_modes // 2, dtype=np.int64)

    @cached_property
    def order(self) -> np.ndarray:
        """Permutation taking FFT order to ascending-k order."""
        return np.argsort(self.k, kind="stable")

    @cached_property
    def alpha(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_modes) / self.n_modes

    @property
    def n_pad(self) -> int:
        return int(round(self.dealias_pad * self.n_modes))

    @property
    def k_max(self) -> int:
        return self.n_modes // 2

    def index(self, k: int) -> int:
        """Storage position of frequency ``k``."""
        half = self.n_modes // 2
        if not -half <= k < half:
            raise ValueError(f"frequency {k} not represented on N={self.n_modes}")
        return int(k % self.n_modes)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True for every mode that survives nonlinear evaluation (|k| < N/2)."""
        return np.abs(self.k) < self.n_modes // 2


@lru_cache(maxsize=None)
def _grid(n: int, pad: float = 2) -> GridSpec:
    return GridSpec(n, pad)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """A complex 2pi-periodic field stored as Fourier coefficients (FFT order)."""

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n_modes,):
            raise ValueError(
                f"expected {self.grid.n_modes} coefficients, got shape {c.shape}"
            )
        object.__setattr__(self, "coeffs", c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_modes, dtype=np.complex128))

    @classmethod
    def from_modes(cls, grid: GridSpec, modes: Mapping[int, complex]) -> "SpectralField":
        c = np.zeros(grid.n_modes, dtype=np.complex128)
        for k, amp in modes.items():
            c[grid.index(int(k))] += amp
        return cls(grid, c)

    @classmethod
    def from_function(cls, grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray]) -> "SpectralField":
        return to_spectral(np.asarray(fn(grid.alpha), dtype=np.complex128), grid)

    @classmethod
    def from_ordered(cls, grid: GridSpec, ordered: np.ndarray) -> "SpectralField":
        c = np.empty(grid.n_modes, dtype=np.complex128)
        c[grid.order] = ordered
        return cls(grid, c)

    # -- views ------------------------------------------------------------
    @property
    def ordered(self) -> np.ndarray:
        """Coefficients sorted from k = -N/2 to N/2 - 1."""
        return self.coeffs[self.grid.order]

    def mode(self, k: int) -> complex:
        return complex(self.coeffs[self.grid.index(k)])

    @property
    def values(self) -> np.ndarray:
        return to_physical(self)

    def padded_values(self, factor: float | None = None) -> np.ndarray:
        """Samples on a grid refined by ``factor`` (defaults to the dealias pad)."""
        m = self.grid.n_pad if factor is None else int(round(factor * self.grid.n_modes))
        return _pad_ifft(self.coeffs, self.grid.k, m)

    @property
    def mean(self) -> complex:
        return complex(self.coeffs[0])

    def l2(self) -> float:
        """L^2 norm on [0, 2pi) via Parseval."""
        return float(np.sqrt(2 * np.pi * np.sum(np.abs(self.coeffs) ** 2)))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # -- algebra ----------------------------------------------------------
    def _check(self, other: "SpectralField"):
        if other.grid.n_modes != self.grid.n_modes:
            raise ValueError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.grid, self.coeffs + other.coeffs)
        c = self.coeffs.copy()
        c[0] += other
        return SpectralField(self.grid, c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return SpectralField(self.grid, self.coeffs - other.coeffs)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SpectralField(self.grid, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return product(self, other)
        return SpectralField(self.grid, self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return self.pointwise(lambda u, v: u / v, other)
        return SpectralField(self.grid, self.coeffs / other)

    def __rtruediv__(self, other):
        return self.apply(lambda u: other / u)

    def __pow__(self, p):
        return self.apply(lambda u: u ** p)

    def conj(self) -> "SpectralField":
        """Complex conjugate field: coefficient at k becomes conj(u_hat(-k))."""
        n = self.grid.n_modes
        c = np.conj(self.coeffs[(-self.grid.k) % n])
        c[n // 2] = 0.0
        return SpectralField(self.grid, c)

    @property
    def real(self) -> "SpectralField":
        return 0.5 * (self + self.conj())

    @property
    def imag(self) -> "SpectralField":
        return -0.5j * (self - self.conj())

    def dx(self, order: int = 1) -> "SpectralField":
        return derivative(self, order)

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> "SpectralField":
        """Evaluate a pointwise function on the padded grid and truncate."""
        m = self.grid.n_pad
        return _truncate(self.grid, fn(self.padded_values()), m)

    def pointwise(self, fn, *others: "SpectralField") -> "SpectralField":
        m = self.grid.n_pad
        vals = [self.padded_values()] + [o.padded_values() for o in others]
        return _truncate(self.grid, fn(*vals), m)

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, coeffs)

    def remove_mean(self) -> "SpectralField":
        c = self.coeffs.copy()
        c[0] = 0.0
        return SpectralField(self.grid, c)

    def __repr__(self):
        return f"SpectralField(N={self.grid.n_modes}, |u|_L2={self.l2():.3e})"


def _pad_ifft(coeffs: np.ndarray, k: np.ndarray, m: int) -> np.ndarray:
    padded = np.zeros(m, dtype=np.complex128)
    padded[k % m] = coeffs
    return np.fft.ifft(padded) * m


def _truncate(grid: GridSpec, values: np.ndarray, m: int) -> SpectralField:
    full = np.fft.fft(values) / m
    c = full[grid.k % m]
    c[grid.n_modes // 2] = 0.0
    return SpectralField(grid, c)


def product(u: SpectralField, v: SpectralField) -> SpectralField:
    """Dealiased pseudospectral product, truncated to |k| < N/2."""
    m = u.grid.n_pad
    return _truncate(u.grid, u.padded_values() * v.padded_values(), m)


# -- transforms -------------------------------------------------------------
def to_spectral(values: np.ndarray, grid: GridSpec | None = None) -> SpectralField:
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 1:
        raise ValueError("expected a one-dimensional sample array")
    if grid is None:
        grid = _grid(values.size)
    if values.size != grid.n_modes:
        raise ValueError(f"got {values.size} samples for a grid with {grid.n_modes} points")
    return SpectralField(grid, np.fft.fft(values) / grid.n_modes)


def to_physical(f: SpectralField) -> np.ndarray:
    return np.fft.ifft(f.coeffs) * f.grid.n_modes


# -- Fourier multipliers ----------------------------------------------------
def multiplier(f: SpectralField, symbol) -> SpectralField:
    """Multiply coefficients by ``symbol(k)`` (callable or array in FFT order)."""
    m = symbol(f.grid.k) if callable(symbol) else np.asarray(symbol)
    m = np.broadcast_to(np.asarray(m, dtype=np.complex128), f.coeffs.shape)
    if not np.all(np.isfinite(m)):
        raise FloatingPointError("multiplier symbol is not finite on the lattice")
    return SpectralField(f.grid, f.coeffs * m)


def hilbert(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, -1j * np.sign(f.grid.k) * f.coeffs)


def _holo_symbol(k: np.ndarray) -> np.ndarray:
    return np.where(k < 0, 1.0, np.where(k == 0, 0.5, 0.0))


def project_holo(f: SpectralField) -> SpectralField:
    """P = (I - iH)/2: keeps k < 0, halves k = 0, drops k > 0."""
    return SpectralField(f.grid, f.coeffs * _holo_symbol(f.grid.k))


def project_anti(f: SpectralField) -> SpectralField:
    """The complementary projection I - P."""
    return SpectralField(f.grid, f.coeffs * (1.0 - _holo_symbol(f.grid.k)))


def derivative(f: SpectralField, order: int = 1) -> SpectralField:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    if order == 0:
        return f
    return SpectralField(f.grid, f.coeffs * (1j * f.grid.k) ** order)


def antiderivative(f: SpectralField) -> SpectralField:
    """Inverse of d/d alpha on zero-mean fields (the mean is discarded)."""
    k = f.grid.k
    inv = np.zeros(k.shape, dtype=np.complex128)
    nz = k != 0
    inv[nz] = 1.0 / (1j * k[nz])
    return SpectralField(f.grid, f.coeffs * inv)


def japanese(f: SpectralField, s: float) -> SpectralField:
    """<D>^s with symbol (1 + k^2)^(s/2)."""
    return SpectralField(f.grid, f.coeffs * (1.0 + f.grid.k.astype(float) ** 2) ** (s / 2))


def abs_d(f: SpectralField, s: float) -> SpectralField:
    """|D|^s for s >= 0 (zero on the mean)."""
    if s < 0:
        raise ValueError("abs_d only supports s >= 0")
    return SpectralField(f.grid, f.coeffs * np.abs(f.grid.k).astype(float) ** s)


# -- Littlewood-Paley -------------------------------------------------------
def lp_block_index(k) -> np.ndarray:
    """Sharp dyadic block of each frequency: 0 for |k| <= 1, else ceil(log2 |k|)."""
    a = np.abs(np.asarray(k, dtype=np.int64))
    out = np.zeros(a.shape, dtype=np.int64)
    big = a >= 2
    # ceil(log2 a) == bit_length(a - 1) for a >= 2
    out[big] = np.frompyfunc(lambda x: int(x - 1).bit_length(), 1, 1)(a[big]).astype(np.int64)
    return out


def lp_block(f: SpectralField, j: int) -> SpectralField:
    if j < 0:
        raise ValueError("block index must be >= 0")
    mask = lp_block_index(f.grid.k) == j
    return SpectralField(f.grid, np.where(mask, f.coeffs, 0.0))


# -- cutoffs ----------------------------------------------------------------
@dataclass(frozen=True)
class CutoffParams:
    """Plateaus of the low-high cutoff: 1 below ``eps1`` and 0 above ``eps2``."""

    eps1: float = 1 / 20
    eps2: float = 1 / 10
    transition: int = 1

    def __post_init__(self):
        if not 0 < self.eps1 < self.eps2 < 1:
            raise ValueError("need 0 < eps1 < eps2 < 1")
        if int(self.transition) != self.transition or self.transition < 1:
            raise ValueError("transition order must be an integer >= 1")


DEFAULT_CUTOFF = CutoffParams()


def smoothstep(t, order: int = 1):
    """Generalized smoothstep S_n on [0, 1]; order 1 is 3t^2 - 2t^3."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    n = int(order)
    acc = np.zeros_like(t)
    for j in range(n + 1):
        acc = acc + comb(n + j, j) * comb(2 * n + 1, n - j) * (-t) ** j
    return t ** (n + 1) * acc


def _ratio_profile(num, den, cut: CutoffParams):
    """1 for num <= eps1*den, 0 for num >= eps2*den, smoothstep in log(num/den)."""
    num = np.abs(np.asarray(num, dtype=float))
    den = np.abs(np.asarray(den, dtype=float))
    num, den = np.broadcast_arrays(num, den)
    out = np.zeros(num.shape)
    lo = num <= cut.eps1 * den
    hi = num >= cut.eps2 * den
    mid = ~(lo | hi)
    out[lo & (den > 0)] = 1.0
    out[(num == 0) & (den > 0)] = 1.0
    if np.any(mid):
        t = (np.log(num[mid] / den[mid]) - np.log(cut.eps1)) / (np.log(cut.eps2) - np.log(cut.eps1))
        out[mid] = 1.0 - smoothstep(t, cut.transition)
    return out if out.ndim else float(out)


def chi1(theta1, theta2, cut: CutoffParams = DEFAULT_CUTOFF):
    """Low-high selector: 1 when |theta1| <= |theta2|/20, 0 when |theta1| >= |theta2|/10."""
    return _ratio_profile(theta1, theta2, cut)


def chi2(theta1, theta2, cut: CutoffParams = DEFAULT_CUTOFF):
    """Balanced selector, completing chi1 to a partition of unity."""
    return 1.0 - chi1(theta1, theta2, cut) - chi1(theta2, theta1, cut)


def psi(eta):
    """Lattice version of the low-frequency cutoff: 0 at the mean, 1 elsewhere."""
    return (np.asarray(eta) != 0).astype(float)


def para_chi(theta, eta, cut: CutoffParams = DEFAULT_CUTOFF):
    """Paraproduct cutoff: 1 for |theta| <= eps1 (1+|eta|), 0 beyond eps2 (1+|eta|)."""
    return _ratio_profile(theta, 1.0 + np.abs(np.asarray(eta, dtype=float)), cut)


def clip_holo(f: SpectralField) -> SpectralField:
    """Zero the positive frequencies, keeping the mean (cleanup of holomorphic products)."""
    return SpectralField(f.grid, np.where(f.grid.k > 0, 0.0, f.coeffs))
