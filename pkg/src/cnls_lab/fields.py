"""Periodic pseudospectral discretization for pairs of complex fields.

The domain is [-L, L) sampled on a uniform grid x_j = -L + j*dx with
dx = 2L/n and n a power of two.  Wavenumbers follow the signed FFT layout
k_m = pi*m/L.  All integrals are the rectangle rule, which is spectrally
accurate for smooth periodic integrands on this grid.

Real inner products: ``inner_l2`` is the real L2 pairing of complex pairs,
``inner_h1`` adds the pairing of first derivatives.  The sign convention is
fixed by ``complex_pairing``: (a, i*b)_L2 == Im sum(a * conj(b)) * dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.fft as sfft


class Coupling(str, Enum):
    COHERENT = "coherent"
    INCOHERENT = "incoherent"


@dataclass(frozen=True)
class Params:
    """Model parameters: two self-interaction strengths, one cross-coupling,
    and the standing-wave frequency."""

    kappa1: float
    kappa2: float
    gamma: float
    omega: float
    coupling: Coupling = Coupling.COHERENT

    def __post_init__(self):
        object.__setattr__(self, "coupling", Coupling(self.coupling))
        if self.kappa1 <= 0 or self.kappa2 <= 0:
            raise ValueError("self-interaction strengths must be positive")
        if self.gamma <= 0:
            raise ValueError("cross-coupling strength must be positive")
        if self.omega <= 0:
            raise ValueError("wave frequency must be positive")

    @property
    def degenerate(self) -> bool:
        return self.gamma == self.kappa1


@dataclass(frozen=True)
class Grid:
    n: int
    half_length: float
    dx: float
    x: np.ndarray
    k: np.ndarray

    def compatible(self, other: "Grid") -> bool:
        return self.n == other.n and self.half_length == other.half_length


def make_grid(n: int = 1024, half_length: float = 40.0) -> Grid:
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError("grid size must be a power of two, at least 16")
    if half_length <= 0:
        raise ValueError("half_length must be positive")
    dx = 2.0 * half_length / n
    x = -half_length + dx * np.arange(n)
    k = 2.0 * np.pi * sfft.fftfreq(n, d=dx)  # equals pi*m/half_length
    x.flags.writeable = False
    k.flags.writeable = False
    return Grid(n=n, half_length=float(half_length), dx=dx, x=x, k=k)


@dataclass(frozen=True)
class FieldPair:
    """Two complex fields on a shared grid, stored as a (2, n) array.

    Values are copied on construction and frozen; treat instances as
    immutable.
    """

    grid: Grid
    u: np.ndarray

    # keep numpy scalars from absorbing FieldPair operands in mixed products
    __array_ufunc__ = None

    def __post_init__(self):
        u = np.array(self.u, dtype=np.complex128)
        if u.shape != (2, self.grid.n):
            raise ValueError(f"field array must have shape (2, {self.grid.n})")
        u.flags.writeable = False
        object.__setattr__(self, "u", u)

    @classmethod
    def from_components(cls, grid: Grid, u1, u2) -> "FieldPair":
        return cls(grid, np.stack([np.asarray(u1), np.asarray(u2)]).astype(np.complex128))

    @classmethod
    def zero(cls, grid: Grid) -> "FieldPair":
        return cls(grid, np.zeros((2, grid.n), dtype=np.complex128))

    @property
    def u1(self) -> np.ndarray:
        return self.u[0]

    @property
    def u2(self) -> np.ndarray:
        return self.u[1]

    def _check(self, other: "FieldPair"):
        if not self.grid.compatible(other.grid):
            raise ValueError("field pairs live on incompatible grids")

    def __add__(self, other: "FieldPair") -> "FieldPair":
        self._check(other)
        return FieldPair(self.grid, self.u + other.u)

    def __sub__(self, other: "FieldPair") -> "FieldPair":
        self._check(other)
        return FieldPair(self.grid, self.u - other.u)

    def __mul__(self, scalar) -> "FieldPair":
        return FieldPair(self.grid, self.u * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "FieldPair":
        return FieldPair(self.grid, -self.u)


def quadrature(grid: Grid, values: np.ndarray):
    """Rectangle-rule integral over the box; complex in, complex out."""
    return np.sum(values) * grid.dx


def complex_pairing(a: FieldPair, b: FieldPair) -> complex:
    """sum_j integral a_j * conj(b_j) dx over both components."""
    a._check(b)
    return complex(np.sum(a.u * np.conj(b.u)) * a.grid.dx)


def inner_l2(a: FieldPair, b: FieldPair) -> float:
    """Real L2 inner product of pairs: Re complex_pairing(a, b)."""
    return complex_pairing(a, b).real


def spectral_derivative(values: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Fourier differentiation along the last axis.

    For odd orders the Nyquist coefficient is zeroed so real input maps to
    real output (standard pseudospectral convention).
    """
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    mult = (1j * grid.k) ** order
    if order % 2 == 1:
        mult = mult.copy()
        mult[grid.n // 2] = 0.0
    return sfft.ifft(mult * sfft.fft(values, axis=-1), axis=-1)


def inner_h1(a: FieldPair, b: FieldPair) -> float:
    """Real H1 inner product: L2 pairing plus L2 pairing of derivatives."""
    a._check(b)
    da = spectral_derivative(a.u, a.grid)
    db = spectral_derivative(b.u, b.grid)
    return float((np.sum(a.u * np.conj(b.u)) + np.sum(da * np.conj(db))).real * a.grid.dx)


def norm_l2(a: FieldPair) -> float:
    return float(np.sqrt(max(inner_l2(a, a), 0.0)))


def norm_h1(a: FieldPair) -> float:
    return float(np.sqrt(max(inner_h1(a, a), 0.0)))


def reflect(values: np.ndarray) -> np.ndarray:
    """Samples of x -> f(-x) on the periodic grid (index j -> (n - j) mod n)."""
    return np.roll(values[..., ::-1], 1, axis=-1)


def even_defect(values: np.ndarray) -> float:
    """Max pointwise deviation from even symmetry."""
    return float(np.max(np.abs(values - reflect(values))))


def require_even(values: np.ndarray, tol: float = 1e-10):
    d = even_defect(values)
    if d > tol:
        raise ValueError(f"input is not even: symmetry defect {d:.3e} exceeds {tol:.1e}")


def symmetrize_even(values: np.ndarray) -> np.ndarray:
    return 0.5 * (values + reflect(values))


def interleave(values: np.ndarray) -> list:
    """Complex vector -> flat [re, im, re, im, ...] list (JSON-friendly)."""
    out = np.empty(2 * values.size)
    out[0::2] = values.real
    out[1::2] = values.imag
    return out.tolist()


def deinterleave(flat) -> np.ndarray:
    arr = np.asarray(flat, dtype=float)
    return arr[0::2] + 1j * arr[1::2]
