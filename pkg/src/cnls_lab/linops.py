"""Linearized operators around the semitrivial wave, on the even subspace.

The scalar family is  L[a] v = -v'' + omega*v - a*profile(omega)^2*v  with the
unscaled profile.  Even functions on the periodic grid are represented in an
orthonormal cosine-mode basis (m = 0 .. n/2), where -d^2/dx^2 is exactly
diagonal; the potential term is a dense symmetric matrix assembled by grid
quadrature.  Size is n/2 + 1, so dense eigensolves are cheap.

The second variation of the action at the semitrivial wave block-decouples
over (Re u1, Im u1, Re u2, Im u2) into scalar forms with weights
(3, 1, gamma/kappa1, -gamma/kappa1); ``hessian_form`` evaluates it directly
and ``hessian_constrained_minimum`` minimizes its H1 Rayleigh quotient over a
constrained even subspace, one block at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fields import (
    FieldPair,
    Grid,
    Params,
    quadrature,
    require_even,
    spectral_derivative,
)
from .waves import soliton

_BASIS_CACHE: dict = {}


@dataclass(frozen=True)
class EvenBasis:
    """Orthonormal (discrete L2) cosine modes spanning the even subspace."""

    grid: Grid
    size: int
    modes: np.ndarray  # (n, size), columns orthonormal under the grid product
    kvals: np.ndarray  # (size,) wavenumbers m*pi/L
    h1_weights: np.ndarray  # diagonal of the H1 Gram matrix in this basis


def even_basis(grid: Grid) -> EvenBasis:
    key = (grid.n, grid.half_length)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    n, size = grid.n, grid.n // 2 + 1
    kvals = np.arange(size) * np.pi / grid.half_length
    modes = np.cos(np.outer(grid.x, kvals))
    # discrete norms: ||cos(k_m x)||^2 = L except the constant and Nyquist
    # columns, which carry 2L
    norms = np.full(size, np.sqrt(grid.half_length))
    norms[0] = norms[-1] = np.sqrt(2.0 * grid.half_length)
    modes /= norms
    # first derivative of the Nyquist column vanishes in the discrete
    # convention, so its H1 weight is 1
    deriv = kvals.copy()
    deriv[-1] = 0.0
    basis = EvenBasis(grid=grid, size=size, modes=modes, kvals=kvals,
                      h1_weights=1.0 + deriv**2)
    _BASIS_CACHE[key] = basis
    return basis


def even_coefficients(basis: EvenBasis, values: np.ndarray) -> np.ndarray:
    """Expand an even real grid function in the basis (L2 projection)."""
    require_even(values)
    return basis.modes.T @ (np.real(values) * basis.grid.dx)


@dataclass(frozen=True)
class OperatorMatrix:
    weight: float  # potential-well multiplier a
    omega: float
    grid: Grid
    entries: np.ndarray  # (size, size) symmetric, cosine-basis representation


def linearized_operator(grid: Grid, weight: float, omega: float) -> OperatorMatrix:
    basis = even_basis(grid)
    prof2 = soliton(grid, omega).values ** 2
    pot = basis.modes.T @ (prof2[:, None] * basis.modes) * grid.dx
    entries = np.diag(basis.kvals**2 + omega) - weight * pot
    entries = 0.5 * (entries + entries.T)
    return OperatorMatrix(weight=float(weight), omega=float(omega), grid=grid,
                          entries=entries)


def apply_linearized(grid: Grid, weight: float, omega: float,
                     values: np.ndarray) -> np.ndarray:
    """Apply L[weight] to a grid function directly (for residual checks)."""
    prof2 = soliton(grid, omega).values ** 2
    d2 = spectral_derivative(values, grid, order=2)
    out = -d2 + omega * values - weight * prof2 * values
    return out.real if np.isrealobj(values) else out


@dataclass(frozen=True)
class SpectralReport:
    weight: float
    omega: float
    n: int
    half_length: float
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # (k, n) grid functions, unit L2 norm
    constraint_tags: tuple

    def to_dict(self) -> dict:
        return {
            "a": self.weight,
            "omega": self.omega,
            "n": self.n,
            "half_length": self.half_length,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "constraint_tags": list(self.constraint_tags),
        }


def lowest_eigenpairs(op: OperatorMatrix, k: int = 6) -> SpectralReport:
    """Lowest k eigenpairs of the even-subspace operator."""
    basis = even_basis(op.grid)
    if not 1 <= k <= basis.size:
        raise ValueError("requested eigenpair count is out of range")
    vals, vecs = scipy.linalg.eigh(op.entries)
    vals, vecs = vals[:k], vecs[:, :k]
    grid_fns = (basis.modes @ vecs).T
    # unit L2 normalization and a deterministic sign
    out = np.empty((k, op.grid.n))
    for i in range(k):
        v = grid_fns[i]
        v = v / np.sqrt(quadrature(op.grid, v**2).real)
        peak = np.argmax(np.abs(v))
        if v[peak] < 0:
            v = -v
        out[i] = v
    return SpectralReport(weight=op.weight, omega=op.omega, n=op.grid.n,
                          half_length=op.grid.half_length, eigenvalues=vals,
                          eigenvectors=out, constraint_tags=("even",))


def linearized_quadratic_form(grid: Grid, weight: float, values: np.ndarray,
                              omega: float) -> float:
    """integral |v'|^2 + omega*|v|^2 - weight*profile^2*|v|^2 for even v."""
    require_even(values)
    prof2 = soliton(grid, omega).values ** 2
    dv = spectral_derivative(values, grid)
    dens = np.abs(dv) ** 2 + (omega - weight * prof2) * np.abs(values) ** 2
    return float(quadrature(grid, dens).real)


def scalar_constrained_minimum(grid: Grid, weight: float, omega: float,
                               orthogonal_to: tuple = ()) -> float:
    """Minimum of <L[weight] v, v> / ||v||_H1^2 over even v orthogonal (L2)
    to the given even grid functions."""
    basis = even_basis(grid)
    op = linearized_operator(grid, weight, omega)
    hmat = op.entries
    gdiag = basis.h1_weights
    if orthogonal_to:
        cols = np.stack([even_coefficients(basis, np.asarray(f, dtype=float))
                         for f in orthogonal_to], axis=1)
        gram = cols.T @ cols
        if np.linalg.cond(gram) > 1e12:
            raise ValueError("constraints are nearly parallel (Gram condition > 1e12)")
        nullb = scipy.linalg.null_space(cols.T)
        hmat = nullb.T @ hmat @ nullb
        gmat = nullb.T @ (gdiag[:, None] * nullb)
    else:
        gmat = np.diag(gdiag)
    vals = scipy.linalg.eigh(hmat, gmat, eigvals_only=True,
                             subset_by_index=(0, 0))
    return float(vals[0])


# Block weights of the second variation of the action at the semitrivial
# wave, in the order (Re u1, Im u1, Re u2, Im u2).
def _block_weights(params: Params) -> tuple:
    r = params.gamma / params.kappa1
    return (3.0, 1.0, r, -r)


def hessian_form(v: FieldPair, params: Params) -> float:
    """Second variation of the action at the semitrivial wave, evaluated on v.

    Block-decoupled sum of scalar quadratic forms; each real part must be
    even.
    """
    grid = v.grid
    parts = (v.u1.real, v.u1.imag, v.u2.real, v.u2.imag)
    return sum(
        linearized_quadratic_form(grid, w, p, params.omega)
        for w, p in zip(_block_weights(params), parts)
    )


def _constraint_blocks(c: FieldPair) -> list:
    """Indices of the Hessian blocks a constraint actually touches."""
    parts = (c.u1.real, c.u1.imag, c.u2.real, c.u2.imag)
    norms = [float(np.linalg.norm(p)) for p in parts]
    total = sum(norms)
    if total == 0.0:
        raise ValueError("zero constraint field")
    return [i for i, s in enumerate(norms) if s > 1e-12 * total]


def hessian_constrained_minimum(grid: Grid, params: Params,
                                constraints: tuple = ()) -> float:
    """Minimum H1 Rayleigh quotient of the Hessian over even pair fields
    L2-orthogonal to the given pair constraints.

    Exploits the block structure: each constraint must live in a single
    (component, real/imaginary) block, which holds for all the constraint
    sets the theory uses (the wave, i*wave, and the partner wave).
    """
    per_block: list = [[], [], [], []]
    for c in constraints:
        blocks = _constraint_blocks(c)
        if len(blocks) != 1:
            raise ValueError(
                "constraint spans several Hessian blocks; split it into "
                "component/real-part pieces")
        parts = (c.u1.real, c.u1.imag, c.u2.real, c.u2.imag)
        per_block[blocks[0]].append(parts[blocks[0]])
    weights = _block_weights(params)
    return min(
        scalar_constrained_minimum(grid, weights[i], params.omega,
                                   orthogonal_to=tuple(per_block[i]))
        for i in range(4)
    )
