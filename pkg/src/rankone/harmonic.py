"""The space of real harmonic forms: dimension, Bombieri-Weyl-orthonormal
bases, exact sphere integrals and zonal (reproducing) harmonics.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.linalg import null_space
from scipy.special import gammaln

from .poly import (
    HomogPoly,
    ShapeError,
    bw_inner,
    laplacian_matrix,
    monomial_exponents,
    multinomial_weights,
    num_monomials,
)
from .tensor import REAL, FieldError

_NULLSPACE_RCOND = 1e-10


class DomainError(ValueError):
    pass


def harmonic_dimension(d, n):
    """dim of the harmonic subspace of degree-d forms in n variables."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if d < 0:
        raise DomainError(f"need d >= 0, got {d}")
    second = comb(n + d - 3, d - 2) if d >= 2 else 0
    return comb(n + d - 1, d) - second


def sphere_surface(n):
    """Surface measure of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2)."""
    return float(2.0 * np.exp(0.5 * n * np.log(np.pi) - gammaln(0.5 * n)))


def bw_l2_constant(d, n):
    """Ratio of the Bombieri-Weyl product to the sphere L2 product on
    harmonic forms: 2^(d-1) Gamma(d + n/2) / (pi^(n/2) Gamma(d + 1))."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    lg = (
        (d - 1) * np.log(2.0)
        + gammaln(d + 0.5 * n)
        - 0.5 * n * np.log(np.pi)
        - gammaln(d + 1.0)
    )
    return float(np.exp(lg))


@lru_cache(maxsize=None)
def _sphere_monomial_gram(d, n):
    """Matrix of integrals over S^(n-1) of x^(alpha+beta) for |alpha|=|beta|=d."""
    expo = monomial_exponents(d, n)
    s = expo[:, np.newaxis, :] + expo[np.newaxis, :, :]
    all_even = np.all(s % 2 == 0, axis=2)
    logs = np.sum(gammaln((s + 1) / 2.0), axis=2)
    vals = 2.0 * np.exp(logs - gammaln((2 * d + n) / 2.0))
    gram = np.where(all_even, vals, 0.0)
    gram.setflags(write=False)
    return gram


def l2_sphere_inner(f, g):
    """Exact integral of f*g over the unit sphere (closed-form monomials)."""
    if f.field != REAL or g.field != REAL:
        raise FieldError("sphere L2 product is defined for real forms only")
    if (f.n, f.d) != (g.n, g.d):
        raise ShapeError(f"(n, d) mismatch: {(f.n, f.d)} vs {(g.n, g.d)}")
    gram = _sphere_monomial_gram(f.d, f.n)
    return float(f.coeffs @ gram @ g.coeffs)


@dataclass(frozen=True)
class HarmonicBasis:
    """Bombieri-Weyl-orthonormal basis of the degree-d harmonic forms."""

    d: int
    n: int
    dim: int
    basis: tuple  # HomogPoly elements

    @property
    def coeff_matrix(self):
        """Column-per-basis-element coefficient matrix."""
        return np.column_stack([b.coeffs for b in self.basis])


def _mgs_bw(columns, d, n):
    """Modified Gram-Schmidt under the Bombieri-Weyl product, one
    re-orthogonalization pass."""
    w = multinomial_weights(d, n)

    def inner(u, v):
        return float(np.dot(u, v / w))

    out = []
    for col in columns.T:
        v = col.copy()
        for _ in range(2):
            for u in out:
                v -= inner(u, v) * u
        nrm = np.sqrt(inner(v, v))
        if nrm < 1e-12:
            raise RuntimeError("rank deficiency during orthonormalization")
        out.append(v / nrm)
    return np.column_stack(out)


@lru_cache(maxsize=None)
def harmonic_basis(d, n):
    """Null space of the Laplacian coefficient matrix, orthonormalized under
    the Bombieri-Weyl product.  Deterministic for fixed (d, n)."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if d < 1:
        raise DomainError(f"need d >= 1, got {d}")
    if d == 1:
        cols = np.eye(n)
    else:
        lap = laplacian_matrix(d, n)
        cols = null_space(lap, rcond=_NULLSPACE_RCOND)
    cols = _mgs_bw(cols, d, n)
    polys = tuple(HomogPoly(n, d, cols[:, i], REAL) for i in range(cols.shape[1]))
    return HarmonicBasis(d, n, len(polys), polys)


def zonal(basis, x):
    """Reproducing kernel of the harmonic space at pole x under the sphere
    L2 product: Z_x = sum_i e_i(x) e_i over an L2-orthonormal basis."""
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise ValueError("pole must be a unit vector")
    c = bw_l2_constant(basis.d, basis.n)
    # the BW-orthonormal basis rescaled by sqrt(c) is L2-orthonormal
    mat = basis.coeff_matrix
    vals = np.array(
        [np.prod(x[np.newaxis, :] ** b.exponents, axis=1) @ b.coeffs for b in basis.basis]
    )
    coeffs = c * (mat @ vals)
    return HomogPoly(basis.n, basis.d, coeffs, REAL)


def zonal_pole_value(d, n):
    """Z_x(x) = dim / surface, independent of the pole."""
    return harmonic_dimension(d, n) / sphere_surface(n)
