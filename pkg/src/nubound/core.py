"""Domain types and profile arithmetic shared by every other module.

The two nondimensional inputs are the Rayleigh number Ra (thermal forcing)
and the Ekman number Ek (inverse rotation rate).  All estimates are written
in terms of the scaled quantities Ra~ = Ra * Ek^(4/3) and eps = Ek^(1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError

__all__ = [
    "FlowParameters",
    "Constants",
    "PiecewiseLinearProfile",
    "TestField",
    "derive_params",
    "constants",
    "profile_eval",
    "profile_derivative_eval",
    "phi_prime_l2sq",
    "boundary_layer_profile",
    "zero_profile",
    "basis_values",
    "basis_derivatives",
    "field_values",
    "field_derivatives",
    "field_l2_norm",
    "field_derivative_l2_norm",
    "gauss_rule_01",
]


@dataclass(frozen=True)
class FlowParameters:
    """Flow control parameters plus the derived scaled quantities."""

    ra: float
    ek: float
    ra_tilde: float
    eps: float

    def __post_init__(self):
        if not (self.ra > 0 and self.ek > 0):
            raise DomainError("Ra and Ek must be positive")
        if not self.eps < 2.0:
            raise DomainError(
                f"eps = Ek^(1/3) = {self.eps:g} must be < 2 for the estimates to hold"
            )
        if abs(self.ra_tilde - self.ra * self.ek ** (4.0 / 3.0)) > 1e-14 * self.ra_tilde:
            raise DomainError("ra_tilde inconsistent with ra * ek^(4/3)")
        if abs(self.eps - self.ek ** (1.0 / 3.0)) > 1e-14 * self.eps:
            raise DomainError("eps inconsistent with ek^(1/3)")


def derive_params(ra: float, ek: float) -> FlowParameters:
    """Build FlowParameters from (Ra, Ek), validating the domain."""
    ra = float(ra)
    ek = float(ek)
    if not (ra > 0.0) or not (ek > 0.0):
        raise DomainError("Ra and Ek must be positive")
    eps = ek ** (1.0 / 3.0)
    if not eps < 2.0:
        raise DomainError(f"Ek^(1/3) = {eps:g} is not < 2")
    return FlowParameters(ra=ra, ek=ek, ra_tilde=ra * ek ** (4.0 / 3.0), eps=eps)


@dataclass(frozen=True)
class Constants:
    """Fixed constants of the boundary-layer estimates.

    gamma solves sinh(gamma) = 1; L and P are the associated layer
    constants entering the near-wall bounds.
    """

    gamma: float
    L: float
    P: float


def constants() -> Constants:
    """The constants (gamma, L, P); deterministic, closed-form evaluation."""
    gamma = math.asinh(1.0)
    big_l = gamma / 2.0 + 4.0 / math.tanh(2.0 * gamma) + 1.0 / (math.sinh(2.0 * gamma) ** 2 * gamma)
    big_p = 2.0 * (math.sinh(1.0) - 1.0)
    return Constants(gamma=gamma, L=big_l, P=big_p)


@dataclass(frozen=True)
class PiecewiseLinearProfile:
    """Background profile phi(z), piecewise linear with pinned endpoints.

    breakpoints must be strictly increasing, start at 0 and end at 1, and
    the values at both ends must be exactly zero so the sign-indefinite
    boundary terms of the mean-field constraint vanish.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bp = self.breakpoints
        if len(bp) != len(self.values):
            raise DomainError("breakpoints and values must have equal length")
        if len(bp) < 2:
            raise DomainError("need at least the two endpoint breakpoints")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise DomainError("breakpoints must start at 0 and end at 1")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if self.values[0] != 0.0 or self.values[-1] != 0.0:
            raise DomainError("profile must vanish at z=0 and z=1")

    @property
    def slopes(self) -> np.ndarray:
        bp = np.asarray(self.breakpoints)
        vals = np.asarray(self.values)
        return np.diff(vals) / np.diff(bp)


def profile_eval(profile: PiecewiseLinearProfile, z):
    """phi(z) by linear interpolation; exact at breakpoints."""
    zarr = np.asarray(z, dtype=float)
    if np.any(zarr < 0.0) or np.any(zarr > 1.0):
        raise DomainError("z must lie in [0, 1]")
    out = np.interp(zarr, profile.breakpoints, profile.values)
    return float(out) if np.isscalar(z) else out


def profile_derivative_eval(profile: PiecewiseLinearProfile, z):
    """Slope of the active segment; right-limit convention at breakpoints."""
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zarr < 0.0) or np.any(zarr > 1.0):
        raise DomainError("z must lie in [0, 1]")
    bp = np.asarray(profile.breakpoints)
    idx = np.clip(np.searchsorted(bp, zarr, side="right") - 1, 0, len(bp) - 2)
    out = profile.slopes[idx]
    return float(out[0]) if np.isscalar(z) else out


def phi_prime_l2sq(profile: PiecewiseLinearProfile) -> float:
    """Exact integral of phi'(z)^2: sum of slope^2 times segment length."""
    widths = np.diff(np.asarray(profile.breakpoints))
    return float(np.sum(profile.slopes**2 * widths))


def boundary_layer_profile(c: float, delta: float) -> PiecewiseLinearProfile:
    """Three-branch profile: layers of width delta, interior slope c.

    phi = -(c/2)((1-2 delta)/delta) z on [0, delta], c(z - 1/2) in the
    interior and the mirror branch near z=1.  delta = 1/2 degenerates to
    the identically zero profile (breakpoints {0, 1/2, 1}).
    """
    c = float(c)
    delta = float(delta)
    if not (0.0 < delta <= 0.5):
        raise DomainError("delta must lie in (0, 1/2]")
    if delta == 0.5:
        return PiecewiseLinearProfile((0.0, 0.5, 1.0), (0.0, 0.0, 0.0))
    v = c * (delta - 0.5)
    return PiecewiseLinearProfile((0.0, delta, 1.0 - delta, 1.0), (0.0, v, -v, 0.0))


def zero_profile() -> PiecewiseLinearProfile:
    """The identically zero profile (conduction certificate, U = 1)."""
    return PiecewiseLinearProfile((0.0, 1.0), (0.0, 0.0))


# ---------------------------------------------------------------------------
# Temperature test fields: polynomial basis with built-in endpoint zeros.
#
# Basis member j is e_j(z) = z(1-z) P_j(2z-1) with P_j the Legendre
# polynomial, so every expansion vanishes identically at z=0 and z=1.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestField:
    """Temperature fluctuation mode on [0,1] with Dirichlet ends."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise DomainError("need at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs)


def _legendre_with_derivative(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Values and x-derivatives of P_0..P_{n-1} at points x in [-1,1]."""
    p = np.polynomial.legendre.legvander(x, n - 1)
    dp = np.zeros_like(p)
    if n > 1:
        dp[:, 1] = 1.0
    for j in range(2, n):
        dp[:, j] = (2 * j - 1) * p[:, j - 1] + dp[:, j - 2]
    return p, dp


def basis_values(z, dim: int) -> np.ndarray:
    """(npts, dim) matrix of e_j(z) = z(1-z) P_j(2z-1)."""
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    p, _ = _legendre_with_derivative(2.0 * zarr - 1.0, dim)
    return (zarr * (1.0 - zarr))[:, None] * p


def basis_derivatives(z, dim: int) -> np.ndarray:
    """(npts, dim) matrix of e_j'(z)."""
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    p, dp = _legendre_with_derivative(2.0 * zarr - 1.0, dim)
    return (1.0 - 2.0 * zarr)[:, None] * p + (2.0 * zarr * (1.0 - zarr))[:, None] * dp


def field_values(theta: TestField, z) -> np.ndarray:
    """theta(z) via Clenshaw evaluation of the Legendre series."""
    zarr = np.asarray(z, dtype=float)
    series = np.polynomial.legendre.legval(2.0 * zarr - 1.0, theta.coeffs)
    return zarr * (1.0 - zarr) * series


def field_derivatives(theta: TestField, z) -> np.ndarray:
    zarr = np.asarray(z, dtype=float)
    x = 2.0 * zarr - 1.0
    series = np.polynomial.legendre.legval(x, theta.coeffs)
    dseries = np.polynomial.legendre.legval(x, np.polynomial.legendre.legder(theta.coeffs))
    return (1.0 - 2.0 * zarr) * series + 2.0 * zarr * (1.0 - zarr) * dseries


@lru_cache(maxsize=64)
def gauss_rule_01(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=64)
def _gram_matrices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact mass and stiffness Gram matrices of the endpoint-zero basis."""
    z, w = gauss_rule_01(dim + 4)
    b = basis_values(z, dim)
    db = basis_derivatives(z, dim)
    mass = b.T @ (w[:, None] * b)
    stiff = db.T @ (w[:, None] * db)
    return 0.5 * (mass + mass.T), 0.5 * (stiff + stiff.T)


def field_l2_norm(theta: TestField) -> float:
    mass, _ = _gram_matrices(theta.degree)
    c = np.asarray(theta.coeffs)
    return float(math.sqrt(max(c @ mass @ c, 0.0)))


def field_derivative_l2_norm(theta: TestField) -> float:
    _, stiff = _gram_matrices(theta.degree)
    c = np.asarray(theta.coeffs)
    return float(math.sqrt(max(c @ stiff @ c, 0.0)))
