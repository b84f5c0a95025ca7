"""Slaving boundary-value problem for the vertical velocity mode.

For each horizontal wavenumber k the temperature mode theta_k fixes the
velocity mode w_k through

    k^6 w - w'' = k^4 Ra~ theta,
    k^2 w(0) =  sqrt(eps/2) w'(0),
    k^2 w(1) = -sqrt(eps/2) w'(1).

The solution is written as w = c1 sinh(k^3 z) + c2 cosh(k^3 z) + h(z) with
h the Dirichlet (Green's function) part.  sinh(k^3) overflows double
precision already for k^3 > ~710, so every formula here is evaluated in a
scaled form where numerator and denominator carry a common factor
2 exp(-k^3): only decaying exponentials ever appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .core import FlowParameters, TestField, field_values
from .errors import DomainError, QuadratureError, SingularSystemError

__all__ = [
    "GridField",
    "HFieldResult",
    "SlavingSolution",
    "greens_kernel",
    "h_field",
    "robin_coefficients",
    "solve_slaving",
    "oracle_solve",
    "robin_residuals",
    "DEFAULT_GRID_N",
]

DEFAULT_GRID_N = 1025

# Segment integrals only see the kernel within this many e-folding lengths;
# the remainder is below 6e-19 relative and is dropped.
_WINDOW = 42.0
# Sub-panel split fractions (measured from the anchored end of the window);
# each sub-panel spans at most ~0.55 * 42 = 23 e-foldings, which Gauss
# rules of order >= 16 integrate to ~1e-14 relative.
_SPLITS = (1.0, 0.45, 0.0)


@dataclass(frozen=True)
class GridField:
    """Values of a scalar field on a grid over [0, 1] including both ends."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise DomainError("grid and values length mismatch")
        if self.grid[0] != 0.0 or self.grid[-1] != 1.0:
            raise DomainError("grid must include 0 and 1")


@dataclass(frozen=True)
class HFieldResult:
    """Green's-function part h of the velocity mode plus endpoint slopes."""

    field: GridField
    hk_prime_0: float
    hk_prime_1: float


@dataclass(frozen=True)
class SlavingSolution:
    """Velocity mode w = c1 sinh(k^3 z) + c2 cosh(k^3 z) + h(z).

    A and B are the coefficients of the exponential form
    w = A e^{k^3 z} + B e^{-k^3 z} + h(z); they are computed from the
    cancellation-free scaled formulas, and c1 = A - B, c2 = A + B are
    derived from them, so the pair relations hold at working precision.
    """

    k: float
    c1: float
    c2: float
    A: float
    B: float
    hk_prime_0: float
    hk_prime_1: float
    evaluator: Callable[[np.ndarray], np.ndarray]
    field: GridField


def _sigma(k3: float, x):
    """1 - exp(-2 k^3 x), accurate for small arguments."""
    return -np.expm1(-2.0 * k3 * np.asarray(x, dtype=float))


def greens_kernel(k: float, z, s):
    """Pre-divided kernel g(z, s)/sinh(k^3); symmetric, overflow-safe.

    g(z,s) = sinh(k^3 min) sinh(k^3 (1-max)) in terms of min/max of (z,s).
    """
    if k <= 0:
        raise DomainError("k must be positive")
    zarr = np.asarray(z, dtype=float)
    sarr = np.asarray(s, dtype=float)
    if np.any(zarr < 0) or np.any(zarr > 1) or np.any(sarr < 0) or np.any(sarr > 1):
        raise DomainError("(z, s) must lie in the unit square")
    k3 = k**3
    lo = np.minimum(zarr, sarr)
    hi = np.maximum(zarr, sarr)
    out = 0.5 * np.exp(-k3 * (hi - lo)) * _sigma(k3, lo) * _sigma(k3, 1.0 - hi) / _sigma(k3, 1.0)
    return float(out) if (np.isscalar(z) and np.isscalar(s)) else out


def _window_nodes(left: np.ndarray, right: np.ndarray, k3: float, order: int, anchor_right: bool):
    """Gauss nodes/weights covering the active window of each segment.

    For a decaying weight anchored at the right end (anchor_right=True) the
    window is [right - min(width, 42/k^3), right], geometrically split so no
    sub-panel spans more than ~15 e-foldings.  Returns (nodes, weights) of
    shape (nseg, nsub*order).
    """
    width = right - left
    win = np.minimum(width, _WINDOW / k3)
    gx, gw = np.polynomial.legendre.leggauss(order)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    nodes = []
    weights = []
    fr = _SPLITS
    for i in range(len(fr) - 1):
        f_hi, f_lo = fr[i], fr[i + 1]
        if anchor_right:
            a = right - win * f_hi
            b = right - win * f_lo
        else:
            a = left + win * f_lo
            b = left + win * f_hi
        h = b - a
        nodes.append(a[:, None] + h[:, None] * gx[None, :])
        weights.append(h[:, None] * gw[None, :])
    return np.concatenate(nodes, axis=1), np.concatenate(weights, axis=1)


def _greens_apply(
    k: float,
    ra_tilde: float,
    eval_fn: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    order: int,
):
    """h at the given sorted interior points for one or many fields.

    eval_fn maps an array of s-locations to field values with shape
    (ns,) or (ns, m).  Returns (h, hp0, hp1) where h has shape
    (len(points),) or (len(points), m).

    The two scaled partial integrals
        I1(t) = int_0^t exp(k^3 (s - t)) sigma(s)   theta(s) ds / 2
        I2(t) = int_t^1 exp(k^3 (t - s)) sigma(1-s) theta(s) ds / 2
    are accumulated by stable prefix/suffix recursions over the segments
    between consecutive points, with the quadrature split exactly at every
    evaluation point (the kernel has a kink there) and restricted to the
    window where the exponential weight is non-negligible.
    """
    k3 = k**3
    pts = np.asarray(points, dtype=float)
    t = np.unique(np.concatenate(([0.0, 1.0], pts)))
    left, right = t[:-1], t[1:]
    nseg = len(left)

    # Direction 1 (prefix): weight exp(k^3 (s - right)) * sigma(s)
    s1, w1 = _window_nodes(left, right, k3, order, anchor_right=True)
    f1 = eval_fn(s1.ravel())
    vec = f1.ndim == 1
    if vec:
        f1 = f1[:, None]
    m = f1.shape[1]
    w1full = w1 * np.exp(k3 * (s1 - right[:, None])) * _sigma(k3, s1) * 0.5
    g_seg = np.einsum("qn,qnm->qm", w1full, f1.reshape(nseg, -1, m))

    # Direction 2 (suffix): weight exp(k^3 (left - s)) * sigma(1 - s)
    s2, w2 = _window_nodes(left, right, k3, order, anchor_right=False)
    f2 = eval_fn(s2.ravel())
    if vec:
        f2 = f2[:, None]
    w2full = w2 * np.exp(k3 * (left[:, None] - s2)) * _sigma(k3, 1.0 - s2) * 0.5
    h_seg = np.einsum("qn,qnm->qm", w2full, f2.reshape(nseg, -1, m))

    decay = np.exp(-k3 * (right - left))
    i1 = np.zeros((len(t), m))
    for q in range(nseg):
        i1[q + 1] = decay[q] * i1[q] + g_seg[q]
    i2 = np.zeros((len(t), m))
    for q in range(nseg - 1, -1, -1):
        i2[q] = decay[q] * i2[q + 1] + h_seg[q]

    sig1 = float(_sigma(k3, 1.0))
    h_all = ra_tilde * k * (_sigma(k3, 1.0 - t)[:, None] * i1 + _sigma(k3, t)[:, None] * i2) / sig1
    hp0 = 2.0 * ra_tilde * k**4 * i2[0] / sig1
    hp1 = -2.0 * ra_tilde * k**4 * i1[-1] / sig1

    idx = np.searchsorted(t, pts)
    h_at = h_all[idx]
    if vec:
        return h_at[:, 0], float(hp0[0]), float(hp1[0])
    return h_at, hp0, hp1


def h_field(
    k: float,
    ra_tilde: float,
    theta: TestField,
    quad_order: int = 32,
    grid_n: int = DEFAULT_GRID_N,
) -> HFieldResult:
    """Dirichlet (Green's function) part h of the velocity mode on a grid.

    Evaluated twice, at quad_order and 2*quad_order; raises QuadratureError
    if the two resolutions disagree beyond 1e-8 relative.
    """
    if k <= 0:
        raise DomainError("k must be positive")
    if quad_order < 8:
        raise DomainError("quad_order must be at least 8")
    grid = np.linspace(0.0, 1.0, grid_n)
    eval_fn = lambda s: field_values(theta, s)
    h1, hp0_1, hp1_1 = _greens_apply(k, ra_tilde, eval_fn, grid, quad_order)
    h2, hp0_2, hp1_2 = _greens_apply(k, ra_tilde, eval_fn, grid, 2 * quad_order)
    scale = max(np.max(np.abs(h2)), abs(hp0_2) / max(k**3, 1.0), 1e-300)
    err = max(
        np.max(np.abs(h1 - h2)) / scale,
        abs(hp0_1 - hp0_2) / max(abs(hp0_2), scale),
        abs(hp1_1 - hp1_2) / max(abs(hp1_2), scale),
    )
    if err > 1e-8:
        raise QuadratureError(
            f"quadrature orders {quad_order} and {2*quad_order} disagree by {err:.3e}"
        )
    return HFieldResult(GridField(grid, h2), float(hp0_2), float(hp1_2))


def _robin_full(k: float, eps: float, hp0, hp1):
    """Scaled Robin solve: returns (c1, c2, A, B, a_tilde).

    a_tilde = A exp(k^3) is the cancellation-free coefficient used to
    evaluate the growing exponential as a_tilde * exp(-k^3 (1-z)).
    """
    k3 = k**3
    hp0 = np.asarray(hp0, dtype=float)
    hp1 = np.asarray(hp1, dtype=float)
    p = math.sqrt(eps / 2.0)
    e1 = math.exp(-k3)
    s_t = float(_sigma(k3, 1.0))  # 2 e^{-k^3} sinh(k^3)
    c_t = 1.0 + math.exp(-2.0 * k3)  # 2 e^{-k^3} cosh(k^3)
    d_t = (eps / 2.0) * k * k * s_t + 2.0 * p * k * c_t + s_t
    den = k * k * d_t
    c1 = -(((eps / 2.0) * k * s_t + p * c_t) * hp0 + 2.0 * e1 * p * hp1) / den
    c2 = (((eps / 2.0) * k * c_t + p * s_t) * hp0 - 2.0 * e1 * (eps / 2.0) * k * hp1) / den
    a_tilde = (((eps / 2.0) * k - p) * e1 * hp0 - ((eps / 2.0) * k + p) * hp1) / den
    a = a_tilde * e1
    b = (((eps / 2.0) * k + p) * hp0 + (p - (eps / 2.0) * k) * e1 * hp1) / den
    return c1, c2, a, b, a_tilde


def robin_coefficients(k: float, eps: float, hk_prime_0: float, hk_prime_1: float):
    """Coefficients (c1, c2) of sinh/cosh(k^3 z) fixed by the pumping conditions."""
    if k <= 0:
        raise DomainError("k must be positive")
    if not (0.0 < eps < 2.0):
        raise DomainError("eps must lie in (0, 2)")
    c1, c2, _, _, _ = _robin_full(k, eps, hk_prime_0, hk_prime_1)
    return float(c1), float(c2)


def _homogeneous_part(k3: float, a_tilde: float, b: float, z):
    """a_tilde e^{-k^3(1-z)} + b e^{-k^3 z}  ==  A e^{k^3 z} + B e^{-k^3 z}."""
    zarr = np.asarray(z, dtype=float)
    return a_tilde * np.exp(-k3 * (1.0 - zarr)) + b * np.exp(-k3 * zarr)


def solve_slaving(
    k: float,
    params: FlowParameters,
    theta: TestField,
    quad_order: int = 32,
) -> SlavingSolution:
    """Full velocity mode for one wavenumber and one temperature mode."""
    hres = h_field(k, params.ra_tilde, theta, quad_order)
    c1, c2, a, b, a_tilde = _robin_full(k, params.eps, hres.hk_prime_0, hres.hk_prime_1)
    k3 = k**3
    eval_fn = lambda s: field_values(theta, s)

    def evaluator(z):
        zarr = np.atleast_1d(np.asarray(z, dtype=float))
        if np.any(zarr < 0) or np.any(zarr > 1):
            raise DomainError("z must lie in [0, 1]")
        order = np.argsort(zarr)
        h_at, _, _ = _greens_apply(k, params.ra_tilde, eval_fn, zarr[order], quad_order)
        out = np.empty_like(zarr)
        out[order] = h_at
        out += _homogeneous_part(k3, a_tilde, b, zarr)
        return float(out[0]) if np.isscalar(z) else out

    w_grid = hres.field.values + _homogeneous_part(k3, a_tilde, b, hres.field.grid)
    return SlavingSolution(
        k=float(k),
        c1=float(a - b),
        c2=float(a + b),
        A=float(a),
        B=float(b),
        hk_prime_0=hres.hk_prime_0,
        hk_prime_1=hres.hk_prime_1,
        evaluator=evaluator,
        field=GridField(hres.field.grid, w_grid),
    )


def robin_residuals(sol: SlavingSolution, params: FlowParameters) -> tuple[float, float]:
    """Normalized residuals of the two pumping boundary conditions."""
    k = sol.k
    k3 = k**3
    p = math.sqrt(params.eps / 2.0)
    e1 = math.exp(-k3)
    a_tilde = sol.A * math.exp(k3) if k3 < 700 else None
    # regenerate the scaled growing coefficient without overflow
    w0 = sol.field.values[0]
    w1 = sol.field.values[-1]
    hp0, hp1 = sol.hk_prime_0, sol.hk_prime_1
    if a_tilde is None:
        # A underflows; recover a_tilde from w(1) = a_tilde + B e^{-k^3}
        a_tilde = w1 - sol.B * e1
    wp0 = k3 * (a_tilde * e1 - sol.B) + hp0
    wp1 = k3 * (a_tilde - sol.B * e1) + hp1
    scale = max(1.0, abs(k * k * w0), abs(k * k * w1))
    r0 = abs(k * k * w0 - p * wp0) / scale
    r1 = abs(k * k * w1 + p * wp1) / scale
    return r0, r1


def oracle_solve(
    k: float,
    params: FlowParameters,
    theta: TestField,
    n_grid: int,
    dirichlet: bool = False,
) -> GridField:
    """Second-order finite-difference reference solve on a uniform grid.

    Robin conditions are closed by ghost-point elimination, which keeps the
    scheme second order up to the boundary.  A `dirichlet` flag replaces the
    pumping conditions by w(0) = w(1) = 0 for analytic cross-checks.
    """
    if n_grid < 201:
        raise DomainError("n_grid must be at least 201")
    n = n_grid - 1
    h = 1.0 / n
    z = np.linspace(0.0, 1.0, n_grid)
    k3 = k**3
    k6 = k3 * k3
    f = k**4 * params.ra_tilde * field_values(theta, z)

    diag = np.full(n_grid, k6 + 2.0 / h**2)
    lower = np.full(n_grid - 1, -1.0 / h**2)
    upper = np.full(n_grid - 1, -1.0 / h**2)
    if dirichlet:
        diag[0] = 1.0
        upper[0] = 0.0
        f[0] = 0.0
        diag[-1] = 1.0
        lower[-1] = 0.0
        f[-1] = 0.0
    else:
        p = math.sqrt(params.eps / 2.0)
        diag[0] = k6 + 2.0 / h**2 + 2.0 * k * k / (h * p)
        upper[0] = -2.0 / h**2
        diag[-1] = k6 + 2.0 / h**2 + 2.0 * k * k / (h * p)
        lower[-1] = -2.0 / h**2

    ab = np.zeros((3, n_grid))
    ab[0, 1:] = upper
    ab[1, :] = diag
    ab[2, :-1] = lower
    try:
        w = scipy.linalg.solve_banded((1, 1), ab, f)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"tridiagonal solve failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise SingularSystemError("tridiagonal solve produced non-finite values")
    return GridField(z, w)
