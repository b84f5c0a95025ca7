"""Closed-form estimates, admissibility conditions, and bound formulas.

Everything here is plain arithmetic on (k, b, delta, Ra~, eps) - no
discretization.  The inequalities bound quantities produced by the slaving
module (endpoint slopes of the Green's part, homogeneous coefficients,
boundary-layer integrals); the test suite checks domination case by case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Constants, FlowParameters, constants
from .errors import DomainError

__all__ = [
    "RecipeParameters",
    "BoundValue",
    "greens_derivative_bound",
    "greens_derivative_bound_simplified",
    "ab_coefficient_bounds",
    "c1c2_coefficient_bounds",
    "p_of_k",
    "greens_layer_l2_bound",
    "greens_boundary_integral_bound",
    "delta_admissible",
    "recipe",
    "recipe_for_b",
    "recipe_bound",
    "simplified_bound",
    "simplified_linear_coefficient",
    "literature_bounds",
    "SIMPLIFIED_LEADING_COEFFICIENT",
]

SIMPLIFIED_LEADING_COEFFICIENT = 10.0 / 27.0


@dataclass(frozen=True)
class RecipeParameters:
    """Closed-form feasible parameter choice for the layer-profile family.

    b is the balance parameter (the profile amplitude c equals b), delta
    the layer width, (d1, d2) the split of the coupling budget between the
    exponential and Green's contributions, and M the forcing ratio that
    fixes the optimal split.
    """

    b: float
    c: float
    delta: float
    d1: float
    d2: float
    M: float

    def __post_init__(self):
        if not self.b > 1.0:
            raise DomainError("b must exceed 1")
        if self.c != self.b:
            raise DomainError("profile amplitude c must equal b")
        if not (self.d1 > 0.0 and self.d2 >= 0.0):
            raise DomainError("d1 must be positive and d2 nonnegative")
        if self.d1 + self.d2 > (self.b - 1.0) * (1.0 + 1e-12):
            raise DomainError("d1 + d2 must not exceed b - 1")
        if not (0.0 < self.delta <= 0.5):
            raise DomainError("delta must lie in (0, 1/2]")


@dataclass(frozen=True)
class BoundValue:
    """A certified Nusselt upper bound and its term decomposition.

    nu_upper is clamped below at the conduction value 1; the three terms
    always sum to the raw (unclamped) bound.
    """

    nu_upper: float
    leading_term: float
    linear_term: float
    constant_term: float
    method: str

    def __post_init__(self):
        if self.nu_upper < 1.0:
            raise DomainError("bounds below the conduction value 1 are invalid")


def _sinh2x_minus_2x_over_4sinh2(x: float) -> float:
    """(sinh(2x) - 2x) / (4 sinh(x)^2), overflow-safe, -> 1/2 as x -> inf."""
    if x < 0.05:
        # series: (4x^3/3)(1 + x^2/5 + 2x^4/105) / (4 sinh(x)^2)
        num = (4.0 * x**3 / 3.0) * (1.0 + x * x / 5.0 + 2.0 * x**4 / 105.0)
        return num / (4.0 * math.sinh(x) ** 2)
    if x > 360.0:
        return 0.5
    num = 0.5 * (1.0 - math.exp(-4.0 * x)) - 2.0 * x * math.exp(-2.0 * x)
    den = (-math.expm1(-2.0 * x)) ** 2
    return num / den


def greens_derivative_bound(k: float, ra_tilde: float, theta_l2: float) -> float:
    """Upper bound on |h'(0)| and |h'(1)| for the Dirichlet velocity part.

    Equals Ra~ k^4 ||theta|| sqrt(sinh(2k^3)/k^3 - 2) / (2 sinh(k^3)),
    rewritten as Ra~ k^{5/2} ||theta|| sqrt(Q) with the stable ratio Q.
    """
    if k <= 0:
        raise DomainError("k must be positive")
    q = _sinh2x_minus_2x_over_4sinh2(k**3)
    return ra_tilde * k**2.5 * theta_l2 * math.sqrt(q)


def greens_derivative_bound_simplified(k: float, ra_tilde: float, theta_l2: float) -> float:
    """Uniform-in-k simplification of greens_derivative_bound."""
    if k <= 0:
        raise DomainError("k must be positive")
    return (math.sqrt(2.0) / 2.0) * ra_tilde * k**2.5 * theta_l2


def ab_coefficient_bounds(k: float, ra_tilde: float, theta_l2: float) -> tuple[float, float]:
    """Bounds on |A| and |B| of the exponential form, valid for k > 1."""
    if not k > 1.0:
        raise DomainError("the A/B estimates require k > 1")
    root = (math.sqrt(2.0) / 2.0) * ra_tilde * theta_l2 / math.sqrt(k)
    return math.exp(-(k**3)) * root, root


def c1c2_coefficient_bounds(
    k: float, eps: float, ra_tilde: float, theta_l2: float
) -> tuple[float, float]:
    """Bounds on |c1| and |c2| of the sinh/cosh form, valid for 0 < k <= 1."""
    if not 0.0 < k <= 1.0:
        raise DomainError("the c1/c2 estimates require 0 < k <= 1")
    if not (0.0 < eps < 2.0):
        raise DomainError("eps must lie in (0, 2) so that k <= sqrt(2/eps)")
    c1b = math.sqrt(1.0 / (2.0 * k)) * ra_tilde * theta_l2
    c2b = 0.5 * math.sqrt(eps * k) * ra_tilde * theta_l2
    return c1b, c2b


def p_of_k(k: float, b: float, ra_tilde: float, eps: float, delta: float) -> float:
    """Layer integral of the exponential part, per unit ||theta'|| ||theta||.

    Piecewise: (b/2) Ra~ sqrt(delta + delta^3)(k^{5/2} + sqrt(eps k)) for
    k <= 1 and b Ra~ sqrt(delta/k) for k > 1.
    """
    if k <= 0:
        raise DomainError("k must be positive")
    if not b > 1.0:
        raise DomainError("b must exceed 1")
    if not (0.0 < delta <= 0.5):
        raise DomainError("delta must lie in (0, 1/2]")
    if k <= 1.0:
        return 0.5 * b * ra_tilde * math.sqrt(delta + delta**3) * (k**2.5 + math.sqrt(eps * k))
    return b * ra_tilde * math.sqrt(delta / k)


def greens_layer_l2_bound(k: float, ra_tilde: float, theta_l2: float, width: float) -> float:
    """Bound on the L2 norm of the Green's part over a wall layer of given width.

    Piecewise in k^3 * width relative to gamma; the same bound holds for the
    layer at either wall.
    """
    if k <= 0 or not (0.0 < width <= 0.5):
        raise DomainError("need k > 0 and width in (0, 1/2]")
    cst = constants()
    if k**3 * width <= cst.gamma:
        return width * ra_tilde * theta_l2 * math.sqrt(width * k**5 * cst.P)
    return 0.5 * width * ra_tilde * theta_l2 * math.sqrt(cst.L / (2.0 * k * width))


def greens_boundary_integral_bound(
    k: float,
    b: float,
    delta: float,
    ra_tilde: float,
    theta_l2: float,
    theta_prime_l2: float,
) -> float:
    """Bound on (b/(2 delta)) * integral over both layers of |h theta|.

    Chain: ||theta||_{L2(B)} <= delta ||theta'|| kills the 1/(2 delta)
    prefactor, and the two-layer norm is at most sqrt(2) times the
    single-layer bound.
    """
    side = greens_layer_l2_bound(k, ra_tilde, theta_l2, delta)
    return (b / 2.0) * theta_prime_l2 * math.sqrt(2.0) * side


def delta_admissible(b: float, d1: float, d2: float, params: FlowParameters) -> float:
    """Largest layer width covered by the two admissibility conditions.

    min( 16 d1^2 eps^2 / (5 b^2 Ra~^2),  8 d2 sqrt(gamma) eps / (b Ra~ sqrt(L)),
    1/2 ).  The third analytic condition is implied by the second because
    8 sqrt(gamma/L) < 2 sqrt(2)/sqrt(gamma P).
    """
    if not b > 1.0:
        raise DomainError("b must exceed 1")
    if not (d1 > 0.0 and d2 >= 0.0):
        raise DomainError("d1 must be positive and d2 nonnegative")
    cst = constants()
    assert 8.0 * math.sqrt(cst.gamma / cst.L) < 2.0 * math.sqrt(2.0) / math.sqrt(cst.gamma * cst.P)
    arm1 = 16.0 * d1 * d1 * params.eps**2 / (5.0 * b * b * params.ra_tilde**2)
    arm2 = 8.0 * d2 * math.sqrt(cst.gamma) * params.eps / (b * params.ra_tilde * math.sqrt(cst.L))
    return min(arm1, arm2, 0.5)


def _forcing_ratio(b: float, params: FlowParameters, cst: Constants) -> float:
    return 5.0 * b * math.sqrt(cst.gamma) * params.ra_tilde / (2.0 * math.sqrt(cst.L) * params.eps)


def recipe_for_b(params: FlowParameters, b: float) -> RecipeParameters:
    """Closed-form (delta, d1, d2) making both admissibility arms match."""
    if not b > 1.0:
        raise DomainError("b must exceed 1")
    cst = constants()
    m = _forcing_ratio(b, params, cst)
    d1 = 2.0 * (b - 1.0) / (math.sqrt(1.0 + 4.0 * (b - 1.0) / m) + 1.0)
    d2 = b - 1.0 - d1
    delta = min(16.0 * d1 * d1 * params.eps**2 / (5.0 * b * b * params.ra_tilde**2), 0.5)
    return RecipeParameters(b=b, c=b, delta=delta, d1=d1, d2=d2, M=m)


def recipe(params: FlowParameters) -> RecipeParameters:
    """The closed-form parameter choice with the optimal balance b = 4."""
    return recipe_for_b(params, 4.0)


def recipe_bound(params: FlowParameters) -> BoundValue:
    """Bound produced by the closed-form recipe, clamped at conduction."""
    rp = recipe(params)
    raw_main = 5.0 * (math.sqrt(1.0 + 12.0 / rp.M) + 1.0) ** 2 * params.ra_tilde**2 / (
        54.0 * params.eps**2
    )
    if rp.delta >= 0.5:
        return BoundValue(1.0, 1.0, 0.0, 0.0, method="recipe")
    nu = max(1.0, raw_main - 1.0 / 3.0)
    return BoundValue(nu, raw_main, 0.0, -1.0 / 3.0, method="recipe")


def simplified_linear_coefficient() -> float:
    """2 sqrt(L) / (9 sqrt(gamma))."""
    cst = constants()
    return 2.0 * math.sqrt(cst.L) / (9.0 * math.sqrt(cst.gamma))


def simplified_bound(params: FlowParameters) -> BoundValue:
    """Final closed-form bound: (10/27) Ra^2 Ek^2 + c1 Ra Ek - 1/3."""
    ra_ek = params.ra * params.ek
    lead = SIMPLIFIED_LEADING_COEFFICIENT * ra_ek * ra_ek
    lin = simplified_linear_coefficient() * ra_ek
    nu = max(1.0, lead + lin - 1.0 / 3.0)
    return BoundValue(nu, lead, lin, -1.0 / 3.0, method="simplified")


def literature_bounds(ra: float, ek: float) -> list[tuple[str, float]]:
    """Published comparison bounds for the same no-slip configuration.

    Labels encode the scaling: ra2_ek is 1 + 9.5 Ra^2 Ek, ra_2by5 is
    0.6635 Ra^{2/5}, and ra_4by11 is 2 Ra^{4/11} (1 + 1/(2 Ek))^{4/11}
    (prefactor taken at its stated upper limit 2).
    """
    if ra <= 0 or ek <= 0:
        raise DomainError("Ra and Ek must be positive")
    return [
        ("ra2_ek", 1.0 + 9.5 * ra * ra * ek),
        ("ra_2by5", 0.6635 * ra**0.4),
        ("ra_4by11", 2.0 * (ra * (1.0 + 1.0 / (2.0 * ek))) ** (4.0 / 11.0)),
    ]
