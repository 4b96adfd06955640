"""Appell characters/cocharacters and exact Gaussian integration.

The centered k-Gaussian measure with variance parameter t integrates the
moment polynomial m_nu to

    E[m_nu] = (2*mu)!/mu! * t^|mu|   if nu = 2*mu,   0 otherwise,

which turns integration of any polynomial into exact rational arithmetic:
expand in the moment basis (`taylor_coefficients`) and integrate term by
term.  No quadrature is ever involved, so every identity in this module is
a decidable rational equation.

On top of that functional sit the two Appell families

    R_nu(t, .) = sum_{rho <= nu} binom(nu, rho) a_{nu-rho}(t) m_rho
               = heat_apply(-t, m_nu),
    S_nu(t, .) = (2t)^-|nu| * heat_apply(-t, x^nu),

which are biorthogonal: E[R_nu S_rho] = nu! delta_{nu,rho}.  The module
also provides the dual pairing [p,q] = (p(T)q)(0), the Gaussian-integral
identity relating the two (Macdonald-type formula), a Rodriguez-type
product form for S_nu, and orthogonal bases of generalized Hermite type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .intertwine import moment_function, taylor_coefficients
from .operators import (
    DunklContext,
    adjoint_apply,
    dunkl_apply,
    gaussian_conjugate_apply,
    heat_apply,
)
from .operators import pairing as _pairing_form
from .polynomial import (
    MultiIndex,
    Polynomial,
    indices_below,
    monomials_up_to_degree,
    multi_binomial,
    multi_factorial,
    unit_index,
)
from .rational import ONE, Q, rational_pow


@dataclass(frozen=True)
class GaussianSpec:
    """A k-Gaussian integration functional: variance parameter and center."""

    t: object
    center: tuple = None  # zero vector when omitted

    def __post_init__(self):
        t = Q(self.t)
        if t <= 0:
            raise ValueError("variance parameter t must be > 0")
        object.__setattr__(self, "t", t)
        if self.center is not None:
            object.__setattr__(self, "center", tuple(Q(c) for c in self.center))

    def is_centered(self) -> bool:
        return self.center is None or all(c == 0 for c in self.center)


def appell_coefficient(lam: MultiIndex, t) -> object:
    """Coefficient a(lam, t) of the reciprocal Gaussian generating factor.

    a(lam, t) = (2*mu)!/mu! * (-t)^|mu| when lam = 2*mu, else 0.  With the
    sign flipped (t -> -t) these are the centered Gaussian moments of the
    moment basis.
    """
    t = Q(t)
    if any(e % 2 for e in lam):
        return Q(0)
    mu = tuple(e // 2 for e in lam)
    value = Q(multi_factorial(lam)) / multi_factorial(mu)
    return value * rational_pow(-t, sum(mu))


def appell_character(ctx: DunklContext, nu: MultiIndex, t, *, a_fn=None) -> Polynomial:
    """The Appell character R_nu(t, .) via the binomial moment expansion.

    Equal (a tested identity, not an assumption) to heat_apply(-t, m_nu).
    `a_fn` overrides the coefficient function; it exists as a fault
    injection hook for the verification suites.
    """
    nu = tuple(nu)
    t = Q(t)
    coeff = a_fn or appell_coefficient
    out = Polynomial.zero(ctx.rank)
    for rho in indices_below(nu):
        lam = tuple(n - r for n, r in zip(nu, rho))
        a = coeff(lam, t)
        if a == 0:
            continue
        b = multi_binomial(nu, rho)
        out = out + moment_function(ctx, rho).scale(a * b)
    return out


def appell_character_heat(ctx: DunklContext, nu: MultiIndex, t) -> Polynomial:
    """R_nu(t, .) through the backward heat flow; the independent route."""
    return heat_apply(ctx, -Q(t), moment_function(ctx, tuple(nu)))


def appell_cocharacter(ctx: DunklContext, nu: MultiIndex, t) -> Polynomial:
    """The Appell cocharacter S_nu(t, .) = (2t)^-|nu| heat_apply(-t, x^nu)."""
    nu = tuple(nu)
    t = Q(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    flowed = heat_apply(ctx, -t, Polynomial.monomial(ctx.rank, nu))
    return flowed.scale(rational_pow(2 * t, -sum(nu)))


def rodriguez_cocharacter(ctx: DunklContext, nu: MultiIndex, t) -> Polynomial:
    """S_nu(t, .) as (-1)^|nu| times the Gaussian-conjugated T^nu applied to 1.

    Computed by iterating `gaussian_conjugate_apply`, never via the heat
    flow, so comparing with `appell_cocharacter` checks the Rodriguez-type
    formula rather than restating it.
    """
    nu = tuple(nu)
    t = Q(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    out = Polynomial.one(ctx.rank)
    for axis, e in enumerate(nu):
        for _ in range(e):
            out = gaussian_conjugate_apply(ctx, axis, t, out)
    if sum(nu) % 2:
        out = -out
    return out


# ---------------------------------------------------------------------------
# exact Gaussian integration
# ---------------------------------------------------------------------------

def centered_moment(nu: MultiIndex, t) -> object:
    """E[m_nu] for the centered measure: appell_coefficient at -t."""
    return appell_coefficient(nu, -Q(t))


def gaussian_moment(ctx: DunklContext, nu: MultiIndex, spec: GaussianSpec):
    """Exact integral of m_nu against the k-Gaussian given by `spec`.

    For a non-zero center x the binomial convolution
    E_x[m_nu] = sum_{rho <= nu} binom(nu, rho) E_0[m_rho] m_{nu-rho}(x)
    reduces everything to centered moments and moment-polynomial values.
    """
    nu = tuple(nu)
    if spec.is_centered():
        return centered_moment(nu, spec.t)
    total = Q(0)
    for rho in indices_below(nu):
        base = centered_moment(rho, spec.t)
        if base == 0:
            continue
        lam = tuple(n - r for n, r in zip(nu, rho))
        value = moment_function(ctx, lam).evaluate(spec.center)
        if value != 0:
            total += multi_binomial(nu, rho) * base * value
    return total


def gaussian_moment_poly(ctx: DunklContext, nu: MultiIndex, t) -> Polynomial:
    """E_x[m_nu] as an exact polynomial in the center x."""
    nu = tuple(nu)
    out = Polynomial.zero(ctx.rank)
    for rho in indices_below(nu):
        base = centered_moment(rho, t)
        if base == 0:
            continue
        lam = tuple(n - r for n, r in zip(nu, rho))
        out = out + moment_function(ctx, lam).scale(multi_binomial(nu, rho) * base)
    return out


def gaussian_integrate(ctx: DunklContext, p: Polynomial, spec: GaussianSpec):
    """Exact integral of p against the k-Gaussian measure.

    Expands p in the moment basis and integrates term by term; linear in p
    and normalized (integral of 1 is 1).
    """
    if p.rank != ctx.rank:
        raise ValueError("rank mismatch")
    total = Q(0)
    for nu, c in taylor_coefficients(ctx, p).items():
        total += c * gaussian_moment(ctx, nu, spec)
    return total


def gaussian_integrate_poly(ctx: DunklContext, p: Polynomial, t) -> Polynomial:
    """Integral of p against the k-Gaussian, as a polynomial in the center."""
    if p.rank != ctx.rank:
        raise ValueError("rank mismatch")
    out = Polynomial.zero(ctx.rank)
    for nu, c in taylor_coefficients(ctx, p).items():
        out = out + gaussian_moment_poly(ctx, nu, t).scale(c)
    return out


# ---------------------------------------------------------------------------
# pairing and the Macdonald-type identity
# ---------------------------------------------------------------------------

def pairing(ctx: DunklContext, p: Polynomial, q: Polynomial):
    """[p, q] = (p(T) q)(0); dual bases satisfy [x^nu, m_rho] = nu! delta."""
    return _pairing_form(ctx, p, q)


def macdonald_check(ctx: DunklContext, p: Polynomial, q: Polynomial, t):
    """Both sides of the Gaussian-integral formula for the pairing.

    For homogeneous p, q of a common degree n returns
    ([p,q], (2t)^-n * E[heat(-t,p) * heat(-t,q)]); for distinct homogeneous
    degrees the normalization exponent is ambiguous, so the unnormalized
    integral is returned and both sides must vanish.  Non-homogeneous input
    is rejected.
    """
    t = Q(t)
    if t <= 0:
        raise ValueError("t must be > 0")
    if not p.is_homogeneous() or not q.is_homogeneous():
        raise ValueError("macdonald_check requires homogeneous polynomials")
    left = pairing(ctx, p, q)
    product = heat_apply(ctx, -t, p) * heat_apply(ctx, -t, q)
    integral = gaussian_integrate(ctx, product, GaussianSpec(t))
    if p.degree == q.degree and p.degree >= 0:
        right = integral * rational_pow(2 * t, -p.degree)
    else:
        right = integral
    return left, right


# ---------------------------------------------------------------------------
# recursions
# ---------------------------------------------------------------------------

def character_recursion(ctx: DunklContext, nu: MultiIndex, axis: int, t):
    """(T_axis R_{nu+e}, (nu_axis+1) R_nu): the lowering identity, both sides."""
    nu = tuple(nu)
    raised = tuple(e + 1 if i == axis else e for i, e in enumerate(nu))
    lhs = dunkl_apply(ctx, axis, appell_character(ctx, raised, t))
    rhs = appell_character(ctx, nu, t).scale(nu[axis] + 1)
    return lhs, rhs


def cocharacter_recursion(ctx: DunklContext, nu: MultiIndex, axis: int):
    """(S_{nu+e}(1/2), T*_axis S_nu(1/2)): the raising identity, both sides.

    The adjoint raises cocharacters at variance parameter 1/2, where the
    Gaussian weight matches the adjoint's defining inner product.
    """
    nu = tuple(nu)
    half = Q(1, 2)
    raised = tuple(e + 1 if i == axis else e for i, e in enumerate(nu))
    lhs = appell_cocharacter(ctx, raised, half)
    rhs = adjoint_apply(ctx, axis, appell_cocharacter(ctx, nu, half))
    return lhs, rhs


# ---------------------------------------------------------------------------
# generalized Hermite bases and eager tables
# ---------------------------------------------------------------------------

def orthogonal_monomial_basis(ctx: DunklContext, max_degree: int) -> list[tuple[MultiIndex, Polynomial]]:
    """Gram-Schmidt of the monomials under the [.,.] pairing, unnormalized.

    Monomials are processed in canonical order (degree first); distinct
    degrees are automatically orthogonal, so the elimination effectively
    runs within each degree.  Results are monic in their leading monomial.
    """
    basis: list[tuple[MultiIndex, Polynomial]] = []
    norms: list = []
    for nu in monomials_up_to_degree(ctx.rank, max_degree):
        candidate = Polynomial.monomial(ctx.rank, nu)
        for (rho, phi), norm in zip(basis, norms):
            if sum(rho) != sum(nu):
                continue
            overlap = pairing(ctx, candidate, phi)
            if overlap != 0:
                candidate = candidate - phi.scale(overlap / norm)
        norm = pairing(ctx, candidate, candidate)
        if norm <= 0:
            raise ArithmeticError("pairing lost positive definiteness")
        basis.append((nu, candidate))
        norms.append(norm)
    return basis


def hermite_basis(ctx: DunklContext, max_degree: int, t) -> list[tuple[MultiIndex, Polynomial]]:
    """Orthogonal polynomials for the centered k-Gaussian at parameter t.

    Images under the backward heat flow of a pairing-orthogonal basis;
    pairwise Gaussian-orthogonal, with deg H_nu = |nu|.
    """
    t = Q(t)
    if t <= 0:
        raise ValueError("t must be > 0")
    return [
        (nu, heat_apply(ctx, -t, phi))
        for nu, phi in orthogonal_monomial_basis(ctx, max_degree)
    ]


@dataclass(frozen=True)
class AppellTables:
    """Eagerly generated R_nu / S_nu pairs for all |nu| <= max_degree."""

    max_degree: int
    t: object
    entries: tuple  # (nu, R_nu, S_nu) in canonical multi-index order


def appell_tables(ctx: DunklContext, max_degree: int, t) -> AppellTables:
    t = Q(t)
    entries = []
    for nu in monomials_up_to_degree(ctx.rank, max_degree):
        entries.append(
            (nu, appell_character(ctx, nu, t), appell_cocharacter(ctx, nu, t))
        )
    return AppellTables(max_degree=max_degree, t=t, entries=tuple(entries))
