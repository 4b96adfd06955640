"""The degree-preserving intertwining isomorphism V and moment polynomials.

V is the unique linear isomorphism of polynomials that preserves each
homogeneous degree, fixes constants, and swaps the difference operators for
plain partials (T_i V = V d_i).  Its inverse has the explicit expansion

    (V^-1 f)(y) = sum_nu y^nu / nu! * (T^nu f)(0),

so per degree we build the matrix of V^-1 directly from difference
derivatives at the origin (no linear solve) and obtain V by exact matrix
inversion.  The intertwining relation is then a genuine test rather than a
construction constraint.

The moment polynomials m_nu = V(x^nu) generalize the monomials; per degree
they form a basis, dual to the monomials under the (p(T)q)(0) pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operators import DunklContext, dunkl_derivatives_at_zero
from .polynomial import (
    MultiIndex,
    Polynomial,
    monomials_of_degree,
    multi_factorial,
)
from .rational import ONE, ZERO, Q

Matrix = tuple[tuple[object, ...], ...]


class SingularMatrixError(ArithmeticError):
    """The per-degree system is singular, i.e. the multiplicity is invalid
    (cannot happen for non-negative weights)."""


@dataclass(frozen=True)
class DegreeMatrix:
    """V and V^-1 restricted to one homogeneous degree.

    `basis` lists the monomial exponents of the degree in canonical order;
    `forward` and `inverse` are the matrices of V and V^-1 in that basis
    (columns hold images of basis monomials).
    """

    degree: int
    basis: tuple[MultiIndex, ...]
    forward: Matrix
    inverse: Matrix


def degree_matrix(ctx: DunklContext, degree: int) -> DegreeMatrix:
    """The cached per-degree data, built on first use."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    return ctx.cached_degree_data(degree, lambda: _build_degree_matrix(ctx, degree))


def _build_degree_matrix(ctx: DunklContext, degree: int) -> DegreeMatrix:
    basis = tuple(monomials_of_degree(ctx.rank, degree))
    index = {nu: i for i, nu in enumerate(basis)}
    dim = len(basis)
    inverse = [[ZERO] * dim for _ in range(dim)]
    for col, rho in enumerate(basis):
        monomial = Polynomial.monomial(ctx.rank, rho)
        derivs = dunkl_derivatives_at_zero(ctx, monomial)
        for nu, value in derivs.items():
            if sum(nu) != degree:
                continue  # homogeneous input: only top-order terms survive
            inverse[index[nu]][col] = value / multi_factorial(nu)
    inv = tuple(tuple(row) for row in inverse)
    fwd = _invert_matrix(inverse)
    return DegreeMatrix(degree=degree, basis=basis, forward=fwd, inverse=inv)


def _invert_matrix(rows: list[list]) -> Matrix:
    """Exact Gauss-Jordan inverse over the rationals."""
    n = len(rows)
    aug = [list(rows[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(
                "invalid multiplicity: degree matrix is singular"
            )
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_pivot = ONE / aug[col][col]
        aug[col] = [v * inv_pivot for v in aug[col]]
        for r in range(n):
            if r == col:
                continue
            factor = aug[r][col]
            if factor == 0:
                continue
            row_c = aug[col]
            aug[r] = [v - factor * row_c[j] for j, v in enumerate(aug[r])]
    return tuple(tuple(row[n:]) for row in aug)


def v_inverse_matrix(ctx: DunklContext, degree: int) -> Matrix:
    """Matrix of V^-1 on the homogeneous degree, canonical monomial basis."""
    return degree_matrix(ctx, degree).inverse


def v_matrix(ctx: DunklContext, degree: int) -> Matrix:
    """Matrix of V on the homogeneous degree, canonical monomial basis."""
    return degree_matrix(ctx, degree).forward


def _apply_degreewise(ctx: DunklContext, p: Polynomial, which: str) -> Polynomial:
    out = Polynomial.zero(p.rank)
    for degree, component in p.homogeneous_components():
        data = degree_matrix(ctx, degree)
        matrix = data.forward if which == "forward" else data.inverse
        coeffs = [component.coefficient(nu) for nu in data.basis]
        terms = {}
        for i, nu in enumerate(data.basis):
            row = matrix[i]
            value = sum(
                (row[j] * coeffs[j] for j in range(len(coeffs)) if coeffs[j] != 0),
                ZERO,
            )
            if value != 0:
                terms[nu] = value
        out = out + Polynomial(p.rank, terms)
    return out


def apply_v(ctx: DunklContext, p: Polynomial) -> Polynomial:
    """Apply V degree by degree (degree-preserving, fixes constants)."""
    if p.rank != ctx.rank:
        raise ValueError("rank mismatch")
    return _apply_degreewise(ctx, p, "forward")


def apply_v_inverse(ctx: DunklContext, p: Polynomial) -> Polynomial:
    """Apply V^-1 degree by degree."""
    if p.rank != ctx.rank:
        raise ValueError("rank mismatch")
    return _apply_degreewise(ctx, p, "inverse")


def moment_function(ctx: DunklContext, nu: MultiIndex) -> Polynomial:
    """The moment polynomial m_nu = V(x^nu), cached on the context."""
    nu = tuple(nu)
    if len(nu) != ctx.rank:
        raise ValueError("multi-index length does not match rank")
    return ctx.cached_moment(
        nu, lambda: apply_v(ctx, Polynomial.monomial(ctx.rank, nu))
    )


def taylor_coefficients(ctx: DunklContext, p: Polynomial) -> dict[MultiIndex, object]:
    """Coefficients c_nu = (T^nu p)(0) / nu! of the expansion p = sum c_nu m_nu.

    These are exactly the monomial coefficients of V^-1 p, so the cached
    per-degree matrices do the work; the reconstruction sum is exact.
    """
    result: dict[MultiIndex, object] = {}
    expanded = apply_v_inverse(ctx, p)
    for nu, c in expanded.items():
        result[nu] = c
    return result


def reconstruct_from_moments(ctx: DunklContext, coefficients: dict) -> Polynomial:
    """Inverse of `taylor_coefficients`: sum c_nu m_nu."""
    out = Polynomial.zero(ctx.rank)
    for nu, c in coefficients.items():
        c = Q(c)
        if c != 0:
            out = out + moment_function(ctx, nu).scale(c)
    return out
