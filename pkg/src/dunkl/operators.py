"""Difference-differential operators attached to a reflection group.

For a root system with positive roots alpha and weights k(alpha) >= 0, the
operator along axis i acts on a polynomial p as

    T_i p = d_i p + sum_alpha k(alpha) * alpha_i * (p - p o sigma_alpha) / <alpha, x>

where the quotient is an exact polynomial division (the numerator vanishes
on the reflecting hyperplane).  The T_i commute, lower homogeneous degree
by one, and reduce to plain partial derivatives when all weights vanish.

Everything here is exact rational arithmetic on polynomials.  The
`DunklContext` bundles the root data with the weights and carries the lazy
caches used by the higher layers (per-degree basis matrices, moment
polynomials).  Contexts are immutable apart from those caches, whose fills
are idempotent, so they can be shared freely across threads.
"""

from __future__ import annotations

import threading

from .polynomial import MultiIndex, Polynomial
from .rational import ONE, Q
from .rootsystems import Multiplicity, RootSystem, gamma_k


class DunklContext:
    """A reflection group with multiplicities, plus computation caches."""

    __slots__ = (
        "root_system",
        "multiplicity",
        "rank",
        "_difference_terms",
        "_degree_cache",
        "_moment_cache",
        "_cache_lock",
    )

    def __init__(self, root_system: RootSystem, multiplicity: Multiplicity):
        self.root_system = root_system
        self.multiplicity = multiplicity
        self.rank = root_system.rank
        # (alpha, k(alpha), sigma_alpha) for the roots that actually
        # contribute; zero-weight orbits drop out of the operator.
        self._difference_terms = tuple(
            (alpha, multiplicity.of_root(alpha), sigma)
            for alpha, sigma in zip(root_system.positive_roots, root_system.reflections)
            if multiplicity.of_root(alpha) != 0
        )
        self._degree_cache: dict[int, object] = {}
        self._moment_cache: dict[MultiIndex, Polynomial] = {}
        self._cache_lock = threading.Lock()

    @property
    def gamma(self):
        """Sum of the weights over the positive roots."""
        return gamma_k(self.root_system, self.multiplicity)

    def cached_degree_data(self, degree: int, build):
        """Idempotent per-degree cache fill (used by the basis-matrix layer)."""
        data = self._degree_cache.get(degree)
        if data is None:
            built = build()  # deterministic, so duplicated work is harmless
            with self._cache_lock:
                data = self._degree_cache.setdefault(degree, built)
        return data

    def cached_moment(self, nu: MultiIndex, build):
        poly = self._moment_cache.get(nu)
        if poly is None:
            built = build()
            with self._cache_lock:
                poly = self._moment_cache.setdefault(nu, built)
        return poly

    def __repr__(self) -> str:
        return (
            f"DunklContext({self.root_system.catalog_label}, "
            f"k={self.multiplicity!r})"
        )


def make_context(family: str, rank: int, k_values) -> DunklContext:
    """Convenience constructor from catalog data."""
    from .rootsystems import build_catalog

    rs = build_catalog(family, rank)
    return DunklContext(rs, Multiplicity(rs, list(k_values)))


def dunkl_apply(ctx: DunklContext, axis: int, p: Polynomial) -> Polynomial:
    """Apply the operator along `axis` (0-based) to p."""
    if p.rank != ctx.rank:
        raise ValueError(f"polynomial rank {p.rank} != context rank {ctx.rank}")
    out = p.partial_derivative(axis)
    for alpha, k, sigma in ctx._difference_terms:
        coeff = k * alpha[axis]
        if coeff == 0:
            continue
        numerator = p - p.substitute_linear(sigma)
        if numerator.is_zero():
            continue
        out = out + numerator.divide_linear_form(alpha).scale(coeff)
    return out


def laplacian_apply(ctx: DunklContext, p: Polynomial) -> Polynomial:
    """Sum of the squared operators over all axes."""
    out = Polynomial.zero(p.rank)
    for axis in range(ctx.rank):
        out = out + dunkl_apply(ctx, axis, dunkl_apply(ctx, axis, p))
    return out


def heat_apply(ctx: DunklContext, t, p: Polynomial) -> Polynomial:
    """The heat flow exp(t * Laplacian) applied to p.

    On polynomials the exponential series terminates, so this is exact for
    any rational t (negative t runs the flow backwards and inverts it:
    heat_apply(-t, heat_apply(t, p)) == p).
    """
    t = Q(t)
    out = p
    power = p
    factor = ONE
    j = 0
    while True:
        power = laplacian_apply(ctx, power)
        if power.is_zero():
            return out
        j += 1
        factor = factor * t / j
        out = out + power.scale(factor)


def dunkl_power_apply(ctx: DunklContext, nu: MultiIndex, p: Polynomial) -> Polynomial:
    """Apply T^nu = T_1^nu_1 ... T_N^nu_N.

    The operators commute, so the application order does not matter
    mathematically; axes are processed in ascending order to make any
    failure reproducible.
    """
    if len(nu) != ctx.rank:
        raise ValueError("multi-index length does not match rank")
    out = p
    for axis, e in enumerate(nu):
        for _ in range(e):
            if out.is_zero():
                return out
            out = dunkl_apply(ctx, axis, out)
    return out


def adjoint_apply(ctx: DunklContext, axis: int, p: Polynomial) -> Polynomial:
    """The adjoint of T_axis in the centered Gaussian inner product:
    p -> x_axis * p - T_axis p."""
    x_j = Polynomial.variable(ctx.rank, axis)
    return x_j * p - dunkl_apply(ctx, axis, p)


def gaussian_conjugate_apply(
    ctx: DunklContext, axis: int, t, p: Polynomial
) -> Polynomial:
    """Conjugation of T_axis by the Gaussian factor exp(-|x|^2/4t).

    Because that factor is group-invariant, the product rule gives
    T_j (e^(-|x|^2/4t) p) = e^(-|x|^2/4t) (T_j p - x_j/(2t) p); this returns
    the polynomial part.  Iterating it yields the raising operators used in
    the Rodriguez-type formula.
    """
    t = Q(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    x_j = Polynomial.variable(ctx.rank, axis)
    return dunkl_apply(ctx, axis, p) - (x_j * p).scale(ONE / (2 * t))


def dunkl_derivatives_at_zero(ctx: DunklContext, p: Polynomial) -> dict[MultiIndex, object]:
    """All values (T^nu p)(0) for |nu| <= deg p, as a sparse dict.

    Walks the multi-index lattice once: each nu is reached by a unique
    chain that appends axes in non-increasing order, so every intermediate
    polynomial T^nu p is computed exactly once.
    """
    zero = (0,) * ctx.rank
    values: dict[MultiIndex, object] = {}
    level: dict[MultiIndex, Polynomial] = {zero: p}
    while level:
        next_level: dict[MultiIndex, Polynomial] = {}
        for nu, q in level.items():
            c = q.constant_term()
            if c != 0:
                values[nu] = c
            first_used = next((i for i, e in enumerate(nu) if e), ctx.rank - 1)
            for axis in range(first_used + 1):
                image = dunkl_apply(ctx, axis, q)
                if not image.is_zero():  # zero stays zero further down
                    bumped = nu[:axis] + (nu[axis] + 1,) + nu[axis + 1:]
                    next_level[bumped] = image
        level = next_level
    return values


def pairing(ctx: DunklContext, p: Polynomial, q: Polynomial):
    """The bilinear form (p, q) -> (p(T) q)(0).

    p(T) substitutes T_i for x_i in p; the form pairs the monomial and
    moment bases dually and is a scalar product on real polynomials.
    """
    if p.rank != q.rank:
        raise ValueError("rank mismatch")
    derivs = dunkl_derivatives_at_zero(ctx, q)
    total = Q(0)
    for nu, c in p.items():
        v = derivs.get(nu)
        if v is not None:
            total += c * v
    return total
