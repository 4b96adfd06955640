"""Exact identity suites: biorthogonality, Macdonald-type formula, dual
pairing, Rodriguez-type formula, recursions, intertwining, commutativity.

Each suite runs a family of zero-tolerance rational checks and returns one
`CheckResult` per case, with a minimal counterexample in the detail field
on failure.  Suites are pure functions of the context, so they can be run
repeatedly or fanned out; cases are generated and reported in canonical
multi-index order for byte-stable output.

`gaussian_product_integrals` is the shared fast path: it integrates all
pairwise products of two polynomial families against the centered Gaussian
by precomputing the exact monomial moment table once (each monomial moment
is obtained by the same moment-basis expansion `gaussian_integrate` uses,
so no biorthogonality or pairing identity enters the computation).
"""

from __future__ import annotations

from dataclasses import dataclass

from .appell import (
    appell_character,
    appell_character_heat,
    appell_cocharacter,
    centered_moment,
    character_recursion,
    cocharacter_recursion,
    rodriguez_cocharacter,
)
from .intertwine import degree_matrix
from .operators import (
    DunklContext,
    dunkl_apply,
    dunkl_derivatives_at_zero,
    heat_apply,
)
from .polynomial import (
    Polynomial,
    monomials_of_degree,
    monomials_up_to_degree,
    multi_factorial,
)
from .rational import Q, rational_pow

SUITE_NAMES = (
    "biorthogonality",
    "macdonald",
    "rodriguez",
    "pairing",
    "recursions",
    "intertwining",
    "commutativity",
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    identity: str
    case: str
    ok: bool
    detail: str = ""


def _result(suite, identity, case, lhs, rhs) -> CheckResult:
    ok = lhs == rhs
    detail = "" if ok else f"lhs = {lhs}, rhs = {rhs}"
    return CheckResult(suite=suite, identity=identity, case=case, ok=ok, detail=detail)


def _fmt_nu(nu) -> str:
    return "(" + ",".join(str(e) for e in nu) + ")"


# ---------------------------------------------------------------------------
# fast bilinear Gaussian integration
# ---------------------------------------------------------------------------

def monomial_moment_table(ctx: DunklContext, max_degree: int, t) -> dict:
    """Exact centered-Gaussian integrals of all monomials up to max_degree.

    Per degree, the columns of the V^-1 matrix are precisely the
    moment-basis coefficients of the basis monomials, so each monomial
    integral is one dot product with the centered moment vector.
    """
    t = Q(t)
    table: dict = {}
    for degree in range(max_degree + 1):
        data = degree_matrix(ctx, degree)
        moments = [centered_moment(nu, t) for nu in data.basis]
        live = [i for i, m in enumerate(moments) if m != 0]
        for col, sigma in enumerate(data.basis):
            total = Q(0)
            for i in live:
                v = data.inverse[i][col]
                if v != 0:
                    total += moments[i] * v
            table[sigma] = total
    return table


def gaussian_product_integrals(ctx: DunklContext, left, right, t):
    """Matrix of exact centered integrals E[left_i * right_j].

    Bilinear expansion over the monomial moment table; equivalent to
    integrating each product polynomial directly, but with the moment
    expansion work shared across all pairs.
    """
    left = list(left)
    right = list(right)
    if not left or not right:
        return []
    deg_left = max(p.degree for p in left)
    deg_right = max(p.degree for p in right)
    table = monomial_moment_table(ctx, max(deg_left, 0) + max(deg_right, 0), t)
    right_monomials = monomials_up_to_degree(ctx.rank, max(deg_right, 0))
    out = []
    for p in left:
        partial: dict = {}
        for tau in right_monomials:
            total = Q(0)
            for sigma, c in p.items():
                key = tuple(s + u for s, u in zip(sigma, tau))
                total += c * table[key]
            if total != 0:
                partial[tau] = total
        row = []
        for q in right:
            total = Q(0)
            for tau, c in q.items():
                v = partial.get(tau)
                if v is not None:
                    total += c * v
            row.append(total)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_biorthogonality(ctx: DunklContext, t, max_degree: int, *, a_fn=None):
    """E[R_nu S_rho] = nu! delta_(nu,rho) for all |nu|, |rho| <= max_degree."""
    t = Q(t)
    indices = monomials_up_to_degree(ctx.rank, max_degree)
    characters = [appell_character(ctx, nu, t, a_fn=a_fn) for nu in indices]
    cocharacters = [appell_cocharacter(ctx, nu, t) for nu in indices]
    integrals = gaussian_product_integrals(ctx, characters, cocharacters, t)
    results = []
    for i, nu in enumerate(indices):
        for j, rho in enumerate(indices):
            expected = Q(multi_factorial(nu)) if nu == rho else Q(0)
            results.append(
                _result(
                    "biorthogonality",
                    "biorthogonality",
                    f"nu={_fmt_nu(nu)} rho={_fmt_nu(rho)} t={t}",
                    integrals[i][j],
                    expected,
                )
            )
    return results


def suite_macdonald(ctx: DunklContext, t, max_degree: int):
    """The Gaussian-integral formula for the pairing on monomials.

    Same-degree pairs: [x^nu, x^rho] = (2t)^-n E[flow(x^nu) flow(x^rho)].
    Cross-degree pairs: both the pairing and the raw integral vanish.
    """
    t = Q(t)
    indices = monomials_up_to_degree(ctx.rank, max_degree)
    flowed = [
        heat_apply(ctx, -t, Polynomial.monomial(ctx.rank, nu)) for nu in indices
    ]
    integrals = gaussian_product_integrals(ctx, flowed, flowed, t)
    derivs = {
        rho: dunkl_derivatives_at_zero(ctx, Polynomial.monomial(ctx.rank, rho))
        for rho in indices
    }
    results = []
    for i, nu in enumerate(indices):
        for j, rho in enumerate(indices):
            paired = derivs[rho].get(nu, Q(0))
            integral = integrals[i][j]
            case = f"nu={_fmt_nu(nu)} rho={_fmt_nu(rho)} t={t}"
            if sum(nu) == sum(rho):
                rhs = integral * rational_pow(2 * t, -sum(nu))
                results.append(
                    _result("macdonald", "macdonald-formula", case, paired, rhs)
                )
            else:
                ok = paired == 0 and integral == 0
                results.append(
                    CheckResult(
                        suite="macdonald",
                        identity="cross-degree-vanishing",
                        case=case,
                        ok=ok,
                        detail=""
                        if ok
                        else f"pairing = {paired}, integral = {integral}",
                    )
                )
    return results


def suite_pairing(ctx: DunklContext, max_degree: int):
    """Dual bases: [x^nu, m_rho] = nu! delta_(nu,rho)."""
    from .intertwine import moment_function

    indices = monomials_up_to_degree(ctx.rank, max_degree)
    results = []
    for rho in indices:
        derivs = dunkl_derivatives_at_zero(ctx, moment_function(ctx, rho))
        for nu in indices:
            got = derivs.get(nu, Q(0))
            expected = Q(multi_factorial(nu)) if nu == rho else Q(0)
            results.append(
                _result(
                    "pairing",
                    "pairing-duality",
                    f"nu={_fmt_nu(nu)} rho={_fmt_nu(rho)}",
                    got,
                    expected,
                )
            )
    return results


def suite_rodriguez(ctx: DunklContext, t, max_degree: int):
    """Route equalities: the product form of S_nu and both R_nu routes."""
    t = Q(t)
    results = []
    for nu in monomials_up_to_degree(ctx.rank, max_degree):
        case = f"nu={_fmt_nu(nu)} t={t}"
        results.append(
            _result(
                "rodriguez",
                "rodriguez-formula",
                case,
                rodriguez_cocharacter(ctx, nu, t),
                appell_cocharacter(ctx, nu, t),
            )
        )
        results.append(
            _result(
                "rodriguez",
                "character-route-equality",
                case,
                appell_character(ctx, nu, t),
                appell_character_heat(ctx, nu, t),
            )
        )
    return results


def suite_recursions(ctx: DunklContext, t, max_degree: int):
    """Lowering of characters by T and raising of cocharacters by T*."""
    t = Q(t)
    results = []
    for nu in monomials_up_to_degree(ctx.rank, max_degree):
        for axis in range(ctx.rank):
            case = f"nu={_fmt_nu(nu)} axis={axis + 1} t={t}"
            lhs, rhs = character_recursion(ctx, nu, axis, t)
            results.append(
                _result("recursions", "character-lowering", case, lhs, rhs)
            )
            lhs, rhs = cocharacter_recursion(ctx, nu, axis)
            results.append(
                _result(
                    "recursions",
                    "cocharacter-raising",
                    f"nu={_fmt_nu(nu)} axis={axis + 1} t=1/2",
                    lhs,
                    rhs,
                )
            )
    return results


def _operator_matrix(ctx: DunklContext, apply_fn, degree: int):
    """Matrix of a degree-lowering operator from degree to degree-1."""
    source = monomials_of_degree(ctx.rank, degree)
    target = monomials_of_degree(ctx.rank, degree - 1) if degree > 0 else []
    index = {nu: i for i, nu in enumerate(target)}
    cols = []
    for nu in source:
        image = apply_fn(Polynomial.monomial(ctx.rank, nu))
        col = [Q(0)] * len(target)
        for mu, c in image.items():
            col[index[mu]] = c
        cols.append(col)
    # stored column-major; transpose to row-major
    return [[cols[j][i] for j in range(len(source))] for i in range(len(target))]


def _mat_mul(a, b):
    if not a or not b:
        return []
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[Q(0)] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            v = a[i][k]
            if v == 0:
                continue
            row_b = b[k]
            row_o = out[i]
            for j in range(cols):
                if row_b[j] != 0:
                    row_o[j] += v * row_b[j]
    return out


def suite_intertwining(ctx: DunklContext, max_degree: int):
    """Per degree: T_i V = V d_i as matrices, and V V^-1 = identity."""
    results = []
    for degree in range(max_degree + 1):
        data = degree_matrix(ctx, degree)
        dim = len(data.basis)
        product = _mat_mul([list(r) for r in data.forward], [list(r) for r in data.inverse])
        identity = [[Q(1) if i == j else Q(0) for j in range(dim)] for i in range(dim)]
        results.append(
            _result(
                "intertwining",
                "v-inverse-roundtrip",
                f"degree={degree}",
                product,
                identity,
            )
        )
        if degree == 0:
            continue
        lower = degree_matrix(ctx, degree - 1)
        v_n = [list(r) for r in data.forward]
        v_low = [list(r) for r in lower.forward]
        for axis in range(ctx.rank):
            t_mat = _operator_matrix(
                ctx, lambda p, a=axis: dunkl_apply(ctx, a, p), degree
            )
            d_mat = _operator_matrix(
                ctx, lambda p, a=axis: p.partial_derivative(a), degree
            )
            results.append(
                _result(
                    "intertwining",
                    "intertwining-relation",
                    f"degree={degree} axis={axis + 1}",
                    _mat_mul(t_mat, v_n),
                    _mat_mul(v_low, d_mat),
                )
            )
    return results


def suite_commutativity(ctx: DunklContext, max_degree: int):
    """T_i T_j = T_j T_i on every monomial up to the degree cap."""
    results = []
    for nu in monomials_up_to_degree(ctx.rank, max_degree):
        p = Polynomial.monomial(ctx.rank, nu)
        for i in range(ctx.rank):
            t_i_p = dunkl_apply(ctx, i, p)
            for j in range(i + 1, ctx.rank):
                lhs = dunkl_apply(ctx, j, t_i_p)
                rhs = dunkl_apply(ctx, i, dunkl_apply(ctx, j, p))
                results.append(
                    _result(
                        "commutativity",
                        "commutativity",
                        f"nu={_fmt_nu(nu)} axes=({i + 1},{j + 1})",
                        lhs,
                        rhs,
                    )
                )
    return results


def run_suites(
    ctx: DunklContext,
    suites,
    t,
    max_degree: int,
    *,
    a_fn=None,
):
    """Run the named suites and return their concatenated results."""
    out = []
    for name in suites:
        if name == "biorthogonality":
            out.extend(suite_biorthogonality(ctx, t, max_degree, a_fn=a_fn))
        elif name == "macdonald":
            out.extend(suite_macdonald(ctx, t, max_degree))
        elif name == "rodriguez":
            out.extend(suite_rodriguez(ctx, t, max_degree))
        elif name == "pairing":
            out.extend(suite_pairing(ctx, max_degree))
        elif name == "recursions":
            out.extend(suite_recursions(ctx, t, max_degree))
        elif name == "intertwining":
            out.extend(suite_intertwining(ctx, max_degree))
        elif name == "commutativity":
            out.extend(suite_commutativity(ctx, max_degree))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out
