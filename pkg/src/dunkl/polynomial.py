"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in N variables is stored as a mapping from exponent tuples
(multi-indices) to nonzero rational coefficients:

    x1^2*x2 + 3  ->  {(2, 1): 1, (0, 0): 3}

Values are immutable after construction and safe to share across threads;
every operation returns a fresh polynomial.  The canonical term order is
graded lexicographic: higher total degree first, ties broken so that terms
heavier in x1 come first.  Printing follows that order, which keeps all
text output bit-stable across runs.

Multi-indices are plain tuples of non-negative ints; the helpers below
(factorials, binomials, partial order, degree enumeration) operate on them
directly.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

from .rational import ONE, ZERO, Q, format_rational, is_rational

MultiIndex = tuple[int, ...]


# ---------------------------------------------------------------------------
# multi-index helpers
# ---------------------------------------------------------------------------

def multi_degree(nu: MultiIndex) -> int:
    """Total degree |nu|."""
    return sum(nu)


def multi_factorial(nu: MultiIndex) -> int:
    """nu! = nu_1! * ... * nu_N!."""
    out = 1
    for e in nu:
        out *= math.factorial(e)
    return out


def multi_binomial(nu: MultiIndex, rho: MultiIndex) -> int:
    """binom(nu, rho) componentwise; 0 unless rho <= nu."""
    out = 1
    for n, r in zip(nu, rho):
        if r > n:
            return 0
        out *= math.comb(n, r)
    return out


def multi_leq(rho: MultiIndex, nu: MultiIndex) -> bool:
    """Componentwise partial order rho <= nu."""
    return all(r <= n for r, n in zip(rho, nu))


def unit_index(rank: int, axis: int) -> MultiIndex:
    """The multi-index e_axis (0-based axis)."""
    if not 0 <= axis < rank:
        raise IndexError(f"axis {axis} out of range for rank {rank}")
    return tuple(1 if i == axis else 0 for i in range(rank))


def indices_below(nu: MultiIndex) -> Iterator[MultiIndex]:
    """All rho with rho <= nu, in deterministic product order."""
    return (tuple(r) for r in itertools.product(*(range(e + 1) for e in nu)))


def monomial_order_key(nu: MultiIndex):
    """Sort key for the canonical graded-lex order (ascending degree)."""
    return (sum(nu), tuple(-e for e in nu))


def display_order_key(nu: MultiIndex):
    """Sort key for printing: descending degree, then x1-heavy terms first."""
    return (-sum(nu), tuple(-e for e in nu))


def monomials_of_degree(rank: int, degree: int) -> list[MultiIndex]:
    """All multi-indices of the given total degree, in canonical order."""
    if degree < 0:
        return []
    out: list[MultiIndex] = []

    def fill(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            fill(prefix + [e], remaining - e, slots - 1)

    fill([], degree, rank)
    return out


def monomials_up_to_degree(rank: int, degree: int) -> list[MultiIndex]:
    """All multi-indices with total degree <= degree, canonical order."""
    out: list[MultiIndex] = []
    for n in range(degree + 1):
        out.extend(monomials_of_degree(rank, n))
    return out


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: dict | None = None):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        clean: dict[MultiIndex, object] = {}
        if terms:
            for nu, c in terms.items():
                nu = tuple(nu)
                if len(nu) != rank:
                    raise ValueError(f"exponent {nu} does not match rank {rank}")
                if any(e < 0 for e in nu):
                    raise ValueError(f"negative exponent in {nu}")
                c = Q(c)
                if c != 0:
                    clean[nu] = c
        self._terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "Polynomial":
        return cls(rank, {})

    @classmethod
    def constant(cls, rank: int, value) -> "Polynomial":
        return cls(rank, {(0,) * rank: Q(value)})

    @classmethod
    def one(cls, rank: int) -> "Polynomial":
        return cls.constant(rank, 1)

    @classmethod
    def variable(cls, rank: int, axis: int) -> "Polynomial":
        return cls(rank, {unit_index(rank, axis): ONE})

    @classmethod
    def monomial(cls, rank: int, nu: MultiIndex, coefficient=1) -> "Polynomial":
        return cls(rank, {tuple(nu): Q(coefficient)})

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(nu) for nu in self._terms)

    def coefficient(self, nu: MultiIndex):
        return self._terms.get(tuple(nu), ZERO)

    def constant_term(self):
        return self._terms.get((0,) * self.rank, ZERO)

    def items(self) -> Iterator[tuple[MultiIndex, object]]:
        """Terms in canonical display order (stable across runs)."""
        for nu in sorted(self._terms, key=display_order_key):
            yield nu, self._terms[nu]

    def support(self) -> list[MultiIndex]:
        return sorted(self._terms, key=display_order_key)

    def num_terms(self) -> int:
        return len(self._terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(nu) for nu in self._terms}
        return len(degrees) <= 1

    # -- ring operations ----------------------------------------------------

    def _require_same_rank(self, other: "Polynomial") -> None:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._require_same_rank(other)
        out = dict(self._terms)
        for nu, c in other._terms.items():
            s = out.get(nu, ZERO) + c
            if s == 0:
                out.pop(nu, None)
            else:
                out[nu] = s
        return self._wrap(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._require_same_rank(other)
        out = dict(self._terms)
        for nu, c in other._terms.items():
            s = out.get(nu, ZERO) - c
            if s == 0:
                out.pop(nu, None)
            else:
                out[nu] = s
        return self._wrap(out)

    def __neg__(self) -> "Polynomial":
        return self._wrap({nu: -c for nu, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._require_same_rank(other)
            out: dict[MultiIndex, object] = {}
            for nu_a, ca in self._terms.items():
                for nu_b, cb in other._terms.items():
                    nu = tuple(a + b for a, b in zip(nu_a, nu_b))
                    s = out.get(nu, ZERO) + ca * cb
                    if s == 0:
                        out.pop(nu, None)
                    else:
                        out[nu] = s
            return self._wrap(out)
        if is_rational(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_rational(other):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Polynomial":
        c = Q(c)
        if c == 0:
            return Polynomial.zero(self.rank)
        return self._wrap({nu: c * v for nu, v in self._terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.one(self.rank)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    __hash__ = None  # mutable-dict backed; identity hashing would be a trap

    def _wrap(self, terms: dict) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p.rank = self.rank
        p._terms = terms
        return p

    # -- calculus and structure ---------------------------------------------

    def partial_derivative(self, axis: int) -> "Polynomial":
        """Exact d/dx_axis (0-based axis)."""
        if not 0 <= axis < self.rank:
            raise IndexError(f"axis {axis} out of range for rank {self.rank}")
        out: dict[MultiIndex, object] = {}
        for nu, c in self._terms.items():
            e = nu[axis]
            if e == 0:
                continue
            lowered = nu[:axis] + (e - 1,) + nu[axis + 1:]
            out[lowered] = out.get(lowered, ZERO) + c * e
        return self._wrap({nu: c for nu, c in out.items() if c != 0})

    def homogeneous_component(self, degree: int) -> "Polynomial":
        """Sum of the terms of the given total degree."""
        if degree < 0:
            raise ValueError("degree must be >= 0")
        return self._wrap(
            {nu: c for nu, c in self._terms.items() if sum(nu) == degree}
        )

    def homogeneous_components(self) -> Iterator[tuple[int, "Polynomial"]]:
        """Yield (degree, component) for each nonempty degree, ascending."""
        by_degree: dict[int, dict] = {}
        for nu, c in self._terms.items():
            by_degree.setdefault(sum(nu), {})[nu] = c
        for n in sorted(by_degree):
            yield n, self._wrap(by_degree[n])

    def evaluate(self, point: Sequence):
        """Evaluate at a point.

        Exact (rational in, rational out) when every entry is rational;
        any float entry switches to floating arithmetic, which rounds.
        """
        if len(point) != self.rank:
            raise ValueError(f"point length {len(point)} != rank {self.rank}")
        exact = all(is_rational(v) for v in point)
        if exact:
            total = ZERO
            vals = [Q(v) for v in point]
        else:
            total = 0.0
            vals = [float(v) for v in point]
        for nu, c in self._terms.items():
            term = c if exact else float(c)
            for e, v in zip(nu, vals):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def substitute_linear(self, mapping: "LinearMap") -> "Polynomial":
        """Return x -> p(Mx), computed exactly."""
        if mapping.size != self.rank:
            raise ValueError(
                f"dimension mismatch: map is {mapping.size}, rank is {self.rank}"
            )
        signed = mapping.signed_permutation()
        if signed is not None:
            # Each x_i maps to +-x_{perm(i)}: monomials map to monomials.
            perm, signs = signed
            out: dict[MultiIndex, object] = {}
            for nu, c in self._terms.items():
                img = [0] * self.rank
                sign = 1
                for i, e in enumerate(nu):
                    if e:
                        img[perm[i]] += e
                        if signs[i] < 0 and e % 2:
                            sign = -sign
                key = tuple(img)
                s = out.get(key, ZERO) + (c if sign > 0 else -c)
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
            return self._wrap(out)

        images = [
            Polynomial(
                self.rank,
                {unit_index(self.rank, j): mapping.matrix[i][j]
                 for j in range(self.rank)},
            )
            for i in range(self.rank)
        ]
        powers: list[dict[int, Polynomial]] = [
            {0: Polynomial.one(self.rank)} for _ in range(self.rank)
        ]

        def image_power(i: int, e: int) -> "Polynomial":
            cache = powers[i]
            if e not in cache:
                cache[e] = image_power(i, e - 1) * images[i]
            return cache[e]

        total = Polynomial.zero(self.rank)
        for nu, c in self._terms.items():
            term = Polynomial.constant(self.rank, c)
            for i, e in enumerate(nu):
                if e:
                    term = term * image_power(i, e)
            total = total + term
        return total

    def divide_linear_form(self, alpha: Sequence) -> "Polynomial":
        """Exact division by the linear form <alpha, x>.

        Raises NotDivisibleError when a nonzero remainder occurs, which
        signals a caller bug: every numerator fed here by the difference
        operators is divisible by construction.
        """
        alpha = [Q(a) for a in alpha]
        if len(alpha) != self.rank:
            raise ValueError("alpha length does not match rank")
        pivot = next((i for i, a in enumerate(alpha) if a != 0), None)
        if pivot is None:
            raise ValueError("alpha must be nonzero")
        a_pivot = alpha[pivot]
        others = [(i, a) for i, a in enumerate(alpha) if i != pivot and a != 0]

        # Long division viewing p as a polynomial in x_pivot: peel terms by
        # descending pivot exponent; each elimination pushes mass one pivot
        # level down, so the loop terminates.
        buckets: dict[int, dict[MultiIndex, object]] = {}
        for nu, c in self._terms.items():
            buckets.setdefault(nu[pivot], {})[nu] = c
        quotient: dict[MultiIndex, object] = {}
        for d in range(max(buckets, default=0), 0, -1):
            level = buckets.get(d)
            if not level:
                continue
            lower = buckets.setdefault(d - 1, {})
            for nu, c in level.items():
                qc = c / a_pivot
                qnu = nu[:pivot] + (d - 1,) + nu[pivot + 1:]
                s = quotient.get(qnu, ZERO) + qc
                if s == 0:
                    quotient.pop(qnu, None)
                else:
                    quotient[qnu] = s
                for i, a in others:
                    rnu = qnu[:i] + (qnu[i] + 1,) + qnu[i + 1:]
                    s = lower.get(rnu, ZERO) - qc * a
                    if s == 0:
                        lower.pop(rnu, None)
                    else:
                        lower[rnu] = s
        remainder = {nu: c for nu, c in buckets.get(0, {}).items() if c != 0}
        if remainder:
            raise NotDivisibleError(
                f"polynomial is not divisible by the linear form {alpha}"
            )
        return self._wrap(quotient)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for nu, c in self.items():
            factors = [
                f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                for i, e in enumerate(nu)
                if e
            ]
            mono = "*".join(factors)
            if not mono:
                body = format_rational(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{format_rational(abs(c))}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.rank}, {self!s})"


class NotDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder."""


# ---------------------------------------------------------------------------
# linear maps
# ---------------------------------------------------------------------------

class LinearMap:
    """Square matrix with exact rational entries, acting on column vectors."""

    __slots__ = ("matrix", "_signed_perm")

    def __init__(self, rows: Iterable[Iterable]):
        matrix = tuple(tuple(Q(v) for v in row) for row in rows)
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise ValueError("matrix must be square and nonempty")
        self.matrix = matrix
        self._signed_perm = _detect_signed_permutation(matrix)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def reflection(cls, alpha: Sequence) -> "LinearMap":
        """Orthogonal reflection in the hyperplane normal to alpha."""
        alpha = [Q(a) for a in alpha]
        norm2 = sum(a * a for a in alpha)
        if norm2 == 0:
            raise ValueError("alpha must be nonzero")
        n = len(alpha)
        return cls(
            [
                [
                    (ONE if i == j else ZERO) - 2 * alpha[i] * alpha[j] / norm2
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    @property
    def size(self) -> int:
        return len(self.matrix)

    def apply_vector(self, v: Sequence) -> tuple:
        if len(v) != self.size:
            raise ValueError("vector length does not match matrix size")
        v = [Q(x) for x in v]
        return tuple(sum(row[j] * v[j] for j in range(self.size)) for row in self.matrix)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Matrix product self @ other (apply other first)."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        n = self.size
        return LinearMap(
            [
                [
                    sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n))
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def is_involution(self) -> bool:
        return self.compose(self) == LinearMap.identity(self.size)

    def signed_permutation(self):
        """(perm, signs) if the matrix is a signed permutation, else None.

        Row i holds a single entry signs[i] = +-1 in column perm[i], so the
        map substitutes x_i -> signs[i] * x_perm[i] and monomial substitution
        avoids general polynomial expansion.
        """
        return self._signed_perm

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        rows = "; ".join(
            " ".join(format_rational(v) for v in row) for row in self.matrix
        )
        return f"LinearMap[{rows}]"


def _detect_signed_permutation(matrix) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    n = len(matrix)
    perm = [0] * n
    signs = [0] * n
    seen = [False] * n
    for row in range(n):
        hit = -1
        for col in range(n):
            v = matrix[row][col]
            if v == 0:
                continue
            if hit >= 0 or (v != 1 and v != -1):
                return None
            hit = col
        if hit < 0 or seen[hit]:
            return None
        seen[hit] = True
        perm[row] = hit
        signs[row] = 1 if matrix[row][hit] == 1 else -1
    return tuple(perm), tuple(signs)
