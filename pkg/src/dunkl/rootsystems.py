"""Rational-coordinate root systems and their reflection groups.

The catalog covers the four classical families with rational realizations:

    Z2^N   {+-e_i}                    sign flips, order 2^N
    A_m    {e_i - e_j} in R^(m+1)     permutations, order (m+1)!
    B_N    {+-e_i} u {+-e_i +- e_j}   signed permutations, order 2^N N!
    D_N    {+-e_i +- e_j}             even sign changes + permutations

Roots are stored with convenient rational coordinates rather than a fixed
common length; every quantity that depends on the root normalization
(weight function, its normalizing constant) is always computed with respect
to the stored roots, and the difference/reflection operators built from the
roots are invariant under rescaling them, so the choice is consistent.

The positive subsystem is fixed by the lexicographic rule: a root is
positive when its first nonzero coordinate is positive.  All root lists are
sorted in a canonical order (first coordinate heavy), which makes orbit
identifiers and serialized output stable.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .polynomial import LinearMap
from .rational import Q, format_rational, is_rational

Vector = tuple

CATALOG_FAMILIES = ("Z2", "A", "B", "D")

# Safety cap for group closure; the largest catalog group we ever expect to
# enumerate is B_6 with 46080 elements.
_CLOSURE_CAP = 100_000


class UnsupportedFamilyError(ValueError):
    """Requested family/rank is outside the rational catalog."""


def _vec(entries) -> Vector:
    return tuple(Q(v) for v in entries)


def _vector_key(v: Vector):
    """Canonical order for root vectors: big first coordinates come first."""
    return tuple(-c for c in v)


def dot(x, y):
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum(a * b for a, b in zip(x, y))


@dataclass(frozen=True)
class RootSystem:
    """A catalog root system with its positive subsystem and reflections."""

    rank: int
    catalog_label: str
    roots: tuple
    positive_roots: tuple
    reflections: tuple  # one LinearMap per positive root, parallel lists

    def reflection_for(self, alpha) -> LinearMap:
        try:
            i = self.positive_roots.index(tuple(alpha))
        except ValueError:
            raise ValueError(f"{alpha} is not a positive root") from None
        return self.reflections[i]


@dataclass(frozen=True)
class GroupElements:
    """The full reflection group as matrices, identity first."""

    matrices: tuple

    def __len__(self) -> int:
        return len(self.matrices)


def build_catalog(family: str, rank: int) -> RootSystem:
    """Construct a catalog root system.

    `rank` is the ambient dimension N.  For family "A" the group is the
    symmetric group S_N realized by the roots e_i - e_j in R^N (the catalog
    label is then A_{N-1}).  Dihedral groups beyond I2(3) ~ A_2 and
    I2(4) ~ B_2 have irrational root coordinates and are not supported.
    """
    if rank < 1:
        raise UnsupportedFamilyError("rank must be >= 1")
    family = family.upper()
    n = rank
    roots: list[Vector] = []
    if family == "Z2":
        label = f"Z2^{n}"
        for i in range(n):
            e = [0] * n
            e[i] = 1
            roots.append(_vec(e))
            roots.append(_vec([-v for v in e]))
    elif family == "A":
        if n < 2:
            raise UnsupportedFamilyError("family A needs ambient rank >= 2")
        label = f"A{n - 1}"
        for i in range(n):
            for j in range(n):
                if i != j:
                    e = [0] * n
                    e[i] = 1
                    e[j] = -1
                    roots.append(_vec(e))
    elif family == "B":
        label = f"B{n}"
        for i in range(n):
            for si in (1, -1):
                e = [0] * n
                e[i] = si
                roots.append(_vec(e))
        roots.extend(_pair_roots(n))
    elif family == "D":
        if n < 2:
            raise UnsupportedFamilyError("family D needs rank >= 2")
        label = f"D{n}"
        roots = _pair_roots(n)
    else:
        raise UnsupportedFamilyError(
            f"unknown family {family!r}; supported: {', '.join(CATALOG_FAMILIES)}"
        )

    roots.sort(key=_vector_key)
    positive = [a for a in roots if _is_positive(a)]
    reflections = tuple(LinearMap.reflection(a) for a in positive)
    rs = RootSystem(
        rank=n,
        catalog_label=label,
        roots=tuple(roots),
        positive_roots=tuple(positive),
        reflections=reflections,
    )
    _validate_root_system(rs)
    return rs


def _pair_roots(n: int) -> list[Vector]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1, -1):
                for sj in (1, -1):
                    e = [0] * n
                    e[i] = si
                    e[j] = sj
                    out.append(_vec(e))
    return out


def _is_positive(alpha: Vector) -> bool:
    for c in alpha:
        if c != 0:
            return c > 0
    return False


def _validate_root_system(rs: RootSystem) -> None:
    root_set = set(rs.roots)
    if len(root_set) != len(rs.roots):
        raise ValueError("duplicate roots")
    for alpha in rs.roots:
        if tuple(-c for c in alpha) not in root_set:
            raise ValueError(f"root system is not symmetric at {alpha}")
    for alpha, sigma in zip(rs.positive_roots, rs.reflections):
        if not sigma.is_involution():
            raise ValueError(f"reflection at {alpha} is not an involution")
        image = {sigma.apply_vector(b) for b in rs.roots}
        if image != root_set:
            raise ValueError(f"reflection at {alpha} does not permute the roots")
    # R n R*alpha = {+-alpha}: catalog roots are pairwise non-proportional
    # up to sign by construction; check anyway since it is cheap.
    for alpha in rs.positive_roots:
        for beta in rs.positive_roots:
            if alpha is beta:
                continue
            if _proportional(alpha, beta):
                raise ValueError(f"proportional roots {alpha}, {beta}")


def _proportional(a: Vector, b: Vector) -> bool:
    # cross-ratio test without division
    ratio = None
    for x, y in zip(a, b):
        if x == 0 and y == 0:
            continue
        if x == 0 or y == 0:
            return False
        r = x / y
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return True


_EXPECTED_ORDER = {
    "Z2": lambda n: 2 ** n,
    "A": lambda n: _factorial(n),
    "B": lambda n: 2 ** n * _factorial(n),
    "D": lambda n: 2 ** (n - 1) * _factorial(n),
}


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def family_of(rs: RootSystem) -> str:
    return "Z2" if rs.catalog_label.startswith("Z2") else rs.catalog_label[0]


def expected_group_order(rs: RootSystem) -> int:
    return _EXPECTED_ORDER[family_of(rs)](rs.rank)


@functools.lru_cache(maxsize=None)
def generate_group(rs: RootSystem) -> GroupElements:
    """Breadth-first closure of the reflections under composition.

    Deterministic: frontiers are processed in matrix order.  Raises if the
    closure exceeds a safety cap (which would signal a corrupted root
    system) or misses the known catalog order.
    """
    identity = LinearMap.identity(rs.rank)
    seen = {identity: 0}
    order: list[LinearMap] = [identity]
    frontier = [identity]
    generators = list(rs.reflections)
    while frontier:
        new: list[LinearMap] = []
        for g in frontier:
            for s in generators:
                h = s.compose(g)
                if h not in seen:
                    seen[h] = len(seen)
                    new.append(h)
                    if len(seen) > _CLOSURE_CAP:
                        raise ValueError("group closure exceeded safety cap")
        new.sort(key=lambda m: tuple(_vector_key(row) for row in m.matrix))
        order.extend(new)
        frontier = new
    expected = expected_group_order(rs)
    if len(order) != expected:
        raise ValueError(
            f"group closure produced {len(order)} elements, expected {expected}"
        )
    return GroupElements(matrices=tuple(order))


@functools.lru_cache(maxsize=None)
def root_orbits(rs: RootSystem) -> tuple[tuple[Vector, ...], ...]:
    """Partition of the roots into group orbits, canonically ordered.

    Orbits are computed by closing under the generating reflections (which
    suffices, as they generate the group).  Each orbit is sorted, and orbits
    are sorted by their leading (positive) representative, so orbit indices
    are stable and serialize cleanly.
    """
    remaining = set(rs.roots)
    orbits: list[tuple[Vector, ...]] = []
    for alpha in rs.roots:  # canonical sweep order
        if alpha not in remaining:
            continue
        orbit = {alpha}
        frontier = [alpha]
        while frontier:
            beta = frontier.pop()
            for sigma in rs.reflections:
                image = sigma.apply_vector(beta)
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        remaining -= orbit
        orbits.append(tuple(sorted(orbit, key=_vector_key)))
    orbits.sort(key=lambda orb: _vector_key(orb[0]))
    return tuple(orbits)


def orbit_representatives(rs: RootSystem) -> tuple[Vector, ...]:
    """Leading positive root of each orbit, in canonical orbit order."""
    return tuple(orb[0] for orb in root_orbits(rs))


class Multiplicity:
    """Group-invariant root weights: one value k(alpha) >= 0 per orbit."""

    __slots__ = ("values", "_by_root")

    def __init__(self, rs: RootSystem, values):
        orbits = root_orbits(rs)
        if len(values) == 1 and len(orbits) > 1:
            values = list(values) * len(orbits)
        if len(values) != len(orbits):
            raise ValueError(
                f"{rs.catalog_label} has {len(orbits)} root orbits, "
                f"got {len(values)} multiplicity values"
            )
        vals = []
        by_root = {}
        for orb, v in zip(orbits, values):
            v = Q(v)
            if v < 0:
                raise ValueError("multiplicity values must be >= 0")
            vals.append(v)
            for alpha in orb:
                by_root[alpha] = v
        self.values = tuple(vals)
        self._by_root = by_root

    @classmethod
    def from_root_assignment(cls, rs: RootSystem, assignment: dict) -> "Multiplicity":
        """Build from per-root values, rejecting non-constant orbits."""
        orbits = root_orbits(rs)
        values = []
        for orb in orbits:
            seen = {Q(assignment[alpha]) for alpha in orb if alpha in assignment}
            if len(seen) != 1:
                raise ValueError(
                    "multiplicity must be constant on root orbits; "
                    f"orbit of {orb[0]} got values {sorted(map(str, seen))}"
                )
            values.append(seen.pop())
        return cls(rs, values)

    def of_root(self, alpha):
        return self._by_root[tuple(alpha)]

    def __iter__(self):
        return iter(self.values)

    def __repr__(self) -> str:
        return f"Multiplicity({', '.join(format_rational(v) for v in self.values)})"


def gamma_k(rs: RootSystem, k: Multiplicity):
    """Sum of the multiplicities over the positive roots."""
    return sum((k.of_root(a) for a in rs.positive_roots), Q(0))


def weight_function(rs: RootSystem, k: Multiplicity, x):
    """The group-invariant weight prod |<alpha, x>|^(2 k(alpha)).

    Exact (rational) when every 2*k(alpha) is an integer and x is rational;
    otherwise evaluated in floating point.
    """
    if len(x) != rs.rank:
        raise ValueError("point length does not match rank")
    exact = all(is_rational(v) for v in x) and all(
        (2 * v) % 1 == 0 for v in k.values
    )
    if exact:
        point = [Q(v) for v in x]
        out = Q(1)
        for alpha in rs.positive_roots:
            two_k = int(2 * k.of_root(alpha))
            if two_k == 0:
                continue
            out *= abs(dot(alpha, point)) ** two_k
        return out
    point = [float(v) for v in x]
    out = 1.0
    for alpha in rs.positive_roots:
        kv = float(k.of_root(alpha))
        if kv == 0:
            continue
        out *= abs(sum(float(a) * p for a, p in zip(alpha, point))) ** (2 * kv)
    return out
