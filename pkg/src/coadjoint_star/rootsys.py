"""Finite root systems from Cartan data.

Every vector here is written in the basis of simple roots.  The invariant
form is normalized so that long roots have squared length 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import ArgumentError, ConfigurationError
from .scalars import format_fraction

__all__ = [
    "DegreeVector",
    "RootSystem",
    "Weight",
    "build_root_system",
    "cartan_matrix",
    "invariant_pairing",
    "rho",
]


@dataclass(frozen=True)
class Weight:
    """Rational coordinates in the basis of simple roots."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        _check_len(self, other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        _check_len(self, other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scale(self, c) -> "Weight":
        return Weight(tuple(Fraction(c) * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_json(self) -> list[str]:
        return [format_fraction(c) for c in self.coords]

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((Fraction(0),) * rank)


@dataclass(frozen=True, order=True)
class DegreeVector:
    """A nonnegative integer combination of simple roots (a root-lattice degree)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if any(c < 0 for c in coeffs):
            raise ArgumentError(f"degree vector must be nonnegative, got {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "DegreeVector") -> "DegreeVector":
        return DegreeVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def as_weight(self) -> Weight:
        return Weight(self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"

    @classmethod
    def zero(cls, rank: int) -> "DegreeVector":
        return cls((0,) * rank)


def _check_len(u: Weight, v: Weight) -> None:
    if len(u.coords) != len(v.coords):
        raise ArgumentError(f"weight length mismatch: {len(u.coords)} vs {len(v.coords)}")


def cartan_matrix(series: str, rank: int) -> list[list[int]]:
    """Cartan matrix a_ij = 2(alpha_i, alpha_j)/(alpha_j, alpha_j), Bourbaki numbering."""
    series = series.upper()
    n = rank
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }
    if series not in valid or not valid[series]:
        raise ConfigurationError(f"unsupported root system type {series}{rank}")
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if series in "ABCD":
        chain = n - 1 if series == "D" else n
        for i in range(chain - 1):
            link(i, i + 1)
        if series == "B":
            link(n - 2, n - 1, -2, -1)
        elif series == "C":
            link(n - 2, n - 1, -1, -2)
        elif series == "D":
            link(n - 3, n - 1)
    elif series == "G":
        link(0, 1, -1, -3)
    elif series == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    else:
        # E: chain 1-3-4-5-6-(7-8), node 2 attached to node 4
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    return a


def _symmetrizer(a: list[list[int]]) -> list[Fraction]:
    """Half squared lengths d_i with a_ij d_j symmetric; longest roots get d = 1."""
    n = len(a)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and a[i][j] != 0 and d[j] is None:
                d[j] = d[i] * Fraction(a[j][i], a[i][j])
                stack.append(j)
    if any(x is None for x in d):
        raise ConfigurationError("Dynkin diagram is not connected")
    top = max(d)
    return [x / top for x in d]


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    form_matrix: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    simple_roots: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        simple = tuple(
            tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)
        )
        object.__setattr__(self, "simple_roots", simple)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    @cached_property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        """All roots: positive roots followed by their negatives."""
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.roots)

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    @property
    def dimension(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    def pair(self, u, v, form=None) -> Fraction:
        """Invariant form on raw coordinate sequences."""
        m = self.form_matrix if form is None else form
        return sum(
            (Fraction(u[i]) * m[i][j] * v[j] for i in range(self.rank) for j in range(self.rank) if u[i] and v[j]),
            Fraction(0),
        )

    def coroot_pairing(self, v, i: int) -> Fraction:
        """<v, alpha_i^vee> = 2 (v, alpha_i) / (alpha_i, alpha_i)."""
        return sum((Fraction(v[j]) * self.cartan_matrix[j][i] for j in range(self.rank)), Fraction(0))

    def reflect(self, v, i: int) -> tuple:
        c = self.coroot_pairing(v, i)
        out = list(v)
        out[i] = out[i] - c
        if all(isinstance(x, int) or Fraction(x).denominator == 1 for x in out):
            return tuple(int(x) for x in out)
        return tuple(Fraction(x) for x in out)

    def coroot_coefficients(self, root) -> tuple[int, ...]:
        """Coefficients of alpha^vee = 2 alpha/(alpha, alpha) in the simple coroots."""
        norm = self.pair(root, root)
        out = []
        for i in range(self.rank):
            c = Fraction(root[i]) * self.form_matrix[i][i] / norm
            if c.denominator != 1:
                raise ArgumentError(f"{root} is not a root")
            out.append(int(c))
        return tuple(out)

    @cached_property
    def inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(r) for r in _invert([[Fraction(x) for x in row] for row in self.cartan_matrix]))

    def fundamental_weight(self, i: int) -> Weight:
        """omega_i in simple-root coordinates (row i of the inverse Cartan matrix)."""
        return Weight(self.inverse_cartan[i])

    def from_fundamental(self, coords) -> Weight:
        """Convert fundamental-weight coordinates to simple-root coordinates."""
        if len(coords) != self.rank:
            raise ArgumentError(f"expected {self.rank} coordinates, got {len(coords)}")
        out = [Fraction(0)] * self.rank
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c:
                for j in range(self.rank):
                    out[j] += c * self.inverse_cartan[i][j]
        return Weight(tuple(out))

    def to_fundamental(self, w: Weight) -> tuple[Fraction, ...]:
        """Dynkin labels <w, alpha_i^vee>."""
        return tuple(self.coroot_pairing(w.coords, i) for i in range(self.rank))


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _enumerate_positive_roots(a, rank: int, max_height: int) -> list[tuple[int, ...]]:
    simple = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    found = set(simple)
    work = list(simple)
    while work:
        beta = work.pop()
        for i in range(rank):
            c = sum(beta[j] * a[j][i] for j in range(rank))
            gamma = list(beta)
            gamma[i] -= c
            gamma = tuple(gamma)
            if any(x < 0 for x in gamma) or gamma in found:
                continue
            if sum(gamma) > max_height:
                raise ConfigurationError("root enumeration exceeded height bound; not of finite type")
            found.add(gamma)
            work.append(gamma)
    return sorted(found, key=lambda r: (sum(r), r))


def build_root_system(series: str, rank: int) -> RootSystem:
    """Root system of the given finite type, positive roots sorted by (height, coordinates)."""
    series = str(series).upper()
    rank = int(rank)
    a = cartan_matrix(series, rank)
    d = _symmetrizer(a)
    # (alpha_i, alpha_j) = a_ij (alpha_j, alpha_j)/2 = a_ij d_j
    form = tuple(tuple(Fraction(a[i][j]) * d[j] for j in range(rank)) for i in range(rank))
    positive = _enumerate_positive_roots(a, rank, max_height=64)
    return RootSystem(
        series=series,
        rank=rank,
        cartan_matrix=tuple(tuple(row) for row in a),
        form_matrix=form,
        positive_roots=tuple(positive),
    )


def invariant_pairing(rs: RootSystem, u: Weight, v: Weight, form=None) -> Fraction:
    """<u, v> for weights in simple-root coordinates; ``form`` overrides the Gram matrix."""
    if len(u.coords) != rs.rank or len(v.coords) != rs.rank:
        raise ArgumentError(f"{rs.name} pairing needs {rs.rank} coordinates")
    return rs.pair(u.coords, v.coords, form)


def rho(rs: RootSystem, positive_roots=None) -> Weight:
    """Half the sum of the positive roots (of ``rs`` unless a subset is supplied)."""
    roots = rs.positive_roots if positive_roots is None else positive_roots
    total = [Fraction(0)] * rs.rank
    for r in roots:
        for i, c in enumerate(r):
            total[i] += c
    return Weight(tuple(x / 2 for x in total))
