"""The characteristic class -lambda + t i rho, Chern class images, and Tr(1).

Classes are written in simple-root coordinates with Gaussian-rational
entries (sympy's QQ_I), so the imaginary unit stays exact.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy.polys.domains import QQ, QQ_I

from .enveloping import LeviSplit
from .errors import ArgumentError, ConfigurationError, InternalConsistencyError
from .rootsys import RootSystem, Weight, invariant_pairing, rho
from .scalars import format_fraction, to_fraction

__all__ = [
    "CharClass",
    "ComplexWeight",
    "DimensionRow",
    "c1_image",
    "characteristic_class",
    "dimension_table",
    "dimension_table_csv",
    "freudenthal_dim",
    "quantum_dimension",
    "quantum_dimension_formal",
]


def _gauss(re=0, im=0):
    re, im = Fraction(re), Fraction(im)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def format_gaussian(z) -> str:
    """Render a Gaussian rational as ``a+bi`` (both parts always shown)."""
    re, im = to_fraction(z.x), to_fraction(z.y)
    sign = "-" if im < 0 else "+"
    return f"{format_fraction(re)}{sign}{format_fraction(abs(im))}i"


@dataclass(frozen=True)
class ComplexWeight:
    """Gaussian-rational coordinates in the basis of simple roots."""

    coords: tuple

    @classmethod
    def real(cls, w: Weight) -> "ComplexWeight":
        return cls(tuple(_gauss(c) for c in w.coords))

    @classmethod
    def imaginary(cls, w: Weight) -> "ComplexWeight":
        return cls(tuple(_gauss(0, c) for c in w.coords))

    def __add__(self, other: "ComplexWeight") -> "ComplexWeight":
        return ComplexWeight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "ComplexWeight":
        c = _gauss(c) if not hasattr(c, "y") else c
        return ComplexWeight(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(not a for a in self.coords)

    def to_json(self) -> list[str]:
        return [format_gaussian(a) for a in self.coords]


@dataclass(frozen=True)
class CharClass:
    """theta = order0 + t * order1 as characters of h (simple-root coordinates)."""

    order0: ComplexWeight
    order1: ComplexWeight
    consistent: bool = True

    def to_json(self) -> dict:
        return {"order0": self.order0.to_json(), "order1": self.order1.to_json()}

    def __str__(self) -> str:
        a = ", ".join(self.order0.to_json())
        b = ", ".join(self.order1.to_json())
        return f"[{a}] + t [{b}]"


def c1_image(weights) -> ComplexWeight:
    """Image of the first Chern class of an h-module with the given weights: i * sum(weights)."""
    weights = list(weights)
    if not weights:
        raise ArgumentError("c1_image needs at least one weight (use the zero weight for a trivial module)")
    rank = len(weights[0].coords)
    total = Weight.zero(rank)
    for w in weights:
        total = total + w
    return ComplexWeight.imaginary(total)


def characteristic_class(split: LeviSplit) -> CharClass:
    """-lambda + t i rho, with rho the half-sum of the split's Delta_+.

    The t-coefficient is also computed as -(1/2) c1 of the bundle with fibre
    n_- (weights -alpha, alpha in Delta_+); the two must agree.
    """
    rs = split.rs
    order0 = ComplexWeight.real(-split.lambda_weight)
    rho_split = rho(rs, split.delta_plus)
    order1 = ComplexWeight.imaginary(rho_split)
    n_minus = [Weight(a) for a in split.delta_minus] or [Weight.zero(rs.rank)]
    route = c1_image(n_minus).scale(Fraction(-1, 2))
    if route != order1:
        raise InternalConsistencyError(f"class routes disagree: {route.to_json()} vs {order1.to_json()}")
    return CharClass(order0=order0, order1=order1, consistent=True)


# --------------------------------------------------------------------------
# Tr(1) and the dimension oracle


def quantum_dimension(rs: RootSystem, split: LeviSplit | None, xi: Weight, form=None) -> Fraction:
    """prod <alpha, xi + rho> / prod <alpha, rho> over Delta_+ of the split.

    ``xi`` stands for (i/t) lambda.  Without a split the full positive system
    is used.  ``form`` overrides the Gram matrix of the invariant pairing.
    """
    roots = rs.positive_roots if split is None else split.delta_plus
    r = rho(rs, roots)
    shifted = xi + r
    num, den = Fraction(1), Fraction(1)
    for a in roots:
        aw = Weight(a)
        d = invariant_pairing(rs, aw, r, form)
        if d == 0:
            raise ConfigurationError(f"<alpha, rho> = 0 for alpha = {a}: degenerate split")
        num *= invariant_pairing(rs, aw, shifted, form)
        den *= d
    return num / den


def quantum_dimension_formal(split: LeviSplit, t=None):
    """Tr(1) as a rational function of t, with xi = (i/t) lambda substituted symbolically."""
    rs = split.rs
    t = sympy.Symbol("t") if t is None else t
    lam = split.lambda_weight
    r = rho(rs, split.delta_plus)
    expr = sympy.Integer(1)
    for a in split.delta_plus:
        aw = Weight(a)
        la = invariant_pairing(rs, aw, lam)
        ra = invariant_pairing(rs, aw, r)
        expr *= (sympy.I / t * sympy.Rational(la.numerator, la.denominator)
                 + sympy.Rational(ra.numerator, ra.denominator)) / sympy.Rational(ra.numerator, ra.denominator)
    return sympy.simplify(expr)


def _check_dominant_integral(rs: RootSystem, mu: Weight) -> tuple[int, ...]:
    labels = rs.to_fundamental(mu)
    if any(c.denominator != 1 or c < 0 for c in labels):
        raise ArgumentError(f"weight with Dynkin labels {[format_fraction(c) for c in labels]} "
                            "is not dominant integral")
    return tuple(int(c) for c in labels)


def freudenthal_dim(rs: RootSystem, mu: Weight) -> int:
    """Dimension of the irreducible module with highest weight mu, by Freudenthal's recursion.

    Weights are explored level by level below mu (level = number of simple
    roots subtracted); the walk ends at the first level with no weights.
    """
    _check_dominant_integral(rs, mu)
    r = rho(rs)
    pos = [Weight(a) for a in rs.positive_roots]

    def norm(w):
        return invariant_pairing(rs, w, w)

    top = norm(mu + r)
    mult: dict[tuple, Fraction] = {mu.coords: Fraction(1)}
    total = 1
    level = [mu]
    simple = [Weight(a) for a in rs.simple_roots]
    while level:
        candidates = {}
        for w in level:
            for s in simple:
                nu = w - s
                candidates[nu.coords] = nu
        nxt = []
        for key in sorted(candidates):
            nu = candidates[key]
            den = top - norm(nu + r)
            if den == 0:
                continue
            acc = Fraction(0)
            for a in pos:
                k = 1
                while True:
                    shifted = nu + a.scale(k)
                    m = mult.get(shifted.coords)
                    if m is None:
                        # above mu along this string nothing is a weight
                        if any(x > y for x, y in zip(shifted.coords, mu.coords)):
                            break
                        k += 1
                        continue
                    acc += m * invariant_pairing(rs, shifted, a)
                    k += 1
            m = 2 * acc / den
            if m.denominator != 1 or m < 0:
                raise InternalConsistencyError(f"non-integral multiplicity {m} at {nu.coords}")
            if m:
                mult[key] = m
                total += int(m)
                nxt.append(nu)
        level = nxt
    return total


@dataclass
class DimensionRow:
    labels: tuple[int, ...]
    qdim: Fraction
    freudenthal: int

    @property
    def match(self) -> bool:
        return self.qdim == self.freudenthal


def dimension_table(rs: RootSystem, grid: int, split: LeviSplit | None = None) -> list[DimensionRow]:
    """qdim vs the Freudenthal oracle for xi with Dynkin labels in [0, grid]^rank."""
    rows = []
    for labels in itertools.product(range(grid + 1), repeat=rs.rank):
        xi = rs.from_fundamental(labels)
        rows.append(DimensionRow(labels, quantum_dimension(rs, split, xi), freudenthal_dim(rs, xi)))
    return rows


def dimension_table_csv(rows: list[DimensionRow]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    rank = len(rows[0].labels)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"k{i + 1}" for i in range(rank)] + ["qdim", "freudenthal", "match"])
    for row in rows:
        writer.writerow(list(row.labels) + [format_fraction(row.qdim), row.freudenthal,
                                            "true" if row.match else "false"])
    return buf.getvalue()
