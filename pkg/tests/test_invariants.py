from fractions import Fraction

import pytest
import sympy

from coadjoint_star.errors import ArgumentError
from coadjoint_star.invariants import (
    ComplexWeight,
    c1_image,
    characteristic_class,
    dimension_table,
    dimension_table_csv,
    freudenthal_dim,
    quantum_dimension,
    quantum_dimension_formal,
)
from coadjoint_star.rootsys import Weight, build_root_system, rho

from conftest import split_for


def test_class_a1():
    split = split_for("A", 1, (5,))
    theta = characteristic_class(split)
    # lambda(h) = 5 is the weight 5/2 alpha; rho = alpha/2
    assert theta.to_json() == {"order0": ["-5/2+0i"], "order1": ["0+1/2i"]}


@pytest.mark.parametrize("key", [("A", 2, (2, 3)), ("B", 2, (1, 1)), ("G", 2, (1, 2)), ("A", 2, (0, 1))])
def test_class_matches_chern_route(key):
    split = split_for(*key)
    theta = characteristic_class(split)
    n_minus = [Weight(a) for a in split.delta_minus]
    assert c1_image(n_minus).scale(Fraction(-1, 2)) == theta.order1
    assert theta.order1 == ComplexWeight.imaginary(rho(split.rs, split.delta_plus))
    assert theta.order0 == ComplexWeight.real(-split.lambda_weight)


def test_class_linear_in_lambda():
    one = characteristic_class(split_for("A", 2, (2, 3)))
    two = characteristic_class(split_for("A", 2, (4, 6)))
    assert two.order0 == one.order0.scale(2)
    assert two.order1 == one.order1


def test_c1_image_examples():
    zero = c1_image([Weight((0, 0))])
    assert zero.is_zero()
    rs = build_root_system("A", 2)
    n_minus = [Weight(tuple(-c for c in a)) for a in rs.positive_roots]
    total = Weight((2, 2))
    assert c1_image(n_minus) == ComplexWeight.imaginary(-total)
    assert c1_image(n_minus + n_minus) == c1_image(n_minus).scale(2)


def test_quantum_dimension_examples():
    a1 = build_root_system("A", 1)
    assert quantum_dimension(a1, None, Weight((0,))) == 1
    assert quantum_dimension(a1, None, a1.fundamental_weight(0).scale(5)) == 6
    a2 = build_root_system("A", 2)
    assert quantum_dimension(a2, None, rho(a2)) == 8


def test_freudenthal_examples():
    assert freudenthal_dim(build_root_system("B", 2), Weight((0, 0))) == 1
    a2 = build_root_system("A", 2)
    assert freudenthal_dim(a2, a2.fundamental_weight(0)) == 3
    g2 = build_root_system("G", 2)
    assert freudenthal_dim(g2, g2.fundamental_weight(0)) == 7   # short
    assert freudenthal_dim(g2, g2.fundamental_weight(1)) == 14  # long: adjoint


def test_freudenthal_rejects_bad_weights():
    a2 = build_root_system("A", 2)
    with pytest.raises(ArgumentError):
        freudenthal_dim(a2, a2.from_fundamental((-1, 0)))
    with pytest.raises(ArgumentError):
        freudenthal_dim(a2, a2.from_fundamental((Fraction(1, 2), 0)))


@pytest.mark.parametrize("key,grid", [(("A", 1), 10), (("A", 2), 4), (("B", 2), 3), (("G", 2), 2),
                                      (("C", 3), 1)])
def test_oracle_agreement(key, grid):
    rows = dimension_table(build_root_system(*key), grid)
    assert len(rows) == (grid + 1) ** key[1]
    assert all(r.match for r in rows)


def test_scale_invariance():
    rs = build_root_system("B", 2)
    scaled = tuple(tuple(3 * x for x in row) for row in rs.form_matrix)
    for labels in [(1, 0), (2, 3), (Fraction(1, 3), Fraction(5, 7))]:
        xi = rs.from_fundamental(labels)
        assert quantum_dimension(rs, None, xi) == quantum_dimension(rs, None, xi, form=scaled)


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("G", 2)])
def test_polynomial_along_lines(key):
    """On a line xi0 + s v, qdim is one polynomial of degree <= |Delta_+| (checked past the fit)."""
    rs = build_root_system(*key)
    n = len(rs.positive_roots)
    s = sympy.Symbol("s")
    xi0, v = rs.from_fundamental((Fraction(1, 3), 2)), rs.from_fundamental((1, Fraction(-1, 2)))
    pts = [(k, quantum_dimension(rs, None, xi0 + v.scale(k))) for k in range(n + 1)]
    poly = sympy.interpolate([(k, sympy.Rational(q.numerator, q.denominator)) for k, q in pts], s)
    assert sympy.degree(poly, s) <= n
    for k in range(n + 1, n + 4):
        q = quantum_dimension(rs, None, xi0 + v.scale(k))
        assert poly.subs(s, k) == sympy.Rational(q.numerator, q.denominator)


def test_formal_wrapper():
    split = split_for("A", 1, (5,))
    t = sympy.Symbol("t")
    expr = quantum_dimension_formal(split, t)
    # <alpha, (i/t) lambda + rho> / <alpha, rho> with <alpha, lambda> = 5 and <alpha, rho> = 1
    assert sympy.simplify(expr - (1 + 5 * sympy.I / t)) == 0


def test_csv_table():
    text = dimension_table_csv(dimension_table(build_root_system("A", 2), 1))
    lines = text.splitlines()
    assert lines[0] == "k1,k2,qdim,freudenthal,match"
    assert lines[1] == "0,0,1,1,true"
    assert len(lines) == 5
