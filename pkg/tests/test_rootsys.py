import random
from fractions import Fraction

import pytest

from coadjoint_star.errors import ArgumentError, ConfigurationError
from coadjoint_star.rootsys import (
    DegreeVector,
    Weight,
    build_root_system,
    cartan_matrix,
    invariant_pairing,
    rho,
)

DIMENSIONS = {("A", 1): 3, ("A", 2): 8, ("A", 3): 15, ("B", 2): 10, ("B", 3): 21, ("C", 3): 21,
              ("D", 4): 28, ("G", 2): 14, ("F", 4): 52, ("E", 6): 78, ("E", 8): 248}


def _matrix_roots_sl3():
    """Roots of sl_3 read off from ad(h_1), ad(h_2) acting on the E_ij."""
    out = set()
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            # [diag(d), E_ij] = (d_i - d_j) E_ij with h_1 = diag(1,-1,0), h_2 = diag(0,1,-1)
            vals = []
            for d in ((1, -1, 0), (0, 1, -1)):
                vals.append(d[i] - d[j])
            # values on coroots are Cartan-matrix combinations: solve c A = vals
            a = [[2, -1], [-1, 2]]
            det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            c0 = Fraction(vals[0] * a[1][1] - vals[1] * a[1][0], det)
            c1 = Fraction(vals[1] * a[0][0] - vals[0] * a[0][1], det)
            out.add((int(c0), int(c1)))
    return out


def _weyl_orbit_count(a):
    """|roots| as the union of Weyl orbits of the simple roots, grown by matrix products."""
    n = len(a)

    def refl(i):
        return tuple(tuple((1 if r == c else 0) - (a[r][i] if c == i else 0) for c in range(n)) for r in range(n))

    gens = [refl(i) for i in range(n)]
    group = {tuple(tuple(int(r == c) for c in range(n)) for r in range(n))}
    frontier = list(group)

    def mul(x, y):
        return tuple(tuple(sum(x[r][k] * y[k][c] for k in range(n)) for c in range(n)) for r in range(n))

    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, s)
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    roots = set()
    for g in group:
        for i in range(n):
            # image of alpha_i: row-vector convention v -> v M with M = product of reflections
            roots.add(tuple(g[i][c] for c in range(n)))
    return len(roots), len(group)


def test_a1_single_root():
    assert build_root_system("A", 1).positive_roots == ((1,),)


def test_a2_roots_match_matrix_realization():
    rs = build_root_system("A", 2)
    positives = {r for r in _matrix_roots_sl3() if all(c >= 0 for c in r)}
    assert set(rs.positive_roots) == positives == {(1, 0), (0, 1), (1, 1)}


def test_g2_roots_match_weyl_orbits():
    rs = build_root_system("G", 2)
    n_roots, order = _weyl_orbit_count(cartan_matrix("G", 2))
    assert order == 12
    assert len(rs.positive_roots) == n_roots // 2 == 6
    assert sum(rs.highest_root) == 5


@pytest.mark.parametrize("key", sorted(DIMENSIONS))
def test_root_count_matches_dimension(key):
    rs = build_root_system(*key)
    assert len(rs.positive_roots) == (DIMENSIONS[key] - rs.rank) // 2
    assert rs.dimension == DIMENSIONS[key]


@pytest.mark.parametrize("key", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)])
def test_structural_invariants(key):
    rs = build_root_system(*key)
    a = rs.cartan_matrix
    for i in range(rs.rank):
        assert a[i][i] == 2
        for j in range(rs.rank):
            assert rs.form_matrix[i][j] == rs.form_matrix[j][i]
            if i != j:
                assert a[i][j] <= 0
            assert a[i][j] == 2 * rs.form_matrix[i][j] / rs.form_matrix[j][j]
    assert max(rs.form_matrix[i][i] for i in range(rs.rank)) == 2
    pos = set(rs.positive_roots)
    for x in pos:
        for y in pos:
            s = tuple(p + q for p, q in zip(x, y))
            if rs.is_root(s):
                assert s in pos
    # positive definiteness via the leading principal minors
    import sympy

    m = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rs.form_matrix])
    assert all(m[:k, :k].det() > 0 for k in range(1, rs.rank + 1))


def test_pairing_examples():
    rs = build_root_system("A", 2)
    a1, a2 = Weight((1, 0)), Weight((0, 1))
    assert invariant_pairing(rs, a1, a1) == 2
    assert invariant_pairing(rs, a1, a2) == -1
    g2 = build_root_system("G", 2)
    short, long_ = Weight((1, 0)), Weight((0, 1))
    assert invariant_pairing(g2, short, short) / invariant_pairing(g2, long_, long_) == Fraction(1, 3)


def test_pairing_dimension_mismatch():
    with pytest.raises(ArgumentError):
        invariant_pairing(build_root_system("A", 2), Weight((1,)), Weight((1, 0)))


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("G", 2), ("C", 3)])
def test_weyl_invariance(key):
    rs = build_root_system(*key)
    rng = random.Random(7)
    for _ in range(20):
        u = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rs.rank))
        v = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rs.rank))
        for i in range(rs.rank):
            assert rs.pair(rs.reflect(u, i), rs.reflect(v, i)) == rs.pair(u, v)


def test_rho_examples():
    assert rho(build_root_system("A", 1)).coords == (Fraction(1, 2),)
    assert rho(build_root_system("A", 2)).coords == (1, 1)
    b2 = build_root_system("B", 2)
    total = [sum(r[i] for r in b2.positive_roots) for i in range(2)]
    assert rho(b2).coords == tuple(Fraction(x, 2) for x in total)


@pytest.mark.parametrize("key", sorted(DIMENSIONS))
def test_rho_has_unit_dynkin_labels(key):
    rs = build_root_system(*key)
    assert rs.to_fundamental(rho(rs)) == (1,) * rs.rank


def test_fundamental_round_trip():
    rs = build_root_system("B", 3)
    w = rs.from_fundamental((1, Fraction(1, 2), 3))
    assert rs.to_fundamental(w) == (1, Fraction(1, 2), 3)


@pytest.mark.parametrize("series,rank", [("A", 0), ("B", 1), ("D", 3), ("E", 5), ("G", 3), ("Q", 2)])
def test_unsupported_types(series, rank):
    with pytest.raises(ConfigurationError):
        build_root_system(series, rank)


def test_degree_vector():
    d = DegreeVector((1, 2))
    assert d.height == 3 and str(d) == "(1,2)"
    assert DegreeVector.zero(2).height == 0
    with pytest.raises(ArgumentError):
        DegreeVector((-1, 0))
    assert Weight((Fraction(3, 2), 2)).to_json() == ["3/2", "2"]
