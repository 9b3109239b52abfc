"""Acceptance criteria 1-10, each checked exactly.

Every criterion prints one line ``criterion N: PASS|FAIL  <detail>``.  The
lines are also collected and repeated in the pytest terminal summary, so
``pytest tests/test_acceptance.py`` shows them without ``-s``.
"""

import random
from fractions import Fraction
from math import prod

import pytest

from coadjoint_star import cli
from coadjoint_star.invariants import (
    ComplexWeight,
    c1_image,
    characteristic_class,
    dimension_table,
    freudenthal_dim,
    quantum_dimension,
)
from coadjoint_star.orbitstar import (
    random_function,
    random_group_point,
    random_momentum_polynomial,
    verify_associativity,
    verify_lemma_comp,
    verify_momentum_map,
    verify_separation,
)
from coadjoint_star.rootsys import DegreeVector, Weight, build_root_system
from coadjoint_star.scalars import ScalarQt
from coadjoint_star.shapovalov import (
    b_series,
    inverse_is_exact,
    leading_order_report,
    momentum_identity_check,
    scale_first_order,
    shapovalov_block,
    verma_pairing,
)

from conftest import b_for, split_for

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)


def all_pass(records) -> bool:
    return all(r.passed for r in records)


# ---------------------------------------------------------------- 1


FIRST_ORDER_CASES = [("A", 1, (5,)), ("A", 2, (2, 3)), ("A", 2, (Fraction(1, 2), 3)), ("B", 2, (1, 1))]


def test_criterion_1_first_order_term():
    ok = True
    for key in FIRST_ORDER_CASES:
        split = split_for(*key)
        series = b_series(b_for(*key, split.max_root_height), 1)
        expected = {((split.f_index[a],), (split.e_index[a],)): 1 for a in split.delta_plus}
        ok &= series.tensor_at(0) == {((), ()): 1} and series.tensor_at(1) == expected
    report(1, ok, "B = 1 + t sum e_{-a} ⊗ e_a + O(t^2) for A1, A2 (two lambdas), B2")
    assert ok


# ---------------------------------------------------------------- 2


def a1_closed_form(n: int, c) -> ScalarQt:
    # n! prod_{k<n} (1 - k t / c) / t^n
    num = ScalarQt(prod(range(1, n + 1)))
    for k in range(n):
        num = num * (1 - ScalarQt.t() * Fraction(k, 1) / Fraction(c))
    return num / ScalarQt.t() ** n


def test_criterion_2_a1_shapovalov_oracle():
    split = split_for("A", 1, (5,))
    checked, ok = 0, True
    for n in range(1, 7):
        block = shapovalov_block(split, DegreeVector((n,)))
        for i, x in enumerate(block.row_basis):
            for j, y in enumerate(block.col_basis):
                ok &= verma_pairing(split, x, y) == block.entries[i][j]
                checked += 1
        ok &= block.entries[0][0] == a1_closed_form(n, 5)
    report(2, ok, f"A1 blocks n <= 6: {checked} entries equal the Verma-action oracle and the closed form")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_lemma_comp():
    rng = random.Random(30)
    ok, literal_ok, count = True, True, 0
    for key in [("A", 1, (5,)), ("A", 2, (2, 3))]:
        split = split_for(*key)
        B = b_for(*key, split.max_root_height)
        ok &= momentum_identity_check(B).passed
        literal_ok &= momentum_identity_check(B, sign=-1).passed
        samples = [random_function(split.basis, rng, rng.randint(1, 3)) for _ in range(5)]
        recs = verify_lemma_comp(B, samples)
        count += len(recs)
        ok &= all_pass(recs)
        literal_ok &= all_pass(verify_lemma_comp(B, samples[:1], sign=-1))
    report(3, ok, f"momentum identity and {count} symbol-level checks hold with +t "
                  f"(the -t variant {'holds' if literal_ok else 'fails'}; sign convention in notes)")
    assert ok
    assert not literal_ok


# ---------------------------------------------------------------- 4


def test_criterion_4_strong_momentum_map():
    ok, count = True, 0
    for key in [("A", 1, (5,)), ("A", 2, (2, 3))]:
        split = split_for(*key)
        B = b_for(*key, split.max_root_height)
        rng = random.Random(40)
        samples = [random_function(split.basis, rng, rng.randint(1, 3)) for _ in range(20)]
        recs = verify_momentum_map(B, samples)
        count += len(recs)
        ok &= all_pass(recs)
    report(4, ok, f"f_h * f - f * f_h = t{{f_h, f}} in {count} exact cases (20 f per algebra, all h)")
    assert ok


# ---------------------------------------------------------------- 5


def test_criterion_5_associativity():
    ok, count, bounds = True, 0, set()
    for key in [("A", 1, (5,)), ("A", 2, (2, 3))]:
        split = split_for(*key)
        B = b_for(*key, 2 * split.max_root_height)
        rng = random.Random(50)
        triples = [tuple(random_momentum_polynomial(split, rng, 2) for _ in range(3)) for _ in range(20)]
        points = [random_group_point(split.basis, rng, length=4) for _ in range(10)]
        recs = verify_associativity(B, triples, points)
        count += len(recs)
        ok &= all_pass(recs)
        bounds |= {r.detail.rsplit(" ", 1)[-1] for r in recs}
    report(5, ok, f"(f*g)*h - f*(g*h) = 0 at {count} exact evaluations (A1, A2; 20 triples x 10 points; "
                  f"degree bounds per parameter {sorted(bounds, key=int)})")
    assert ok


# ---------------------------------------------------------------- 6


def test_criterion_6_separation():
    ok, count = True, 0
    for key in [("A", 1, (5,)), ("A", 2, (2, 3))]:
        split = split_for(*key)
        B = b_for(*key, 2 * split.max_root_height)
        rng = random.Random(60)
        samples = [random_function(split.basis, rng, 2) for _ in range(4)]
        recs = verify_separation(B, samples, rng=rng)
        count += len(recs)
        ok &= all_pass(recs)
    report(6, ok, f"f * g = fg for n_- generators and g * f = gf for n_+ generators ({count} cases)")
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_7_characteristic_class():
    ok = True
    for key in [("A", 1, (5,)), ("A", 2, (2, 3)), ("A", 2, (0, 1)), ("B", 2, (1, 1)), ("G", 2, (1, 2))]:
        split = split_for(*key)
        rank = split.rs.rank
        theta = characteristic_class(split)
        half = Weight(tuple(Fraction(sum(a[i] for a in split.delta_plus), 2) for i in range(rank)))
        ok &= theta.order0 == ComplexWeight.real(-split.lambda_weight)
        ok &= theta.order1 == ComplexWeight.imaginary(half)
        # c1 of n_- is -i sum over Delta_+, and [omega] - (t/2) c1 reproduces the class
        c1 = c1_image([Weight(a) for a in split.delta_minus])
        ok &= c1 == ComplexWeight.imaginary(half).scale(-2)
        ok &= c1.scale(Fraction(-1, 2)) == theta.order1
    report(7, ok, "class = -lambda + t i rho, equal to [omega] - (t/2) c1(n_-) for A1, A2 (regular and not), B2, G2")
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_quantum_dimension():
    grids = {("A", 1): 10, ("A", 2): 4, ("B", 2): 3, ("G", 2): 2}
    ok, rows = True, 0
    for (series, rank), k in grids.items():
        table = dimension_table(build_root_system(series, rank), k)
        rows += len(table)
        ok &= all(r.match and r.qdim.denominator == 1 for r in table)
    rs = build_root_system("A", 2)
    rho_check = quantum_dimension(rs, None, rs.from_fundamental((1, 1))) == 8 == freudenthal_dim(
        rs, rs.from_fundamental((1, 1)))
    ok &= rho_check
    report(8, ok, f"Tr(1) = Freudenthal dimension on {rows} grid weights; A2 xi = rho gives 8")
    assert ok


# ---------------------------------------------------------------- 9


STRUCTURAL_CASES = [("A", 1, (5,)), ("A", 2, (2, 3)), ("B", 2, (1, 1))]


def _verify_report(seed):
    cfg = cli.RunConfig(series="A", rank=2, lam=(Fraction(2), Fraction(3)), height_cutoff=4,
                        suites=cli.SUITES, seed=seed, samples=2, points=2)
    return cli.report_json(cfg, cli.run_verification(cfg))


def test_criterion_9_structural():
    ok, failures = True, []
    for key in STRUCTURAL_CASES:
        split = split_for(*key)
        B = b_for(*key, 4)
        recs = cli._structural_records(split, B)
        ok &= all_pass(recs)
        failures += [r.check_id for r in recs if not r.passed]
        ok &= all(inverse_is_exact(b) for b in B.blocks.values())
    ok &= _verify_report(9) == _verify_report(9)
    literal = all(rep.height_rule for key in STRUCTURAL_CASES
                  for rep in leading_order_report(b_for(*key, 4)))
    report(9, ok and literal,
           "Jacobi, PBW confluence (100 words), antipode, P P^-1 = 1, corrected leading-order bound "
           f"and byte-identical reports {'pass' if ok else 'FAIL ' + str(failures)}; "
           f"literal t^height(mu) rule {'holds' if literal else 'fails (A2/B2, e.g. A2 at a1+a2: valuation 1)'}")
    assert ok


@pytest.mark.xfail(strict=True, reason="a root vector of height h > 1 pairs at order t^1, below t^h")
def test_criterion_9_literal_height_rule():
    reps = [rep for key in STRUCTURAL_CASES for rep in leading_order_report(b_for(*key, 4))]
    assert all(rep.height_rule for rep in reps)


# ---------------------------------------------------------------- 10


def test_criterion_10_fault_sensitivity():
    split = split_for("A", 2, (2, 3))
    B = scale_first_order(b_for("A", 2, (2, 3), 4), 2)
    rng = random.Random(100)
    samples = [random_function(split.basis, rng, 2) for _ in range(2)]
    triples = [tuple(random_momentum_polynomial(split, rng, 2) for _ in range(3)) for _ in range(2)]
    points = [random_group_point(split.basis, rng, length=4) for _ in range(2)]
    caught = {
        "lemma_comp": not momentum_identity_check(B).passed and not all_pass(verify_lemma_comp(B, samples)),
        "momentum_map": not all_pass(verify_momentum_map(B, samples)),
        "associativity": not all_pass(verify_associativity(B, triples, points)),
    }
    ok = all(caught.values())
    report(10, ok, "t-coefficient scaled by 2: nonzero residuals in " +
           ", ".join(k for k, v in caught.items() if v))
    assert ok
