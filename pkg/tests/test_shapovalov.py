import math
import random
from fractions import Fraction

import pytest
import sympy

from coadjoint_star.enveloping import E_BLOCK, F_BLOCK, centralizer_split
from coadjoint_star.errors import CutoffError, NonDegeneracyError
from coadjoint_star.rootsys import DegreeVector
from coadjoint_star.scalars import ScalarQt
from coadjoint_star.shapovalov import (
    BlockCache,
    b_series,
    block_determinant,
    compute_B,
    inverse_is_exact,
    invert_block,
    leading_order_report,
    momentum_identity_check,
    scale_first_order,
    shapovalov_block,
    verma_pairing,
)

from conftest import b_for, split_for

t = ScalarQt.t()


def a1_entry(n, c):
    """Hand value of the normalized A1 block at n*alpha with lambda/t: n! prod (1 - k t / c) / t^n."""
    out = ScalarQt(math.factorial(n))
    for k in range(n):
        out = out * (1 - t * Fraction(k, c))
    return out / t**n


def test_zero_degree_block(a2):
    block = shapovalov_block(a2, DegreeVector((0, 0)))
    assert block.entries == [[ScalarQt(1)]]


@pytest.mark.parametrize("n", range(1, 7))
def test_a1_blocks_against_closed_form_and_oracle(a1, n):
    mu = DegreeVector((n,))
    block = shapovalov_block(a1, mu)
    assert block.size == 1
    assert block.entries[0][0] == a1_entry(n, 5)
    x, y = block.row_basis[0], block.col_basis[0]
    assert verma_pairing(a1, x, y) == block.entries[0][0]
    plain = shapovalov_block(a1, mu, mode="plain_lambda")
    assert plain.entries[0][0] == a1_entry(n, 5).substitute(1)


@pytest.mark.parametrize("key", [("A", 2, (2, 3)), ("B", 2, (1, 1)), ("A", 2, (0, 1))])
def test_blocks_match_verma_oracle(key):
    split = split_for(*key)
    for h in range(1, 4):
        for mu in split.degrees_of_height(h):
            block = shapovalov_block(split, mu)
            for i, x in enumerate(block.row_basis):
                for j, y in enumerate(block.col_basis):
                    assert verma_pairing(split, x, y) == block.entries[i][j]


def test_unreachable_degree_gives_empty_block():
    split = split_for("A", 2, (0, 1))
    # alpha_1 is a Levi root here, so no n_- monomial has split degree (1, 0)
    levi = DegreeVector(split.split_degree((1, 0)))
    assert shapovalov_block(split, levi).size == 0


def test_determinant_a1_factorizes(a1):
    l1 = sympy.Symbol("l1")
    assert block_determinant(a1, DegreeVector((0,))).as_expr() == 1
    for n in (1, 2, 3):
        det = block_determinant(a1, DegreeVector((n,)))
        expected = math.factorial(n) * sympy.prod([k - l1 for k in range(n)])
        assert sympy.expand(det.as_expr() - expected) == 0


def test_determinant_a2_mixed_degree(a2):
    det = block_determinant(a2, DegreeVector((1, 1)))
    assert not det.is_zero
    assert len(a2.monomials(DegreeVector((1, 1)), F_BLOCK)) == 2
    assert det.as_expr().subs({s: v for s, v in zip(det.gens, (2, 3))}) != 0


def test_singular_block_is_reported():
    # plain lambda(h) = 1 kills the A1 block at 2 alpha
    with pytest.raises(NonDegeneracyError):
        invert_block([[ScalarQt(0)]], DegreeVector((2,)))


def test_invert_block_against_sympy():
    rng = random.Random(4)
    ts = sympy.Symbol("t")
    for n in (2, 3):
        entries = [[ScalarQt.from_coeffs([rng.randint(-3, 3) for _ in range(3)], [1, rng.randint(1, 3)])
                    for _ in range(n)] for _ in range(n)]
        inv = invert_block(entries)
        m = sympy.Matrix(n, n, lambda i, j: sympy.sympify(str(entries[i][j]).replace("^", "**")))
        ref = m.inv()
        for i in range(n):
            for j in range(n):
                got = sympy.sympify(str(inv[i][j]).replace("^", "**"))
                assert sympy.simplify(got - ref[i, j]) == 0


@pytest.mark.parametrize("key,cut", [(("A", 1, (5,)), 4), (("A", 2, (2, 3)), 3), (("B", 2, (1, 1)), 3)])
def test_inverse_blocks_exact(key, cut):
    B = b_for(*key, cut)
    assert all(inverse_is_exact(block) for block in B.blocks.values())


def test_a1_terms_are_reciprocals(a1):
    B = b_for("A", 1, (5,), 4)
    for n in range(1, 5):
        comp = B.components[DegreeVector((n,))]
        assert comp.coeffs == [[1 / a1_entry(n, 5)]]


@pytest.mark.parametrize("key", [("A", 1, (5,)), ("A", 2, (2, 3)), ("B", 2, (1, 1)), ("G", 2, (1, 2))])
def test_first_order_term(key):
    split = split_for(*key)
    B = b_for(*key, split.max_root_height)
    series = b_series(B, 1)
    assert series.tensor_at(0) == {((), ()): 1}
    expected = {((split.f_index[a],), (split.e_index[a],)): 1 for a in split.delta_plus}
    assert series.tensor_at(1) == expected


def test_b_series_text():
    B = b_for("A", 1, (5,), 4)
    assert b_series(B, 0).render() == "t^0: 1 ⊗ 1\n"
    text = b_series(B, 2).render()
    assert text.splitlines()[1] == "t^1: e(-1) ⊗ e(1)"
    assert text.splitlines()[2] == "t^2: 1/2 * e(-1)^2 ⊗ e(1)^2"


def test_b_series_needs_enough_height():
    B = b_for("A", 2, (2, 3), 3)
    with pytest.raises(CutoffError) as err:
        b_series(B, 2)
    assert err.value.required == 4


def test_b_series_rejects_pole():
    B = b_for("A", 1, (5,), 2)
    comp = B.components[DegreeVector((1,))]
    comp.coeffs[0][0], saved = 1 / t, comp.coeffs[0][0]
    try:
        with pytest.raises(ArithmeticError):
            b_series(B, 1)
    finally:
        comp.coeffs[0][0] = saved


@pytest.mark.parametrize("key", [("A", 1, (5,)), ("A", 2, (2, 3)), ("B", 2, (1, 1)), ("G", 2, (1, 1))])
def test_leading_order_bounds(key):
    B = b_for(*key, 4)
    for rep in leading_order_report(B):
        assert rep.bound_ok and rep.diagonal_ok
        assert rep.min_valuation == rep.min_length


def test_height_rule_fails_where_a_root_has_height_two():
    """t^height(mu) is not the leading order once mu is itself a non-simple root."""
    B = b_for("A", 2, (2, 3), 3)
    reps = {r.degree: r for r in leading_order_report(B)}
    assert reps[DegreeVector((1, 1))].min_valuation == 1
    assert not reps[DegreeVector((1, 1))].height_rule
    assert all(r.height_rule for r in leading_order_report(b_for("A", 1, (5,), 4)))


@pytest.mark.parametrize("key,cut", [(("A", 1, (5,)), 3), (("A", 2, (2, 3)), 3), (("B", 2, (1, 1)), 3),
                                     (("A", 2, (0, 1)), 3)])
def test_momentum_identity(key, cut):
    B = b_for(*key, cut)
    assert momentum_identity_check(B).passed
    assert not momentum_identity_check(B, sign=-1).passed


def test_momentum_identity_detects_fault():
    B = scale_first_order(b_for("A", 2, (2, 3), 3), 2)
    rep = momentum_identity_check(B)
    assert not rep.passed and rep.residuals


def test_momentum_identity_needs_cutoff():
    with pytest.raises(CutoffError):
        momentum_identity_check(b_for("G", 2, (1, 1), 2))


def test_cache_is_bit_identical(tmp_path):
    split = split_for("A", 2, (2, 3))
    cache = BlockCache(tmp_path)
    first = compute_B(split, 3, cache=cache)
    assert cache.misses and not cache.hits
    files = sorted(p.read_bytes() for p in tmp_path.iterdir())
    second = compute_B(split, 3, cache=cache)
    assert cache.hits == len(first.blocks)
    assert first.dump() == second.dump()
    for mu, block in first.blocks.items():
        assert block.canonical() == second.blocks[mu].canonical()
        assert block.canonical() == shapovalov_block(split, mu).canonical()
    assert files == sorted(p.read_bytes() for p in tmp_path.iterdir())


def test_two_tensor_invariants():
    B = b_for("B", 2, (1, 1), 3)
    split = B.split
    for x, y, c in B.terms:
        assert split.word_degree(x) == split.word_degree(y)
        assert split.word_degree(x).height <= B.height_cutoff
    assert B.terms[0] == ((), (), ScalarQt(1))
