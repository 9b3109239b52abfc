"""Shapovalov pairing blocks, their exact inverses, and the element B = F_{lambda/t}.

The pairing between U(n_-) and U(n_+) is (x, y) = lambda(phi(S(y) x)), graded
by the root lattice.  Substituting lambda/t for lambda turns each block into a
matrix of polynomials in 1/t; the block inverses assemble into B.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import flint
import sympy

from .enveloping import (
    E_BLOCK,
    F_BLOCK,
    H_BLOCK,
    LeviSplit,
    UEAElement,
    antipode,
    centralizer_split,
    hc_project,
    pbw_algebra,
)
from .errors import CutoffError, NonDegeneracyError
from .rootsys import DegreeVector
from .scalars import ScalarQt, format_fraction, to_fmpq, to_fraction

__all__ = [
    "BSeries",
    "BlockCache",
    "ShapovalovBlock",
    "TwoTensor",
    "VermaModule",
    "b_series",
    "block_determinant",
    "compute_B",
    "invert_block",
    "inverse_is_exact",
    "leading_order_report",
    "momentum_identity_check",
    "pairing_hc",
    "scale_first_order",
    "shapovalov_block",
    "verma_pairing",
]

PLAIN = "plain_lambda"
OVER_T = "lambda_over_t"


# --------------------------------------------------------------------------
# Pairing entries


def pairing_hc(split: LeviSplit, x: tuple[int, ...], y: tuple[int, ...]) -> UEAElement:
    """phi(S(y) x) in U(h) for PBW words x in U(n_-), y in U(n_+)."""
    memo = split._cache.setdefault("phi", {})
    key = (x, y)
    if key in memo:
        return memo[key]
    basis = split.basis
    alg = pbw_algebra(basis)
    sy = antipode(UEAElement(basis, {y: 1}))
    prod = alg.mul_mod_left_ideal(sy, UEAElement(basis, {x: 1}))
    res = hc_project(prod)
    memo[key] = res
    return res


def _character_entry(split: LeviSplit, u: UEAElement, mode: str):
    """Evaluate lambda (or lambda/t) on an element of U(h)."""
    lamv = split.lambda_values
    if mode == PLAIN:
        total = Fraction(0)
        for w, c in u.terms.items():
            term = c
            for k in w:
                term *= lamv[k]
            total += term
        return total
    by_len: dict[int, Fraction] = {}
    for w, c in u.terms.items():
        term = c
        for k in w:
            term *= lamv[k]
        if term:
            by_len[len(w)] = by_len.get(len(w), 0) + term
    if not by_len:
        return ScalarQt(0)
    top = max(by_len)
    return ScalarQt.from_inverse_powers([by_len.get(k, 0) for k in range(top + 1)])


@dataclass
class ShapovalovBlock:
    degree: DegreeVector
    row_basis: list[tuple[int, ...]]
    col_basis: list[tuple[int, ...]]
    entries: list[list]
    mode: str = OVER_T

    @property
    def size(self) -> int:
        return len(self.row_basis)

    def canonical(self) -> str:
        """Deterministic text form (used for cache files and byte comparisons)."""
        payload = {
            "degree": list(self.degree.coeffs),
            "mode": self.mode,
            "rows": [list(w) for w in self.row_basis],
            "cols": [list(w) for w in self.col_basis],
            "entries": [[_encode_scalar(e) for e in row] for row in self.entries],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_canonical(cls, text: str) -> "ShapovalovBlock":
        d = json.loads(text)
        return cls(
            degree=DegreeVector(tuple(d["degree"])),
            row_basis=[tuple(w) for w in d["rows"]],
            col_basis=[tuple(w) for w in d["cols"]],
            entries=[[_decode_scalar(e, d["mode"]) for e in row] for row in d["entries"]],
            mode=d["mode"],
        )


def _encode_scalar(v):
    if isinstance(v, ScalarQt):
        return {
            "num": [format_fraction(c) for c in v.num.coeffs()],
            "den": [format_fraction(c) for c in v.den.coeffs()],
        }
    return format_fraction(v)


def _decode_scalar(v, mode):
    if mode == PLAIN:
        return Fraction(v)
    return ScalarQt.from_coeffs([Fraction(c) for c in v["num"]], [Fraction(c) for c in v["den"]])


def shapovalov_block(split: LeviSplit, mu: DegreeVector, mode: str = OVER_T) -> ShapovalovBlock:
    """The pairing matrix on U(n_-)_mu x U(n_+)_mu; entry (i, j) = lambda(phi(S(y_j) x_i)).

    In ``lambda_over_t`` mode lambda is replaced by lambda/t and entries are
    `ScalarQt`; in ``plain_lambda`` mode they are rationals.  A degree not
    reachable from Delta_+ gives a 0 x 0 block.
    """
    if mode not in (PLAIN, OVER_T):
        raise ValueError(f"unknown mode {mode!r}")
    rows = split.monomials(mu, F_BLOCK)
    cols = split.monomials(mu, E_BLOCK)
    entries = [[_character_entry(split, pairing_hc(split, x, y), mode) for y in cols] for x in rows]
    return ShapovalovBlock(degree=mu, row_basis=rows, col_basis=cols, entries=entries, mode=mode)


def block_determinant(split: LeviSplit, mu: DegreeVector, max_height: int = 6) -> sympy.Poly:
    """Determinant of the block at mu as a polynomial in the symbols l_i = lambda(h_i).

    Computed in the unnormalized Chevalley basis (normalization only rescales
    rows by nonzero constants).  Raises if the determinant vanishes identically.
    """
    if mu.height > max_height:
        raise ValueError(f"height {mu.height} exceeds the symbolic bound {max_height}")
    raw = centralizer_split(split.alg, split.lam)
    syms = sympy.symbols(f"l1:{raw.rank + 1}")
    values = []
    for k in range(raw.basis.dim):
        key = raw.alg.keys[raw.source[k]]
        values.append(syms[key[1]] if isinstance(key[0], str) else 0)
    rows = raw.monomials(mu, F_BLOCK)
    cols = raw.monomials(mu, E_BLOCK)
    mat = []
    for x in rows:
        row = []
        for y in cols:
            u = pairing_hc(raw, x, y)
            expr = sympy.Integer(0)
            for w, c in u.terms.items():
                term = sympy.Rational(c.numerator, c.denominator)
                for k in w:
                    term *= values[k]
                expr += term
            row.append(sympy.expand(expr))
        mat.append(row)
    if not mat:
        return sympy.Poly(1, *syms)
    det = sympy.Matrix(mat).det(method="bareiss")
    poly = sympy.Poly(sympy.expand(det), *syms)
    if poly.is_zero:
        raise NonDegeneracyError(f"Shapovalov determinant vanishes identically at degree {mu}", mu)
    return poly


# --------------------------------------------------------------------------
# Verma-module oracle


class VermaModule:
    """The generalized Verma module U(n_-) nu with a character on the Levi block.

    Vectors are dicts from normal n_- words to coefficients in any ring that
    accepts rational scalars.  The action is computed letter by letter from
    the bracket table alone, independently of `PBWAlgebra`.
    """

    def __init__(self, split: LeviSplit, character):
        self.split = split
        self.basis = split.basis
        self.character = character
        self._act_memo: dict = {}
        self._lmul_memo: dict = {}

    def _left_mult_f(self, g: int, word: tuple[int, ...]) -> dict:
        key = (g, word)
        if key in self._lmul_memo:
            return self._lmul_memo[key]
        if not word or g <= word[0]:
            res = {(g,) + word: Fraction(1)}
        else:
            res = {}
            x, rest = word[0], word[1:]
            for w, c in self._left_mult_f(g, rest).items():
                for w2, c2 in self._left_mult_f(x, w).items():
                    res[w2] = res.get(w2, 0) + c * c2
            for k, ck in self.basis.table[g][x].items():
                for w2, c2 in self._left_mult_f(k, rest).items():
                    res[w2] = res.get(w2, 0) + ck * c2
            res = {w: c for w, c in res.items() if c != 0}
        self._lmul_memo[key] = res
        return res

    def act_on_word(self, z: int, word: tuple[int, ...]) -> dict:
        key = (z, word)
        if key in self._act_memo:
            return self._act_memo[key]
        blocks = self.basis.blocks
        if not word:
            if blocks[z] == F_BLOCK:
                res = {(z,): Fraction(1)}
            elif blocks[z] == H_BLOCK:
                val = self.character[z]
                res = {(): val} if val != 0 else {}
            else:
                res = {}
        elif blocks[z] == F_BLOCK:
            res = self._left_mult_f(z, word)
        else:
            x, rest = word[0], word[1:]
            res = {}
            for w, c in self.act_on_word(z, rest).items():
                for w2, c2 in self._left_mult_f(x, w).items():
                    res[w2] = res.get(w2, 0) + c * c2
            for k, ck in self.basis.table[z][x].items():
                for w2, c2 in self.act_on_word(k, rest).items():
                    res[w2] = res.get(w2, 0) + c2 * ck
            res = {w: c for w, c in res.items() if c != 0}
        self._act_memo[key] = res
        return res

    def act(self, z: int, vec: dict) -> dict:
        out: dict = {}
        for w, c in vec.items():
            for w2, c2 in self.act_on_word(z, w).items():
                out[w2] = out.get(w2, 0) + c2 * c
        return {w: c for w, c in out.items() if c != 0}

    def act_word(self, word, vec: dict) -> dict:
        for z in reversed(tuple(word)):
            vec = self.act(z, vec)
        return vec


def verma_pairing(split: LeviSplit, x, y, mode: str = OVER_T, module: VermaModule | None = None):
    """Oracle entry: the nu-coefficient of S(y) x . nu computed in the Verma module."""
    if module is None:
        module = _verma_for(split, mode)
    vec = module.act_word(tuple(reversed(y)), {tuple(x): ScalarQt(1) if mode == OVER_T else Fraction(1)})
    sign = -1 if len(y) % 2 else 1
    val = vec.get((), 0)
    return val * sign


def _verma_for(split: LeviSplit, mode: str) -> VermaModule:
    key = ("verma", mode)
    if key not in split._cache:
        if mode == OVER_T:
            inv_t = ScalarQt.from_inverse_powers([0, 1])
            chars = [inv_t * v for v in split.lambda_values]
        else:
            chars = list(split.lambda_values)
        split._cache[key] = VermaModule(split, chars)
    return split._cache[key]


# --------------------------------------------------------------------------
# Exact inversion


def invert_block(entries: list[list[ScalarQt]], degree=None) -> list[list[ScalarQt]]:
    """Inverse of a square matrix over Q(t) by fraction-free Gauss-Jordan elimination.

    The matrix is scaled to polynomial entries first; each elimination step
    divides exactly by the previous pivot (Bareiss), and the final quotient
    adj/det is reduced entry by entry.
    """
    n = len(entries)
    if n == 0:
        return []
    den = flint.fmpq_poly([1])
    for row in entries:
        for e in row:
            e = ScalarQt.coerce(e)
            g = den.gcd(e.den)
            den = den * (e.den // g)
    m = [[ScalarQt.coerce(e).num * (den // ScalarQt.coerce(e).den) for e in row] for row in entries]
    zero = flint.fmpq_poly([])
    one = flint.fmpq_poly([1])
    aug = [row[:] + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    prev = one
    for k in range(n):
        piv = next((r for r in range(k, n) if aug[r][k] != 0), None)
        if piv is None:
            raise NonDegeneracyError(f"singular Shapovalov block at degree {degree}", degree)
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        akk = aug[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = aug[i][k]
            row_i, row_k = aug[i], aug[k]
            for j in range(2 * n):
                if j == k:
                    continue
                v = akk * row_i[j] - aik * row_k[j]
                if prev != one:
                    q, r = divmod(v, prev)
                    if r != 0:
                        raise ArithmeticError("Bareiss step is not exact")
                    v = q
                row_i[j] = v
            row_i[k] = zero
        prev = akk
    # the left half is now a multiple of the identity; divide row by row
    inv = []
    for i in range(n):
        d = aug[i][i]
        inv.append([ScalarQt(aug[i][n + j] * den, d) for j in range(n)])
    return inv


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ScalarQt(0)
            for k in range(m):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def inverse_is_exact(block: ShapovalovBlock) -> bool:
    """P * P^-1 == identity, exactly over Q(t)."""
    return is_identity(_matmul(block.entries, invert_block(block.entries, block.degree)))


def is_identity(mat) -> bool:
    return all(
        (mat[i][j] == (1 if i == j else 0)) for i in range(len(mat)) for j in range(len(mat))
    )


# --------------------------------------------------------------------------
# Cache


class BlockCache:
    """One file per Shapovalov block, named by a hash of its key.

    Writes go through a temporary file and an atomic rename; concurrent
    writers produce identical bytes, so the last one to land wins harmlessly.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(split: LeviSplit, mu: DegreeVector) -> str:
        payload = {
            "series": split.rs.series,
            "rank": split.rank,
            "lambda": [format_fraction(x) for x in split.lam],
            "mu": list(mu.coeffs),
            "delta_plus": [list(a) for a in split.delta_plus],
            "normalization": split.fingerprint(),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def path(self, split: LeviSplit, mu: DegreeVector) -> Path:
        digest = hashlib.sha256(self.key(split, mu).encode()).hexdigest()
        return self.directory / f"block-{digest[:32]}.json"

    def get(self, split: LeviSplit, mu: DegreeVector) -> ShapovalovBlock | None:
        p = self.path(split, mu)
        if not p.exists():
            self.misses += 1
            return None
        self.hits += 1
        return ShapovalovBlock.from_canonical(p.read_text())

    def put(self, split: LeviSplit, block: ShapovalovBlock) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        p = self.path(split, block.degree)
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(block.canonical())
        os.replace(tmp, p)


# --------------------------------------------------------------------------
# The element B


@dataclass
class DegreeComponent:
    """B restricted to one degree: coeffs[i][j] multiplies rows[i] ⊗ cols[j]."""

    degree: DegreeVector
    rows: list[tuple[int, ...]]
    cols: list[tuple[int, ...]]
    coeffs: list[list[ScalarQt]]


@dataclass
class TwoTensor:
    """B = F_{lambda/t} truncated to degrees of height <= height_cutoff."""

    split: LeviSplit
    height_cutoff: int
    components: dict[DegreeVector, DegreeComponent]
    blocks: dict[DegreeVector, ShapovalovBlock] = field(default_factory=dict, repr=False)

    @property
    def terms(self) -> list[tuple[tuple[int, ...], tuple[int, ...], ScalarQt]]:
        out = []
        for mu in sorted(self.components, key=lambda d: (d.height, d.coeffs)):
            comp = self.components[mu]
            for i, x in enumerate(comp.rows):
                for j, y in enumerate(comp.cols):
                    c = comp.coeffs[i][j]
                    if not c.is_zero():
                        out.append((x, y, c))
        return out

    def by_height(self, height: int) -> list[DegreeComponent]:
        return [c for mu, c in sorted(self.components.items()) if mu.height == height]

    def dump(self) -> str:
        """Canonical text listing of every term (sorted, reduced)."""
        lines = [f"B cutoff={self.height_cutoff} split={self.split.rs.name} "
                 f"lambda={','.join(format_fraction(x) for x in self.split.lam)}"]
        for x, y, c in self.terms:
            lines.append(f"{render_word(self.split, x)} ⊗ {render_word(self.split, y)} : {c}")
        return "\n".join(lines) + "\n"


def render_word(split: LeviSplit, word) -> str:
    if not word:
        return "1"
    parts = []
    k = 0
    word = tuple(word)
    while k < len(word):
        j = k
        while j < len(word) and word[j] == word[k]:
            j += 1
        lab = split.basis.labels[word[k]]
        parts.append(lab if j - k == 1 else f"{lab}^{j - k}")
        k = j
    return " ".join(parts)


def compute_B(split: LeviSplit, height_cutoff: int, cache: BlockCache | None = None,
              check_inverse: bool = False) -> TwoTensor:
    """Assemble B from the inverses of all blocks of height <= height_cutoff.

    The coefficient of x_i ⊗ y_j at degree mu is (P_mu^{-1})_{ji}.
    """
    if height_cutoff < 0:
        raise ValueError("height_cutoff must be nonnegative")
    components: dict[DegreeVector, DegreeComponent] = {}
    blocks: dict[DegreeVector, ShapovalovBlock] = {}
    zero = DegreeVector.zero(split.rank)
    components[zero] = DegreeComponent(zero, [()], [()], [[ScalarQt(1)]])
    for h in range(1, height_cutoff + 1):
        for mu in split.degrees_of_height(h):
            block = cache.get(split, mu) if cache is not None else None
            if block is None:
                block = shapovalov_block(split, mu, OVER_T)
                if cache is not None:
                    cache.put(split, block)
            blocks[mu] = block
            inv = invert_block(block.entries, mu)
            if check_inverse and not is_identity(_matmul(block.entries, inv)):
                raise ArithmeticError(f"inverse check failed at degree {mu}")
            n = block.size
            coeffs = [[inv[j][i] for j in range(n)] for i in range(n)]
            components[mu] = DegreeComponent(mu, block.row_basis, block.col_basis, coeffs)
    return TwoTensor(split=split, height_cutoff=height_cutoff, components=components, blocks=blocks)


def scale_first_order(B: TwoTensor, factor) -> TwoTensor:
    """Fault injection: multiply the t^1 Taylor coefficient of every term by ``factor``."""
    t = ScalarQt.t()
    factor = Fraction(factor)
    comps = {}
    for mu, comp in B.components.items():
        coeffs = []
        for row in comp.coeffs:
            new_row = []
            for c in row:
                c1 = c.series(1)[1] if not c.is_zero() else Fraction(0)
                new_row.append(c + t * ((factor - 1) * c1))
            coeffs.append(new_row)
        comps[mu] = DegreeComponent(mu, comp.rows, comp.cols, coeffs)
    return TwoTensor(split=B.split, height_cutoff=B.height_cutoff, components=comps, blocks=B.blocks)


# --------------------------------------------------------------------------
# Leading order and series


@dataclass
class LeadingOrder:
    degree: DegreeVector
    height: int
    min_length: int
    min_valuation: int
    bound_ok: bool          # every entry has valuation >= ceil((|x| + |y|)/2)
    diagonal_ok: bool       # matched diagonal entries are t^|x| / prod(m!) + O(t^{|x|+1})
    height_rule: bool       # valuation >= height(mu), the naive cutoff rule

    @property
    def ok(self) -> bool:
        return self.bound_ok and self.diagonal_ok and self.min_valuation == self.min_length


def _multiplicity_factor(word) -> int:
    out = 1
    for k in set(word):
        out *= math.factorial(word.count(k))
    return out


def leading_order_report(B: TwoTensor) -> list[LeadingOrder]:
    out = []
    for mu, comp in sorted(B.components.items(), key=lambda kv: (kv[0].height, kv[0].coeffs)):
        if mu.height == 0:
            continue
        minval = None
        bound_ok = True
        diag_ok = True
        for i, x in enumerate(comp.rows):
            for j, y in enumerate(comp.cols):
                c = comp.coeffs[i][j]
                need = -(-(len(x) + len(y)) // 2)
                if c.is_zero():
                    if i == j:
                        diag_ok = False
                    continue
                v = c.valuation()
                minval = v if minval is None else min(minval, v)
                if v < need:
                    bound_ok = False
                if i == j:
                    lead = c.series(len(x))[len(x)] if v >= 0 else None
                    if lead != Fraction(1, _multiplicity_factor(x)):
                        diag_ok = False
        out.append(LeadingOrder(
            degree=mu,
            height=mu.height,
            min_length=min(len(x) for x in comp.rows),
            min_valuation=minval,
            bound_ok=bound_ok,
            diagonal_ok=diag_ok,
            height_rule=minval is not None and minval >= mu.height,
        ))
    return out


@dataclass
class BSeries:
    order: int
    terms: dict[int, list[tuple[tuple[int, ...], tuple[int, ...], Fraction]]]
    split: LeviSplit

    def render(self) -> str:
        lines = []
        for k in range(self.order + 1):
            entries = self.terms.get(k, [])
            body = " + ".join(
                (f"{render_word(self.split, x)} ⊗ {render_word(self.split, y)}" if c == 1
                 else f"{format_fraction(c)} * {render_word(self.split, x)} ⊗ {render_word(self.split, y)}")
                for x, y, c in entries
            ) or "0"
            lines.append(f"t^{k}: {body}")
        return "\n".join(lines) + "\n"

    def tensor_at(self, k: int) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
        return {(x, y): c for x, y, c in self.terms.get(k, [])}


def b_series(B: TwoTensor, order: int) -> BSeries:
    """Taylor expansion of B in t up to ``order``.

    Orders up to k are complete once every degree of height <= k * (max root
    height) is present, since a term x ⊗ y starts at t^ceil((|x|+|y|)/2).
    """
    need = order * B.split.max_root_height
    if B.height_cutoff < need:
        raise CutoffError(
            f"t-order {order} needs B up to height {need}, have {B.height_cutoff}", required=need
        )
    terms: dict[int, list] = {}
    for x, y, c in B.terms:
        if c.den[0] == 0:
            raise ArithmeticError(f"coefficient of {x} ⊗ {y} has a pole at t = 0")
        for k, v in enumerate(c.series(order)):
            if v != 0:
                terms.setdefault(k, []).append((x, y, v))
    return BSeries(order=order, terms=terms, split=B.split)


# --------------------------------------------------------------------------
# Module identity B.(nu ⊗ lambda)


@dataclass
class IdentityReport:
    passed: bool
    residuals: dict[DegreeVector, str]
    max_height: int


def momentum_identity_check(B: TwoTensor, split: LeviSplit | None = None, sign: int = 1) -> IdentityReport:
    """Check B.(nu ⊗ lambda) = nu ⊗ lambda + t sum_alpha e_{-alpha} nu ⊗ e_alpha.lambda.

    The left slot is U(n_-) acting on the Verma generator (each x is already a
    basis vector of M^+), the right slot is the coadjoint action on g^*.
    ``sign=-1`` checks the variant with -t instead, which fails for every
    nontrivial split.
    """
    split = B.split if split is None else split
    if B.height_cutoff < split.max_root_height:
        # y . lambda can be nonzero for y of any degree up to the highest root
        raise CutoffError(
            f"the identity needs B up to height {split.max_root_height}, have {B.height_cutoff}",
            required=split.max_root_height,
        )
    basis = split.basis
    lam = {k: v for k, v in enumerate(split.lambda_values) if v != 0}
    t = ScalarQt.t()

    def coadjoint_word(word, beta):
        for z in reversed(word):
            beta = basis.coadjoint(z, beta)
            if not beta:
                break
        return beta

    lhs: dict = {}
    for x, y, c in B.terms:
        beta = coadjoint_word(y, lam)
        for b, v in beta.items():
            key = (x, b)
            lhs[key] = lhs.get(key, ScalarQt(0)) + c * v
    rhs: dict = {}
    for b, v in lam.items():
        rhs[((), b)] = ScalarQt(v)
    for a in split.delta_plus:
        beta = basis.coadjoint(split.e_index[a], lam)
        for b, v in beta.items():
            key = ((split.f_index[a],), b)
            rhs[key] = rhs.get(key, ScalarQt(0)) + t * (sign * v)
    residuals: dict[DegreeVector, str] = {}
    passed = True
    for key in set(lhs) | set(rhs):
        diff = lhs.get(key, ScalarQt(0)) - rhs.get(key, ScalarQt(0))
        if not diff.is_zero():
            passed = False
            mu = split.word_degree(key[0])
            residuals[mu] = str(diff)
    return IdentityReport(passed=passed, residuals=residuals, max_height=B.height_cutoff)
