"""Functions on G, the star product f * g = m(B.(f (x) g)), and the identity suites.

Functions live in the free commutative polynomial algebra on symbols
X[b, h], where X[beta, h] stands for g -> beta(Ad_{g^-1} h).  A left-invariant
derivation x acts on a symbol through the coadjoint action on its first slot,
x.X[beta, h] = X[x.beta, h], and on products by the Leibniz rule.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .enveloping import E_BLOCK, F_BLOCK, H_BLOCK, LieBasis, LeviSplit
from .errors import ArgumentError, CutoffError
from .scalars import ScalarQt
from .shapovalov import TwoTensor

__all__ = [
    "CheckRecord",
    "GroupPoint",
    "OrbitFunction",
    "act",
    "act_word",
    "derivative_at",
    "evaluate",
    "group_point",
    "lemma_comp_check",
    "lemma_comp_rhs",
    "momentum_function",
    "poisson",
    "random_function",
    "random_group_point",
    "star",
    "verify_associativity",
    "verify_first_order",
    "verify_h_invariance",
    "verify_lemma_comp",
    "verify_momentum_map",
    "verify_order_zero",
    "verify_separation",
]

_ZERO = ScalarQt(0)


class OrbitFunction:
    """A polynomial in the symbols X[b, h] with `ScalarQt` coefficients.

    Symbol X[b, h] is encoded as the integer b * dim + h; a monomial is a
    sorted tuple of symbols.
    """

    __slots__ = ("basis", "terms")

    def __init__(self, basis: LieBasis, terms=None):
        self.basis = basis
        self.terms: dict[tuple[int, ...], ScalarQt] = {}
        if terms:
            for m, c in terms.items():
                c = ScalarQt.coerce(c)
                if not c.is_zero():
                    self.terms[tuple(sorted(m))] = c

    @classmethod
    def constant(cls, basis: LieBasis, value) -> "OrbitFunction":
        return cls(basis, {(): value})

    @classmethod
    def symbol(cls, basis: LieBasis, b: int, h: int) -> "OrbitFunction":
        return cls(basis, {(b * basis.dim + h,): 1})

    @classmethod
    def linear(cls, basis: LieBasis, beta: dict, h: int) -> "OrbitFunction":
        """X[beta, h] for beta given by its coordinates in the dual basis."""
        return cls(basis, {(b * basis.dim + h,): c for b, c in beta.items()})

    def split_symbol(self, s: int) -> tuple[int, int]:
        return divmod(s, self.basis.dim)

    # algebra

    def _new(self, terms: dict) -> "OrbitFunction":
        out = OrbitFunction(self.basis)
        out.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        return out

    def __add__(self, other: "OrbitFunction") -> "OrbitFunction":
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self) -> "OrbitFunction":
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, OrbitFunction):
            c = ScalarQt.coerce(other)
            return self._new({m: v * c for m, v in self.terms.items()})
        if not self.terms or not other.terms:
            return OrbitFunction(self.basis)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                v = c1 * c2
                terms[m] = terms[m] + v if m in terms else v
        return self._new(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "OrbitFunction":
        out = OrbitFunction.constant(self.basis, 1)
        for _ in range(n):
            out = out * self
        return out

    def _coerce(self, other) -> "OrbitFunction":
        if isinstance(other, OrbitFunction):
            return other
        return OrbitFunction.constant(self.basis, other)

    def __eq__(self, other):
        if not isinstance(other, OrbitFunction):
            other = self._coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((m, c.key()) for m, c in self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def coefficient_map(self, fn) -> "OrbitFunction":
        """Apply ``fn`` to every coefficient (e.g. to take a Taylor coefficient in t)."""
        return OrbitFunction(self.basis, {m: fn(c) for m, c in self.terms.items()})

    def taylor(self, k: int) -> "OrbitFunction":
        """The coefficient of t^k, as a function with rational coefficients."""
        return self.coefficient_map(lambda c: c.series(k)[k])

    def at_zero(self) -> "OrbitFunction":
        return self.taylor(0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        labels = self.basis.labels
        dim = self.basis.dim
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            syms = " ".join(f"X[{labels[s // dim]}*,{labels[s % dim]}]" for s in m) or "1"
            parts.append(f"({self.terms[m]}) {syms}")
        return " + ".join(parts)

    __repr__ = __str__

    def fingerprint(self) -> str:
        return hashlib.sha256(str(self).encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# Action of U(g) by left-invariant derivations


def _act_symbol(basis: LieBasis, x: int, s: int) -> list[tuple[int, Fraction]]:
    b, h = divmod(s, basis.dim)
    rules = basis.coadjoint_rules[x].get(b, ())
    return [(c * basis.dim + h, v) for c, v in rules]


def act(x: int, f: OrbitFunction) -> OrbitFunction:
    """The derivation x (a basis index) applied to f."""
    basis = f.basis
    terms: dict = {}
    cache: dict = {}
    for m, c in f.terms.items():
        for pos, s in enumerate(m):
            if pos and m[pos - 1] == s:
                continue  # repeated symbol: handled with multiplicity below
            mult = m.count(s)
            if s not in cache:
                cache[s] = _act_symbol(basis, x, s)
            if not cache[s]:
                continue
            rest = m[:pos] + m[pos + mult:] + (s,) * (mult - 1)
            for s2, v in cache[s]:
                mono = tuple(sorted(rest + (s2,)))
                val = c * (v * mult)
                terms[mono] = terms[mono] + val if mono in terms else val
    return f._new(terms)


def act_word(word, f: OrbitFunction, memo: dict | None = None) -> OrbitFunction:
    """u.f for a PBW word u = u_1 ... u_k: the rightmost letter acts first."""
    word = tuple(word)
    if memo is not None and word in memo:
        return memo[word]
    if not word:
        out = f
    else:
        inner = act_word(word[1:], f, memo)
        out = act(word[0], inner) if not inner.is_zero() else inner
    if memo is not None:
        memo[word] = out
    return out


def momentum_function(split: LeviSplit, h) -> OrbitFunction:
    """f_h = X[lambda, h]; ``h`` is a basis index or a dict of coordinates."""
    basis = split.basis
    lam = {b: v for b, v in enumerate(split.lambda_values) if v != 0}
    if isinstance(h, int):
        h = {h: Fraction(1)}
    out = OrbitFunction(basis)
    for k, ck in h.items():
        out = out + OrbitFunction.linear(basis, lam, k) * ck
    return out


def poisson(split: LeviSplit, f: OrbitFunction, g: OrbitFunction) -> OrbitFunction:
    """{f, g} = sum over Delta_+ of (e_{-a}.f)(e_a.g) - (e_a.f)(e_{-a}.g)."""
    out = OrbitFunction(f.basis)
    for a in split.delta_plus:
        fi, ei = split.f_index[a], split.e_index[a]
        out = out + act(fi, f) * act(ei, g) - act(ei, f) * act(fi, g)
    return out


# --------------------------------------------------------------------------
# Star product


def _kill_height(split: LeviSplit, f: OrbitFunction, block: int, limit: int, memo: dict) -> int | None:
    """First height k0 <= limit such that U(n)_mu kills f for every mu of height k0 .. k0+w-1.

    ``block`` selects U(n_-) or U(n_+) and w is the largest root height.
    Every PBW monomial of height >= k0 then has a suffix whose height lies in
    that window, so it kills f too.
    """
    width = split.max_root_height
    run = 0
    k = 0
    while k - run < limit:
        k += 1
        killed = all(
            act_word(w, f, memo).is_zero()
            for mu in split.degrees_of_height(k)
            for w in split.monomials(mu, block)
        )
        run = run + 1 if killed else 0
        if run == width:
            return k - width + 1
    return None


def star(B: TwoTensor, f: OrbitFunction, g: OrbitFunction) -> OrbitFunction:
    """f * g = sum over terms c x (x) y of c (x.f)(y.g), an exact finite sum.

    The sum stops below the first height window on which U(n_-) kills f or
    U(n_+) kills g; B must reach the height just below that window.
    """
    split = B.split
    memo_f: dict = {}
    memo_g: dict = {}
    cutoff = B.height_cutoff
    k_g = _kill_height(split, g, E_BLOCK, cutoff + 1, memo_g)
    k_f = _kill_height(split, f, F_BLOCK, (k_g or cutoff + 2) - 1, memo_f)
    candidates = [k for k in (k_f, k_g) if k is not None]
    if not candidates:
        # find the real requirement so the error can name it
        k_g = _kill_height(split, g, E_BLOCK, 8 * cutoff + 8, memo_g)
        need = None if k_g is None else k_g - 1
        raise CutoffError(
            f"star product needs B beyond height {cutoff}"
            + (f": the right factor is annihilated from height {k_g} on" if k_g else ""),
            required=need,
        )
    top = min(candidates) - 1
    out = f * g
    for mu, comp in B.components.items():
        if mu.height == 0 or mu.height > top:
            continue
        yg = [act_word(y, g, memo_g) for y in comp.cols]
        if all(v.is_zero() for v in yg):
            continue
        for i, x in enumerate(comp.rows):
            xf = act_word(x, f, memo_f)
            if xf.is_zero():
                continue
            inner = OrbitFunction(f.basis)
            for j, v in enumerate(yg):
                c = comp.coeffs[i][j]
                if not c.is_zero() and not v.is_zero():
                    inner = inner + v * c
            if not inner.is_zero():
                out = out + xf * inner
    return out


# --------------------------------------------------------------------------
# Group points and evaluation


def _matmul(a, b):
    n = len(a)
    m = len(b[0])
    cols = [[b[k][j] for k in range(len(b))] for j in range(m)]
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols] for row in a]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _exp_nilpotent(m, s):
    n = len(m)
    out = _identity(n)
    term = _identity(n)
    k = 0
    while True:
        k += 1
        term = _matmul(term, m)
        if all(v == 0 for row in term for v in row):
            return out
        if k > n:
            raise ArgumentError("ad matrix is not nilpotent")
        coef = Fraction(s) ** k / _factorial(k)
        out = [[o + coef * t for o, t in zip(ro, rt)] for ro, rt in zip(out, term)]


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


@dataclass
class GroupPoint:
    """g = prod exp(s * u_k) over the word, with Ad_g and Ad_{g^-1} as exact matrices.

    Matrix entry [k][j] is the u_k-coordinate of Ad(u_j).
    """

    word: tuple[tuple[int, Fraction], ...]
    ad_matrix: list[list[Fraction]]
    ad_inverse: list[list[Fraction]]


def group_point(basis, word=(), check: bool = True) -> GroupPoint:
    """Build a unipotent group point from (root-vector index, rational parameter) pairs.

    ``basis`` is a `LieBasis` or anything carrying one (algebra, split).
    """
    basis = getattr(basis, "basis", basis)
    word = tuple((int(k), Fraction(s)) for k, s in word)
    n = basis.dim
    ad = basis.ad_matrices
    fwd = _identity(n)
    inv = _identity(n)
    for k, s in word:
        if all(c == 0 for c in basis.weights[k]):
            raise ArgumentError(f"{basis.labels[k]} is not a root vector; only unipotent words are supported")
        fwd = _matmul(fwd, _exp_nilpotent(ad[k], s))
        inv = _matmul(_exp_nilpotent(ad[k], -s), inv)
    point = GroupPoint(word=word, ad_matrix=fwd, ad_inverse=inv)
    if check:
        check_automorphism(basis, point)
    return point


def check_automorphism(basis: LieBasis, point: GroupPoint) -> None:
    """Assert that Ad_g preserves brackets and the Killing form and inverts correctly."""
    n = basis.dim
    m = point.ad_matrix
    if _matmul(m, point.ad_inverse) != _identity(n):
        raise ArithmeticError("Ad_g and Ad_{g^-1} are not inverse")
    cols = [{k: m[k][j] for k in range(n) if m[k][j]} for j in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs: dict = {}
            for k, c in basis.table[i][j].items():
                for r, v in cols[k].items():
                    lhs[r] = lhs.get(r, 0) + c * v
            rhs = basis.bracket_vectors(cols[i], cols[j])
            if {k: v for k, v in lhs.items() if v} != rhs:
                raise ArithmeticError(f"Ad_g does not preserve [{basis.labels[i]}, {basis.labels[j]}]")
    kf = basis.killing_form
    for i in range(n):
        for j in range(i, n):
            val = sum((cols[i][a] * kf[a][b] * cols[j][b] for a in cols[i] for b in cols[j]), Fraction(0))
            if val != kf[i][j]:
                raise ArithmeticError("Ad_g does not preserve the Killing form")


def random_group_point(basis, rng: random.Random, length: int = 4, bound: int = 3) -> GroupPoint:
    basis = getattr(basis, "basis", basis)
    roots = [k for k in range(basis.dim) if any(basis.weights[k])]
    word = []
    for _ in range(length):
        s = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if s == 0:
            s = Fraction(1)
        word.append((rng.choice(roots), s))
    return group_point(basis, word)


def evaluate(f: OrbitFunction, p: GroupPoint) -> ScalarQt:
    """f(p), with X[b, h](p) = (Ad_{p^-1})[b][h].

    Terms sharing a coefficient denominator are summed as rationals first, so
    only one polynomial gcd is needed per distinct denominator.
    """
    dim = f.basis.dim
    inv = p.ad_inverse
    groups: dict = {}
    for m, c in f.terms.items():
        val = Fraction(1)
        for s in m:
            val *= inv[s // dim][s % dim]
            if not val:
                break
        if not val:
            continue
        key = c.den.coeffs()
        key = tuple(key)
        num, den = groups.get(key, (None, c.den))
        term = c.num * _fmpq(val)
        groups[key] = (term if num is None else num + term, den)
    total = ScalarQt(0)
    for num, den in groups.values():
        total = total + ScalarQt(num, den)
    return total


def _fmpq(q: Fraction):
    import flint

    return flint.fmpq(q.numerator, q.denominator)


def derivative_at(f: OrbitFunction, p: GroupPoint, x: int, degree_bound: int | None = None) -> ScalarQt:
    """d/ds f(p exp(s x)) at s = 0, by exact interpolation in s.

    s -> f(p exp(s x)) is a polynomial; it is sampled at enough integer points
    and the linear Lagrange coefficient is read off.  An oracle for `act`.
    """
    basis = f.basis
    if degree_bound is None:
        degree_bound = f.degree * basis.dim
    xs = list(range(-(degree_bound // 2), degree_bound - degree_bound // 2 + 1))
    ys = [evaluate(f, group_point(basis, p.word + ((x, s),), check=False)) for s in xs]
    # derivative at 0 of the interpolating polynomial: sum_i y_i L_i'(0)
    total = ScalarQt(0)
    for i, xi in enumerate(xs):
        others = [xj for j, xj in enumerate(xs) if j != i]
        denom = Fraction(1)
        for xj in others:
            denom *= xi - xj
        # L_i(s) = prod (s - xj) / denom; L_i'(0) = sum_k prod_{j != k} (-xj) / denom
        deriv = Fraction(0)
        for k in range(len(others)):
            prod = Fraction(1)
            for j, xj in enumerate(others):
                if j != k:
                    prod *= -xj
            deriv += prod
        if deriv:
            total = total + ys[i] * (deriv / denom)
    return total


# --------------------------------------------------------------------------
# Random inputs


def random_function(basis: LieBasis, rng: random.Random, degree: int, terms: int = 3,
                    symbols=None, bound: int = 3) -> OrbitFunction:
    """A random polynomial of total degree <= ``degree`` with small integer coefficients."""
    n = basis.dim
    pool = list(symbols) if symbols is not None else list(range(n * n))
    out = {}
    for _ in range(terms):
        d = rng.randint(1, degree)
        mono = tuple(sorted(rng.choice(pool) for _ in range(d)))
        c = rng.randint(-bound, bound) or 1
        out[mono] = out.get(mono, 0) + c
    out[()] = rng.randint(-bound, bound)
    return OrbitFunction(basis, out)


def random_momentum_polynomial(split: LeviSplit, rng: random.Random, degree: int,
                               terms: int = 3, bound: int = 3) -> OrbitFunction:
    """A random polynomial of degree <= ``degree`` in the momentum functions f_h."""
    basis = split.basis
    gens = [momentum_function(split, h) for h in range(basis.dim)]
    gens = [g for g in gens if not g.is_zero()]
    out = OrbitFunction.constant(basis, rng.randint(-bound, bound))
    for _ in range(terms):
        d = rng.randint(1, degree)
        mono = OrbitFunction.constant(basis, rng.randint(-bound, bound) or 1)
        for _ in range(d):
            mono = mono * rng.choice(gens)
        out = out + mono
    return out


# --------------------------------------------------------------------------
# Verification suites


@dataclass
class CheckRecord:
    check_id: str
    inputs: str
    residual: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"check_id": self.check_id, "inputs": self.inputs, "residual": self.residual,
               "pass": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


def _fp(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(str(p).encode())
        h.update(b"|")
    return h.hexdigest()[:16]


def _record(check_id, inputs, residual, detail="") -> CheckRecord:
    if isinstance(residual, (OrbitFunction, ScalarQt)):
        zero = residual.is_zero()
    else:
        zero = not residual
    return CheckRecord(check_id, inputs, "0" if zero else str(residual), zero, detail)


def lemma_comp_rhs(split: LeviSplit, f: OrbitFunction, fh: OrbitFunction, sign: int = 1) -> OrbitFunction:
    """f.f_h + sign * t * sum over Delta_+ of (e_{-a}.f)(e_a.f_h)."""
    t = ScalarQt.t() * sign
    out = f * fh
    for a in split.delta_plus:
        out = out + act(split.f_index[a], f) * act(split.e_index[a], fh) * t
    return out


def lemma_comp_check(B: TwoTensor, f: OrbitFunction, h: int, sign: int = 1) -> OrbitFunction:
    """Residual of f * f_h against the closed form (zero when the identity holds)."""
    split = B.split
    fh = momentum_function(split, h)
    return star(B, f, fh) - lemma_comp_rhs(split, f, fh, sign)


def verify_lemma_comp(B: TwoTensor, samples, sign: int = 1) -> list[CheckRecord]:
    split = B.split
    out = []
    for n, f in enumerate(samples):
        for h in range(split.basis.dim):
            res = lemma_comp_check(B, f, h, sign)
            out.append(_record("lemma_comp", _fp(f.fingerprint(), h, sign), res,
                               f"sample {n}, h={split.basis.labels[h]}"))
    return out


def verify_momentum_map(B: TwoTensor, samples, split: LeviSplit | None = None) -> list[CheckRecord]:
    """f_h * f - f * f_h - t {f_h, f} = 0 for every basis h and sample f."""
    split = B.split if split is None else split
    t = ScalarQt.t()
    out = []
    for n, f in enumerate(samples):
        for h in range(split.basis.dim):
            fh = momentum_function(split, h)
            res = star(B, fh, f) - star(B, f, fh) - poisson(split, fh, f) * t
            out.append(_record("momentum_map", _fp(f.fingerprint(), h), res,
                               f"sample {n}, h={split.basis.labels[h]}"))
    return out


def separation_generators(split: LeviSplit, side: str = "minus") -> list[OrbitFunction]:
    """Symbols X[beta_u, h] killed by every e_{-a} (side 'minus') or every e_a ('plus').

    u is the root vector of -theta (resp. theta), theta the highest root of
    Delta_+, and beta_u = K(u, .) via the Killing form.
    """
    basis = split.basis
    theta = max(split.delta_plus, key=lambda a: (split.root_degrees[a].height, split.root_degrees[a].coeffs))
    u = split.f_index[theta] if side == "minus" else split.e_index[theta]
    kf = basis.killing_form
    beta = {b: kf[u][b] for b in range(basis.dim) if kf[u][b]}
    return [OrbitFunction.linear(basis, beta, h) for h in range(basis.dim)]


def verify_separation(B: TwoTensor, samples, split: LeviSplit | None = None,
                      rng: random.Random | None = None) -> list[CheckRecord]:
    """f * g = fg for n_--killed f, and g * f' = g f' for n_+-killed f'."""
    split = B.split if split is None else split
    rng = rng or random.Random(0)
    out = []
    for side in ("minus", "plus"):
        gens = separation_generators(split, side)
        block, letters = (F_BLOCK, split.f_index) if side == "minus" else (E_BLOCK, split.e_index)
        for n, g in enumerate(samples):
            a, b = rng.sample(range(len(gens)), 2)
            f = gens[a] * gens[b] + gens[rng.randrange(len(gens))] * rng.randint(1, 3) + 1
            killed = all(act(letters[r], f).is_zero() for r in split.delta_plus)
            if side == "minus":
                res = star(B, f, g) - f * g
            else:
                res = star(B, g, f) - g * f
            rec = _record(f"separation_{side}", _fp(f.fingerprint(), g.fingerprint()), res, f"sample {n}")
            if not killed:
                rec.passed = False
                rec.detail += "; generator not annihilated"
            out.append(rec)
    return out


def verify_associativity(B: TwoTensor, triples, points) -> list[CheckRecord]:
    """(f * g) * h - f * (g * h), evaluated exactly at each group point."""
    out = []
    for n, (f, g, h) in enumerate(triples):
        lhs = star(B, star(B, f, g), h)
        rhs = star(B, f, star(B, g, h))
        diff = lhs - rhs
        # each parameter s enters Ad_{p^-1} with degree <= dim - 1
        bound = max(lhs.degree, rhs.degree) * (f.basis.dim - 1)
        for k, p in enumerate(points):
            val = evaluate(diff, p)
            out.append(_record("associativity", _fp(f.fingerprint(), g.fingerprint(), h.fingerprint(), k),
                               val, f"triple {n}, point {k}, degree bound per parameter {bound}"))
    return out


def symbol_associativity(B: TwoTensor, f, g, h) -> OrbitFunction:
    """The residual in the free model (diagnostic only; it need not vanish)."""
    return star(B, star(B, f, g), h) - star(B, f, star(B, g, h))


def verify_order_zero(B: TwoTensor, pairs) -> list[CheckRecord]:
    """f * g - fg vanishes at t = 0."""
    out = []
    for f, g in pairs:
        res = (star(B, f, g) - f * g).at_zero()
        out.append(_record("order_zero", _fp(f.fingerprint(), g.fingerprint()), res))
    return out


def verify_first_order(B: TwoTensor, pairs) -> list[CheckRecord]:
    """The t-coefficient of f * g - g * f is {f, g}."""
    split = B.split
    out = []
    for f, g in pairs:
        comm = star(B, f, g) - star(B, g, f)
        res = comm.taylor(1) - poisson(split, f, g)
        out.append(_record("first_order", _fp(f.fingerprint(), g.fingerprint()), res))
    return out


def verify_h_invariance(B: TwoTensor, pairs) -> list[CheckRecord]:
    """Every Levi-block derivation annihilates f * g for momentum-generated f, g."""
    split = B.split
    levi = split.basis.block_indices(H_BLOCK)
    out = []
    for f, g in pairs:
        prod = star(B, f, g)
        moved = (act(z, prod) for z in levi)
        worst = next((r for r in moved if not r.is_zero()), OrbitFunction(f.basis))
        out.append(_record("h_invariance", _fp(f.fingerprint(), g.fingerprint()), worst))
    return out
