"""Chevalley bases, the split of the roots determined by lambda, and PBW rewriting.

A `LieBasis` is an ordered basis with a bracket table.  Its order is the PBW
order: the n_- block first, then the Levi block (Cartan plus the root spaces
on which lambda vanishes), then the n_+ block.  Words of basis indices in
nondecreasing order are PBW monomials; `PBWAlgebra` rewrites arbitrary words
into that normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import (
    ArgumentError,
    DegenerateOrbitError,
    InternalConsistencyError,
)
from .rootsys import DegreeVector, RootSystem, Weight
from .scalars import format_fraction

__all__ = [
    "F_BLOCK",
    "H_BLOCK",
    "E_BLOCK",
    "ChevalleyAlgebra",
    "LeviSplit",
    "LieBasis",
    "PBWAlgebra",
    "UEAElement",
    "antipode",
    "centralizer_split",
    "chevalley_constants",
    "hc_project",
    "normalize_root_vectors",
    "pbw_normal_form",
]

F_BLOCK, H_BLOCK, E_BLOCK = 0, 1, 2
_BLOCK_NAMES = {F_BLOCK: "f", H_BLOCK: "h", E_BLOCK: "e"}


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vneg(u):
    return tuple(-a for a in u)


def _root_label(prefix: str, root) -> str:
    return f"{prefix}(" + ",".join(str(c) for c in root) + ")"


# --------------------------------------------------------------------------
# Lie algebra bases


@dataclass
class LieBasis:
    """Ordered basis of a Lie algebra with exact structure constants.

    ``table[i][j]`` maps k to the coefficient of basis element k in [u_i, u_j].
    ``weights`` are root-lattice weights in simple-root coordinates, ``blocks``
    assigns each element to the n_-, Levi or n_+ block.
    """

    labels: list[str]
    weights: list[tuple[int, ...]]
    blocks: list[int]
    table: list[list[dict[int, Fraction]]]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table[i][j]

    def bracket_vectors(self, u: dict[int, Fraction], v: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.table[i][j].items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c != 0}

    def block_indices(self, block: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if b == block]

    @cached_property
    def ad_matrices(self) -> list[list[list[Fraction]]]:
        """ad(u_i) as a dense matrix: entry [k][j] is the u_k-coefficient of [u_i, u_j]."""
        n = self.dim
        mats = []
        for i in range(n):
            m = [[Fraction(0)] * n for _ in range(n)]
            for j in range(n):
                for k, c in self.table[i][j].items():
                    m[k][j] = c
            mats.append(m)
        return mats

    @cached_property
    def coadjoint_rules(self) -> list[dict[int, list[tuple[int, Fraction]]]]:
        """rules[x][b] lists (c, coeff) with x.(u_b^*) = sum coeff * u_c^*.

        The coadjoint action is (x.beta)(u) = -beta([x, u]).
        """
        n = self.dim
        rules: list[dict[int, list[tuple[int, Fraction]]]] = []
        for x in range(n):
            rx: dict[int, list[tuple[int, Fraction]]] = {}
            for j in range(n):
                for b, c in self.table[x][j].items():
                    rx.setdefault(b, []).append((j, -c))
            rules.append(rx)
        return rules

    def coadjoint(self, x: int, beta: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        rules = self.coadjoint_rules[x]
        for b, cb in beta.items():
            for c, coeff in rules.get(b, ()):
                out[c] = out.get(c, 0) + cb * coeff
        return {k: v for k, v in out.items() if v != 0}

    @cached_property
    def killing_form(self) -> list[list[Fraction]]:
        ad = self.ad_matrices
        n = self.dim
        return [
            [sum((ad[i][a][b] * ad[j][b][a] for a in range(n) for b in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]

    def check_antisymmetry(self) -> None:
        for i in range(self.dim):
            for j in range(i, self.dim):
                a = self.table[i][j]
                b = self.table[j][i]
                if set(a) != set(b) or any(a[k] != -b[k] for k in a):
                    raise InternalConsistencyError(
                        f"antisymmetry fails for [{self.labels[i]}, {self.labels[j]}]"
                    )

    def jacobi_failures(self, limit: int | None = None) -> list[tuple[int, int, int]]:
        """Basis triples violating Jacobi; distinct unordered triples suffice by antisymmetry."""
        bad = []
        unit = [{i: Fraction(1)} for i in range(self.dim)]
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total: dict[int, Fraction] = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.table[b][c]
                if not inner:
                    continue
                for m, v in self.bracket_vectors(unit[a], inner).items():
                    total[m] = total.get(m, 0) + v
            if any(v != 0 for v in total.values()):
                bad.append((i, j, k))
                if limit is not None and len(bad) >= limit:
                    break
        return bad


# --------------------------------------------------------------------------
# Chevalley basis


@dataclass
class ChevalleyAlgebra:
    """Chevalley basis {e_alpha, f_alpha = e_{-alpha}, h_i} with integer structure constants."""

    rs: RootSystem
    basis: LieBasis
    index: dict  # root tuple or ("h", i) -> basis index
    n_constants: dict[tuple[tuple[int, ...], tuple[int, ...]], int]

    @cached_property
    def keys(self) -> list:
        out = [None] * self.basis.dim
        for k, i in self.index.items():
            out[i] = k
        return out

    @property
    def dim(self) -> int:
        return self.basis.dim

    def root_vector(self, root) -> int:
        return self.index[tuple(root)]

    def cartan(self, i: int) -> int:
        return self.index[("h", i)]

    def coroot_vector(self, root) -> dict[int, Fraction]:
        """h_alpha = [e_alpha, e_{-alpha}] as a combination of the h_i (any root alpha)."""
        root = tuple(root)
        positive = root in set(self.rs.positive_roots)
        base = root if positive else _vneg(root)
        coeffs = self.rs.coroot_coefficients(base)
        sign = 1 if positive else -1
        return {self.cartan(i): Fraction(sign * c) for i, c in enumerate(coeffs) if c}


def _structure_constants(rs: RootSystem) -> dict:
    """N_{alpha,beta} for all pairs of roots with alpha + beta a root.

    Extraspecial pairs get N = +(p + 1); everything else is forced by the
    standard relations among Chevalley structure constants.
    """
    pos = list(rs.positive_roots)
    pos_set = set(pos)
    order = {r: k for k, r in enumerate(pos)}
    roots = rs.root_set
    norm = {r: rs.pair(r, r) for r in rs.roots}
    n_pos: dict = {}

    def p_value(a, b):
        p = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while cur in roots:
            p += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        return p

    def n_any(x, y):
        s = _vadd(x, y)
        if s not in roots:
            return Fraction(0)
        xp, yp = x in pos_set, y in pos_set
        if xp and yp:
            return n_pos[(x, y)]
        if not xp and not yp:
            return -n_any(_vneg(x), _vneg(y))
        z = _vneg(s)
        zp = z in pos_set
        # x + y + z = 0:  N_xy/(z,z) = N_yz/(x,x) = N_zx/(y,y)
        if zp == yp:
            return norm[z] / norm[x] * n_any(y, z)
        return norm[z] / norm[y] * n_any(z, x)

    for xi in pos:
        if sum(xi) == 1:
            continue
        pairs = []
        for a in pos:
            b = tuple(x - y for x, y in zip(xi, a))
            if b in pos_set and order[a] < order[b]:
                pairs.append((a, b))
        pairs.sort(key=lambda ab: order[ab[0]])
        a0, b0 = pairs[0]
        n0 = Fraction(p_value(a0, b0) + 1)
        n_pos[(a0, b0)] = n0
        n_pos[(b0, a0)] = -n0
        for a, b in pairs[1:]:
            t1 = Fraction(0)
            if _vadd(b, _vneg(a0)) in roots:
                t1 = n_any(b, _vneg(a0)) * n_any(a, _vneg(b0)) / norm[_vadd(b, _vneg(a0))]
            t2 = Fraction(0)
            if _vadd(a, _vneg(a0)) in roots:
                t2 = n_any(_vneg(a0), a) * n_any(b, _vneg(b0)) / norm[_vadd(a, _vneg(a0))]
            val = norm[xi] / n0 * (t1 + t2)
            n_pos[(a, b)] = val
            n_pos[(b, a)] = -val

    full = {}
    for x in rs.roots:
        for y in rs.roots:
            s = _vadd(x, y)
            if s in roots:
                v = n_any(x, y)
                if v.denominator != 1:
                    raise InternalConsistencyError(f"non-integral structure constant N{x},{y} = {v}")
                full[(x, y)] = int(v)
    return full


def chevalley_constants(rs: RootSystem, check: bool = True) -> ChevalleyAlgebra:
    """Build the Chevalley basis of the simple Lie algebra with root system ``rs``.

    Basis order: f_alpha for positive alpha by (height, coordinates), then
    h_1..h_r, then e_alpha in the same root order.  With ``check`` the
    antisymmetry and Jacobi identities are verified on all basis triples.
    """
    r = rs.rank
    pos = list(rs.positive_roots)
    labels, weights, blocks, keys = [], [], [], []
    for a in pos:
        labels.append(_root_label("f", a))
        weights.append(_vneg(a))
        blocks.append(F_BLOCK)
        keys.append(_vneg(a))
    for i in range(r):
        labels.append(f"h{i + 1}")
        weights.append((0,) * r)
        blocks.append(H_BLOCK)
        keys.append(("h", i))
    for a in pos:
        labels.append(_root_label("e", a))
        weights.append(tuple(a))
        blocks.append(E_BLOCK)
        keys.append(tuple(a))
    index = {k: n for n, k in enumerate(keys)}
    dim = len(keys)
    nconst = _structure_constants(rs)
    table: list[list[dict[int, Fraction]]] = [[{} for _ in range(dim)] for _ in range(dim)]
    for i, ki in enumerate(keys):
        for j, kj in enumerate(keys):
            hi = isinstance(ki[0], str)
            hj = isinstance(kj[0], str)
            if hi and hj:
                continue
            if hi:
                c = rs.coroot_pairing(kj, ki[1])
                if c:
                    table[i][j] = {j: Fraction(c)}
                continue
            if hj:
                c = rs.coroot_pairing(ki, kj[1])
                if c:
                    table[i][j] = {i: Fraction(-c)}
                continue
            s = _vadd(ki, kj)
            if all(x == 0 for x in s):
                positive = ki in set(pos)
                base = ki if positive else kj
                sign = 1 if positive else -1
                coeffs = rs.coroot_coefficients(base)
                table[i][j] = {index[("h", m)]: Fraction(sign * c) for m, c in enumerate(coeffs) if c}
            elif s in rs.root_set:
                table[i][j] = {index[s]: Fraction(nconst[(ki, kj)])}
    basis = LieBasis(labels=labels, weights=weights, blocks=blocks, table=table)
    alg = ChevalleyAlgebra(rs=rs, basis=basis, index=index, n_constants=nconst)
    if check:
        basis.check_antisymmetry()
        bad = basis.jacobi_failures(limit=1)
        if bad:
            i, j, k = bad[0]
            raise InternalConsistencyError(
                f"Jacobi identity fails on ({labels[i]}, {labels[j]}, {labels[k]})"
            )
    return alg


# --------------------------------------------------------------------------
# The split determined by lambda


@dataclass
class LeviSplit:
    """Roots moved by lambda split into Delta_+ / Delta_-, with the matching PBW basis.

    ``basis`` is ordered n_- | Levi | n_+ and element k equals
    ``scales[k]`` times Chevalley element ``source[k]``.  Degrees of U(n_pm)
    monomials are recorded in the coordinates of ``simple_roots``, the simple
    system of a positive system containing Delta_+.
    """

    alg: ChevalleyAlgebra
    lam: tuple[Fraction, ...]
    delta_plus: tuple[tuple[int, ...], ...]
    levi_roots: tuple[tuple[int, ...], ...]
    simple_roots: tuple[tuple[int, ...], ...]
    basis: LieBasis
    source: list[int]
    scales: list[Fraction]
    normalized: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rs(self) -> RootSystem:
        return self.alg.rs

    @property
    def rank(self) -> int:
        return self.alg.rs.rank

    @property
    def delta_minus(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_vneg(a) for a in self.delta_plus)

    @property
    def delta(self) -> tuple[tuple[int, ...], ...]:
        return self.delta_plus + self.delta_minus

    @property
    def is_regular(self) -> bool:
        return not self.levi_roots

    @cached_property
    def lambda_weight(self) -> Weight:
        """lambda as a weight in simple-root coordinates (its Dynkin labels are lam)."""
        return self.rs.from_fundamental(self.lam)

    @cached_property
    def f_index(self) -> dict[tuple[int, ...], int]:
        """alpha in Delta_+ -> basis index of the normalized e_{-alpha}."""
        return {a: self.basis.blocks.index(F_BLOCK) + k for k, a in enumerate(self.delta_plus)}

    @cached_property
    def e_index(self) -> dict[tuple[int, ...], int]:
        start = self.basis.blocks.index(E_BLOCK)
        return {a: start + k for k, a in enumerate(self.delta_plus)}

    @cached_property
    def cartan_indices(self) -> list[int]:
        return [k for k in range(self.basis.dim) if self.basis.weights[k] == (0,) * self.rank]

    def lambda_value(self, k: int) -> Fraction:
        """lambda evaluated on basis element k (zero on every root vector)."""
        key = self.alg.keys[self.source[k]]
        if isinstance(key[0], str):
            return self.scales[k] * self.lam[key[1]]
        return Fraction(0)

    @cached_property
    def lambda_values(self) -> list[Fraction]:
        return [self.lambda_value(k) for k in range(self.basis.dim)]

    @cached_property
    def _to_split_coords(self):
        from .rootsys import _invert

        s = [[Fraction(x) for x in row] for row in self.simple_roots]
        return _invert(s)

    def split_degree(self, weight) -> tuple[int, ...]:
        """Coordinates of a root-lattice vector in the split simple roots."""
        inv = self._to_split_coords
        out = []
        for j in range(self.rank):
            c = sum((Fraction(weight[i]) * inv[i][j] for i in range(self.rank)), Fraction(0))
            if c.denominator != 1:
                raise InternalConsistencyError(f"non-integral split coordinates for {weight}")
            out.append(int(c))
        return tuple(out)

    @cached_property
    def root_degrees(self) -> dict[tuple[int, ...], DegreeVector]:
        return {a: DegreeVector(self.split_degree(a)) for a in self.delta_plus}

    @cached_property
    def max_root_height(self) -> int:
        return max(d.height for d in self.root_degrees.values())

    def word_degree(self, word) -> DegreeVector:
        """Degree of a U(n_-) or U(n_+) monomial (each letter contributes its root)."""
        total = [0] * self.rank
        for k in word:
            w = self.basis.weights[k]
            if self.basis.blocks[k] == F_BLOCK:
                w = _vneg(w)
            for i, c in enumerate(self.split_degree(w)):
                total[i] += c
        return DegreeVector(tuple(total))

    def degrees_of_height(self, height: int) -> list[DegreeVector]:
        """Degrees of the given height carrying a nonzero U(n_-) component."""
        key = ("deg", height)
        if key not in self._cache:
            found = {DegreeVector(tuple(sum(c) for c in zip(*[self.root_degrees[a].coeffs for a in combo])))
                     if combo else DegreeVector.zero(self.rank)
                     for combo in self._root_multisets_of_height(height)}
            self._cache[key] = sorted(found, key=lambda d: d.coeffs)
        return self._cache[key]

    def _root_multisets_of_height(self, height: int):
        roots = sorted(self.delta_plus, key=lambda a: self.root_degrees[a].height)

        def rec(start, remaining):
            if remaining == 0:
                yield ()
                return
            for k in range(start, len(roots)):
                h = self.root_degrees[roots[k]].height
                if h <= remaining:
                    for rest in rec(k, remaining - h):
                        yield (roots[k],) + rest

        return rec(0, height)

    def monomials(self, mu: DegreeVector, block: int) -> list[tuple[int, ...]]:
        """PBW basis of U(n_-)_mu (block F) or U(n_+)_mu (block E), in matching order.

        Both lists are indexed by the same multisets of Delta_+ roots, so the
        i-th n_- monomial and the i-th n_+ monomial involve the same roots.
        """
        key = ("mono", mu.coeffs, block)
        if key in self._cache:
            return self._cache[key]
        order = sorted(self.delta_plus, key=lambda a: self.f_index[a])
        index = self.f_index if block == F_BLOCK else self.e_index
        target = mu.coeffs
        out = []

        def rec(k, remaining, acc):
            if all(c == 0 for c in remaining):
                out.append(tuple(acc))
                return
            if k == len(order):
                return
            d = self.root_degrees[order[k]].coeffs
            # use root k some number of times (including zero), then move on
            m = 0
            rem = remaining
            while all(x >= 0 for x in rem):
                rec(k + 1, rem, acc + [index[order[k]]] * m)
                m += 1
                rem = tuple(x - y for x, y in zip(rem, d))

        rec(0, target, [])
        out.sort(key=lambda w: (len(w), w))
        self._cache[key] = out
        return out

    def min_length(self, mu: DegreeVector) -> int | None:
        """Smallest number of Delta_+ roots summing to mu (None if mu is unreachable)."""
        words = self.monomials(mu, F_BLOCK)
        return min((len(w) for w in words), default=None)

    def fingerprint(self) -> str:
        return ";".join(format_fraction(s) for s in self.scales)


def _split_positive_system(rs: RootSystem, lam_pair: dict) -> tuple[list, list, list]:
    delta_plus, levi = [], []
    for a in rs.roots:
        v = lam_pair[a]
        if v > 0:
            delta_plus.append(a)
        elif v == 0:
            levi.append(a)
    # tie-break inside the Levi factor by the standard height
    full_pos = delta_plus + [a for a in levi if sum(a) > 0]
    full_set = set(full_pos)
    simple = [a for a in full_pos
              if not any(tuple(x - y for x, y in zip(a, b)) in full_set for b in full_pos)]
    return delta_plus, levi, simple


def centralizer_split(alg: ChevalleyAlgebra, lam) -> LeviSplit:
    """Split the roots by the sign of alpha(x_lambda) for lambda given by its values on h_i.

    Delta_+ = {alpha : alpha(x_lambda) > 0}; the roots with alpha(x_lambda) = 0
    together with the Cartan subalgebra span the stabilizer of lambda.
    """
    rs = alg.rs
    lam = tuple(Fraction(x) for x in lam)
    if len(lam) != rs.rank:
        raise ArgumentError(f"lambda needs {rs.rank} values, got {len(lam)}")
    if all(x == 0 for x in lam):
        raise DegenerateOrbitError("lambda = 0: the coadjoint orbit is a point")
    # alpha(x_lambda) is a positive multiple of (lambda, alpha) = sum_i c_i d_i lambda(h_i)
    d = [rs.form_matrix[i][i] / 2 for i in range(rs.rank)]
    lam_pair = {a: sum((a[i] * d[i] * lam[i] for i in range(rs.rank)), Fraction(0)) for a in rs.roots}
    delta_plus, levi, simple = _split_positive_system(rs, lam_pair)
    if len(simple) != rs.rank:
        raise InternalConsistencyError("split positive system has the wrong number of simple roots")

    from .rootsys import _invert

    simple_inv = _invert([[Fraction(x) for x in row] for row in simple])

    def split_coords(a):
        return tuple(int(sum((Fraction(a[i]) * simple_inv[i][j] for i in range(rs.rank)), Fraction(0)))
                     for j in range(rs.rank))

    def root_key(a):
        c = split_coords(a)
        return (sum(c), c)

    dp = sorted(delta_plus, key=root_key)
    levi_pos = sorted([a for a in levi if sum(a) > 0], key=root_key)
    order = (
        [_vneg(a) for a in dp]
        + [_vneg(a) for a in levi_pos]
        + [("h", i) for i in range(rs.rank)]
        + levi_pos
        + dp
    )
    blocks = [F_BLOCK] * len(dp) + [H_BLOCK] * (2 * len(levi_pos) + rs.rank) + [E_BLOCK] * len(dp)
    source = [alg.index[k] for k in order]
    scales = [Fraction(1)] * len(order)
    basis = _rebase(alg.basis, source, scales, blocks)
    split = LeviSplit(
        alg=alg,
        lam=lam,
        delta_plus=tuple(dp),
        levi_roots=tuple(sorted(levi, key=lambda a: (sum(a), a))),
        simple_roots=tuple(simple),
        basis=basis,
        source=source,
        scales=scales,
    )
    # lambda must vanish on [h, h], which contains the coroots of the Levi roots
    for b in split.levi_roots:
        hb = alg.coroot_vector(b)
        val = sum((c * lam[alg.keys[i][1]] for i, c in hb.items()), Fraction(0))
        if val != 0:
            raise InternalConsistencyError(f"lambda does not vanish on [h, h] (root {b})")
    return split


def _rebase(base: LieBasis, source: list[int], scales: list[Fraction], blocks: list[int]) -> LieBasis:
    """Structure constants of the basis {scales[k] * base[source[k]]}."""
    pos = {s: k for k, s in enumerate(source)}
    n = len(source)
    table: list[list[dict[int, Fraction]]] = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            br = base.table[source[i]][source[j]]
            if not br:
                continue
            table[i][j] = {pos[m]: scales[i] * scales[j] * c / scales[pos[m]] for m, c in br.items()}
    weights = [base.weights[s] for s in source]
    labels = [
        base.labels[s] if all(c == 0 for c in w) else _root_label("e", w)
        for s, w in zip(source, weights)
    ]
    return LieBasis(labels=labels, weights=weights, blocks=blocks, table=table)


def normalize_root_vectors(split: LeviSplit) -> LeviSplit:
    """Rescale each e_{-alpha} (alpha in Delta_+) so that lambda([e_{-alpha}, e_alpha]) = 1."""
    b = split.basis
    lamv = split.lambda_values
    new_scales = list(split.scales)
    changed = False
    for a in split.delta_plus:
        fi, ei = split.f_index[a], split.e_index[a]
        val = sum((c * lamv[k] for k, c in b.table[fi][ei].items()), Fraction(0))
        if val == 0:
            raise InternalConsistencyError(f"lambda([e_-alpha, e_alpha]) = 0 for alpha = {a}")
        if val != 1:
            new_scales[fi] = split.scales[fi] / val
            changed = True
    if not changed:
        out = split
    else:
        blocks = list(b.blocks)
        basis = _rebase(split.alg.basis, split.source, new_scales, blocks)
        out = LeviSplit(
            alg=split.alg,
            lam=split.lam,
            delta_plus=split.delta_plus,
            levi_roots=split.levi_roots,
            simple_roots=split.simple_roots,
            basis=basis,
            source=split.source,
            scales=new_scales,
        )
    lamv = out.lambda_values
    for a in out.delta_plus:
        for c in out.delta_plus:
            val = sum((x * lamv[k] for k, x in out.basis.table[out.f_index[a]][out.e_index[c]].items()),
                      Fraction(0))
            if val != (1 if a == c else 0):
                raise InternalConsistencyError(f"normalization fails on ({a}, {c}): {val}")
    out.normalized = True
    return out


# --------------------------------------------------------------------------
# Universal enveloping algebra


class UEAElement:
    """Element of U(g) as a map from PBW words (nondecreasing index tuples) to rationals."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: LieBasis, terms=None):
        self.basis = basis
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for w, c in terms.items():
                if c != 0:
                    self.terms[tuple(w)] = Fraction(c)

    @classmethod
    def one(cls, basis: LieBasis) -> "UEAElement":
        return cls(basis, {(): 1})

    @classmethod
    def generator(cls, basis: LieBasis, k: int) -> "UEAElement":
        return cls(basis, {(k,): 1})

    def is_normal(self) -> bool:
        return all(all(w[i] <= w[i + 1] for i in range(len(w) - 1)) for w in self.terms)

    def grades(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        zero = (0,) * len(self.basis.weights[0])
        out = {}
        for w in self.terms:
            g = zero
            for k in w:
                g = _vadd(g, self.basis.weights[k])
            out[w] = g
        return out

    def __add__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return UEAElement(self.basis, out)

    def __neg__(self):
        return UEAElement(self.basis, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UEAElement":
        return UEAElement(self.basis, {w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self, word) -> list[list[int]]:
        """Exponent vectors of a PBW word over the f, h and e blocks."""
        out = []
        for block in (F_BLOCK, H_BLOCK, E_BLOCK):
            idx = self.basis.block_indices(block)
            out.append([word.count(i) for i in idx])
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            exps = self.exponents(w)
            mono = " ".join(
                f"{_BLOCK_NAMES[b]}[{','.join(str(x) for x in e)}]"
                for b, e in zip((F_BLOCK, H_BLOCK, E_BLOCK), exps)
            )
            parts.append(f"{format_fraction(self.terms[w])} * {mono}")
        return " + ".join(parts)

    __repr__ = __str__


class PBWAlgebra:
    """Normal ordering in U(g) for a fixed `LieBasis`.

    A generator is inserted into a normal word by commuting it to the right
    until it sits in order; the commutators it emits are inserted in turn.
    Results are memoized per (generator, word).  The cache only grows, and a
    given key always maps to the same value.
    """

    def __init__(self, basis: LieBasis):
        self.basis = basis
        self._insert_memo: dict = {}
        self._insert_mod_memo: dict = {}

    def insert(self, g: int, word: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
        """Normal form of u_g * word for a normal ``word``."""
        key = (g, word)
        memo = self._insert_memo
        if key in memo:
            return memo[key]
        if not word or g <= word[0]:
            res = {(g,) + word: Fraction(1)}
            memo[key] = res
            return res
        x, rest = word[0], word[1:]
        out: dict[tuple[int, ...], Fraction] = {}
        for w, c in self.insert(g, rest).items():
            for w2, c2 in self.insert(x, w).items():
                out[w2] = out.get(w2, 0) + c * c2
        for k, ck in self.basis.table[g][x].items():
            for w2, c2 in self.insert(k, rest).items():
                out[w2] = out.get(w2, 0) + ck * c2
        res = {w: c for w, c in out.items() if c != 0}
        memo[key] = res
        return res

    def insert_mod_left_ideal(self, g: int, word: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
        """Like `insert`, modulo the left ideal U(g) n_+ (words ending in n_+ are dropped).

        ``word`` must itself contain no n_+ letter.  Valid because only left
        multiplications are performed and U(g) n_+ is a left ideal.
        """
        key = (g, word)
        memo = self._insert_mod_memo
        if key in memo:
            return memo[key]
        blocks = self.basis.blocks
        if not word or g <= word[0]:
            res = {} if blocks[g] == E_BLOCK else {(g,) + word: Fraction(1)}
            memo[key] = res
            return res
        x, rest = word[0], word[1:]
        out: dict[tuple[int, ...], Fraction] = {}
        for w, c in self.insert_mod_left_ideal(g, rest).items():
            for w2, c2 in self.insert_mod_left_ideal(x, w).items():
                out[w2] = out.get(w2, 0) + c * c2
        for k, ck in self.basis.table[g][x].items():
            for w2, c2 in self.insert_mod_left_ideal(k, rest).items():
                out[w2] = out.get(w2, 0) + ck * c2
        res = {w: c for w, c in out.items() if c != 0}
        memo[key] = res
        return res

    def normal_form_word(self, word) -> dict[tuple[int, ...], Fraction]:
        """Normal form of an arbitrary word, inserting letters from the right."""
        cur: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
        for g in reversed(tuple(word)):
            nxt: dict[tuple[int, ...], Fraction] = {}
            for w, c in cur.items():
                for w2, c2 in self.insert(g, w).items():
                    nxt[w2] = nxt.get(w2, 0) + c * c2
            cur = {w: c for w, c in nxt.items() if c != 0}
        return cur

    def normal_form_rewriting(self, word, strategy: str = "leftmost") -> dict[tuple[int, ...], Fraction]:
        """Normal form by repeatedly swapping the leftmost (or rightmost) descent.

        Independent of the insertion code path; used to test that the result
        does not depend on the rewriting order.
        """
        table = self.basis.table
        todo: dict[tuple[int, ...], Fraction] = {tuple(word): Fraction(1)}
        done: dict[tuple[int, ...], Fraction] = {}
        while todo:
            w, c = todo.popitem()
            if c == 0:
                continue
            descents = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
            if not descents:
                done[w] = done.get(w, 0) + c
                continue
            i = descents[0] if strategy == "leftmost" else descents[-1]
            a, b = w[i], w[i + 1]
            swapped = w[:i] + (b, a) + w[i + 2:]
            todo[swapped] = todo.get(swapped, 0) + c
            for k, ck in table[a][b].items():
                nw = w[:i] + (k,) + w[i + 2:]
                todo[nw] = todo.get(nw, 0) + c * ck
        return {w: c for w, c in done.items() if c != 0}

    def mul(self, u: UEAElement, v: UEAElement) -> UEAElement:
        out: dict[tuple[int, ...], Fraction] = {}
        for wu, cu in u.terms.items():
            cur = dict(v.terms)
            for g in reversed(wu):
                nxt: dict[tuple[int, ...], Fraction] = {}
                for w, c in cur.items():
                    for w2, c2 in self.insert(g, w).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                cur = nxt
            for w, c in cur.items():
                out[w] = out.get(w, 0) + cu * c
        return UEAElement(self.basis, out)

    def mul_mod_left_ideal(self, u: UEAElement, v: UEAElement) -> UEAElement:
        """u * v modulo U(g) n_+, for v free of n_+ letters."""
        out: dict[tuple[int, ...], Fraction] = {}
        for wu, cu in u.terms.items():
            cur = dict(v.terms)
            for g in reversed(wu):
                nxt: dict[tuple[int, ...], Fraction] = {}
                for w, c in cur.items():
                    for w2, c2 in self.insert_mod_left_ideal(g, w).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                cur = nxt
            for w, c in cur.items():
                out[w] = out.get(w, 0) + cu * c
        return UEAElement(self.basis, out)


_PBW_CACHE: dict[int, PBWAlgebra] = {}


def pbw_algebra(basis: LieBasis) -> PBWAlgebra:
    key = id(basis)
    alg = _PBW_CACHE.get(key)
    if alg is None or alg.basis is not basis:
        alg = PBWAlgebra(basis)
        _PBW_CACHE[key] = alg
    return alg


def pbw_normal_form(basis: LieBasis, word) -> UEAElement:
    """Normal form of a formal product.

    ``word`` is either a sequence of basis indices or a list of
    ``(coefficient, sequence)`` pairs.
    """
    alg = pbw_algebra(basis)
    if word and isinstance(word[0], tuple) and len(word[0]) == 2 and not isinstance(word[0][1], int):
        items = word
    else:
        items = [(1, tuple(word))]
    out: dict[tuple[int, ...], Fraction] = {}
    for c, w in items:
        for w2, c2 in alg.normal_form_word(w).items():
            out[w2] = out.get(w2, 0) + Fraction(c) * c2
    return UEAElement(basis, out)


def hc_project(u: UEAElement) -> UEAElement:
    """Keep the words made only of Levi-block letters (the U(h) component)."""
    blocks = u.basis.blocks
    return UEAElement(u.basis, {w: c for w, c in u.terms.items() if all(blocks[k] == H_BLOCK for k in w)})


def antipode(u: UEAElement) -> UEAElement:
    """S(x) = -x on generators, extended as an anti-homomorphism, then normal ordered."""
    alg = pbw_algebra(u.basis)
    out: dict[tuple[int, ...], Fraction] = {}
    for w, c in u.terms.items():
        sign = -1 if len(w) % 2 else 1
        for w2, c2 in alg.normal_form_word(tuple(reversed(w))).items():
            out[w2] = out.get(w2, 0) + sign * c * c2
    return UEAElement(u.basis, out)


def evaluate_character(u: UEAElement, values) -> object:
    """Apply the character of U(h) with values[k] on basis element k to a U(h) element."""
    total = 0
    for w, c in u.terms.items():
        term = c
        for k in w:
            term = term * values[k]
        total = total + term
    return total
