"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad configuration
or arguments, 3 a singular Shapovalov block or an insufficient cutoff.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from sympy import Rational

from . import __version__
from .enveloping import (
    PBWAlgebra,
    UEAElement,
    antipode,
    centralizer_split,
    chevalley_constants,
    normalize_root_vectors,
)
from .errors import (
    ArgumentError,
    ConfigurationError,
    CutoffError,
    InternalConsistencyError,
    NonDegeneracyError,
    StarProductError,
)
from .invariants import (
    characteristic_class,
    dimension_table,
    dimension_table_csv,
    freudenthal_dim,
    quantum_dimension,
)
from .orbitstar import (
    CheckRecord,
    random_function,
    random_group_point,
    random_momentum_polynomial,
    verify_associativity,
    verify_first_order,
    verify_h_invariance,
    verify_lemma_comp,
    verify_momentum_map,
    verify_order_zero,
    verify_separation,
)
from .rootsys import build_root_system, rho
from .scalars import format_fraction
from .shapovalov import (
    BlockCache,
    b_series,
    block_determinant,
    compute_B,
    inverse_is_exact,
    leading_order_report,
    momentum_identity_check,
    scale_first_order,
)

log = logging.getLogger("coadjoint_star")

CACHE_ENV = "COADJOINT_STAR_CACHE"
SUITES = ("structural", "lemma_comp", "momentum_map", "separation", "order_laws", "associativity")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3


@dataclass
class RunConfig:
    series: str = "A"
    rank: int = 1
    lam: tuple[Fraction, ...] = ()
    height_cutoff: int = 4
    suites: tuple[str, ...] = SUITES
    seed: int = 0
    samples: int = 3
    points: int = 3
    cache_dir: str | None = None
    output: str | None = None
    inject_fault: str | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["lam"] = [format_fraction(x) for x in self.lam]
        d["suites"] = list(self.suites)
        d.pop("output")
        d.pop("cache_dir")
        d.pop("extra")
        return d


def parse_rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(p.strip()) for p in str(text).split(",") if p.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ArgumentError(f"cannot parse rational list {text!r}") from exc


_CONFIG_ALIASES = {"type": "series", "lambda": "lam", "lambda_fundamental": "lam_fundamental"}


def read_config_file(path) -> dict[str, str]:
    """``key = value`` lines; '#' starts a comment.  Keys use the long flag names."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[_CONFIG_ALIASES.get(key, key)] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coadjoint-star",
        description="Exact star products on semisimple coadjoint orbits.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file mirroring these flags (flags win)")
        p.add_argument("--type", dest="series", help="root system type: A, B, C, D, E, F, G")
        p.add_argument("--rank", type=int)
        p.add_argument("--lambda", dest="lam", help="values lambda(h_i), comma separated rationals")
        p.add_argument("--lambda-fundamental", dest="lam_fundamental",
                       help="lambda in fundamental-weight coordinates")
        p.add_argument("--cutoff", type=int, help="height cutoff of B (default 4)")
        p.add_argument("--cache-dir", help=f"block cache directory (default ${CACHE_ENV})")
        p.add_argument("--output", "-o", help="write the main output here instead of stdout")
        p.add_argument("--verbose", "-v", action="store_true")

    p = sub.add_parser("build", help="compute and cache Shapovalov blocks and B")
    common(p)
    p.add_argument("--det-height", type=int, default=3,
                   help="largest height for the symbolic determinant guard")

    p = sub.add_parser("verify", help="run verification suites, emit a JSON report")
    common(p)
    p.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="random functions per suite")
    p.add_argument("--points", type=int, help="group points per associativity triple")
    p.add_argument("--inject-fault", choices=["scale-t"], help="perturb B before verifying")

    p = sub.add_parser("invariants", help="characteristic class and dimension table")
    common(p)
    p.add_argument("--grid", type=int, help="Dynkin labels range [0, grid] for the table")
    p.add_argument("--xi", help="single xi: 'rho', 'short-fundamental', 'long-fundamental' "
                               "or Dynkin labels")

    p = sub.add_parser("dump-b", help="print the t-expansion of B")
    common(p)
    p.add_argument("--order", type=int, default=1)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name, default=None, conv=lambda x: x):
        val = getattr(args, name, None)
        if val is not None:
            return val
        if name in file_cfg:
            return conv(file_cfg[name])
        return default

    series = str(pick("series", "A")).upper()
    rank = int(pick("rank", 1))
    rs = build_root_system(series, rank)
    lam_text = pick("lam")
    lam_fund = pick("lam_fundamental")
    if lam_text is not None and lam_fund is not None:
        raise ArgumentError("give --lambda or --lambda-fundamental, not both")
    if lam_fund is not None:
        # Dynkin labels of sum c_i omega_i are the c_i, which are the values lambda(h_i)
        lam = rs.to_fundamental(rs.from_fundamental(parse_rationals(lam_fund)))
    elif lam_text is not None:
        lam = parse_rationals(lam_text)
    else:
        lam = ()
    if lam and len(lam) != rank:
        raise ArgumentError(f"lambda needs {rank} values for {series}{rank}, got {len(lam)}")
    cutoff = int(pick("cutoff", 4))
    if cutoff < 1:
        raise ArgumentError("--cutoff must be at least 1")
    suites = pick("suite", None)
    if suites is None:
        suites = SUITES
    elif isinstance(suites, str):
        suites = tuple(s.strip() for s in suites.split(",") if s.strip())
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise ArgumentError(f"unknown suites {bad}")
    return RunConfig(
        series=series,
        rank=rank,
        lam=tuple(lam),
        height_cutoff=cutoff,
        suites=tuple(suites),
        seed=int(pick("seed", 0)),
        samples=int(pick("samples", 3)),
        points=int(pick("points", 3)),
        cache_dir=pick("cache_dir", os.environ.get(CACHE_ENV)),
        output=pick("output"),
        inject_fault=pick("inject_fault"),
        extra={k: pick(k) for k in ("grid", "xi", "order", "det_height")},
    )


def _split(cfg: RunConfig):
    if not cfg.lam:
        raise ArgumentError("--lambda (or --lambda-fundamental) is required")
    rs = build_root_system(cfg.series, cfg.rank)
    alg = chevalley_constants(rs)
    return normalize_root_vectors(centralizer_split(alg, cfg.lam))


def _cache(cfg: RunConfig) -> BlockCache | None:
    return BlockCache(cfg.cache_dir) if cfg.cache_dir else None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Subcommands


def cmd_build(cfg: RunConfig) -> int:
    split = _split(cfg)
    det_height = cfg.extra.get("det_height")
    det_height = 3 if det_height is None else int(det_height)
    cache = _cache(cfg)
    lines = [f"algebra {split.rs.name}, dim {split.basis.dim}, "
             f"lambda = ({', '.join(format_fraction(x) for x in split.lam)})",
             f"Delta_+ has {len(split.delta_plus)} roots; Levi roots: {len(split.levi_roots)}"]
    for h in range(1, min(det_height, cfg.height_cutoff) + 1):
        for mu in split.degrees_of_height(h):
            det = block_determinant(split, mu)
            val = det.as_expr().subs({s: Rational(v.numerator, v.denominator)
                                      for s, v in zip(det.gens, split.lam)})
            if val == 0:
                raise NonDegeneracyError(f"Shapovalov determinant vanishes at degree {mu}", mu)
            lines.append(f"  det guard {mu}: nonzero")
    B = compute_B(split, cfg.height_cutoff, cache=cache, check_inverse=True)
    degrees = sorted(B.blocks, key=lambda d: (d.height, d.coeffs))
    lines.append(f"blocks: {len(degrees)} + mu=0, cutoff {cfg.height_cutoff}")
    for mu in degrees:
        lines.append(f"  {mu} size {B.blocks[mu].size}")
    if cache is not None:
        lines.append(f"cache: {cache.hits} hits, {cache.misses} misses in {cache.directory}")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def _structural_records(split, B) -> list[CheckRecord]:
    out = []
    basis = split.basis
    jac = basis.jacobi_failures(limit=1)
    out.append(CheckRecord("jacobi", split.rs.name, "0" if not jac else str(jac), not jac))
    alg = PBWAlgebra(basis)
    rng = random.Random(0)
    mismatched = 0
    for _ in range(100):
        w = tuple(rng.randrange(basis.dim) for _ in range(rng.randint(1, 6)))
        a = alg.normal_form_rewriting(w, "leftmost")
        if a != alg.normal_form_rewriting(w, "rightmost") or a != alg.normal_form_word(w):
            mismatched += 1
    out.append(CheckRecord("pbw_confluence", "100 words", str(mismatched), mismatched == 0))
    bad = 0
    for _ in range(100):
        terms = {}
        for _ in range(3):
            w = tuple(sorted(rng.randrange(basis.dim) for _ in range(rng.randint(0, 4))))
            terms[w] = Fraction(rng.randint(-3, 3))
        u = UEAElement(basis, terms)
        if antipode(antipode(u)) != u:
            bad += 1
    out.append(CheckRecord("antipode_involution", "100 elements", str(bad), bad == 0))
    for mu, block in sorted(B.blocks.items()):
        ok = inverse_is_exact(block)
        out.append(CheckRecord("inverse_block", str(mu), "0" if ok else "P P^-1 != 1", ok))
    for rep in leading_order_report(B):
        detail = ("height rule holds" if rep.height_rule else
                  f"valuation {rep.min_valuation} below height {rep.height} "
                  f"(minimal PBW length {rep.min_length})")
        out.append(CheckRecord("leading_order", str(rep.degree), "0" if rep.ok else "bound violated",
                               rep.ok, detail))
    return out


def run_verification(cfg: RunConfig, split=None) -> list[CheckRecord]:
    split = split or _split(cfg)
    B = compute_B(split, cfg.height_cutoff, cache=_cache(cfg))
    if cfg.inject_fault == "scale-t":
        B = scale_first_order(B, 2)
    rng = random.Random(cfg.seed)
    basis = split.basis
    records: list[CheckRecord] = []
    general = [random_function(basis, rng, 3) for _ in range(cfg.samples)]
    if "structural" in cfg.suites:
        records += _structural_records(split, B)
    if "lemma_comp" in cfg.suites:
        rep = momentum_identity_check(B)
        records.append(CheckRecord("momentum_identity", split.rs.name,
                                   "0" if rep.passed else json.dumps({str(k): v for k, v in sorted(rep.residuals.items())}),
                                   rep.passed))
        records += verify_lemma_comp(B, general)
    if "momentum_map" in cfg.suites:
        records += verify_momentum_map(B, general)
    if "separation" in cfg.suites:
        records += verify_separation(B, general, rng=rng)
    if "order_laws" in cfg.suites:
        mom = [random_momentum_polynomial(split, rng, 2) for _ in range(cfg.samples + 1)]
        pairs = list(zip(mom, mom[1:]))
        records += verify_order_zero(B, pairs)
        records += verify_first_order(B, pairs)
        records += verify_h_invariance(B, pairs)
    if "associativity" in cfg.suites:
        triples = [tuple(random_momentum_polynomial(split, rng, 2) for _ in range(3))
                   for _ in range(cfg.samples)]
        points = [random_group_point(basis, rng) for _ in range(cfg.points)]
        records += verify_associativity(B, triples, points)
    return records


def report_json(cfg: RunConfig, records: list[CheckRecord]) -> str:
    by_suite: dict[str, list[int]] = {}
    for r in records:
        s = by_suite.setdefault(r.check_id, [0, 0])
        s[0] += 1
        s[1] += r.passed
    doc = {
        "config": cfg.to_json(),
        "records": [r.to_json() for r in records],
        "summary": {k: {"checks": v[0], "passed": v[1]} for k, v in sorted(by_suite.items())},
        "all_pass": all(r.passed for r in records),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    records = run_verification(cfg)
    _emit(cfg, report_json(cfg, records))
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def _named_xi(rs, text: str):
    text = text.strip().lower()
    if text == "rho":
        return rho(rs)
    if text in ("short-fundamental", "long-fundamental"):
        lengths = [rs.form_matrix[i][i] for i in range(rs.rank)]
        target = min(lengths) if text.startswith("short") else max(lengths)
        return rs.fundamental_weight(lengths.index(target))
    return rs.from_fundamental(parse_rationals(text))


def cmd_invariants(cfg: RunConfig) -> int:
    rs = build_root_system(cfg.series, cfg.rank)
    out = []
    if cfg.lam:
        split = _split(cfg)
        theta = characteristic_class(split)
        out.append(f"# theta = {theta}  (simple-root coordinates; order0 = -lambda, order1 = i rho)")
        out.append("# class JSON " + json.dumps(theta.to_json(), sort_keys=True))
    xi_text = cfg.extra.get("xi")
    if xi_text:
        xi = _named_xi(rs, xi_text)
        q = quantum_dimension(rs, None, xi)
        try:
            f = freudenthal_dim(rs, xi)
        except ArgumentError as exc:
            out.append(f"# xi = {xi.to_json()}: qdim {format_fraction(q)}; skipped oracle ({exc})")
        else:
            out.append(f"# xi = {xi.to_json()}: qdim {format_fraction(q)}, freudenthal {f}")
    text = "\n".join(out) + ("\n" if out else "")
    grid = cfg.extra.get("grid")
    ok = True
    if grid is not None:
        rows = dimension_table(rs, int(grid))
        ok = all(r.match for r in rows)
        text += dimension_table_csv(rows)
    _emit(cfg, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dump_b(cfg: RunConfig) -> int:
    split = _split(cfg)
    order = cfg.extra.get("order")
    order = 1 if order is None else int(order)
    B = compute_B(split, cfg.height_cutoff, cache=_cache(cfg))
    _emit(cfg, b_series(B, order).render())
    return EXIT_OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "invariants": cmd_invariants, "dump-b": cmd_dump_b}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (NonDegeneracyError, CutoffError) as exc:
        extra = f" (required cutoff {exc.required})" if getattr(exc, "required", None) else ""
        print(f"error: {exc}{extra}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigurationError, ArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except StarProductError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
