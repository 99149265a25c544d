"""Command-line driver emitting machine-readable JSON reports.

Exact-mode reports contain integers and "p/q" rational strings only; Monte
Carlo reports carry sample counts and standard errors and are never presented
as exact. Reports are byte-identical for a fixed config and seed regardless
of the task count, so the execution task count is not echoed.

Exit codes: 0 success, 1 invalid configuration, 2 enumeration cap exceeded,
3 a verification reported holds=false (a counterexample bundle is written).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import engine, fibers, graphs, manip, metrics, scf, verify
from .errors import CapExceededError, VerificationFailure
from .metrics import frac_str, parse_frac
from .rankings import AdjacentTransposition

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    """Semantic run parameters (everything that may change a report's content)."""

    command: str
    n: Optional[int] = None
    k: Optional[int] = None
    rule: Optional[str] = None
    table: Optional[str] = None
    epsilon: Optional[str] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    enumeration_cap: int = scf.DEFAULT_TABLE_CAP

    def describe(self) -> dict:
        doc = {"command": self.command, "enumeration_cap": self.enumeration_cap}
        for name in ("n", "k", "rule", "table", "epsilon", "seed", "samples"):
            value = getattr(self, name)
            if value is not None:
                doc[name] = value
        return doc


def _parse_rule(rule: str, n: int, k: int, cap: int) -> scf.SCF:
    name, _, rest = rule.partition(":")
    if name == "plurality":
        return scf.Plurality(n, k)
    if name == "borda":
        return scf.Borda(n, k)
    if name == "constant":
        return scf.Constant(n, k, int(rest) - 1)
    if name == "top":
        voter, _, subset = rest.partition(":")
        members = [int(x) - 1 for x in subset.split(",")] if subset else list(range(k))
        return scf.TopHDictator(n, k, int(voter) - 1, members)
    if name == "random":
        return scf.random_table_scf(n, k, int(rest), cap)
    if name == "monotone-random":
        return scf.random_monotone_two_valued(n, k, int(rest))
    raise ConfigError(f"unknown rule {rule!r}")


def _build_scf(args) -> scf.SCF:
    if getattr(args, "table", None):
        return scf.load_scf_table(args.table, cap=args.cap)
    if not getattr(args, "rule", None):
        raise ConfigError("an SCF is required: pass --rule or --table")
    if args.voters is None or args.alternatives is None:
        raise ConfigError("--rule needs -n and -k")
    return _parse_rule(args.rule, args.voters, args.alternatives, args.cap)


def _pair(text: str, k: int) -> tuple[int, int]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 2 or parts[0] == parts[1]:
        raise ConfigError(f"--pair wants two distinct 1-based ids, got {text!r}")
    a, b = parts[0] - 1, parts[1] - 1
    if not (0 <= a < k and 0 <= b < k):
        raise ConfigError(f"pair {text!r} out of range for k={k}")
    return a, b


def _emit(args, config: RunConfig, result: dict) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": config.command,
        "config": config.describe(),
        "result": result,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_from(args, command: str) -> RunConfig:
    return RunConfig(
        command=command,
        n=getattr(args, "voters", None),
        k=getattr(args, "alternatives", None),
        rule=getattr(args, "rule", None),
        table=getattr(args, "table", None),
        epsilon=getattr(args, "epsilon", None),
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", None),
        enumeration_cap=args.cap,
    )


# ---------------------------------------------------------------------------
# Subcommand handlers. Each returns the process exit code.


def _cmd_census(args) -> int:
    f = _build_scf(args)
    requested = sorted({int(x) for x in args.r_values.split(",")})
    rs = sorted(set(requested) | {f.k})
    cen = manip.census(f, rs, args.cap, engine.effective_tasks(args.tasks))
    fractions = {f"M_{r}": frac_str(cen.fraction(r)) for r in requested}
    fractions["M"] = frac_str(cen.manipulable_fraction())
    result = {
        "total_profiles": cen.total_profiles,
        "counts": {str(r): cen.count(r) for r in rs},
        "fractions": fractions,
    }
    _emit(args, _config_from(args, "census"), result)
    return 0


def _cmd_distance(args) -> int:
    f = _build_scf(args)
    result = {
        "nonmanip": metrics.distance_to_nonmanip(f, args.cap).describe(),
        "nonmanip_bar": metrics.distance_to_nonmanip_bar(f, args.cap).describe(),
    }
    _emit(args, _config_from(args, "distance"), result)
    return 0


def _cmd_influences(args) -> int:
    f = _build_scf(args)
    table = {}
    for i in range(f.n):
        row = {
            "total": frac_str(metrics.influence_total(f, i, args.cap)),
            "target": {
                str(a + 1): frac_str(metrics.influence_target(f, i, a, args.cap))
                for a in range(f.k)
            },
            "pairs": {},
        }
        for a in range(f.k):
            for b in range(f.k):
                if a != b:
                    row["pairs"][f"{a + 1}-{b + 1}"] = frac_str(
                        metrics.influence_pair(f, i, a, b, args.cap)
                    )
        if args.refined:
            row["refined_same_pair"] = {}
            row["refined_all_transpositions"] = {}
            for a in range(f.k):
                for b in range(a + 1, f.k):
                    key = f"{a + 1}-{b + 1}"
                    row["refined_same_pair"][key] = frac_str(metrics.influence_refined(
                        f, i, a, b, AdjacentTransposition(a, b), args.cap))
                    row["refined_all_transpositions"][key] = frac_str(
                        metrics.influence_refined_total(f, i, a, b, args.cap))
        table[str(i + 1)] = row
    _emit(args, _config_from(args, "influences"), {"coordinates": table})
    return 0


def _resolve_gamma(args, f) -> Fraction:
    if args.gamma is not None:
        return parse_frac(args.gamma)
    if args.epsilon is None:
        raise ConfigError("fibers needs --gamma or --epsilon for the preset")
    preset = "gamma-refined" if args.variant == "refined" else "gamma-coarse"
    return verify.bound_value(
        preset, verify.BoundParams(n=f.n, k=f.k, epsilon=parse_frac(args.epsilon))
    )


def _cmd_fibers(args) -> int:
    f = _build_scf(args)
    pair = _pair(args.pair, f.k)
    variant = fibers.FiberVariant(args.variant)
    gamma = _resolve_gamma(args, f)
    records = fibers.fiber_sweep(f, args.coordinate - 1, pair, variant, gamma, args.cap)
    result = {
        "gamma": frac_str(gamma),
        "records": [rec.describe() for rec in records],
        "large": sum(1 for rec in records if rec.large),
        "small": sum(1 for rec in records if not rec.large),
    }
    _emit(args, _config_from(args, "fibers"), result)
    return 0


def _cmd_local_dictators(args) -> int:
    f = _build_scf(args)
    pair = _pair(args.pair, f.k)
    profiles = sorted(
        fibers.local_dictator_sets(f, args.coordinate - 1, pair, args.cap),
        key=lambda prof: tuple(r.order for r in prof),
    )
    listed = [[list(r.one_based()) for r in prof] for prof in profiles[: args.max_list]]
    result = {"count": len(profiles), "profiles": listed}
    _emit(args, _config_from(args, "local-dictators"), result)
    return 0


def _cmd_gs_classify(args) -> int:
    f = _build_scf(args)
    result = manip.gs_classify(f, args.cap).describe()
    _emit(args, _config_from(args, "gs-classify"), result)
    return 0


def _cmd_sample(args) -> int:
    f = _build_scf(args)
    rep = manip.sample_success(
        f, args.samples, args.seed, args.width, engine.effective_tasks(args.tasks)
    )
    _emit(args, _config_from(args, "sample"), rep.describe())
    return 0


def _cmd_isoperimetry(args) -> int:
    report = graphs.verify_lindsey(
        args.alternatives, args.copies, exhaustive=not args.lex_only
    )
    _emit(args, _config_from(args, "isoperimetry"), report.describe())
    return 0 if report.holds else 3


def _cmd_hypercontractivity(args) -> int:
    rho = parse_frac(args.rho)
    size = 1 << args.bits
    if args.b1 or args.b2:
        B1 = [int(x) for x in args.b1.split(",")] if args.b1 else []
        B2 = [int(x) for x in args.b2.split(",")] if args.b2 else []
        report = verify.verify_reverse_hypercontractivity(args.bits, rho, B1, B2)
        _emit(args, _config_from(args, "hypercontractivity"), report.describe())
        return 0 if report.holds else 3
    violations = 0
    checked = 0
    sample_rows = []
    for t in range(args.pairs):
        rng = random.Random(engine.derive_stream_seed(args.seed, t))
        bits1, bits2 = rng.getrandbits(size), rng.getrandbits(size)
        B1 = [m for m in range(size) if bits1 >> m & 1]
        B2 = [m for m in range(size) if bits2 >> m & 1]
        report = verify.verify_reverse_hypercontractivity(args.bits, rho, B1, B2)
        checked += 1
        if not report.holds:
            violations += 1
            sample_rows.append(report.describe())
    result = {
        "pairs_checked": checked,
        "violations": violations,
        "holds": violations == 0,
        "failing_reports": sample_rows[:10],
    }
    _emit(args, _config_from(args, "hypercontractivity"), result)
    return 0 if violations == 0 else 3


def _cmd_verify(args) -> int:
    tasks = engine.effective_tasks(args.tasks)
    config = _config_from(args, "verify")
    if args.exhaustive:
        if args.thm != "1.4":
            raise ConfigError("--exhaustive sweeps support --thm 1.4")
        if args.alternatives is None:
            raise ConfigError("--exhaustive needs -k")
        report = verify.sweep_one_voter(args.alternatives, tasks)
        _emit(args, config, report.describe())
        if not report.holds:
            verify.write_counterexample(
                verify.VerificationReport("1.4-sweep", None, None, False,
                                          witnesses={"failures": report.failures}),
                None, args.bundle_dir)
            return 3
        return 0
    if args.random:
        if args.voters is None or args.alternatives is None:
            raise ConfigError("--random needs -n and -k")
        report = verify.sweep_random_tables(
            args.voters, args.alternatives, args.random, args.seed or 0, tasks
        )
        _emit(args, config, report.describe())
        if not report.holds:
            verify.write_counterexample(
                verify.VerificationReport("random-sweep", None, None, False,
                                          witnesses={"failures": report.failures}),
                None, args.bundle_dir)
            return 3
        return 0

    f = _build_scf(args)
    statement = args.thm
    if statement in verify.MAIN_THEOREMS:
        reports = verify.verify_main_theorems(f, (statement,), args.cap, tasks)
    elif statement in ("2.1", "5.3", "6.1"):
        eps = parse_frac(args.epsilon) if args.epsilon else None
        reports = [verify.verify_lemma_influences(f, eps, statement, args.cap)]
    elif statement == "1.5":
        alpha = parse_frac(args.alpha) if args.alpha else None
        reports = [verify.verify_thm_1_5(f, alpha, args.cap, tasks)]
    else:
        raise ConfigError(f"unknown statement {statement!r}")
    _emit(args, config, {"reports": [r.describe() for r in reports]})
    bad = [r for r in reports if not r.holds]
    if bad:
        verify.write_counterexample(bad[0], f, args.bundle_dir)
        return 3
    return 0


# ---------------------------------------------------------------------------
# Parser assembly.


def _add_common(parser: argparse.ArgumentParser, with_scf: bool = True) -> None:
    parser.add_argument("--tasks", type=int, default=None,
                        help="task count (MANIP_TASKS overrides; results never depend on it)")
    parser.add_argument("--cap", type=int, default=scf.DEFAULT_TABLE_CAP,
                        help="enumeration cap on (k!)^n table entries")
    parser.add_argument("-o", "--output", default=None, help="report path (default stdout)")
    if with_scf:
        parser.add_argument("--rule", default=None,
                            help="plurality | borda | constant:A | top:I[:H,H,...] | "
                                 "random:SEED | monotone-random:SEED (ids 1-based)")
        parser.add_argument("--table", default=None, help="SCF table file (JSON)")
        parser.add_argument("-n", "--voters", type=int, default=None)
        parser.add_argument("-k", "--alternatives", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="votemanip",
                     description="Exact desk-scale manipulability analysis of voting rules")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("census", help="exact r-manipulation census")
    _add_common(p)
    p.add_argument("--r-values", default="2,3,4", help="comma list of r values (k is always added)")
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("distance", help="distances to both nonmanipulable families")
    _add_common(p)
    p.set_defaults(handler=_cmd_distance)

    p = sub.add_parser("influences", help="full influence table")
    _add_common(p)
    p.add_argument("--refined", action="store_true", help="add adjacent-transposition influences")
    p.set_defaults(handler=_cmd_influences)

    p = sub.add_parser("fibers", help="large/small classification sweep for a pair")
    _add_common(p)
    p.add_argument("--pair", required=True, help="two 1-based ids, e.g. 1,2")
    p.add_argument("--coordinate", type=int, required=True, help="1-based voter")
    p.add_argument("--variant", choices=["plain", "refined"], default="plain")
    p.add_argument("--gamma", default=None, help="threshold as p/q")
    p.add_argument("--epsilon", default=None, help="epsilon p/q for the gamma preset")
    p.set_defaults(handler=_cmd_fibers)

    p = sub.add_parser("local-dictators", help="profiles locally dictated on a pair")
    _add_common(p)
    p.add_argument("--pair", required=True)
    p.add_argument("--coordinate", type=int, required=True)
    p.add_argument("--max-list", type=int, default=20)
    p.set_defaults(handler=_cmd_local_dictators)

    p = sub.add_parser("verify", help="verify a statement id against brute force")
    _add_common(p)
    p.add_argument("--thm", required=True,
                   help="statement id: 1.2, 1.4, 3.1, 7.1, 1.5, 2.1, 5.3, 6.1")
    p.add_argument("--exhaustive", action="store_true",
                   help="sweep every one-voter SCF (with --thm 1.4)")
    p.add_argument("--random", type=int, default=None, metavar="COUNT",
                   help="sweep seeded random table SCFs (statements 1.2 + 2.1 + 1.5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", default=None, help="override measured epsilon (p/q)")
    p.add_argument("--alpha", default=None, help="override measured alpha (p/q)")
    p.add_argument("--bundle-dir", default="counterexamples")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("sample", help="random-window manipulation sampler (Monte Carlo)")
    _add_common(p)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=4, choices=[3, 4],
                   help="window width (3 fits the one-voter setting)")
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("gs-classify", help="manipulation witness or nonmanipulable twin")
    _add_common(p)
    p.set_defaults(handler=_cmd_gs_classify)

    p = sub.add_parser("isoperimetry", help="edge-isoperimetry check on K_k^n")
    _add_common(p, with_scf=False)
    p.add_argument("-k", "--alternatives", type=int, required=True,
                   help="complete graph size")
    p.add_argument("--copies", type=int, required=True, help="number of factors")
    p.add_argument("--lex-only", action="store_true",
                   help="check lexicographic segments instead of all subsets")
    p.set_defaults(handler=_cmd_isoperimetry)

    p = sub.add_parser("hypercontractivity", help="correlated-cube overlap check")
    _add_common(p, with_scf=False)
    p.add_argument("--bits", type=int, required=True, help="cube dimension")
    p.add_argument("--rho", default="1/3", help="correlation as p/q")
    p.add_argument("--pairs", type=int, default=200, help="seeded random set pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--b1", default=None, help="explicit comma list of masks")
    p.add_argument("--b2", default=None)
    p.set_defaults(handler=_cmd_hypercontractivity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
