"""Command-line front end: rank datasets, compare rules, z-tests, simulations."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from ._version import __version__
from .data_pipeline import (
    FORMATS,
    AnalysisConfig,
    emit_paper_percentiles,
    emit_ranking_table,
    load_records,
    run_analysis,
)
from .indicator_core import PercentileRule, RankClassScheme, ReferenceScope
from .rank_stats import ztest_proportions
from .synth_bench import (
    divergence_from_report,
    emit_divergence,
    fixture_path,
    load_experiment_config,
    override_seeds,
    run_divergence_experiment,
)


class _UsageError(ValueError):
    """Bad flag combinations detected after argparse; exits with status 2."""


def _rule(token: str) -> PercentileRule:
    try:
        return PercentileRule.from_token(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scheme(token: str) -> RankClassScheme:
    try:
        return RankClassScheme.from_token(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scope(token: str) -> ReferenceScope:
    try:
        return ReferenceScope.from_token(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _unique_rules(rules: Sequence[PercentileRule] | None, default: list[PercentileRule]) -> tuple[PercentileRule, ...]:
    chosen = list(rules) if rules else default
    seen: set[PercentileRule] = set()
    for rule in chosen:
        if rule in seen:
            raise _UsageError(f"duplicate rule: {rule.token}")
        seen.add(rule)
    return tuple(chosen)


def _unique_schemes(schemes: Sequence[RankClassScheme] | None) -> tuple[RankClassScheme, ...]:
    chosen = list(schemes) if schemes else [RankClassScheme.p100()]
    seen: set[RankClassScheme] = set()
    for scheme in chosen:
        if scheme in seen:
            raise _UsageError(f"duplicate scheme: {scheme.label}")
        seen.add(scheme)
    return tuple(chosen)


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_rank(args: argparse.Namespace) -> int:
    rules = _unique_rules(args.rule, [PercentileRule.QUANTILE])
    schemes = _unique_schemes(args.scheme)
    dataset = load_records(args.input)
    if args.per_paper:
        text = emit_paper_percentiles(dataset, rules, args.scope, args.format)
    else:
        config = AnalysisConfig(rules, schemes, args.scope)
        text = emit_ranking_table(run_analysis(dataset, config), args.format)
    _write(text, args.output)
    return 0


def cmd_compare_rules(args: argparse.Namespace) -> int:
    rules = _unique_rules(args.rule, [])
    if len(rules) < 2:
        raise _UsageError("compare-rules needs at least 2 distinct --rule flags")
    dataset = load_records(args.input)
    config = AnalysisConfig(rules, (args.scheme,), args.scope)
    report = run_analysis(dataset, config)
    result = divergence_from_report(report, args.scheme)
    if len(result.set_order) == 2:
        print("warning: correlations over 2 sets are degenerate", file=sys.stderr)
    _write(emit_divergence(result, args.format), None)
    return 0


def cmd_ztest(args: argparse.Namespace) -> int:
    count_flags = [args.k1, args.n1, args.k2, args.n2]
    if args.input is not None:
        if any(flag is not None for flag in count_flags):
            raise _UsageError("use either --input with set ids or --k1/--n1/--k2/--n2, not both")
        if args.set_a is None or args.set_b is None:
            raise _UsageError("dataset mode requires --set-a and --set-b")
        dataset = load_records(args.input)
        from .indicator_core import compute_percentiles

        assignment = compute_percentiles(dataset.records, args.rule, args.scope)
        values_a = assignment.percentiles_for_set(args.set_a)
        values_b = assignment.percentiles_for_set(args.set_b)
        k1 = sum(1 for value in values_a if value >= args.threshold)
        n1 = len(values_a)
        k2 = sum(1 for value in values_b if value >= args.threshold)
        n2 = len(values_b)
    else:
        if any(flag is None for flag in count_flags):
            raise _UsageError("count mode requires all of --k1 --n1 --k2 --n2")
        k1, n1, k2, n2 = count_flags
    result = ztest_proportions(k1, n1, k2, n2)
    lines = [
        f"z={result.z:.6f}",
        f"p_two_sided={result.p_two_sided:.6f}",
        f"pooled_proportion={result.pooled_proportion:.6f}",
    ]
    if args.one_sided:
        lines.append(f"p_one_sided={result.p_one_sided:.6f}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _resolve_config(token: str) -> Path:
    path = Path(token)
    if path.exists():
        return path
    name = token if token.endswith(".json") else f"{token}.json"
    packaged = fixture_path(name)
    if packaged.exists():
        return packaged
    raise ValueError(f"experiment config not found: {token}")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_experiment_config(_resolve_config(args.config))
    if args.seed is not None:
        config = override_seeds(config, args.seed)
    result = run_divergence_experiment(config.sets, config.rules, config.scheme, config.scope)
    _write(emit_divergence(result, args.format), None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citerank",
        description="Citation-percentile impact indicators (I3) and rule comparison.",
    )
    parser.add_argument("--version", action="version", version=f"citerank-i3 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="rank sets by %I3 (or emit per-paper percentiles)")
    rank.add_argument("--input", required=True, help="CSV with set_id,paper_id,citations[,doc_type]")
    rank.add_argument("--rule", action="append", type=_rule,
                      help="counting rule (repeatable): quantile | lb09 | rousseau-raw | rousseau; default quantile")
    rank.add_argument("--scheme", action="append", type=_scheme,
                      help="rank-class scheme (repeatable): p100 | nsf6 | top<P>; default p100")
    rank.add_argument("--scope", type=_scope, default=ReferenceScope.GLOBAL_POOL,
                      help="reference group: global | per-set | per-doc-type | per-set-and-doc-type")
    rank.add_argument("--format", choices=FORMATS, default="delimited")
    rank.add_argument("--output", help="write the report here instead of stdout")
    rank.add_argument("--per-paper", action="store_true",
                      help="emit the per-paper percentile table instead of the set ranking")
    rank.set_defaults(func=cmd_rank)

    compare = sub.add_parser("compare-rules", help="correlate per-set %I3 across counting rules")
    compare.add_argument("--input", required=True)
    compare.add_argument("--rule", action="append", type=_rule, help="repeat for each rule (>= 2)")
    compare.add_argument("--scheme", type=_scheme, default=RankClassScheme.p100())
    compare.add_argument("--scope", type=_scope, default=ReferenceScope.GLOBAL_POOL)
    compare.add_argument("--format", choices=FORMATS, default="delimited")
    compare.set_defaults(func=cmd_compare_rules)

    ztest = sub.add_parser("ztest", help="z-test for independent proportions")
    ztest.add_argument("--k1", type=int)
    ztest.add_argument("--n1", type=int)
    ztest.add_argument("--k2", type=int)
    ztest.add_argument("--n2", type=int)
    ztest.add_argument("--input", help="dataset mode: derive counts from two sets")
    ztest.add_argument("--set-a", help="first set id (dataset mode)")
    ztest.add_argument("--set-b", help="second set id (dataset mode)")
    ztest.add_argument("--threshold", type=float, default=90.0,
                       help="success = paper at/above this percentile (dataset mode)")
    ztest.add_argument("--rule", type=_rule, default=PercentileRule.QUANTILE,
                       help="counting rule for dataset mode")
    ztest.add_argument("--scope", type=_scope, default=ReferenceScope.GLOBAL_POOL)
    ztest.add_argument("--one-sided", action="store_true",
                       help="also print the one-sided p-value")
    ztest.set_defaults(func=cmd_ztest)

    simulate = sub.add_parser("simulate", help="run a synthetic rule-divergence experiment")
    simulate.add_argument("--config", required=True,
                          help="experiment JSON, or the name of a packaged fixture")
    simulate.add_argument("--seed", type=int, help="re-seed every set as seed + position")
    simulate.add_argument("--format", choices=FORMATS, default="delimited")
    simulate.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
