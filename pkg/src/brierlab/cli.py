"""Command-line entry point.

Four verbs: ``score`` a prediction/outcome pair file, ``expect`` closed-form
quantities, ``simulate`` a study configuration, and ``report`` SVG+CSV
figures from persisted results. Exit codes: 0 success, 2 validation or
configuration problem, 3 runtime I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path

from . import analytic, engine, figures, scoring
from .errors import BrierLabError, ConfigError, ValidationError

__all__ = ["main"]

_FIGURES = {
    "1": {"metric": "brier", "default_n": 1000, "ylabel": "score", "kind": "violin"},
    "2": {"metric": "cil", "default_n": 300, "ylabel": "calibration-in-the-large", "kind": "violin"},
    "3": {
        "metric": "gap",
        "default_n": 300,
        "ylabel": "(ybar - ybar^2) - score of true probabilities",
        "kind": "violin",
    },
    "4": {
        "metric": "exceed_prob",
        "default_n": 300,
        "ylabel": "P(score of true probabilities > ybar - ybar^2)",
        "kind": "bar",
    },
}


def _parse_float_list(text: str, name: str) -> list[float]:
    try:
        return [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ValidationError(f"{name}: expected comma-separated decimals, got {text!r}") from None


def _need(args, flag: str):
    value = getattr(args, flag.lstrip("-").replace("-", "_"))
    if value is None:
        raise ValidationError(f"mode {args.mode!r} requires {flag}")
    return value


def cmd_score(args) -> int:
    p, y = scoring.read_pair_file(args.input)
    report = scoring.score_report(p, y, near_reference_delta=args.near_reference_delta)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        record = report.as_dict()
        warnings = record.pop("warnings")
        for key, value in record.items():
            print(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
        print(f"warnings={';'.join(warnings)}")
        for code in warnings:
            print(f"# {code}: {scoring.WARNING_EXPLANATIONS[code]}")
    return 0


def cmd_expect(args) -> int:
    mode = args.mode
    if mode == "g":
        value = analytic.expected_bs_single(_need(args, "--p1"), _need(args, "--q1"))
        print(f"expected_score={value!r}")
    elif mode == "f":
        value = analytic.expected_bs_perfect_single(_need(args, "--q1"))
        print(f"expected_perfect_score={value!r}")
    elif mode == "shift":
        spec = analytic.PerturbationSpec(_need(args, "--eps"), args.direction)
        value = analytic.shift_difference(_need(args, "--q1"), spec)
        print(f"shift_difference={value!r}")
    elif mode == "perturb":
        value = analytic.perturb_difference(_need(args, "--eps"))
        print(f"perturb_difference={value!r}")
    elif mode == "jensen":
        bound = analytic.jensen_bound(_parse_float_list(_need(args, "--q"), "--q"))
        print(f"bound={bound.bound!r}")
        print(f"tight={'true' if bound.tight else 'false'}")
    elif mode == "clt":
        summary = analytic.clt_normal_approx(
            _parse_float_list(_need(args, "--p"), "--p"),
            _parse_float_list(_need(args, "--q"), "--q"),
        )
        print(f"mean={summary.mean!r}")
        print(f"variance={summary.variance!r}")
        print(f"n={summary.n}")
        print(f"sd_of_mean={summary.sd_of_mean!r}")
    return 0


def cmd_simulate(args) -> int:
    config = engine.load_study_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    out_dir = Path(args.out)

    def progress(done: int, total: int, result: engine.ScenarioResult) -> None:
        stats = result.summaries["brier"]
        print(
            f"[{done}/{total}] {result.scenario.label}: "
            f"median={stats.median:.5f} mean={stats.mean:.5f}",
            flush=True,
        )

    results = engine.run_study(config, workers=args.workers, progress=progress)
    paths = engine.write_study_results(results, out_dir)
    print(f"wrote {len(paths) - 1} scenario files and {paths[-1]}")
    return 0


def _figure_rows(results_dir: Path, metric: str, n: int):
    summary_path = results_dir / "summary.csv"
    if not summary_path.exists():
        raise ValidationError(
            f"{results_dir}: missing summary.csv; run the simulate verb first"
        )
    rows = engine.read_summary_csv(summary_path)
    wanted = [r for r in rows if r["n"] == n and r["metric"] == ("brier" if metric == "exceed_prob" else metric)]
    if not wanted:
        available = sorted({r["n"] for r in rows})
        raise ValidationError(
            f"{results_dir}: no scenarios with n={n} in summary.csv; available sample sizes: {available}"
        )
    return wanted


def cmd_report(args) -> int:
    spec = _FIGURES[args.figure]
    n = args.n if args.n is not None else spec["default_n"]
    results_dir = Path(args.results)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = _figure_rows(results_dir, spec["metric"], n)

    csv_rows: list[tuple] = []
    if spec["kind"] == "bar":
        items = [(r["scenario"], r["exceed_prob"]) for r in rows]
        svg = figures.bar_svg(
            items,
            title=f"Exceedance probability by scenario (n={n})",
            ylabel=spec["ylabel"],
        )
        csv_rows.append(("scenario", "n", "exceed_prob"))
        csv_rows.extend((r["scenario"], str(r["n"]), repr(r["exceed_prob"])) for r in rows)
    else:
        groups = []
        for row in rows:
            sample_path = results_dir / engine.scenario_filename(row["scenario"])
            if not sample_path.exists():
                raise ValidationError(
                    f"{results_dir}: missing per-scenario file {sample_path.name} "
                    f"needed for scenario {row['scenario']!r}"
                )
            data = engine.read_scenario_csv(sample_path)
            groups.append((row["scenario"], data[spec["metric"]]))
        svg = figures.violin_svg(
            groups,
            title=f"{spec['metric']} distribution by scenario (n={n})",
            ylabel=spec["ylabel"],
        )
        csv_rows.append(("scenario", "n", "metric", "median", "q05", "q95", "mean"))
        csv_rows.extend(
            (
                r["scenario"],
                str(r["n"]),
                r["metric"],
                repr(r["median"]),
                repr(r["q05"]),
                repr(r["q95"]),
                repr(r["mean"]),
            )
            for r in rows
        )

    svg_path = out_dir / f"figure{args.figure}.svg"
    csv_path = out_dir / f"figure{args.figure}.csv"
    svg_path.write_text(svg)
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(csv_rows)
    csv_path.write_text(buf.getvalue())
    print(f"wrote {svg_path} and {csv_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brierlab",
        description="Score binary probability predictions, evaluate closed forms, "
        "run simulation studies, and render report figures.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_score = sub.add_parser("score", help="score a two-column p,y pair file")
    p_score.add_argument("--input", required=True, help="pair file with header p,y")
    p_score.add_argument("--json", action="store_true", help="emit the report as JSON")
    p_score.add_argument(
        "--near-reference-delta",
        type=float,
        default=0.01,
        help="threshold for the NEAR_REFERENCE diagnostic (default 0.01)",
    )
    p_score.set_defaults(func=cmd_score)

    p_expect = sub.add_parser("expect", help="evaluate closed-form quantities")
    p_expect.add_argument(
        "--mode", required=True, choices=("g", "f", "shift", "perturb", "jensen", "clt"),
        help="g: expected score of p1 against truth q1; f: expected score under "
        "perfect prediction; shift: truth moved toward 1/2; perturb: prediction "
        "off by eps; jensen: upper bound for a truth vector; clt: normal "
        "approximation for prediction/truth vectors",
    )
    p_expect.add_argument("--p1", type=float, help="scalar prediction")
    p_expect.add_argument("--q1", type=float, help="scalar true probability")
    p_expect.add_argument("--eps", type=float, help="perturbation size")
    p_expect.add_argument("--direction", choices=("plus", "minus"), default="plus")
    p_expect.add_argument("--p", help="comma-separated prediction vector")
    p_expect.add_argument("--q", help="comma-separated true-probability vector")
    p_expect.set_defaults(func=cmd_expect)

    p_sim = sub.add_parser("simulate", help="run a study configuration")
    p_sim.add_argument("--config", required=True, help="JSON study document")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p_sim.add_argument("--out", required=True, help="directory for result CSVs")
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="render a figure from persisted results")
    p_rep.add_argument("--results", required=True, help="directory written by simulate")
    p_rep.add_argument("--figure", required=True, choices=tuple(_FIGURES))
    p_rep.add_argument("--out", required=True, help="directory for figure SVG+CSV")
    p_rep.add_argument("--n", type=int, default=None, help="override the figure's sample size")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrierLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
