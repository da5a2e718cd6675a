"""Command-line orchestration: simulate, extract, evaluate, analyze, report.

Every command is deterministic given its flags; all randomness flows from
--seed. Exit codes are a stable contract for scripting: 0 success, 2 usage,
3 I/O failure, 4 malformed input, 5 bad data shape.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__
from .core import STIFFNESS, TEXTURE, StrainTrace, label_for
from .errors import (
    ConfigError,
    EmptyInputError,
    FormatError,
    InconsistentFeaturesError,
    MixedTasksError,
    PipelineError,
    SingleClassError,
    TooFewPerClassError,
    TraceTooShortError,
    UnknownLabelError,
)
from .evaluate import CvReport, cross_validate
from .features import extract_dataset
from .io import (
    atomic_write_text,
    read_features,
    read_report,
    read_significance,
    read_traces,
    trace_to_record,
    write_features,
    write_report,
    write_significance,
    write_traces,
)
from .learn import MODEL_NAMES, classifier_spec
from .simulator import SimConfig, generate_corpus
from .stats import significance_profile

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_SHAPE = 5

_FORMAT_ERRORS = (
    FormatError,
    MixedTasksError,
    TraceTooShortError,
    InconsistentFeaturesError,
    UnknownLabelError,
    ConfigError,
)
_SHAPE_ERRORS = (TooFewPerClassError, SingleClassError, EmptyInputError)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _load_sim_config(path: str | None) -> SimConfig:
    if path is None:
        return SimConfig()
    with open(path, "r", encoding="utf-8") as handle:
        try:
            overrides = json.load(handle)
        except json.JSONDecodeError as err:
            raise FormatError(f"{path}:{err.lineno}: invalid JSON ({err.msg})") from err
    known = {f.name for f in dataclasses.fields(SimConfig)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise FormatError(f"{path}: unknown config keys {unknown}; known: {sorted(known)}")
    return SimConfig(**overrides)


def _parse_models(text: str) -> list[str]:
    names = [m.strip() for m in text.split(",") if m.strip()]
    if not names:
        raise FormatError("no model names given")
    for name in names:
        if name not in MODEL_NAMES:
            raise FormatError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}")
    return names


# ---------------------------------------------------------------------------
# commands

def cmd_simulate(args) -> int:
    cfg = _load_sim_config(args.config)
    traces = generate_corpus(args.task, args.mode.upper(), args.trials, cfg, args.seed)
    count = write_traces(args.out, traces)
    print(f"wrote {count} trace records to {args.out}")
    return EXIT_OK


def cmd_extract(args) -> int:
    traces = read_traces(args.infile)
    ds = extract_dataset(traces)
    write_features(args.out, ds)
    print(
        f"wrote {len(ds)} rows x {len(ds.feature_names)} features "
        f"({ds.task}/{ds.mode}) to {args.out}"
    )
    return EXIT_OK


def _report_doc(task: str, mode: str, reports: list[CvReport], config: dict) -> dict:
    return {
        "task": task,
        "mode": mode,
        "tool_version": __version__,
        "config": config,
        "labels": [lab.name for lab in reports[0].labels],
        "models": [
            {
                "name": rep.model_name,
                "mean_accuracy": rep.mean_accuracy,
                "run_accuracies": list(rep.run_accuracies),
                "fold_accuracies": [list(f) for f in rep.fold_accuracies],
                "confusion": [list(row) for row in rep.confusion],
                "seed": rep.seed,
            }
            for rep in reports
        ],
    }


def cmd_evaluate(args) -> int:
    ds = read_features(args.features, mode=args.mode.upper())
    names = _parse_models(args.models)
    reports = [
        cross_validate(ds, classifier_spec(name), k=args.k, runs=args.runs, seed=args.seed)
        for name in names
    ]
    config = {
        "features": os.path.basename(args.features),
        "models": names,
        "k": args.k,
        "runs": args.runs,
        "seed": args.seed,
    }
    write_report(args.out, _report_doc(ds.task, ds.mode, reports, config))
    for rep in reports:
        print(f"{rep.model_name}: mean accuracy {rep.mean_accuracy:.4f}")
    print(f"wrote report to {args.out}")
    return EXIT_OK


def cmd_significance(args) -> int:
    ds = read_features(args.features)
    profile = significance_profile(ds)
    write_significance(args.out, profile)
    print(f"wrote {len(profile.feature_names)} feature rows to {args.out}")
    return EXIT_OK


def _accuracy_table(doc: dict) -> str:
    rows = [("model", "mean", "min run", "max run")]
    for entry in doc["models"]:
        runs = entry["run_accuracies"]
        rows.append(
            (
                entry["name"],
                f"{entry['mean_accuracy']:.4f}",
                f"{min(runs):.4f}",
                f"{max(runs):.4f}",
            )
        )
    widths = [max(len(row[c]) for row in rows) for c in range(4)]
    return "\n".join(
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)) for row in rows
    )


def _render_accuracy_svg(doc: dict, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.fonttype"] = "none"
    names = [entry["name"] for entry in doc["models"]]
    means = [entry["mean_accuracy"] for entry in doc["models"]]
    spans = [
        (min(e["run_accuracies"]), max(e["run_accuracies"])) for e in doc["models"]
    ]
    fig, ax = plt.subplots(figsize=(7, 4))
    xs = np.arange(len(names))
    ax.bar(xs, means, width=0.6, color="#4878a8", zorder=2)
    errs = np.array([[m - lo for m, (lo, _) in zip(means, spans)],
                     [hi - m for m, (_, hi) in zip(means, spans)]])
    ax.errorbar(xs, means, yerr=errs, fmt="none", ecolor="#303030", capsize=4, zorder=3)
    for x, m in zip(xs, means):
        ax.text(x, min(m + 0.02, 1.04), f"{m:.3f}", ha="center", fontsize=9)
    n_runs = len(doc["models"][0]["run_accuracies"])
    ax.set_xticks(xs)
    ax.set_xticklabels(names)
    ax.set_ylim(0.0, 1.1)
    ax.set_ylabel("mean accuracy")
    ax.set_title(f"{doc['task']} / {doc['mode']}: accuracy over {n_runs} runs")
    ax.grid(axis="y", alpha=0.3, zorder=0)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _render_significance_svg(feature_names: list[str], avg_p: np.ndarray, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(8, 4))
    if all(n.startswith("freq_") for n in feature_names):
        xs = [float(n.split("_", 1)[1]) for n in feature_names]
        ax.bar(xs, avg_p, width=0.28, color="#4878a8")
        ax.set_xlabel("frequency (Hz)")
    else:
        xs = np.arange(len(feature_names))
        ax.bar(xs, avg_p, width=0.5, color="#4878a8")
        ax.set_xticks(xs)
        ax.set_xticklabels(feature_names)
    ax.axhline(0.05, color="#a83838", linewidth=1, linestyle="--", label="p = 0.05")
    ax.set_ylabel("average p-value")
    ax.set_title("feature significance (lower = more separating)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_report(args) -> int:
    doc = read_report(args.infile)
    print(_accuracy_table(doc))
    _render_accuracy_svg(doc, args.plot)
    written = [args.plot]
    if args.significance:
        _, names, values = read_significance(args.significance)
        base, ext = os.path.splitext(args.plot)
        sig_path = f"{base}-significance{ext or '.svg'}"
        _render_significance_svg(names, values[:, 0], sig_path)
        written.append(sig_path)
    print("wrote " + ", ".join(written))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    cfg = _load_sim_config(args.config)
    summary: list[tuple[str, str, str, float]] = []
    for task in (TEXTURE, STIFFNESS):
        for mode in ("FC", "AC"):
            stem = os.path.join(args.out, f"{task}_{mode.lower()}")
            traces = generate_corpus(task, mode, args.trials, cfg, args.seed)
            write_traces(f"{stem}_corpus.jsonl", traces)
            ds = extract_dataset(traces)
            write_features(f"{stem}_features.csv", ds)
            names = _parse_models(args.models)
            reports = [
                cross_validate(ds, classifier_spec(name), k=args.k, runs=args.runs,
                               seed=args.seed)
                for name in names
            ]
            config = {
                "trials_per_class": args.trials,
                "models": names,
                "k": args.k,
                "runs": args.runs,
                "seed": args.seed,
            }
            doc = _report_doc(task, mode, reports, config)
            write_report(f"{stem}_report.json", doc)
            profile = significance_profile(ds)
            write_significance(f"{stem}_significance.csv", profile)
            _render_accuracy_svg(doc, f"{stem}_accuracy.svg")
            for rep in reports:
                summary.append((task, mode, rep.model_name, rep.mean_accuracy))
    lines = ["task,mode,model,mean_accuracy"]
    lines += [f"{t},{m},{name},{acc!r}" for t, m, name, acc in summary]
    with open(os.path.join(args.out, "summary.csv"), "w", encoding="utf-8",
              newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    width = max(len(name) for _, _, name, _ in summary)
    print(f"{'task':<9} {'mode':<4} {'model':<{width}} accuracy")
    for t, m, name, acc in summary:
        print(f"{t:<9} {m:<4} {name:<{width}} {acc:.4f}")
    return EXIT_OK


def cmd_convert(args) -> int:
    times: list[float] = []
    strains: list[float] = []
    with open(args.infile, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            cells = [c.strip() for c in line.strip().split(",") if c.strip()]
            if not cells:
                continue
            if len(cells) != 2:
                raise FormatError(f"{lineno}: expected two columns (time, strain)")
            try:
                t, s = float(cells[0]), float(cells[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise FormatError(f"{lineno}: non-numeric row {cells!r}") from None
            times.append(t)
            strains.append(s)
    if len(times) < 2:
        raise FormatError("need at least two (time, strain) rows")
    deltas = np.diff(times)
    if np.any(deltas <= 0):
        raise FormatError("time column must be strictly increasing")
    fs = args.fs if args.fs else 1.0 / float(np.median(deltas))
    trace = StrainTrace(
        samples=np.asarray(strains),
        sample_rate_hz=fs,
        trial_kind=args.kind,
        contact_mode=args.mode.upper(),
        label=label_for(args.kind, args.label),
        trial_id=args.id or os.path.basename(args.infile),
    )
    line = json.dumps(trace_to_record(trace)) + "\n"
    if args.append and os.path.exists(args.out):
        with open(args.out, "a", encoding="utf-8", newline="\n") as handle:
            handle.write(line)
    else:
        atomic_write_text(args.out, line)
    print(f"converted {len(strains)} samples at {fs:g} Hz -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tendonsense",
        description="Tendon-strain tactile sensing pipeline: simulate palpation "
        "corpora, extract features, evaluate classifiers, analyze feature "
        "significance.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic trace corpus (JSONL)")
    p.add_argument("--task", choices=(TEXTURE, STIFFNESS), required=True)
    p.add_argument("--mode", choices=("fc", "ac"), default="fc")
    p.add_argument("--trials", type=_positive_int, default=60,
                   help="trials per class (default 60)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file overriding simulation defaults")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("extract", help="trace corpus (JSONL) -> feature table (CSV)")
    p.add_argument("--in", dest="infile", required=True, help="input corpus (JSONL)")
    p.add_argument("--out", required=True, help="output feature table (CSV)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="repeated k-fold validation -> report (JSON)")
    p.add_argument("--features", required=True)
    p.add_argument("--models", default=",".join(MODEL_NAMES),
                   help=f"comma-separated subset of {','.join(MODEL_NAMES)}")
    p.add_argument("--k", type=_positive_int, default=6)
    p.add_argument("--runs", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("fc", "ac", "unknown"), default="unknown",
                   help="contact mode echoed into the report")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("significance",
                       help="per-feature class-pair rank-sum p-values (CSV)")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_significance)

    p = sub.add_parser("report", help="render a report as a table and SVG charts")
    p.add_argument("--in", dest="infile", required=True, help="report JSON")
    p.add_argument("--significance", help="optional significance CSV")
    p.add_argument("--plot", required=True, help="output SVG path")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline",
                       help="run simulate/extract/evaluate/significance/report "
                            "for all four task/mode groups")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive_int, default=60)
    p.add_argument("--k", type=_positive_int, default=6)
    p.add_argument("--runs", type=_positive_int, default=10)
    p.add_argument("--models", default=",".join(MODEL_NAMES))
    p.add_argument("--config", help="JSON file overriding simulation defaults")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("convert",
                       help="two-column (time, strain) CSV -> trace record (JSONL)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--kind", choices=(TEXTURE, STIFFNESS), required=True)
    p.add_argument("--mode", choices=("fc", "ac"), default="fc")
    p.add_argument("--label", required=True)
    p.add_argument("--id", default="")
    p.add_argument("--fs", type=float, default=0.0,
                   help="sample rate; inferred from the time column if omitted")
    p.add_argument("--append", action="store_true",
                   help="append to an existing corpus instead of overwriting")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _FORMAT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FORMAT
    except _SHAPE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SHAPE
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO
    except PipelineError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
