"""Command-line entry point.

Subcommands mirror the pipeline: ``extract`` indices from a dataset,
``train`` a model under a curriculum, ``eval`` accuracy across difficulty
bins, ``filter`` the index inventory, and ``analyze`` an importance
trajectory.  Options resolve in three layers: command-line flags override
the optional JSON config file, which overrides built-in defaults.

Exit codes: 0 on success, 1 for usage errors, 2 when input data violates
a documented contract.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import (
    CurlearnError,
    ArgumentError,
    CurriculumConfig,
    TrainConfig,
    binned_balanced_accuracy,
    cluster_trajectories,
    complete_linkage_clusters,
    compute_index_matrix,
    correlation_distance,
    correlation_matrix,
    filter_by_trend,
    load_checkpoint,
    load_dataset,
    load_frequency_list,
    load_index_matrix,
    load_rho_trajectory,
    load_tagged,
    record_from_checkpoint,
    save_checkpoint,
    select_representatives,
    standardize,
    train,
    write_bin_report_csv,
    write_index_matrix,
    write_loss_traces,
    write_metric_history,
    write_rho_trajectory,
)
from .difficulty import aggregate_max, aggregate_weighted
from .importance import ImportanceVector
from .lexical import LexicalOptions
from .schedulers import KINDS
from .trainer import featurize, per_sample_losses, predict
from .trajectory import (
    write_change_report,
    write_stage_report,
    write_trajectory_clusters,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="curlearn",
        description="Curriculum training driven by linguistic complexity indices.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument(
        "--config", default=None, help="JSON config file supplying option defaults"
    )
    common.add_argument(
        "--out-dir", default=None, help="directory for output files (default: .)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="compute native indices")
    p.add_argument("--dataset", default=None)
    p.add_argument("--freq", default=None, help="word list, most frequent first")
    p.add_argument("--freq-cutoff", type=int, default=None)
    p.add_argument("--tags", default=None, help="tagged JSONL for tag-based indices")
    p.add_argument("--msttr-segment", type=int, default=None)
    p.add_argument("--first-k", type=int, default=None)
    p.add_argument(
        "--skip-sophistication",
        action="store_true",
        default=None,
        help="omit the indices that need a frequency list",
    )
    p.add_argument("--out", default=None, help="output CSV name")

    p = sub.add_parser("train", parents=[common], help="train under a curriculum")
    p.add_argument("--dataset", default=None)
    p.add_argument("--index-matrix", default=None)
    p.add_argument("--curriculum", choices=KINDS, default=None)
    p.add_argument(
        "--importance", choices=("correlation", "optimization"), default=None
    )
    p.add_argument("--aggregation", choices=("max", "weighted"), default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--weight-decay", type=float, default=None)
    p.add_argument("--feature-dim", type=int, default=None)
    p.add_argument("--concat-indices", action="store_true", default=None)
    p.add_argument("--validation-steps", type=int, default=None)
    p.add_argument("--lambda-rho", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--competence-c0", type=float, default=None)
    p.add_argument("--competence-shape", choices=("linear", "sqrt"), default=None)
    p.add_argument("--warmup-fraction", type=float, default=None)

    p = sub.add_parser("eval", parents=[common], help="accuracy by difficulty bin")
    p.add_argument("--dataset", default=None)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--index-matrix", default=None)
    p.add_argument("--split", choices=("train", "validation", "test"), default=None)
    p.add_argument(
        "--by",
        default=None,
        help="difficulty source: an index name, 'loss', or 'aggregate'",
    )
    p.add_argument("--trajectory", default=None, help="rho CSV for --by aggregate")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--min-count", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("filter", parents=[common], help="narrow the index inventory")
    p.add_argument("--method", choices=("trend", "cluster"), default=None)
    p.add_argument("--dataset", default=None)
    p.add_argument("--index-matrix", default=None)
    p.add_argument("--checkpoint", default=None, help="baseline for trend filtering")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--min-count", type=int, default=None)
    p.add_argument("--keep-fraction", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument(
        "--trend-ranking",
        default=None,
        help="trend CSV used as the representative hint when clustering",
    )

    p = sub.add_parser("analyze", parents=[common], help="study a rho trajectory")
    p.add_argument("--trajectory", default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--cluster-threshold", type=float, default=None)
    return parser


class _Options:
    """Three-layer option resolution: flag, then config file, then default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file: dict = {}
        if args.config:
            try:
                with open(args.config, "r", encoding="utf-8") as fh:
                    self.file = json.load(fh)
            except OSError as exc:
                raise ArgumentError(f"cannot read config file: {exc}") from None
            except json.JSONDecodeError as exc:
                raise ArgumentError(
                    f"{args.config}: config must be valid JSON ({exc.msg})"
                ) from None
            if not isinstance(self.file, dict):
                raise ArgumentError(f"{args.config}: config must be a JSON object")

    def get(self, key: str, default=None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.file:
            return self.file[key]
        return default

    def require(self, key: str, flag_name: str):
        value = self.get(key)
        if value is None:
            raise ArgumentError(f"missing required option {flag_name}")
        return value


def _out_path(opts: _Options, name: str) -> str:
    out_dir = Path(opts.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    return str(out_dir / name)


def _cmd_extract(opts: _Options) -> int:
    dataset = load_dataset(opts.require("dataset", "--dataset"))
    skip_soph = bool(opts.get("skip_sophistication", False))
    freq_path = opts.get("freq")
    freq = None
    if not skip_soph:
        if freq_path is None:
            raise ArgumentError(
                "sophistication indices need --freq (or use --skip-sophistication)"
            )
        freq = load_frequency_list(freq_path, int(opts.get("freq_cutoff", 2000)))
    tags = None
    tags_path = opts.get("tags")
    if tags_path is not None:
        tags = load_tagged(tags_path)
    lex = LexicalOptions(
        msttr_segment=int(opts.get("msttr_segment", 50)),
        first_k=int(opts.get("first_k", 50)),
    )
    matrix = compute_index_matrix(dataset, freq, tags, lex)
    out = _out_path(opts, opts.get("out", "indices.csv"))
    write_index_matrix(matrix, out)
    print(f"wrote {matrix.n_samples} rows x {matrix.n_indices} indices to {out}")
    return EXIT_OK


def _train_config(opts: _Options) -> TrainConfig:
    curriculum = CurriculumConfig(
        kind=opts.get("curriculum", "none"),
        beta=float(opts.get("beta", 10.0)),
        gamma=float(opts.get("gamma", 8.0)),
        competence_c0=float(opts.get("competence_c0", 0.1)),
        competence_shape=opts.get("competence_shape", "linear"),
        warmup_fraction=float(opts.get("warmup_fraction", 0.2)),
    )
    return TrainConfig(
        epochs=int(opts.get("epochs", 5)),
        batch_size=int(opts.get("batch_size", 16)),
        learning_rate=float(opts.get("learning_rate", 0.1)),
        weight_decay=float(opts.get("weight_decay", 0.0)),
        feature_dim=int(opts.get("feature_dim", 2048)),
        concat_indices=bool(opts.get("concat_indices", False)),
        seed=int(opts.get("seed", 0)),
        validation_steps_per_epoch=int(opts.get("validation_steps", 2)),
        importance_method=opts.get("importance", "correlation"),
        lambda_rho=float(opts.get("lambda_rho", 0.01)),
        aggregation=opts.get("aggregation", "max"),
        curriculum=curriculum,
    )


def _cmd_train(opts: _Options) -> int:
    dataset = load_dataset(opts.require("dataset", "--dataset"))
    matrix = load_index_matrix(opts.require("index_matrix", "--index-matrix"), dataset)
    matrix = standardize(matrix, dataset.ids("train"))
    cfg = _train_config(opts)
    record = train(dataset, matrix, cfg)
    ckpt = _out_path(opts, "checkpoint.npz")
    save_checkpoint(
        record.best_params,
        cfg,
        ckpt,
        extras={
            "best_step": record.best_step,
            "best_val_accuracy": record.best_val_accuracy,
            "index_names": record.index_names,
        },
    )
    write_rho_trajectory(record, _out_path(opts, "rho_trajectory.csv"))
    write_loss_traces(record, _out_path(opts, "loss_traces.csv"))
    write_metric_history(record, _out_path(opts, "metrics.csv"))
    print(
        f"trained {cfg.epochs} epochs, curriculum={cfg.curriculum.kind}; "
        f"best validation accuracy {record.best_val_accuracy:.4f} "
        f"at step {record.best_step}; checkpoint: {ckpt}"
    )
    return EXIT_OK


def _cmd_eval(opts: _Options) -> int:
    dataset = load_dataset(opts.require("dataset", "--dataset"))
    params, cfg, _ = load_checkpoint(opts.require("checkpoint", "--checkpoint"))
    split = opts.get("split", "test")
    samples = dataset.samples(split)
    if not samples:
        raise ArgumentError(f"split {split!r} is empty")
    matrix_path = opts.get("index_matrix")
    raw = std = None
    if matrix_path is not None:
        raw = load_index_matrix(matrix_path, dataset)
        std = standardize(raw, dataset.ids("train"))
    by = opts.get("by", "loss")
    feature_matrix = std if cfg.concat_indices else None
    if cfg.concat_indices and std is None:
        raise ArgumentError(
            "checkpoint was trained with concatenated indices; --index-matrix required"
        )
    X = np.stack(
        [featurize(s, feature_matrix, cfg.concat_indices, cfg.feature_dim) for s in samples]
    )
    y = dataset.labels(split)
    rows = None
    if by == "loss":
        difficulty = per_sample_losses(params, X, y)
    elif by == "aggregate":
        if std is None:
            raise ArgumentError("--by aggregate needs --index-matrix")
        traj_path = opts.get("trajectory")
        if traj_path is None:
            raise ArgumentError("--by aggregate needs --trajectory")
        traj = load_rho_trajectory(traj_path)
        if set(traj.index_names) != set(std.index_names):
            raise ArgumentError(
                "trajectory and index matrix disagree on index names"
            )
        order = [traj.index_names.index(n) for n in std.index_names]
        importance = ImportanceVector(
            rho=traj.values[-1][order],
            method=cfg.importance_method,
            step=traj.steps[-1],
        )
        rows = std.rows_for([s.id for s in samples])
        sub = type(std)(
            sample_ids=[s.id for s in samples],
            index_names=list(std.index_names),
            values=std.values[rows],
            standardized=True,
            zero_variance=std.zero_variance.copy(),
        )
        if cfg.aggregation == "max":
            difficulty = aggregate_max(sub, importance).values
        else:
            difficulty = aggregate_weighted(sub, importance).values
    else:
        if raw is None:
            raise ArgumentError(f"--by {by!r} needs --index-matrix")
        rows = raw.rows_for([s.id for s in samples])
        difficulty = raw.column(by)[rows]
    preds = predict(params, X)
    report = binned_balanced_accuracy(
        preds,
        y,
        difficulty,
        m=int(opts.get("bins", 10)),
        min_count=int(opts.get("min_count", 5)),
    )
    out = _out_path(opts, opts.get("out", "bins.csv"))
    write_bin_report_csv(report, out)
    slope = "n/a" if report.trend_slope is None else f"{report.trend_slope:.4f}"
    print(
        f"split={split} by={by} n={report.n} bins={report.n_bins} "
        f"plain={report.plain_accuracy:.4f} balanced={report.balanced_accuracy:.4f} "
        f"trend_slope={slope}; wrote {out}"
    )
    return EXIT_OK


def _cmd_filter(opts: _Options) -> int:
    method = opts.require("method", "--method")
    dataset = load_dataset(opts.require("dataset", "--dataset"))
    matrix = load_index_matrix(opts.require("index_matrix", "--index-matrix"), dataset)
    std = standardize(matrix, dataset.ids("train"))
    if method == "trend":
        baseline = record_from_checkpoint(opts.require("checkpoint", "--checkpoint"))
        result = filter_by_trend(
            dataset,
            std,
            baseline,
            m=int(opts.get("bins", 10)),
            keep_fraction=float(opts.get("keep_fraction", 0.3)),
            min_count=int(opts.get("min_count", 5)),
        )
        ranking_path = _out_path(opts, "trend_ranking.csv")
        with open(ranking_path, "w", encoding="utf-8") as fh:
            fh.write("index,slope\n")
            for name, slope in zip(result.ranked_names, result.slopes):
                fh.write(f"{name},{slope!r}\n")
        kept_path = _out_path(opts, "kept_indices.txt")
        with open(kept_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(result.kept_names) + "\n")
        print(
            f"ranked {len(result.ranked_names)} indices, kept "
            f"{len(result.kept_names)}; wrote {ranking_path} and {kept_path}"
        )
        return EXIT_OK
    # correlation clustering
    R = correlation_matrix(std)
    labels = complete_linkage_clusters(
        correlation_distance(R), float(opts.get("threshold", 0.3))
    )
    hint = None
    hint_path = opts.get("trend_ranking")
    if hint_path is not None:
        hint = {}
        with open(hint_path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "index,slope":
                raise ArgumentError(f"{hint_path}: expected header 'index,slope'")
            for line in fh:
                if not line.strip():
                    continue
                name, slope = line.rstrip("\n").rsplit(",", 1)
                hint[name] = abs(float(slope))
    reps = select_representatives(labels, R, std.index_names, hint)
    clusters_path = _out_path(opts, "index_clusters.csv")
    with open(clusters_path, "w", encoding="utf-8") as fh:
        fh.write("index,cluster\n")
        for name, label in zip(std.index_names, labels):
            fh.write(f"{name},{int(label)}\n")
    reps_path = _out_path(opts, "representatives.txt")
    with open(reps_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(reps) + "\n")
    print(
        f"{len(set(labels.tolist()))} clusters over {len(std.index_names)} indices; "
        f"wrote {clusters_path} and {reps_path}"
    )
    return EXIT_OK


def _cmd_analyze(opts: _Options) -> int:
    traj = load_rho_trajectory(opts.require("trajectory", "--trajectory"))
    k_top = int(opts.get("top_k", 3))
    stage_path = _out_path(opts, "stage_report.tsv")
    write_stage_report(traj, stage_path, k_top)
    change_path = _out_path(opts, "change_report.tsv")
    write_change_report(traj, change_path)
    labels = cluster_trajectories(traj, float(opts.get("cluster_threshold", 0.3)))
    cluster_path = _out_path(opts, "trajectory_clusters.tsv")
    write_trajectory_clusters(traj, labels, cluster_path)
    print(
        f"{traj.n_snapshots} snapshots over {len(traj.index_names)} indices; "
        f"wrote {stage_path}, {change_path}, {cluster_path}"
    )
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "filter": _cmd_filter,
    "analyze": _cmd_analyze,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _Options(args)
        return _COMMANDS[args.command](opts)
    except ArgumentError as exc:
        # bad or missing options are usage errors
        print(f"curlearn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CurlearnError as exc:
        print(f"curlearn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
