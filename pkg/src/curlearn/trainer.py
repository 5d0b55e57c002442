"""Mini-batch softmax-regression trainer with pluggable curricula.

The model is deliberately small: multinomial logistic regression over a
hashed bag-of-tokens, optionally concatenated with the sample's
standardized index row.  Training is plain gradient descent on the
weighted mean cross-entropy, with decoupled weight decay.  Curricula hook
in at two points: weight-style schedules reweight each batch's losses,
subset-style schedules restrict the shuffle pool at epoch boundaries.

Randomness discipline: one generator seeded from the config draws the
initial weight matrix and then one permutation per epoch; nothing else
consumes randomness, so runs are reproducible bit for bit.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .corpus import Dataset, IndexMatrix
from .difficulty import DifficultyScore, aggregate_max, aggregate_weighted
from .errors import ArgumentError, ParseError, ValidationError
from .importance import (
    ImportanceVector,
    estimate_rho_correlation,
    estimate_rho_lasso,
)
from .lexical import tokenize
from .schedulers import (
    SUBSET_KINDS,
    WEIGHT_KINDS,
    CurriculumConfig,
    subset_competence,
    subset_data_selection,
    subset_sampling,
    weight_gaussian,
    weight_neg_sigmoid,
    weight_sigmoid,
)

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT_VERSION = 1
AGGREGATIONS = ("max", "weighted")


@dataclass(frozen=True)
class ModelParams:
    weights: np.ndarray  # classes x features
    bias: np.ndarray  # classes

    def copy(self) -> "ModelParams":
        return ModelParams(self.weights.copy(), self.bias.copy())


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    batch_size: int = 16
    learning_rate: float = 0.1
    weight_decay: float = 0.0
    feature_dim: int = 2048
    concat_indices: bool = False
    seed: int = 0
    validation_steps_per_epoch: int = 2
    importance_method: str = "correlation"
    lambda_rho: float = 0.01
    aggregation: str = "max"
    curriculum: CurriculumConfig = field(default_factory=CurriculumConfig)

    def __post_init__(self):
        if self.epochs < 0:
            raise ArgumentError("epochs must be non-negative")
        if self.batch_size < 1:
            raise ArgumentError("batch_size must be positive")
        if self.learning_rate <= 0:
            raise ArgumentError("learning_rate must be positive")
        if self.weight_decay < 0:
            raise ArgumentError("weight_decay must be non-negative")
        if self.feature_dim < 1:
            raise ArgumentError("feature_dim must be positive")
        if self.validation_steps_per_epoch < 1:
            raise ArgumentError("validation_steps_per_epoch must be positive")
        if self.importance_method not in ("correlation", "optimization"):
            raise ArgumentError(
                "importance_method must be 'correlation' or 'optimization'"
            )
        if self.lambda_rho < 0:
            raise ArgumentError("lambda_rho must be non-negative")
        if self.aggregation not in AGGREGATIONS:
            raise ArgumentError(f"aggregation must be one of {AGGREGATIONS}")

    def to_dict(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        ).hexdigest()

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        cur = d.pop("curriculum", {})
        return cls(curriculum=CurriculumConfig(**cur), **d)


@dataclass
class TrainRecord:
    config: TrainConfig
    index_names: list[str]
    rho_steps: list[int]
    rho_values: list[np.ndarray]
    loss_traces: dict[str, list[tuple[int, float]]]
    metric_history: list[tuple[int, float, float]]  # step, val_accuracy, val_mean_loss
    best_params: ModelParams
    best_step: int
    best_val_accuracy: float
    final_params: ModelParams
    num_classes: int

    def trace_means(self) -> dict[str, list[float]]:
        return {sid: [loss for _, loss in pts] for sid, pts in self.loss_traces.items()}


def _hash_token(token: str, dim: int) -> tuple[int, float]:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    h = int.from_bytes(digest, "big")
    sign = 1.0 if h & (1 << 63) else -1.0
    return (h % dim), sign


def featurize(
    sample,
    matrix: IndexMatrix | None,
    concat: bool,
    dim: int = 2048,
) -> np.ndarray:
    """Signed hashed bag-of-tokens, L2-normalized, plus the index row if asked.

    Both texts of a pair contribute to one shared bag.  The hash is a keyed
    digest of the token bytes, so feature positions are stable across runs
    and machines.
    """
    vec = np.zeros(dim)
    tokens = tokenize(sample.text)
    if sample.text_pair is not None:
        tokens += tokenize(sample.text_pair)
    for tok in tokens:
        slot, sign = _hash_token(tok, dim)
        vec[slot] += sign
    norm = math.sqrt(float(np.dot(vec, vec)))
    if norm > 0:
        vec /= norm
    if not concat:
        return vec
    if matrix is None:
        raise ArgumentError("concat requested but no index matrix given")
    row = matrix.values[matrix.rows_for([sample.id])[0]]
    return np.concatenate([vec, row])


def _feature_block(
    dataset: Dataset,
    split: str,
    matrix: IndexMatrix,
    cfg: TrainConfig,
) -> tuple[np.ndarray, np.ndarray]:
    samples = dataset.samples(split)
    X = np.stack(
        [featurize(s, matrix, cfg.concat_indices, cfg.feature_dim) for s in samples]
    )
    y = dataset.labels(split)
    return X, y


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def per_sample_losses(params: ModelParams, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    logits = X @ params.weights.T + params.bias
    logp = _log_softmax(logits)
    return -logp[np.arange(len(y)), y]


def predict(params: ModelParams, X: np.ndarray) -> np.ndarray:
    logits = X @ params.weights.T + params.bias
    return np.argmax(logits, axis=1)


def loss_and_grad(
    params: ModelParams,
    X: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Weighted mean cross-entropy and its exact gradient.

    Weights are normalized to sum to one inside, so the returned loss is
    sum(w_i * loss_i) / sum(w_i).  Decay is not part of this function; the
    update step applies it decoupled from the gradient.
    """
    total = float(np.sum(weights))
    if total == 0.0:
        raise ArgumentError("cannot take a gradient step with all-zero weights")
    wn = weights / total
    logits = X @ params.weights.T + params.bias
    logp = _log_softmax(logits)
    losses = -logp[np.arange(len(y)), y]
    loss = float(np.dot(wn, losses))
    probs = np.exp(logp)
    probs[np.arange(len(y)), y] -= 1.0
    G = probs * wn[:, None]
    grad_w = G.T @ X
    grad_b = G.sum(axis=0)
    return loss, grad_w, grad_b


def validate(
    params: ModelParams, X: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, float]:
    """Per-sample losses and accuracy on a held-out block."""
    losses = per_sample_losses(params, X, y)
    accuracy = float(np.mean(predict(params, X) == y))
    return losses, accuracy


def _difficulty_for_rows(
    matrix_rows: IndexMatrix, importance: ImportanceVector, aggregation: str
) -> DifficultyScore:
    if aggregation == "max":
        return aggregate_max(matrix_rows, importance)
    return aggregate_weighted(matrix_rows, importance)


def _validation_positions(steps_in_epoch: int, wanted: int) -> list[int]:
    """1-based batch positions for validations, equally spaced, last at the end."""
    effective = min(wanted, steps_in_epoch)
    if effective < wanted:
        log.warning(
            "epoch has %d steps, fewer than %d validation points; using %d",
            steps_in_epoch,
            wanted,
            effective,
        )
    return sorted({math.ceil(steps_in_epoch * (i + 1) / effective) for i in range(effective)})


def train(dataset: Dataset, matrix: IndexMatrix, cfg: TrainConfig) -> TrainRecord:
    """Run the full curriculum training loop.

    Requires a matrix standardized on the train split.  Importance weights
    start at zero and samples are weighted uniformly until the first
    validation pass produces an estimate; subset curricula likewise fall
    back to the full pool while the difficulty score is degenerate.  Subset
    pools are refreshed at epoch boundaries: the growing schedules
    (sampling, competence) are evaluated at end-of-epoch progress e/E so
    the final epoch sees all data, while the warmup test uses
    start-of-epoch progress (e-1)/E so warmup spans the leading fraction
    of epochs.  Within an epoch, progress for the weight curves advances
    per batch.
    """
    if not matrix.standardized:
        raise ArgumentError("train requires a standardized index matrix")
    train_samples = dataset.samples("train")
    val_samples = dataset.samples("validation")
    if not train_samples:
        raise ArgumentError("train split is empty")
    if len(val_samples) < 2:
        raise ArgumentError("validation split needs at least two samples")
    n_classes = dataset.num_classes
    if n_classes < 2:
        raise ArgumentError("need at least two classes")

    rng = np.random.default_rng(cfg.seed)
    X_train, y_train = _feature_block(dataset, "train", matrix, cfg)
    X_val, y_val = _feature_block(dataset, "validation", matrix, cfg)
    train_ids = dataset.ids("train")
    n_train = len(train_ids)
    train_rows = matrix.rows_for(train_ids)
    val_rows = matrix.rows_for(dataset.ids("validation"))
    Z_val = matrix.values[val_rows]
    train_matrix = IndexMatrix(
        sample_ids=train_ids,
        index_names=list(matrix.index_names),
        values=matrix.values[train_rows],
        standardized=True,
        zero_variance=matrix.zero_variance.copy(),
    )

    n_features = X_train.shape[1]
    params = ModelParams(
        weights=rng.normal(0.0, 0.01, size=(n_classes, n_features)),
        bias=np.zeros(n_classes),
    )

    kind = cfg.curriculum.kind
    importance: ImportanceVector | None = None
    s_train: np.ndarray | None = None

    record = TrainRecord(
        config=cfg,
        index_names=list(matrix.index_names),
        rho_steps=[],
        rho_values=[],
        loss_traces={sid: [] for sid in train_ids},
        metric_history=[],
        best_params=params.copy(),
        best_step=0,
        best_val_accuracy=float("nan"),
        final_params=params.copy(),
        num_classes=n_classes,
    )

    def epoch_pool(epoch: int) -> np.ndarray:
        """Positions (into the train split) eligible during this epoch."""
        if kind not in SUBSET_KINDS or s_train is None or np.ptp(s_train) == 0.0:
            if kind in SUBSET_KINDS:
                log.debug("epoch %d: difficulty degenerate, using full pool", epoch)
            return np.arange(n_train)
        score = DifficultyScore(
            values=s_train, source="ling_weighted", sample_ids=tuple(train_ids)
        )
        t_end = epoch / cfg.epochs
        t_start = (epoch - 1) / cfg.epochs
        cur = cfg.curriculum
        if kind == "sampling":
            keep = subset_sampling(score, t_end)
        elif kind == "competence":
            keep = subset_competence(
                score, t_end, cur.competence_c0, cur.competence_shape
            )
        else:
            keep = subset_data_selection(score, t_start, cur.warmup_fraction)
        return np.array(
            [i for i, sid in enumerate(train_ids) if sid in keep], dtype=np.intp
        )

    def batch_weights(positions: np.ndarray, t: float) -> np.ndarray:
        if kind not in WEIGHT_KINDS or importance is None:
            return np.ones(len(positions))
        s = s_train[positions]
        cur = cfg.curriculum
        if kind == "sigmoid":
            return weight_sigmoid(s, t, cur.beta)
        if kind == "neg_sigmoid":
            return weight_neg_sigmoid(s, t, cur.beta)
        return weight_gaussian(s, t, cur.gamma)

    step = 0
    best_acc = -math.inf
    for epoch in range(1, cfg.epochs + 1):
        pool = epoch_pool(epoch)
        order = pool[rng.permutation(len(pool))]
        batches = [
            order[i : i + cfg.batch_size]
            for i in range(0, len(order), cfg.batch_size)
        ]
        val_at = set(_validation_positions(len(batches), cfg.validation_steps_per_epoch))
        for b_idx, batch in enumerate(batches, start=1):
            t = ((epoch - 1) + (b_idx - 1) / len(batches)) / cfg.epochs
            step += 1
            w = batch_weights(batch, t)
            wsum = float(np.sum(w))
            if wsum == 0.0:
                log.warning("step %d: all batch weights are zero, skipping update", step)
            else:
                _, grad_w, grad_b = loss_and_grad(
                    params, X_train[batch], y_train[batch], w
                )
                new_w = params.weights - cfg.learning_rate * grad_w
                if cfg.weight_decay:
                    new_w = new_w - (cfg.learning_rate * cfg.weight_decay) * params.weights
                params = ModelParams(
                    weights=new_w, bias=params.bias - cfg.learning_rate * grad_b
                )
            if b_idx in val_at:
                val_losses, val_acc = validate(params, X_val, y_val)
                if cfg.importance_method == "correlation":
                    importance = estimate_rho_correlation(Z_val, val_losses)
                else:
                    importance = estimate_rho_lasso(Z_val, val_losses, cfg.lambda_rho)
                importance = replace(importance, step=step)
                record.rho_steps.append(step)
                record.rho_values.append(importance.rho.copy())
                s_train = _difficulty_for_rows(
                    train_matrix, importance, cfg.aggregation
                ).values
                full_losses = per_sample_losses(params, X_train, y_train)
                for sid, loss_val in zip(train_ids, full_losses):
                    record.loss_traces[sid].append((step, float(loss_val)))
                record.metric_history.append(
                    (step, val_acc, float(np.mean(val_losses)))
                )
                if val_acc > best_acc:
                    best_acc = val_acc
                    record.best_params = params.copy()
                    record.best_step = step
                    record.best_val_accuracy = val_acc
    record.final_params = params.copy()
    return record


# ---------------------------------------------------------------------------
# persistence


def save_checkpoint(
    params: ModelParams, cfg: TrainConfig, path: str, extras: dict | None = None
) -> None:
    """Binary dump of the parameters with a hashed-config header."""
    meta = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "config_hash": cfg.hash(),
        "config": cfg.to_dict(),
    }
    if extras:
        meta["extras"] = extras
    np.savez(
        path,
        weights=params.weights,
        bias=params.bias,
        meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
    )


def load_checkpoint(path: str) -> tuple[ModelParams, TrainConfig, dict]:
    with np.load(path) as data:
        for key in ("weights", "bias", "meta"):
            if key not in data:
                raise ParseError(f"{path}: missing checkpoint field {key!r}")
        meta = json.loads(bytes(data["meta"]).decode("utf-8"))
        if meta.get("format_version") != CHECKPOINT_FORMAT_VERSION:
            raise ValidationError(
                f"{path}: unsupported checkpoint format "
                f"{meta.get('format_version')!r}"
            )
        params = ModelParams(weights=data["weights"], bias=data["bias"])
    cfg = TrainConfig.from_dict(meta["config"])
    if cfg.hash() != meta["config_hash"]:
        raise ValidationError(f"{path}: config hash mismatch")
    return params, cfg, meta


def record_from_checkpoint(path: str) -> TrainRecord:
    """A minimal record around a saved checkpoint, enough for filtering.

    Trajectories and traces are not part of a checkpoint, so those fields
    come back empty; the best step and accuracy are restored when the
    writer recorded them.
    """
    params, cfg, meta = load_checkpoint(path)
    extras = meta.get("extras", {})
    best_step = int(extras.get("best_step", 0))
    best_acc = float(extras.get("best_val_accuracy", float("nan")))
    return TrainRecord(
        config=cfg,
        index_names=list(extras.get("index_names", [])),
        rho_steps=[],
        rho_values=[],
        loss_traces={},
        metric_history=[(best_step, best_acc, float("nan"))],
        best_params=params,
        best_step=best_step,
        best_val_accuracy=best_acc,
        final_params=params,
        num_classes=params.weights.shape[0],
    )


def write_rho_trajectory(record: TrainRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "index_name", "rho"])
        for s, values in zip(record.rho_steps, record.rho_values):
            for name, value in zip(record.index_names, values):
                writer.writerow([s, name, repr(float(value))])


def write_loss_traces(record: TrainRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "step", "loss"])
        for sid, points in record.loss_traces.items():
            for s, loss_val in points:
                writer.writerow([sid, s, repr(loss_val)])


def load_loss_traces(path: str) -> dict[str, list[tuple[int, float]]]:
    traces: dict[str, list[tuple[int, float]]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["sample_id", "step", "loss"]:
            raise ParseError(f"{path}: expected header 'sample_id,step,loss'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 fields")
            try:
                traces.setdefault(row[0], []).append((int(row[1]), float(row[2])))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad step or loss") from None
    return traces


def write_metric_history(record: TrainRecord, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "val_accuracy", "val_mean_loss"])
        for s, acc, loss_val in record.metric_history:
            writer.writerow([s, repr(acc), repr(loss_val)])
