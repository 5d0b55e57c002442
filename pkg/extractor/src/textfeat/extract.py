"""Batch feature extraction and tag emission over JSONL datasets.

Both entry points write an output file plus a JSON manifest alongside it
(``<out>.manifest.json``) recording tool and library versions, the column
or tag inventory, a content hash of the input dataset, and the ids of any
samples that needed fallback values.  Output files are written only after
every row has been computed, so a crash never leaves a partial file.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import platform
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import ParseError, ValidationError
from .features import COLUMNS, FIRST_K, MSTTR_SEGMENT, compute_features
from .tagger import tag_tokens
from .tokens import tokenize
from .wordlist import FREQ_CUTOFF, RANKED_WORDS

log = logging.getLogger(__name__)

_PAIR_SUFFIXES = (" (P)", " (H)")


@dataclass(frozen=True)
class TextSample:
    id: str
    text: str
    text_pair: str | None = None


def read_dataset(path: str) -> list[TextSample]:
    """Parse a JSONL dataset, reporting the line number of any defect.

    Records need ``id``, ``text``, ``label`` and ``split`` fields with an
    optional string ``text_pair``; only the texts are kept here, but the
    full schema is enforced so malformed corpora fail identically at every
    stage of a pipeline.
    """
    samples: list[TextSample] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise ParseError(f"{path}:{lineno}: record must be a JSON object")
            for key in ("id", "text", "label", "split"):
                if key not in rec:
                    raise ParseError(f"{path}:{lineno}: missing field {key!r}")
            if not isinstance(rec["id"], str):
                raise ParseError(f"{path}:{lineno}: 'id' must be a string")
            if not isinstance(rec["text"], str):
                raise ParseError(f"{path}:{lineno}: 'text' must be a string")
            pair = rec.get("text_pair")
            if pair is not None and not isinstance(pair, str):
                raise ParseError(f"{path}:{lineno}: 'text_pair' must be a string")
            if rec["id"] in seen:
                raise ValidationError(f"{path}: duplicate sample id {rec['id']!r}")
            seen.add(rec["id"])
            samples.append(TextSample(id=rec["id"], text=rec["text"], text_pair=pair))
    return samples


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _manifest(
    dataset_path: str,
    samples: list[TextSample],
    pair_task: bool,
    columns: list[str],
    fallback: list[str],
    kind: str,
) -> dict:
    return {
        "tool": "textfeat",
        "kind": kind,
        "version": __version__,
        "toolkit_versions": {
            "textfeat": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "dataset": dataset_path,
        "dataset_sha256": _sha256(dataset_path),
        "n_samples": len(samples),
        "pair_task": pair_task,
        "columns": columns,
        "parameters": {
            "msttr_segment": MSTTR_SEGMENT,
            "first_k": FIRST_K,
            "freq_cutoff": FREQ_CUTOFF,
            "freq_list_size": len(RANKED_WORDS),
        },
        "fallback_samples": fallback,
    }


def _write_manifest(out_path: str, manifest: dict) -> str:
    manifest_path = out_path + ".manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def extract_full(dataset_path: str, out_path: str) -> dict:
    """Extract all 241 features per text into a CSV keyed by sample_id.

    On a pair task each text contributes one block and column names carry
    " (P)" / " (H)" suffixes, 482 columns total; a sample without a second
    text gets zeros in the (H) block.  A sample whose extraction raises is
    given the column means of the successfully processed samples and is
    listed under ``fallback_samples`` in the manifest.  Returns the
    manifest dict.
    """
    samples = read_dataset(dataset_path)
    pair_task = any(s.text_pair is not None for s in samples)
    width = 2 * len(COLUMNS) if pair_task else len(COLUMNS)

    rows: list[np.ndarray | None] = []
    failed: list[str] = []
    for s in samples:
        try:
            row = compute_features(s.text)
            if pair_task:
                if s.text_pair is None:
                    second = np.zeros(len(COLUMNS))
                else:
                    second = compute_features(s.text_pair)
                row = np.concatenate([row, second])
            rows.append(row)
        except Exception as exc:
            log.warning("sample %r failed to extract: %s", s.id, exc)
            failed.append(s.id)
            rows.append(None)

    good = [r for r in rows if r is not None]
    fallback_row = (
        np.mean(np.stack(good), axis=0) if good else np.zeros(width)
    )
    resolved = [r if r is not None else fallback_row for r in rows]

    if pair_task:
        columns = [f"{n}{_PAIR_SUFFIXES[0]}" for n in COLUMNS] + [
            f"{n}{_PAIR_SUFFIXES[1]}" for n in COLUMNS
        ]
    else:
        columns = list(COLUMNS)

    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id"] + columns)
        for s, row in zip(samples, resolved):
            writer.writerow([s.id] + [repr(float(v)) for v in row])

    manifest = _manifest(dataset_path, samples, pair_task, columns, failed, "features")
    _write_manifest(out_path, manifest)
    return manifest


def emit_tags(dataset_path: str, out_path: str) -> dict:
    """Tokenize and coarse-tag every text into a JSONL file.

    Each record holds ``id``, ``tokens`` and ``tags`` (aligned one to one),
    plus ``tokens_pair``/``tags_pair`` when the sample has a second text.
    A sample whose tagging raises falls back to its tokens with every tag
    set to OTHER (or empty arrays if tokenization itself failed) and is
    listed in the manifest.  Returns the manifest dict.
    """
    samples = read_dataset(dataset_path)
    pair_task = any(s.text_pair is not None for s in samples)

    records: list[dict] = []
    failed: list[str] = []
    for s in samples:
        rec: dict = {"id": s.id}
        try:
            tokens = tokenize(s.text)
            rec["tokens"] = tokens
            rec["tags"] = tag_tokens(tokens)
            if s.text_pair is not None:
                tokens_pair = tokenize(s.text_pair)
                rec["tokens_pair"] = tokens_pair
                rec["tags_pair"] = tag_tokens(tokens_pair)
        except Exception as exc:
            log.warning("sample %r failed to tag: %s", s.id, exc)
            failed.append(s.id)
            tokens = rec.get("tokens", [])
            rec["tokens"] = tokens
            rec["tags"] = ["OTHER"] * len(tokens)
            if s.text_pair is not None:
                tokens_pair = rec.get("tokens_pair", [])
                rec["tokens_pair"] = tokens_pair
                rec["tags_pair"] = ["OTHER"] * len(tokens_pair)
        records.append(rec)

    with open(out_path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False))
            fh.write("\n")

    manifest = _manifest(
        dataset_path,
        samples,
        pair_task,
        ["id", "tokens", "tags"]
        + (["tokens_pair", "tags_pair"] if pair_task else []),
        failed,
        "tags",
    )
    _write_manifest(out_path, manifest)
    return manifest
