"""Dataset model and interchange format.

A dataset is a taxonomy (ordered label names) plus examples. Each example
carries precomputed image/text embeddings of equal width, belongs to a
group (an original record plus its paraphrase variants), and optionally a
gold set of label indices. Files are UTF-8 JSON lines, one record each:

    {"id": "...", "group": "...", "origin": "original"|"paraphrase",
     "image_embedding": [...], "text_embedding": [...],
     "labels": ["Smears", ...]}        # optional; absent = unlabeled

The ``labels`` key is omitted for unlabeled records and kept (possibly
empty) for labeled ones, so "no techniques" and "not annotated" stay
distinct across a round trip.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional

import numpy as np

from .errors import DataError

ORIGINAL = "original"
PARAPHRASE = "paraphrase"

_RECORD_KEYS = {"id", "group", "origin", "image_embedding", "text_embedding", "labels"}


@dataclass(frozen=True)
class Taxonomy:
    """Ordered list of unique label names; a label's index is stable."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise DataError("taxonomy must contain at least one label")
        if any(not name for name in self.labels):
            raise DataError("taxonomy labels must be non-empty strings")
        if len(set(self.labels)) != len(self.labels):
            raise DataError("taxonomy labels must be unique")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DataError(f"unknown label {name!r}") from None

    @classmethod
    def from_file(cls, path) -> "Taxonomy":
        with open(path, encoding="utf-8") as fh:
            names = [line.rstrip("\n") for line in fh if line.strip()]
        return cls(tuple(names))

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for name in self.labels:
                fh.write(name + "\n")


@dataclass(frozen=True)
class Example:
    """One record: a group member with its embeddings and optional gold set."""

    id: str
    group: str
    image_embedding: np.ndarray
    text_embedding: np.ndarray
    origin: str = ORIGINAL
    gold: Optional[frozenset[int]] = None


@dataclass(frozen=True)
class Dataset:
    taxonomy: Taxonomy
    examples: tuple[Example, ...] = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        """Shared embedding width; 0 for an empty dataset."""
        return len(self.examples[0].image_embedding) if self.examples else 0

    def __len__(self) -> int:
        return len(self.examples)

    def group_ids(self) -> list[str]:
        """Distinct group ids in first-appearance order."""
        seen: dict[str, None] = {}
        for ex in self.examples:
            seen.setdefault(ex.group, None)
        return list(seen)

    def originals(self) -> "Dataset":
        """The sub-dataset of origin=original records, in order."""
        return Dataset(self.taxonomy, tuple(ex for ex in self.examples if ex.origin == ORIGINAL))


def _as_embedding(value, line_no: int, key: str) -> np.ndarray:
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
        raise DataError(f"line {line_no}: {key} must be an array of numbers")
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DataError(f"line {line_no}: {key} must be a non-empty flat array")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"line {line_no}: {key} contains non-finite entries")
    arr.flags.writeable = False
    return arr


def _parse_record(line: str, line_no: int, taxonomy: Taxonomy) -> Example:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"line {line_no}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise DataError(f"line {line_no}: record must be a JSON object")
    unknown = set(obj) - _RECORD_KEYS
    if unknown:
        raise DataError(f"line {line_no}: unknown keys {sorted(unknown)}")
    for key in ("id", "group", "origin"):
        if not isinstance(obj.get(key), str) or not obj[key]:
            raise DataError(f"line {line_no}: missing or invalid {key!r}")
    if obj["origin"] not in (ORIGINAL, PARAPHRASE):
        raise DataError(f"line {line_no}: origin must be 'original' or 'paraphrase'")

    image = _as_embedding(obj.get("image_embedding"), line_no, "image_embedding")
    text = _as_embedding(obj.get("text_embedding"), line_no, "text_embedding")
    if image.shape != text.shape:
        raise DataError(
            f"line {line_no}: image dim {image.size} != text dim {text.size}"
        )

    gold = None
    if "labels" in obj:
        names = obj["labels"]
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise DataError(f"line {line_no}: labels must be an array of strings")
        try:
            gold = frozenset(taxonomy.index(n) for n in names)
        except DataError as exc:
            raise DataError(f"line {line_no}: {exc}") from None

    return Example(obj["id"], obj["group"], image, text, obj["origin"], gold)


def parse_dataset(stream: IO[str] | Iterable[str], taxonomy: Taxonomy) -> Dataset:
    """Parse line-delimited records into a validated Dataset.

    Raises DataError (with line numbers where applicable) on malformed
    records, embedding dimension mismatches, duplicate ids, unknown label
    names, or groups without exactly one original member.
    """
    examples: list[Example] = []
    ids: set[str] = set()
    originals_per_group: dict[str, int] = {}
    dim = None
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        ex = _parse_record(line, line_no, taxonomy)
        if ex.id in ids:
            raise DataError(f"line {line_no}: duplicate id {ex.id!r}")
        ids.add(ex.id)
        if dim is None:
            dim = ex.image_embedding.size
        elif ex.image_embedding.size != dim:
            raise DataError(
                f"line {line_no}: embedding dim {ex.image_embedding.size} != dataset dim {dim}"
            )
        originals_per_group.setdefault(ex.group, 0)
        if ex.origin == ORIGINAL:
            originals_per_group[ex.group] += 1
        examples.append(ex)

    for group, n_orig in originals_per_group.items():
        if n_orig != 1:
            raise DataError(f"group {group!r} has {n_orig} original records, expected exactly 1")
    return Dataset(taxonomy, tuple(examples))


def load_dataset(path, taxonomy: Taxonomy) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh, taxonomy)


def serialize_dataset(ds: Dataset, stream: IO[str]) -> None:
    """Write the line-delimited format; parse(serialize(ds)) == ds."""
    for ex in ds.examples:
        record = {
            "id": ex.id,
            "group": ex.group,
            "origin": ex.origin,
            "image_embedding": ex.image_embedding.tolist(),
            "text_embedding": ex.text_embedding.tolist(),
        }
        if ex.gold is not None:
            record["labels"] = [ds.taxonomy.labels[j] for j in sorted(ex.gold)]
        stream.write(json.dumps(record) + "\n")


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        serialize_dataset(ds, fh)


def split_train_validation(ds: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic group-wise split; returns (train, validation).

    Validation receives ceil(fraction * n_groups) whole groups chosen by a
    seeded shuffle, so an original is never separated from its
    paraphrases. Example order within each side follows the input.
    """
    if not 0.0 < fraction < 1.0:
        raise DataError(f"split fraction must be in (0, 1), got {fraction}")
    groups = ds.group_ids()
    if len(groups) < 2:
        raise DataError(f"need at least 2 groups to split, got {len(groups)}")
    n_val = math.ceil(fraction * len(groups))
    rng = np.random.default_rng(seed)
    shuffled = [groups[i] for i in rng.permutation(len(groups))]
    val_groups = set(shuffled[:n_val])
    train = tuple(ex for ex in ds.examples if ex.group not in val_groups)
    val = tuple(ex for ex in ds.examples if ex.group in val_groups)
    return Dataset(ds.taxonomy, train), Dataset(ds.taxonomy, val)


def label_counts(ds: Dataset) -> np.ndarray:
    """Per-label gold counts over origin=original examples only."""
    counts = np.zeros(len(ds.taxonomy), dtype=np.int64)
    for ex in ds.examples:
        if ex.origin != ORIGINAL:
            continue
        if ex.gold is None:
            raise DataError(f"example {ex.id!r} has no gold labels")
        for j in ex.gold:
            counts[j] += 1
    return counts


def gold_matrix(ds: Dataset) -> np.ndarray:
    """N x L binary matrix of gold labels, rows in dataset order."""
    mat = np.zeros((len(ds.examples), len(ds.taxonomy)))
    for n, ex in enumerate(ds.examples):
        if ex.gold is None:
            raise DataError(f"example {ex.id!r} has no gold labels")
        for j in ex.gold:
            mat[n, j] = 1.0
    return mat
