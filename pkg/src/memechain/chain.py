"""Classifier chain over binary logistic links, plus model file IO.

Position k in the chain targets label ``order[k]`` and consumes the raw
features plus the labels of the k earlier chain positions: gold labels
while training, predicted probabilities at inference. Output columns are
always restored to taxonomy order.

The model file is a versioned JSON record; every weight is written as
decimal text with 17 significant digits so a load reproduces the trained
model bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .dataset import Taxonomy
from .errors import DataError
from .logreg import LinearModel, TrainConfig, sigmoid, train_binary

MODEL_FORMAT = "memechain-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class ChainModel:
    taxonomy: Taxonomy
    order: tuple[int, ...]
    links: tuple[LinearModel, ...]
    feature_dim: int
    mode: str = "fused"
    sharpen: bool = False
    threshold: Optional[float] = None

    @property
    def n_labels(self) -> int:
        return len(self.taxonomy)


def _check_order(order, n_labels: int) -> tuple[int, ...]:
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(n_labels)):
        raise DataError(f"order {order} is not a permutation of 0..{n_labels - 1}")
    return order


def _default_taxonomy(n_labels: int) -> Taxonomy:
    return Taxonomy(tuple(f"label_{j:02d}" for j in range(n_labels)))


def train_chain(
    features,
    gold,
    order,
    cfg: TrainConfig = TrainConfig(),
    *,
    taxonomy: Optional[Taxonomy] = None,
    mode: str = "fused",
    sharpen: bool = False,
) -> ChainModel:
    """Train L chained links; link k sees gold labels of earlier positions."""
    features = np.asarray(features, dtype=np.float64)
    gold = np.asarray(gold, dtype=np.float64)
    if features.ndim != 2 or gold.ndim != 2 or features.shape[0] != gold.shape[0]:
        raise DataError(
            f"feature rows {features.shape} and gold rows {gold.shape} do not align"
        )
    n_labels = gold.shape[1]
    order = _check_order(order, n_labels)
    if taxonomy is None:
        taxonomy = _default_taxonomy(n_labels)
    elif len(taxonomy) != n_labels:
        raise DataError(f"taxonomy has {len(taxonomy)} labels, gold has {n_labels}")

    links = []
    for k in range(n_labels):
        inputs = np.hstack([features, gold[:, order[:k]]]) if k else features
        links.append(train_binary(inputs, gold[:, order[k]], cfg))
    return ChainModel(
        taxonomy=taxonomy,
        order=order,
        links=tuple(links),
        feature_dim=features.shape[1],
        mode=mode,
        sharpen=sharpen,
    )


def predict_chain(model: ChainModel, features) -> np.ndarray:
    """N x L probability matrix, columns in taxonomy order.

    Earlier positions feed their predicted probabilities (not thresholded
    labels) into later links. The feature part of each link's score is
    computed exactly as ``predict_proba`` would, so a link whose
    appended-label coefficients are all zero predicts identically to an
    independent per-label model.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != model.feature_dim:
        raise DataError(
            f"feature width {features.shape[-1] if features.ndim else '?'} "
            f"does not match model width {model.feature_dim}"
        )
    d = model.feature_dim
    n = features.shape[0]
    chain_probs = np.empty((n, model.n_labels))
    for k, link in enumerate(model.links):
        if link.weights.size != d + k:
            raise DataError(f"link {k} has width {link.weights.size}, expected {d + k}")
        z = features @ link.weights[:d] + link.intercept
        if k:
            z = z + chain_probs[:, :k] @ link.weights[d:]
        chain_probs[:, k] = sigmoid(z)
    out = np.empty_like(chain_probs)
    out[:, list(model.order)] = chain_probs
    return out


def sharpen(probs) -> np.ndarray:
    """Sigmoid applied to probabilities, compressing [0,1] into [0.5, ~0.731].

    Strictly increasing, so per-example rankings survive; the shrunken
    range is compensated by threshold tuning downstream.
    """
    return sigmoid(np.asarray(probs, dtype=np.float64))


def with_threshold(model: ChainModel, threshold: float) -> ChainModel:
    return replace(model, threshold=float(threshold))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def model_to_json(model: ChainModel) -> str:
    record = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "taxonomy": list(model.taxonomy.labels),
        "order": list(model.order),
        "feature_dim": model.feature_dim,
        "mode": model.mode,
        "sharpen": model.sharpen,
        "threshold": None if model.threshold is None else _fmt(model.threshold),
        "links": [
            {"weights": [_fmt(w) for w in link.weights], "intercept": _fmt(link.intercept)}
            for link in model.links
        ],
    }
    return json.dumps(record, indent=2) + "\n"


def model_from_json(text: str) -> ChainModel:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"model file is not valid JSON ({exc.msg})") from None
    if not isinstance(record, dict) or record.get("format") != MODEL_FORMAT:
        raise DataError("not a model file (missing format marker)")
    if record.get("version") != MODEL_VERSION:
        raise DataError(f"unsupported model version {record.get('version')!r}")
    try:
        taxonomy = Taxonomy(tuple(record["taxonomy"]))
        order = _check_order(record["order"], len(taxonomy))
        feature_dim = int(record["feature_dim"])
        links = []
        for k, link in enumerate(record["links"]):
            weights = np.asarray([float(w) for w in link["weights"]], dtype=np.float64)
            if weights.size != feature_dim + k:
                raise DataError(
                    f"link {k} has width {weights.size}, expected {feature_dim + k}"
                )
            links.append(LinearModel(weights=weights, intercept=float(link["intercept"])))
        if len(links) != len(taxonomy):
            raise DataError(f"model has {len(links)} links for {len(taxonomy)} labels")
        threshold = record["threshold"]
        return ChainModel(
            taxonomy=taxonomy,
            order=order,
            links=tuple(links),
            feature_dim=feature_dim,
            mode=str(record["mode"]),
            sharpen=bool(record["sharpen"]),
            threshold=None if threshold is None else float(threshold),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"malformed model file: {exc}") from None


def save_model(model: ChainModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> ChainModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())
