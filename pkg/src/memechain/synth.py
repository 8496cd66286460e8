"""Synthetic multi-label datasets with controllable label correlation.

Label 0 follows a linear rule on standard-normal features with flip noise;
each later label copies its predecessor with probability ``correlation``
and otherwise follows its own linear rule. Rule directions are
orthonormalized (when n_labels <= feature_dim) so correlation=0 yields
genuinely independent labels. Text embeddings are all-ones, so fusing
recovers the planted feature vector and the whole pipeline is exercised
end to end without real encoders.

``augment_copies``/``augment_noise`` emulate paraphrase groups: every
member's text embedding (the original's included) becomes a noisy view of
the all-ones vector, while gold labels stay derived from the clean planted
features. Averaging member predictions then demonstrably denoises.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ORIGINAL, PARAPHRASE, Dataset, Example, Taxonomy


@dataclass(frozen=True)
class SynthConfig:
    n_examples: int
    feature_dim: int
    n_labels: int
    correlation: float
    noise: float
    seed: int
    augment_copies: int = 0
    augment_noise: float = 0.0

    def __post_init__(self):
        if self.n_examples < 1 or self.feature_dim < 1 or self.n_labels < 1:
            raise ValueError("n_examples, feature_dim, n_labels must be positive")
        if not 0.0 <= self.correlation <= 1.0:
            raise ValueError("correlation must be in [0, 1]")
        if not 0.0 <= self.noise <= 0.5:
            raise ValueError("noise must be in [0, 0.5]")
        if self.augment_copies < 0 or self.augment_noise < 0.0:
            raise ValueError("augment settings must be non-negative")


def _rule_directions(rng, dim: int, n_labels: int) -> np.ndarray:
    raw = rng.standard_normal((dim, max(n_labels, 1)))
    if n_labels <= dim:
        q, _ = np.linalg.qr(raw[:, :n_labels])
        return q.T
    return (raw / np.linalg.norm(raw, axis=0)).T[:n_labels]


def generate(cfg: SynthConfig) -> Dataset:
    """Deterministic synthetic Dataset for the given config."""
    rng = np.random.default_rng(cfg.seed)
    n, d, n_labels = cfg.n_examples, cfg.feature_dim, cfg.n_labels

    features = rng.standard_normal((n, d))
    directions = _rule_directions(rng, d, n_labels)
    rule = features @ directions.T > 0.0  # N x L linear-rule labels

    labels = np.empty((n, n_labels), dtype=bool)
    labels[:, 0] = rule[:, 0] ^ (rng.random(n) < cfg.noise)
    for k in range(1, n_labels):
        own = rule[:, k] ^ (rng.random(n) < cfg.noise)
        copy_prev = rng.random(n) < cfg.correlation
        labels[:, k] = np.where(copy_prev, labels[:, k - 1], own)

    taxonomy = Taxonomy(tuple(f"label_{j:02d}" for j in range(n_labels)))
    ones = np.ones(d)
    examples = []
    for i in range(n):
        gold = frozenset(int(j) for j in np.flatnonzero(labels[i]))
        group = f"g{i:05d}"
        if cfg.augment_copies:
            # every member, the original included, is a noisy text view
            members = [(f"{group}o", ORIGINAL)] + [
                (f"{group}p{c}", PARAPHRASE) for c in range(cfg.augment_copies)
            ]
            for member_id, origin in members:
                text = ones + cfg.augment_noise * rng.standard_normal(d)
                examples.append(
                    Example(member_id, group, features[i], text, origin, gold)
                )
        else:
            examples.append(Example(f"{group}o", group, features[i], ones, ORIGINAL, gold))
    return Dataset(taxonomy, tuple(examples))
