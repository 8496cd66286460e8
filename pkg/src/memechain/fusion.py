"""Feature fusion: combine image and text embeddings element-wise.

The fused vector multiplies the two embeddings coordinate by coordinate,
giving per-dimension image/text agreement features. Ablation modes keep
one raw embedding instead.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset
from .errors import DataError, NumericalError

MODES = ("fused", "image", "text")


def fuse(image_embedding: np.ndarray, text_embedding: np.ndarray) -> np.ndarray:
    """Element-wise product of two equal-width embedding vectors."""
    image = np.asarray(image_embedding, dtype=np.float64)
    text = np.asarray(text_embedding, dtype=np.float64)
    if image.shape != text.shape:
        raise DataError(f"dimension mismatch: image {image.shape} vs text {text.shape}")
    if not (np.all(np.isfinite(image)) and np.all(np.isfinite(text))):
        raise NumericalError("non-finite embedding entries")
    return image * text


def featurize(ds: Dataset, mode: str = "fused") -> np.ndarray:
    """N x d feature matrix, one row per example in dataset order."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not ds.examples:
        return np.zeros((0, ds.dim))
    if mode == "image":
        return np.stack([ex.image_embedding for ex in ds.examples])
    if mode == "text":
        return np.stack([ex.text_embedding for ex in ds.examples])
    return np.stack([fuse(ex.image_embedding, ex.text_embedding) for ex in ds.examples])
