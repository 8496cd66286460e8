"""memechain: multi-label meme classification over fused embeddings.

Pipeline: element-wise fusion of precomputed image/text embeddings, a
classifier chain of L2-regularized logistic links, optional sigmoid
sharpening, paraphrase-group probability averaging, a grid-searched
decision threshold, and micro/macro-F1 scoring.
"""

from importlib.resources import files

from .calibrate import (
    THRESHOLD_GRID,
    MetricsReport,
    apply_threshold,
    average_groups,
    cooccurrence,
    f1_scores,
    format_report,
    tune_threshold,
    write_cooccurrence_csv,
    write_report,
)
from .chain import (
    ChainModel,
    load_model,
    model_from_json,
    model_to_json,
    predict_chain,
    save_model,
    sharpen,
    train_chain,
    with_threshold,
)
from .dataset import (
    ORIGINAL,
    PARAPHRASE,
    Dataset,
    Example,
    Taxonomy,
    gold_matrix,
    label_counts,
    load_dataset,
    parse_dataset,
    save_dataset,
    serialize_dataset,
    split_train_validation,
)
from .errors import DataError, NumericalError
from .fusion import MODES, featurize, fuse
from .logreg import (
    LinearModel,
    TrainConfig,
    gradient,
    objective,
    predict_proba,
    sigmoid,
    train_binary,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"


def bundled_taxonomy() -> Taxonomy:
    """The 22 persuasion-technique labels shipped with the package."""
    text = files("memechain").joinpath("data/taxonomy.txt").read_text(encoding="utf-8")
    return Taxonomy(tuple(line for line in text.splitlines() if line.strip()))
