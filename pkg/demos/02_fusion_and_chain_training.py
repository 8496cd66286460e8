"""Feature fusion and classifier-chain training.

The fused feature vector is the element-wise product of the image and text
embeddings. The chain trains one logistic link per label; link k also
consumes the gold labels of the k earlier chain positions, so its weight
vector is k entries longer than the feature width.
"""

import numpy as np

from memechain import (
    SynthConfig,
    TrainConfig,
    featurize,
    fuse,
    generate,
    gold_matrix,
    predict_chain,
    train_chain,
)

print("fuse([1,2,3], [1,1,1]) =", fuse([1, 2, 3], [1, 1, 1]).tolist())
print("fuse([1,2],   [3,4])   =", fuse([1, 2], [3, 4]).tolist())

ds = generate(SynthConfig(n_examples=300, feature_dim=6, n_labels=3,
                          correlation=0.8, noise=0.1, seed=4))
features = featurize(ds, "fused")
gold = gold_matrix(ds)
print(f"\nsynthetic dataset: {features.shape[0]} rows, {features.shape[1]} features, "
      f"{gold.shape[1]} labels")

model = train_chain(features, gold, (0, 1, 2), TrainConfig())
print("link widths:", [link.weights.size for link in model.links],
      "(feature width + chain position)")

for k, link in enumerate(model.links):
    label_part = link.weights[model.feature_dim:]
    print(f"link {k}: appended-label coefficients = {np.round(label_part, 3).tolist()}")

probs = predict_chain(model, features)
print(f"\npredicted probabilities: shape {probs.shape}, "
      f"range [{probs.min():.3f}, {probs.max():.3f}]")
print("with correlation 0.8, later links lean on the previous label's probability")
