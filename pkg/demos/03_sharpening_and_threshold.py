"""Probability sharpening and decision-threshold tuning.

Sharpening pushes probabilities through another sigmoid, compressing them
into [0.5, ~0.731]; it keeps every ranking intact, so the tuned threshold
simply moves with it. Tuning walks all 181 grid candidates (0.0 to 0.9 in
steps of 0.005) and keeps the smallest maximizer.
"""

from memechain import (
    THRESHOLD_GRID,
    SynthConfig,
    TrainConfig,
    apply_threshold,
    f1_scores,
    featurize,
    generate,
    gold_matrix,
    predict_chain,
    sharpen,
    train_chain,
    tune_threshold,
)

ds = generate(SynthConfig(n_examples=400, feature_dim=6, n_labels=3,
                          correlation=0.6, noise=0.15, seed=9))
features, gold = featurize(ds), gold_matrix(ds)
model = train_chain(features, gold, (0, 1, 2), TrainConfig())
probs = predict_chain(model, features)

print(f"raw probabilities:       [{probs.min():.3f}, {probs.max():.3f}]")
sharp = sharpen(probs)
print(f"sharpened probabilities: [{sharp.min():.3f}, {sharp.max():.3f}]")

for name, matrix in (("raw", probs), ("sharpened", sharp)):
    best = tune_threshold(matrix, gold)
    best_f1 = f1_scores(apply_threshold(matrix, best), gold).micro_f1
    print(f"\n{name}: tuned threshold = {best:.3f}, micro-F1 = {best_f1:.4f}")
    print("  threshold -> micro-F1 along the grid:")
    for t in THRESHOLD_GRID[::36]:
        f1 = f1_scores(apply_threshold(matrix, t), gold).micro_f1
        bar = "#" * int(40 * f1)
        print(f"  {t:5.3f}  {f1:.4f} {bar}")

print("\nnearly identical tuned micro-F1: sharpening never reorders scores, the"
      "\nsmall residual is just the 0.005 grid quantizing differently after the sigmoid")
