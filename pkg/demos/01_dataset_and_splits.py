"""Dataset basics: records, round-tripping, group-aware splits, counts.

Every example carries an image embedding and a text embedding of the same
width, belongs to a group (an original plus its paraphrases), and may have
a gold label set. Splits move whole groups so paraphrases never leak
across the train/validation boundary.
"""

import io

import numpy as np

from memechain import (
    Dataset,
    Example,
    Taxonomy,
    label_counts,
    parse_dataset,
    serialize_dataset,
    split_train_validation,
)

taxonomy = Taxonomy(("Smears", "Loaded Language", "Doubt"))
rng = np.random.default_rng(0)

examples = []
for g in range(10):
    gold = frozenset(int(j) for j in np.flatnonzero(rng.random(3) < 0.5))
    image = rng.normal(size=4)
    examples.append(Example(f"m{g}", f"m{g}", image, rng.normal(size=4), "original", gold))
    examples.append(Example(f"m{g}p", f"m{g}", image, rng.normal(size=4), "paraphrase", gold))
ds = Dataset(taxonomy, tuple(examples))
print(f"built {len(ds)} examples in {len(ds.group_ids())} groups, dim {ds.dim}")

buffer = io.StringIO()
serialize_dataset(ds, buffer)
print("\nfirst serialized record:")
print(buffer.getvalue().splitlines()[0][:120], "...")
back = parse_dataset(io.StringIO(buffer.getvalue()), taxonomy)
print(f"round trip recovered {len(back)} examples")

train, val = split_train_validation(ds, 0.2, seed=7)
print(f"\nsplit 20% by groups: train={len(train)} examples "
      f"({len(train.group_ids())} groups), val={len(val)} examples "
      f"({len(val.group_ids())} groups)")
assert not set(train.group_ids()) & set(val.group_ids())

print("\nper-label counts over originals:")
for name, count in zip(taxonomy.labels, label_counts(ds)):
    print(f"  {name:>16}: {count}")
