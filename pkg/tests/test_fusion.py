import numpy as np
import pytest

from memechain import DataError, Dataset, NumericalError, Taxonomy, featurize, fuse
from test_dataset import random_dataset


class TestFuse:
    def test_multiplicative_identity(self):
        assert fuse([1, 2, 3], [1, 1, 1]).tolist() == [1, 2, 3]

    def test_arithmetic(self):
        assert fuse([1, 2], [3, 4]).tolist() == [3, 8]

    def test_annihilator(self):
        assert fuse([0, 5], [7, 0]).tolist() == [0, 0]

    def test_commutative_and_scaling(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x, y = rng.normal(size=(2, 6))
            a = float(rng.normal())
            assert np.array_equal(fuse(x, y), fuse(y, x))
            np.testing.assert_allclose(fuse(a * x, y), a * fuse(x, y), rtol=1e-12)
            np.testing.assert_allclose(
                fuse(x + y, y), fuse(x, y) + fuse(y, y), rtol=1e-12, atol=1e-12
            )

    def test_dimension_mismatch(self):
        with pytest.raises(DataError):
            fuse([1, 2, 3], [1, 2])

    def test_non_finite(self):
        with pytest.raises(NumericalError):
            fuse([1.0, np.inf], [1.0, 1.0])


class TestFeaturize:
    def test_modes_on_random_dataset(self):
        ds = random_dataset(np.random.default_rng(8), n_groups=5, dim=4)
        fused = featurize(ds, "fused")
        image = featurize(ds, "image")
        text = featurize(ds, "text")
        assert fused.shape == image.shape == text.shape == (len(ds), 4)
        for n, ex in enumerate(ds.examples):
            assert np.array_equal(image[n], ex.image_embedding)
            assert np.array_equal(text[n], ex.text_embedding)
            assert np.array_equal(fused[n], fuse(ex.image_embedding, ex.text_embedding))

    def test_small_fused_matrix(self):
        tax = Taxonomy(("a",))
        from memechain import Example

        ds = Dataset(
            tax,
            (
                Example("1", "1", np.array([1.0, 2.0]), np.array([3.0, 4.0])),
                Example("2", "2", np.array([0.0, 5.0]), np.array([7.0, 0.0])),
            ),
        )
        assert featurize(ds, "fused").tolist() == [[3.0, 8.0], [0.0, 0.0]]

    def test_empty_dataset(self):
        ds = Dataset(Taxonomy(("a",)))
        assert featurize(ds, "text").shape == (0, 0)

    def test_bad_mode(self):
        ds = Dataset(Taxonomy(("a",)))
        with pytest.raises(ValueError):
            featurize(ds, "dot")
