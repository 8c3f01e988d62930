import numpy as np
import numpy.testing as npt
import pytest

from siqreg.data import Dataset, ingest_csv


class TestFromArrays:
    def test_standardization(self, np_rng):
        X = np_rng.normal(size=(50, 3)) * np.array([2.0, 0.5, 10.0]) + 4.0
        y = np_rng.normal(size=50) * 3.0 - 1.0
        data = Dataset.from_arrays(X, y)
        npt.assert_allclose(data.X.mean(axis=0), 0.0, atol=1e-12)
        npt.assert_allclose(data.X.std(axis=0), 1.0, atol=1e-12)
        assert data.y.mean() == pytest.approx(0.0, abs=1e-12)
        assert data.y.std() == pytest.approx(1.0, abs=1e-12)

    def test_round_trip(self, np_rng):
        X = np_rng.normal(size=(30, 2)) * 5.0 + 2.0
        y = np_rng.normal(size=30) * 0.3
        data = Dataset.from_arrays(X, y)
        npt.assert_allclose(data.original_X(), X, atol=1e-12)
        npt.assert_allclose(data.original_y(), y, atol=1e-12)
        npt.assert_allclose(data.standardize_new_X(X), data.X, atol=1e-12)

    def test_constant_column_named(self):
        X = np.column_stack([np.ones(10), np.arange(10.0)])
        with pytest.raises(ValueError, match="constant column: a"):
            Dataset.from_arrays(X, np.arange(10.0), feature_names=["a", "b"])

    def test_constant_response(self, np_rng):
        with pytest.raises(ValueError, match="constant column: y"):
            Dataset.from_arrays(np_rng.normal(size=(10, 2)), np.ones(10))

    def test_warns_when_underdetermined(self, np_rng):
        with pytest.warns(UserWarning, match="recommended"):
            Dataset.from_arrays(np_rng.normal(size=(3, 3)), np_rng.normal(size=3))

    def test_rejects_nonfinite(self, np_rng):
        X = np_rng.normal(size=(10, 2))
        X[3, 1] = np.nan
        with pytest.raises(ValueError):
            Dataset.from_arrays(X, np.arange(10.0))

    def test_beta_back_transform_preserves_index_direction(self, np_rng):
        X = np_rng.normal(size=(40, 3)) * np.array([2.0, 0.5, 7.0])
        y = np_rng.normal(size=40)
        data = Dataset.from_arrays(X, y)
        beta_std = np_rng.normal(size=3)
        t_std = data.X @ beta_std
        t_orig = X @ data.beta_to_original(beta_std)
        # Same index up to an additive constant (absorbed by the link).
        npt.assert_allclose(t_orig - t_orig.mean(), t_std - t_std.mean(), atol=1e-10)

    def test_sigma_back_transform(self, np_rng):
        data = Dataset.from_arrays(np_rng.normal(size=(10, 2)), np_rng.normal(size=10) * 4.0)
        assert data.sigma_to_original(1.0) == pytest.approx(data.y_sd)


class TestIngestCsv:
    def write(self, tmp_path, text):
        path = tmp_path / "data.csv"
        path.write_text(text)
        return path

    def test_three_row_fixture(self, tmp_path):
        path = self.write(tmp_path, "a,b,y\n1,2,3\n4,5,6\n7,9,12\n")
        data = ingest_csv(path, "y")
        assert data.feature_names == ["a", "b"]
        npt.assert_allclose(data.original_X(), [[1, 2], [4, 5], [7, 9]], atol=1e-12)
        npt.assert_allclose(data.original_y(), [3, 6, 12], atol=1e-12)

    def test_response_column_anywhere(self, tmp_path):
        path = self.write(tmp_path, "y,a,b\n3,1,2\n6,4,5\n12,7,9\n")
        data = ingest_csv(path, "y")
        assert data.feature_names == ["a", "b"]
        npt.assert_allclose(data.original_y(), [3, 6, 12], atol=1e-12)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ingest_csv(tmp_path / "nope.csv", "y")

    def test_missing_response(self, tmp_path):
        path = self.write(tmp_path, "a,b\n1,2\n")
        with pytest.raises(ValueError, match="response column"):
            ingest_csv(path, "y")

    def test_non_numeric_cell_located(self, tmp_path):
        path = self.write(tmp_path, "a,y\n1,2\n4,oops\n7,9\n")
        with pytest.raises(ValueError, match="row 2, column 'y'"):
            ingest_csv(path, "y")

    def test_constant_column(self, tmp_path):
        path = self.write(tmp_path, "a,y\n2,1\n2,4\n2,9\n")
        with pytest.raises(ValueError, match="constant column: a"):
            ingest_csv(path, "y")

    def test_ragged_row(self, tmp_path):
        path = self.write(tmp_path, "a,y\n1,2\n3\n")
        with pytest.raises(ValueError, match="row 2"):
            ingest_csv(path, "y")
