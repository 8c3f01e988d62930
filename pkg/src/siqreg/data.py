"""Dataset container, CSV ingestion and standardization.

Predictors and the response are stored standardized (mean 0, variance 1,
population denominator) with the per-column transforms recorded, so the
original scale is always recoverable and index estimates can be mapped back
to original-variable coordinates.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Dataset", "ingest_csv", "FLOAT_FORMAT", "format_float"]

# Full double precision for every CSV the package writes, so downstream
# recomputation is bit-exact.
FLOAT_FORMAT = "%.17g"


def format_float(x) -> str:
    return FLOAT_FORMAT % float(x)


@dataclass
class Dataset:
    """Standardized design matrix and response with recorded transforms."""

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    response_name: str
    x_mean: np.ndarray
    x_sd: np.ndarray
    y_mean: float
    y_sd: float

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @classmethod
    def from_arrays(cls, X, y, feature_names=None, response_name="y") -> "Dataset":
        """Standardize raw arrays column by column and record the transforms."""
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        n, p = X.shape
        if y.shape != (n,):
            raise ValueError(f"response length {y.shape} does not match {n} rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("non-finite values in the data")
        if feature_names is None:
            feature_names = [f"x{j + 1}" for j in range(p)]
        if len(feature_names) != p:
            raise ValueError("feature_names length does not match X")
        if n <= p:
            warnings.warn(
                f"n = {n} observations for p = {p} predictors; n > p is recommended",
                UserWarning,
                stacklevel=2,
            )

        x_mean = X.mean(axis=0)
        x_sd = X.std(axis=0)
        for j, sd in enumerate(x_sd):
            if sd == 0.0:
                raise ValueError(f"constant column: {feature_names[j]}")
        y_sd = float(y.std())
        if y_sd == 0.0:
            raise ValueError(f"constant column: {response_name}")

        return cls(
            X=(X - x_mean) / x_sd,
            y=(y - y.mean()) / y_sd,
            feature_names=list(feature_names),
            response_name=response_name,
            x_mean=x_mean,
            x_sd=x_sd,
            y_mean=float(y.mean()),
            y_sd=y_sd,
        )

    # -- scale recovery --------------------------------------------------------

    def original_X(self) -> np.ndarray:
        return self.X * self.x_sd + self.x_mean

    def original_y(self) -> np.ndarray:
        return self.y * self.y_sd + self.y_mean

    def destandardize_response(self, values):
        return np.asarray(values, dtype=float) * self.y_sd + self.y_mean

    def standardize_new_X(self, X_new) -> np.ndarray:
        X_new = np.asarray(X_new, dtype=float)
        return (X_new - self.x_mean) / self.x_sd

    def beta_to_original(self, beta):
        """Map index coefficients on standardized predictors back to original ones.

        The index t = sum_j beta_j (x_j - m_j)/s_j equals sum_j (beta_j/s_j) x_j
        up to a constant shift, which the nonparametric link absorbs.
        """
        return np.asarray(beta, dtype=float) / self.x_sd

    def sigma_to_original(self, sigma):
        """Map the quantile-likelihood scale back to the original response scale."""
        return np.asarray(sigma, dtype=float) * self.y_sd


def ingest_csv(path, response_column) -> Dataset:
    """Parse a headed numeric CSV and return a standardized :class:`Dataset`.

    Errors name the offending cell (1-based data row, column name) for
    non-numeric values; missing files, a missing response column and constant
    columns are rejected.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty file: {path}") from None
        header = [h.strip() for h in header]
        if response_column not in header:
            raise ValueError(
                f"response column {response_column!r} not found; columns: {header}"
            )
        rows = []
        for i, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"row {i} has {len(row)} cells, expected {len(header)}")
            parsed = []
            for name, cell in zip(header, row):
                try:
                    value = float(cell)
                except ValueError:
                    raise ValueError(
                        f"non-numeric cell at row {i}, column {name!r}: {cell!r}"
                    ) from None
                if not np.isfinite(value):
                    raise ValueError(f"non-finite cell at row {i}, column {name!r}")
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise ValueError(f"no data rows in {path}")

    table = np.asarray(rows, dtype=float)
    y_col = header.index(response_column)
    x_cols = [j for j in range(len(header)) if j != y_col]
    feature_names = [header[j] for j in x_cols]
    return Dataset.from_arrays(
        table[:, x_cols], table[:, y_col], feature_names, response_column
    )
