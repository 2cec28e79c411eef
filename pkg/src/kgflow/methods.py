"""From-scratch implementations of every shipped method.

All functions are pure and deterministic: randomized ones (splitting, k-means
seeding) take an explicit seed and use a dedicated `random.Random` stream.
numpy supplies array plumbing; the algorithms themselves are written out.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadKError,
    BadPercentileError,
    BadRatioError,
    ConstantColumnError,
    DimensionMismatchError,
    EmptyTrainingSetError,
    EmptyVectorError,
    LengthMismatchError,
    SingularSystemError,
    TooFewRowsError,
    ZeroActualError,
)


@dataclass(frozen=True)
class LinearModel:
    """Least-squares affine model: predict(x) = coefficients . x + intercept."""

    coefficients: tuple[float, ...]
    intercept: float

    @property
    def algorithm(self) -> str:
        return "linear_regression"


@dataclass(frozen=True)
class KnnModel:
    k: int
    points: tuple[tuple[float, ...], ...]
    labels: tuple

    @property
    def algorithm(self) -> str:
        return "knn"


@dataclass(frozen=True)
class KMeansModel:
    centroids: tuple[tuple[float, ...], ...]

    @property
    def algorithm(self) -> str:
        return "kmeans"


Model = LinearModel | KnnModel | KMeansModel


# ---------------------------------------------------------------------------
# Splitting and normalization


def train_test_split(features, labels, ratio: float, seed: int):
    """Seeded shuffle split. Train size is floor(ratio * n) clamped to
    [1, n-1], so both sides are always non-empty.

    Returns (train_features, train_labels, test_features, test_labels) with
    the union preserving the input rows exactly.
    """
    n = len(features)
    if n != len(labels):
        raise LengthMismatchError(f"{n} feature rows but {len(labels)} labels")
    if n < 2:
        raise TooFewRowsError(f"need at least 2 rows to split, got {n}")
    if not (0.0 < ratio < 1.0):
        raise BadRatioError(f"split ratio must be in (0, 1), got {ratio}")
    index = list(range(n))
    random.Random(seed).shuffle(index)
    train_size = min(max(math.floor(ratio * n), 1), n - 1)
    train_idx, test_idx = index[:train_size], index[train_size:]
    pick = lambda rows, idx: [rows[i] for i in idx]
    return (
        pick(features, train_idx), pick(labels, train_idx),
        pick(features, test_idx), pick(labels, test_idx),
    )


def normalize(values, mode: str) -> list[float]:
    """Min-max or z-score normalization; constant columns are rejected.

    Z-score uses the population standard deviation, so the result has mean 0
    and (for non-constant input) standard deviation 1.
    """
    if len(values) == 0:
        raise EmptyVectorError("cannot normalize an empty vector")
    arr = np.asarray(values, dtype=float)
    if mode == "minmax":
        lo, hi = float(arr.min()), float(arr.max())
        if hi == lo:
            raise ConstantColumnError("min-max normalization of a constant column")
        return [float(v) for v in (arr - lo) / (hi - lo)]
    if mode == "zscore":
        mean = float(arr.mean())
        std = float(arr.std(ddof=0))
        if std == 0.0:
            raise ConstantColumnError("z-score normalization of a constant column")
        return [float(v) for v in (arr - mean) / std]
    raise ValueError(f"unknown normalization mode {mode!r}")


# ---------------------------------------------------------------------------
# Descriptive statistics


def mean(values) -> float:
    if len(values) == 0:
        raise EmptyVectorError("mean of an empty vector")
    return float(np.asarray(values, dtype=float).mean())


def median(values) -> float:
    """Middle element, or the average of the two middle elements."""
    if len(values) == 0:
        raise EmptyVectorError("median of an empty vector")
    ordered = sorted(float(v) for v in values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def percentile(values, rank: float) -> float:
    """Linear interpolation between order statistics; rank 0 is the minimum,
    rank 100 the maximum."""
    if len(values) == 0:
        raise EmptyVectorError("percentile of an empty vector")
    if not (0.0 <= rank <= 100.0):
        raise BadPercentileError(f"percentile rank must be in [0, 100], got {rank}")
    ordered = sorted(float(v) for v in values)
    if len(ordered) == 1:
        return ordered[0]
    position = rank / 100.0 * (len(ordered) - 1)
    lower = math.floor(position)
    upper = math.ceil(position)
    if lower == upper:
        return ordered[lower]
    frac = position - lower
    return ordered[lower] * (1.0 - frac) + ordered[upper] * frac


def grouped_frequency(values, bins: int) -> list[list[float]]:
    """Equal-width bins over [min, max]; each row is [lower_edge, count].

    The final bin includes the maximum. A constant vector puts every value in
    the first bin. Counts always sum to len(values).
    """
    if len(values) == 0:
        raise EmptyVectorError("frequency table of an empty vector")
    if bins < 1:
        raise ValueError(f"bin count must be >= 1, got {bins}")
    data = [float(v) for v in values]
    lo, hi = min(data), max(data)
    width = (hi - lo) / bins
    counts = [0] * bins
    for v in data:
        if width == 0.0:
            idx = 0
        else:
            idx = min(int((v - lo) / width), bins - 1)
        counts[idx] += 1
    return [[lo + i * width, float(counts[i])] for i in range(bins)]


# ---------------------------------------------------------------------------
# Models


def _as_matrix(features) -> np.ndarray:
    arr = np.asarray(features, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def train_linear_regression(features, targets) -> LinearModel:
    """Ordinary least squares through the normal equations."""
    x = _as_matrix(features)
    if x.shape[0] == 0:
        raise EmptyTrainingSetError("linear regression needs at least one row")
    if x.shape[0] != len(targets):
        raise LengthMismatchError(f"{x.shape[0]} rows but {len(targets)} targets")
    design = np.hstack([np.ones((x.shape[0], 1)), x])
    gram = design.T @ design
    moment = design.T @ np.asarray(targets, dtype=float)
    try:
        beta = np.linalg.solve(gram, moment)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"normal equations are singular: {exc}") from exc
    return LinearModel(coefficients=tuple(float(b) for b in beta[1:]), intercept=float(beta[0]))


def train_knn(features, labels, k: int) -> KnnModel:
    x = _as_matrix(features)
    if x.shape[0] == 0:
        raise EmptyTrainingSetError("nearest-neighbor model needs at least one row")
    if x.shape[0] != len(labels):
        raise LengthMismatchError(f"{x.shape[0]} rows but {len(labels)} labels")
    if not (1 <= k <= x.shape[0]):
        raise BadKError(f"k must be in [1, {x.shape[0]}], got {k}")
    return KnnModel(
        k=k,
        points=tuple(tuple(float(v) for v in row) for row in x),
        labels=tuple(labels),
    )


def _kmeans_iterate(points: np.ndarray, centroids: np.ndarray, max_iterations: int):
    """Lloyd's algorithm. Yields (centroids, assignments, objective) per
    iteration; the objective (sum of squared distances) never increases."""
    for _ in range(max_iterations):
        distances = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assignments = distances.argmin(axis=1)
        objective = float(distances[np.arange(len(points)), assignments].sum())
        updated = centroids.copy()
        for c in range(centroids.shape[0]):
            members = points[assignments == c]
            if len(members):
                updated[c] = members.mean(axis=0)
        yield updated, assignments, objective
        if np.array_equal(updated, centroids):
            return
        centroids = updated


def train_kmeans(features, clusters: int, seed: int, max_iterations: int = 100) -> KMeansModel:
    """Centroids start at `clusters` distinct seeded-random training points;
    empty clusters keep their previous centroid."""
    x = _as_matrix(features)
    n = x.shape[0]
    if n == 0:
        raise EmptyTrainingSetError("k-means needs at least one row")
    if not (1 <= clusters <= n):
        raise BadKError(f"cluster count must be in [1, {n}], got {clusters}")
    start = random.Random(seed).sample(range(n), clusters)
    centroids = x[start].copy()
    for centroids, _, _ in _kmeans_iterate(x, centroids, max_iterations):
        pass
    return KMeansModel(centroids=tuple(tuple(float(v) for v in c) for c in centroids))


def predict(model: Model, features) -> list:
    """Apply a trained model row-wise."""
    x = _as_matrix(features)
    if isinstance(model, LinearModel):
        if x.shape[1] != len(model.coefficients):
            raise DimensionMismatchError(
                f"model has {len(model.coefficients)} coefficients, features have width {x.shape[1]}"
            )
        return [float(v) for v in x @ np.asarray(model.coefficients) + model.intercept]
    if isinstance(model, KnnModel):
        train = np.asarray(model.points)
        if x.shape[1] != train.shape[1]:
            raise DimensionMismatchError(
                f"model expects width {train.shape[1]}, features have width {x.shape[1]}"
            )
        out = []
        for row in x:
            d = np.sqrt(((train - row) ** 2).sum(axis=1))
            # Neighbor ranking: distance first, then training-row index.
            order = sorted(range(len(d)), key=lambda i: (d[i], i))[: model.k]
            votes: dict = {}
            for i in order:
                votes[model.labels[i]] = votes.get(model.labels[i], 0) + 1
            best = max(votes.values())
            # Vote ties go to the label of the best-ranked tied neighbor.
            winner = next(model.labels[i] for i in order if votes[model.labels[i]] == best)
            out.append(winner)
        return out
    if isinstance(model, KMeansModel):
        centroids = np.asarray(model.centroids)
        if x.shape[1] != centroids.shape[1]:
            raise DimensionMismatchError(
                f"model expects width {centroids.shape[1]}, features have width {x.shape[1]}"
            )
        distances = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        return [int(i) for i in distances.argmin(axis=1)]
    raise TypeError(f"not a model: {model!r}")


# ---------------------------------------------------------------------------
# Metrics


def _paired(predicted, actual):
    if len(predicted) != len(actual):
        raise LengthMismatchError(f"{len(predicted)} predictions but {len(actual)} actuals")
    if len(predicted) == 0:
        raise EmptyVectorError("cannot score zero predictions")
    return list(predicted), list(actual)


def mean_absolute_error(predicted, actual) -> float:
    p, a = _paired(predicted, actual)
    return float(np.mean([abs(float(x) - float(y)) for x, y in zip(p, a)]))


def mean_absolute_percentage_error(predicted, actual) -> float:
    """Mean of |pred - actual| / |actual|, as a fraction (0.5, not 50)."""
    p, a = _paired(predicted, actual)
    if any(float(y) == 0.0 for y in a):
        raise ZeroActualError("relative error is undefined for actual value 0")
    return float(np.mean([abs(float(x) - float(y)) / abs(float(y)) for x, y in zip(p, a)]))


def accuracy(predicted, actual) -> float:
    """Fraction of exact matches; works for string and numeric labels."""
    p, a = _paired(predicted, actual)
    return sum(1 for x, y in zip(p, a) if x == y) / len(p)


def score(kind: str, predicted, actual) -> float:
    if kind == "mae":
        return mean_absolute_error(predicted, actual)
    if kind == "mape":
        return mean_absolute_percentage_error(predicted, actual)
    if kind == "accuracy":
        return accuracy(predicted, actual)
    raise ValueError(f"unknown metric {kind!r}")
