"""Permutation feature importance (mean decrease accuracy) and word-occurrence KDE.

A feature's importance sample is baseline metric minus the metric after
shuffling that feature's column in the evaluation rows; mean and variance
are taken over a fixed number of independent shuffles.  Each (feature,
repeat) pair draws from its own derived random stream, so parallel and
serial execution agree.  Density profiles locate a word's activity across
the timeline via a Gaussian kernel over the frame indices where it scored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import MlpModel, align_features_to_target, binarize, classification_scores, predict
from .rng import SplitMix64, derive_seed
from .textfeat import FeatureMatrix
from .timeseries import NormalizedTarget

DEFAULT_REPEATS = 5

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class ImportanceError(ValueError):
    pass


@dataclass(frozen=True)
class ImportanceScore:
    word: str
    mean: float
    variance: float
    repeats: int


@dataclass(frozen=True)
class DensityProfile:
    word: str
    grid: tuple[int, ...]
    density: tuple[float, ...]
    bandwidth: float | None
    n_occurrences: int

    @property
    def is_empty(self) -> bool:
        return self.n_occurrences == 0


def _metric(model: MlpModel, x: np.ndarray, y: np.ndarray, kind: str) -> float:
    preds = predict(model, x)
    if kind == "accuracy":
        return classification_scores(binarize(y), binarize(preds))[0]
    if kind == "mae":
        return float(np.mean(np.abs(y - preds)))
    raise ImportanceError(f"unknown metric {kind!r}")


def mda(
    model: MlpModel,
    matrix: FeatureMatrix,
    target: NormalizedTarget,
    repeats: int = DEFAULT_REPEATS,
    seed: int = 0,
    metric: str = "accuracy",
) -> list[ImportanceScore]:
    """Permutation importance per vocabulary word, in vocabulary order.

    Pass the held-out evaluation rows; the baseline metric is computed once.
    With the default accuracy metric, a sample is baseline - permuted; with
    the mae metric the sign flips (permuted - baseline) so that larger still
    means more important.
    """
    if repeats < 1:
        raise ImportanceError("repeats must be >= 1")
    _, x, y = align_features_to_target(matrix, target)
    n = x.shape[0]
    if n < 2:
        raise ImportanceError("evaluation set must have at least 2 rows; permutation is identity")
    baseline = _metric(model, x, y, metric)
    scores = []
    for j, word in enumerate(matrix.vocab):
        samples = []
        for r in range(repeats):
            stream = SplitMix64(derive_seed(seed, j, r))
            perm = stream.permutation(n)
            permuted = x.copy()
            permuted[:, j] = x[perm, j]
            shuffled_metric = _metric(model, permuted, y, metric)
            if metric == "mae":
                samples.append(shuffled_metric - baseline)
            else:
                samples.append(baseline - shuffled_metric)
        arr = np.asarray(samples)
        scores.append(
            ImportanceScore(
                word=word,
                mean=float(arr.mean()),
                variance=float(arr.var()),
                repeats=repeats,
            )
        )
    return scores


def top_bottom(scores, k: int = 20) -> tuple[list[ImportanceScore], list[ImportanceScore]]:
    """(top-k by mean descending, bottom-k by mean ascending); ties lexicographic."""
    if not scores:
        raise ImportanceError("no scores given")
    top = sorted(scores, key=lambda s: (-s.mean, s.word))[:k]
    bottom = sorted(scores, key=lambda s: (s.mean, s.word))[:k]
    return top, bottom


def gaussian_kde(grid, points, bandwidth: float) -> np.ndarray:
    """Raw Gaussian kernel density of ``points`` evaluated on ``grid``."""
    if bandwidth <= 0:
        raise ImportanceError("bandwidth must be positive")
    g = np.asarray(grid, dtype=float)[:, None]
    pts = np.asarray(points, dtype=float)[None, :]
    z = (g - pts) / bandwidth
    return np.exp(-0.5 * z * z).sum(axis=1) / (pts.shape[1] * bandwidth * math.sqrt(2.0 * math.pi))


def scott_bandwidth(points) -> float:
    """Scott's rule sigma * n^(-1/5); falls back to 1.0 for degenerate inputs."""
    pts = np.asarray(points, dtype=float)
    if pts.size < 2:
        return 1.0
    sd = float(pts.std(ddof=1))
    if sd <= 0.0:
        return 1.0
    return sd * pts.size ** (-0.2)


def kde_profile(word: str, matrix: FeatureMatrix, bandwidth: float | None = None) -> DensityProfile:
    """Occurrence density of a word over all frame indices.

    Occurrences are the frames where the word's matrix entry is nonzero.
    The raw kernel estimate is renormalized so its trapezoidal integral over
    the grid is 1.  A word with zero occurrences yields an empty profile.
    """
    column = matrix.column(word)
    grid = tuple(matrix.frame_indices)
    points = [fi for fi, v in zip(matrix.frame_indices, column) if v != 0.0]
    if not points:
        return DensityProfile(word=word, grid=(), density=(), bandwidth=None, n_occurrences=0)
    bw = bandwidth if bandwidth is not None else scott_bandwidth(points)
    raw = gaussian_kde(grid, points, bw)
    if len(grid) < 2:
        density = np.array([1.0])
    else:
        integral = float(_trapezoid(raw, np.asarray(grid, dtype=float)))
        density = raw / integral if integral > 0 else raw
    return DensityProfile(
        word=word,
        grid=grid,
        density=tuple(float(v) for v in density),
        bandwidth=bw,
        n_occurrences=len(points),
    )
