"""Synthetic data generators used as verification oracles.

Two constructions: a lag-coupled pair of series with a known causal
direction (for the Granger test), and a feature matrix with one planted
informative column driving the target (for the regression / importance
pipeline).  Everything is a pure function of its spec, seed included; the
counter-based generator keeps fixtures identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import SplitMix64, derive_seed
from .textfeat import FeatureMatrix
from .timeseries import NormalizedTarget


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class VarSpec:
    coupling: float
    true_lag: int = 1
    length: int = 200
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.true_lag < 1:
            raise SynthError("true_lag must be >= 1")
        if self.length < 10 * self.true_lag:
            raise SynthError("length must be at least 10 * true_lag")
        if self.noise_sd <= 0:
            raise SynthError("noise_sd must be positive")


def gen_var_pair(spec: VarSpec) -> tuple[np.ndarray, np.ndarray]:
    """(x, y) with y_t = coupling * x_{t - true_lag} + noise; x i.i.d. standard normal."""
    rng = SplitMix64(spec.seed)
    x = rng.normals(spec.length)
    y = rng.normals(spec.length) * spec.noise_sd
    if spec.coupling != 0.0:
        y[spec.true_lag :] += spec.coupling * x[: -spec.true_lag]
    return x, y


@dataclass(frozen=True)
class PlantedCorpusSpec:
    n_frames: int = 120
    vocab_size: int = 40
    planted_word: str = "moon"
    effect_size: float = 0.5
    seed: int = 0
    markov_window: int = 3
    noise_sd: float = 0.02

    def __post_init__(self):
        if self.n_frames < self.markov_window + 10:
            raise SynthError("n_frames too small for the window")
        if self.vocab_size < 2:
            raise SynthError("vocab_size must be >= 2")
        if self.effect_size < 0:
            raise SynthError("effect_size must be >= 0")
        if self.noise_sd <= 0:
            raise SynthError("noise_sd must be positive")


def _synthetic_vocab(spec: PlantedCorpusSpec) -> tuple[str, ...]:
    words = {spec.planted_word}
    i = 0
    while len(words) < spec.vocab_size:
        words.add(f"w{i:03d}")
        i += 1
    return tuple(sorted(words))


def gen_planted_corpus(spec: PlantedCorpusSpec) -> tuple[FeatureMatrix, NormalizedTarget]:
    """Feature matrix plus target where only the planted column carries signal.

    The planted column is present (positive score) in exactly half of the
    frames; the target is 1 + effect_size * (centered planted score) + noise,
    so with a nonzero effect the up/down label is a function of that single
    column, while all other columns are independent noise.  Label balance
    stays within [0.4, 0.6] by construction (validated; a failing seed raises).
    """
    vocab = _synthetic_vocab(spec)
    planted_col = vocab.index(spec.planted_word)
    m, v = spec.n_frames, len(vocab)

    rng = SplitMix64(derive_seed(spec.seed, 0))
    values = np.zeros((m, v))
    for j in range(v):
        if j == planted_col:
            continue
        present = rng.uniforms(m) < 0.3
        scores = 0.1 + 0.8 * rng.uniforms(m)
        values[:, j] = np.where(present, scores, 0.0)

    # planted column: exactly half the frames active, shuffled deterministically
    half = m // 2
    order = SplitMix64(derive_seed(spec.seed, 1)).permutation(m)
    planted_scores = 0.4 + 0.4 * SplitMix64(derive_seed(spec.seed, 2)).uniforms(m)
    planted = np.zeros(m)
    planted[order[:half]] = planted_scores[order[:half]]
    values[:, planted_col] = planted

    target_idx = list(range(spec.markov_window, m))
    noise = SplitMix64(derive_seed(spec.seed, 3)).normals(len(target_idx)) * spec.noise_sd
    centered = planted[target_idx] - planted[target_idx].mean()
    ys = 1.0 + spec.effect_size * centered + noise
    if np.any(ys <= 0):
        raise SynthError("effect_size too large: target would be non-positive")

    labels = ys > 1.0
    balance = float(labels.mean())
    if not 0.4 <= balance <= 0.6:
        raise SynthError(f"seed {spec.seed} gives label balance {balance:.3f}; pick another seed")

    matrix = FeatureMatrix(vocab=vocab, values=values, frame_indices=tuple(range(m)))
    target = NormalizedTarget(
        markov_window=spec.markov_window,
        values=tuple((i, float(y)) for i, y in zip(target_idx, ys)),
    )
    return matrix, target
