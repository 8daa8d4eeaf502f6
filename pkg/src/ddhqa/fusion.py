"""Clip-level feature fusion and the two-layer regression head.

Per clip, the 22 geometry statistics are concatenated with the clip's
spatial and temporal feature vectors; a two-stage fully-connected head
with a rectifier hidden layer regresses the fused vector to a scalar
quality score, and per-video scores are the average over sampled clips.
Training minimizes clip-level mean squared error against the video's
subjective score with bias-corrected adaptive-moment updates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError, TrainingDivergedError
from .features import GF_DIM

DEFAULT_SPATIAL_DIM = 3840
DEFAULT_TEMPORAL_DIM = 2304


@dataclass(frozen=True)
class ClipFeatureRecord:
    """Precomputed per-clip video features."""

    video_id: str
    clip_index: int
    sf: np.ndarray
    tf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sf", np.asarray(self.sf, dtype=np.float64))
        object.__setattr__(self, "tf", np.asarray(self.tf, dtype=np.float64))
        if self.clip_index < 0:
            raise ValueError("clip_index must be non-negative")
        if not (np.all(np.isfinite(self.sf)) and np.all(np.isfinite(self.tf))):
            raise ValueError(f"non-finite clip features for {self.video_id!r}")


@dataclass
class TrainingConfig:
    learning_rate: float = 4e-6
    epochs: int = 30
    batch_size: int = 4
    seed: int = 0
    hidden_dim: int = 128
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    shuffle: bool = True
    standardize: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")

    def with_seed(self, seed):
        return replace(self, seed=seed)


def fuse(gf, clip, d_s=None, d_t=None):
    """Concatenate geometry, spatial and temporal features, in that order.

    ``d_s``/``d_t`` are the dataset-declared dimensions; when given, the
    clip's vectors must match exactly.
    """
    gf_values = np.asarray(getattr(gf, "values", gf), dtype=np.float64)
    if gf_values.shape != (GF_DIM,):
        raise DimensionMismatchError(
            f"geometry features must have {GF_DIM} entries, got {gf_values.shape}"
        )
    if d_s is not None and clip.sf.shape != (d_s,):
        raise DimensionMismatchError(
            f"{clip.video_id}[{clip.clip_index}]: sf has {clip.sf.shape[0]} entries, expected {d_s}"
        )
    if d_t is not None and clip.tf.shape != (d_t,):
        raise DimensionMismatchError(
            f"{clip.video_id}[{clip.clip_index}]: tf has {clip.tf.shape[0]} entries, expected {d_t}"
        )
    return np.concatenate([gf_values, clip.sf, clip.tf])


@dataclass
class RegressionHead:
    """Two fully-connected stages with a rectifier between them."""

    w1: np.ndarray  # (hidden, input)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float

    @property
    def input_dim(self):
        return self.w1.shape[1]

    @property
    def hidden_dim(self):
        return self.w1.shape[0]

    @classmethod
    def initialize(cls, input_dim, hidden_dim, seed):
        """Uniform +-1/sqrt(fan-in) init from a seeded generator."""
        rng = np.random.default_rng(seed)
        lim1 = 1.0 / np.sqrt(input_dim)
        lim2 = 1.0 / np.sqrt(hidden_dim)
        return cls(
            w1=rng.uniform(-lim1, lim1, size=(hidden_dim, input_dim)),
            b1=rng.uniform(-lim1, lim1, size=hidden_dim),
            w2=rng.uniform(-lim2, lim2, size=hidden_dim),
            b2=float(rng.uniform(-lim2, lim2)),
        )

    def params(self):
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": np.float64(self.b2)}

    @classmethod
    def from_params(cls, params):
        return cls(
            w1=params["w1"], b1=params["b1"], w2=params["w2"], b2=float(params["b2"])
        )


def forward(head, fused):
    """Predicted quality score of one fused clip vector."""
    fused = np.asarray(fused, dtype=np.float64)
    if fused.shape != (head.input_dim,):
        raise DimensionMismatchError(
            f"fused vector has shape {fused.shape}, head expects ({head.input_dim},)"
        )
    hidden = np.maximum(head.w1 @ fused + head.b1, 0.0)
    return float(head.w2 @ hidden + head.b2)


def _forward_batch(params, x):
    pre = x @ params["w1"].T + params["b1"]
    hidden = np.maximum(pre, 0.0)
    q = hidden @ params["w2"] + params["b2"]
    return q, (pre, hidden)


def loss_and_grads(params, x, y):
    """Batch MSE loss and its analytic parameter gradients."""
    q, (pre, hidden) = _forward_batch(params, x)
    resid = q - y
    loss = float(np.mean(resid ** 2))
    dq = 2.0 * resid / len(y)
    d_hidden = np.outer(dq, params["w2"])
    d_pre = d_hidden * (pre > 0.0)
    grads = {
        "w1": d_pre.T @ x,
        "b1": d_pre.sum(axis=0),
        "w2": hidden.T @ dq,
        "b2": np.float64(dq.sum()),
    }
    return loss, grads


def predict_quality(head, gf, clips, d_s=None, d_t=None, standardizer=None):
    """Average predicted score over a video's clips."""
    if not clips:
        raise ValueError("predict_quality needs at least one clip")
    total = 0.0
    for clip in clips:
        fused = fuse(gf, clip, d_s=d_s, d_t=d_t)
        if standardizer is not None:
            fused = standardizer.transform(fused)
        total += forward(head, fused)
    return total / len(clips)


@dataclass(frozen=True)
class FeatureStandardizer:
    """Per-dimension z-scoring with training-fold statistics.

    Dimensions with zero spread are left unscaled (divisor 1), so
    constant features pass through centered.
    """

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x):
        std = np.std(x, axis=0)
        return cls(mean=np.mean(x, axis=0), std=np.where(std > 0.0, std, 1.0))

    @classmethod
    def identity(cls, dim):
        return cls(mean=np.zeros(dim), std=np.ones(dim))

    def transform(self, x):
        return (x - self.mean) / self.std


def adam_step(params, grads, moments, config, step_index):
    """One bias-corrected adaptive-moment update; pure in its inputs.

    ``moments`` is a pair of dicts (first, second) matching ``params``;
    returns the updated params and moments without mutating anything.
    """
    if step_index < 1:
        raise ValueError("step_index starts at 1")
    m, v = moments
    if set(params) != set(grads):
        raise DimensionMismatchError("params and grads carry different keys")
    new_params, new_m, new_v = {}, {}, {}
    b1, b2 = config.beta1, config.beta2
    for key, p in params.items():
        g = grads[key]
        if np.shape(g) != np.shape(p):
            raise DimensionMismatchError(
                f"{key}: gradient shape {np.shape(g)} != parameter shape {np.shape(p)}"
            )
        mk = b1 * m[key] + (1.0 - b1) * g
        vk = b2 * v[key] + (1.0 - b2) * g ** 2
        m_hat = mk / (1.0 - b1 ** step_index)
        v_hat = vk / (1.0 - b2 ** step_index)
        new_params[key] = p - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
        new_m[key] = mk
        new_v[key] = vk
    return new_params, (new_m, new_v)


def zero_moments(params):
    zeros = lambda p: np.zeros_like(np.asarray(p, dtype=np.float64))
    return ({k: zeros(p) for k, p in params.items()},
            {k: zeros(p) for k, p in params.items()})


@dataclass
class TrainResult:
    head: RegressionHead
    losses: list
    standardizer: FeatureStandardizer


def clip_training_matrix(dataset, d_s=None, d_t=None):
    """Flatten (gf, clips, mos) triples into a clip-level design matrix.

    Every clip inherits its video's subjective score as the regression
    target.
    """
    rows, targets = [], []
    for gf, clips, mos in dataset:
        if not np.isfinite(mos):
            raise ValueError("non-finite subjective score in training data")
        for clip in clips:
            rows.append(fuse(gf, clip, d_s=d_s, d_t=d_t))
            targets.append(float(mos))
    if not rows:
        raise ValueError("empty training dataset")
    return np.asarray(rows), np.asarray(targets)


def train(head, dataset, config, d_s=None, d_t=None, standardizer=None):
    """Minibatch gradient descent on clip-level MSE.

    ``dataset`` is a list of (gf, clips, mos) triples. With a fixed seed
    the parameter trajectory is reproducible bit for bit. Returns the
    trained head, the per-epoch mean training loss, and the feature
    standardizer that must be applied at prediction time.
    """
    x, y = clip_training_matrix(dataset, d_s=d_s, d_t=d_t)
    if x.shape[1] != head.input_dim:
        raise DimensionMismatchError(
            f"dataset rows have {x.shape[1]} features, head expects {head.input_dim}"
        )
    if standardizer is None:
        standardizer = (
            FeatureStandardizer.fit(x)
            if config.standardize
            else FeatureStandardizer.identity(x.shape[1])
        )
    x = standardizer.transform(x)

    params = {k: np.array(p, dtype=np.float64) for k, p in head.params().items()}
    moments = zero_moments(params)
    rng = np.random.default_rng(config.seed)
    step = 0
    losses = []
    n = len(y)
    for epoch in range(config.epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        sse = 0.0
        for lo in range(0, n, config.batch_size):
            batch = order[lo : lo + config.batch_size]
            loss, grads = loss_and_grads(params, x[batch], y[batch])
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch}, step {step + 1} "
                    f"(learning rate {config.learning_rate}); try a smaller rate"
                )
            step += 1
            params, moments = adam_step(params, grads, moments, config, step)
            sse += loss * len(batch)
        losses.append(sse / n)
    return TrainResult(
        head=RegressionHead.from_params(params),
        losses=losses,
        standardizer=standardizer,
    )
