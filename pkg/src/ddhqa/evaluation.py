"""Experimental protocol: clip sampling, group folds, cross-validation.

Videos are represented by a fixed number of 1-second clips, expanded by
cyclic sampling when fewer are available. Folds are built over motion
groups (two held-out groups per fold), a fresh head is trained per fold,
and the four agreement criteria are averaged over folds.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from . import metrics
from .fusion import RegressionHead, TrainingConfig, predict_quality, train

METRIC_ORDER = ("srcc", "plcc", "krcc", "rmse")  # report column order


def cyclic_clip_sample(n_clips_available, target=6):
    """Indices of the clips used for one video.

    The first ``target`` clips when enough exist; otherwise the existing
    clips repeated cyclically until ``target`` are selected.
    """
    if n_clips_available < 1:
        raise ValueError("need at least one available clip")
    if target < 1:
        raise ValueError("target must be positive")
    if n_clips_available >= target:
        return list(range(target))
    return [i % n_clips_available for i in range(target)]


@dataclass(frozen=True)
class FoldSpec:
    fold_id: int
    train_groups: tuple
    test_groups: tuple


def kfold_split(groups, seed, generalize=False):
    """Split motion groups into folds of two held-out groups each.

    The canonical protocol uses exactly 10 distinct groups and 5 folds;
    with ``generalize`` any even count 2k >= 4 yields k folds by the same
    pairing rule. Groups are shuffled by ``seed`` and consecutive pairs
    become the test sets, so the test sets partition the group set.
    """
    groups = list(groups)
    if len(set(groups)) != len(groups):
        raise ValueError("group ids must be distinct")
    if generalize:
        if len(groups) < 4 or len(groups) % 2:
            raise ValueError("generalized split needs an even group count >= 4")
    elif len(groups) != 10:
        raise ValueError("expected exactly 10 motion groups (or pass generalize=True)")
    order = [groups[i] for i in np.random.default_rng(seed).permutation(len(groups))]
    folds = []
    for fold_id in range(len(order) // 2):
        test = tuple(order[2 * fold_id : 2 * fold_id + 2])
        train = tuple(g for g in order if g not in test)
        folds.append(FoldSpec(fold_id=fold_id, train_groups=train, test_groups=test))
    return folds


@dataclass
class CrossValConfig:
    training: TrainingConfig = field(default_factory=TrainingConfig)
    clips_per_video: int = 6
    seed: int = 0
    logistic_remap: bool = False
    generalize_folds: bool = False


@dataclass(frozen=True)
class FoldMetrics:
    fold_id: int
    srcc: float
    plcc: float
    krcc: float
    rmse: float
    n: int


@dataclass(frozen=True)
class EvaluationReport:
    folds: tuple
    srcc: float
    plcc: float
    krcc: float
    rmse: float
    n: int

    @classmethod
    def from_folds(cls, folds):
        folds = tuple(folds)
        return cls(
            folds=folds,
            srcc=float(np.mean([f.srcc for f in folds])),
            plcc=float(np.mean([f.plcc for f in folds])),
            krcc=float(np.mean([f.krcc for f in folds])),
            rmse=float(np.mean([f.rmse for f in folds])),
            n=sum(f.n for f in folds),
        )

    def to_text(self):
        header = f"{'fold':>6} " + " ".join(f"{m.upper():>10}" for m in METRIC_ORDER)
        lines = [header]
        for f in self.folds:
            lines.append(
                f"{f.fold_id:>6} "
                + " ".join(f"{getattr(f, m):>10.4f}" for m in METRIC_ORDER)
            )
        lines.append(
            f"{'mean':>6} "
            + " ".join(f"{getattr(self, m):>10.4f}" for m in METRIC_ORDER)
        )
        lines.append(f"n = {self.n} test videos")
        return "\n".join(lines)

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fold"] + list(METRIC_ORDER) + ["n"])
            for f in self.folds:
                writer.writerow(
                    [f.fold_id] + [repr(getattr(f, m)) for m in METRIC_ORDER] + [f.n]
                )
            writer.writerow(
                ["mean"] + [repr(getattr(self, m)) for m in METRIC_ORDER] + [self.n]
            )


def sampled_clips(sample, target):
    indices = cyclic_clip_sample(len(sample.clips), target)
    return [sample.clips[i] for i in indices]


def default_train_fn(train_samples, config, fold_seed, d_s=None, d_t=None):
    """Train a fresh head on the fold's training videos.

    Returns a scorer mapping a :class:`~ddhqa.dataio.VideoSample` to a
    predicted quality value.
    """
    dataset = [
        (s.gf, sampled_clips(s, config.clips_per_video), s.mos) for s in train_samples
    ]
    tcfg = replace(config.training, seed=fold_seed)
    probe = dataset[0]
    input_dim = len(probe[0]) + len(probe[1][0].sf) + len(probe[1][0].tf)
    head = RegressionHead.initialize(input_dim, tcfg.hidden_dim, fold_seed)
    result = train(head, dataset, tcfg, d_s=d_s, d_t=d_t)

    def score(sample):
        return predict_quality(
            result.head,
            sample.gf,
            sampled_clips(sample, config.clips_per_video),
            d_s=d_s,
            d_t=d_t,
            standardizer=result.standardizer,
        )

    return score


def run_cross_validation(samples, config, train_fn=None, d_s=None, d_t=None):
    """Motion-group cross-validation over joined video samples.

    A fresh head is trained per fold on the training groups and evaluated
    on the held-out groups; the report carries per-fold metrics and their
    mean. ``train_fn(train_samples, config, fold_seed)`` may be injected
    to replace the default training path (e.g. with an oracle scorer in
    tests).
    """
    if not samples:
        raise ValueError("no samples to cross-validate")
    groups = sorted({s.group_id for s in samples})
    folds = kfold_split(groups, config.seed, generalize=config.generalize_folds)
    fold_metrics = []
    for fold in folds:
        train_samples = [s for s in samples if s.group_id in fold.train_groups]
        test_samples = [s for s in samples if s.group_id in fold.test_groups]
        fold_seed = config.seed + fold.fold_id
        if train_fn is None:
            score = default_train_fn(train_samples, config, fold_seed, d_s=d_s, d_t=d_t)
        else:
            score = train_fn(train_samples, config, fold_seed)
        pred = np.array([score(s) for s in test_samples])
        mos = np.array([s.mos for s in test_samples])
        remapped = metrics.logistic_remap(pred, mos) if config.logistic_remap else pred
        fold_metrics.append(
            FoldMetrics(
                fold_id=fold.fold_id,
                srcc=metrics.srcc(pred, mos),
                plcc=metrics.plcc(remapped, mos),
                krcc=metrics.krcc(pred, mos),
                rmse=metrics.rmse(remapped, mos),
                n=len(test_samples),
            )
        )
    return EvaluationReport.from_folds(fold_metrics)
