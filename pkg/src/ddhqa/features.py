"""The 22-parameter geometry feature vector.

Eleven statistics per attribute array (dihedral angles, then Gaussian
curvature): mean, variance, entropy, GGD shape/scale, AGGD
asymmetry/shape/left/right variance, Gamma shape/rate. Basic statistics
are fitted on the raw field, GGD and AGGD on the z-scored field, Gamma
on the raw field shifted to positive support.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .fitting import (
    ENTROPY_BINS,
    fit_aggd,
    fit_basic,
    fit_gamma,
    fit_ggd,
    histogram_counts,
    shift_to_positive,
    zscore,
)
from .geometry import dihedral_angles, gaussian_curvature

_PER_FIELD_SLOTS = (
    "mean",
    "variance",
    "entropy",
    "ggd_shape",
    "ggd_scale",
    "aggd_asymmetry",
    "aggd_shape",
    "aggd_left_variance",
    "aggd_right_variance",
    "gamma_shape",
    "gamma_rate",
)

GF_SLOT_NAMES = tuple(
    f"{kind}_{slot}" for kind in ("dihedral", "curvature") for slot in _PER_FIELD_SLOTS
)

GF_DIM = len(GF_SLOT_NAMES)  # 2 * (3 + 2 + 4 + 2) = 22


@dataclass(frozen=True)
class GeometryFeatureVector:
    """Exactly 22 finite statistics, plus any per-fit warning records."""

    values: np.ndarray
    warnings: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (GF_DIM,):
            raise ValueError(f"geometry feature vector must have {GF_DIM} entries")
        if not np.all(np.isfinite(v)):
            raise ValueError("geometry feature vector must be finite")
        object.__setattr__(self, "values", v)

    def __getitem__(self, name):
        return float(self.values[GF_SLOT_NAMES.index(name)])


def _fit_field(field):
    """The 11 statistics of one field, degenerate fits zero-filled."""
    slots = np.zeros(len(_PER_FIELD_SLOTS), dtype=np.float64)
    notes = []

    def attempt(label, start, fn, *args):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                result = fn(*args)
            for w in caught:
                notes.append(f"{field.kind} {label}: {w.message}")
            slots[start : start + len(result)] = result
        except DegenerateInputError as exc:
            notes.append(f"{field.kind} {label}: degenerate input ({exc}); zero-filled")

    attempt("basic", 0, fit_basic, field.values)
    try:
        normalized = zscore(field.values)
    except DegenerateInputError as exc:
        normalized = None
        notes.append(f"{field.kind} normalization: {exc}; ggd/aggd zero-filled")
    if normalized is not None:
        attempt("ggd", 3, fit_ggd, normalized)
        attempt("aggd", 5, fit_aggd, normalized)
    attempt("gamma", 9, fit_gamma, shift_to_positive(field.values))
    return slots, notes


def extract_geometry_features(mesh, area_mode="mixed"):
    """Compute the 22-dimensional geometry feature vector of a mesh.

    Field-level failures (no usable edges or vertices) propagate;
    individual degenerate fits are downgraded to zero-filled slots with a
    warning record so corpus runs never die on one pathological mesh.
    The result is deterministic for a fixed mesh and configuration.
    """
    dihedral = dihedral_angles(mesh)
    curvature = gaussian_curvature(mesh, area_mode=area_mode)
    d_slots, d_notes = _fit_field(dihedral)
    c_slots, c_notes = _fit_field(curvature)
    return GeometryFeatureVector(
        values=np.concatenate([d_slots, c_slots]),
        warnings=tuple(d_notes + c_notes),
    )


def field_histogram(field, bins=ENTROPY_BINS):
    """Normalized equal-width histogram of a field over [min, max].

    Returns (bin_edges, probabilities); probabilities sum to 1. A
    constant field puts all mass in the first bin.
    """
    x = np.asarray(field.values, dtype=np.float64)
    counts, edges = histogram_counts(x, bins=bins)
    return edges, counts / x.size


def write_field_histograms(path, fields, bins=ENTROPY_BINS):
    """Dump normalized histograms of the given fields as CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["field", "bin_index", "bin_left", "bin_right", "probability"])
        for field in fields:
            edges, probs = field_histogram(field, bins=bins)
            for i, p in enumerate(probs):
                writer.writerow(
                    [field.kind, i, repr(float(edges[i])), repr(float(edges[i + 1])), repr(float(p))]
                )
