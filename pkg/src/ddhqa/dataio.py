"""File formats tying the pipeline together.

- geometry feature records: line-delimited JSON, one
  ``{"model_id": ..., "gf": [22 floats]}`` per model, with an optional
  leading ``{"meta": {...}}`` line carrying config/seed/tool version;
- clip features: line-delimited JSON with a ``{"d_s": ..., "d_t": ...}``
  header record followed by
  ``{"video_id", "clip_index", "sf": [...], "tf": [...]}`` records;
- subjective scores: CSV ``video_id,mos,group_id``;
- trained head: versioned JSON dump of parameters, config and feature
  standardization statistics.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import (
    ArtifactVersionError,
    DimensionMismatchError,
    JoinMismatchError,
)
from .features import GF_DIM
from .fusion import ClipFeatureRecord, FeatureStandardizer, RegressionHead

HEAD_FORMAT_VERSION = 1


def _dump_line(obj):
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def make_meta(config=None, seed=None):
    meta = {"tool": "ddhqa", "tool_version": __version__}
    if config is not None:
        meta["config"] = config
    if seed is not None:
        meta["seed"] = seed
    return meta


def write_gf_records(path, records, meta=None):
    """Write geometry feature records, one model per line."""
    with open(path, "w", encoding="utf-8") as fh:
        if meta is not None:
            fh.write(_dump_line({"meta": meta}) + "\n")
        for model_id, gf in records.items():
            values = [float(v) for v in np.asarray(getattr(gf, "values", gf))]
            if len(values) != GF_DIM:
                raise DimensionMismatchError(
                    f"{model_id}: geometry feature vector has {len(values)} entries"
                )
            fh.write(_dump_line({"model_id": str(model_id), "gf": values}) + "\n")


def read_gf_records(path):
    """Read geometry feature records; returns (model_id -> array, meta)."""
    records = {}
    meta = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "meta" in obj:
                meta = obj["meta"]
                continue
            gf = np.asarray(obj["gf"], dtype=np.float64)
            if gf.shape != (GF_DIM,):
                raise DimensionMismatchError(
                    f"{path}:{line_no}: gf has {gf.shape} entries, expected {GF_DIM}"
                )
            records[obj["model_id"]] = gf
    return records, meta


def write_clip_features(path, records, d_s, d_t, meta=None):
    """Write the clip feature file: header record, then one clip per line."""
    with open(path, "w", encoding="utf-8") as fh:
        if meta is not None:
            fh.write(_dump_line({"meta": meta}) + "\n")
        fh.write(_dump_line({"d_s": int(d_s), "d_t": int(d_t)}) + "\n")
        for rec in records:
            if rec.sf.shape != (d_s,) or rec.tf.shape != (d_t,):
                raise DimensionMismatchError(
                    f"{rec.video_id}[{rec.clip_index}] does not match header dims"
                )
            fh.write(
                _dump_line(
                    {
                        "video_id": rec.video_id,
                        "clip_index": rec.clip_index,
                        "sf": [float(v) for v in rec.sf],
                        "tf": [float(v) for v in rec.tf],
                    }
                )
                + "\n"
            )


def read_clip_features(path):
    """Read a clip feature file.

    Returns (video_id -> clips sorted by clip_index, d_s, d_t). Every
    record is validated against the header dimensions.
    """
    header = None
    by_video = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "meta" in obj:
                continue
            if header is None:
                if "d_s" not in obj or "d_t" not in obj:
                    raise ValueError(
                        f"{path}:{line_no}: first record must be the "
                        '{"d_s", "d_t"} header'
                    )
                header = (int(obj["d_s"]), int(obj["d_t"]))
                continue
            rec = ClipFeatureRecord(
                video_id=obj["video_id"],
                clip_index=int(obj["clip_index"]),
                sf=obj["sf"],
                tf=obj["tf"],
            )
            if rec.sf.shape != (header[0],) or rec.tf.shape != (header[1],):
                raise DimensionMismatchError(
                    f"{path}:{line_no}: clip dims do not match header "
                    f"(d_s={header[0]}, d_t={header[1]})"
                )
            by_video.setdefault(rec.video_id, []).append(rec)
    if header is None:
        raise ValueError(f"{path}: missing header record")
    for clips in by_video.values():
        clips.sort(key=lambda r: r.clip_index)
    return by_video, header[0], header[1]


def read_mos_csv(path):
    """Read the subjective score table: video_id -> (mos, group_id)."""
    table = {}
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"video_id", "mos", "group_id"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: header must contain {sorted(required)}")
        for row in reader:
            table[row["video_id"]] = (float(row["mos"]), row["group_id"])
    return table


def write_mos_csv(path, table):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["video_id", "mos", "group_id"])
        for video_id, (mos, group_id) in table.items():
            writer.writerow([video_id, repr(float(mos)), group_id])


def read_manifest(path):
    """Optional model_id -> video_id mapping when the ids differ."""
    mapping = {}
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"model_id", "video_id"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: header must contain {sorted(required)}")
        for row in reader:
            mapping[row["model_id"]] = row["video_id"]
    return mapping


@dataclass
class VideoSample:
    """One video's worth of joined data."""

    video_id: str
    gf: np.ndarray
    clips: list
    mos: float
    group_id: str


def assemble_dataset(gf_by_model, clips_by_video, mos_by_video, manifest=None):
    """Join the three sources by video id into :class:`VideoSample` rows.

    ``manifest`` maps model ids to video ids when they differ; by default
    they are taken as equal. The join is strict: any id present in one
    source and missing from another raises :class:`JoinMismatchError`
    listing the orphans.
    """
    gf_by_video = {}
    for model_id, gf in gf_by_model.items():
        video_id = manifest.get(model_id, model_id) if manifest else model_id
        gf_by_video[video_id] = gf

    ids_gf = set(gf_by_video)
    ids_clips = set(clips_by_video)
    ids_mos = set(mos_by_video)
    common = ids_gf & ids_clips & ids_mos
    orphans = {
        "gf_only": ids_gf - common,
        "clips_only": ids_clips - common,
        "mos_only": ids_mos - common,
    }
    if any(orphans.values()):
        raise JoinMismatchError("dataset ids do not line up", orphans)

    samples = []
    for video_id in sorted(common):
        mos, group_id = mos_by_video[video_id]
        samples.append(
            VideoSample(
                video_id=video_id,
                gf=gf_by_video[video_id],
                clips=clips_by_video[video_id],
                mos=mos,
                group_id=group_id,
            )
        )
    return samples


def save_head(path, head, standardizer, d_s, d_t, config=None, seed=None):
    """Write the trained head artifact (versioned JSON)."""
    payload = {
        "format_version": HEAD_FORMAT_VERSION,
        "kind": "ddhqa-head",
        "meta": make_meta(config=config, seed=seed),
        "d_s": int(d_s),
        "d_t": int(d_t),
        "feature_mean": [float(v) for v in standardizer.mean],
        "feature_std": [float(v) for v in standardizer.std],
        "w1": [[float(v) for v in row] for row in head.w1],
        "b1": [float(v) for v in head.b1],
        "w2": [float(v) for v in head.w2],
        "b2": float(head.b2),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_head(path):
    """Load a trained head artifact.

    Returns (head, standardizer, d_s, d_t, meta). Unknown format versions
    raise :class:`ArtifactVersionError`.
    """
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != HEAD_FORMAT_VERSION:
        raise ArtifactVersionError(
            f"{path}: unsupported head format version {version!r} "
            f"(expected {HEAD_FORMAT_VERSION})"
        )
    head = RegressionHead(
        w1=np.asarray(payload["w1"], dtype=np.float64),
        b1=np.asarray(payload["b1"], dtype=np.float64),
        w2=np.asarray(payload["w2"], dtype=np.float64),
        b2=float(payload["b2"]),
    )
    standardizer = FeatureStandardizer(
        mean=np.asarray(payload["feature_mean"], dtype=np.float64),
        std=np.asarray(payload["feature_std"], dtype=np.float64),
    )
    return head, standardizer, payload["d_s"], payload["d_t"], payload.get("meta")
