"""Batch command-line front end.

Subcommands: ``extract-geometry``, ``train``, ``evaluate``, ``predict``.
Options may come from a JSON ``--config`` file; explicit flags override
it. Exit codes: 0 ok, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .dataio import (
    assemble_dataset,
    load_head,
    make_meta,
    read_clip_features,
    read_gf_records,
    read_manifest,
    read_mos_csv,
    save_head,
    write_gf_records,
)
from .errors import DDHQAError
from .evaluation import CrossValConfig, run_cross_validation, sampled_clips
from .features import extract_geometry_features, write_field_histograms
from .fusion import RegressionHead, TrainingConfig, predict_quality, train
from .geometry import AREA_MODES, dihedral_angles, gaussian_curvature
from .mesh import parse_mesh

# Keys the --config file may provide; explicit flags win.
CONFIG_KEYS = (
    "learning_rate",
    "epochs",
    "batch_size",
    "hidden_dim",
    "seed",
    "clips_per_video",
    "area_mode",
    "logistic_remap",
    "generalize_folds",
)

_DEFAULTS = {
    "learning_rate": 4e-6,
    "epochs": 30,
    "batch_size": 4,
    "hidden_dim": 128,
    "seed": 0,
    "clips_per_video": 6,
    "area_mode": "mixed",
    "logistic_remap": False,
    "generalize_folds": False,
}


def _resolve_options(args):
    """Merge defaults, config file and explicit flags (in that order)."""
    options = dict(_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        options.update(loaded)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            options[key] = value
    return options


def _training_config(options):
    return TrainingConfig(
        learning_rate=float(options["learning_rate"]),
        epochs=int(options["epochs"]),
        batch_size=int(options["batch_size"]),
        seed=int(options["seed"]),
        hidden_dim=int(options["hidden_dim"]),
    )


def _model_id(path):
    return os.path.splitext(os.path.basename(path))[0]


def cmd_extract_geometry(args):
    options = _resolve_options(args)
    records = {}
    failures = []
    for path in args.meshes:
        try:
            mesh = parse_mesh(path, format=args.format)
            gf = extract_geometry_features(mesh, area_mode=options["area_mode"])
            records[_model_id(path)] = gf
            for note in gf.warnings:
                failures.append({"file": path, "warning": note})
            if args.dump_histogram:
                os.makedirs(args.dump_histogram, exist_ok=True)
                fields = [
                    dihedral_angles(mesh),
                    gaussian_curvature(mesh, area_mode=options["area_mode"]),
                ]
                write_field_histograms(
                    os.path.join(args.dump_histogram, _model_id(path) + "_hist.csv"),
                    fields,
                )
        except (DDHQAError, OSError, ValueError) as exc:
            failures.append({"file": path, "error": str(exc)})
            print(f"warning: {path}: {exc}", file=sys.stderr)
    meta = make_meta(config={"area_mode": options["area_mode"]}, seed=options["seed"])
    write_gf_records(args.out, records, meta=meta)
    log_path = args.out + ".log"
    with open(log_path, "w", encoding="utf-8") as fh:
        for entry in failures:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    if not records:
        print("error: no mesh could be processed", file=sys.stderr)
        return 1
    print(f"wrote {len(records)} geometry feature records to {args.out}")
    return 0


def _load_joined(args, need_mos=True):
    gf_by_model, _ = read_gf_records(args.gf)
    clips_by_video, d_s, d_t = read_clip_features(args.clips)
    manifest = read_manifest(args.manifest) if getattr(args, "manifest", None) else None
    if need_mos:
        mos_by_video = read_mos_csv(args.mos)
    else:
        # predict has no subjective scores; fabricate a neutral table over
        # the ids present in both feature files
        gf_ids = {
            (manifest.get(m, m) if manifest else m) for m in gf_by_model
        }
        mos_by_video = {
            v: (0.0, "none") for v in set(clips_by_video) & gf_ids
        }
    samples = assemble_dataset(gf_by_model, clips_by_video, mos_by_video, manifest)
    return samples, d_s, d_t


def cmd_train(args):
    options = _resolve_options(args)
    samples, d_s, d_t = _load_joined(args)
    tcfg = _training_config(options)
    target = int(options["clips_per_video"])
    dataset = [(s.gf, sampled_clips(s, target), s.mos) for s in samples]
    input_dim = len(samples[0].gf) + d_s + d_t
    head = RegressionHead.initialize(input_dim, tcfg.hidden_dim, tcfg.seed)
    result = train(head, dataset, tcfg, d_s=d_s, d_t=d_t)
    save_head(
        args.out,
        result.head,
        result.standardizer,
        d_s,
        d_t,
        config={k: options[k] for k in CONFIG_KEYS},
        seed=tcfg.seed,
    )
    curve_path = args.loss_curve or os.path.splitext(args.out)[0] + "_loss.csv"
    with open(curve_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss"])
        for epoch, loss in enumerate(result.losses):
            writer.writerow([epoch, repr(loss)])
    print(f"trained head on {len(samples)} videos -> {args.out}")
    return 0


def cmd_evaluate(args):
    options = _resolve_options(args)
    samples, d_s, d_t = _load_joined(args)
    config = CrossValConfig(
        training=_training_config(options),
        clips_per_video=int(options["clips_per_video"]),
        seed=int(options["seed"]),
        logistic_remap=bool(options["logistic_remap"]),
        generalize_folds=bool(options["generalize_folds"]),
    )
    report = run_cross_validation(samples, config, d_s=d_s, d_t=d_t)
    os.makedirs(args.out_dir, exist_ok=True)
    meta = make_meta(config={k: options[k] for k in CONFIG_KEYS}, seed=config.seed)
    text = report.to_text()
    with open(os.path.join(args.out_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"# ddhqa {__version__} evaluation report\n")
        fh.write(f"# meta: {json.dumps(meta, sort_keys=True)}\n")
        fh.write(text + "\n")
    report.write_csv(os.path.join(args.out_dir, "report.csv"))
    with open(os.path.join(args.out_dir, "report.meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True)
        fh.write("\n")
    print(text)
    return 0


def cmd_predict(args):
    options = _resolve_options(args)
    head, standardizer, d_s, d_t, _ = load_head(args.head)
    samples, file_d_s, file_d_t = _load_joined(args, need_mos=False)
    if (file_d_s, file_d_t) != (d_s, d_t):
        raise DDHQAError(
            f"clip feature dims ({file_d_s}, {file_d_t}) do not match the "
            f"trained head ({d_s}, {d_t})"
        )
    target = int(options["clips_per_video"])
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["video_id", "score"])
        for sample in samples:
            score = predict_quality(
                head,
                sample.gf,
                sampled_clips(sample, target),
                d_s=d_s,
                d_t=d_t,
                standardizer=standardizer,
            )
            writer.writerow([sample.video_id, repr(score)])
    print(f"wrote {len(samples)} predictions to {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ddhqa",
        description="Geometry-aware no-reference quality assessment for "
        "dynamic digital humans",
    )
    parser.add_argument("--version", action="version", version=f"ddhqa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file with option defaults")
        p.add_argument("--seed", type=int, help="random seed (default 0)")

    p = sub.add_parser("extract-geometry", help="compute geometry feature records")
    p.add_argument("meshes", nargs="+", help="mesh files (.obj / ascii .ply)")
    p.add_argument("--out", required=True, help="output feature records file")
    p.add_argument("--format", choices=["obj", "ply-ascii"], help="force input format")
    p.add_argument("--area-mode", dest="area_mode", choices=AREA_MODES)
    p.add_argument(
        "--dump-histogram",
        metavar="DIR",
        help="also write 256-bin attribute histograms per mesh",
    )
    add_common(p)
    p.set_defaults(func=cmd_extract_geometry)

    p = sub.add_parser("train", help="train the regression head")
    p.add_argument("--gf", required=True, help="geometry feature records")
    p.add_argument("--clips", required=True, help="clip feature file")
    p.add_argument("--mos", required=True, help="subjective score CSV")
    p.add_argument("--manifest", help="model_id,video_id mapping CSV")
    p.add_argument("--out", required=True, help="trained head artifact (JSON)")
    p.add_argument("--loss-curve", help="loss curve CSV (default <out>_loss.csv)")
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--hidden-dim", dest="hidden_dim", type=int)
    p.add_argument("--clips-per-video", dest="clips_per_video", type=int)
    add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="run motion-group cross-validation")
    p.add_argument("--gf", required=True)
    p.add_argument("--clips", required=True)
    p.add_argument("--mos", required=True)
    p.add_argument("--manifest", help="model_id,video_id mapping CSV")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--hidden-dim", dest="hidden_dim", type=int)
    p.add_argument("--clips-per-video", dest="clips_per_video", type=int)
    p.add_argument("--logistic-remap", dest="logistic_remap", action="store_true")
    p.add_argument("--generalize-folds", dest="generalize_folds", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="score videos with a trained head")
    p.add_argument("--head", required=True, help="trained head artifact")
    p.add_argument("--gf", required=True)
    p.add_argument("--clips", required=True)
    p.add_argument("--manifest", help="model_id,video_id mapping CSV")
    p.add_argument("--out", required=True, help="output CSV of per-video scores")
    p.add_argument("--clips-per-video", dest="clips_per_video", type=int)
    add_common(p)
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DDHQAError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
