"""Command-line front end: synth, descriptors, cluster, classify, plot."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import shutil
import sys
import time
import typing
from dataclasses import asdict, fields
from pathlib import Path

from .eval import protocol_A, protocol_BC
from .pipeline import RunConfig, compute_descriptors, read_plane_landscapes, read_store, write_store

log = logging.getLogger("zztopo")

EXIT_CONFIG = 2
EXIT_EMPTY = 3
EXIT_FILTER = 4
EXIT_EXISTS = 5


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _field_types() -> dict:
    hints = typing.get_type_hints(RunConfig)
    out = {}
    for f in fields(RunConfig):
        args = typing.get_args(hints[f.name])
        base = [a for a in args if a is not type(None)] if args else [hints[f.name]]
        out[f.name] = (base[0], type(None) in args)
    return out


def _coerce(name: str, value):
    typ, nullable = _field_types()[name]
    if value is None:
        if nullable:
            return None
        raise ValueError(f"{name} may not be null")
    if typ is bool:
        if not isinstance(value, bool):
            raise ValueError(f"{name} must be true or false")
        return value
    if typ is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if typ is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if typ is str and isinstance(value, str):
        return value
    raise ValueError(f"{name} must be of type {typ.__name__}")


def load_config(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_CONFIG, f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise CliError(EXIT_CONFIG, f"config {path} must be a JSON object")
    try:
        unknown = sorted(set(raw) - set(RunConfig.field_names()))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return {k: _coerce(k, v) for k, v in raw.items()}
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"bad config {path}: {exc}") from None


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zztopo", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    types = _field_types()
    defaults = RunConfig()
    for cmd, help_ in [
        ("synth", "write a synthetic dataset"),
        ("descriptors", "compute landscape descriptors for a dataset"),
        ("cluster", "protocol A: cluster repeats per mouse and video type"),
        ("classify", "protocols B/C: logistic-regression classification"),
        ("plot", "landscape figures for stored descriptors"),
    ]:
        sp = sub.add_parser(cmd, help=help_)
        sp.add_argument("--config", help="JSON file with RunConfig fields")
        for name, (typ, nullable) in types.items():
            flag = _flag(name)
            if typ is bool:
                sp.add_argument(flag, dest=name, action="store_true", default=argparse.SUPPRESS)
                continue
            sp.add_argument(flag, dest=name, type=typ, default=argparse.SUPPRESS,
                            help=f"default: {getattr(defaults, name)}")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for name in RunConfig.field_names():
        if hasattr(args, name):
            values[name] = getattr(args, name)
    try:
        cfg = RunConfig.from_dict(values)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    if cfg.control not in ("none", "frame_shuffle", "grid_scramble"):
        raise CliError(EXIT_CONFIG, f"unknown control {cfg.control!r}")
    if cfg.target not in ("video_type", "mouse_id"):
        raise CliError(EXIT_CONFIG, f"unknown target {cfg.target!r}")
    return cfg


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_synth(cfg: RunConfig) -> int:
    from .synth import default_classes, gen_dataset, write_dataset

    root = Path(cfg.data)
    if root.exists() and any(root.iterdir()):
        if not cfg.force:
            raise CliError(EXIT_EXISTS, f"{root} exists and is not empty (use --force)")
        shutil.rmtree(root)
    classes = default_classes(n_grid=cfg.n_grid, T=cfg.synth_T, Z=cfg.synth_Z, sigma=cfg.sigma)
    trials = gen_dataset(classes, repeats=cfg.repeats, seed=cfg.seed)
    write_dataset(trials, root)
    out_cfg = RunConfig(**dict(asdict(cfg), Z=cfg.synth_Z, force=False))
    out_cfg.save(root)
    print(f"wrote {len(trials)} trials x {cfg.synth_Z} planes to {root} (seed {cfg.seed})")
    return 0


def cmd_descriptors(cfg: RunConfig) -> int:
    from .ingest import scan_dataset

    if not scan_dataset(cfg.data):
        raise CliError(EXIT_EMPTY, f"no trials found under {cfg.data}")
    out = Path(cfg.out)
    t0 = time.perf_counter()
    descs, planes, errors, timing = compute_descriptors(cfg)
    timing["total_seconds"] = time.perf_counter() - t0
    cfg.save(out)
    write_store(out, descs, planes)
    report = dict(descriptors=len(descs), errors=errors, timing=timing,
                  trials=[d.trial_id for d in descs])
    _write_json(out / "report.json", report)
    print(f"{len(descs)} descriptors, {len(errors)} trials omitted, "
          f"{timing['plane_seconds_mean'] * 1000:.0f} ms per plane")
    if not descs:
        raise CliError(EXIT_EMPTY, "no complete trials")
    return 0


def _load_selection(cfg: RunConfig):
    descs = read_store(cfg.out)
    if not descs:
        raise CliError(EXIT_EMPTY, f"no descriptor store under {cfg.out}")
    sel = [d for d in descs if (cfg.mouse is None or d.mouse_id == cfg.mouse)
           and (cfg.video_type is None or d.video_type == cfg.video_type)]
    if not sel:
        raise CliError(EXIT_FILTER, f"no descriptors match mouse={cfg.mouse} video_type={cfg.video_type}")
    return sel


def cmd_cluster(cfg: RunConfig) -> int:
    from .plots import plot_bars

    sel = _load_selection(cfg)
    pairs = sorted({(d.mouse_id, d.video_type) for d in sel})
    out = Path(cfg.out) / "cluster"
    out.mkdir(parents=True, exist_ok=True)
    cfg.save(out)
    entries = []
    for mouse, vt in pairs:
        try:
            rep = protocol_A(sel, mouse, vt, runs=cfg.runs, per_class=cfg.per_class, seed=cfg.seed, d=cfg.pca_dim)
            entries.append(dict(mouse_id=mouse, video_type=vt, report=rep.to_dict()))
        except ValueError as exc:
            log.warning("%s/%s: %s", mouse, vt, exc)
            entries.append(dict(mouse_id=mouse, video_type=vt, error=str(exc)))
    _write_json(out / "report.json", entries)
    ok = [e for e in entries if "report" in e]
    keys = ("ari_mean", "ari_std", "ami_mean", "ami_std", "acc_mean", "acc_std")
    with open(out / "metrics.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mouse_id", "video_type", *keys])
        for e in ok:
            w.writerow([e["mouse_id"], e["video_type"]] + [f"{e['report'][k]:.6f}" for k in keys])
    if not ok:
        raise CliError(EXIT_FILTER, "no selection had enough repeats to cluster")
    plot_bars([f"{e['mouse_id']}/{e['video_type']}" for e in ok], [e["report"]["ari_mean"] for e in ok],
              [e["report"]["ari_std"] for e in ok], out / "ari.svg")
    for e in ok:
        r = e["report"]
        print(f"{e['mouse_id']}/{e['video_type']}: ARI {r['ari_mean']:.3f} +- {r['ari_std']:.3f}")
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    from .plots import plot_confusion

    sel = _load_selection(cfg)
    out = Path(cfg.out) / "classify"
    out.mkdir(parents=True, exist_ok=True)
    cfg.save(out)
    try:
        rep = protocol_BC(sel, cfg.target, splits=cfg.splits, test_frac=cfg.test_frac, seed=cfg.seed, l2=cfg.l2)
    except ValueError as exc:
        raise CliError(EXIT_FILTER, str(exc)) from None
    _write_json(out / f"report_{cfg.target}.json", rep.to_dict())
    with open(out / f"metrics_{cfg.target}.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["class", "f1", "support"])
        for c, f, s in zip(rep.classes, rep.f1, rep.f1_support):
            w.writerow([c, f"{f:.6f}", s])
    plot_confusion(rep.confusion, rep.classes, out / f"confusion_{cfg.target}.svg")
    print(f"{cfg.target}: accuracy {rep.cv_accuracy_mean:.3f} +- {rep.cv_accuracy_std:.3f}")
    return 0


def cmd_plot(cfg: RunConfig) -> int:
    from .plots import plot_landscapes

    sel = _load_selection(cfg)
    out = Path(cfg.out) / "plots"
    out.mkdir(parents=True, exist_ok=True)
    cfg.save(out)
    for d in sel:
        per_plane = read_plane_landscapes(cfg.out, d.mouse_id, d.video_id)
        L = 2 * int(d.meta.get("n_frames", 2)) - 1
        plot_landscapes(per_plane, L, out / f"{d.mouse_id}_{d.video_id}.svg", title=d.trial_id)
    print(f"wrote {len(sel)} figures to {out}")
    return 0


COMMANDS = dict(synth=cmd_synth, descriptors=cmd_descriptors, cluster=cmd_cluster,
                classify=cmd_classify, plot=cmd_plot)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
