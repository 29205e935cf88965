"""Command-line interface: transform files, run invariance/robustness sweeps,
the toy end-to-end experiment, and the timing benchmark.

Sweep commands read a JSON config file (all fields optional, defaults are
echoed into the report) and write a JSON or CSV report.  Exit codes: 0
success, 1 a checked property failed, 2 input/config error, 3 degenerate
geometry, 4 training divergence.  The ``CLOUDCAT_SEED`` environment
variable supplies the default seed when ``--seed`` is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .contour import cat_transform
from .errors import (
    AllPointsCoincident,
    CloudcatError,
    ConfigError,
    DegenerateFrame,
    ParseError,
    TrainingDiverged,
)
from .frame_align import (
    TrainConfig,
    accuracy,
    fa_transform,
    load_checkpoint,
    predict_labels,
    save_checkpoint,
    train_toy,
)
from .geometry import apply_rigid
from .ingest import parse_off, parse_xyz, sample_surface, write_xyz
from .pca import pca_normalize
from .perturb import (
    PerturbSpec,
    add_noise,
    apply_perturbation,
    crop_partial_indices,
    random_rigid,
    subsample_indices,
)
from .report import BenchReport
from .shapes import SHAPE_KINDS, make_dataset, sample_shape_cloud

SEED_ENV_VAR = "CLOUDCAT_SEED"

DEFAULT_TOLERANCE = 1e-5

INVARIANCE_DEFAULTS = {
    "seed": None,
    "cloud_sizes": [16, 256, 1024],
    "clouds_per_size": 4,
    "motions": 20,
    "translation_scale": 10.0,
    "methods": ["cat", "pca"],
    "tie_tol": 1e-9,
    "identity_motions": False,
    "tolerance": None,
    "checkpoint": None,
}

ROBUSTNESS_DEFAULTS = {
    "seed": None,
    "n_points": 1024,
    "trials": 30,
    "noise_stds": [0.0, 0.01, 0.02, 0.05, 0.1],
    "subsample_counts": [1024, 768, 512, 256],
    "partial_ratios": [1.0, 0.9, 0.8, 0.7],
    # explicit perturbations, each {"kind", "level", "seed"}, applied per trial
    "perturbations": [],
    "checkpoint": None,
    "test_per_class": 10,
}

TOY_DEFAULTS = {
    "seed": None,
    "train_per_class": 20,
    "test_per_class": 10,
    "n_points": 256,
    "epochs": 150,
    "learning_rate": 0.1,
    "batch_size": 10,
    "h1": 16,
    "h2": 32,
    "c": 64,
    "translation_scale": 0.25,
    "ablations": ["fa"],
    "checkpoint_out": None,
}

BENCH_TIME_DEFAULTS = {
    "seed": None,
    "sizes": [2**k for k in range(10, 21)],
    "repeats": 5,
    "scaling_pair": [2**16, 2**20],
    "scaling_limit": 3.0,
}


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    return 0


def _load_config(path, defaults: dict) -> dict:
    cfg = dict(defaults)
    if path is None:
        return cfg
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _CliFailure(2, f"cannot read config {path}: {exc}") from exc
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(user, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = sorted(set(user) - set(defaults))
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {unknown}")
    cfg.update(user)
    return cfg


def _emit_report(report: BenchReport, args):
    text = report.render(args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _child_seeds(rng: np.random.Generator, n: int):
    return [int(s) for s in rng.integers(0, 2**63, size=n)]


def _read_cloud(path: str, sample: int | None, seed: int) -> np.ndarray:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _CliFailure(2, f"cannot read {path}: {exc}") from exc
    try:
        if path.lower().endswith(".off"):
            mesh = parse_off(data)
            if sample is not None:
                return sample_surface(mesh, sample, seed)
            return mesh.vertices
        return parse_xyz(data)
    except ParseError as exc:
        raise _CliFailure(2, f"{path}: {exc}") from exc


def _transform_cloud(cloud, method, tie_tol, fa_params):
    if method == "cat":
        result = cat_transform(cloud, tie_tol=tie_tol)
        if result.frame.tie_report:
            print(
                f"warning: tied extremal distances {list(result.frame.tie_report)}; "
                "output is not guaranteed pose-invariant",
                file=sys.stderr,
            )
        if result.degenerate:
            print(f"warning: {result.reason}", file=sys.stderr)
        return result.transformed
    if method == "pca":
        transformed, frame = pca_normalize(cloud)
        if frame.near_degenerate:
            print("warning: near-degenerate eigenvalue spectrum", file=sys.stderr)
        return transformed
    if method == "cat+fa":
        if fa_params is None:
            raise ConfigError("method cat+fa needs --checkpoint")
        result = cat_transform(cloud, tie_tol=tie_tol)
        if result.frame.tie_report:
            print(
                f"warning: tied extremal distances {list(result.frame.tie_report)}",
                file=sys.stderr,
            )
        return fa_transform(result.transformed, fa_params)
    raise ConfigError(f"unknown method {method!r}")


def cmd_transform(args) -> int:
    seed = _resolve_seed(args)
    fa_params = None
    if args.checkpoint:
        fa_params, _ = load_checkpoint(args.checkpoint)
        if fa_params is None:
            raise ConfigError(f"{args.checkpoint} holds no alignment parameters")
    cloud = _read_cloud(args.input, args.sample, seed)
    transformed = _transform_cloud(cloud, args.method, args.tie_tol, fa_params)
    text = write_xyz(transformed, digits=args.digits)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _invariance_transformers(cfg):
    tie_tol = cfg["tie_tol"]
    fa_params = None
    if "cat+fa" in cfg["methods"]:
        if not cfg["checkpoint"]:
            raise ConfigError("method cat+fa needs a checkpoint in the config")
        fa_params, _ = load_checkpoint(cfg["checkpoint"])

    def run(method, cloud):
        if method == "cat":
            return cat_transform(cloud, tie_tol=tie_tol).transformed
        if method == "pca":
            return pca_normalize(cloud)[0]
        if method == "cat+fa":
            return fa_transform(cat_transform(cloud, tie_tol=tie_tol).transformed, fa_params)
        raise ConfigError(f"unknown method {method!r}")

    return run


def cmd_verify_invariance(args) -> int:
    cfg = _load_config(args.config, INVARIANCE_DEFAULTS)
    cfg["seed"] = cfg["seed"] if cfg["seed"] is not None else _resolve_seed(args)
    tolerance = args.tolerance
    if tolerance is None:
        tolerance = cfg["tolerance"]
    if tolerance is None:
        tolerance = DEFAULT_TOLERANCE
    cfg["tolerance"] = tolerance

    rng = np.random.default_rng(cfg["seed"])
    run = _invariance_transformers(cfg)
    report = BenchReport(command="verify-invariance", config=cfg, version=__version__)

    gate_ok = True
    for size in cfg["cloud_sizes"]:
        for _ in range(cfg["clouds_per_size"]):
            cloud_seed = _child_seeds(rng, 1)[0]
            cloud = np.random.default_rng(cloud_seed).standard_normal((size, 3))
            ties = cat_transform(cloud, tie_tol=cfg["tie_tol"]).frame.tie_report
            report.add("cat", "ties", size, "tie_count", len(ties), cloud_seed)
            base = {m: run(m, cloud) for m in cfg["methods"]}
            for motion_seed in _child_seeds(rng, cfg["motions"]):
                if cfg["identity_motions"]:
                    moved = cloud.copy()
                else:
                    moved = apply_rigid(
                        cloud, random_rigid(motion_seed, cfg["translation_scale"])
                    )
                for method in cfg["methods"]:
                    deviation = float(np.max(np.abs(run(method, moved) - base[method])))
                    report.add(
                        method, "rigid", size, "max_deviation", deviation, motion_seed
                    )
                    if method == "cat" and not ties and deviation > tolerance:
                        gate_ok = False

    worst = report.values(method="cat", metric="max_deviation")
    print(
        f"cat max deviation {worst.max():.3e} over {worst.size} trials "
        f"(tolerance {tolerance:.1e})",
        file=sys.stderr,
    )
    _emit_report(report, args)
    return 0 if gate_ok else 1


def _perturbed_deviation(cloud, base, spec: PerturbSpec) -> float:
    """Deviation of the canonicalized perturbed cloud from the canonicalized
    original, restricted to retained points for subsetting perturbations."""
    if spec.kind == "subsample":
        idx = subsample_indices(len(cloud), int(spec.level), spec.seed)
    elif spec.kind == "partial":
        idx = crop_partial_indices(cloud, spec.level, spec.seed)
    else:
        perturbed = apply_perturbation(cloud, spec)
        return float(np.max(np.abs(cat_transform(perturbed).transformed - base)))
    return float(np.max(np.abs(cat_transform(cloud[idx]).transformed - base[idx])))


def cmd_robustness(args) -> int:
    cfg = _load_config(args.config, ROBUSTNESS_DEFAULTS)
    cfg["seed"] = cfg["seed"] if cfg["seed"] is not None else _resolve_seed(args)

    rng = np.random.default_rng(cfg["seed"])
    report = BenchReport(command="robustness", config=cfg, version=__version__)
    extra = [
        PerturbSpec(kind=s["kind"], level=s["level"], seed=int(s["seed"]))
        for s in cfg["perturbations"]
    ]

    for trial in range(cfg["trials"]):
        kind = SHAPE_KINDS[trial % len(SHAPE_KINDS)]
        cloud_seed = _child_seeds(rng, 1)[0]
        cloud = sample_shape_cloud(kind, cfg["n_points"], cloud_seed)
        base = cat_transform(cloud).transformed
        n = len(cloud)

        for std in cfg["noise_stds"]:
            seed = _child_seeds(rng, 1)[0]
            spec = PerturbSpec("noise", std, seed)
            report.add("cat", "noise", std, "max_deviation",
                       _perturbed_deviation(cloud, base, spec), seed)

        for count in cfg["subsample_counts"]:
            if count > n:
                continue
            seed = _child_seeds(rng, 1)[0]
            spec = PerturbSpec("subsample", count, seed)
            report.add("cat", "subsample", count, "max_deviation",
                       _perturbed_deviation(cloud, base, spec), seed)

        for ratio in cfg["partial_ratios"]:
            seed = _child_seeds(rng, 1)[0]
            spec = PerturbSpec("partial", ratio, seed)
            report.add("cat", "partial", ratio, "max_deviation",
                       _perturbed_deviation(cloud, base, spec), seed)

        for spec in extra:
            report.add("cat", spec.kind, spec.level, "max_deviation",
                       _perturbed_deviation(cloud, base, spec), spec.seed)

    if cfg["checkpoint"]:
        fa_params, clf = load_checkpoint(cfg["checkpoint"])
        if clf is None:
            raise ConfigError(f"{cfg['checkpoint']} holds no classifier parameters")
        eval_seed = _child_seeds(rng, 1)[0]
        dataset = make_dataset(cfg["test_per_class"], cfg["n_points"], eval_seed)

        def record_accuracy(kind, level, perturb_one):
            seed = _child_seeds(rng, 1)[0]
            perturbed = [
                perturb_one(c, s)
                for c, s in zip(dataset.clouds, _child_seeds(rng, len(dataset.clouds)))
            ]
            preds = predict_labels(perturbed, clf, fa_params, use_cat=True)
            report.add(
                "cat+fa", kind, level, "accuracy", accuracy(preds, dataset.labels), seed
            )

        for std in cfg["noise_stds"]:
            record_accuracy("noise", std, lambda c, s, std=std: add_noise(c, std, s))
        for count in cfg["subsample_counts"]:
            if count > cfg["n_points"]:
                continue
            record_accuracy(
                "subsample",
                count,
                lambda c, s, count=count: c[subsample_indices(len(c), count, s)],
            )
        for ratio in cfg["partial_ratios"]:
            record_accuracy(
                "partial",
                ratio,
                lambda c, s, ratio=ratio: c[crop_partial_indices(c, ratio, s)],
            )

    _emit_report(report, args)
    return 0


def _toy_eval(test_ds, motions, clf, fa, use_cat):
    pred_nr = predict_labels(test_ds.clouds, clf, fa, use_cat=use_cat)
    rotated = [apply_rigid(c, m) for c, m in zip(test_ds.clouds, motions)]
    pred_ar = predict_labels(rotated, clf, fa, use_cat=use_cat)
    return pred_nr, pred_ar


def cmd_toy_e2e(args) -> int:
    cfg = _load_config(args.config, TOY_DEFAULTS)
    cfg["seed"] = cfg["seed"] if cfg["seed"] is not None else _resolve_seed(args)

    rng = np.random.default_rng(cfg["seed"])
    train_seed, test_seed, train_cfg_seed = _child_seeds(rng, 3)
    train_ds = make_dataset(cfg["train_per_class"], cfg["n_points"], train_seed)
    test_ds = make_dataset(cfg["test_per_class"], cfg["n_points"], test_seed)
    motions = [
        random_rigid(s, cfg["translation_scale"])
        for s in _child_seeds(rng, len(test_ds.clouds))
    ]

    train_config = TrainConfig(
        learning_rate=cfg["learning_rate"],
        epochs=cfg["epochs"],
        batch_size=cfg["batch_size"],
        seed=train_cfg_seed,
        h1=cfg["h1"],
        h2=cfg["h2"],
        c=cfg["c"],
    )

    report = BenchReport(command="toy-e2e", config=cfg, version=__version__)

    pipelines = {"cat+fa": (True, True)}
    for name in cfg["ablations"]:
        if name == "fa":
            pipelines["fa"] = (False, True)
        elif name == "cat":
            pipelines["cat"] = (True, False)
        elif name == "none":
            pipelines["none"] = (False, False)
        else:
            raise ConfigError(f"unknown ablation {name!r}")

    identical_main = False
    for name, (use_cat, use_fa) in pipelines.items():
        fa, clf, history = train_toy(train_ds, train_config, use_cat=use_cat, use_fa=use_fa)
        pred_nr, pred_ar = _toy_eval(test_ds, motions, clf, fa, use_cat)
        acc_nr = accuracy(pred_nr, test_ds.labels)
        acc_ar = accuracy(pred_ar, test_ds.labels)
        report.add(name, "train", cfg["epochs"], "accuracy", history[-1]["accuracy"], train_cfg_seed)
        report.add(name, "nr", 0.0, "accuracy", acc_nr, test_seed)
        report.add(name, "ar", 0.0, "accuracy", acc_ar, test_seed)
        report.add(name, "ar", 0.0, "delta_acc", acc_ar - acc_nr, test_seed)
        identical = bool(np.array_equal(pred_nr, pred_ar))
        report.add(name, "ar", 0.0, "predictions_identical", float(identical), test_seed)
        print(
            f"{name}: train {history[-1]['accuracy']:.3f}, NR {acc_nr:.3f}, "
            f"AR {acc_ar:.3f}, delta {acc_ar - acc_nr:+.3f}",
            file=sys.stderr,
        )
        if name == "cat+fa":
            identical_main = identical
            if cfg["checkpoint_out"]:
                save_checkpoint(cfg["checkpoint_out"], fa=fa, classifier=clf)

    _emit_report(report, args)
    return 0 if identical_main else 1


def cmd_bench_time(args) -> int:
    cfg = _load_config(args.config, BENCH_TIME_DEFAULTS)
    cfg["seed"] = cfg["seed"] if cfg["seed"] is not None else _resolve_seed(args)

    rng = np.random.default_rng(cfg["seed"])
    report = BenchReport(command="bench-time", config=cfg, version=__version__)

    ns_per_point = {}
    for size in cfg["sizes"]:
        seed = _child_seeds(rng, 1)[0]
        cloud = np.random.default_rng(seed).standard_normal((size, 3))
        cat_transform(cloud)  # warm up caches and allocator
        samples = []
        for _ in range(cfg["repeats"]):
            start = time.perf_counter_ns()
            cat_transform(cloud)
            samples.append(time.perf_counter_ns() - start)
        value = float(np.median(samples)) / size
        ns_per_point[size] = value
        report.add("cat", "size", size, "ns_per_point", value, seed)

    code = 0
    small, large = cfg["scaling_pair"]
    if small in ns_per_point and large in ns_per_point:
        ratio = ns_per_point[large] / ns_per_point[small]
        report.add("cat", "size", large, "scaling_ratio", ratio, cfg["seed"])
        print(
            f"ns/point: {ns_per_point[small]:.2f} at N={small}, "
            f"{ns_per_point[large]:.2f} at N={large} (ratio {ratio:.2f})",
            file=sys.stderr,
        )
        if ratio > cfg["scaling_limit"]:
            code = 1
    _emit_report(report, args)
    return code


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $CLOUDCAT_SEED or 0)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tolerance", type=float, default=None, help="invariance gate tolerance")

    parser = argparse.ArgumentParser(prog="cloudcat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cloudcat {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("transform", parents=[common], help="canonicalize one cloud file")
    p.add_argument("input", help="input .off or .xyz file")
    p.add_argument("--method", choices=("cat", "pca", "cat+fa"), default="cat")
    p.add_argument("--checkpoint", default=None, help="parameters for cat+fa")
    p.add_argument("--sample", type=int, default=None, help="sample N surface points from a mesh input")
    p.add_argument("--tie-tol", type=float, default=1e-9, dest="tie_tol")
    p.add_argument("--digits", type=int, default=12, help="significant digits in the output")
    p.set_defaults(func=cmd_transform)

    for name, func, help_text in (
        ("verify-invariance", cmd_verify_invariance, "check rigid-motion invariance per method"),
        ("robustness", cmd_robustness, "sweep noise/subsampling/partial visibility"),
        ("toy-e2e", cmd_toy_e2e, "train and evaluate the toy classifier end to end"),
        ("bench-time", cmd_bench_time, "time the canonicalization across cloud sizes"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--config", default=None, help="JSON config file")
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DegenerateFrame, AllPointsCoincident) as exc:
        print(f"error: degenerate geometry: {exc}", file=sys.stderr)
        return 3
    except TrainingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, CloudcatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
