"""Command-line entry point: `qnnbench run | report | selftest`.

Experiments are configured by a YAML file; every field also has a flag
override, and flags win over the file. Missing fields fall back to the
documented defaults (learning rate 0.01, 10000 epochs, cutoff 30,
20 train / 200 test points, 100 seeds). Exit codes: 0 success,
1 usage/config error, 2 runtime failure.
"""

import argparse
import copy
import os
import sys

import yaml

from .fock import CutoffConfig
from .harness import (
    ExperimentSpec,
    aggregate,
    depth_sweep_models,
    export,
    parameter_match_models,
    read_runs_csv,
    write_aggregates_csv,
    AGGREGATE_COLUMNS,
)
from .mlp import ACTIVATIONS
from .selftest import check_names, run_checks
from .training import AdamConfig

ENV_OUTPUT_DIR = "QNNBENCH_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class ConfigError(Exception):
    pass


_OPTIMIZER_DEFAULTS = {
    "learning_rate": 0.01,
    "beta1": 0.9,
    "beta2": 0.999,
    "epsilon": 1e-8,
    "epochs": 10000,
}

_DEFAULTS = {
    "strategy": "layers",
    "target": "sine",
    "depths": None,  # None: 1..5 for layers, 2..5 for parameters
    "activations": list(ACTIVATIONS),
    "include_qnn": True,
    "seeds": 100,
    "seed_base": 0,
    "cutoff": 30,
    "train_points": 20,
    "test_points": 200,
    "optimizer": dict(_OPTIMIZER_DEFAULTS),
    "output_dir": None,  # None: $QNNBENCH_OUTPUT_DIR or ./results
    "workers": None,  # None: one per core
}


def load_config(path) -> dict:
    """Parse and validate a YAML config; unknown keys are rejected."""
    cfg = copy.deepcopy(_DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if raw is None:
        return cfg
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    unknown = sorted(set(raw) - set(_DEFAULTS))
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(unknown)}")
    opt = raw.get("optimizer", {})
    if opt is not None and not isinstance(opt, dict):
        raise ConfigError(f"{path}: optimizer must be a mapping")
    unknown = sorted(set(opt or {}) - set(_OPTIMIZER_DEFAULTS))
    if unknown:
        raise ConfigError(f"{path}: unknown optimizer keys: {', '.join(unknown)}")
    for key, value in raw.items():
        if key == "optimizer":
            cfg["optimizer"].update(value or {})
        else:
            cfg[key] = value
    return cfg


def apply_overrides(cfg: dict, args: argparse.Namespace) -> dict:
    direct = (
        "strategy",
        "target",
        "include_qnn",
        "seeds",
        "seed_base",
        "cutoff",
        "train_points",
        "test_points",
        "output_dir",
        "workers",
    )
    for name in direct:
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    if getattr(args, "depths", None) is not None:
        cfg["depths"] = args.depths
    if getattr(args, "activations", None) is not None:
        cfg["activations"] = args.activations
    for name in _OPTIMIZER_DEFAULTS:
        value = getattr(args, name, None)
        if value is not None:
            cfg["optimizer"][name] = value
    return cfg


def build_spec(cfg: dict):
    """Turn a validated config mapping into (spec, output_dir, workers)."""
    strategy = cfg["strategy"]
    depths = cfg["depths"]
    if depths is None:
        depths = (1, 2, 3, 4, 5) if strategy == "layers" else (2, 3, 4, 5)
    try:
        depths = tuple(int(d) for d in depths)
        activations = tuple(cfg["activations"])
        if strategy == "layers":
            models = depth_sweep_models(depths, activations, cfg["include_qnn"])
        elif strategy == "parameters":
            models = parameter_match_models(depths, activations, cfg["include_qnn"])
        else:
            raise ValueError(f"strategy must be 'layers' or 'parameters', got {strategy!r}")
        spec = ExperimentSpec(
            strategy=strategy,
            target_kind=cfg["target"],
            models=models,
            seeds=int(cfg["seeds"]),
            seed_base=int(cfg["seed_base"]),
            optimizer=AdamConfig(**cfg["optimizer"]),
            cutoff=CutoffConfig(int(cfg["cutoff"])),
            train_points=int(cfg["train_points"]),
            test_points=int(cfg["test_points"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    out_dir = cfg["output_dir"] or os.environ.get(ENV_OUTPUT_DIR) or "results"
    workers = cfg["workers"]
    if workers is not None:
        workers = int(workers)
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
    return spec, out_dir, workers


def _print_summary(aggregates) -> None:
    header = (
        f"{'model_id':<22} {'target':<9} {'layers':>6} {'params':>6} "
        f"{'activation':<10} {'seeds':>5} {'mean_mse':>12} {'min_mse':>12}"
    )
    print(header)
    print("-" * len(header))
    for a in aggregates:
        print(
            f"{a.model_id:<22} {a.target_kind:<9} {a.layer_count:>6} "
            f"{a.param_count:>6} {a.activation:<10} {a.n_seeds:>5} "
            f"{a.mean_mse:>12.4e} {a.min_mse:>12.4e}"
        )


def cmd_run(args) -> int:
    from .harness import run_experiment

    cfg = apply_overrides(load_config(args.config), args)
    spec, out_dir, workers = build_spec(cfg)
    results = run_experiment(spec, workers)
    if all(r.diverged for r in results):
        print("error: every run failed or diverged", file=sys.stderr)
        return EXIT_RUNTIME
    aggregates = aggregate(results)
    paths = export(results, aggregates, out_dir)
    _print_summary(aggregates)
    print(f"\nwrote {len(paths)} files under {out_dir}")
    return EXIT_OK


def cmd_report(args) -> int:
    runs_path = os.path.join(args.results_dir, "runs.csv")
    if not os.path.isfile(runs_path):
        print(f"error: no runs.csv in {args.results_dir}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        results = read_runs_csv(runs_path)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    agg_path = os.path.join(args.results_dir, "aggregates.csv")
    if not results:
        print("warning: runs.csv has no rows; writing header-only aggregates")
        write_aggregates_csv([], agg_path)
        return EXIT_OK
    aggregates = aggregate(results)
    write_aggregates_csv(aggregates, agg_path)
    _print_summary(aggregates)
    if args.charts:
        for path in _write_charts(aggregates, args.results_dir):
            print(f"chart: {path}")
    return EXIT_OK


def _write_charts(aggregates, out_dir) -> list:
    """MSE-vs-depth and MSE-vs-parameter-count SVGs, log-scale y."""
    try:
        import matplotlib

        matplotlib.use("svg")
        import matplotlib.pyplot as plt
    except ImportError as exc:  # charts are optional
        raise RuntimeError(
            "matplotlib is required for --charts (pip install qnnbench[charts])"
        ) from exc

    written = []
    for strategy, x_attr, x_label in (
        ("layers", "layer_count", "layers"),
        ("parameters", "param_count", "trainable parameters"),
    ):
        targets = sorted({a.target_kind for a in aggregates if a.strategy == strategy})
        for kind in targets:
            rows = [
                a
                for a in aggregates
                if a.strategy == strategy and a.target_kind == kind
            ]
            series: dict = {}
            for a in rows:
                label = "quantum" if a.activation == "quantum" else a.activation
                series.setdefault(label, []).append(
                    (getattr(a, x_attr), a.mean_mse, a.std_mse)
                )
            fig, ax = plt.subplots(figsize=(6, 4))
            for label, pts in sorted(series.items()):
                pts.sort()
                xs = [p[0] for p in pts]
                ys = [p[1] for p in pts]
                es = [p[2] for p in pts]
                marker = "s" if label == "quantum" else "o"
                ax.errorbar(xs, ys, yerr=es, marker=marker, capsize=3, label=label)
            ax.set_yscale("log")
            ax.set_xlabel(x_label)
            ax.set_ylabel("test MSE")
            ax.set_title(f"{kind}, strategy: {strategy}")
            ax.legend()
            fig.tight_layout()
            path = os.path.join(out_dir, f"chart_{strategy}_{kind}.svg")
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written


def cmd_selftest(args) -> int:
    if args.list_checks:
        for name in check_names():
            print(name)
        return EXIT_OK
    checks = run_checks(args.cutoff)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_RUNTIME


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints: {text!r}") from exc


def _parse_str_list(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qnnbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="train a sweep and export CSV results")
    run_p.add_argument("--config", help="YAML experiment config")
    run_p.add_argument("--strategy", choices=("layers", "parameters"))
    run_p.add_argument("--target", choices=("sine", "heaviside"))
    run_p.add_argument("--depths", type=_parse_int_list, help="e.g. 1,2,3,4,5")
    run_p.add_argument("--activations", type=_parse_str_list, help="e.g. tanh,relu")
    run_p.add_argument("--include-qnn", dest="include_qnn", type=_parse_bool)
    run_p.add_argument("--seeds", type=int)
    run_p.add_argument("--seed-base", dest="seed_base", type=int)
    run_p.add_argument("--cutoff", type=int)
    run_p.add_argument("--train-points", dest="train_points", type=int)
    run_p.add_argument("--test-points", dest="test_points", type=int)
    run_p.add_argument("--learning-rate", dest="learning_rate", type=float)
    run_p.add_argument("--beta1", type=float)
    run_p.add_argument("--beta2", type=float)
    run_p.add_argument("--epsilon", type=float)
    run_p.add_argument("--epochs", type=int)
    run_p.add_argument("--output-dir", dest="output_dir")
    run_p.add_argument("--workers", type=int)
    run_p.set_defaults(func=cmd_run)

    report_p = sub.add_parser("report", help="recompute aggregates from runs.csv")
    report_p.add_argument("results_dir")
    report_p.add_argument("--charts", action="store_true", help="also write SVG charts")
    report_p.set_defaults(func=cmd_report)

    st_p = sub.add_parser("selftest", help="run the analytic oracle checks")
    st_p.add_argument("--cutoff", type=int, default=30)
    st_p.add_argument("--list", dest="list_checks", action="store_true",
                      help="list check names without running")
    st_p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
