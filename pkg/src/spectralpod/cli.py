"""Command-line front end: cluster, extend, eval, bench, plotdata.

Structured results go to JSON, tabular data to CSV. Exit codes: 0 success,
1 usage/config error, 2 data error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .datasets import Dataset, load_delimited, make_circles, make_moons, train_test_split
from .extension import (
    SCALING_MODES,
    extend,
    fit_extension,
    gpod,
    load_model,
    save_model,
)
from .exceptions import (
    ConfigError,
    InputError,
    NumericalError,
    ParameterError,
    SizeError,
    SpectralPodError,
)
from .kernel_graph import KernelSpec, build_weight_graph, laplacian
from .metrics import accuracy, nmi
from .pod import normalize_rows, pod
from .risk import RiskReport, discretization_gap, spectral_identity_check
from .spectra import smallest_eigenpairs_random_walk, smallest_eigenpairs_unnormalized


@dataclass(frozen=True)
class RunConfig:
    dataset: str
    variant: str = "ncut"
    sigma: float = 0.1
    k: int = 2
    seed: int = 0
    test_fraction: float = 0.2
    repeats: int = 4
    pod_tol: float = 1e-10
    pod_max_iter: int = 100
    scaling_mode: str = "algorithm_literal"
    degenerate_threshold: float = 1e-8
    n: int = 2000
    noise: float = 0.05
    radius_ratio: float = 0.5
    data_seed: int = 0
    label_column: int | None = None
    delimiter: str = ","
    standardize: bool = True

    def __post_init__(self):
        if self.variant not in ("ratiocut", "ncut"):
            raise ParameterError(f"variant must be ratiocut or ncut, got {self.variant!r}")
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if self.k < 1:
            raise ParameterError(f"k must be positive, got {self.k}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ParameterError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.repeats < 1:
            raise ParameterError(f"repeats must be positive, got {self.repeats}")
        if self.scaling_mode not in SCALING_MODES:
            raise ParameterError(f"unknown scaling mode {self.scaling_mode!r}")


def _load_dataset(config: RunConfig) -> Dataset:
    if config.dataset == "circles":
        return make_circles(config.n, config.noise, config.radius_ratio, config.data_seed)
    if config.dataset == "moons":
        return make_moons(config.n, config.noise, config.data_seed)
    return load_delimited(
        config.dataset,
        label_column=config.label_column,
        delimiter=config.delimiter,
        standardize=config.standardize,
    )


def train_once(points: np.ndarray, config: RunConfig, pod_seed: int) -> dict:
    """Graph -> eigenpairs -> row-normalize -> discretize, with stage timings."""
    kernel = KernelSpec(sigma=config.sigma)
    t0 = time.perf_counter()
    graph = build_weight_graph(points, kernel)
    t1 = time.perf_counter()
    kind = "unnormalized" if config.variant == "ratiocut" else "random_walk"
    lap = laplacian(graph, kind)
    if config.variant == "ratiocut":
        embedding = smallest_eigenpairs_unnormalized(lap, config.k)
    else:
        embedding = smallest_eigenpairs_random_walk(lap, config.k)
    t2 = time.perf_counter()
    u_hat = normalize_rows(embedding.vectors)
    result = pod(u_hat, seed=pod_seed, tol=config.pod_tol, max_iter=config.pod_max_iter)
    t3 = time.perf_counter()
    fhat, eig_sum, _ = spectral_identity_check(embedding, graph)
    gap, per_cluster = discretization_gap(result.assignment, u_hat, result.rotation)
    risk = RiskReport(
        empirical_error=fhat,
        eigen_sum_scaled=eig_sum,
        discretization_gap=gap,
        per_cluster_gap=per_cluster.tolist(),
    )
    model = fit_extension(
        embedding,
        points,
        kernel,
        config.variant,
        scaling_mode=config.scaling_mode,
        degenerate_threshold=config.degenerate_threshold,
    )
    return {
        "embedding": embedding,
        "pod_result": result,
        "risk": risk,
        "model": model,
        "timings": {"graph": t1 - t0, "eigensolve": t2 - t1, "pod": t3 - t2},
    }


def _metrics_block(pred, truth) -> dict | None:
    if truth is None:
        return None
    return {"acc": accuracy(pred, truth), "nmi": nmi(pred, truth)}


def _mean_metrics(blocks: list[dict | None]) -> dict | None:
    if any(b is None for b in blocks):
        return None
    return {
        "acc": float(np.mean([b["acc"] for b in blocks])),
        "nmi": float(np.mean([b["nmi"] for b in blocks])),
    }


def _pod_block(result) -> dict:
    return {
        "iterations": result.iterations,
        "converged": result.converged,
        "objective_trace": result.objective_trace.tolist(),
        "empty_clusters": list(result.empty_clusters),
    }


def cmd_cluster(config: RunConfig, out: str, model_out: str | None = None,
                test_out: str | None = None) -> dict:
    """Cluster the training split of the dataset, one run per repeat."""
    data = _load_dataset(config)
    if config.k > data.n:
        raise SizeError(f"k={config.k} exceeds dataset size n={data.n}")
    t_start = time.perf_counter()
    repeats = []
    timing_blocks = []
    metric_blocks = []
    for r in range(config.repeats):
        split_seed = config.seed + r
        train, test = train_test_split(data, config.test_fraction, seed=split_seed)
        trained = train_once(train.points, config, pod_seed=split_seed)
        labels = trained["pod_result"].assignment.cluster_of
        metrics = _metrics_block(labels, train.labels)
        metric_blocks.append(metrics)
        timing_blocks.append(trained["timings"])
        repeats.append(
            {
                "repeat": r,
                "split_seed": split_seed,
                "pod_seed": split_seed,
                "train_size": train.n,
                "test_size": test.n,
                "eigenvalues": trained["embedding"].eigenvalues.tolist(),
                "assignment": labels.tolist(),
                "train_points": train.points.tolist() if train.points.shape[1] == 2 else None,
                "metrics": metrics,
                "risk": trained["risk"].as_dict(),
                "pod": _pod_block(trained["pod_result"]),
            }
        )
        if r == 0:
            if model_out:
                save_model(trained["model"], model_out)
            if test_out:
                from .datasets import save_delimited

                save_delimited(test, test_out)
    result = {
        "command": "cluster",
        "config": asdict(config),
        "dataset": {"name": data.name, "n": data.n, "d": int(data.points.shape[1])},
        "repeats": repeats,
        "metrics_mean": _mean_metrics(metric_blocks),
        "timings": {"total": time.perf_counter() - t_start, "repeats": timing_blocks},
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    _write_result(result, out)
    return result


def cmd_extend(model_path: str, new_data_path: str, out: str, seed: int = 0,
               label_column: int | None = None, delimiter: str = ",",
               pod_tol: float = 1e-10, pod_max_iter: int = 100) -> dict:
    """Cluster new points with a saved model; no eigensolve happens here."""
    model = load_model(model_path)
    data = load_delimited(new_data_path, label_column=label_column, delimiter=delimiter)
    if data.points.shape[1] != model.train_points.shape[1]:
        raise InputError(
            f"new data has dimension {data.points.shape[1]}, "
            f"model expects {model.train_points.shape[1]}"
        )
    t0 = time.perf_counter()
    u_bar = extend(model, data.points)
    t1 = time.perf_counter()
    u_hat = normalize_rows(u_bar)
    result_pod = pod(u_hat, seed=seed, tol=pod_tol, max_iter=pod_max_iter)
    t2 = time.perf_counter()
    labels = result_pod.assignment.cluster_of
    gap, per_cluster = discretization_gap(result_pod.assignment, u_hat, result_pod.rotation)
    result = {
        "command": "extend",
        "config": {
            "model": model_path,
            "new_data": new_data_path,
            "seed": seed,
            "variant": model.variant,
            "scaling_mode": model.scaling_mode,
            "pod_tol": pod_tol,
            "pod_max_iter": pod_max_iter,
        },
        "dataset": {"name": data.name, "n": data.n, "d": int(data.points.shape[1])},
        "repeats": [
            {
                "repeat": 0,
                "pod_seed": seed,
                "eigenvalues": model.eigenvalues.tolist(),
                "assignment": labels.tolist(),
                "train_points": data.points.tolist() if data.points.shape[1] == 2 else None,
                "metrics": _metrics_block(labels, data.labels),
                "risk": {
                    "discretization_gap": gap,
                    "per_cluster_gap": per_cluster.tolist(),
                },
                "pod": _pod_block(result_pod),
            }
        ],
        "metrics_mean": _metrics_block(labels, data.labels),
        "timings": {
            "total": t2 - t0,
            "repeats": [{"extend": t1 - t0, "pod": t2 - t1}],
        },
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    _write_result(result, out)
    return result


def cmd_eval(pred_path: str, truth_path: str) -> dict:
    pred = _read_labels(pred_path)
    truth = _read_labels(truth_path)
    if len(pred) != len(truth):
        raise InputError(f"label files differ in length: {len(pred)} vs {len(truth)}")
    return {"acc": accuracy(pred, truth), "nmi": nmi(pred, truth)}


def cmd_bench(config: RunConfig, sizes: list[tuple[int, int]], out: str) -> list[dict]:
    """Compare full re-clustering on n+m points against train-on-n + extend-to-m."""
    rows = []
    for n, m in sizes:
        base = RunConfig(**{**asdict(config), "n": n + m})
        data = _load_dataset(base)
        all_points = data.points
        t0 = time.perf_counter()
        full = train_once(all_points, config, pod_seed=config.seed)
        t1 = time.perf_counter()
        train_points, new_points = all_points[:n], all_points[n:]
        t2 = time.perf_counter()
        trained = train_once(train_points, config, pod_seed=config.seed)
        t3 = time.perf_counter()
        ext = gpod(
            trained["model"], new_points, seed=config.seed,
            tol=config.pod_tol, max_iter=config.pod_max_iter,
        )
        t4 = time.perf_counter()
        rows.append(
            {
                "n": n,
                "m": m,
                "full_seconds": t1 - t0,
                "full_iterations": full["pod_result"].iterations,
                "train_seconds": t3 - t2,
                "extend_seconds": t4 - t3,
                "extend_iterations": ext.iterations,
            }
        )
    fieldnames = ["n", "m", "full_seconds", "full_iterations",
                  "train_seconds", "extend_seconds", "extend_iterations"]
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return rows


def cmd_plotdata(result_path: str, out_prefix: str) -> list[str]:
    """Emit plot-ready CSVs from a result document.

    Writes {prefix}_trace.csv always; {prefix}_points.csv only for 2-d data
    (repeat 0's points and assignment).
    """
    with open(result_path) as fh:
        result = json.load(fh)
    written = []
    trace_path = f"{out_prefix}_trace.csv"
    with open(trace_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["repeat", "iteration", "objective"])
        for rep in result["repeats"]:
            for i, phi in enumerate(rep["pod"]["objective_trace"], start=1):
                writer.writerow([rep["repeat"], i, repr(phi)])
    written.append(trace_path)
    rep0 = result["repeats"][0]
    points = rep0.get("train_points")
    if points is not None:
        points_path = f"{out_prefix}_points.csv"
        with open(points_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "cluster"])
            for (x, y), c in zip(points, rep0["assignment"]):
                writer.writerow([repr(x), repr(y), c])
        written.append(points_path)
    else:
        print("points CSV skipped: data is not 2-d", file=sys.stderr)
    return written


def _read_labels(path) -> np.ndarray:
    with open(path) as fh:
        tokens = [line.strip() for line in fh if line.strip()]
    try:
        return np.array([int(float(t)) for t in tokens], dtype=int)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric label: {exc}") from None


def _write_result(result: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    if not text.strip():
        return []
    sizes = []
    for part in text.split(","):
        try:
            n, m = part.split(":")
            sizes.append((int(n), int(m)))
        except ValueError:
            raise ParameterError(f"bad size spec {part!r}, expected N:M") from None
    return sizes


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _add_config_flags(sub):
    sub.add_argument("--dataset", help="circles, moons, or a CSV path")
    sub.add_argument("--variant", choices=["ratiocut", "ncut"])
    sub.add_argument("--sigma", type=float)
    sub.add_argument("--k", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--test-fraction", type=float, dest="test_fraction")
    sub.add_argument("--repeats", type=int)
    sub.add_argument("--pod-tol", type=float, dest="pod_tol")
    sub.add_argument("--pod-max-iter", type=int, dest="pod_max_iter")
    sub.add_argument("--scaling-mode", choices=list(SCALING_MODES), dest="scaling_mode")
    sub.add_argument("--degenerate-threshold", type=float, dest="degenerate_threshold")
    sub.add_argument("--n", type=int)
    sub.add_argument("--noise", type=float)
    sub.add_argument("--radius-ratio", type=float, dest="radius_ratio")
    sub.add_argument("--data-seed", type=int, dest="data_seed")
    sub.add_argument("--label-column", type=int, dest="label_column")
    sub.add_argument("--delimiter")
    sub.add_argument("--standardize", action=argparse.BooleanOptionalAction)
    sub.add_argument("--config", help="JSON file with flat config keys; flags override")


def _build_config(args) -> RunConfig:
    values: dict = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        valid = set(RunConfig.__dataclass_fields__)
        unknown = set(file_cfg) - valid
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(file_cfg)
    for name in RunConfig.__dataclass_fields__:
        cli_val = getattr(args, name, None)
        if cli_val is not None:
            values[name] = cli_val
    if "dataset" not in values:
        raise ParameterError("--dataset is required (circles, moons, or a CSV path)")
    return RunConfig(**values)


def main(argv=None) -> int:
    parser = _Parser(prog="spectralpod", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_cluster = subs.add_parser("cluster", help="cluster the training split of a dataset")
    _add_config_flags(p_cluster)
    p_cluster.add_argument("--out", default="result.json")
    p_cluster.add_argument("--assignments-out", default=None)
    p_cluster.add_argument("--model-out", default=None)
    p_cluster.add_argument("--test-out", default=None)

    p_extend = subs.add_parser("extend", help="cluster new points with a saved model")
    p_extend.add_argument("model")
    p_extend.add_argument("new_data")
    p_extend.add_argument("--out", default="extend_result.json")
    p_extend.add_argument("--assignments-out", default=None)
    p_extend.add_argument("--seed", type=int, default=0)
    p_extend.add_argument("--label-column", type=int, dest="label_column", default=None)
    p_extend.add_argument("--delimiter", default=",")
    p_extend.add_argument("--pod-tol", type=float, dest="pod_tol", default=1e-10)
    p_extend.add_argument("--pod-max-iter", type=int, dest="pod_max_iter", default=100)

    p_eval = subs.add_parser("eval", help="score a predicted labeling against truth")
    p_eval.add_argument("pred")
    p_eval.add_argument("truth")

    p_bench = subs.add_parser("bench", help="time full re-clustering vs extension")
    _add_config_flags(p_bench)
    p_bench.add_argument("--sizes", default="", help="comma list of N:M pairs")
    p_bench.add_argument("--out", default="bench.csv")

    p_plot = subs.add_parser("plotdata", help="emit plot-ready CSVs from a result JSON")
    p_plot.add_argument("result")
    p_plot.add_argument("--out-prefix", default="plot")

    try:
        args = parser.parse_args(argv)
        if args.command == "cluster":
            result = cmd_cluster(_build_config(args), args.out,
                                 model_out=args.model_out, test_out=args.test_out)
            if args.assignments_out:
                _write_assignments(result, args.assignments_out)
            print(json.dumps({"out": args.out, "metrics_mean": result["metrics_mean"]}))
        elif args.command == "extend":
            result = cmd_extend(
                args.model, args.new_data, args.out, seed=args.seed,
                label_column=args.label_column, delimiter=args.delimiter,
                pod_tol=args.pod_tol, pod_max_iter=args.pod_max_iter,
            )
            if args.assignments_out:
                _write_assignments(result, args.assignments_out)
            print(json.dumps({"out": args.out, "metrics_mean": result["metrics_mean"]}))
        elif args.command == "eval":
            print(json.dumps(cmd_eval(args.pred, args.truth)))
        elif args.command == "bench":
            cmd_bench(_build_config(args), _parse_sizes(args.sizes), args.out)
            print(json.dumps({"out": args.out}))
        elif args.command == "plotdata":
            written = cmd_plotdata(args.result, args.out_prefix)
            print(json.dumps({"written": written}))
    except (ParameterError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, SizeError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except SpectralPodError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _write_assignments(result: dict, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["repeat", "row", "cluster"])
        for rep in result["repeats"]:
            for i, c in enumerate(rep["assignment"]):
                writer.writerow([rep["repeat"], i, c])


if __name__ == "__main__":
    sys.exit(main())
