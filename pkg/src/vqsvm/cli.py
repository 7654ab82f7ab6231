"""Command-line front end.

Subcommands: decompose, prepare-state, solve-linear, svm, qfpga,
generate-data. Every run is a pure function of its flags and seeds; there
are no environment variables. Options may come from a single JSON file via
--config (explicit flags win). Data outputs are CSV/JSON written
atomically; report paths also render a PNG figure next to each CSV unless
--no-plot is given.

Exit codes: 0 success, 2 input/parse error, 3 solver non-convergence,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import circuits, data, linsolve, pauli, statevector, svm, varprep

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NONCONVERGED = 3
EXIT_VERIFY = 4

# Schedule used wherever the caller does not pin one; long-lived decay.
_DEFAULTS = {
    "xi1": 0.05,
    "xi2": 0.0005,
    "max_steps": 20_000,
    "cost_tol": 1e-6,
    "seed": 0,
}
# The classification pipeline instead defaults to the slow-decay constants
# its report figures are produced with.
_SVM_DEFAULTS = {
    "gamma": 1.0,
    "xi1": 0.001,
    "xi2": 0.0005,
    "max_steps": 100_000,
    "cost_tol": 1e-12,
    "seed": 0,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_json(path, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _suffixed(path, tag: str) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{path.suffix}")


def _figure_path(path) -> Path:
    return Path(path).with_suffix(".png")


def _merge_config(args: argparse.Namespace, defaults: dict) -> dict:
    """defaults, then --config values, then explicit flags."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}", EXIT_PARSE) from exc
        if not isinstance(loaded, dict):
            raise CliError(f"config {args.config} must hold a JSON object", EXIT_PARSE)
        merged.update(loaded)
    for key, value in vars(args).items():
        if key in ("config", "func") or value is None:
            continue
        merged[key] = value
    return merged


def _schedule(opts: dict) -> varprep.GdSchedule:
    return varprep.GdSchedule(
        xi1=float(opts["xi1"]), xi2=float(opts["xi2"]),
        max_steps=int(opts["max_steps"]), cost_tolerance=float(opts["cost_tol"]))


def _read_state(path) -> statevector.StateVector:
    vec = statevector.read_vector(path)
    state, _ = statevector.normalize(vec)
    return state


_trace_csv_text = varprep.trace_csv_text


def _maybe_trace_figure(opts, trace_path, traces: dict) -> None:
    if opts.get("no_plot"):
        return
    from . import plots

    plots.save_trace_figure(traces, _figure_path(trace_path))


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------

def _cmd_decompose(args) -> int:
    opts = _merge_config(args, {"verify_circuit": False})
    matrix = statevector.read_matrix(opts["matrix"])
    expansion = pauli.expand(matrix)
    rows = [f"N {expansion.n_qubits}"]
    rows.extend(f"{p.word} {c.real:.17g} {c.imag:.17g}" for p, c in expansion.terms)
    _atomic_write(opts["out"], "\n".join(rows) + "\n")
    print(f"wrote {opts['out']} ({len(expansion)} terms, {expansion.n_qubits} qubits)")
    if not opts["verify_circuit"]:
        return EXIT_OK
    n = expansion.n_qubits
    if n > 2:
        raise CliError(f"--verify-circuit supports up to 2 qubits, matrix has {n}", EXIT_PARSE)
    worst = 0.0
    for j in range(4**n):
        p = pauli.PauliString.from_index(n, j)
        via_circuit = pauli.coefficient_via_circuit(matrix, p, backend="exact")
        worst = max(worst, abs(via_circuit - expansion.coefficient(p.word)))
    print(f"circuit check: max coefficient discrepancy {worst:.3e}")
    if worst > 1e-8:
        print("verification failed: discrepancy above 1e-8", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# prepare-state
# ---------------------------------------------------------------------------

def _cmd_prepare_state(args) -> int:
    opts = _merge_config(args, {**_DEFAULTS, "params_out": None, "no_plot": False})
    n = int(opts["n_qubits"])
    if n > 3:
        raise CliError(f"state preparation circuits exist for up to 3 qubits, not {n}", EXIT_PARSE)
    target = _read_state(opts["target"])
    if target.n_qubits != n:
        raise CliError(
            f"target file holds {target.n_qubits} qubits but --n-qubits says {n}", EXIT_PARSE)
    params, trace = varprep.train_state_prep(target, None, _schedule(opts), int(opts["seed"]))
    _atomic_write(opts["trace_out"], _trace_csv_text(trace))
    params_out = opts["params_out"] or str(Path(opts["trace_out"]).with_suffix(".params"))
    rows = [f"N {n}"] + [f"{t:.17g}" for t in params.theta]
    _atomic_write(params_out, "\n".join(rows) + "\n")
    _maybe_trace_figure(opts, opts["trace_out"], {"cost": (trace.steps, trace.costs)})
    print(f"final cost {trace.final_cost:.6e} after {trace.steps[-1]} steps "
          f"(converged={trace.converged})")
    return EXIT_OK if trace.converged else EXIT_NONCONVERGED


# ---------------------------------------------------------------------------
# solve-linear
# ---------------------------------------------------------------------------

def _cmd_solve_linear(args) -> int:
    opts = _merge_config(args, {**_DEFAULTS, "method": "both", "mode": "direct",
                                "complex_trial": False, "trace_out": None, "no_plot": False,
                                "matrix": None, "expansion": None})
    if bool(opts["matrix"]) == bool(opts["expansion"]):
        raise CliError("pass exactly one of --matrix or --expansion", EXIT_PARSE)
    if opts["expansion"]:
        matrix = pauli.reconstruct(pauli.read_expansion(opts["expansion"]))
    else:
        matrix = statevector.read_matrix(opts["matrix"])
    rhs = statevector.read_vector(opts["rhs"])
    if rhs.dim != matrix.shape[0]:
        raise CliError(
            f"rhs length {rhs.dim} does not match matrix dimension {matrix.shape[0]}", EXIT_PARSE)
    methods = ("exact", "variational") if opts["method"] == "both" else (opts["method"],)
    out = Path(opts["out"])
    code = EXIT_OK
    for method in methods:
        out_path = _suffixed(out, method) if len(methods) > 1 else out
        if method == "exact":
            try:
                solution = linsolve.solve_exact(matrix, rhs)
            except linsolve.SingularMatrixError as exc:
                print(f"exact solve failed: {exc}", file=sys.stderr)
                code = max(code, EXIT_NONCONVERGED)
                continue
            _atomic_json(out_path, solution.to_dict(rhs.n_qubits, "exact"))
            print(f"exact: residual {solution.residual:.3e} -> {out_path}")
            continue
        problem = linsolve.LinearProblem(pauli.expand(matrix), rhs)
        trial = (linsolve.TrialState.circuit_mode() if opts["mode"] == "circuit"
                 else linsolve.TrialState.direct_mode(real_only=not opts["complex_trial"]))
        solution = linsolve.solve_variational(problem, trial, _schedule(opts), int(opts["seed"]))
        _atomic_json(out_path, solution.to_dict(rhs.n_qubits, opts["mode"]))
        print(f"variational: residual {solution.residual:.3e}, cost {solution.final_cost:.3e}, "
              f"steps {solution.trace.steps[-1]} -> {out_path}")
        if opts["trace_out"]:
            _atomic_write(opts["trace_out"], _trace_csv_text(solution.trace))
            _maybe_trace_figure(opts, opts["trace_out"],
                                {"cost": (solution.trace.steps, solution.trace.costs)})
        if not solution.trace.converged:
            code = max(code, EXIT_NONCONVERGED)
    return code


# ---------------------------------------------------------------------------
# svm
# ---------------------------------------------------------------------------

def _load_dataset(opts) -> svm.Dataset:
    if opts.get("data") and opts.get("generate_config"):
        raise CliError("pass either --data or --generate-config, not both", EXIT_PARSE)
    if opts.get("data"):
        return data.read_csv(opts["data"])
    if opts.get("generate_config"):
        with open(opts["generate_config"], encoding="utf-8") as fh:
            cfg = json.load(fh)
        spec = data.ClusterSpec(
            r=float(cfg["r"]), theta_seed=int(cfg["theta_seed"]),
            point_seed=int(cfg["point_seed"]), n_red=int(cfg["n_red"]),
            n_blue=int(cfg["n_blue"]), sigma_mode=cfg.get("sigma_mode", "variance"))
        return data.generate(spec)
    raise CliError("a dataset is required: --data or --generate-config", EXIT_PARSE)


def _line_csv_text(endpoints) -> str:
    (x0, y0), (x1, y1) = endpoints
    return f"x,y\n{x0:.17g},{y0:.17g}\n{x1:.17g},{y1:.17g}\n"


def _cmd_svm(args) -> int:
    opts = _merge_config(args, {**_SVM_DEFAULTS, "method": "both", "data": None,
                                "generate_config": None, "model_out": "model.json",
                                "trace_out": "trace.csv", "line_out": "line.csv",
                                "no_plot": False})
    dataset = _load_dataset(opts)
    methods = ("exact", "variational") if opts["method"] == "both" else (opts["method"],)
    x_lo = float(dataset.points[:, 0].min())
    x_hi = float(dataset.points[:, 0].max())
    pad = 0.1 * max(x_hi - x_lo, 1.0)
    x_range = (x_lo - pad, x_hi + pad)
    models: dict[str, svm.SvmModel] = {}
    lines: dict[str, tuple] = {}
    traces: dict[str, tuple] = {}
    code = EXIT_OK
    for method in methods:
        single = len(methods) == 1
        try:
            model, solution = svm.train(dataset, float(opts["gamma"]), method,
                                        sched=_schedule(opts), seed=int(opts["seed"]))
        except linsolve.SingularMatrixError as exc:
            print(f"{method} training failed: {exc}", file=sys.stderr)
            code = max(code, EXIT_NONCONVERGED)
            continue
        models[method] = model
        model_path = opts["model_out"] if single else _suffixed(opts["model_out"], method)
        _atomic_json(model_path, model.to_dict(float(opts["gamma"])))
        acc = svm.accuracy(model, dataset)
        print(f"{method}: accuracy {acc:.4f}, omega0 {model.omega0:.6g} -> {model_path}")
        if dataset.n_features == 2 and np.linalg.norm(model.omega) > 0.0:
            endpoints = svm.hyperplane_line_2d(model, x_range)
            lines[method] = endpoints
            line_path = opts["line_out"] if single else _suffixed(opts["line_out"], method)
            _atomic_write(line_path, _line_csv_text(endpoints))
        if method == "variational":
            traces["variational"] = (solution.trace.steps, solution.trace.costs)
            _atomic_write(opts["trace_out"], _trace_csv_text(solution.trace))
    if not models:
        return code or EXIT_NONCONVERGED
    if len(models) == 2:
        angle = svm.normal_angle_degrees(models["exact"], models["variational"])
        print(f"normal angle between exact and variational hyperplanes: {angle:.3f} deg")
    if not opts["no_plot"]:
        from . import plots

        plots.save_dataset_figure(dataset, lines, _figure_path(opts["line_out"]))
        if traces:
            plots.save_trace_figure(traces, _figure_path(opts["trace_out"]))
    return code


# ---------------------------------------------------------------------------
# qfpga
# ---------------------------------------------------------------------------

def _cmd_qfpga(args) -> int:
    opts = _merge_config(args, {**_DEFAULTS, "params_out": None})
    n = int(opts["n_qubits"])
    if n > 3:
        raise CliError(f"universal circuits exist for up to 3 qubits, not {n}", EXIT_PARSE)
    initial = _read_state(opts["initial"])
    final = _read_state(opts["final"])
    if initial.n_qubits != n or final.n_qubits != n:
        raise CliError("state files do not match --n-qubits", EXIT_PARSE)
    try:
        u = varprep.qfpga_compose(initial, final, _schedule(opts), int(opts["seed"]))
    except varprep.ConvergenceError as exc:
        print(f"training failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    rows = [f"N {n}"]
    rows.extend(" ".join(statevector.format_complex(z) for z in row) for row in u)
    _atomic_write(opts["out"], "\n".join(rows) + "\n")
    if opts["params_out"]:
        # Same trainings and seed convention the composition itself uses.
        sched = _schedule(opts)
        params_ini, _ = varprep.train_state_prep(initial, None, sched, int(opts["seed"]))
        params_fin, _ = varprep.train_state_prep(final, None, sched, int(opts["seed"]) + 1)
        prefix = Path(opts["params_out"])
        for tag, params in (("initial", params_ini), ("final", params_fin)):
            angle_rows = [f"N {n}"] + [f"{t:.17g}" for t in params.theta]
            _atomic_write(prefix.with_name(f"{prefix.name}.{tag}.params"),
                          "\n".join(angle_rows) + "\n")
    fidelity = abs(np.vdot(final.amps, u @ initial.amps)) ** 2
    print(f"fidelity {fidelity:.8f} -> {opts['out']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# generate-data
# ---------------------------------------------------------------------------

def _cmd_generate_data(args) -> int:
    opts = _merge_config(args, {"r": 2.0, "n_red": 31, "n_blue": 32, "theta_seed": 0,
                                "point_seed": 1, "sigma_mode": "variance", "no_plot": False})
    spec = data.ClusterSpec(
        r=float(opts["r"]), theta_seed=int(opts["theta_seed"]),
        point_seed=int(opts["point_seed"]), n_red=int(opts["n_red"]),
        n_blue=int(opts["n_blue"]), sigma_mode=opts["sigma_mode"])
    dataset = data.generate(spec)
    header = ",".join(f"x{i + 1}" for i in range(dataset.n_features)) + ",label"
    rows = [header]
    for point, label in zip(dataset.points, dataset.labels):
        rows.append(",".join(f"{v:.17g}" for v in point) + f",{int(label)}")
    _atomic_write(opts["out"], "\n".join(rows) + "\n")
    print(f"wrote {dataset.n_points} points -> {opts['out']}")
    if not opts["no_plot"]:
        from . import plots

        plots.save_dataset_figure(dataset, {}, _figure_path(opts["out"]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--xi1", type=float, help="initial learning rate")
    p.add_argument("--xi2", type=float, help="learning-rate decay per step")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--cost-tol", type=float, dest="cost_tol",
                   help="stop once the cost reaches this value")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqsvm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="expand a matrix file over Pauli strings")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--verify-circuit", action="store_true", dest="verify_circuit", default=None)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("prepare-state", help="train a universal circuit to emit a target state")
    p.add_argument("--target", required=True, help="vector file of the target state")
    p.add_argument("--n-qubits", type=int, required=True, dest="n_qubits")
    _add_schedule_flags(p)
    p.add_argument("--trace-out", required=True, dest="trace_out")
    p.add_argument("--params-out", dest="params_out")
    p.add_argument("--no-plot", action="store_true", dest="no_plot", default=None)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_prepare_state)

    p = sub.add_parser("solve-linear", help="solve F x = y exactly and/or variationally")
    p.add_argument("--matrix", help="matrix file for F")
    p.add_argument("--expansion", help="Pauli expansion file for F (alternative to --matrix)")
    p.add_argument("--rhs", required=True)
    p.add_argument("--method", choices=("exact", "variational", "both"))
    p.add_argument("--mode", choices=("direct", "circuit"))
    p.add_argument("--complex-trial", action="store_true", dest="complex_trial", default=None)
    _add_schedule_flags(p)
    p.add_argument("--out", required=True, help="solution JSON path")
    p.add_argument("--trace-out", dest="trace_out")
    p.add_argument("--no-plot", action="store_true", dest="no_plot", default=None)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_solve_linear)

    p = sub.add_parser("svm", help="train the classifier exactly and variationally")
    p.add_argument("--data", help="dataset CSV")
    p.add_argument("--generate-config", dest="generate_config",
                   help="JSON cluster spec to generate the dataset instead")
    p.add_argument("--gamma", type=float)
    p.add_argument("--method", choices=("exact", "variational", "both"))
    _add_schedule_flags(p)
    p.add_argument("--model-out", dest="model_out")
    p.add_argument("--trace-out", dest="trace_out")
    p.add_argument("--line-out", dest="line_out")
    p.add_argument("--no-plot", action="store_true", dest="no_plot", default=None)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_svm)

    p = sub.add_parser("qfpga", help="compose a unitary mapping one state file to another")
    p.add_argument("--initial", required=True)
    p.add_argument("--final", required=True)
    p.add_argument("--n-qubits", type=int, required=True, dest="n_qubits")
    _add_schedule_flags(p)
    p.add_argument("--out", required=True, help="matrix file for the composed unitary")
    p.add_argument("--params-out", dest="params_out",
                   help="prefix for the two trained angle files")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_qfpga)

    p = sub.add_parser("generate-data", help="write a seeded two-cluster dataset CSV")
    p.add_argument("--r", type=float)
    p.add_argument("--n-red", type=int, dest="n_red")
    p.add_argument("--n-blue", type=int, dest="n_blue")
    p.add_argument("--theta-seed", type=int, dest="theta_seed")
    p.add_argument("--point-seed", type=int, dest="point_seed")
    p.add_argument("--sigma-mode", choices=data.SIGMA_MODES, dest="sigma_mode")
    p.add_argument("--out", required=True)
    p.add_argument("--no-plot", action="store_true", dest="no_plot", default=None)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_generate_data)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except varprep.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (linsolve.SingularMatrixError, linsolve.DegenerateTrialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
