"""Benchmark command line: exact energies, VQE runs, suites, and table data.

Outputs are deterministic: every JSON/CSV artifact embeds the resolved
config and seeds, floats use shortest round-trip formatting, files are
written atomically (temp file + rename), and re-running a command with the
same config reproduces identical bytes.  The default output directory comes
from --out, then output.directory in the config, then $SNCQA_OUT_DIR, then
./sncqa-out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .ansatz import PheaConfig, SnCQAConfig, build_phea, build_sncqa, count_resources
from .config import ConfigError, ExperimentConfig, load_config
from .hamiltonian import exact_ground_energy
from .lattice import LatticeSpec, build_lattice
from .sectors import irrep_dim, largest_irrep_dim, scaling_ratio, schur_weyl_check
from .vqe import (
    BenchmarkCase,
    CaseResult,
    OptimizerConfig,
    benchmark_suite,
    chain_hamiltonian,
    frustrated_suite,
    noise_suite,
    record_payload,
    run_case,
    trace_to_csv,
    unfrustrated_suite,
)

ENV_OUT_DIR = "SNCQA_OUT_DIR"
DEFAULT_OUT_DIR = "sncqa-out"
MAX_WORKERS = 4
RESOURCE_GRID = ((2, 2), (2, 3), (2, 4), (3, 4), (4, 4))


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _compact(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _csv_text(comment: dict, header: list[str], rows: list[list]) -> str:
    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, float):
            return repr(value)
        return str(value)

    lines = [f"# config={_compact(comment)}", ",".join(header)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _out_dir(args: argparse.Namespace, config: ExperimentConfig | None) -> Path:
    if args.out:
        return Path(args.out)
    if config is not None and config.out_dir:
        return Path(config.out_dir)
    return Path(os.environ.get(ENV_OUT_DIR, DEFAULT_OUT_DIR))


def _load(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if args.seeds:
        config = replace(config, seeds=args.seeds)
    return config


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"--seeds must be a comma-separated integer list: {text!r}") from exc
    if not seeds:
        raise ConfigError("--seeds must name at least one seed")
    return seeds


def _case_from_config(config: ExperimentConfig) -> BenchmarkCase:
    if config.ansatz == "sncqa" and config.yjm_sample_count is None:
        raise ConfigError("ansatz.yjm_sample_count is required for sncqa runs")
    shots = None
    if config.shots is not None:
        if len(config.shots) != 1:
            raise ConfigError("vqe takes a single noise.shots value; use the noise command for sweeps")
        shots = config.shots[0]
    try:
        optimizer = OptimizerConfig(
            learning_rate=config.learning_rate,
            max_iters=config.max_iters,
            epsilon=config.epsilon,
            init_scale=config.init_scale,
            grad_mode=config.grad_mode,
            shots=shots,
            method=config.method,
            stop_at_convergence=config.stop_at_convergence,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    name = f"{config.ansatz}-{config.rows}x{config.cols}-p{config.layers}"
    return BenchmarkCase(
        name, config.rows, config.cols, config.ansatz, config.layers,
        config.yjm_sample_count, config.trotter_slices, config.j2,
        optimizer, config.seeds,
    )


def _case_summary(result: CaseResult) -> dict:
    per_seed = []
    for seed, record, error in zip(result.case.seeds, result.records, result.run_errors):
        if record is None:
            per_seed.append({"seed": seed, "error": error})
        else:
            per_seed.append({
                "seed": seed,
                "converged_at": record.converged_at,
                "final_energy": record.final_energy,
                "final_error": record.final_error,
            })
    return {
        "case": result.case.name,
        "ansatz": result.case.ansatz,
        "lattice": {"rows": result.case.rows, "cols": result.case.cols},
        "j2": result.case.j2,
        "layers": result.case.layers,
        "yjm_sample_count": result.case.yjm_sample_count,
        "param_count": result.param_count,
        "exact_energy": result.exact_energy,
        "seeds": list(result.case.seeds),
        "runs": per_seed,
        "converged_count": result.converged_count,
        "best_converged_at": result.best_converged_at,
        "median_converged_at": result.median_converged_at,
        "best_final_error": result.best_final_error,
        "median_final_error": result.median_final_error,
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_exact(args: argparse.Namespace) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    H = chain_hamiltonian(config.rows, config.cols, config.j1, config.j2)
    truth = exact_ground_energy(H)
    payload = {
        "config": config.as_dict(),
        "energy": truth.energy,
        "sz_sector": truth.sz_sector,
        "method": truth.method,
    }
    path = out / f"exact_{config.rows}x{config.cols}.json"
    _atomic_write(path, _json_text(payload))
    print(f"E0({config.rows}x{config.cols}, j2/j1={config.j2_over_j1}) = {truth.energy!r} "
          f"[sector Sz={truth.sz_sector}, {truth.method}] -> {path}")
    return 0


def _write_runs(result: CaseResult, config: ExperimentConfig, out: Path,
                prefix: str) -> None:
    for seed, record in zip(result.case.seeds, result.records):
        if record is None:
            continue
        run_doc = {"config": config.as_dict(), "run": record_payload(record)}
        _atomic_write(out / f"{prefix}_seed{seed}.json", _json_text(run_doc))
        if "csv" in config.formats:
            echo = {"config": config.as_dict(), "seed": seed}
            csv_text = f"# config={_compact(echo)}\n" + trace_to_csv(record)
            _atomic_write(out / f"{prefix}_seed{seed}_trace.csv", csv_text)


def cmd_vqe(args: argparse.Namespace) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    case = _case_from_config(config)
    result = run_case(case, max_workers=MAX_WORKERS)
    for error in filter(None, result.run_errors):
        print(f"run failed: {error}", file=sys.stderr)
    summary = {"config": config.as_dict(), "summary": _case_summary(result)}
    _atomic_write(out / f"{case.name}_summary.json", _json_text(summary))
    _write_runs(result, config, out, case.name)
    print(f"{case.name}: exact={result.exact_energy!r} params={result.param_count} "
          f"converged {result.converged_count}/{len(case.seeds)} "
          f"best={result.best_converged_at} median={result.median_converged_at} "
          f"median_err={result.median_final_error}")
    if args.require_converged and result.converged_count == 0:
        print("no seed converged (--require-converged)", file=sys.stderr)
        return 2
    return 0


_SUITES = {
    "unfrustrated": unfrustrated_suite,
    "frustrated": frustrated_suite,
    "noise": noise_suite,
}


def cmd_benchmark(args: argparse.Namespace) -> int:
    config = _load(args) if args.config else None
    out = _out_dir(args, config)
    cases = _SUITES[args.suite]()
    if args.seeds:
        cases = [replace(case, seeds=args.seeds) for case in cases]
    results = benchmark_suite(cases, max_workers=MAX_WORKERS)
    summaries = [_case_summary(result) for result in results]
    comment = {"suite": args.suite, "seeds": [list(c.seeds) for c in cases]}
    header = ["case", "ansatz", "rows", "cols", "j2", "layers", "param_count",
              "exact_energy", "converged_count", "best_converged_at",
              "median_converged_at", "best_final_error", "median_final_error"]
    rows = [[s["case"], s["ansatz"], s["lattice"]["rows"], s["lattice"]["cols"],
             s["j2"], s["layers"], s["param_count"], s["exact_energy"],
             s["converged_count"], s["best_converged_at"], s["median_converged_at"],
             s["best_final_error"], s["median_final_error"]] for s in summaries]
    _atomic_write(out / f"benchmark_{args.suite}.csv", _csv_text(comment, header, rows))
    _atomic_write(out / f"benchmark_{args.suite}.json",
                  _json_text({"suite": args.suite, "cases": summaries}))
    for s in summaries:
        print(f"{s['case']}: converged {s['converged_count']}/{len(s['seeds'])} "
              f"median_iter={s['median_converged_at']} median_err={s['median_final_error']}")
    if args.require_converged and any(s["converged_count"] == 0 for s in summaries):
        print("a case had no converged seed (--require-converged)", file=sys.stderr)
        return 2
    return 0


def cmd_scaling(args: argparse.Namespace) -> int:
    if args.n_max > 100 or args.n_max < 4:
        raise ConfigError("--n-max must be in [4, 100]")
    out = _out_dir(args, None)
    header = ["n", "dim_spin0", "dim_max", "ratio"]
    rows = []
    for n in range(4, args.n_max + 1, 2):
        if not schur_weyl_check(n):  # pragma: no cover - identity holds
            raise AssertionError(f"completeness identity failed at n={n}")
        dim0 = irrep_dim(n, n // 2)
        dim_max, _ = largest_irrep_dim(n)
        rows.append([n, dim0, dim_max, float(scaling_ratio(n))])
    path = out / "scaling.csv"
    _atomic_write(path, _csv_text({"n_max": args.n_max}, header, rows))
    first, last = rows[0], rows[-1]
    print(f"scaling: n={first[0]} ratio={first[3]!r} ... n={last[0]} "
          f"dim_spin0={last[1]} ratio={last[3]!r} -> {path}")
    return 0


def cmd_resources(args: argparse.Namespace) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    header = ["ansatz", "n", "rows", "cols", "layers", "param_count", "eswap_count",
              "cnot", "rz", "ry", "cry", "two_qubit_count", "depth"]
    rows = []
    seed = config.seeds[0]
    for r, c in RESOURCE_GRID:
        n = r * c
        lattice = build_lattice(LatticeSpec(r, c))
        m = config.yjm_sample_count if config.yjm_sample_count is not None else n - 1
        sncqa = build_sncqa(lattice, SnCQAConfig(config.layers, min(m, n - 1),
                                                 config.trotter_slices, seed))
        phea = build_phea(n, PheaConfig(config.layers))
        for ansatz, circuit in (("sncqa", sncqa), ("phea", phea)):
            res = count_resources(circuit)
            rows.append([
                ansatz, n, r, c, config.layers, circuit.param_count,
                res.eswap_count, res.gate_counts.get("CNOT", 0),
                res.gate_counts.get("RZ", 0), res.gate_counts.get("RY", 0),
                res.gate_counts.get("CRY", 0), res.two_qubit_count, res.depth,
            ])
    path = out / "resources.csv"
    _atomic_write(path, _csv_text({"config": config.as_dict()}, header, rows))
    print(f"resources: {len(rows)} rows over n={[r * c for r, c in RESOURCE_GRID]} -> {path}")
    return 0


def cmd_noise(args: argparse.Namespace) -> int:
    config = _load(args) if args.config else None
    out = _out_dir(args, config)
    if config is None:
        cases = noise_suite(seeds=args.seeds or (0, 1, 2, 3, 4))
        echo = {"suite": "noise-defaults"}
    else:
        if config.ansatz == "sncqa" and config.yjm_sample_count is None:
            raise ConfigError("ansatz.yjm_sample_count is required for sncqa runs")
        shots_grid = config.shots or (10, 50, 100, 500, 1000)
        cases = []
        for shots in shots_grid:
            try:
                optimizer = OptimizerConfig(
                    learning_rate=config.learning_rate, max_iters=config.max_iters,
                    epsilon=config.epsilon, init_scale=config.init_scale,
                    grad_mode="parameter_shift", shots=shots,
                    method=config.method, stop_at_convergence=False,
                )
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            cases.append(BenchmarkCase(
                f"noise-{config.rows}x{config.cols}-shots{shots}",
                config.rows, config.cols, config.ansatz, config.layers,
                config.yjm_sample_count, config.trotter_slices, config.j2,
                optimizer, config.seeds, tail_fraction=0.25,
            ))
        echo = {"config": config.as_dict()}
    results = benchmark_suite(cases, max_workers=MAX_WORKERS)
    summaries = [_case_summary(result) for result in results]
    header = ["shots", "param_count", "converged_count", "best_final_error",
              "median_final_error"]
    rows = [[result.case.optimizer.shots, result.param_count, result.converged_count,
             result.best_final_error, result.median_final_error]
            for result in results]
    _atomic_write(out / "noise_summary.csv", _csv_text(echo, header, rows))
    _atomic_write(out / "noise_summary.json",
                  _json_text({**echo, "cases": summaries}))
    if config is not None:
        for result in results:
            shots_config = replace(config, shots=(result.case.optimizer.shots,))
            _write_runs(result, shots_config, out, result.case.name)
    for row in rows:
        print(f"shots={row[0]}: median tail error={row[4]!r} converged {row[2]}")
    if args.require_converged and all(s["converged_count"] == 0 for s in summaries):
        print("no run converged at any shots level (--require-converged)", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sncqa-bench",
        description="Heisenberg-lattice VQE benchmarks: exchange-symmetric vs "
                    "hardware-efficient ansatz.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON experiment config path")
        p.add_argument("--out", help="output directory (default: config, "
                                     f"${ENV_OUT_DIR}, or ./{DEFAULT_OUT_DIR})")
        p.add_argument("--seeds", type=_parse_seeds,
                       help="comma-separated seed list override")
        p.add_argument("--require-converged", action="store_true",
                       help="exit 2 unless at least one seed converged")

    p_exact = sub.add_parser("exact", help="exact ground energy by sector diagonalization")
    common(p_exact)
    p_exact.set_defaults(func=cmd_exact)

    p_vqe = sub.add_parser("vqe", help="run one VQE experiment over seeds")
    common(p_vqe)
    p_vqe.set_defaults(func=cmd_vqe)

    p_bench = sub.add_parser("benchmark", help="run a named suite")
    common(p_bench)
    p_bench.add_argument("--suite", choices=sorted(_SUITES), required=True)
    p_bench.set_defaults(func=cmd_benchmark)

    p_scaling = sub.add_parser("scaling", help="charge-sector dimension table")
    common(p_scaling)
    p_scaling.add_argument("--n-max", type=int, default=100)
    p_scaling.set_defaults(func=cmd_scaling)

    p_res = sub.add_parser("resources", help="primitive-gate resource table")
    common(p_res)
    p_res.set_defaults(func=cmd_resources)

    p_noise = sub.add_parser("noise", help="shot-noise resilience sweep")
    common(p_noise)
    p_noise.set_defaults(func=cmd_noise)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
