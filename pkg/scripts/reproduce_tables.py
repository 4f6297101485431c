"""Reproduce the main convergence tables: exact energies, then the
unfrustrated and frustrated VQE suites with per-case convergence stats.

Usage:
    python scripts/reproduce_tables.py --out results/ [--suite unfrustrated]
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from sncqa.hamiltonian import build_hamiltonian, exact_ground_energy
from sncqa.lattice import LatticeSpec, build_lattice
from sncqa.vqe import frustrated_suite, run_case, unfrustrated_suite

EXACT_GRID = ((2, 2), (2, 3), (2, 4), (3, 4))


def exact_table(j2: float) -> list[dict]:
    rows = []
    for r, c in EXACT_GRID:
        lattice = build_lattice(LatticeSpec(rows=r, cols=c))
        ham = build_hamiltonian(lattice, j1=1.0, j2=j2)
        start = time.perf_counter()
        truth = exact_ground_energy(ham)
        rows.append(
            {
                "lattice": f"{r}x{c}",
                "j2": j2,
                "energy": truth.energy,
                "sz_sector": truth.sz_sector,
                "method": truth.method,
                "seconds": round(time.perf_counter() - start, 3),
            }
        )
    return rows


def run_suite(name: str, max_workers: int) -> list[dict]:
    cases = unfrustrated_suite() if name == "unfrustrated" else frustrated_suite()
    summary = []
    for case in cases:
        start = time.perf_counter()
        result = run_case(case, max_workers=max_workers)
        summary.append(
            {
                "case": case.name,
                "exact": result.exact_energy,
                "converged": f"{result.converged_count}/{len(case.seeds)}",
                "best_iter": result.best_converged_at,
                "median_iter": result.median_converged_at,
                "median_error": result.median_final_error,
                "best_error": result.best_final_error,
                "seconds": round(time.perf_counter() - start, 1),
            }
        )
        print(f"  {case.name}: {summary[-1]['converged']} converged, "
              f"median error {result.median_final_error:.4f} "
              f"({summary[-1]['seconds']}s)")
    return summary


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--suite", choices=("unfrustrated", "frustrated", "both"), default="both")
    parser.add_argument("--max-workers", type=int, default=4)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    payload: dict = {}

    print("exact ground energies (J2=0):")
    payload["exact_j2_0"] = exact_table(0.0)
    for row in payload["exact_j2_0"]:
        print(f"  {row['lattice']}: {row['energy']:.6f}  ({row['method']}, {row['seconds']}s)")

    print("exact ground energies (J2/J1=0.5):")
    payload["exact_j2_half"] = exact_table(0.5)
    for row in payload["exact_j2_half"]:
        print(f"  {row['lattice']}: {row['energy']:.6f}  ({row['method']}, {row['seconds']}s)")

    suites = ("unfrustrated", "frustrated") if args.suite == "both" else (args.suite,)
    for name in suites:
        print(f"{name} suite:")
        payload[name] = run_suite(name, args.max_workers)

    out_path = args.out / "tables.json"
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
