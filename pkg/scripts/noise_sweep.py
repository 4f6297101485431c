"""Shot-noise sweep on the 2x2 lattice: run the sampled-gradient VQE at a
ladder of shot budgets and report how the median final error decays.

Usage:
    python scripts/noise_sweep.py --out results/ [--shots 10,50,100,500,1000]
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from sncqa.vqe import noise_suite, run_case


def parse_shots(text: str) -> tuple[int, ...]:
    values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("shots must be positive integers")
    return values


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--shots", type=parse_shots, default=(10, 50, 100, 500, 1000))
    parser.add_argument("--max-workers", type=int, default=4)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    rows = []
    print("shots  converged  median_error  best_error  seconds")
    for case in noise_suite(shots_grid=args.shots):
        start = time.perf_counter()
        result = run_case(case, max_workers=args.max_workers)
        shots = case.optimizer.shots
        row = {
            "shots": shots,
            "converged_count": result.converged_count,
            "median_final_error": result.median_final_error,
            "best_final_error": result.best_final_error,
            "seconds": round(time.perf_counter() - start, 1),
        }
        rows.append(row)
        print(f"{shots:>5}  {result.converged_count}/{len(case.seeds)}        "
              f"{result.median_final_error:.4f}        {result.best_final_error:.4f}      "
              f"{row['seconds']}")

    medians = [row["median_final_error"] for row in rows]
    monotone = all(b <= a + 1e-12 for a, b in zip(medians, medians[1:]))
    print(f"median error non-increasing across the ladder: {monotone}")

    out_path = args.out / "noise_sweep.json"
    out_path.write_text(json.dumps({"rows": rows, "monotone": monotone}, indent=2) + "\n")
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
