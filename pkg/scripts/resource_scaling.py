"""Resource scaling study: count eSWAPs and primitive gates over a grid of
lattice sizes, then fit the per-layer eSWAP count to c * n^alpha.

Usage:
    python scripts/resource_scaling.py [--layers 2] [--out results/]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from sncqa.ansatz import PheaConfig, SnCQAConfig, build_phea, build_sncqa, count_resources
from sncqa.lattice import LatticeSpec, build_lattice

GRID = {4: (2, 2), 6: (2, 3), 8: (2, 4), 12: (3, 4), 16: (4, 4)}


def sncqa_row(n: int, layers: int) -> dict:
    rows, cols = GRID[n]
    lattice = build_lattice(LatticeSpec(rows=rows, cols=cols))
    config = SnCQAConfig(layers=layers, yjm_sample_count=n - 1)
    circuit = build_sncqa(lattice, config)
    counts = count_resources(circuit)
    return {
        "ansatz": "sncqa",
        "n": n,
        "layers": layers,
        "param_count": circuit.param_count,
        "eswap_count": counts.eswap_count,
        "two_qubit_count": counts.two_qubit_count,
        "depth": counts.depth,
        "gate_counts": dict(counts.gate_counts),
    }


def phea_row(n: int, layers: int) -> dict:
    circuit = build_phea(n, PheaConfig(layers=layers))
    counts = count_resources(circuit)
    return {
        "ansatz": "phea",
        "n": n,
        "layers": layers,
        "param_count": circuit.param_count,
        "eswap_count": counts.eswap_count,
        "two_qubit_count": counts.two_qubit_count,
        "depth": counts.depth,
        "gate_counts": dict(counts.gate_counts),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--layers", type=int, default=2)
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    rows = []
    print("ansatz   n  params  eswaps  two_qubit  depth")
    for n in sorted(GRID):
        for row in (sncqa_row(n, args.layers), phea_row(n, args.layers)):
            rows.append(row)
            print(f"{row['ansatz']:<6} {row['n']:>3}  {row['param_count']:>6}  "
                  f"{row['eswap_count']:>6}  {row['two_qubit_count']:>9}  {row['depth']:>5}")

    ns = np.array(sorted(GRID), dtype=float)
    eswaps = np.array([r["eswap_count"] for r in rows if r["ansatz"] == "sncqa"], dtype=float)
    per_layer = eswaps / args.layers
    slope, intercept = np.polyfit(np.log(ns), np.log(per_layer), 1)
    print(f"eswap-per-layer fit: c * n^alpha with alpha = {slope:.4f}, "
          f"c = {np.exp(intercept):.4f}")

    payload = {"rows": rows, "alpha": slope, "prefactor": float(np.exp(intercept))}
    out_path = args.out / "resource_scaling.json"
    out_path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
