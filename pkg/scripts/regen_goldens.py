"""Rewrite tests/golden/compare_seed*.json from the current code.

Run only after an intentional change to the comparison output.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from periodic_xy.compare import compare_models, report_json
from periodic_xy.model import PeriodicParameters

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
SEEDS = (0, 1, 2)


def golden_case(seed: int) -> tuple[PeriodicParameters, int]:
    rng = np.random.default_rng(1000 + seed)
    k = 2 + seed
    omega = np.round(rng.uniform(-1, 1, k), 6)
    coupling = np.round(rng.choice([-1.0, 1.0], k) * rng.uniform(0.5, 2.0, k), 6)
    return PeriodicParameters(tuple(omega), tuple(coupling)), 3 + seed


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for seed in SEEDS:
        params, n = golden_case(seed)
        (GOLDEN / f"params_seed{seed}.json").write_text(json.dumps(params.to_dict()) + "\n")
        (GOLDEN / f"compare_seed{seed}.json").write_text(report_json(compare_models(params, n, seed=seed)))
        print(f"seed {seed}: k={params.k} n={n}")


if __name__ == "__main__":
    main()
