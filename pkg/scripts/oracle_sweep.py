"""Closed form against the dense Jacobi oracle over random periodic models.

    python3 scripts/oracle_sweep.py --instances 200 --seed 0
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from periodic_xy.model import ChainModel, RingModel, frobenius
from periodic_xy.solver import oracle_eigensystem, relative_residual, solve
from periodic_xy.verify import random_params


@dataclass
class SweepConfig:
    instances: int = 200
    kmax: int = 5
    nmax: int = 8
    seed: int = 0


def run(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    by_k: dict[int, list[tuple[float, float]]] = {}
    start = time.perf_counter()
    for _ in range(cfg.instances):
        k = int(rng.integers(1, cfg.kmax + 1))
        n = int(rng.integers(2, cfg.nmax + 1))
        params = random_params(rng, k)
        for model in (ChainModel(params, k * n - 1), RingModel(params, n)):
            fro = frobenius(model)
            closed = solve(model)
            dev = float(np.max(np.abs(closed.values() - oracle_eigensystem(model).values()))) / (1 + fro)
            res = max(relative_residual(model, ln.value, v, fro) for ln in closed.lines for v in ln.vectors)
            by_k.setdefault(k, []).append((dev, res))
    elapsed = time.perf_counter() - start
    print(f"{'k':>2} {'models':>7} {'max spectrum dev':>17} {'max residual':>13}")
    for k in sorted(by_k):
        arr = np.array(by_k[k])
        print(f"{k:>2} {len(arr):>7} {arr[:, 0].max():>17.2e} {arr[:, 1].max():>13.2e}")
    print(f"elapsed {elapsed:.1f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=SweepConfig.instances)
    ap.add_argument("--kmax", type=int, default=SweepConfig.kmax)
    ap.add_argument("--nmax", type=int, default=SweepConfig.nmax)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    run(SweepConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
