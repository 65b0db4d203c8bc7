"""When does the open chain stop looking like the doubled ring?

For each period k the return amplitude at the middle site is tracked on the
chain (k n - 1 sites) and on the ring (2 k n sites). The first time they
differ by more than the threshold is compared with the time a ballistic
front needs to reach the nearer chain end and come back.

    python3 scripts/boundary_reflection.py --n 16 --tmax 60
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from periodic_xy.dynamics import boundary_divergence, default_site
from periodic_xy.verify import random_params


@dataclass
class ReflectionConfig:
    n: int = 16
    kmax: int = 3
    tmax: float = 60.0
    steps: int = 2000
    threshold: float = 1e-3
    seed: int = 1


def run(cfg: ReflectionConfig):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'k':>2} {'site':>5} {'end distance':>13} {'2 d / (2 max|D|)':>17} {'divergence':>11}")
    for k in range(1, cfg.kmax + 1):
        params = random_params(rng, k)
        p = default_site(params, cfg.n)
        dist = min(p - 1, k * cfg.n - 1 - p)
        round_trip = 2 * dist / (2 * max(abs(d) for d in params.coupling))
        series = boundary_divergence(params, cfg.n, threshold=cfg.threshold, t_max=cfg.tmax, steps=cfg.steps)
        print(f"{k:>2} {p:>5} {dist:>13} {round_trip:>17.2f} {series.divergence_time:>11.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(ReflectionConfig()).items():
        ap.add_argument(f"--{name}", type=type(value), default=value)
    run(ReflectionConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
