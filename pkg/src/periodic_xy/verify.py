"""Seeded randomized property suite behind ``periodic-xy verify``.

Output is a list of text lines with no timings, so a fixed seed gives a
byte-identical report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from periodic_xy.compare import IDENTITY_TOL, PROJECTION_TOL, compare_models
from periodic_xy.dynamics import boundary_divergence, propagator_rows, short_time_horizon
from periodic_xy.model import ChainModel, PeriodicParameters, RingModel, frobenius
from periodic_xy.solver import (
    alternating_chain,
    alternating_ring,
    bloch_polynomial_residual,
    bloch_polynomial_scale,
    homogeneous_chain,
    homogeneous_ring,
    oracle_eigensystem,
    periodic_chain,
    periodic_ring,
    relative_residual,
    solve,
)

SPECTRUM_TOL = 1e-8
RESIDUAL_TOL = 1e-9
SPECIALIZATION_TOL = 1e-10
BLOCH_TOL = 1e-8
UNITARITY_TOL = 1e-9


def random_params(rng: np.random.Generator, k: int) -> PeriodicParameters:
    """omega in [-1, 1], couplings of magnitude in [0.5, 2] with random sign."""
    omega = rng.uniform(-1.0, 1.0, k)
    coupling = rng.choice([-1.0, 1.0], k) * rng.uniform(0.5, 2.0, k)
    return PeriodicParameters(tuple(omega), tuple(coupling))


def periodic_models(params: PeriodicParameters, n: int):
    """The closed-form chain (k n - 1 sites) and ring (n cells) of one draw."""
    return ChainModel(params, params.k * n - 1), RingModel(params, n)


@dataclass
class Family:
    name: str
    worst: float = 0.0
    tol: float = 0.0
    checks: int = 0
    failures: int = 0

    def record(self, value: float, ok: bool | None = None):
        self.checks += 1
        self.worst = max(self.worst, value)
        if not (value <= self.tol if ok is None else ok):
            self.failures += 1

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checks > 0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name:<16} checks={self.checks:<5d} worst={self.worst:.3e} tol={self.tol:.0e}"


def run_verify(seed: int = 0, trials: int = 50, kmax: int = 4, inject_fault: bool = False) -> tuple[list[str], bool]:
    """Run every property family; returns (report lines, all passed).

    ``inject_fault`` flips the sign of D_1 in the matrices used for the
    residual check from the middle trial on; the suite must then fail.
    """
    rng = np.random.default_rng(seed)
    fam = {
        "spectra": Family("spectra", tol=SPECTRUM_TOL),
        "residuals": Family("residuals", tol=RESIDUAL_TOL),
        "bloch-poly": Family("bloch-poly", tol=BLOCH_TOL),
        "partition": Family("partition", tol=0.0),
        "identity": Family("identity", tol=IDENTITY_TOL),
        "projection": Family("projection", tol=PROJECTION_TOL),
        "specialization": Family("specialization", tol=SPECIALIZATION_TOL),
        "unitarity": Family("unitarity", tol=UNITARITY_TOL),
    }
    for trial in range(trials):
        k = int(rng.integers(1, kmax + 1))
        n = int(rng.integers(2, 9))
        params = random_params(rng, k)
        for model in periodic_models(params, n):
            closed = solve(model)
            oracle = oracle_eigensystem(model)
            fro = frobenius(model)
            fam["spectra"].record(float(np.max(np.abs(closed.values() - oracle.values()))) / (1.0 + fro))
            check_model = model
            if inject_fault and trial >= trials // 2:
                bad = PeriodicParameters(params.omega, (-params.coupling[0],) + params.coupling[1:])
                check_model = type(model)(bad, model.sites if isinstance(model, ChainModel) else model.cells)
            for ln in closed.lines:
                for v in ln.vectors:
                    fam["residuals"].record(relative_residual(check_model, ln.value, v, fro))
                if ln.phase is not None and ln.multiplicity <= 2:
                    scale = bloch_polynomial_scale(params, ln.value)
                    fam["bloch-poly"].record(abs(bloch_polynomial_residual(params, ln.value, ln.phase)) / scale)

        nc = int(rng.integers(2, 7))
        kc = min(k, 4)
        cparams = params if kc == k else random_params(rng, kc)
        report = compare_models(cparams, nc, samples=20, seed=int(rng.integers(2**31)))
        want = (kc * (nc - 1), kc - 1, 2 * kc)
        fam["partition"].record(0.0 if report.counts() == want else 1.0)
        fam["identity"].record(report.identity_max_rel_err)
        fam["projection"].record(max(report.projection_max_err, report.max_scale_dev))

        a = random_params(rng, 1)
        hc = homogeneous_chain(a.omega[0], a.coupling[0], n - 1 if n > 2 else 1)
        pc = periodic_chain(a, hc.size + 1)
        fam["specialization"].record(float(np.max(np.abs(hc.values() - pc.values()))))
        hr = homogeneous_ring(a.omega[0], a.coupling[0], n)
        pr = periodic_ring(a, n)
        fam["specialization"].record(float(np.max(np.abs(hr.values() - pr.values()))))
        b = random_params(rng, 2)
        ac = alternating_chain(*b.omega, *b.coupling, n)
        fam["specialization"].record(float(np.max(np.abs(ac.values() - periodic_chain(b, n).values()))))
        ar = alternating_ring(*b.omega, *b.coupling, n)
        fam["specialization"].record(float(np.max(np.abs(ar.values() - periodic_ring(b, n).values()))))

    # unitarity on a few moderate systems
    for _ in range(max(1, min(trials // 10, 5))):
        k = int(rng.integers(1, min(kmax, 3) + 1))
        params = random_params(rng, k)
        n = 6
        horizon = short_time_horizon(params, n)
        times = np.linspace(0.0, 4 * horizon, 33)
        for model in periodic_models(params, n):
            rows = propagator_rows(solve(model), 1 + model.sites // 2, times)
            dev = float(np.max(np.abs(np.sum(np.abs(rows) ** 2, axis=1) - 1.0)))
            fam["unitarity"].record(dev)
        ctrl = boundary_divergence(params, n, t_max=horizon, steps=32, control=True)
        fam["unitarity"].record(0.0, ok=ctrl.divergence_time == float("inf"))

    lines = [f"verify seed={seed} trials={trials} kmax={kmax}"]
    lines += [f.line() for f in fam.values()]
    ok = all(f.passed for f in fam.values())
    lines.append("OK" if ok else "FAILED")
    return lines, ok
