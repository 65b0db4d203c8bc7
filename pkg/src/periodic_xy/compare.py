"""Chain versus doubled-ring comparison.

A k-periodic chain with k n - 1 sites and the ring with 2 k n sites share
k (n - 1) eigenvalues (simple on the chain, double on the ring); the chain
keeps k - 1 boundary values and the ring 2 k symmetric ones. On the shared
values the chain eigenvector is the truncation of the ring's sine-type vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from periodic_xy.errors import MatchFailure, OverflowRisk, ShapeMismatch
from periodic_xy.linalg import hermitian_eig, tridiag_slogdet
from periodic_xy.model import (
    ChainModel,
    PeriodicParameters,
    RingModel,
    block_det,
    build_block,
    build_chain,
    build_ring,
    frobenius,
)
from periodic_xy.solver import BOUNDARY, EigenSystem, SpectralLine, solve

IDENTITY_TOL = 1e-8
PROJECTION_TOL = 1e-9
MATCH_REL = 1e-8
EXCLUSION = 1e-3
LOG_OVERFLOW = math.log(1e280)


@dataclass(frozen=True, eq=False)
class CommonPair:
    value: float
    chain_line: SpectralLine
    ring_line: SpectralLine
    projection_err: float = math.nan
    scale: float = math.nan


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    common: tuple[CommonPair, ...]
    chain_only: tuple[SpectralLine, ...]
    ring_only: tuple[SpectralLine, ...]
    identity_residuals: tuple[float, ...] = ()

    @property
    def identity_max_rel_err(self) -> float:
        return max(self.identity_residuals, default=0.0)

    @property
    def projection_max_err(self) -> float:
        errs = [p.projection_err for p in self.common if not math.isnan(p.projection_err)]
        return max(errs, default=0.0)

    @property
    def max_scale_dev(self) -> float:
        devs = [abs(p.scale - 1.0) for p in self.common if not math.isnan(p.scale)]
        return max(devs, default=0.0)

    def counts(self) -> tuple[int, int, int]:
        return len(self.common), len(self.chain_only), len(self.ring_only)

    def passed(self, identity_tol=IDENTITY_TOL, projection_tol=PROJECTION_TOL) -> bool:
        return (
            self.identity_max_rel_err <= identity_tol
            and self.projection_max_err <= projection_tol
            and self.max_scale_dev <= projection_tol
        )


def spectrum_partition(chain: EigenSystem, ring: EigenSystem, tol: float | None = None) -> ComparisonReport:
    """Pair every bulk chain value with a double ring value.

    Candidate pairs within ``tol`` are taken greedily by distance (equal mode
    labels first on ties). An unmatched bulk value raises MatchFailure.
    """
    if tol is None:
        fro = max(frobenius(chain.model), frobenius(ring.model))
        tol = MATCH_REL * (1.0 + fro)
    seekers = [i for i, ln in enumerate(chain.lines) if ln.origin != BOUNDARY]
    doubles = [j for j, ln in enumerate(ring.lines) if ln.multiplicity == 2]
    cands = []
    for i in seekers:
        a = chain.lines[i]
        for j in doubles:
            b = ring.lines[j]
            gap = abs(a.value - b.value)
            if gap <= tol:
                cands.append((gap, a.mode != b.mode, i, j))
    cands.sort()
    taken_c, taken_r, pairs = set(), set(), []
    for gap, _, i, j in cands:
        if i in taken_c or j in taken_r:
            continue
        taken_c.add(i)
        taken_r.add(j)
        pairs.append((i, j))
    for i in seekers:
        if i not in taken_c and chain.lines[i].origin is not None:
            raise MatchFailure(f"chain value {chain.lines[i].value!r} has no double ring partner within {tol:.3e}")
    pairs.sort(key=lambda ij: (chain.lines[ij[0]].value, ij[0]))
    common = tuple(
        CommonPair(chain.lines[i].value, chain.lines[i], ring.lines[j]) for i, j in pairs
    )
    chain_only = tuple(ln for i, ln in enumerate(chain.lines) if i not in taken_c)
    ring_only = tuple(ln for j, ln in enumerate(ring.lines) if j not in taken_r)
    return ComparisonReport(common, chain_only, ring_only)


def projection_check(chain_line: SpectralLine, ring_line: SpectralLine) -> tuple[float, float]:
    """(max-norm residual, scale) of truncating the ring sine vector onto the chain vector.

    One scalar is fitted on the first coordinate carrying at least a tenth
    of the chain vector's largest entry; in exact arithmetic it equals 1.
    """
    u = np.asarray(chain_line.vectors[0], dtype=float)
    v = np.asarray(ring_line.vectors[-1], dtype=float)
    if len(v) <= len(u):
        raise ShapeMismatch(f"ring vector of length {len(v)} cannot project onto {len(u)} sites")
    vt = v[: len(u)]
    umax = float(np.max(np.abs(u)))
    if umax == 0.0:
        raise ShapeMismatch("chain vector is zero")
    pivot = int(np.argmax(np.abs(u) >= 0.1 * umax))
    if vt[pivot] == 0.0:
        return math.inf, math.inf
    scale = float(u[pivot] / vt[pivot])
    return float(np.max(np.abs(scale * vt - u))), scale


def _ring_slogdet(ring_values: np.ndarray, lam: float) -> tuple[float, float]:
    diffs = ring_values - lam
    if np.any(diffs == 0.0):
        return 0.0, -math.inf
    sign = -1.0 if np.count_nonzero(diffs < 0) % 2 else 1.0
    return sign, float(np.sum(np.log(np.abs(diffs))))


def _slog(x: float) -> tuple[float, float]:
    if x == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, x), math.log(abs(x))


def determinant_identity_residual(params: PeriodicParameters, n: int, lam_samples, ring_values=None) -> list[float]:
    """Relative error of the chain/ring characteristic-polynomial identity.

    det(chain - lam)^2 (P - 2 prod D)(P + 2 prod D) = det(ring - lam) det(H_{1,k-1} - lam)^2
    with P(lam) = det(H_{1,k} - lam) - det(H_{2,k-1} - lam) D_k^2, chain of
    k n - 1 sites and ring of 2 k n sites. The ring side multiplies over
    oracle eigenvalues.
    """
    k = params.k
    chain = build_chain(ChainModel(params, k * n - 1))
    if ring_values is None:
        ring_values = hermitian_eig(build_ring(RingModel(params, 2 * n))).values
    ring_values = np.asarray(ring_values, dtype=float)
    pd = 2.0 * params.coupling_product(1, k)
    h1 = build_block(params, 1, k - 1)
    out = []
    for lam in lam_samples:
        lam = float(lam)
        cs, cl = tridiag_slogdet(chain, lam)
        p = block_det(params, 1, k, lam) - block_det(params, 2, k - 1, lam) * params.d(k) ** 2
        ms, ml = _slog(p - pd)
        ps, pl = _slog(p + pd)
        hs, hl = tridiag_slogdet(h1, lam)
        rs, rl = _ring_slogdet(ring_values, lam)
        lhs_sign, lhs_log = cs * cs * ms * ps, 2 * cl + ml + pl
        rhs_sign, rhs_log = rs * hs * hs, rl + 2 * hl
        if max(lhs_log, rhs_log) > LOG_OVERFLOW:
            raise OverflowRisk(f"identity sides reach 1e{max(lhs_log, rhs_log) / math.log(10):.0f}; shrink n")
        if lhs_sign == 0.0 and rhs_sign == 0.0:
            out.append(0.0)
        elif lhs_sign != rhs_sign:
            out.append(1.0 if lhs_sign * rhs_sign == 0.0 else 2.0)
        else:
            out.append(float(-math.expm1(-abs(lhs_log - rhs_log))))
    return out


def sample_lambdas(rng: np.random.Generator, avoid, count: int, exclusion: float = EXCLUSION) -> np.ndarray:
    """Uniform samples in [min - 1, max + 1] of ``avoid``, kept ``exclusion`` away from each."""
    avoid = np.sort(np.asarray(avoid, dtype=float))
    lo, hi = float(avoid[0]) - 1.0, float(avoid[-1]) + 1.0
    out = []
    while len(out) < count:
        x = float(rng.uniform(lo, hi))
        if np.min(np.abs(avoid - x)) >= exclusion:
            out.append(x)
    return np.array(out)


def compare_models(params: PeriodicParameters, n: int, samples: int = 20, seed: int = 0) -> ComparisonReport:
    """Full comparison of the (k n - 1)-site chain with the 2 k n-site ring."""
    k = params.k
    chain = solve(ChainModel(params, k * n - 1))
    ring_model = RingModel(params, 2 * n)
    ring = solve(ring_model)
    report = spectrum_partition(chain, ring)
    common = []
    for pair in report.common:
        err, scale = projection_check(pair.chain_line, pair.ring_line)
        common.append(CommonPair(pair.value, pair.chain_line, pair.ring_line, err, scale))

    ring_values = hermitian_eig(build_ring(ring_model)).values
    avoid = np.concatenate([chain.values(), ring_values])
    if k >= 2:
        avoid = np.concatenate([avoid, hermitian_eig(build_block(params, 1, k - 1).to_dense()).values])
    rng = np.random.default_rng(seed)
    lams = sample_lambdas(rng, avoid, samples)
    residuals = determinant_identity_residual(params, n, lams, ring_values)
    return ComparisonReport(tuple(common), report.chain_only, report.ring_only, tuple(residuals))


def _line_entry(ln: SpectralLine) -> dict:
    return {"value": ln.value, "label": ln.label, "origin": ln.origin, "multiplicity": ln.multiplicity}


def normalize_report(report: ComparisonReport) -> dict:
    """JSON-ready dict with a fixed key order."""
    return {
        "common": [
            {
                "value": p.value,
                "chain": p.chain_line.label,
                "ring": p.ring_line.label,
                "projection_err": p.projection_err,
                "scale": p.scale,
            }
            for p in report.common
        ],
        "chain_only": [_line_entry(ln) for ln in report.chain_only],
        "ring_only": [_line_entry(ln) for ln in report.ring_only],
        "identity_max_rel_err": report.identity_max_rel_err,
        "projection_max_err": report.projection_max_err,
    }


def report_json(report: ComparisonReport) -> str:
    return json.dumps(normalize_report(report), indent=2) + "\n"
