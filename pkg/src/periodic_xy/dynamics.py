"""One-magnon propagators on the chain and on the doubled ring."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from periodic_xy.errors import NonOrthogonalBasis, ShapeMismatch
from periodic_xy.model import ChainModel, PeriodicParameters, RingModel
from periodic_xy.solver import EigenSystem, normalized_basis, solve

GRAM_TOL = 1e-8
DEFAULT_STEPS = 512


@dataclass(frozen=True, eq=False)
class PropagatorSeries:
    times: np.ndarray
    chain_amp: np.ndarray
    ring_amp: np.ndarray
    divergence_time: float

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.chain_amp - self.ring_amp)


def orthonormal_modes(eig: EigenSystem) -> tuple[np.ndarray, np.ndarray]:
    values, basis = normalized_basis(eig)
    gram = basis.T @ basis
    dev = float(np.max(np.abs(gram - np.eye(len(values))))) if len(values) else 0.0
    if basis.shape != (eig.size, eig.size) or dev > GRAM_TOL:
        raise NonOrthogonalBasis(f"Gram matrix deviates from identity by {dev:.3e}")
    return values, basis


def propagator_rows(eig: EigenSystem, p: int, times) -> np.ndarray:
    """G_{p,q}(t) for every site q; shape (len(times), N). Sites are 1-based."""
    values, basis = orthonormal_modes(eig)
    if not 1 <= p <= eig.size:
        raise ShapeMismatch(f"site {p} outside 1..{eig.size}")
    t = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(t, values))
    rows = (phases * basis[p - 1]) @ basis.T
    # exp(-iH 0) is the identity exactly; skip the rounding of sum phi^2
    at_zero = t == 0.0
    if np.any(at_zero):
        rows[at_zero] = 0.0
        rows[at_zero, p - 1] = 1.0
    return rows


def propagator(eig: EigenSystem, p: int, q: int, times) -> np.ndarray:
    """Amplitude G_pq(t) = sum over modes of phi(p) phi(q) exp(-i lam t)."""
    if not 1 <= q <= eig.size:
        raise ShapeMismatch(f"site {q} outside 1..{eig.size}")
    return propagator_rows(eig, p, times)[:, q - 1]


def divergence_time(times, a, b, threshold: float) -> float:
    diff = np.abs(np.asarray(a) - np.asarray(b))
    hit = np.nonzero(diff > threshold)[0]
    return float(times[hit[0]]) if len(hit) else math.inf


def short_time_horizon(params: PeriodicParameters, n: int) -> float:
    """0.25 (k n - 1) / (2 max|D|): well before a front from the middle reaches an end."""
    return 0.25 * (params.k * n - 1) / (2.0 * max(abs(d) for d in params.coupling))


def default_site(params: PeriodicParameters, n: int) -> int:
    return math.ceil((params.k * n - 1) / 2)


def boundary_divergence(
    params: PeriodicParameters,
    n: int,
    p: int | None = None,
    threshold: float = 1e-3,
    t_max: float = 20.0,
    steps: int = DEFAULT_STEPS,
    control: bool = False,
    solver=solve,
) -> PropagatorSeries:
    """Return amplitude G_pp(t) on the chain (k n - 1 sites) and the ring (2 k n sites).

    ``control=True`` runs the chain on both tracks. ``solver`` maps a model to
    its eigensystem (closed form by default).
    """
    if steps < 1:
        raise ShapeMismatch("steps must be positive")
    p = default_site(params, n) if p is None else p
    chain = solver(ChainModel(params, params.k * n - 1))
    other = chain if control else solver(RingModel(params, 2 * n))
    times = np.linspace(0.0, t_max, steps + 1)
    a = propagator(chain, p, p, times)
    b = propagator(other, p, p, times)
    return PropagatorSeries(times, a, b, divergence_time(times, a, b, threshold))
