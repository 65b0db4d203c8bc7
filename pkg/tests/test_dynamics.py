from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import params_strategy, random_params
from periodic_xy.dynamics import (
    boundary_divergence,
    default_site,
    divergence_time,
    propagator,
    propagator_rows,
    short_time_horizon,
)
from periodic_xy.errors import ShapeMismatch
from periodic_xy.model import ChainModel, PeriodicParameters, RingModel, build_ring
from periodic_xy.solver import oracle_eigensystem, solve


def test_identity_at_zero(rng):
    p = random_params(rng, 3)
    eig = solve(ChainModel(p, 11))
    for site in (1, 6, 11):
        row = propagator_rows(eig, site, [0.0])[0]
        np.testing.assert_array_equal(row, np.eye(11)[site - 1])


def test_single_site():
    eig = solve(ChainModel(PeriodicParameters((0.35,), (1.0,)), 1))
    t = np.linspace(0, 5, 11)
    np.testing.assert_allclose(propagator(eig, 1, 1, t), np.exp(-2j * 0.35 * t), atol=1e-15)


def test_matches_matrix_exponential(rng):
    p = random_params(rng, 2)
    model = RingModel(p, 5)
    h = build_ring(model)
    w, v = np.linalg.eigh(h)
    t = 1.7
    ref = (v * np.exp(-1j * w * t)) @ v.T
    np.testing.assert_allclose(propagator_rows(solve(model), 3, [t])[0], ref[2], atol=1e-12)


def test_homogeneous_ring_translation_invariance():
    eig = solve(RingModel(PeriodicParameters((0.2,), (0.9,)), 7))
    t = np.array([0.3, 1.1, 2.5])
    g = np.array([np.abs(propagator_rows(eig, p, t)) for p in range(1, 8)])
    for p in range(7):
        np.testing.assert_allclose(np.roll(g[p], -p, axis=1), g[0], atol=1e-12)


@settings(max_examples=20)
@given(params_strategy(kmax=3), st.integers(2, 6))
def test_unitarity(p, n):
    t = np.linspace(0, 10, 21)
    for model in (ChainModel(p, p.k * n - 1), RingModel(p, 2 * n)):
        rows = propagator_rows(solve(model), 1, t)
        np.testing.assert_allclose(np.sum(np.abs(rows) ** 2, axis=1), 1.0, atol=1e-9)


def test_closed_form_and_oracle_agree(rng):
    p = random_params(rng, 3)
    model = ChainModel(p, 14)
    t = np.linspace(0, 6, 13)
    np.testing.assert_allclose(
        propagator_rows(solve(model), 7, t), propagator_rows(oracle_eigensystem(model), 7, t), atol=1e-10
    )


def test_site_bounds(rng):
    eig = solve(ChainModel(random_params(rng, 1), 4))
    with pytest.raises(ShapeMismatch):
        propagator(eig, 0, 1, [0.0])
    with pytest.raises(ShapeMismatch):
        propagator(eig, 1, 5, [0.0])


def test_divergence_time_helper():
    t = np.array([0.0, 1.0, 2.0])
    assert divergence_time(t, [0, 0, 0], [0, 0.5, 2], 0.1) == 1.0
    assert divergence_time(t, [0, 0, 0], [0, 0, 0], 0.1) == math.inf


def test_k2_divergence_respects_ballistic_bound():
    p = random_params(np.random.default_rng(7), 2)
    n = 16
    site = default_site(p, n)
    series = boundary_divergence(p, n, threshold=1e-3, t_max=60.0, steps=1200)
    distance = min(site - 1, p.k * n - 1 - site)
    assert math.isfinite(series.divergence_time)
    assert series.divergence_time >= 0.5 * distance / (2 * max(abs(d) for d in p.coupling))


def test_unreachable_threshold_and_control(rng):
    p = random_params(rng, 2)
    assert boundary_divergence(p, 6, threshold=2.1, t_max=40.0, steps=200).divergence_time == math.inf
    assert boundary_divergence(p, 6, control=True, t_max=40.0, steps=200).divergence_time == math.inf


def test_short_time_agreement(rng):
    p = random_params(rng, 3)
    horizon = short_time_horizon(p, 16)
    series = boundary_divergence(p, 16, t_max=horizon, steps=64)
    assert np.max(series.abs_diff) <= 1e-6
    assert series.abs_diff[0] == 0.0
    assert len(series.times) == 65


def test_steps_validated(rng):
    with pytest.raises(ShapeMismatch):
        boundary_divergence(random_params(rng, 1), 4, steps=0)
