from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from periodic_xy.model import PeriodicParameters

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {msg}")


def random_params(rng: np.random.Generator, k: int) -> PeriodicParameters:
    omega = rng.uniform(-1.0, 1.0, k)
    coupling = rng.choice([-1.0, 1.0], k) * rng.uniform(0.5, 2.0, k)
    return PeriodicParameters(tuple(omega), tuple(coupling))


finite = st.floats(-1.0, 1.0, allow_nan=False)
coupling_mag = st.floats(0.5, 2.0, allow_nan=False)


@st.composite
def params_strategy(draw, kmin: int = 1, kmax: int = 5):
    k = draw(st.integers(kmin, kmax))
    omega = draw(st.lists(finite, min_size=k, max_size=k))
    mags = draw(st.lists(coupling_mag, min_size=k, max_size=k))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=k, max_size=k))
    return PeriodicParameters(tuple(omega), tuple(m * s for m, s in zip(mags, signs)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def param_file(tmp_path):
    def write(omega, coupling, name="params.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"k": len(omega), "omega": list(omega), "coupling": list(coupling)}))
        return str(path)

    return write
