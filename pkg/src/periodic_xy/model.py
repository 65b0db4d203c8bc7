"""Periodic parameters and every matrix built from them.

Sites, cells and residues are 1-based in the public API to match the usual
physics labelling; arrays underneath are ordinary 0-based numpy vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from periodic_xy.errors import DimensionMismatch, ParameterError, ShapeMismatch
from periodic_xy.linalg import SymTridiag, tridiag_char

DENSE_LIMIT = 4096


@dataclass(frozen=True)
class PeriodicParameters:
    """Larmor frequencies and couplings repeated with period k."""

    omega: tuple[float, ...]
    coupling: tuple[float, ...]

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega)
        coupling = tuple(float(d) for d in self.coupling)
        if len(omega) == 0:
            raise ParameterError("period k must be at least 1")
        if len(omega) != len(coupling):
            raise ParameterError(
                f"omega has {len(omega)} entries but coupling has {len(coupling)}"
            )
        for i, d in enumerate(coupling):
            if d == 0.0 or not math.isfinite(d):
                raise ParameterError(f"coupling[{i}] must be a nonzero finite number, got {d!r}")
        for i, w in enumerate(omega):
            if not math.isfinite(w):
                raise ParameterError(f"omega[{i}] must be finite, got {w!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "coupling", coupling)

    @property
    def k(self) -> int:
        return len(self.omega)

    def w(self, i: int) -> float:
        """omega_i with the index taken cyclically (1-based)."""
        return self.omega[(i - 1) % self.k]

    def d(self, i: int) -> float:
        """D_i with the index taken cyclically (1-based)."""
        return self.coupling[(i - 1) % self.k]

    def coupling_product(self, i: int, j: int) -> float:
        """D_i * ... * D_j; 1 when j < i."""
        out = 1.0
        for s in range(i, j + 1):
            out *= self.d(s)
        return out

    def rotated(self, shift: int = 1) -> "PeriodicParameters":
        """Parameters relabelled to start at site 1 + shift."""
        s = shift % self.k
        return PeriodicParameters(self.omega[s:] + self.omega[:s], self.coupling[s:] + self.coupling[:s])

    def to_dict(self) -> dict:
        return {"k": self.k, "omega": list(self.omega), "coupling": list(self.coupling)}

    @classmethod
    def from_dict(cls, data: dict) -> "PeriodicParameters":
        if not isinstance(data, dict):
            raise ParameterError("parameter file must hold a JSON object")
        for key in ("k", "omega", "coupling"):
            if key not in data:
                raise ParameterError(f"parameter file is missing '{key}'")
        k = data["k"]
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ParameterError(f"'k' must be a positive integer, got {k!r}")
        omega, coupling = data["omega"], data["coupling"]
        if not isinstance(omega, list) or len(omega) != k:
            raise ParameterError(f"'omega' must be a list of k={k} numbers")
        if not isinstance(coupling, list) or len(coupling) != k:
            raise ParameterError(f"'coupling' must be a list of k={k} numbers")
        for name, seq in (("omega", omega), ("coupling", coupling)):
            for i, x in enumerate(seq):
                if not isinstance(x, (int, float)) or isinstance(x, bool):
                    raise ParameterError(f"{name}[{i}] is not a number: {x!r}")
        return cls(tuple(omega), tuple(coupling))


def load_params(path) -> PeriodicParameters:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read parameter file {path}: {exc}") from exc
    return PeriodicParameters.from_dict(data)


@dataclass(frozen=True)
class ChainModel:
    """Open chain with ``sites`` spins."""

    params: PeriodicParameters
    sites: int

    def __post_init__(self):
        if self.sites < 1:
            raise ParameterError(f"chain needs at least one site, got {self.sites}")

    @property
    def n(self) -> int | None:
        """Number of cells when sites = k*n - 1, else None."""
        n, rem = divmod(self.sites + 1, self.params.k)
        return n if rem == 0 else None

    @property
    def size(self) -> int:
        return self.sites


@dataclass(frozen=True)
class RingModel:
    """Closed ring of ``cells`` unit cells, i.e. k*cells spins."""

    params: PeriodicParameters
    cells: int

    def __post_init__(self):
        if self.cells < 2:
            raise ParameterError(f"ring needs at least two cells, got {self.cells}")

    @property
    def sites(self) -> int:
        return self.params.k * self.cells

    @property
    def size(self) -> int:
        return self.sites


def build_chain(model: ChainModel) -> SymTridiag:
    p, n = model.params, model.sites
    diag = np.array([2.0 * p.w(i) for i in range(1, n + 1)])
    off = np.array([p.d(i) for i in range(1, n)])
    return SymTridiag(diag, off)


def build_ring(model: RingModel) -> np.ndarray:
    """Dense ring matrix: the chain of the same length plus corners D_k.

    For two sites the corner coincides with the single bond and the two add.
    """
    n = model.sites
    if n > DENSE_LIMIT:
        raise ShapeMismatch(f"dense ring limited to {DENSE_LIMIT} sites, got {n}")
    m = build_chain(ChainModel(model.params, n)).to_dense()
    dk = model.params.d(model.params.k)
    m[0, n - 1] += dk
    m[n - 1, 0] += dk
    return m


def model_matrix(model) -> np.ndarray:
    if isinstance(model, RingModel):
        return build_ring(model)
    if model.sites > DENSE_LIMIT:
        raise ShapeMismatch(f"dense chain limited to {DENSE_LIMIT} sites, got {model.sites}")
    return build_chain(model).to_dense()


def matvec(model, v: np.ndarray) -> np.ndarray:
    """H v for a chain or ring without forming the dense matrix."""
    v = np.asarray(v)
    n = model.sites
    if len(v) != n:
        raise ShapeMismatch(f"vector of length {len(v)} for a {n}-site model")
    out = build_chain(ChainModel(model.params, n)).matvec(v)
    if isinstance(model, RingModel):
        dk = model.params.d(model.params.k)
        out[0] += dk * v[n - 1]
        out[n - 1] += dk * v[0]
    return out


def frobenius(model) -> float:
    t = build_chain(ChainModel(model.params, model.sites))
    fro2 = t.frobenius() ** 2
    if isinstance(model, RingModel):
        dk = model.params.d(model.params.k)
        if model.sites == 2:
            fro2 += 2 * ((t.offdiag[0] + dk) ** 2 - t.offdiag[0] ** 2)
        else:
            fro2 += 2 * dk**2
    return math.sqrt(fro2)


def build_block(params: PeriodicParameters, i: int, j: int) -> SymTridiag:
    """H_{i,j}: tridiagonal with 2*omega_i..2*omega_j and D_i..D_{j-1}.

    ``j == i - 1`` is the empty matrix.
    """
    if i < 1 or j < i - 1:
        raise ShapeMismatch(f"invalid block indices ({i}, {j})")
    diag = np.array([2.0 * params.w(s) for s in range(i, j + 1)])
    off = np.array([params.d(s) for s in range(i, j)])
    return SymTridiag(diag, off)


def block_det(params: PeriodicParameters, i: int, j: int, lam: float) -> float:
    """det(H_{i,j} - lam I) with det = 1 at size 0 and det = 0 at size -1.

    The size -1 value keeps the continuant recurrence consistent, which the
    k = 1 case needs for H_{2,0}.
    """
    if j == i - 2:
        return 0.0
    return tridiag_char(build_block(params, i, j), lam)


def build_hk(params: PeriodicParameters, q: complex) -> np.ndarray:
    """Reduced k x k Bloch block with corner phases q^{-1} D_k and q D_k.

    For k = 1 both corners land on the diagonal, giving 2 omega + 2 D cos(arg q).
    """
    k = params.k
    q = complex(q)
    h = build_block(params, 1, k).to_dense().astype(complex)
    dk = params.d(k)
    h[0, k - 1] += dk * q.conjugate()
    h[k - 1, 0] += dk * q
    return h


def unit_phase(num: int, den: int) -> complex:
    """e^{i pi num/den} with exact values at the real points."""
    r = num % (2 * den)
    if r == 0:
        return 1.0 + 0.0j
    if r == den:
        return -1.0 + 0.0j
    return complex(cospi(num, den), sinpi(num, den))


def sinpi(num: int, den: int) -> float:
    """sin(pi * num / den), exactly zero at integer multiples of pi."""
    r = num % (2 * den)
    if r == 0 or r == den:
        return 0.0
    return math.sin(math.pi * (r / den))


def cospi(num: int, den: int) -> float:
    r = num % (2 * den)
    if r == 0:
        return 1.0
    if r == den:
        return -1.0
    if 2 * r == den or 2 * r == 3 * den:
        return 0.0
    return math.cos(math.pi * (r / den))


def extract_component(u, j: int, k: int) -> np.ndarray:
    """u_(j) = (u_j, u_{j+k}, ...), 1-based residue j."""
    if not 1 <= j <= k:
        raise ShapeMismatch(f"residue {j} outside 1..{k}")
    return np.asarray(u)[j - 1 :: k]


def assemble_from_components(components, k: int, n: int) -> np.ndarray:
    """Interleave components u_(1)..u_(k) back into a length-n vector."""
    if len(components) != k:
        raise DimensionMismatch(f"expected {k} components, got {len(components)}")
    comps = [np.asarray(c) for c in components]
    dtype = np.result_type(*comps) if comps else float
    out = np.zeros(n, dtype=dtype)
    for j, c in enumerate(comps, start=1):
        expected = len(range(j - 1, n, k))
        if len(c) != expected:
            raise DimensionMismatch(f"component {j} has {len(c)} entries, expected {expected}")
        out[j - 1 :: k] = c
    return out


def shift_matrix_apply(v) -> np.ndarray:
    """T_N v, i.e. (T v)_i = v_{i+1} cyclically."""
    return np.roll(np.asarray(v), -1)


def shift_transpose_apply(v) -> np.ndarray:
    """T_N^t v, i.e. (T^t v)_i = v_{i-1} cyclically."""
    return np.roll(np.asarray(v), 1)


def shift_matrix(n: int) -> np.ndarray:
    return np.roll(np.eye(n), 1, axis=1)


def l_chain(d1: float, d2: float, n: int) -> np.ndarray:
    """(n-1) x n map with D1 on the diagonal and D2 just above it."""
    m = np.zeros((n - 1, n))
    m[np.arange(n - 1), np.arange(n - 1)] = d1
    m[np.arange(n - 1), np.arange(1, n)] = d2
    return m


def l_ring(d1: float, d2: float, n: int) -> np.ndarray:
    """n x n cyclic version of :func:`l_chain` (D2 wraps to the corner)."""
    m = np.zeros((n, n))
    idx = np.arange(n)
    m[idx, idx] += d1
    m[idx, (idx + 1) % n] += d2
    return m


def q_chain(n: int) -> np.ndarray:
    """Top-left (n-1) x n corner of the identity."""
    return np.eye(n - 1, n)


def r_chain(n: int) -> np.ndarray:
    """Top-left (n-1) x n corner of the shift T_n."""
    return np.eye(n - 1, n, k=1)
