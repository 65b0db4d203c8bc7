"""Dense and tridiagonal linear-algebra kernels.

Everything here is self-contained: the Hermitian eigensolver is a cyclic
Jacobi method (round-robin ordering, so each step rotates n/2 disjoint pairs
at once with numpy) and serves as the brute-force reference for the
closed-form solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from periodic_xy.errors import NoConvergence, NonHermitianInput, ShapeMismatch, SingularShift

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-14
GUARD_REL = 1e-10

_BIG = 1e150
_SMALL = 1e-150


@dataclass(frozen=True, eq=False)
class SymTridiag:
    """Real symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float).reshape(-1)
        e = np.asarray(self.offdiag, dtype=float).reshape(-1)
        if len(d) == 0 and len(e) == 0:
            pass
        elif len(e) != len(d) - 1:
            raise ShapeMismatch(f"offdiag has length {len(e)}, expected {max(len(d) - 1, 0)}")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def order(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        p = self.order
        m = np.zeros((p, p))
        if p:
            m[np.arange(p), np.arange(p)] = self.diag
            m[np.arange(p - 1), np.arange(1, p)] = self.offdiag
            m[np.arange(1, p), np.arange(p - 1)] = self.offdiag
        return m

    def block(self, i: int, j: int) -> "SymTridiag":
        """Principal sub-block on rows/columns i..j (1-based, inclusive).

        ``j == i - 1`` gives the empty matrix.
        """
        if j < i - 1 or i < 1 or j > self.order:
            raise ShapeMismatch(f"invalid block ({i}, {j}) of order-{self.order} matrix")
        if j < i:
            return SymTridiag(np.zeros(0), np.zeros(0))
        return SymTridiag(self.diag[i - 1 : j], self.offdiag[i - 1 : j - 1])

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def frobenius(self) -> float:
        return math.sqrt(float(np.sum(self.diag**2) + 2 * np.sum(self.offdiag**2)))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray

    def residual(self, m: np.ndarray) -> float:
        """Largest ``||M v - lam v||`` over all stored pairs."""
        r = m @ self.vectors - self.vectors * self.values
        return float(np.max(np.linalg.norm(r, axis=0))) if len(self.values) else 0.0


def _char_scaled(diag, offdiag, lam: float) -> tuple[float, int]:
    """Continuant recurrence for det(T - lam I) as ``mantissa * 2**exponent``."""
    p_prev, p = 0.0, 1.0
    exponent = 0
    for s in range(len(diag)):
        e2 = offdiag[s - 1] ** 2 if s else 0.0
        p_prev, p = p, (diag[s] - lam) * p - e2 * p_prev
        big = max(abs(p), abs(p_prev))
        if big > _BIG or 0.0 < big < _SMALL:
            shift = math.frexp(big)[1]
            p = math.ldexp(p, -shift)
            p_prev = math.ldexp(p_prev, -shift)
            exponent += shift
    return p, exponent


def tridiag_char(t: SymTridiag, lam: float) -> float:
    """det(T - lam I) by the three-term recurrence; 1 for the empty matrix."""
    mant, exponent = _char_scaled(t.diag, t.offdiag, float(lam))
    try:
        return math.ldexp(mant, exponent)
    except OverflowError:
        return math.copysign(math.inf, mant)


def tridiag_slogdet(t: SymTridiag, lam: float) -> tuple[float, float]:
    """(sign, log|det(T - lam I)|), safe for orders where the value overflows."""
    mant, exponent = _char_scaled(t.diag, t.offdiag, float(lam))
    if mant == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, mant), math.log(abs(mant)) + exponent * math.log(2.0)


def degeneracy_guard(t: SymTridiag, lam: float) -> float:
    """Threshold below which |det(T - lam I)| is treated as singular.

    1e-10 * (1+|lam|)^p * prod_i max(1, |row_i|_1) for an order-p block.
    """
    p = t.order
    if p == 0:
        return 0.0
    rows = np.abs(t.diag).copy()
    rows[:-1] += np.abs(t.offdiag)
    rows[1:] += np.abs(t.offdiag)
    return GUARD_REL * (1.0 + abs(lam)) ** p * float(np.prod(np.maximum(1.0, rows)))


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Pairings of 0..n-1 so that each round holds disjoint pairs (circle method)."""
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = [(a, b) for a, b in pairs if a < n and b < n]
        if pairs:
            ps = np.array([min(a, b) for a, b in pairs])
            qs = np.array([max(a, b) for a, b in pairs])
            rounds.append((ps, qs))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eig(m, tol: float = 1e-12) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Real symmetric input stays real. Eigenvalues come back ascending with
    orthonormal eigenvector columns.

    Raises NonHermitianInput when ``max|M - M^H| > tol * max(1, ||M||_F)`` and
    NoConvergence after JACOBI_MAX_SWEEPS sweeps.
    """
    a = np.array(m, dtype=complex if np.iscomplexobj(m) else float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    fro = float(np.linalg.norm(a))
    asym = float(np.max(np.abs(a - a.conj().T))) if n else 0.0
    if asym > tol * max(1.0, fro):
        raise NonHermitianInput(f"asymmetry {asym:.3e} exceeds tolerance")
    a = 0.5 * (a + a.conj().T)
    if np.iscomplexobj(a) and not np.any(a.imag):
        a = a.real.copy()
    v = np.eye(n, dtype=a.dtype)
    target = JACOBI_OFF_TOL * fro
    rounds = _round_robin(n) if n > 1 else ()

    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")
        for ps, qs in rounds:
            apq = a[ps, qs]
            mag = np.abs(apq)
            live = mag > 0.0
            if not np.any(live):
                continue
            app = a[ps, ps].real
            aqq = a[qs, qs].real
            safe = np.where(live, mag, 1.0)
            with np.errstate(over="ignore"):
                theta = (aqq - app) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # phase that makes the (p, q) entry real and non-negative
            ph = np.where(live, np.conj(apq) / safe, 1.0)
            g11, g12, g21, g22 = c, s, -s * ph, c * ph

            colp, colq = a[:, ps].copy(), a[:, qs]
            a[:, ps] = colp * g11 + colq * g21
            a[:, qs] = colp * g12 + colq * g22
            rowp, rowq = a[ps, :].copy(), a[qs, :]
            cg = np.conj
            a[ps, :] = cg(g11)[:, None] * rowp + cg(g21)[:, None] * rowq
            a[qs, :] = cg(g12)[:, None] * rowp + cg(g22)[:, None] * rowq
            a[ps, qs] = 0.0
            a[qs, ps] = 0.0
            vp, vq = v[:, ps].copy(), v[:, qs]
            v[:, ps] = vp * g11 + vq * g21
            v[:, qs] = vp * g12 + vq * g22
        sweeps += 1

    values = np.diagonal(a).real.copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], v[:, order])


def hermitian_eigvals_batch(stack) -> np.ndarray:
    """Ascending eigenvalues of a stack (B, n, n) of Hermitian matrices.

    Same round-robin Jacobi as :func:`hermitian_eig`, rotating every matrix
    of the stack at once; meant for many small blocks. Input is assumed
    Hermitian (it is symmetrised, not checked).
    """
    a = np.array(stack, dtype=complex if np.iscomplexobj(stack) else float)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ShapeMismatch(f"expected a (B, n, n) stack, got shape {a.shape}")
    n = a.shape[1]
    a = 0.5 * (a + np.conj(np.swapaxes(a, 1, 2)))
    target = JACOBI_OFF_TOL * np.linalg.norm(a, axis=(1, 2))
    rounds = _round_robin(n) if n > 1 else ()
    diag = np.arange(n)

    def off(x):
        y = x.copy()
        y[:, diag, diag] = 0.0
        return np.linalg.norm(y, axis=(1, 2))

    sweeps = 0
    while n > 1 and np.any(off(a) > target):
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NoConvergence(f"batched Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")
        for ps, qs in rounds:
            apq = a[:, ps, qs]
            mag = np.abs(apq)
            live = mag > 0.0
            if not np.any(live):
                continue
            app = a[:, ps, ps].real
            aqq = a[:, qs, qs].real
            safe = np.where(live, mag, 1.0)
            with np.errstate(over="ignore"):
                theta = (aqq - app) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            ph = np.where(live, np.conj(apq) / safe, 1.0)
            g11, g12, g21, g22 = c, s, -s * ph, c * ph

            colp, colq = a[:, :, ps].copy(), a[:, :, qs]
            a[:, :, ps] = colp * g11[:, None, :] + colq * g21[:, None, :]
            a[:, :, qs] = colp * g12[:, None, :] + colq * g22[:, None, :]
            rowp, rowq = a[:, ps, :].copy(), a[:, qs, :]
            a[:, ps, :] = np.conj(g11)[:, :, None] * rowp + np.conj(g21)[:, :, None] * rowq
            a[:, qs, :] = np.conj(g12)[:, :, None] * rowp + np.conj(g22)[:, :, None] * rowq
            a[:, ps, qs] = 0.0
            a[:, qs, ps] = 0.0
        sweeps += 1
    return np.sort(a[:, diag, diag].real, axis=1)


def inverse_tridiag_entry(t: SymTridiag, lam: float, row: int, col: int) -> float:
    """Entry (row, col) of (T - lam I)^{-1} (1-based) from principal minors.

    Off-diagonal entries use the product of the couplings between the two
    indices times the leading minor before and the trailing minor after them.
    """
    p = t.order
    if not (1 <= row <= p and 1 <= col <= p):
        raise ShapeMismatch(f"index ({row}, {col}) outside order-{p} matrix")
    den = tridiag_char(t, lam)
    if abs(den) <= degeneracy_guard(t, lam):
        raise SingularShift(f"|det(T - lam I)| = {abs(den):.3e} at lam={lam!r}")
    lo, hi = min(row, col), max(row, col)
    lead = tridiag_char(t.block(1, lo - 1), lam)
    trail = tridiag_char(t.block(hi + 1, p), lam)
    couplings = float(np.prod(t.offdiag[lo - 1 : hi - 1]))
    sign = -1.0 if (lo + hi) % 2 else 1.0
    return sign * lead * couplings * trail / den
