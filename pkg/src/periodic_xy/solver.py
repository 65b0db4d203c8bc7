"""Closed-form eigensystems of periodic XY chains and rings.

Each solver returns an :class:`EigenSystem` whose lines carry the canonical
(unnormalised) eigenvectors: sine / cosine profiles on the last residue class
and the remaining components from determinant ratios of the blocks H_{i,j}.

Every produced vector is checked against the model matrix. If a determinant
in a denominator is below the degeneracy guard, or the check fails, the
vector is rebuilt from the eigenvector of the reduced Bloch block instead
(``route="bloch"``); that representative is still canonical whenever its last
component is nonzero. Genuine coincidences fall back to the dense oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from periodic_xy.errors import DegenerateParameters, ParameterError, ShapeMismatch
from periodic_xy.linalg import degeneracy_guard, hermitian_eig, hermitian_eigvals_batch
from periodic_xy.model import (
    ChainModel,
    PeriodicParameters,
    RingModel,
    assemble_from_components,
    block_det,
    build_block,
    build_hk,
    cospi,
    frobenius,
    matvec,
    model_matrix,
    sinpi,
    unit_phase,
)

VALIDATE_TOL = 1e-10
CLUSTER_REL = 1e-7
BLOCH_SPLIT_REL = 1e-9

BULK, BOUNDARY, SYMMETRIC = "bulk", "boundary", "symmetric"


@dataclass(frozen=True, eq=False)
class SpectralLine:
    """One eigenvalue with its multiplicity and canonical eigenvector(s).

    ``phase = (num, den)`` records the Bloch phase pi*num/den of the reduced
    block the value came from; ``route`` says how the vectors were obtained.
    """

    value: float
    multiplicity: int
    mode: int
    band: int
    family: str
    origin: str | None
    vectors: tuple[np.ndarray, ...]
    phase: tuple[int, int] | None = None
    route: str = "formula"

    @property
    def label(self) -> str:
        return f"{self.family}:{self.mode}.{self.band}"

    @property
    def canonical(self) -> bool:
        return self.route in ("formula", "bloch")


@dataclass(frozen=True, eq=False)
class EigenSystem:
    model: ChainModel | RingModel
    lines: tuple[SpectralLine, ...]
    method: str = "closed-form"
    notes: tuple[str, ...] = field(default=())

    @property
    def size(self) -> int:
        return self.model.sites

    def values(self) -> np.ndarray:
        """All eigenvalues repeated by multiplicity, ascending."""
        vals = [ln.value for ln in self.lines for _ in range(ln.multiplicity)]
        return np.sort(np.array(vals, dtype=float))

    def matrix(self) -> np.ndarray:
        return model_matrix(self.model)


def _sorted(lines) -> tuple[SpectralLine, ...]:
    return tuple(sorted(lines, key=lambda ln: (ln.value, ln.mode, ln.band)))


def relative_residual(model, lam: float, u: np.ndarray, fro: float | None = None) -> float:
    """||H u - lam u|| / (||H||_F ||u||)."""
    fro = frobenius(model) if fro is None else fro
    nu = float(np.linalg.norm(u))
    if nu == 0.0:
        return math.inf
    r = matvec(model, u) - lam * np.asarray(u)
    return float(np.linalg.norm(r)) / (max(fro, 1e-300) * nu)


def _check(model, lam, vectors, fro) -> bool:
    return all(relative_residual(model, lam, u, fro) <= VALIDATE_TOL for u in vectors)


# ---------------------------------------------------------------------------
# homogeneous models


def homogeneous_chain(omega: float, coupling: float, sites: int, vectors: bool = True) -> EigenSystem:
    if coupling == 0:
        raise ParameterError("coupling must be nonzero")
    n1 = sites + 1
    s = np.arange(1, sites + 1)
    lines = []
    for j in range(1, sites + 1):
        lam = 2 * omega + 2 * coupling * cospi(j, n1)
        u = (np.array([sinpi(j * x, n1) for x in s]),) if vectors else ()
        lines.append(SpectralLine(lam, 1, j, 0, "sine", BULK, u, (j, n1)))
    model = ChainModel(PeriodicParameters((omega,), (coupling,)), sites)
    return EigenSystem(model, _sorted(lines))


def homogeneous_ring(omega: float, coupling: float, sites: int, vectors: bool = True) -> EigenSystem:
    if coupling == 0:
        raise ParameterError("coupling must be nonzero")
    if sites < 2:
        raise ParameterError("ring needs at least two sites")
    n = sites
    s = np.arange(1, n + 1)
    lines = []
    for j in range(n // 2 + 1):
        lam = 2 * omega + 2 * coupling * cospi(2 * j, n)
        if j == 0:
            vecs = (np.ones(n),) if vectors else ()
            lines.append(SpectralLine(lam, 1, 0, 0, "uniform", SYMMETRIC, vecs, (0, n)))
        elif 2 * j == n:
            vecs = (np.where(s % 2 == 1, 1.0, -1.0),) if vectors else ()
            lines.append(SpectralLine(lam, 1, j, 0, "staggered", SYMMETRIC, vecs, (2 * j, n)))
        else:
            vecs = ()
            if vectors:
                vecs = (
                    np.array([cospi(2 * j * x, n) for x in s]),
                    np.array([sinpi(2 * j * x, n) for x in s]),
                )
            lines.append(SpectralLine(lam, 2, j, 0, "cos|sin", BULK, vecs, (2 * j, n)))
    model = RingModel(PeriodicParameters((omega,), (coupling,)), n)
    return EigenSystem(model, _sorted(lines))


# ---------------------------------------------------------------------------
# Bloch-block representatives (shared fallback)


def ring_bloch_vector(params: PeriodicParameters, cells: int, phase: complex, mu) -> np.ndarray:
    """Complex ring vector with components u_(t),s = mu_t q^(s-1)."""
    k = params.k
    powers = np.asarray(phase) ** np.arange(cells)
    comps = [mu[t] * powers for t in range(k)]
    return assemble_from_components(comps, k, k * cells)


def _largest_phase(mu: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(mu)))
    return mu * (abs(mu[i]) / mu[i])


def _ring_from_bloch(params, cells, l, mu, single) -> tuple[tuple[np.ndarray, ...], bool]:
    """Real ring eigenvector(s) in label l from a Bloch-block eigenvector.

    Scaling mu_k to q (or to 1 for the real sectors) reproduces exactly the
    cosine / sine (or uniform / staggered) representatives.
    """
    k = params.k
    q = unit_phase(2 * l, cells)
    mu = np.asarray(mu, dtype=complex)
    canonical = abs(mu[k - 1]) > 1e-8 * np.linalg.norm(mu)
    if canonical:
        mu = mu * ((1.0 if single else q) / mu[k - 1])
    else:
        mu = _largest_phase(mu)
    z = ring_bloch_vector(params, cells, q, mu)
    if single:
        return (z.real.copy(),), canonical
    return (z.real.copy(), z.imag.copy()), canonical


def _chain_from_bloch(params, n, j, mu) -> np.ndarray | None:
    """Sine-type chain eigenvector from the Bloch block at phase pi j / n."""
    k = params.k
    mu = np.asarray(mu, dtype=complex)
    if abs(mu[k - 1]) <= 1e-8 * np.linalg.norm(mu):
        return None
    q = unit_phase(j, n)
    mu = mu * (q / mu[k - 1])
    z = ring_bloch_vector(params, 2 * n, q, mu)
    return z.imag[: k * n - 1].copy()


# ---------------------------------------------------------------------------
# component formulas


def _other_components(params: PeriodicParameters, lam: float, shifted, same) -> list[np.ndarray]:
    """u_(1)..u_(k-1) from u_(k).

    ``shifted`` is u_(k) moved one cell forward (T^t for a ring, R^t for a
    chain) and ``same`` is u_(k) itself (padded by Q^t for a chain).
    """
    k = params.k
    den = block_det(params, 1, k - 1, lam)
    dk = params.d(k)
    sign_k = -1.0 if k % 2 else 1.0
    comps = []
    for j in range(1, k):
        a = params.coupling_product(1, j - 1) * block_det(params, j + 1, k - 1, lam) * dk
        b = sign_k * block_det(params, 1, j - 1, lam) * params.coupling_product(j, k - 1)
        sign_j = -1.0 if j % 2 else 1.0
        comps.append(sign_j / den * (a * shifted + b * same))
    return comps


def _denominator_ok(params, lam) -> bool:
    k = params.k
    if k == 1:
        return True
    det = block_det(params, 1, k - 1, lam)
    return abs(det) > degeneracy_guard(build_block(params, 1, k - 1), lam)


def ring_vector_formula(params: PeriodicParameters, lam: float, uk: np.ndarray) -> np.ndarray:
    """Full ring eigenvector from its last residue component."""
    uk = np.asarray(uk, dtype=float)
    comps = _other_components(params, lam, np.roll(uk, 1), uk)
    return assemble_from_components(comps + [uk], params.k, params.k * len(uk))


def chain_vector_formula(params: PeriodicParameters, lam: float, uk: np.ndarray) -> np.ndarray:
    """Full chain eigenvector (k n - 1 sites) from u_(k) of length n - 1."""
    uk = np.asarray(uk, dtype=float)
    shifted = np.concatenate(([0.0], uk))
    same = np.concatenate((uk, [0.0]))
    comps = _other_components(params, lam, shifted, same)
    n = len(uk) + 1
    return assemble_from_components(comps + [uk], params.k, params.k * n - 1)


# ---------------------------------------------------------------------------
# alternating (period two) models


def _alt_roots(omega1, omega2, d1, d2, num, den) -> tuple[float, float]:
    """Both roots at phase pi*num/den.

    |D1 + D2 q|^2 is summed as (D1 + D2 cos)^2 + (D2 sin)^2, which avoids
    the cancellation of D1^2 + D2^2 + 2 D1 D2 cos near D1 = -D2 cos.
    """
    r = math.hypot(omega1 - omega2, d1 + d2 * cospi(num, den), d2 * sinpi(num, den))
    return omega1 + omega2 - r, omega1 + omega2 + r


def _alt_guard_ok(params, lam) -> bool:
    return abs(lam - 2 * params.omega[0]) > degeneracy_guard(build_block(params, 1, 1), lam)


def alternating_chain(omega1, omega2, d1, d2, n: int, vectors: bool = True) -> EigenSystem:
    """Period-two chain with 2n - 1 sites."""
    if n < 2:
        raise ParameterError("alternating chain needs n >= 2")
    params = PeriodicParameters((omega1, omega2), (d1, d2))
    model = ChainModel(params, 2 * n - 1)
    fro = frobenius(model)
    lines = []
    for j in range(1, n):
        for band, lam in enumerate(_alt_roots(omega1, omega2, d1, d2, j, n)):
            if not vectors:
                lines.append(SpectralLine(lam, 1, j, band, "sine", BULK, (), (j, n)))
                continue
            u2 = np.array([sinpi(j * s, n) for s in range(1, n)])
            vec, route = None, "formula"
            if _alt_guard_ok(params, lam):
                # u_(1) = L_chain^t u_(2) / (lam - 2 omega_1)
                lt = d1 * np.concatenate((u2, [0.0])) + d2 * np.concatenate(([0.0], u2))
                vec = assemble_from_components([lt / (lam - 2 * omega1), u2], 2, 2 * n - 1)
                if not _check(model, lam, [vec], fro):
                    vec = None
            if vec is None:
                dec = hermitian_eig(build_hk(params, unit_phase(j, n)))
                vec = _chain_from_bloch(params, n, j, dec.vectors[:, band])
                route = "bloch"
            lines.append(SpectralLine(lam, 1, j, band, "sine", BULK, (vec,), (j, n), route))
    kern = ()
    if vectors:
        u1 = (-d1 / d2) ** np.arange(n)
        kern = (assemble_from_components([u1, np.zeros(n - 1)], 2, 2 * n - 1),)
    lines.append(SpectralLine(2 * omega1, 1, 0, 0, "kernel", BOUNDARY, kern))
    return EigenSystem(model, _sorted(lines))


def alternating_ring(
    omega1, omega2, d1, d2, n: int, strict: bool = False, vectors: bool = True
) -> EigenSystem:
    """Period-two ring with 2n sites (n cells).

    With ``strict=True`` a root at 2 omega_1 raises DegenerateParameters;
    otherwise the affected vectors come from the Bloch block.
    """
    if n < 2:
        raise ParameterError("alternating ring needs n >= 2")
    params = PeriodicParameters((omega1, omega2), (d1, d2))
    model = RingModel(params, n)
    fro = frobenius(model)
    s = np.arange(1, n + 1)
    lines = []
    notes = []
    for l in range(n // 2 + 1):
        single = l == 0 or 2 * l == n
        if l == 0:
            forms, family = (np.ones(n),), "uniform"
        elif 2 * l == n:
            forms, family = (np.where(s % 2 == 1, 1.0, -1.0),), "staggered"
        else:
            forms = (
                np.array([cospi(2 * l * x, n) for x in s]),
                np.array([sinpi(2 * l * x, n) for x in s]),
            )
            family = "cos|sin"
        origin = SYMMETRIC if single else BULK
        roots = _alt_roots(omega1, omega2, d1, d2, 2 * l, n)
        for band, lam in enumerate(roots):
            vecs, route = None, "formula"
            if not vectors:
                vecs = ()
            elif _alt_guard_ok(params, lam) and roots[0] != roots[1]:
                # u_(1) = L_ring^t u_(2) / (lam - 2 omega_1)
                vecs = tuple(
                    assemble_from_components(
                        [(d1 * u2 + d2 * np.roll(u2, 1)) / (lam - 2 * omega1), u2], 2, 2 * n
                    )
                    for u2 in forms
                )
                if not _check(model, lam, vecs, fro):
                    vecs = None
            elif strict:
                raise DegenerateParameters(
                    f"root {lam!r} at label l={l} coincides with 2*omega_1={2 * omega1!r}"
                )
            if vecs is None:
                dec = hermitian_eig(build_hk(params, unit_phase(2 * l, n)))
                vecs, canonical = _ring_from_bloch(params, n, l, dec.vectors[:, band], single)
                route = "bloch" if canonical else "oracle"
                notes.append(f"l={l} band={band}: vectors from the Bloch block")
            mult = 1 if single else 2
            lines.append(SpectralLine(lam, mult, l, band, family, origin, vecs, (2 * l, n), route))
    return EigenSystem(model, _sorted(lines), notes=tuple(notes))


# ---------------------------------------------------------------------------
# general period k


BATCH = 8192


def _bloch_values(params, nums, den) -> np.ndarray:
    """Eigenvalues of H_k(e^{i pi num/den}) for every num, shape (len(nums), k)."""
    k = params.k
    base = build_block(params, 1, k).to_dense().astype(complex)
    dk = params.d(k)
    out = []
    for start in range(0, len(nums), BATCH):
        chunk = nums[start : start + BATCH]
        q = np.array([unit_phase(num, den) for num in chunk])
        stack = np.repeat(base[None], len(chunk), axis=0)
        stack[:, 0, k - 1] += dk * np.conj(q)
        stack[:, k - 1, 0] += dk * q
        out.append(hermitian_eigvals_batch(stack))
    return np.concatenate(out) if out else np.zeros((0, k))


def _bloch_block(params, num, den):
    dec = hermitian_eig(build_hk(params, unit_phase(num, den)))
    scale = 1.0 + float(np.linalg.norm(build_hk(params, 1.0)))
    gaps = np.diff(dec.values)
    split = np.ones(len(dec.values), dtype=bool)
    for i, g in enumerate(gaps):
        if g <= BLOCH_SPLIT_REL * scale:
            split[i] = split[i + 1] = False
    return dec, split


def periodic_ring(params: PeriodicParameters, cells: int, vectors: bool = True) -> EigenSystem:
    """Ring of k*cells sites: one k x k Bloch block per label l = 0..cells/2."""
    if cells < 2:
        raise ParameterError("ring needs at least two cells")
    m = cells
    model = RingModel(params, m)
    fro = frobenius(model)
    s = np.arange(1, m + 1)
    lines = []
    notes = []
    if not vectors:
        labels = list(range(m // 2 + 1))
        for l, vals in zip(labels, _bloch_values(params, [2 * l for l in labels], m)):
            single = l == 0 or 2 * l == m
            family = "uniform" if l == 0 else "staggered" if single else "cos|sin"
            origin = SYMMETRIC if single else BULK
            for band, lam in enumerate(vals):
                lines.append(SpectralLine(float(lam), 1 if single else 2, l, band, family, origin, (), (2 * l, m)))
        return EigenSystem(model, _sorted(lines))
    for l in range(m // 2 + 1):
        single = l == 0 or 2 * l == m
        if l == 0:
            forms, family = (np.ones(m),), "uniform"
        elif 2 * l == m:
            forms, family = (np.where(s % 2 == 1, 1.0, -1.0),), "staggered"
        else:
            forms = (
                np.array([cospi(2 * l * x, m) for x in s]),
                np.array([sinpi(2 * l * x, m) for x in s]),
            )
            family = "cos|sin"
        dec, split = _bloch_block(params, 2 * l, m)
        for band, lam in enumerate(dec.values):
            lam = float(lam)
            vecs, route = None, "formula"
            if split[band] and _denominator_ok(params, lam):
                vecs = tuple(ring_vector_formula(params, lam, uk) for uk in forms)
                if not _check(model, lam, vecs, fro):
                    vecs = None
            if vecs is None:
                vecs, canonical = _ring_from_bloch(params, m, l, dec.vectors[:, band], single)
                route = "bloch" if canonical and split[band] else "oracle"
                notes.append(f"l={l} band={band}: vectors from the Bloch block")
            mult = 1 if single else 2
            origin = SYMMETRIC if single else BULK
            lines.append(SpectralLine(lam, mult, l, band, family, origin, vecs, (2 * l, m), route))
    return EigenSystem(model, _sorted(lines), notes=tuple(notes))


def _boundary_vector(params, n, lam, phi) -> tuple[np.ndarray, str]:
    """Chain eigenvector for an eigenvalue of H_{1,k-1}: u_(k) = 0."""
    k = params.k
    det2 = block_det(params, 2, k - 1, lam)
    guard2 = degeneracy_guard(build_block(params, 2, k - 1), lam)
    if abs(det2) > guard2:
        sign = 1.0 if (k - 1) % 2 == 0 else -1.0
        kernel = sign * params.coupling_product(1, k - 1) * np.eye(n - 1, n)
        kernel -= det2 * params.d(k) * np.eye(n - 1, n, k=1)
        u1 = np.linalg.svd(kernel)[2][-1]
        u1 = u1 / u1[0]
        comps = [u1]
        for j in range(2, k):
            sign_j = -1.0 if j % 2 == 0 else 1.0
            ratio = sign_j * params.coupling_product(1, j - 1) * block_det(params, j + 1, k - 1, lam)
            comps.append(ratio / det2 * u1)
        comps.append(np.zeros(n - 1))
        return assemble_from_components(comps, k, k * n - 1), "formula"
    # cell amplitudes c_s times the H_{1,k-1} eigenvector, c_{s+1}/c_s fixed by the bond D_k
    ratio = -params.d(k - 1) * phi[-1] / (params.d(k) * phi[0])
    cells = ratio ** np.arange(n) / phi[0]
    comps = [cells * phi[t] for t in range(k - 1)] + [np.zeros(n - 1)]
    return assemble_from_components(comps, k, k * n - 1), "bloch"


def periodic_chain(
    params: PeriodicParameters, n: int, strict: bool = False, vectors: bool = True
) -> EigenSystem:
    """Chain of k*n - 1 sites: k(n-1) bulk lines and k-1 boundary lines."""
    if n < 2:
        raise ParameterError("periodic chain needs n >= 2")
    k = params.k
    model = ChainModel(params, k * n - 1)
    fro = frobenius(model)
    tol = CLUSTER_REL * (1.0 + fro)
    lines = []
    notes = []

    boundary = []
    if k >= 2:
        bdec = hermitian_eig(build_block(params, 1, k - 1).to_dense())
        boundary = [(float(v), bdec.vectors[:, i]) for i, v in enumerate(bdec.values)]

    if not vectors:
        bvals = np.array([b for b, _ in boundary])
        for j, vals in zip(range(1, n), _bloch_values(params, list(range(1, n)), n)):
            for band, lam in enumerate(vals):
                lam = float(lam)
                if strict and len(bvals) and np.min(np.abs(bvals - lam)) <= tol:
                    raise DegenerateParameters(
                        f"bulk root {lam!r} (j={j}) collides with an eigenvalue of H_(1,k-1)"
                    )
                lines.append(SpectralLine(lam, 1, j, band, "sine", BULK, (), (j, n)))
        for band, (lam, _) in enumerate(boundary):
            lines.append(SpectralLine(lam, 1, 0, band, "kernel", BOUNDARY, ()))
        return EigenSystem(model, _sorted(lines))

    suspect = []
    for j in range(1, n):
        uk = np.array([sinpi(j * s, n) for s in range(1, n)])
        dec, split = _bloch_block(params, j, n)
        for band, lam in enumerate(dec.values):
            lam = float(lam)
            collides = any(abs(lam - b) <= tol for b, _ in boundary)
            if collides and strict:
                raise DegenerateParameters(
                    f"bulk root {lam!r} (j={j}) collides with an eigenvalue of H_(1,k-1)"
                )
            vec, route = None, "formula"
            if not collides and split[band] and _denominator_ok(params, lam):
                vec = chain_vector_formula(params, lam, uk)
                if not _check(model, lam, [vec], fro):
                    vec = None
            if vec is None and not collides:
                vec = _chain_from_bloch(params, n, j, dec.vectors[:, band])
                route = "bloch"
                if vec is None or not _check(model, lam, [vec], fro):
                    vec = None
            line = SpectralLine(lam, 1, j, band, "sine", BULK, (vec,), (j, n), route)
            if vec is None:
                suspect.append(len(lines))
            lines.append(line)

    for band, (lam, phi) in enumerate(boundary):
        vec, route = _boundary_vector(params, n, lam, phi)
        if not _check(model, lam, [vec], fro):
            vec = None
        if vec is None:
            suspect.append(len(lines))
        lines.append(SpectralLine(lam, 1, 0, band, "kernel", BOUNDARY, (vec,), None, route))

    if suspect:
        lines = _oracle_vectors(model, lines, suspect)
        notes.append(f"{len(suspect)} vector(s) taken from the dense oracle")
    return EigenSystem(model, _sorted(lines), notes=tuple(notes))


def _oracle_vectors(model, lines, indices) -> list[SpectralLine]:
    """Replace the vectors of ``lines[indices]`` by dense-oracle eigenvectors."""
    dec = hermitian_eig(model_matrix(model))
    used = set()
    out = list(lines)
    for i in sorted(indices, key=lambda i: lines[i].value):
        ln = lines[i]
        order = np.argsort(np.abs(dec.values - ln.value), kind="stable")
        pick = next(int(c) for c in order if int(c) not in used)
        used.add(pick)
        out[i] = SpectralLine(
            ln.value, ln.multiplicity, ln.mode, ln.band, ln.family, ln.origin,
            (dec.vectors[:, pick].real.copy(),), ln.phase, "oracle",
        )
    return out


# ---------------------------------------------------------------------------
# dispatch and reference


def solve(model, strict: bool = False, vectors: bool = True) -> EigenSystem:
    """Closed-form eigensystem using the most specific solver available.

    ``vectors=False`` skips the eigenvectors (lines then hold no vectors).
    """
    p = model.params
    k = p.k
    if isinstance(model, RingModel):
        if k == 1:
            return homogeneous_ring(p.omega[0], p.coupling[0], model.sites, vectors)
        if k == 2:
            return alternating_ring(*p.omega, *p.coupling, model.cells, strict, vectors)
        return periodic_ring(p, model.cells, vectors)
    if k == 1:
        return homogeneous_chain(p.omega[0], p.coupling[0], model.sites, vectors)
    n = model.n
    if n is None or n < 2:
        raise ShapeMismatch(
            f"closed form needs sites = k*n - 1 with n >= 2 (k={k}), got {model.sites}"
        )
    if k == 2:
        return alternating_chain(*p.omega, *p.coupling, n, vectors)
    return periodic_chain(p, n, strict, vectors)


def oracle_eigensystem(model) -> EigenSystem:
    """Dense Jacobi reference; multiplicities from clustering nearby values."""
    h = model_matrix(model)
    dec = hermitian_eig(h)
    tol = CLUSTER_REL * (1.0 + float(np.linalg.norm(h)))
    groups: list[list[int]] = []
    for i, v in enumerate(dec.values):
        if groups and v - dec.values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    lines = []
    for idx, g in enumerate(groups):
        value = float(np.mean(dec.values[g]))
        vecs = tuple(dec.vectors[:, i].real.copy() for i in g)
        lines.append(SpectralLine(value, len(g), idx, 0, "oracle", None, vecs, None, "oracle"))
    return EigenSystem(model, tuple(lines), method="oracle")


def bloch_polynomial_residual(params: PeriodicParameters, lam: float, phase: tuple[int, int]) -> float:
    """det(H_{1,k}-lam) - det(H_{2,k-1}-lam) D_k^2 - (-1)^k 2 D_1..D_k cos(theta)."""
    k = params.k
    lhs = block_det(params, 1, k, lam) - block_det(params, 2, k - 1, lam) * params.d(k) ** 2
    sign = -1.0 if k % 2 else 1.0
    return lhs - sign * 2 * params.coupling_product(1, k) * cospi(*phase)


def bloch_polynomial_scale(params: PeriodicParameters, lam: float) -> float:
    """Magnitude scale for :func:`bloch_polynomial_residual`."""
    w = max(abs(2 * x) for x in params.omega)
    d = max(abs(x) for x in params.coupling)
    return (1.0 + abs(lam) + w + 2 * d) ** params.k


def normalized_basis(system: EigenSystem) -> tuple[np.ndarray, np.ndarray]:
    """(values, orthonormal columns) from the canonical vectors.

    Vectors are normalised and Gram-Schmidt orthogonalised within groups of
    numerically equal eigenvalues.
    """
    fro = float(np.linalg.norm(system.matrix())) if system.size <= 4096 else frobenius(system.model)
    tol = CLUSTER_REL * (1.0 + fro)
    entries = sorted(
        ((ln.value, v) for ln in system.lines for v in ln.vectors), key=lambda e: e[0]
    )
    values = np.array([e[0] for e in entries])
    cols = []
    start = 0
    while start < len(entries):
        stop = start + 1
        while stop < len(entries) and values[stop] - values[stop - 1] <= tol:
            stop += 1
        block = []
        for _, v in entries[start:stop]:
            w = np.asarray(v, dtype=float).copy()
            for b in block:
                w -= (b @ w) * b
            for b in block:
                w -= (b @ w) * b
            w /= np.linalg.norm(w)
            block.append(w)
        cols.extend(block)
        start = stop
    return values, np.column_stack(cols) if cols else np.zeros((0, 0))
