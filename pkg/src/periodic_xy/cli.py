"""periodic-xy command line: spectrum, eigvecs, compare, dynamics, verify.

Exit codes: 0 success, 1 solver or threshold failure, 2 invalid input.
Every error is a single stderr line starting with ``error:``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from periodic_xy.compare import compare_models, normalize_report
from periodic_xy.dynamics import boundary_divergence
from periodic_xy.errors import DimensionMismatch, ParameterError, ShapeMismatch, SpectralError
from periodic_xy.model import DENSE_LIMIT, ChainModel, RingModel, load_params
from periodic_xy.solver import normalized_basis, oracle_eigensystem, solve
from periodic_xy.verify import run_verify

CLOSED_LIMIT = 10**6
VALIDATION_ERRORS = (ParameterError, ShapeMismatch, DimensionMismatch)


class UsageError(Exception):
    """Bad command-line input detected after parsing; exits 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"error: {message}\n")
        sys.exit(2)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _positive(name: str, value, allow_zero: bool = False):
    if value is None:
        return
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise UsageError(f"--{name} must be {'non-negative' if allow_zero else 'positive'}, got {value}")


def _write_csv(out, header, rows):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(r if isinstance(r, str) else fmt(r) for r in row) + "\n")


def _build_model(args, params):
    if args.model == "chain":
        if args.sites is None:
            raise UsageError("--model chain needs --sites")
        _positive("sites", args.sites)
        return ChainModel(params, args.sites)
    if args.cells is None:
        raise UsageError("--model ring needs --cells")
    if args.cells < 2:
        raise UsageError(f"--cells must be at least 2, got {args.cells}")
    return RingModel(params, args.cells)


def _check_closed_shape(model):
    k = model.params.k
    if isinstance(model, ChainModel) and k > 1 and (model.n is None or model.n < 2):
        raise UsageError(f"N must be {k}n-1 with n >= 2 for the closed form, got N={model.sites}")


def _check_size(model, method: str, vectors: bool):
    if method in ("oracle", "both") or vectors:
        if model.sites > DENSE_LIMIT:
            raise UsageError(f"N={model.sites} exceeds the dense limit {DENSE_LIMIT}")
    elif model.sites > CLOSED_LIMIT:
        raise UsageError(f"N={model.sites} exceeds the closed-form limit {CLOSED_LIMIT}")


def _line_deltas(system, oracle_values):
    """Per line, the largest gap to the oracle values at the same sorted slots."""
    slots = sorted(
        ((ln.value, i) for i, ln in enumerate(system.lines) for _ in range(ln.multiplicity)),
        key=lambda e: e[0],
    )
    deltas = [0.0] * len(system.lines)
    for (value, i), ref in zip(slots, oracle_values):
        deltas[i] = max(deltas[i], abs(value - ref))
    return deltas


def cmd_spectrum(args, out) -> int:
    params = load_params(args.params)
    model = _build_model(args, params)
    if args.method != "oracle":
        _check_closed_shape(model)
    _check_size(model, args.method, vectors=False)
    if args.method == "oracle":
        system = oracle_eigensystem(model)
        deltas = None
    else:
        system = solve(model, vectors=False)
        deltas = _line_deltas(system, oracle_eigensystem(model).values()) if args.method == "both" else None
    rows = []
    for i, ln in enumerate(system.lines, start=1):
        row = {
            "index": i,
            "value": ln.value,
            "multiplicity": ln.multiplicity,
            "label": ln.label,
            "origin": ln.origin or "",
            "route": ln.route,
        }
        if deltas is not None:
            row["delta"] = deltas[i - 1]
        rows.append(row)
    if args.format == "json":
        doc = {"model": args.model, "sites": model.sites, "method": args.method, "lines": rows}
        if deltas is not None:
            doc["max_delta"] = max(deltas, default=0.0)
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        header = ["index", "value", "multiplicity", "label", "origin", "route"]
        if deltas is not None:
            header.append("delta")
        _write_csv(
            out,
            header,
            ([str(r["index"]), r["value"], str(r["multiplicity"]), r["label"], r["origin"], r["route"]]
             + ([r["delta"]] if deltas is not None else []) for r in rows),
        )
    return 0


def _select_line(system, args):
    lines = system.lines
    if args.index is not None:
        if not 1 <= args.index <= len(lines):
            raise UsageError(f"--index must be in 1..{len(lines)}, got {args.index}")
        return args.index - 1
    hits = [i for i, ln in enumerate(lines) if ln.mode == args.mode and (args.band is None or ln.band == args.band)]
    if not hits:
        raise UsageError(f"no line with mode {args.mode}" + ("" if args.band is None else f" band {args.band}"))
    if len(hits) > 1:
        raise UsageError(f"mode {args.mode} has {len(hits)} bands; pass --band")
    return hits[0]


def cmd_eigvecs(args, out) -> int:
    if (args.index is None) == (args.mode is None):
        raise UsageError("pass exactly one of --index or --mode")
    params = load_params(args.params)
    model = _build_model(args, params)
    _check_closed_shape(model)
    _check_size(model, "closed", vectors=True)
    system = solve(model)
    idx = _select_line(system, args)
    line = system.lines[idx]
    vecs = [np.asarray(v) for v in line.vectors]
    if args.orthonormal:
        _, basis = normalized_basis(system)
        # lines are value-sorted and the basis keeps that order
        start = sum(ln.multiplicity for ln in system.lines[:idx])
        vecs = [basis[:, start + c] for c in range(line.multiplicity)]
    complex_out = any(np.iscomplexobj(v) and np.any(np.imag(v) != 0) for v in vecs)
    if args.format == "json":
        doc = {"index": idx + 1, "value": line.value, "label": line.label, "origin": line.origin,
               "form": "orthonormal" if args.orthonormal else "canonical"}
        if complex_out:
            doc["vectors"] = [{"re": np.real(v).tolist(), "im": np.imag(v).tolist()} for v in vecs]
        else:
            doc["vectors"] = [np.real(v).tolist() for v in vecs]
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    header = ["site"]
    for c in range(1, len(vecs) + 1):
        header += [f"re_v{c}", f"im_v{c}"] if complex_out else [f"v{c}"]
    rows = []
    for s in range(model.sites):
        row = [str(s + 1)]
        for v in vecs:
            row += [np.real(v[s]), np.imag(v[s])] if complex_out else [np.real(v[s])]
        rows.append(row)
    _write_csv(out, header, rows)
    return 0


def cmd_compare(args, out) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    _positive("samples", args.samples)
    params = load_params(args.params)
    if 2 * params.k * args.n > DENSE_LIMIT:
        raise UsageError(f"ring of {2 * params.k * args.n} sites exceeds the dense limit {DENSE_LIMIT}")
    report = compare_models(params, args.n, samples=args.samples, seed=args.seed)
    if args.format == "json":
        out.write(json.dumps(normalize_report(report), indent=2) + "\n")
    else:
        _write_csv(
            out,
            ["value", "chain", "ring", "projection_err", "scale"],
            ([p.value, p.chain_line.label, p.ring_line.label, p.projection_err, p.scale] for p in report.common),
        )
    common, chain_only, ring_only = report.counts()
    sys.stderr.write(
        f"common={common} chain_only={chain_only} ring_only={ring_only} "
        f"identity_max_rel_err={fmt(report.identity_max_rel_err)} "
        f"projection_max_err={fmt(report.projection_max_err)}\n"
    )
    return 0 if report.passed() else 1


def cmd_dynamics(args, out) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    _positive("tmax", args.tmax, allow_zero=True)
    _positive("steps", args.steps)
    _positive("threshold", args.threshold)
    params = load_params(args.params)
    sites = params.k * args.n - 1
    if 2 * params.k * args.n > DENSE_LIMIT:
        raise UsageError(f"ring of {2 * params.k * args.n} sites exceeds the dense limit {DENSE_LIMIT}")
    if args.site is not None and not 1 <= args.site <= sites:
        raise UsageError(f"--site must be in 1..{sites}, got {args.site}")
    series = boundary_divergence(
        params, args.n, p=args.site, threshold=args.threshold, t_max=args.tmax, steps=args.steps, control=args.control
    )
    _write_csv(
        out,
        ["t", "re_chain", "im_chain", "re_ring", "im_ring", "abs_diff"],
        zip(series.times, series.chain_amp.real, series.chain_amp.imag,
            series.ring_amp.real, series.ring_amp.imag, series.abs_diff),
    )
    sys.stderr.write(f"divergence_time={fmt(series.divergence_time)}\n")
    return 0


def cmd_verify(args, out) -> int:
    _positive("trials", args.trials)
    if args.kmax < 1:
        raise UsageError(f"--kmax must be at least 1, got {args.kmax}")
    lines, ok = run_verify(seed=args.seed, trials=args.trials, kmax=args.kmax, inject_fault=args.inject_fault)
    out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="periodic-xy", description="Closed-form spectra of periodic XY chains and rings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_flags(p):
        p.add_argument("--model", choices=["chain", "ring"], default="chain")
        p.add_argument("--params", required=True, help="JSON file with k, omega, coupling")
        size = p.add_mutually_exclusive_group()
        size.add_argument("--sites", type=int, help="chain length N")
        size.add_argument("--cells", type=int, help="ring cells m (k*m spins)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("spectrum", help="eigenvalues with multiplicity and labels")
    model_flags(p)
    p.add_argument("--method", choices=["closed", "oracle", "both"], default="closed")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("eigvecs", help="eigenvector(s) of one spectral line")
    model_flags(p)
    p.add_argument("--index", type=int, help="1-based line index in spectrum order")
    p.add_argument("--mode", type=int)
    p.add_argument("--band", type=int)
    form = p.add_mutually_exclusive_group()
    form.add_argument("--canonical", action="store_true", help="closed-form scaling (default)")
    form.add_argument("--orthonormal", action="store_true", help="unit-norm, orthogonal within the line")
    p.set_defaults(func=cmd_eigvecs)

    p = sub.add_parser("compare", help="chain (k n - 1 sites) versus ring (2 k n sites)")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dynamics", help="return amplitude on chain and doubled ring")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--site", type=int)
    p.add_argument("--tmax", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=512)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--control", action="store_true", help="chain against itself")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("verify", help="seeded randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, *VALIDATION_ERRORS) as exc:
        sys.stderr.write(f"error: {' '.join(str(exc).split())}\n")
        return 2
    except SpectralError as exc:
        sys.stderr.write(f"error: {' '.join(str(exc).split())}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
