"""Command-line interface: ``ctinv {invert,synth,check,combine}``.

Exit codes: 0 success, 1 check threshold exceeded, 2 usage/input error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import forward, generalct, reconstruct
from .core import CoxThompsonError, ParityError, PhaseShiftSet
from .io import FileFormatError, PhaseShiftFile, PotentialFile, SpinOrbitFile, read_text, write_text
from .newton import NewtonOptions
from .pipeline import SolveFailure, invert

EXIT_OK, EXIT_THRESHOLD, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
# forward-solver accuracy floor: |δ| below this is written as exactly zero
SYNTH_FLOOR = 1e-8


class UsageError(Exception):
    pass


def _parse_channels(spec: str) -> list[int]:
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out or sorted(set(out)) != out:
        raise UsageError(f"bad channel list {spec!r}")
    return out


def _parse_init(spec: str | None):
    if spec is None:
        return None
    try:
        return np.array([complex(s.strip().replace(" ", "")) for s in spec.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad --init list: {exc}") from exc


def cmd_invert(args) -> int:
    data = PhaseShiftFile.loads(read_text(args.input), degrees=args.degrees)
    phases = data.to_phase_shifts()
    grid = reconstruct.make_grid(args.grid_min, args.grid_max, args.grid_n)
    opts = NewtonOptions(tol=args.tol, max_iter=args.max_iter, multistart=args.multistart,
                         seed=args.seed)
    T0 = _parse_init(args.init)
    if T0 is not None and len(T0) != len(phases):
        raise UsageError("--init needs one value per channel")
    report_path = args.report or f"{args.output}.report.json"
    try:
        result = invert(phases, args.mode, grid, opts, args.form, T0)
    except ParityError as exc:
        raise UsageError(str(exc)) from exc
    except SolveFailure as exc:
        payload = {"mode": args.mode, "error": str(exc),
                   "solves": [r.to_dict() for r in exc.reports]}
        write_text(report_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"solver failure: {exc}; best iterate written to {report_path}", file=sys.stderr)
        return EXIT_SOLVER
    curve = result.curve.with_origin(0.0)
    curve.k = data.meta.get("k")
    curve.energy = data.meta.get("energy")
    meta = {
        "generator": "ctinv invert",
        "mode": args.mode,
        "form": args.form,
        "label": data.meta.get("label"),
        "source": str(args.input),
        "T": [[float(z.real), float(z.imag)] for r in result.reports for z in r.solution],
    }
    meta = {k: v for k, v in meta.items() if v is not None}
    write_text(args.output, PotentialFile.from_curve(curve, meta).dumps())
    write_text(report_path, json.dumps(result.report_dict(), indent=2, sort_keys=True) + "\n")
    for rep in result.reports:
        T = ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in rep.solution)
        print(f"{rep.method}: l={list(rep.ls)} T=[{T}] residual={rep.residual_norm:.2e} "
              f"iterations={rep.iterations}")
    return EXIT_OK


def _model(args):
    if args.model == "gaussian":
        if args.width <= 0:
            raise UsageError("gaussian width must be positive")
        return forward.gaussian(args.amplitude, args.width), {
            "amplitude": args.amplitude, "width": args.width}
    if args.model == "woods-saxon":
        if args.radius <= 0 or args.diffuseness <= 0:
            raise UsageError("woods-saxon radius and diffuseness must be positive")
        return forward.woods_saxon(args.depth, args.radius, args.diffuseness), {
            "depth": args.depth, "radius": args.radius, "diffuseness": args.diffuseness}
    if args.model == "square-well":
        if args.radius <= 0:
            raise UsageError("square-well radius must be positive")
        return forward.square_well(args.depth, args.radius), {
            "depth": args.depth, "radius": args.radius}
    raise UsageError(f"unknown model {args.model!r}")


def cmd_synth(args) -> int:
    q, params = _model(args)
    ls = _parse_channels(args.channels)
    step = forward.MAX_STEP / 10 if args.model == "square-well" else forward.MAX_STEP
    res = forward.phase_shifts(q, ls, x_max=args.x_max, step=step, tail="off")
    # roundoff-level imaginary parts from real potentials are dropped
    deltas = res.deltas.real + 1j * np.where(np.abs(res.deltas.imag) < 1e-12, 0, res.deltas.imag)
    deltas = np.where(np.abs(deltas) < SYNTH_FLOOR, 0, deltas)
    meta = {"generator": "ctinv synth", "model": args.model, "params": params,
            "label": args.label or args.model}
    if args.k is not None:
        meta["k"] = args.k
    if args.energy is not None:
        meta["energy"] = args.energy
    out = PhaseShiftFile.from_phase_shifts(PhaseShiftSet(tuple(ls), deltas), meta)
    write_text(args.output, out.dumps())
    return EXIT_OK


def check_errors(curve, reference: PhaseShiftSet):
    """Per-channel |δ - δ_ref| (real parts) and |η - η_ref|."""
    res = forward.phase_shifts(curve, reference.ls)
    d_err = np.abs(res.deltas.real - reference.deltas.real)
    e_err = np.abs(res.etas - reference.etas)
    return res, d_err, e_err


def cmd_check(args) -> int:
    pot = PotentialFile.loads(read_text(args.potential))
    ref = PhaseShiftFile.loads(read_text(args.reference), degrees=args.degrees)
    if args.channels:
        wanted = _parse_channels(args.channels)
        if not set(wanted) <= set(ref.ls):
            raise UsageError("requested channels missing from the reference file")
    phases = ref.to_phase_shifts()
    _, d_err, e_err = check_errors(pot.to_curve(), phases)
    print(f"{'l':>3} {'Delta_l':>12} {'Xi_l':>12}")
    for l, d, e in zip(phases.ls, d_err, e_err):
        print(f"{l:>3} {d:12.6f} {e:12.6f}")
    worst = max(float(d_err.max()), float(e_err.max()))
    print(f"max Delta={d_err.max():.6f} max Xi={e_err.max():.6f} threshold={args.threshold:g}")
    return EXIT_OK if worst <= args.threshold else EXIT_THRESHOLD


def cmd_combine(args) -> int:
    src = SpinOrbitFile.loads(read_text(args.input), degrees=args.degrees)
    deltas = np.array([generalct.combine_spin_orbit(p, m, l)
                       for l, p, m in zip(src.ls, src.plus, src.minus)])
    meta = dict(src.meta)
    meta["generator"] = "ctinv combine"
    out = PhaseShiftFile.from_phase_shifts(PhaseShiftSet(tuple(src.ls), deltas), meta)
    write_text(args.output, out.dumps())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctinv", description="Cox-Thompson fixed-energy inversion")
    sub = p.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invert", help="phase shifts -> potential")
    inv.add_argument("input")
    inv.add_argument("-o", "--output", required=True)
    inv.add_argument("--report", help="JSON solve report (default: OUTPUT.report.json)")
    inv.add_argument("--mode", choices=["semianalytic", "general", "approximate"],
                     default="general")
    inv.add_argument("--form", choices=["tangent", "smatrix"], default="tangent")
    inv.add_argument("--grid-min", type=float, default=reconstruct.DEFAULT_X_MIN)
    inv.add_argument("--grid-max", type=float, default=reconstruct.DEFAULT_X_MAX)
    inv.add_argument("--grid-n", type=int, default=reconstruct.DEFAULT_N)
    inv.add_argument("--tol", type=float, default=1e-10)
    inv.add_argument("--max-iter", type=int, default=200)
    inv.add_argument("--multistart", type=int, default=0)
    inv.add_argument("--seed", type=int, default=0)
    inv.add_argument("--init", help="starting momenta, comma-separated complex values "
                                    "in channel order (regression mode)")
    inv.add_argument("--degrees", action="store_true")
    inv.set_defaults(func=cmd_invert)

    syn = sub.add_parser("synth", help="forward-solve a model potential")
    syn.add_argument("-o", "--output", required=True)
    syn.add_argument("--model", choices=["gaussian", "woods-saxon", "square-well"],
                     default="gaussian")
    syn.add_argument("--amplitude", type=float, default=-1.0)
    syn.add_argument("--width", type=float, default=2.0)
    syn.add_argument("--depth", type=float, default=1.0)
    syn.add_argument("--radius", type=float, default=2.0)
    syn.add_argument("--diffuseness", type=float, default=0.5)
    syn.add_argument("--channels", default="0-4")
    syn.add_argument("--x-max", type=float, default=forward.DEFAULT_X_MAX)
    syn.add_argument("--k", type=float)
    syn.add_argument("--energy", type=float)
    syn.add_argument("--label")
    syn.set_defaults(func=cmd_synth)

    chk = sub.add_parser("check", help="recompute phase shifts of a potential")
    chk.add_argument("potential")
    chk.add_argument("reference")
    chk.add_argument("--threshold", type=float, default=1e-3)
    chk.add_argument("--channels")
    chk.add_argument("--degrees", action="store_true")
    chk.set_defaults(func=cmd_check)

    com = sub.add_parser("combine", help="combine spin-orbit phase shifts")
    com.add_argument("input")
    com.add_argument("-o", "--output", required=True)
    com.add_argument("--degrees", action="store_true")
    com.set_defaults(func=cmd_combine)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CoxThompsonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
