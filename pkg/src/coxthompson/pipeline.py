"""End-to-end inversion: phase shifts -> shifted momenta -> potential."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import generalct, reconstruct, semianalytic
from .core import ParityError, PhaseShiftSet, SolveReport
from .newton import NewtonOptions

Mode = Literal["semianalytic", "general", "approximate"]
# T is placed this far below S when every phase shift vanishes (T -> S limit).
ZERO_OFFSET = 1e-7
# Phase shifts below this are indistinguishable from zero for the solvers.
ZERO_PHASE = 1e-8


class SolveFailure(RuntimeError):
    def __init__(self, message: str, reports: list[SolveReport]):
        super().__init__(message)
        self.reports = reports


@dataclass
class Inversion:
    mode: str
    curve: reconstruct.PotentialCurve
    reports: list[SolveReport] = field(default_factory=list)
    flagged_points: int = 0

    def report_dict(self) -> dict:
        return {
            "mode": self.mode,
            "flagged_grid_points": int(self.flagged_points),
            "solves": [r.to_dict() for r in self.reports],
        }


def _zero_report(phases: PhaseShiftSet, method: str) -> SolveReport:
    T = np.asarray(phases.ls, float) - ZERO_OFFSET + 0j
    return SolveReport(T, 0.0, 0, True, tuple(phases.ls), method,
                       [f"all |phase shifts| < {ZERO_PHASE:g}: T taken at the S - {ZERO_OFFSET:g} limit"])


def _solve_block(phases, method, solver, options, T0):
    if np.max(np.abs(phases.deltas)) < ZERO_PHASE:
        return _zero_report(phases, method)
    return solver(phases, options, T0)


def invert(
    phases: PhaseShiftSet,
    mode: Mode = "general",
    grid=None,
    options: NewtonOptions | None = None,
    form: generalct.Form = "tangent",
    T0=None,
) -> Inversion:
    """Run one of the three inversion pipelines.

    ``T0`` (optional) holds starting momenta in channel order; the approximate
    mode splits it by parity.  Raises `ParityError` for a mode/input mismatch
    and `SolveFailure` when a nonlinear solve does not converge.
    """
    x = reconstruct.make_grid() if grid is None else np.asarray(grid, float)
    T0 = None if T0 is None else np.asarray(T0, complex)

    if mode == "semianalytic":
        if phases.parity == "mixed":
            raise ParityError("semianalytic mode needs single-parity input")
        reports = [_solve_block(phases, f"semianalytic-{phases.parity}",
                                semianalytic.solve_parity, options, T0)]
        blocks = [(phases.ls, reports[0])]
    elif mode == "general":
        rep = _solve_block(phases, f"general-{form}",
                           lambda p, o, t: generalct.solve_general(p, o, t, form), options, T0)
        reports = [rep]
        blocks = [(phases.ls, rep)]
    elif mode == "approximate":
        generalct.require_mixed(phases)
        reports, blocks = [], []
        for parity in ("even", "odd"):
            half = phases.subset(parity)
            idx = [i for i, l in enumerate(phases.ls) if l % 2 == (parity == "odd")]
            t0 = None if T0 is None else T0[idx]
            rep = _solve_block(half, f"semianalytic-{parity}", semianalytic.solve_parity,
                               options, t0)
            reports.append(rep)
            blocks.append((half.ls, rep))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    failed = [r for r in reports if not r.converged]
    if failed:
        raise SolveFailure(f"{len(failed)} solve(s) did not converge", reports)

    q = np.zeros(len(x), complex)
    flagged = 0
    for ls, rep in blocks:
        curve, table = reconstruct.reconstruct_potential(rep.solution, ls, x)
        q += curve.q
        flagged += int(table.flagged.sum())
    curve = reconstruct.PotentialCurve(x, q)
    return Inversion(mode, curve, reports, flagged)
