"""Damped Newton iteration for analytic complex residuals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import InadmissibleIterate, SolveReport


@dataclass
class NewtonOptions:
    tol: float = 1e-10
    max_iter: int = 200
    fd_step: float = 1e-7
    max_halvings: int = 30
    restarts: int = 4
    restart_radius: float = 1e-3
    multistart: int = 0
    multistart_radius: float = 0.1
    seed: int | None = 0


def _try(fun, z):
    try:
        r = np.asarray(fun(z), dtype=complex)
    except InadmissibleIterate as exc:
        return None, str(exc)
    if not np.all(np.isfinite(r)):
        return None, "non-finite residual"
    return r, None


def jacobian_fd(fun, z, r0, step):
    """Forward-difference Jacobian; steps backwards if the forward point is rejected."""
    n = len(z)
    J = np.empty((n, n), dtype=complex)
    for j in range(n):
        for h in (step, -step):
            zp = z.copy()
            zp[j] += h
            rp, _ = _try(fun, zp)
            if rp is not None:
                J[:, j] = (rp - r0) / h
                break
        else:
            return None
    return J


def damped_newton(
    fun: Callable[[np.ndarray], np.ndarray],
    z0,
    options: NewtonOptions | None = None,
    *,
    on_iterate: Callable[[np.ndarray], None] | None = None,
) -> SolveReport:
    """Solve ``fun(z) = 0`` from ``z0``.

    Residual functions signal poles or degenerate iterates by raising one of
    the `InadmissibleIterate` errors; the step is then halved, exactly as when
    the residual norm fails to decrease.  A real ``z0`` with a real-valued
    residual keeps every iterate real.
    """
    opts = options or NewtonOptions()
    z0 = np.asarray(z0, dtype=complex).copy()
    diagnostics: list[str] = []

    z = z0
    r, why = _try(fun, z)
    rng = np.random.default_rng(opts.seed)
    attempt = 0
    while r is None and attempt < opts.restarts:
        attempt += 1
        diagnostics.append(f"start rejected ({why}); perturbing start, attempt {attempt}")
        z = z0 + opts.restart_radius * attempt * rng.uniform(-1, 1, size=len(z0))
        r, why = _try(fun, z)
    if r is None:
        diagnostics.append(f"no admissible start found ({why})")
        return SolveReport(z0, np.inf, 0, False, diagnostics=diagnostics)

    norm = np.max(np.abs(r))
    it = 0
    while norm >= opts.tol and it < opts.max_iter:
        it += 1
        J = jacobian_fd(fun, z, r, opts.fd_step)
        if J is None:
            diagnostics.append(f"iteration {it}: Jacobian stencil rejected on all sides")
            break
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            diagnostics.append(f"iteration {it}: singular Jacobian")
            break
        lam = 1.0
        accepted = False
        rejected, last_why = 0, ""
        for _ in range(opts.max_halvings + 1):
            trial = z + lam * step
            rt, why = _try(fun, trial)
            if rt is not None and np.linalg.norm(rt) < np.linalg.norm(r):
                accepted = True
                break
            if rt is None:
                rejected, last_why = rejected + 1, why
            lam /= 2
        if rejected:
            diagnostics.append(f"iteration {it}: {rejected} trial(s) rejected ({last_why})")
        if not accepted:
            diagnostics.append(f"iteration {it}: no decrease after {opts.max_halvings} halvings")
            break
        z, r = trial, rt
        norm = np.max(np.abs(r))
        if on_iterate is not None:
            on_iterate(z)
    return SolveReport(z, float(norm), it, bool(norm < opts.tol), diagnostics=diagnostics)


def solve_with_restarts(fun, z0, options: NewtonOptions | None = None, **kw) -> SolveReport:
    """`damped_newton` plus optional multi-start root enumeration.

    With ``options.multistart > 0`` extra starts are drawn uniformly within
    ``multistart_radius`` of ``z0`` (real perturbations for real starts, complex
    otherwise).  Distinct converged roots are returned in
    ``report.alternatives`` ordered by distance from ``z0``; the primary
    solution is still the one reached from ``z0`` itself.
    """
    opts = options or NewtonOptions()
    z0 = np.asarray(z0, dtype=complex)
    report = damped_newton(fun, z0, opts, **kw)
    if opts.multistart <= 0:
        return report
    rng = np.random.default_rng(opts.seed)
    real_start = np.all(z0.imag == 0)
    roots = [report.solution] if report.converged else []
    for _ in range(opts.multistart):
        pert = rng.uniform(-1, 1, size=len(z0))
        if not real_start:
            pert = pert + 1j * rng.uniform(-1, 1, size=len(z0))
        sub = damped_newton(fun, z0 + opts.multistart_radius * pert, opts, **kw)
        if sub.converged and not any(np.max(np.abs(sub.solution - q)) < 1e-6 for q in roots):
            roots.append(sub.solution)
    roots.sort(key=lambda q: float(np.linalg.norm(q - z0)))
    report.alternatives = roots
    report.diagnostics.append(f"multistart: {len(roots)} distinct root(s)")
    return report
