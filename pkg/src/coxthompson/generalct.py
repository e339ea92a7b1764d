"""General Cox-Thompson equations for arbitrary channel sets, and the
parity-split approximation built on the semi-analytic solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from . import semianalytic
from .core import (
    ConditioningError,
    ParityError,
    PhaseShiftSet,
    PoleError,
    SolveReport,
    check_admissible,
    momentum_squares,
)
from .newton import NewtonOptions, solve_with_restarts

Form = Literal["tangent", "smatrix"]
MAX_CONDITION = 1e12


@dataclass
class MMatrixPair:
    m_sin: np.ndarray
    m_cos: np.ndarray


@dataclass
class ReactancePair:
    k_plus: np.ndarray
    k_minus: np.ndarray
    condition: float
    solve_residual: float


def build_m_matrices(ls, T) -> MMatrixPair:
    """M_sin and M_cos with rows over physical l and columns over shifted L."""
    T = check_admissible(T, ls)
    l = np.asarray(ls, float)[:, None]
    L = T[None, :]
    denom = momentum_squares(L) - momentum_squares(l)
    arg = (l - L) * np.pi / 2
    return MMatrixPair(np.sin(arg) / denom, np.cos(arg) / denom)


def condition_1norm(lu_piv, anorm: float) -> float:
    """LAPACK 1-norm condition estimate from an existing LU factorization."""
    lu, _ = lu_piv
    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond == 0:
        return np.inf
    return 1.0 / rcond


def reactance(ls, T) -> ReactancePair:
    """Shifted reactance elements K_l^± = sum_{L,l'} M_sin[l,L] (M_cos^{-1})[L,l'] e^{±i(l-l')π/2}.

    ``X = M_sin M_cos^{-1}`` is obtained from the transposed system
    ``M_cos^T X^T = M_sin^T``; no inverse is formed.
    """
    m = build_m_matrices(ls, T)
    A = m.m_cos.T
    if not np.all(np.isfinite(A)):
        raise ConditioningError("non-finite M_cos", np.inf)
    lu_piv = lu_factor(A, check_finite=False)
    cond = condition_1norm(lu_piv, float(np.max(np.sum(np.abs(A), axis=0))))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(f"M_cos condition estimate {cond:.3g} too large", cond)
    Xt = lu_solve(lu_piv, m.m_sin.T, check_finite=False)
    resid = float(np.max(np.abs(A @ Xt - m.m_sin.T)))
    X = Xt.T
    l = np.asarray(ls, float)
    phase = np.exp(1j * (l[:, None] - l[None, :]) * np.pi / 2)
    k_plus = np.sum(X * phase, axis=1)
    k_minus = np.sum(X * np.conj(phase), axis=1)
    return ReactancePair(k_plus, k_minus, cond, resid)


def residual_general(ls, T, deltas, form: Form = "tangent", *, _conds=None) -> np.ndarray:
    """LHS minus RHS of the general equations in tangent or S-matrix form."""
    K = reactance(ls, T)
    if _conds is not None:
        _conds.append(K.condition)
    deltas = np.asarray(deltas, dtype=complex)
    if form == "tangent":
        den = 2 + 1j * (K.k_plus - K.k_minus)
        if np.min(np.abs(den)) < 1e-12:
            raise PoleError("tangent-form denominator vanishes")
        return semianalytic.tan_delta(deltas) - (K.k_plus + K.k_minus) / den
    if form == "smatrix":
        den = 1 - 1j * K.k_minus
        if np.min(np.abs(den)) < 1e-12:
            raise PoleError("S-matrix denominator 1 - iK^- vanishes")
        return np.exp(2j * deltas) - (1 + 1j * K.k_plus) / den
    raise ValueError(f"unknown residual form {form!r}")


def solve_general(
    phases: PhaseShiftSet,
    options: NewtonOptions | None = None,
    T0=None,
    form: Form = "tangent",
) -> SolveReport:
    """Solve the coupled general equations for T.

    ``T0`` defaults to the per-channel closed form l - 2δ_l/π; passing
    published momenta here is the regression mode.
    """
    ls = phases.ls
    if len(ls) > semianalytic.MAX_CHANNELS:
        raise ValueError(f"at most {semianalytic.MAX_CHANNELS} channels supported")
    deltas = phases.deltas
    start = semianalytic.initial_guess(ls, deltas) if T0 is None else np.asarray(T0, complex)
    conds: list[float] = []
    real_mode = np.all(start.imag == 0) and np.all(deltas.imag == 0)

    def fun(T):
        r = residual_general(ls, T.real if real_mode else T, deltas, form, _conds=conds)
        return r.real + 0j if real_mode else r

    report = solve_with_restarts(fun, start, options)
    report.ls = tuple(ls)
    report.method = f"general-{form}"
    # Condition estimates along the accepted path only: re-evaluate at the solution.
    try:
        report.condition_history = [reactance(ls, report.solution).condition]
    except (ConditioningError, PoleError) as exc:
        report.diagnostics.append(f"condition at solution unavailable: {exc}")
    if conds:
        report.diagnostics.append(f"max M_cos condition seen during solve: {max(conds):.3g}")
    return report


def solve_approximate(
    phases: PhaseShiftSet,
    options: NewtonOptions | None = None,
    T0_even=None,
    T0_odd=None,
) -> tuple[SolveReport | None, SolveReport | None]:
    """Independent semi-analytic solves on the even and odd halves of S.

    Either half may be absent, in which case its report is ``None``.
    """
    even = phases.subset("even")
    odd = phases.subset("odd")
    rep_e = semianalytic.solve_parity(even, options, T0_even) if even is not None else None
    rep_o = semianalytic.solve_parity(odd, options, T0_odd) if odd is not None else None
    return rep_e, rep_o


def require_mixed(phases: PhaseShiftSet):
    if phases.parity != "mixed":
        raise ParityError("approximate method expects both even and odd channels")


def combine_spin_orbit(delta_plus, delta_minus, l: int):
    """Weak spin-orbit combination ((l+1) δ⁺ + l δ⁻) / (2l + 1)."""
    if l < 0:
        raise ValueError("l must be non-negative")
    return ((l + 1) * delta_plus + l * delta_minus) / (2 * l + 1)
