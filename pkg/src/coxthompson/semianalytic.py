"""Matrix-inversion-free Cox-Thompson equations for single-parity channel sets.

When every physical l has the same parity, the asymptotic expansion functions
reduce to ``a_L cos x`` (even) or ``b_L sin x`` (odd) with coefficients given
by a Cauchy-type closed form, and the equations for the shifted momenta L
contain only products and tan/cot of Lπ/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DegeneracyError,
    ParityError,
    PhaseShiftSet,
    PoleError,
    SolveReport,
    channel_parity,
    check_admissible,
    momentum_squares,
)
from .newton import NewtonOptions, solve_with_restarts

POLE_GUARD = 1e-4
COS_GUARD = 1e-12
MAX_CHANNELS = 12


@dataclass
class CauchyCoefficients:
    """Asymptotic coefficients A_L(x→∞) = a_L cos x + b_L sin x, indexed like T."""

    T: np.ndarray
    a: np.ndarray
    b: np.ndarray


def cauchy_solve(xs, ys) -> np.ndarray:
    """Closed-form solution of ``sum_i a_i / (y_j - x_i) = -1`` for all j.

    ``a_k = prod_i (x_k - y_i) / prod_{i != k} (x_k - x_i)``.
    """
    xs = np.asarray(xs, dtype=complex)
    ys = np.asarray(ys, dtype=complex)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-d and of equal length")
    dx = xs[:, None] - xs[None, :]
    np.fill_diagonal(dx, 1.0)
    if len(xs) > 1 and np.min(np.abs(dx[~np.eye(len(xs), dtype=bool)])) < 1e-12:
        raise DegeneracyError("coincident x nodes")
    dxy = xs[:, None] - ys[None, :]
    if np.min(np.abs(dxy)) < 1e-12:
        raise PoleError("an x node coincides with a y node")
    return np.prod(dxy, axis=1) / np.prod(dx, axis=1)


def _pure_parity(ls, want: str):
    p = channel_parity(ls)
    if p != want:
        raise ParityError(f"expected {want} channels, got {p} set {list(ls)}")


def _weights(T, ls, skip_index=None):
    """prod_{l'} (L(L+1) - l'(l'+1)) / prod_{L' != L} (L(L+1) - L'(L'+1)) per L.

    With ``skip_index`` the numerator omits that channel (returns a matrix
    over (l, L) when skip_index == 'each').
    """
    Lsq = momentum_squares(T)
    lsq = momentum_squares(ls)
    dLL = Lsq[:, None] - Lsq[None, :]
    np.fill_diagonal(dLL, 1.0)
    denom = np.prod(dLL, axis=1)
    num_terms = Lsq[:, None] - lsq[None, :]  # (L, l')
    if skip_index is None:
        return np.prod(num_terms, axis=1) / denom
    n = len(ls)
    out = np.empty((n, len(T)), dtype=complex)
    for i in range(n):
        keep = np.arange(n) != i
        out[i] = np.prod(num_terms[:, keep], axis=1) / denom
    return out


def _guard_trig_poles(T, parity: str):
    # tan(Lπ/2) diverges at odd L, cot(Lπ/2) at even L
    shift = 1.0 if parity == "even" else 0.0
    k = np.round((T.real - shift) / 2)
    dist = np.abs(T - (2 * k + shift))
    if np.min(dist) < POLE_GUARD:
        kind = "tan" if parity == "even" else "cot"
        raise PoleError(f"L within {POLE_GUARD:g} of a {kind}(Lπ/2) pole")


def coefficients_even(T, ls) -> CauchyCoefficients:
    ls = list(ls)
    _pure_parity(ls, "even")
    T = check_admissible(T, ls)
    c = np.cos(T * np.pi / 2)
    if np.min(np.abs(c)) < POLE_GUARD:
        raise PoleError("cos(Lπ/2) vanishes for an element of T")
    a = _weights(T, ls) / c
    return CauchyCoefficients(T, a, np.zeros_like(a))


def coefficients_odd(T, ls) -> CauchyCoefficients:
    ls = list(ls)
    _pure_parity(ls, "odd")
    T = check_admissible(T, ls)
    s = np.sin(T * np.pi / 2)
    if np.min(np.abs(s)) < POLE_GUARD:
        raise PoleError("sin(Lπ/2) vanishes for an element of T")
    b = _weights(T, ls) / s
    return CauchyCoefficients(T, np.zeros_like(b), b)


def asymptotic_coefficients(T, ls) -> CauchyCoefficients:
    """Dispatch to `coefficients_even` or `coefficients_odd` by channel parity."""
    p = channel_parity(ls)
    if p == "even":
        return coefficients_even(T, ls)
    if p == "odd":
        return coefficients_odd(T, ls)
    raise ParityError("asymptotic coefficients have a closed form only for single-parity sets")


def tan_delta(deltas) -> np.ndarray:
    d = np.asarray(deltas, dtype=complex)
    c = np.cos(d)
    if np.min(np.abs(c)) < COS_GUARD:
        raise PoleError("cos(delta) vanishes")
    return np.sin(d) / c


def residual_even(T, ls, deltas) -> np.ndarray:
    """RHS of the even semi-analytic equations minus tan δ_l, one entry per channel."""
    ls = list(ls)
    _pure_parity(ls, "even")
    T = check_admissible(T, ls)
    _guard_trig_poles(T, "even")
    W = _weights(T, ls, skip_index="each")
    rhs = -W @ np.tan(T * np.pi / 2)
    return rhs - tan_delta(deltas)


def residual_odd(T, ls, deltas) -> np.ndarray:
    """RHS of the odd semi-analytic equations minus tan δ_l."""
    ls = list(ls)
    _pure_parity(ls, "odd")
    T = check_admissible(T, ls)
    _guard_trig_poles(T, "odd")
    W = _weights(T, ls, skip_index="each")
    rhs = W @ (1 / np.tan(T * np.pi / 2))
    return rhs - tan_delta(deltas)


def residual_parity(T, ls, deltas) -> np.ndarray:
    p = channel_parity(ls)
    if p == "even":
        return residual_even(T, ls, deltas)
    if p == "odd":
        return residual_odd(T, ls, deltas)
    raise ParityError("semi-analytic equations need a single-parity channel set")


def initial_guess(ls, deltas) -> np.ndarray:
    """Per-channel N=1 closed form L = l - 2δ_l/π."""
    return np.asarray(ls, float) - 2 * np.asarray(deltas, dtype=complex) / np.pi


def normalization(delta) -> complex:
    """Asymptotic normalization B_l = 1/cos δ_l."""
    c = np.cos(complex(delta))
    if abs(c) < COS_GUARD:
        raise PoleError("cos(delta) vanishes")
    return 1 / c


def solve_parity(
    phases: PhaseShiftSet,
    options: NewtonOptions | None = None,
    T0=None,
) -> SolveReport:
    """Solve the semi-analytic equations for T on a single-parity channel set.

    Starts from `initial_guess` unless ``T0`` is given.  Real phase shifts
    with a real start stay on the real axis.
    """
    ls = phases.ls
    parity = channel_parity(ls)
    if parity == "mixed":
        raise ParityError("semi-analytic solve requires single-parity input; use generalct")
    if len(ls) > MAX_CHANNELS:
        raise ValueError(f"at most {MAX_CHANNELS} channels supported")
    deltas = phases.deltas
    if np.all(deltas.imag == 0):
        deltas = deltas.real.astype(complex)
    start = initial_guess(ls, deltas) if T0 is None else np.asarray(T0, complex)
    if np.all(start.imag == 0) and np.all(deltas.imag == 0):
        fun = lambda T: residual_parity(T.real, ls, deltas).real + 0j  # noqa: E731
    else:
        fun = lambda T: residual_parity(T, ls, deltas)  # noqa: E731
    report = solve_with_restarts(fun, start, options)
    report.ls = tuple(ls)
    report.method = f"semianalytic-{parity}"
    return report
