"""Riccati-Bessel functions of complex order on the positive real axis.

    u_λ(x) = sqrt(πx/2) J_{λ+1/2}(x),    v_λ(x) = sqrt(πx/2) Y_{λ+1/2}(x)

so that u_0 = sin x and v_0 = -cos x.  Small arguments use the ascending
power series (summed in extended precision to absorb the cancellation between
terms), large arguments the Hankel asymptotic expansion.  In the series region
Y is obtained from the reflection formula.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.special import rgamma, yv, yvp

__all__ = [
    "FunctionValue",
    "SpecialFunctionRangeError",
    "MAX_IMAG_ORDER",
    "riccati_j",
    "riccati_y",
    "riccati_pair",
    "wronskian",
    "asymptotic_u",
]

MAX_IMAG_ORDER = 50.0
# Series is used for x <= max(SERIES_CUTOFF, 2|nu|); beyond, Hankel's expansion.
SERIES_CUTOFF = 17.0
# |nu - round(nu)| below this triggers the reflection-formula degeneracy guard.
INTEGER_GUARD = 1e-6
INTEGER_STEP = 1e-3

_LD = np.clongdouble
_SQRT_HALF_PI = np.sqrt(np.pi / 2)


class SpecialFunctionRangeError(ArithmeticError):
    """Requested order or argument lies outside the supported envelope."""


class FunctionValue(NamedTuple):
    f: np.ndarray | complex
    df: np.ndarray | complex


def _check_inputs(order, x):
    lam = complex(order)
    if not (np.isfinite(lam.real) and np.isfinite(lam.imag)):
        raise SpecialFunctionRangeError(f"order {order!r} is not finite")
    if abs(lam.imag) > MAX_IMAG_ORDER:
        raise SpecialFunctionRangeError(
            f"|Im order| = {abs(lam.imag):g} exceeds supported envelope {MAX_IMAG_ORDER:g}"
        )
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa <= 0):
        raise SpecialFunctionRangeError("argument must be finite and strictly positive")
    return lam, xa


def _finite_or_raise(arr, what):
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionRangeError(f"{what} overflowed for the requested order/argument")
    return arr


def _series_riccati_j(nu: complex, x: np.ndarray):
    """sqrt(πx/2) J_nu(x) and its x-derivative from the ascending series.

    Terms are c_k x^{2k+nu+1/2}; the derivative is taken term by term.
    """
    nu_ld = _LD(nu)
    # Start the Gamma recurrence where Re(nu+k+1) >= 1 and walk both ways, so a
    # single double-precision rgamma value is the only rounded factor.
    k_start = max(0, int(np.ceil(-nu.real)))
    n_terms = int(np.max(x)) + 40 + k_start
    rg = np.empty(n_terms, dtype=_LD)
    rg[k_start] = _LD(complex(rgamma(nu + k_start + 1)))
    for k in range(k_start + 1, n_terms):
        rg[k] = rg[k - 1] / (nu_ld + k)
    for k in range(k_start - 1, -1, -1):
        rg[k] = rg[k + 1] * (nu_ld + k + 1)

    xl = x.astype(np.longdouble)
    z = -(xl * xl) / 4
    s = np.zeros(x.shape, dtype=_LD)
    ds = np.zeros(x.shape, dtype=_LD)
    power = np.ones(x.shape, dtype=np.longdouble)  # z^k / k!
    for k in range(n_terms):
        term = power * rg[k]
        s += term
        ds += term * (2 * k + nu_ld + _LD(0.5))
        power = power * z / (k + 1)
    # prefactor sqrt(π/2) x^{nu+1/2} / 2^nu
    log_pref = (nu_ld + _LD(0.5)) * np.log(xl) - nu_ld * np.log(np.longdouble(2))
    pref = np.exp(log_pref) * np.longdouble(_SQRT_HALF_PI)
    f = pref * s
    df = pref * ds / xl
    return f.astype(complex), df.astype(complex)


def _hankel_pq(nu: complex, x: np.ndarray):
    """Hankel asymptotic sums P, Q and their x-derivatives, optimally truncated."""
    mu = 4 * nu * nu
    P = np.ones(x.shape, dtype=complex)
    Q = np.zeros(x.shape, dtype=complex)
    dP = np.zeros(x.shape, dtype=complex)
    dQ = np.zeros(x.shape, dtype=complex)
    coef = np.ones(x.shape, dtype=complex)  # a_k(nu) / x^k
    prev = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        coef = coef * (mu - (2 * k - 1) ** 2) / (k * 8 * x)
        mag = np.abs(coef)
        # early terms may grow while (2k-1)^2 < |4 nu^2|; truncate only after that
        if (2 * k - 1) ** 2 > abs(mu):
            active &= mag < prev
        if not active.any():
            break
        prev = np.where(active, mag, prev)
        term = np.where(active, coef, 0)
        sign = 1 if (k // 2) % 2 == 0 else -1
        # d/dx of a_k x^{-k} is -k a_k x^{-k-1}
        if k % 2 == 0:
            P = P + sign * term
            dP = dP - sign * k * term / x
        else:
            Q = Q + sign * term
            dQ = dQ - sign * k * term / x
        if np.all(~active | (mag < 1e-17)):
            break
    return P, Q, dP, dQ


def _asymptotic_pair(lam: complex, x: np.ndarray):
    P, Q, dP, dQ = _hankel_pq(lam + 0.5, x)
    theta = x - lam * np.pi / 2
    s, c = np.sin(theta), np.cos(theta)
    u = P * s + Q * c
    du = dP * s + P * c + dQ * c - Q * s
    v = -P * c + Q * s
    dv = -dP * c + P * s + dQ * s + Q * c
    return u, du, v, dv


def _series_y(nu: complex, x: np.ndarray):
    """sqrt(πx/2) Y_nu via reflection, with the near-integer guard.

    Within ``INTEGER_GUARD`` of an integer n the reflection formula is 0/0.
    There Y_n and Y_n' come from scipy and the small offset nu - n is added
    to first order, with dY/dnu from a central difference of the reflection
    formula at n ± ``INTEGER_STEP``.
    """
    dist = nu - round(nu.real)
    if abs(dist) < INTEGER_GUARD:
        n = round(nu.real)
        pref = np.sqrt(np.pi * x / 2)
        y, dy = yv(n, x), yvp(n, x)
        f, df = pref * y, pref * (dy + y / (2 * x))
        if dist == 0:
            return f.astype(complex), df.astype(complex)
        h = INTEGER_STEP
        fp, dp = _reflection_y(n + h, x)
        fm, dm = _reflection_y(n - h, x)
        return f + dist * (fp - fm) / (2 * h), df + dist * (dp - dm) / (2 * h)
    return _reflection_y(nu, x)


def _reflection_y(nu: complex, x: np.ndarray):
    fj, dj = _series_riccati_j(nu, x)
    fm, dm = _series_riccati_j(-nu, x)
    c = np.cos(nu * np.pi)
    s = np.sin(nu * np.pi)
    return (fj * c - fm) / s, (dj * c - dm) / s


def _series_mask(lam: complex, x: np.ndarray) -> np.ndarray:
    return x <= max(SERIES_CUTOFF, 2 * abs(lam + 0.5))


def _evaluate(order, x, want_u: bool, want_v: bool):
    lam, xa = _check_inputs(order, x)
    flat = np.atleast_1d(xa).ravel()
    mask = _series_mask(lam, flat)
    u = np.empty(flat.shape, complex)
    du = np.empty(flat.shape, complex)
    v = np.empty(flat.shape, complex)
    dv = np.empty(flat.shape, complex)
    nu = lam + 0.5
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if mask.any():
            xs = flat[mask]
            if want_u:
                u[mask], du[mask] = _series_riccati_j(nu, xs)
            if want_v:
                v[mask], dv[mask] = _series_y(nu, xs)
        if (~mask).any():
            au, adu, av, adv = _asymptotic_pair(lam, flat[~mask])
            u[~mask], du[~mask], v[~mask], dv[~mask] = au, adu, av, adv
    shape = xa.shape
    out = []
    if want_u:
        out.append(FunctionValue(_unshape(_finite_or_raise(u, "u"), shape),
                                 _unshape(_finite_or_raise(du, "u'"), shape)))
    if want_v:
        out.append(FunctionValue(_unshape(_finite_or_raise(v, "v"), shape),
                                 _unshape(_finite_or_raise(dv, "v'"), shape)))
    return out


def _unshape(arr, shape):
    if shape == ():
        return complex(arr[0])
    return arr.reshape(shape)


def riccati_j(order, x) -> FunctionValue:
    """Regular Riccati-Bessel function u_λ(x) and its derivative.

    Parameters
    ----------
    order : complex
        Order λ; the Bessel order is λ + 1/2.
    x : float or array_like
        Strictly positive arguments.

    Returns
    -------
    FunctionValue
        ``(f, df)``; scalars for scalar ``x``, arrays otherwise.

    Raises
    ------
    SpecialFunctionRangeError
        If the order is outside the supported envelope or the result overflows.
    """
    return _evaluate(order, x, True, False)[0]


def riccati_y(order, x) -> FunctionValue:
    """Irregular Riccati-Bessel function v_λ(x) and its derivative (v_0 = -cos x)."""
    return _evaluate(order, x, False, True)[0]


def riccati_pair(order, x) -> tuple[FunctionValue, FunctionValue]:
    """Both u_λ and v_λ in one call."""
    u, v = _evaluate(order, x, True, True)
    return u, v


def wronskian(a, b, x):
    """W[u_a, v_b](x) = u_a v_b' - u_a' v_b."""
    u = riccati_j(a, x)
    v = riccati_y(b, x)
    return u.f * v.df - u.df * v.f


def asymptotic_u(order, x):
    """Leading large-x form sin(x - λπ/2) of u_λ."""
    return np.sin(np.asarray(x) - complex(order) * np.pi / 2)
