"""Forward radial solver: Numerov integration and phase-shift extraction.

Deliberately independent of the inversion path: the free solutions used for
matching come from scipy's spherical Bessel functions, not from `specfun`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import spherical_jn, spherical_yn

from .reconstruct import PotentialCurve

Potential = Union[PotentialCurve, Callable[[np.ndarray], np.ndarray]]

X_START = 1e-3
MAX_STEP = 0.01
DEFAULT_X_MAX = 40.0
# |q| above this near the end of the sampled range counts as a long-range tail
TAIL_THRESHOLD = 1e-8
TAIL_WINDOW = 8.0
TAIL_FAR = 4000.0


class MatchingError(ArithmeticError):
    pass


@dataclass
class WaveSample:
    x: np.ndarray
    psi: np.ndarray
    l: int


@dataclass
class ForwardResult:
    ls: tuple[int, ...]
    deltas: np.ndarray
    etas: np.ndarray
    match_points: list[tuple[float, float]]


def free_solutions(l: int, x):
    """Riccati-Bessel u_l = x j_l(x) and v_l = x y_l(x) for integer l."""
    x = np.asarray(x, float)
    return x * spherical_jn(l, x), x * spherical_yn(l, x)


def integrate_radial(q: Potential, l: int, x_max: float = DEFAULT_X_MAX,
                     step: float = MAX_STEP, x_start: float = X_START) -> WaveSample:
    """Regular solution of ψ'' = (q(x) + l(l+1)/x² - 1) ψ by Numerov's method.

    The first two nodes are seeded from the small-x series of the regular
    solution; any residual irregular admixture decays outward for l > 0.
    """
    n = int(np.ceil((x_max - x_start) / step)) + 1
    h = (x_max - x_start) / (n - 1)
    x = x_start + h * np.arange(n)
    f = np.asarray(q(x), complex) + l * (l + 1) / x**2 - 1
    g = 1 - h * h * f / 12
    psi = np.empty(n, complex)
    # two-term regular series x^{l+1} [1 + (q0 - 1) x^2 / (2(2l+3))] with q0 = q(x_0)
    c2 = (f[0] - l * (l + 1) / x[0] ** 2) / (2 * (2 * l + 3))
    psi[:2] = x[:2] ** (l + 1) * (1 + c2 * x[:2] ** 2)
    for i in range(1, n - 1):
        psi[i + 1] = ((12 - 10 * g[i]) * psi[i] - g[i - 1] * psi[i - 1]) / g[i + 1]
        # rescale to keep high partial waves away from under/overflow
        if abs(psi[i + 1]) > 1e100:
            psi[: i + 2] *= 1e-100
    return WaveSample(x, psi, l)


def _delta_from_pair(wave: WaveSample, ia: int, ib: int):
    xa, xb = wave.x[ia], wave.x[ib]
    ua, va = free_solutions(wave.l, xa)
    ub, vb = free_solutions(wave.l, xb)
    M = np.array([[ua, va], [ub, vb]], dtype=complex)
    if abs(np.linalg.det(M)) < 1e-8 * np.max(np.abs(M)) ** 2:
        raise MatchingError("matching system is ill-conditioned")
    alpha, beta = np.linalg.solve(M, [wave.psi[ia], wave.psi[ib]])
    # ψ = C (cos δ u_l - sin δ v_l)  =>  e^{2iδ} = (α - iβ) / (α + iβ)
    if abs(alpha + 1j * beta) < 1e-300:
        raise MatchingError("degenerate matching amplitudes")
    S = (alpha - 1j * beta) / (alpha + 1j * beta)
    delta = np.log(S) / 2j
    return complex(delta)


def extract_phase_shift(wave: WaveSample, x_match: tuple[float, float] | None = None,
                        retries: int = 4, shift: float = 0.25):
    """Phase shift and elasticity by matching to free solutions at two points.

    Defaults to the pair (x_max - 2, x_max).  Points close to a node of u_l
    are moved inwards by ``shift`` up to ``retries`` times.
    """
    x = wave.x
    xa, xb = x_match if x_match is not None else (x[-1] - 2.0, x[-1])
    for _ in range(retries + 1):
        ia = int(np.argmin(np.abs(x - xa)))
        ib = int(np.argmin(np.abs(x - xb)))
        if ib - ia < 1 or x[ib] - x[ia] < 0.5 - 1e-9:
            raise MatchingError("matching points must be separated by at least 0.5")
        ua = free_solutions(wave.l, x[ia])[0]
        ub = free_solutions(wave.l, x[ib])[0]
        if min(abs(ua), abs(ub)) > 0.05:
            try:
                delta = _delta_from_pair(wave, ia, ib)
                return delta, float(np.abs(np.exp(2j * delta))), (float(x[ia]), float(x[ib]))
            except MatchingError:
                pass
        xa, xb = xa - shift, xb - shift
    raise MatchingError("could not find admissible matching points")


def local_phase(wave: WaveSample, index: int = -1):
    """Phase δ(x) at one node from ψ and ψ' (five-point one-sided derivative).

    This is the variable-phase value: ψ = A (cos δ u_l - sin δ v_l) together
    with ψ' = A (cos δ u_l' - sin δ v_l').
    """
    i = index % len(wave.x)
    if i < 4:
        raise MatchingError("need four nodes behind the matching point")
    h = wave.x[1] - wave.x[0]
    p = wave.psi[i - 4 : i + 1]
    dpsi = (25 * p[4] - 48 * p[3] + 36 * p[2] - 16 * p[1] + 3 * p[0]) / (12 * h)
    x = wave.x[i]
    l = wave.l
    u, v = free_solutions(l, x)
    du = spherical_jn(l, x) + x * spherical_jn(l, x, derivative=True)
    dv = spherical_yn(l, x) + x * spherical_yn(l, x, derivative=True)
    alpha, beta = np.linalg.solve(np.array([[u, -v], [du, -dv]], complex), [wave.psi[i], dpsi])
    return complex(np.log((alpha + 1j * beta) / (alpha - 1j * beta)) / 2j)


def fit_tail(x, q, window: float = TAIL_WINDOW):
    """Least-squares fit of q x^2 to (1, cos 2x, sin 2x) and the same over x.

    Returns a callable tail model q_t(x).
    """
    x = np.asarray(x, float)
    sel = x >= x[-1] - window
    xs = x[sel]

    def design(t):
        t = np.asarray(t, float)
        c, s = np.cos(2 * t), np.sin(2 * t)
        return np.stack([np.ones_like(t), c, s, 1 / t, c / t, s / t], axis=-1)

    coef, *_ = np.linalg.lstsq(design(xs).astype(complex), np.asarray(q)[sel] * xs**2, rcond=None)
    return lambda t: design(t) @ coef / np.asarray(t, float) ** 2, coef


def tail_phase(qt, l: int, delta: complex, x_from: float, x_far: float = TAIL_FAR,
               dx: float = 0.02, coef=None) -> complex:
    """Phase accumulated beyond ``x_from`` under the tail ``qt``.

    Integrates dδ/dx = -q (cos δ u_l - sin δ v_l)^2 by two Picard sweeps; the
    non-oscillating part of the remainder beyond ``x_far`` is added in closed
    form when the fit coefficients are supplied.
    """
    xs = np.arange(x_from, x_far + dx / 2, dx)
    u, v = free_solutions(l, xs)
    q = qt(xs)
    d = np.full(xs.shape, delta, complex)
    for _ in range(2):
        w2 = (np.cos(d) * u - np.sin(d) * v) ** 2
        d = delta + cumulative_trapezoid(-q * w2, xs, initial=0)
    total = d[-1] - delta
    if coef is not None:
        psi = -l * np.pi + 2 * d[-1]
        mean = coef[0] / 2 - (coef[1] * np.cos(psi) - coef[2] * np.sin(psi)) / 4
        total += -mean / xs[-1]
    return complex(total)


def phase_shifts(q: Potential, ls, x_max: float | None = None, step: float = MAX_STEP,
                 x_match: tuple[float, float] | None = None, tail: str = "auto") -> ForwardResult:
    """Phase shifts δ_l (complex) and elasticities η_l for every channel in ``ls``.

    For a sampled `PotentialCurve` the integration runs to the end of its grid
    by default.  With ``tail="auto"`` a potential still above
    ``TAIL_THRESHOLD`` over the last ``TAIL_WINDOW`` is treated as a slowly
    decaying 1/x^2 tail: the local phase at the last node is continued to
    infinity with `tail_phase`.  ``tail="off"`` always uses two-point matching.
    """
    if x_max is None:
        x_max = float(q.x[-1]) if isinstance(q, PotentialCurve) else DEFAULT_X_MAX
    xt = np.linspace(max(x_max - TAIL_WINDOW, X_START), x_max, 801)
    qt_samples = np.asarray(q(xt), complex)
    use_tail = tail == "on" or (tail == "auto" and np.max(np.abs(qt_samples)) > TAIL_THRESHOLD)
    if use_tail:
        model, coef = fit_tail(xt, qt_samples)
    deltas, etas, pts = [], [], []
    for l in ls:
        wave = integrate_radial(q, int(l), x_max=x_max, step=step)
        if use_tail:
            d0 = local_phase(wave)
            d = d0 + tail_phase(model, int(l), d0, float(wave.x[-1]), coef=coef)
            d = complex(np.log(np.exp(2j * d)) / 2j)
            p = (float(wave.x[-1]), np.inf)
            e = float(np.abs(np.exp(2j * d)))
        else:
            d, e, p = extract_phase_shift(wave, x_match)
        deltas.append(d)
        etas.append(e)
        pts.append(p)
    return ForwardResult(tuple(int(l) for l in ls), np.array(deltas), np.array(etas), pts)


def gaussian(amplitude: float, width: float):
    return lambda x: amplitude * np.exp(-((np.asarray(x) / width) ** 2)) + 0j


def woods_saxon(depth: float, radius: float, diffuseness: float):
    """-depth / (1 + exp((x - radius)/diffuseness)); positive depth is attractive."""
    return lambda x: -depth / (1 + np.exp((np.asarray(x) - radius) / diffuseness)) + 0j


def square_well(depth: float, radius: float):
    """q = -depth for x < radius; positive depth is attractive."""
    return lambda x: np.where(np.asarray(x) < radius, -depth, 0.0) + 0j
