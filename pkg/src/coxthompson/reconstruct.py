"""Inverse potential from a solved shifted-momentum set.

Pipeline: expansion functions A_L(x) from the Wronskian linear system, the
kernel diagonal K(x,x) = sum_L A_L(x) u_L(x), then
q(x) = -(2/x) d/dx [K(x,x)/x] by finite differences.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .core import check_admissible, momentum_squares
from .specfun import riccati_j, riccati_y

DEFAULT_X_MIN = 0.05
DEFAULT_X_MAX = 25.0
DEFAULT_N = 500
SINGULAR_CONDITION = 1e12


class GridAccuracyWarning(UserWarning):
    pass


def make_grid(x_min: float = DEFAULT_X_MIN, x_max: float = DEFAULT_X_MAX, n: int = DEFAULT_N):
    """Uniform radial grid in x = kr."""
    if not 0 < x_min < x_max:
        raise ValueError("need 0 < x_min < x_max")
    if n < 5:
        raise ValueError("need at least 5 grid points")
    grid = np.linspace(x_min, x_max, n)
    if grid[1] - grid[0] > np.pi / 4:
        warnings.warn("grid spacing exceeds π/4; fewer than 8 points per oscillation",
                      GridAccuracyWarning, stacklevel=2)
    return grid


@dataclass
class ExpansionTable:
    x: np.ndarray
    T: np.ndarray
    A: np.ndarray  # shape (len(x), len(T))
    flagged: np.ndarray  # bool per grid point, True where A was interpolated
    max_residual: float


@dataclass
class PotentialCurve:
    """Sampled dimensionless potential q(x).

    Calling the curve interpolates with a cubic spline inside the grid,
    extrapolates quadratically below the first point and returns zero beyond
    the last one.
    """

    x: np.ndarray
    q: np.ndarray
    extrapolated: np.ndarray = field(default=None)
    k: float | None = None
    energy: float | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, float)
        self.q = np.asarray(self.q, complex)
        if self.extrapolated is None:
            self.extrapolated = np.zeros(len(self.x), bool)
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("grid must be strictly increasing")
        self._spline = None

    def __call__(self, x):
        x = np.asarray(x, float)
        if self._spline is None:
            self._spline = CubicSpline(self.x, self.q)
            self._quad = np.polyfit(self.x[:3], self.q[:3], 2)
        out = np.zeros(x.shape, complex)
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        below = x < self.x[0]
        out[inside] = self._spline(x[inside])
        out[below] = np.polyval(self._quad, x[below])
        return out

    def with_origin(self, x_start: float = 0.0, n: int = 5) -> "PotentialCurve":
        """Prepend quadratically extrapolated points down to ``x_start``."""
        if x_start >= self.x[0]:
            return self
        coeffs = np.polyfit(self.x[:3], self.q[:3], 2)
        xe = np.linspace(x_start, self.x[0], n + 1)[:-1]
        return PotentialCurve(
            np.concatenate([xe, self.x]),
            np.concatenate([np.polyval(coeffs, xe), self.q]),
            np.concatenate([np.ones(n, bool), self.extrapolated]),
            self.k,
            self.energy,
        )


def wronskian_matrix(T, ls, x):
    """Coefficient matrices W[u_L, v_l](x) / (l(l+1) - L(L+1)) with shape (n_x, l, L),
    plus v_l(x) with shape (n_x, l) and u_L(x) with shape (n_x, L)."""
    x = np.asarray(x, float)
    T = np.asarray(T, complex)
    U = np.empty((len(x), len(T)), complex)
    dU = np.empty_like(U)
    for j, L in enumerate(T):
        U[:, j], dU[:, j] = riccati_j(L, x)
    V = np.empty((len(x), len(ls)), complex)
    dV = np.empty_like(V)
    for i, l in enumerate(ls):
        V[:, i], dV[:, i] = riccati_y(l, x)
    W = U[:, None, :] * dV[:, :, None] - dU[:, None, :] * V[:, :, None]
    denom = momentum_squares(np.asarray(ls, float))[:, None] - momentum_squares(T)[None, :]
    return W / denom[None], V, U


def expansion_functions(T, ls, x) -> ExpansionTable:
    """Solve sum_L A_L(x) W[u_L, v_l](x) / (l(l+1) - L(L+1)) = v_l(x) at every grid point.

    Points whose system is numerically singular are flagged and filled by
    linear interpolation between the nearest clean neighbours.
    """
    T = check_admissible(T, ls)
    x = np.asarray(x, float)
    C, V, _ = wronskian_matrix(T, ls, x)
    # v_l ~ x^{-l} and u_L ~ x^{L+1} near the origin: equilibrate rows and
    # columns so conditioning reflects true degeneracy, not scaling.
    with np.errstate(divide="ignore", invalid="ignore"):
        row = 1 / np.max(np.abs(C), axis=2, keepdims=True)
        Cr = C * row
        col = 1 / np.max(np.abs(Cr), axis=1, keepdims=True)
        Cs = Cr * col
        cond = np.linalg.cond(np.where(np.isfinite(Cs), Cs, 0))
    bad = ~np.isfinite(cond) | (cond > SINGULAR_CONDITION) | ~np.all(np.isfinite(Cs), axis=(1, 2))
    A = np.zeros((len(x), len(T)), complex)
    good = ~bad
    if good.any():
        y = np.linalg.solve(Cs[good], (V[good] * row[good][..., 0])[..., None])[..., 0]
        A[good] = y * col[good][:, 0, :]
    resid = np.abs(np.einsum("nij,nj->ni", C[good], A[good]) - V[good])
    scale = np.abs(V[good]) + np.einsum("nij,nj->ni", np.abs(C[good]), np.abs(A[good]))
    max_res = float(np.max(resid / np.maximum(scale, 1e-300))) if good.any() else np.inf
    if bad.any():
        if good.sum() < 2:
            raise ArithmeticError("expansion system singular on almost the whole grid")
        for j in range(len(T)):
            A[bad, j] = np.interp(x[bad], x[good], A[good, j].real) + 1j * np.interp(
                x[bad], x[good], A[good, j].imag
            )
    return ExpansionTable(x, T, A, bad, max_res)


def kernel_diagonal(table: ExpansionTable) -> np.ndarray:
    """K(x,x) = sum_L A_L(x) u_L(x) on the table's grid."""
    K = np.zeros(len(table.x), complex)
    for j, L in enumerate(table.T):
        K += table.A[:, j] * riccati_j(L, table.x).f
    return K


def potential_from_kernel(x, kdiag) -> PotentialCurve:
    """q(x) = -(2/x) d/dx [K(x,x)/x], second-order differences (one-sided at the ends)."""
    x = np.asarray(x, float)
    kdiag = np.asarray(kdiag, complex)
    if len(x) < 5:
        raise ValueError("need at least 5 grid points")
    if np.max(np.diff(x)) > np.pi / 4:
        warnings.warn("coarse grid: potential derivative may be inaccurate",
                      GridAccuracyWarning, stacklevel=2)
    deriv = np.gradient(kdiag / x, x, edge_order=2)
    return PotentialCurve(x, -2 / x * deriv)


def reconstruct_potential(T, ls, x) -> tuple[PotentialCurve, ExpansionTable]:
    table = expansion_functions(T, ls, x)
    curve = potential_from_kernel(table.x, kernel_diagonal(table))
    return curve, table


def to_physical(curve: PotentialCurve, k: float, energy: float):
    """Convert to r = x/k (fm) and V = E q (MeV)."""
    if k <= 0 or energy <= 0:
        raise ValueError("k and E must be positive")
    return curve.x / k, energy * curve.q


def from_physical(r, V, k: float, energy: float) -> PotentialCurve:
    if k <= 0 or energy <= 0:
        raise ValueError("k and E must be positive")
    return PotentialCurve(np.asarray(r, float) * k, np.asarray(V, complex) / energy,
                          k=k, energy=energy)
