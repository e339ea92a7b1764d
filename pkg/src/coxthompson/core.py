"""Shared data types and exceptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

Parity = Literal["even", "odd", "mixed"]

# S ∩ T = ∅ and distinct L(L+1) are enforced with this separation.
ADMISSIBILITY_GAP = 1e-8


class CoxThompsonError(Exception):
    """Base class for errors raised by this package."""


class ParityError(CoxThompsonError, ValueError):
    """Channel set has the wrong parity for the requested method."""


class PoleError(CoxThompsonError, ArithmeticError):
    """Evaluation point sits on (or too close to) a pole."""


class DegeneracyError(CoxThompsonError, ArithmeticError):
    """Coincident nodes make a structured system singular."""


class ConditioningError(CoxThompsonError, ArithmeticError):
    """A linear system is too ill-conditioned to solve reliably."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


# Any of these marks an iterate as unusable; solvers back off instead of failing.
InadmissibleIterate = (PoleError, DegeneracyError, ConditioningError)


def channel_parity(ls) -> Parity:
    ls = list(ls)
    if not ls:
        raise ValueError("empty channel set")
    odd = {l % 2 for l in ls}
    if odd == {0}:
        return "even"
    if odd == {1}:
        return "odd"
    return "mixed"


@dataclass(frozen=True)
class PhaseShiftSet:
    """Phase shifts δ_l (radians, possibly complex) on a set of partial waves."""

    ls: tuple[int, ...]
    deltas: np.ndarray

    def __post_init__(self):
        ls = tuple(int(l) for l in self.ls)
        deltas = np.asarray(self.deltas, dtype=complex).reshape(-1)
        if len(ls) != len(deltas):
            raise ValueError("ls and deltas differ in length")
        if any(l < 0 for l in ls):
            raise ValueError("angular momenta must be non-negative")
        if any(b <= a for a, b in zip(ls, ls[1:])):
            raise ValueError("angular momenta must be strictly increasing")
        object.__setattr__(self, "ls", ls)
        object.__setattr__(self, "deltas", deltas)

    @classmethod
    def from_elasticities(cls, ls, re_deltas, etas) -> "PhaseShiftSet":
        """Build from Re δ and η = |exp(2iδ)|, using Im δ = -ln(η)/2."""
        etas = np.asarray(etas, dtype=float)
        if np.any(etas <= 0) or np.any(etas > 1):
            raise ValueError("elasticities must lie in (0, 1]")
        return cls(tuple(ls), np.asarray(re_deltas, float) - 0.5j * np.log(etas))

    def __len__(self):
        return len(self.ls)

    @property
    def parity(self) -> Parity:
        return channel_parity(self.ls)

    @property
    def etas(self) -> np.ndarray:
        return np.abs(np.exp(2j * self.deltas))

    def subset(self, parity: Literal["even", "odd"]) -> "PhaseShiftSet | None":
        want = 0 if parity == "even" else 1
        idx = [i for i, l in enumerate(self.ls) if l % 2 == want]
        if not idx:
            return None
        return PhaseShiftSet(tuple(self.ls[i] for i in idx), self.deltas[idx])


def momentum_squares(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    return v * (v + 1)


def check_admissible(T, ls, gap: float = ADMISSIBILITY_GAP) -> np.ndarray:
    """Validate a shifted-momentum set against the physical channels.

    Returns ``T`` as a complex array.  Raises `DegeneracyError` when
    |T| != |S|, an L coincides with a physical l, or two L share L(L+1).
    """
    T = np.asarray(T, dtype=complex).reshape(-1)
    ls = np.asarray(ls, dtype=float)
    if len(T) != len(ls):
        raise DegeneracyError(f"|T| = {len(T)} differs from |S| = {len(ls)}")
    if not np.all(np.isfinite(T)):
        raise DegeneracyError("non-finite shifted momentum")
    if np.min(np.abs(T[:, None] - ls[None, :])) <= gap:
        raise DegeneracyError("a shifted momentum coincides with a physical one")
    sq = momentum_squares(T)
    diff = np.abs(sq[:, None] - sq[None, :])
    np.fill_diagonal(diff, np.inf)
    if len(T) > 1 and np.min(diff) <= gap:
        raise DegeneracyError("two shifted momenta share the same L(L+1)")
    lsq = momentum_squares(ls)
    if np.min(np.abs(sq[:, None] - lsq[None, :])) <= gap:
        raise DegeneracyError("L(L+1) coincides with l(l+1) for a physical channel")
    return T


@dataclass
class SolveReport:
    """Outcome of a nonlinear solve for the shifted momenta."""

    solution: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    ls: tuple[int, ...] = ()
    method: str = ""
    diagnostics: list[str] = field(default_factory=list)
    condition_history: list[float] = field(default_factory=list)
    alternatives: list[np.ndarray] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "ls": list(self.ls),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "residual_norm": float(self.residual_norm),
            "solution": [[float(z.real), float(z.imag)] for z in self.solution],
            "diagnostics": list(self.diagnostics),
            "max_condition": (
                float(max(self.condition_history)) if self.condition_history else None
            ),
            "alternatives": [
                [[float(z.real), float(z.imag)] for z in alt] for alt in self.alternatives
            ],
        }
