"""CSV file formats with a single ``#``-prefixed JSON metadata line.

Numbers are written with 12 significant digits in scientific notation and
metadata keys are sorted, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import PhaseShiftSet
from .reconstruct import PotentialCurve

NUMBER_FORMAT = "{:.11e}"


class FileFormatError(ValueError):
    pass


def fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    # adding 0.0 folds -0.0 into 0.0
    return NUMBER_FORMAT.format(float(value) + 0.0)


def _split_header(text: str):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise FileFormatError("missing '#'-prefixed JSON metadata line")
    try:
        meta = json.loads(lines[0][1:])
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"bad metadata line: {exc}") from exc
    rows = list(csv.DictReader(_io.StringIO("\n".join(lines[1:]) + "\n")))
    return meta, rows


def _join(meta: dict, header: list[str], rows: list[list[str]]) -> str:
    out = ["# " + json.dumps(meta, sort_keys=True)]
    out.append(",".join(header))
    out.extend(",".join(r) for r in rows)
    return "\n".join(out) + "\n"


def _num(row, key, required=True):
    raw = (row.get(key) or "").strip()
    if raw == "":
        if required:
            raise FileFormatError(f"missing value for column {key!r}")
        return math.nan
    try:
        return float(raw)
    except ValueError as exc:
        raise FileFormatError(f"column {key!r}: {raw!r} is not a number") from exc


@dataclass
class PhaseShiftFile:
    """Per-channel phase shifts: l, Re δ, and either Im δ or η (radians)."""

    ls: list[int]
    re_delta: np.ndarray
    im_delta: np.ndarray  # nan where absent
    eta: np.ndarray  # nan where absent
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.re_delta = np.asarray(self.re_delta, float)
        self.im_delta = np.asarray(self.im_delta, float)
        self.eta = np.asarray(self.eta, float)
        for l, im, eta in zip(self.ls, self.im_delta, self.eta):
            if not math.isnan(im) and not math.isnan(eta):
                raise FileFormatError(f"l={l}: give at most one of im_delta and eta")
            if not math.isnan(eta) and not 0 < eta <= 1:
                raise FileFormatError(f"l={l}: eta must lie in (0, 1]")

    @classmethod
    def from_phase_shifts(cls, phases: PhaseShiftSet, meta: dict | None = None) -> "PhaseShiftFile":
        n = len(phases)
        return cls(list(phases.ls), phases.deltas.real, phases.deltas.imag,
                   np.full(n, math.nan), dict(meta or {}))

    def deltas(self) -> np.ndarray:
        im = np.where(np.isnan(self.im_delta), 0.0, self.im_delta)
        from_eta = ~np.isnan(self.eta)
        im = np.where(from_eta, -0.5 * np.log(np.where(from_eta, self.eta, 1.0)), im)
        return self.re_delta + 1j * im

    def to_phase_shifts(self) -> PhaseShiftSet:
        return PhaseShiftSet(tuple(self.ls), self.deltas())

    def dumps(self) -> str:
        header = ["l", "re_delta", "im_delta", "eta"]
        rows = [[str(l), fmt(r), fmt(i), fmt(e)]
                for l, r, i, e in zip(self.ls, self.re_delta, self.im_delta, self.eta)]
        return _join(self.meta, header, rows)

    @classmethod
    def loads(cls, text: str, degrees: bool = False) -> "PhaseShiftFile":
        meta, rows = _split_header(text)
        if not rows:
            raise FileFormatError("no phase-shift records")
        scale = math.pi / 180 if degrees else 1.0
        ls = [int(_num(r, "l")) for r in rows]
        re = np.array([_num(r, "re_delta") for r in rows]) * scale
        im = np.array([_num(r, "im_delta", False) for r in rows]) * scale
        eta = np.array([_num(r, "eta", False) for r in rows])
        return cls(ls, re, im, eta, meta)


@dataclass
class PotentialFile:
    """Sampled potential q(x), optionally with r (fm) and V (MeV) columns."""

    x: np.ndarray
    q: np.ndarray
    extrapolated: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, float)
        self.q = np.asarray(self.q, complex)
        self.extrapolated = np.asarray(self.extrapolated, bool)
        if np.any(np.diff(self.x) <= 0):
            raise FileFormatError("x must be strictly increasing")

    @classmethod
    def from_curve(cls, curve: PotentialCurve, meta: dict | None = None) -> "PotentialFile":
        meta = dict(meta or {})
        if curve.k is not None:
            meta.setdefault("k", curve.k)
        if curve.energy is not None:
            meta.setdefault("energy", curve.energy)
        return cls(curve.x, curve.q, curve.extrapolated, meta)

    def to_curve(self) -> PotentialCurve:
        return PotentialCurve(self.x, self.q, self.extrapolated,
                              self.meta.get("k"), self.meta.get("energy"))

    @property
    def physical(self) -> bool:
        return self.meta.get("k") is not None and self.meta.get("energy") is not None

    def dumps(self) -> str:
        header = ["x", "re_q", "im_q"]
        if self.physical:
            header += ["r", "re_V", "im_V"]
            k, energy = float(self.meta["k"]), float(self.meta["energy"])
        header.append("extrapolated")
        rows = []
        for x, q, flag in zip(self.x, self.q, self.extrapolated):
            row = [fmt(x), fmt(q.real), fmt(q.imag)]
            if self.physical:
                # derived from the written digits so a re-read reproduces them exactly
                xr, qr, qi = (float(v) for v in row)
                row += [fmt(xr / k), fmt(energy * qr), fmt(energy * qi)]
            row.append("1" if flag else "0")
            rows.append(row)
        return _join(self.meta, header, rows)

    @classmethod
    def loads(cls, text: str) -> "PotentialFile":
        meta, rows = _split_header(text)
        if len(rows) < 5:
            raise FileFormatError("potential file needs at least 5 rows")
        x = np.array([_num(r, "x") for r in rows])
        q = np.array([_num(r, "re_q") + 1j * _num(r, "im_q") for r in rows])
        flags = np.array([(r.get("extrapolated") or "0").strip() == "1" for r in rows])
        return cls(x, q, flags, meta)


@dataclass
class SpinOrbitFile:
    """Per-l δ⁺ (j = l + 1/2) and δ⁻ (j = l - 1/2); δ⁻ may be omitted for l = 0."""

    ls: list[int]
    plus: np.ndarray
    minus: np.ndarray
    meta: dict = field(default_factory=dict)

    @classmethod
    def loads(cls, text: str, degrees: bool = False) -> "SpinOrbitFile":
        meta, rows = _split_header(text)
        if not rows:
            raise FileFormatError("no records")
        scale = math.pi / 180 if degrees else 1.0
        ls, plus, minus = [], [], []
        for r in rows:
            l = int(_num(r, "l"))
            p = _num(r, "re_delta_plus", False)
            m = _num(r, "re_delta_minus", False)
            if math.isnan(p):
                raise FileFormatError(f"l={l}: missing delta_plus")
            if math.isnan(m):
                if l != 0:
                    raise FileFormatError(f"l={l}: missing delta_minus")
                m = 0.0
            pi = _num(r, "im_delta_plus", False)
            mi = _num(r, "im_delta_minus", False)
            ls.append(l)
            plus.append((p + 1j * (0 if math.isnan(pi) else pi)) * scale)
            minus.append((m + 1j * (0 if math.isnan(mi) else mi)) * scale)
        return cls(ls, np.array(plus), np.array(minus), meta)


def read_text(path) -> str:
    return Path(path).read_text()


def write_text(path, text: str):
    Path(path).write_text(text)
