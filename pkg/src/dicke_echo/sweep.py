"""Parameter grids over coupling and time (or atom number).

Cells sharing a coupling and atom number are evaluated together as one
column; columns are independent and may run on a thread pool. Results are
gathered by column index, so the worker count never changes the output.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import __version__
from .exceptions import DickeError, InvalidParameters
from .model import CRITICAL_TOLERANCE, DickeParams, PhaseLabel, classify_phase, critical_coupling
from .polariton import (
    CLAMP_TOLERANCE,
    clamp_unit,
    loschmidt_echo_gaussian,
    photon_variance,
    polariton_frame,
)

DEFAULT_SKIP_BAND = 1e-3
EXACT_BUDGET = 40
ENGINES = ("analytic", "exact", "both")

FIG_BASE = DickeParams(omega=1.0, omega0=1.44, g=0.0, n_atoms=100, delta_tilde=0.001)


@dataclass(frozen=True)
class AxisRange:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise InvalidParameters(f"axis {self.name!r} needs count >= 2")
        if not self.start < self.stop:
            raise InvalidParameters(f"axis {self.name!r} range must be ordered")
        if self.spacing not in ("linear", "log"):
            raise InvalidParameters(f"unknown spacing {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise InvalidParameters("log spacing needs a positive start")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            v = np.geomspace(self.start, self.stop, self.count)
        else:
            v = np.linspace(self.start, self.stop, self.count)
        if self.name == "N":
            v = np.rint(v)
        return v


@dataclass(frozen=True)
class Fixed:
    name: str
    value: float

    @property
    def count(self) -> int:
        return 1

    def values(self) -> np.ndarray:
        return np.array([self.value], dtype=float)


@dataclass(frozen=True)
class AxisValues:
    """Explicit, strictly increasing list of axis points."""

    name: str
    points: tuple

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        if not pts:
            raise InvalidParameters(f"axis {self.name!r} needs at least one point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidParameters(f"axis {self.name!r} points must be increasing")
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return len(self.points)

    def values(self) -> np.ndarray:
        return np.array(self.points, dtype=float)


Axis = Union[AxisRange, Fixed, AxisValues]


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition.

    ``axis1`` is one or more coupling segments (concatenated). ``axis2``
    runs over time ``t`` or atom number ``N``; when it runs over ``N`` the
    echo is taken at ``time``.
    """

    base: DickeParams
    axis1: tuple
    axis2: Axis
    engine: str = "analytic"
    skip_band: float = DEFAULT_SKIP_BAND
    time: float = 100.0

    def __post_init__(self):
        axis1 = (self.axis1,) if isinstance(self.axis1, (AxisRange, Fixed, AxisValues)) else tuple(self.axis1)
        object.__setattr__(self, "axis1", axis1)
        if not axis1 or any(a.name != "g" for a in axis1):
            raise InvalidParameters("axis1 must consist of coupling ('g') ranges")
        if self.axis2.name not in ("t", "N"):
            raise InvalidParameters("axis2 must run over 't' or 'N'")
        if self.engine not in ENGINES:
            raise InvalidParameters(f"engine must be one of {ENGINES}")
        if self.skip_band < CRITICAL_TOLERANCE:
            raise InvalidParameters("skip_band must be at least the critical tolerance")
        g = self.couplings()
        if np.any(g < 0):
            raise InvalidParameters("couplings must be non-negative")

    def couplings(self) -> np.ndarray:
        return np.concatenate([a.values() for a in self.axis1])

    def second_values(self) -> np.ndarray:
        return self.axis2.values()

    @property
    def second_name(self) -> str:
        return self.axis2.name

    def to_dict(self) -> dict:
        def axis(a):
            if isinstance(a, Fixed):
                return {"name": a.name, "value": a.value}
            if isinstance(a, AxisValues):
                return {"name": a.name, "points": list(a.points)}
            return {"name": a.name, "start": a.start, "stop": a.stop,
                    "count": a.count, "spacing": a.spacing}

        return {
            "base": self.base.to_dict(),
            "axis1": [axis(a) for a in self.axis1],
            "axis2": axis(self.axis2),
            "engine": self.engine,
            "skip_band": self.skip_band,
            "time": self.time,
        }


@dataclass(frozen=True)
class SweepCell:
    g: float
    second: float
    L: float
    gamma: float
    phase: PhaseLabel
    flags: tuple = ()


@dataclass
class SweepResult:
    spec: SweepSpec
    cells: list
    skipped: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def columns(self) -> tuple:
        return ("g", self.spec.second_name, "L", "gamma", "phase", "flags")

    def rows(self):
        integer_axis = self.spec.second_name == "N"
        for c in self.cells:
            second = int(c.second) if integer_axis else c.second
            yield (c.g, second, c.L, c.gamma, c.phase.value, "|".join(c.flags))

    def csv_body(self) -> str:
        buf = io.StringIO()
        write_csv(buf, self.columns, self.rows())
        return buf.getvalue()

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.csv_body())

    def grid(self, value: str = "L") -> np.ndarray:
        """Cell values as an ``(n_g, n_second)`` array; skipped cells are NaN."""
        g = self.spec.couplings()
        s = self.spec.second_values()
        out = np.full((g.size, s.size), np.nan)
        gi = {x: i for i, x in enumerate(g.tolist())}
        si = {x: i for i, x in enumerate(s.tolist())}
        for c in self.cells:
            out[gi[c.g], si[c.second]] = getattr(c, value)
        return out

    def cross_section(self, second: float) -> list:
        return [c for c in self.cells if c.second == second]


def format_value(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".17g")
    return str(x)


def write_csv(fh, header, rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def _parse(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(source) -> list:
    """Rows of a CSV written by this package, numbers parsed back exactly."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for raw in reader:
        rows.append({k: (v if k in ("phase", "flags") else _parse(v)) for k, v in raw.items()})
    return rows


def _column_params(spec: SweepSpec, g: float, n_atoms: Optional[int]) -> DickeParams:
    n = spec.base.n_atoms if n_atoms is None else int(n_atoms)
    return spec.base.replace(g=float(g), n_atoms=n)


def _analytic_column(p: DickeParams, times: np.ndarray):
    frame = polariton_frame(p)
    report = photon_variance(frame)
    curve = loschmidt_echo_gaussian(p, report.gamma, times)
    flags = ("near_critical",) if frame.near_critical else ()
    return frame.phase, report.gamma, curve.values, flags


def _exact_column(p: DickeParams, times: np.ndarray):
    from .oracle import echo_exact, photon_statistics, solve_ground_state

    gs = solve_ground_state(p)
    gamma = photon_statistics(gs).variance
    curve = echo_exact(p, times, gs=gs)
    flags = []
    if not curve.metadata["clamp_ok"]:
        flags.append("clamp_exceeded")
    if not curve.metadata["norm_ok"]:
        flags.append("norm_drift")
    return classify_phase(p), gamma, curve.values, tuple(flags)


def _evaluate_column(args):
    spec, g, n_atoms, times, engine = args
    p = _column_params(spec, g, n_atoms)
    phase = classify_phase(p)
    if engine == "analytic":
        g_c = critical_coupling(p)
        if abs(g - g_c) <= spec.skip_band * g_c:
            return phase, None, None, ("skipped",)
    try:
        if engine == "analytic":
            return _analytic_column(p, times)
        return _exact_column(p, times)
    except DickeError as exc:
        return phase, math.nan, np.full(times.size, math.nan), (f"error:{type(exc).__name__}",)


def _columns(spec: SweepSpec):
    g_values = spec.couplings()
    if spec.second_name == "t":
        times = spec.second_values()
        return [(float(g), None, times) for g in g_values]
    times = np.array([spec.time])
    return [(float(g), int(n), times) for g in g_values for n in spec.second_values()]


def _parallel_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_sweep(spec: SweepSpec, workers: int = 1, engine: Optional[str] = None) -> SweepResult:
    """Evaluate every cell of ``spec``.

    Per-cell failures become ``error:<type>`` flags. Analytic cells within
    ``skip_band`` of g_c are listed in ``skipped`` instead of ``cells``.
    With ``engine='both'`` the analytic values fill the grid and the exact
    engine should be driven through :func:`compare_engines`.
    """
    engine = engine or spec.engine
    if engine == "both":
        engine = "analytic"
    columns = _columns(spec)
    results = _parallel_map(
        _evaluate_column, [(spec, g, n, t, engine) for g, n, t in columns], workers
    )
    cells, skipped = [], []
    for (g, n, times), (phase, gamma, values, flags) in zip(columns, results):
        if "skipped" in flags:
            seconds = times if n is None else [n]
            skipped.extend((g, float(s)) for s in seconds)
            continue
        seconds = times if n is None else np.array([float(n)])
        clamped, excursion = clamp_unit(np.nan_to_num(values, nan=0.0))
        for k, s in enumerate(seconds):
            cell_flags = flags
            L = float(values[k])
            if not math.isnan(L):
                if excursion > CLAMP_TOLERANCE:
                    cell_flags = cell_flags + ("clamp_exceeded",)
                L = float(clamped[k])
            cells.append(SweepCell(float(g), float(s), L, float(gamma), phase, tuple(cell_flags)))
    return SweepResult(
        spec=spec,
        cells=cells,
        skipped=skipped,
        provenance={
            "engine": engine,
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        },
    )


def preset(name: str) -> SweepSpec:
    """Reference grids ``fig2``, ``fig3`` and ``fig4``.

    ``fig2``: full (g, t) surface; ``fig3``: its cross-section at
    ``omega t = 100``; ``fig4``: the same cross-section for N = 100, 1000,
    10000.
    """
    couplings = (AxisRange("g", 0.01, 0.59, 60), AxisRange("g", 0.61, 1.2, 60))
    if name == "fig2":
        return SweepSpec(FIG_BASE, couplings, AxisRange("t", 0.0, 100.0, 101))
    if name == "fig3":
        return SweepSpec(FIG_BASE, couplings, Fixed("t", 100.0))
    if name == "fig4":
        return SweepSpec(FIG_BASE, couplings, AxisRange("N", 100, 10000, 3, "log"), time=100.0)
    raise KeyError(f"unknown preset {name!r}; expected fig2, fig3 or fig4")


# --------------------------------------------------------------------------- compare


@dataclass
class ComparisonTable:
    rows: list
    summary: dict
    spec: SweepSpec

    columns = ("g", "N", "t", "gamma_analytic", "gamma_exact", "L_gaussian", "L_exact",
               "gamma_rel_dev", "L_rel_dev", "flags")

    def csv_body(self) -> str:
        buf = io.StringIO()
        write_csv(buf, self.columns, ([r[c] for c in self.columns] for r in self.rows))
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"spec": self.spec.to_dict(), "summary": self.summary, "rows": self.rows},
            indent=2,
            default=float,
        )


def _rel_dev(a: float, b: float) -> float:
    if math.isnan(a) or math.isnan(b):
        return math.nan
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(b), 1e-300)


def _compare_column(args):
    spec, g, n_atoms, times = args
    p = _column_params(spec, g, n_atoms)
    flags = []
    try:
        gamma_a = photon_variance(polariton_frame(p)).gamma
        l_a = loschmidt_echo_gaussian(p, gamma_a, times).values
        if polariton_frame(p).near_critical:
            flags.append("near_critical")
    except DickeError as exc:
        gamma_a, l_a = math.nan, np.full(times.size, math.nan)
        flags.append(f"analytic_error:{type(exc).__name__}")
    try:
        _, gamma_e, l_e, exact_flags = _exact_column(p, times)
        flags.extend(exact_flags)
    except DickeError as exc:
        gamma_e, l_e = math.nan, np.full(times.size, math.nan)
        flags.append(f"exact_error:{type(exc).__name__}: {exc}")
    return gamma_a, l_a, gamma_e, l_e, tuple(flags)


def compare_engines(
    spec: SweepSpec, workers: int = 1, budget: int = EXACT_BUDGET, force: bool = False
) -> ComparisonTable:
    """Analytic vs exact photon variance and echo on every cell of ``spec``.

    Near-critical and failed cells stay in the table but are left out of the
    summary quantiles.
    """
    columns = _columns(spec)
    largest = max((n if n is not None else spec.base.n_atoms) for _, n, _ in columns)
    if largest > budget and not force:
        raise InvalidParameters(f"N={largest} exceeds the exact-engine budget {budget}")
    results = _parallel_map(_compare_column, [(spec, g, n, t) for g, n, t in columns], workers)
    rows = []
    for (g, n, times), (gamma_a, l_a, gamma_e, l_e, flags) in zip(columns, results):
        n_val = spec.base.n_atoms if n is None else n
        for k, t in enumerate(times):
            rows.append({
                "g": g,
                "N": int(n_val),
                "t": float(t),
                "gamma_analytic": float(gamma_a),
                "gamma_exact": float(gamma_e),
                "L_gaussian": float(l_a[k]),
                "L_exact": float(l_e[k]),
                "gamma_rel_dev": _rel_dev(float(gamma_a), float(gamma_e)),
                "L_rel_dev": _rel_dev(float(l_a[k]), float(l_e[k])),
                "flags": "|".join(flags),
            })
    clean = [r for r in rows if not r["flags"]]
    summary = {"cells": len(rows), "summarized": len(clean)}
    for key in ("gamma_rel_dev", "L_rel_dev"):
        data = np.array([r[key] for r in clean], dtype=float)
        if data.size:
            q = np.quantile(data, [0.5, 0.9, 1.0])
            summary[key] = {"median": float(q[0]), "p90": float(q[1]), "max": float(q[2])}
        else:
            summary[key] = {"median": math.nan, "p90": math.nan, "max": math.nan}
    return ComparisonTable(rows=rows, summary=summary, spec=spec)
