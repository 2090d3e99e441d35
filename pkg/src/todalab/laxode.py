"""Lax-pair flows: fixed-step RK4, the QR-factorization solution, spectra and
conservation drift."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
import scipy.linalg

from .geomcore import Chart, PhasePoint, ScalarField, VectorField


class FlowBlowUp(RuntimeError):
    def __init__(self, time: float):
        super().__init__(f"non-finite state at t = {time!r}")
        self.time = time


@dataclass(frozen=True)
class LaxPair:
    chart: Chart
    L: Callable[[Sequence[Any]], Any]
    B: Callable[[Sequence[Any]], Any]
    size: int

    def matrices(self, x: PhasePoint | Sequence[Any]) -> tuple[np.ndarray, np.ndarray]:
        xs = x.coords if isinstance(x, PhasePoint) else tuple(x)
        return np.array(self.L(xs), dtype=object), np.array(self.B(xs), dtype=object)


@dataclass
class Trajectory:
    chart: Chart
    times: np.ndarray
    states: np.ndarray
    step: float
    order: int = 4
    method: str = "rk4"
    halved: "Trajectory | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.states.shape[0] != self.times.shape[0]:
            raise ValueError("one state row per grid time")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("time grid must be strictly increasing")

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def richardson_error(self) -> float:
        """(y_h - y_{h/2}) / (2^p - 1) at the final time."""
        if self.halved is None:
            raise ValueError("trajectory was integrated without a halved run")
        return float(np.max(np.abs(self.final - self.halved.final))) / (2**self.order - 1)

    def to_csv(self, fh: io.TextIOBase | None = None) -> str:
        """Columns ``t`` then chart labels; floats written with repr."""
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t",) + self.chart.labels)
        for t, row in zip(self.times, self.states):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        return buf.getvalue() if fh is None else ""


def _rhs(X: VectorField) -> Callable[[list], list]:
    comp = X.components

    def f(y):
        return [float(v) for v in comp(y)]

    return f


def _rk4(f, y0: list, t_end: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    n = max(1, math.ceil(t_end / step - 1e-9)) if t_end > 0 else 0
    times = [0.0]
    rows = [list(y0)]
    y = list(y0)
    t = 0.0
    d = len(y)
    for k in range(n):
        h = min(step, t_end - t) if k == n - 1 else step
        t = t_end if k == n - 1 else (k + 1) * step
        try:
            k1 = f(y)
            k2 = f([y[i] + h / 2 * k1[i] for i in range(d)])
            k3 = f([y[i] + h / 2 * k2[i] for i in range(d)])
            k4 = f([y[i] + h * k3[i] for i in range(d)])
        except (OverflowError, ZeroDivisionError):
            raise FlowBlowUp(t) from None
        y = [y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(d)]
        if not all(math.isfinite(v) for v in y):
            raise FlowBlowUp(t)
        times.append(t)
        rows.append(y)
    return np.array(times), np.array(rows, dtype=float)


def integrate_flow(
    X: VectorField,
    x0: PhasePoint | Sequence[Any],
    t_end: float,
    step: float,
    *,
    halve: bool = False,
) -> Trajectory:
    """Classical fixed-step RK4 from t = 0 to ``t_end``.

    The last step is shortened if ``t_end`` is not a multiple of ``step``.
    With ``halve`` a second run at ``step/2`` is attached for Richardson
    error estimates.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not t_end >= 0:
        raise ValueError("t_end must be non-negative")
    xs = X.check_point(x0)
    y0 = [float(v) for v in xs]
    f = _rhs(X)
    times, states = _rk4(f, y0, float(t_end), float(step))
    half = None
    if halve:
        ht, hs = _rk4(f, y0, float(t_end), float(step) / 2)
        half = Trajectory(X.chart, ht, hs, float(step) / 2)
    return Trajectory(X.chart, times, states, float(step), halved=half)


def _sym(M: Any, what: str) -> np.ndarray:
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{what} must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)):
        raise ValueError(f"{what} must be symmetric")
    return A


def eigenvalues(M: Any) -> np.ndarray:
    return np.linalg.eigvalsh(_sym(M, "matrix"))


def qr_solve(L0: Any, t: float) -> np.ndarray:
    """k(t)^{-1} L0 k(t) where exp(t L0) = k(t) b(t), k orthogonal and b
    upper triangular with positive diagonal."""
    A = _sym(L0, "L0")
    E = scipy.linalg.expm(t * A)
    if not np.all(np.isfinite(E)):
        raise FloatingPointError(f"exp(t L0) overflowed at t = {t!r}")
    k, b = np.linalg.qr(E)
    s = np.sign(np.diag(b))
    if np.any(s == 0):
        raise FloatingPointError("exp(t L0) is numerically singular")
    k = k * s
    return k.T @ A @ k


@dataclass
class DriftEntry:
    name: str
    initial: float
    drift: float


@dataclass
class DriftReport:
    entries: list[DriftEntry]

    @property
    def max_drift(self) -> float:
        return max((e.drift for e in self.entries), default=0.0)

    def to_json(self) -> dict:
        return {
            "invariants": [{"name": e.name, "initial": e.initial, "drift": e.drift} for e in self.entries],
            "max_drift": self.max_drift,
        }


def drift_report(traj: Trajectory, invariants: Sequence[ScalarField]) -> DriftReport:
    out = []
    for f in invariants:
        if not f.chart.same(traj.chart):
            raise ValueError(f"{f.name} lives on {f.chart.name}, trajectory on {traj.chart.name}")
        vals = np.array([float(f(list(map(float, row)))) for row in traj.states])
        out.append(DriftEntry(f.name, float(vals[0]), float(np.max(np.abs(vals - vals[0])))))
    return DriftReport(out)
