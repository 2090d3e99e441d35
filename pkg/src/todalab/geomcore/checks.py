"""Seeded sampling and identity checks producing :class:`IdentityReport`."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np

from .charts import Chart
from .fields import BivectorField, Field, ScalarField, as_array
from .ops import _same_chart, map_jacobian, schouten_at
from .scalars import Q, qstr, scale

DEFAULT_SEED = 20240607
SEED_ENV = "TODA_LAB_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    return int(raw, 0)


@dataclass(frozen=True)
class SamplerConfig:
    samples: int = 100
    seed: int = field(default_factory=default_seed)
    mode: str = "exact"  # or "float"
    tol: float = 1e-9
    height: int = 9
    denominators: tuple[int, ...] = (1, 2, 3)
    max_tries: int = 10_000

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if self.mode == "float" and not self.tol > 0:
            raise ValueError("tolerance must be positive in float mode")

    def but(self, **kw) -> "SamplerConfig":
        return replace(self, **kw)


def _draw(rng: random.Random, cfg: SamplerConfig) -> Any:
    return Q(rng.randint(-cfg.height, cfg.height), rng.choice(cfg.denominators))


def sample_points(
    chart: Chart,
    cfg: SamplerConfig,
    singular: Sequence[tuple[str, Callable]] = (),
    n: int | None = None,
) -> list[tuple]:
    """Rational points (floats on float charts/modes), rejection-sampled off
    the chart's and the extra singular loci."""
    rng = random.Random(cfg.seed)
    preds = tuple(chart.singular) + tuple(singular)
    want = cfg.samples if n is None else n
    use_float = cfg.mode == "float" or not chart.exact
    out = []
    tries = 0
    while len(out) < want:
        tries += 1
        if tries > cfg.max_tries * max(want, 1):
            raise RuntimeError(f"could not sample {want} points off the singular loci of {chart.name}")
        xs = tuple(_draw(rng, cfg) for _ in range(chart.dim))
        if any(p(xs) == 0 for _, p in preds):
            continue
        out.append(tuple(float(x) for x in xs) if use_float else xs)
    return out


@dataclass
class IdentityReport:
    name: str
    samples: int
    seed: int
    mode: str
    max_residual: Any
    passed: bool
    tol: float | None = None
    witness: dict | None = None
    note: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        d = {
            "name": self.name,
            "samples": self.samples,
            "seed": self.seed,
            "mode": self.mode,
            "max_residual": _num(self.max_residual),
            "verdict": self.verdict,
        }
        if self.mode == "float":
            d["tol"] = self.tol
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d

    def __bool__(self) -> bool:
        return self.passed


def _num(x: Any):
    if isinstance(x, float):
        return x
    q = Q(x)
    return int(q) if q.denominator == 1 else qstr(q)


def _absmax(arr) -> Any:
    a = np.asarray(arr, dtype=object if not isinstance(arr, np.ndarray) or arr.dtype == object else float)
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(v) for v in a.flat)
    return float(np.max(np.abs(a)))


Residual = Callable[[tuple], tuple[Any, Any]]


def run_identity(
    name: str,
    chart: Chart,
    residual: Residual,
    cfg: SamplerConfig,
    singular: Sequence[tuple[str, Callable]] = (),
    points: Sequence[tuple] | None = None,
    note: str = "",
) -> IdentityReport:
    """Evaluate ``residual`` at sampled points.

    ``residual(xs)`` returns (differences, scale).  Exact mode demands every
    difference be exactly zero.  Float mode compares max|diff| / max(1, scale)
    with the tolerance.
    """
    pts = list(points) if points is not None else sample_points(chart, cfg, singular)
    is_float = cfg.mode == "float" or not chart.exact
    worst: Any = 0.0 if is_float else Q(0)
    witness = None
    for k, xs in enumerate(pts):
        diff, size = residual(xs)
        r = _absmax(diff)
        if is_float:
            r = float(r) / max(1.0, float(size or 0.0))
            bad = not (r <= cfg.tol)
        else:
            bad = r != 0
        if r > worst or (is_float and r != r):
            worst = r
        if bad and witness is None:
            witness = {
                "index": k,
                "point": dict(zip(chart.labels, (qstr(x) for x in xs))),
                "residual": _num(r) if not is_float else float(r),
            }
    return IdentityReport(
        name=name,
        samples=len(pts),
        seed=cfg.seed,
        mode="float" if is_float else "exact",
        max_residual=worst,
        passed=witness is None,
        tol=cfg.tol if is_float else None,
        witness=witness,
        note=note,
    )


def _fscale(*arrays) -> float:
    m = 0.0
    for a in arrays:
        if isinstance(a, np.ndarray) and a.dtype != object and a.size:
            m = max(m, float(np.max(np.abs(a))))
    return m


# concrete checks -----------------------------------------------------------------

def _schouten_scale(pi, rho, xs) -> float:
    P, dP = pi.jet_matrix(xs)
    R, dR = rho.jet_matrix(xs)
    if P.dtype == object:
        return 0.0
    B = np.einsum("il,ljk->ijk", np.abs(P), np.abs(dR)) + np.einsum("il,ljk->ijk", np.abs(R), np.abs(dP))
    return float(np.max(B)) if B.size else 0.0


def check_compatibility(pi: BivectorField, rho: BivectorField, cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    _same_chart(pi, rho)
    nm = name or f"[{pi.name},{rho.name}]=0"

    def res(xs):
        S = schouten_at(pi, rho, xs)
        return S, (_schouten_scale(pi, rho, xs) if S.dtype != object else 0)

    return run_identity(nm, pi.chart, res, cfg, pi.singular + rho.singular)


def check_jacobi(pi: BivectorField, cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    return check_compatibility(pi, pi, cfg, name or f"jacobi:{pi.name}")


def check_casimir(pi: BivectorField, f: ScalarField, cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    _same_chart(pi, f)

    def res(xs):
        P = pi.matrix(xs)
        g = f.gradient(xs)
        v = P @ g
        return v, _fscale(P) * _fscale(g)

    return run_identity(name or f"casimir:{f.name}/{pi.name}", pi.chart, res, cfg, pi.singular + f.singular)


def check_involution(pi: BivectorField, family: Sequence[ScalarField], cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    _same_chart(pi, *family)
    sing = pi.singular + tuple(s for f in family for s in f.singular)

    def res(xs):
        P = pi.matrix(xs)
        G = [f.gradient(xs) for f in family]
        vals = [G[a] @ P @ G[b] for a in range(len(G)) for b in range(a + 1, len(G))]
        return np.array(vals, dtype=object if P.dtype == object else float), _fscale(P) * max(
            [_fscale(g) for g in G] + [0.0]
        ) ** 2

    names = ",".join(f.name for f in family)
    return run_identity(name or f"involution:{{{names}}}/{pi.name}", pi.chart, res, cfg, sing)


def check_trivial_bracket(pi: BivectorField, family: Sequence[ScalarField], cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    """Every family member is a Casimir of pi."""
    _same_chart(pi, *family)
    sing = pi.singular + tuple(s for f in family for s in f.singular)

    def res(xs):
        P = pi.matrix(xs)
        cols = [P @ f.gradient(xs) for f in family]
        arr = np.concatenate(cols) if cols else np.zeros(0)
        return arr, _fscale(P) * max([_fscale(f.gradient(xs)) for f in family] + [0.0])

    return run_identity(name or f"trivial:{pi.name}", pi.chart, res, cfg, sing)


def check_poisson_map(
    F: Callable[[Sequence[Any]], Sequence[Any]],
    pi_src: BivectorField,
    pi_dst: BivectorField,
    cfg: SamplerConfig,
    name: str | None = None,
) -> IdentityReport:
    """DF . pi_src . DF^T == pi_dst o F."""

    def res(xs):
        y, J = map_jacobian(F, xs)
        lhs = J @ pi_src.matrix(xs) @ J.T
        rhs = pi_dst.matrix(list(y))
        return lhs - rhs, _fscale(lhs, rhs)

    return run_identity(name or f"poisson-map:{pi_src.name}->{pi_dst.name}", pi_src.chart, res, cfg, pi_src.singular)


def check_equal(
    name: str,
    chart: Chart,
    lhs: Callable[[tuple], Any],
    rhs: Callable[[tuple], Any],
    cfg: SamplerConfig,
    singular: Sequence[tuple[str, Callable]] = (),
    points: Sequence[tuple] | None = None,
    note: str = "",
) -> IdentityReport:
    """Pointwise equality of two array-valued evaluators."""

    def res(xs):
        a = _arr(lhs(xs))
        b = _arr(rhs(xs))
        return a - b, _fscale(a, b)

    return run_identity(name, chart, res, cfg, singular, points=points, note=note)


def _arr(v):
    if isinstance(v, np.ndarray):
        return v
    if isinstance(v, (list, tuple)):
        if v and all(isinstance(t, float) for t in v):
            return np.array(v, dtype=float)
        a = np.empty(len(v), dtype=object)
        a[:] = list(v)
        return a
    if isinstance(v, float):
        return np.array([v])
    a = np.empty(1, dtype=object)
    a[0] = v
    return a


def fields_equal(A: Field, B: Field, cfg: SamplerConfig, name: str | None = None, note: str = "") -> IdentityReport:
    """Two fields of the same kind agree componentwise."""
    _same_chart(A, B)
    return check_equal(
        name or f"{A.name}=={B.name}",
        A.chart,
        lambda xs: A.components(xs),
        lambda xs: B.components(xs),
        cfg,
        A.singular + B.singular,
        note=note,
    )


def _combo_at(terms, xs):
    acc = None
    for c, f in terms:
        v = as_array([scale(c, y) for y in f.components(xs)])
        acc = v if acc is None else acc + v
    return acc


def check_lie_relation(
    X: Field,
    target: Field,
    rhs: Sequence[tuple[Any, Field]],
    cfg: SamplerConfig,
    name: str | None = None,
) -> IdentityReport:
    """L_X target == sum c_k F_k, for a bivector or vector target.

    In float mode the residual is scaled by the size of the individual
    terms of the Lie derivative, so cancellation is not mistaken for error.
    """
    fields = [X, target] + [f for _, f in rhs]
    _same_chart(*fields)
    is_vec = target.rank == 1
    sing = tuple(s for f in fields for s in f.singular)

    def res(xs):
        Xv, dX = X.jet(xs)
        if is_vec:
            Yv, dY = target.jet(xs)
            lhs = Xv @ dY - Yv @ dX
            scale = _fscale(Xv) * _fscale(dY) + _fscale(Yv) * _fscale(dX)
        else:
            P, dP = target.jet_matrix(xs)
            T = np.einsum("k,kij->ij", Xv, dP) - np.einsum("kj,ki->ij", P, dX) - np.einsum("ik,kj->ij", P, dX)
            lhs = np.array([T[i, j] for (i, j) in target.pairs], dtype=T.dtype)
            scale = _fscale(Xv) * _fscale(dP) + 2 * _fscale(P) * _fscale(dX)
        r = _combo_at(rhs, xs) if rhs else np.zeros_like(lhs)
        return lhs - r, max(scale, _fscale(r))

    lbl = " + ".join(f"{c}*{f.name}" for c, f in rhs) or "0"
    return run_identity(name or f"L[{X.name}]{target.name}={lbl}", X.chart, res, cfg, sing)
