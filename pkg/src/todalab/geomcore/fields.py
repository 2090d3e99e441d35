"""Scalar, vector and bivector fields on a chart.

Every field wraps a *generic* evaluator: a function of a coordinate
sequence that only uses ``+ - * /`` and integer powers (plus ``exp``/``sqrt``
from :mod:`scalars` on float charts).  The same evaluator therefore runs on
exact rationals, floats, dual numbers and sympy ring elements.

Fields flagged ``polynomial`` are materialized once by running the evaluator
on the generators of ``QQ[x1..xD]``.  The resulting polynomials are compiled
to straight-line Python for fast exact evaluation, and their exact
partial derivatives give jets without dual-number overhead.
"""
from __future__ import annotations

from functools import cached_property
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from .charts import Chart, ChartError, PhasePoint, SingularPoint
from .scalars import Dual, Q, base_is_float, seed_duals, split

Coords = Sequence[Any]


def as_array(vals: Iterable[Any], shape: tuple[int, ...] | None = None) -> np.ndarray:
    vals = list(vals)
    if vals and all(isinstance(v, (float, int)) and not isinstance(v, bool) for v in vals) and any(
        isinstance(v, float) for v in vals
    ):
        arr = np.array(vals, dtype=float)
    else:
        arr = np.empty(len(vals), dtype=object)
        arr[:] = vals
    return arr.reshape(shape) if shape is not None else arr


# compiled polynomial evaluators ------------------------------------------------

def _monomial(exps: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}**{e}")
    return "*".join(parts)


def compile_polys(polys: Sequence[Any], nvars: int) -> tuple[Callable, Callable]:
    """Return (exact_eval, float_eval) for a list of ring elements."""
    consts: list[Any] = []
    exprs: list[str] = []
    for p in polys:
        terms = []
        for exps, c in p.terms():
            mono = _monomial(exps)
            k = len(consts)
            consts.append(Q(c))
            if not mono:
                terms.append(f"c{k}")
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"(-{mono})")
            else:
                terms.append(f"c{k}*{mono}")
        exprs.append(" + ".join(terms) if terms else "z")
    unpack = "".join(f"x{i}, " for i in range(nvars))
    src = "def _f(x):\n"
    if nvars:
        src += f"    {unpack}= x\n"
    src += "    return [" + ", ".join(exprs) + "]\n"
    code = compile(src, "<poly>", "exec")

    def build(cs, zero):
        ns = {f"c{k}": c for k, c in enumerate(cs)}
        ns["z"] = zero
        exec(code, ns)
        return ns["_f"]

    return build(consts, Q(0)), build([float(c) for c in consts], 0.0)


class Field:
    """Common machinery; subclasses fix the component layout."""

    rank = -1

    def __init__(
        self,
        chart: Chart,
        fn: Callable[[Coords], Any] | None,
        name: str,
        *,
        index: int | None = None,
        system: str | None = None,
        polynomial: bool = False,
        polys: Sequence[Any] | None = None,
        singular: Sequence[tuple[str, Callable]] = (),
    ):
        self.chart = chart
        self._fn = fn
        self.name = name
        self.index = index
        self.system = system
        self.singular = tuple(singular)
        self.polynomial = (polynomial or polys is not None) and chart.dim > 0
        if polys is not None and self.polynomial:
            self.__dict__["polys"] = [self._to_ring(p) for p in polys]
        if fn is None and polys is None:
            raise ValueError("field needs an evaluator or polynomials")

    # layout hooks
    @property
    def ncomp(self) -> int:
        raise NotImplementedError

    def _flatten(self, raw: Any) -> list:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r} on {self.chart.name})"

    # evaluation ------------------------------------------------------------
    def _to_ring(self, v: Any):
        R = self.chart.ring
        return v if getattr(v, "ring", None) is R else R(v)

    @cached_property
    def polys(self) -> list:
        if not self.polynomial:
            raise TypeError(f"{self.name} is not polynomial")
        gens = list(self.chart.ring.gens)
        return [self._to_ring(v) for v in self._flatten(self._fn(gens))]

    @cached_property
    def _compiled(self):
        return compile_polys(self.polys, self.chart.dim)

    @cached_property
    def _compiled_jet(self):
        gens = self.chart.ring.gens
        flat = [p.diff(g) for g in gens for p in self.polys]
        return compile_polys(flat, self.chart.dim)

    def components(self, xs: Coords) -> list:
        if self.polynomial and self.chart.dim:
            exact_f, float_f = self._compiled
            if self.chart.dim and base_is_float(xs[0]):
                return float_f(xs)
            return exact_f(xs)
        return self._flatten(self._fn(xs))

    def jet(self, xs: Coords) -> tuple[np.ndarray, np.ndarray]:
        """Values (m,) and partials (D, m) with grad[l, c] = d comp_c / d x_l."""
        d, m = self.chart.dim, self.ncomp
        plain = not any(isinstance(x, Dual) for x in xs)
        if self.polynomial and plain and d:
            vals = self.components(xs)
            exact_f, float_f = self._compiled_jet
            fl = d and base_is_float(xs[0])
            flat = (float_f if fl else exact_f)(xs)
            return as_array(vals), as_array(flat, (d, m))
        duals, lvl = seed_duals(list(xs))
        out = self.components(duals)
        vals, grads = [], []
        for y in out:
            v, g = split(y, lvl, d)
            vals.append(v)
            grads.append(g)
        g_arr = as_array([grads[c][l] for l in range(d) for c in range(m)], (d, m))
        return as_array(vals), g_arr

    # point handling
    def check_point(self, x: PhasePoint | Coords) -> tuple:
        if isinstance(x, PhasePoint):
            if not x.chart.same(self.chart):
                raise ChartError(f"point is on {x.chart.name}, field {self.name} lives on {self.chart.name}")
            xs = x.coords
        else:
            xs = tuple(x)
            if len(xs) != self.chart.dim:
                raise ChartError(f"{self.chart.name} expects {self.chart.dim} coordinates")
        bad = self.chart.violated(xs)
        if bad is None:
            for nm, pred in self.singular:
                if pred(xs) == 0:
                    bad = nm
                    break
        if bad is not None:
            raise SingularPoint(bad)
        return xs

    def all_singular(self) -> tuple:
        return self.chart.singular + self.singular


class ScalarField(Field):
    rank = 0

    @property
    def ncomp(self) -> int:
        return 1

    def _flatten(self, raw):
        return [raw]

    def __call__(self, xs: Coords):
        return self.components(xs)[0]

    def value(self, x: PhasePoint | Coords):
        return self(self.check_point(x))

    def gradient(self, xs: Coords) -> np.ndarray:
        return self.jet(xs)[1][:, 0]


class VectorField(Field):
    rank = 1

    @property
    def ncomp(self) -> int:
        return self.chart.dim

    def _flatten(self, raw):
        raw = list(raw)
        if len(raw) != self.chart.dim:
            raise ChartError(f"{self.name}: {len(raw)} components on a {self.chart.dim}-dim chart")
        return raw

    def value(self, x: PhasePoint | Coords) -> np.ndarray:
        return as_array(self.components(self.check_point(x)))

    def vector(self, xs: Coords) -> np.ndarray:
        return as_array(self.components(xs))


class BivectorField(Field):
    """Evaluator returns a mapping {(i, j): value}; only i != j allowed.

    Entries given as (j, i) with j > i are negated into the upper triangle,
    so antisymmetry holds by construction.
    """

    rank = 2

    @cached_property
    def pairs(self) -> list[tuple[int, int]]:
        d = self.chart.dim
        return [(i, j) for i in range(d) for j in range(i + 1, d)]

    @cached_property
    def _slot(self) -> dict:
        return {p: k for k, p in enumerate(self.pairs)}

    @property
    def ncomp(self) -> int:
        d = self.chart.dim
        return d * (d - 1) // 2

    def _flatten(self, raw):
        if not isinstance(raw, Mapping):
            return list(raw)
        out: list[Any] = [0] * self.ncomp
        for (i, j), v in raw.items():
            if i == j:
                raise ValueError(f"{self.name}: diagonal entry ({i},{i})")
            if i < j:
                k = self._slot[(i, j)]
                out[k] = out[k] + v
            else:
                k = self._slot[(j, i)]
                out[k] = out[k] - v
        return out

    def upper_to_matrix(self, vals: Sequence[Any]) -> np.ndarray:
        d = self.chart.dim
        fl = any(isinstance(v, float) for v in vals)
        M = np.zeros((d, d), dtype=float) if fl else np.full((d, d), 0, dtype=object)
        for (i, j), v in zip(self.pairs, vals):
            M[i, j] = v
            M[j, i] = -v
        return M

    def matrix(self, xs: Coords) -> np.ndarray:
        return self.upper_to_matrix(self.components(xs))

    def jet_matrix(self, xs: Coords) -> tuple[np.ndarray, np.ndarray]:
        """Matrix (D, D) and its partials (D, D, D) indexed [l, i, j]."""
        d = self.chart.dim
        vals, grads = self.jet(xs)
        M = self.upper_to_matrix(list(vals))
        if grads.dtype == object:
            dM = np.full((d, d, d), 0, dtype=object)
        else:
            dM = np.zeros((d, d, d), dtype=float)
        ii = np.array([p[0] for p in self.pairs], dtype=int)
        jj = np.array([p[1] for p in self.pairs], dtype=int)
        if len(ii):
            dM[:, ii, jj] = grads
            dM[:, jj, ii] = -grads
        return M, dM
