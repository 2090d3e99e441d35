"""Poisson-geometry operations on fields.

Polynomial inputs give polynomial outputs, computed once in the coordinate
ring.  Other inputs give lazily evaluated fields built on jets.
"""
from __future__ import annotations

from typing import Any, Callable, Sequence

import numpy as np

from .charts import Chart, ChartError, PhasePoint
from .fields import BivectorField, Field, ScalarField, VectorField, as_array
from .scalars import scale


def _same_chart(*fields: Field) -> Chart:
    c = fields[0].chart
    for f in fields[1:]:
        if not f.chart.same(c):
            raise ChartError(f"chart mismatch: {f.name} on {f.chart.name}, expected {c.name}")
    return c


def _singulars(*fields: Field) -> tuple:
    out, seen = [], set()
    for f in fields:
        for nm, p in f.singular:
            if nm not in seen:
                seen.add(nm)
                out.append((nm, p))
    return tuple(out)


def _poly_matrix(pi: BivectorField) -> list[list[Any]]:
    R = pi.chart.ring
    d = pi.chart.dim
    M = [[R.zero] * d for _ in range(d)]
    for (i, j), p in zip(pi.pairs, pi.polys):
        M[i][j] = p
        M[j][i] = -p
    return M


# point evaluation ---------------------------------------------------------------

def eval_bivector(pi: BivectorField, x: PhasePoint | Sequence[Any]) -> np.ndarray:
    return pi.matrix(pi.check_point(x))


def schouten_at(pi: BivectorField, rho: BivectorField, xs: Sequence[Any]) -> np.ndarray:
    """[pi, rho]^{ijk} at a point, by the cyclic coordinate formula."""
    P, dP = pi.jet_matrix(xs)
    if rho is pi:
        R, dR = P, dP
    else:
        R, dR = rho.jet_matrix(xs)
    A = np.einsum("il,ljk->ijk", P, dR)
    if rho is pi:
        A = A + A
    else:
        A = A + np.einsum("il,ljk->ijk", R, dP)
    return A + A.transpose(1, 2, 0) + A.transpose(2, 0, 1)


def schouten_22(pi: BivectorField, rho: BivectorField, x: PhasePoint | Sequence[Any]) -> np.ndarray:
    _same_chart(pi, rho)
    xs = pi.check_point(x)
    rho.check_point(xs)
    return schouten_at(pi, rho, xs)


def poisson_bracket(pi: BivectorField, f: ScalarField, g: ScalarField, x) -> Any:
    _same_chart(pi, f, g)
    xs = pi.check_point(x)
    f.check_point(xs)
    g.check_point(xs)
    return bracket_at(pi, f, g, xs)


def bracket_at(pi: BivectorField, f: ScalarField, g: ScalarField, xs) -> Any:
    P = pi.matrix(xs)
    return f.gradient(xs) @ P @ g.gradient(xs)


# field constructors ---------------------------------------------------------------

def hamiltonian_vf(pi: BivectorField, H: ScalarField, name: str | None = None) -> VectorField:
    """chi^i = pi^{ij} d_j H."""
    chart = _same_chart(pi, H)
    nm = name or f"X[{pi.name}]({H.name})"
    if pi.polynomial and H.polynomial:
        M = _poly_matrix(pi)
        h = H.polys[0]
        grad = [h.diff(g) for g in chart.ring.gens]
        comps = [sum((M[i][j] * grad[j] for j in range(chart.dim)), chart.ring.zero) for i in range(chart.dim)]
        return VectorField(chart, None, nm, polys=comps, system=pi.system)

    def fn(xs):
        return list(pi.matrix(xs) @ H.gradient(xs))

    return VectorField(chart, fn, nm, system=pi.system, singular=_singulars(pi, H))


def apply_vf(X: VectorField, f: ScalarField, name: str | None = None) -> ScalarField:
    """The function X(f) = X^k d_k f."""
    chart = _same_chart(X, f)
    nm = name or f"{X.name}({f.name})"
    if X.polynomial and f.polynomial:
        p = f.polys[0]
        val = sum((c * p.diff(g) for c, g in zip(X.polys, chart.ring.gens)), chart.ring.zero)
        return ScalarField(chart, None, nm, polys=[val])

    def fn(xs):
        return X.vector(xs) @ f.gradient(xs)

    return ScalarField(chart, fn, nm, singular=_singulars(X, f))


def vf_commutator(X: VectorField, Y: VectorField, name: str | None = None) -> VectorField:
    """[X,Y]^i = X^k d_k Y^i - Y^k d_k X^i."""
    chart = _same_chart(X, Y)
    nm = name or f"[{X.name},{Y.name}]"
    if X.polynomial and Y.polynomial:
        gens = chart.ring.gens
        comps = []
        for i in range(chart.dim):
            s = chart.ring.zero
            for k, g in enumerate(gens):
                s += X.polys[k] * Y.polys[i].diff(g) - Y.polys[k] * X.polys[i].diff(g)
            comps.append(s)
        return VectorField(chart, None, nm, polys=comps)

    def fn(xs):
        Xv, dX = X.jet(xs)
        Yv, dY = Y.jet(xs)
        return list(Xv @ dY - Yv @ dX)

    return VectorField(chart, fn, nm, singular=_singulars(X, Y))


def lie_derivative_bivector(X: VectorField, pi: BivectorField, name: str | None = None) -> BivectorField:
    """(L_X pi)^{ij} = X^k d_k pi^{ij} - pi^{kj} d_k X^i - pi^{ik} d_k X^j."""
    chart = _same_chart(X, pi)
    nm = name or f"L[{X.name}]{pi.name}"
    if X.polynomial and pi.polynomial:
        gens = chart.ring.gens
        d = chart.dim
        M = _poly_matrix(pi)
        dX = [[X.polys[i].diff(g) for i in range(d)] for g in gens]  # dX[k][i]
        out = []
        for (i, j) in pi.pairs:
            s = chart.ring.zero
            pij = M[i][j]
            for k, g in enumerate(gens):
                s += X.polys[k] * pij.diff(g)
                s -= M[k][j] * dX[k][i] + M[i][k] * dX[k][j]
            out.append(s)
        return BivectorField(chart, None, nm, polys=out, system=pi.system)

    def fn(xs):
        Xv, dX = X.jet(xs)
        P, dP = pi.jet_matrix(xs)
        T = np.einsum("k,kij->ij", Xv, dP) - np.einsum("kj,ki->ij", P, dX) - np.einsum("ik,kj->ij", P, dX)
        return [T[i, j] for (i, j) in pi.pairs]

    return BivectorField(chart, fn, nm, system=pi.system, singular=_singulars(X, pi))


def combine(terms: Sequence[tuple[Any, Field]], name: str = "combo") -> Field:
    """Linear combination sum c_k F_k of same-kind fields."""
    fields = [f for _, f in terms]
    chart = _same_chart(*fields)
    kind = type(fields[0])
    if any(type(f) is not kind for f in fields):
        raise TypeError("cannot combine fields of different kinds")
    if all(f.polynomial for f in fields):
        m = fields[0].ncomp
        out = [chart.ring.zero] * m
        for c, f in terms:
            out = [a + chart.ring(c) * b for a, b in zip(out, f.polys)]
        return kind(chart, None, name, polys=out)

    def fn(xs):
        acc = None
        for c, f in terms:
            v = [scale(c, y) for y in f.components(xs)]
            acc = v if acc is None else [a + b for a, b in zip(acc, v)]
        return acc[0] if kind is ScalarField else acc

    return kind(chart, fn, name, singular=_singulars(*fields))


def constant_field(chart: Chart, kind: type, value: Any = 0, name: str = "zero") -> Field:
    n = {ScalarField: 1, VectorField: chart.dim, BivectorField: chart.dim * (chart.dim - 1) // 2}[kind]
    if kind is ScalarField:
        return ScalarField(chart, lambda xs: value, name, polynomial=True)
    return kind(chart, lambda xs: [value] * n, name, polynomial=True)


def coordinate_function(chart: Chart, label: str) -> ScalarField:
    i = chart.index(label)
    return ScalarField(chart, lambda xs: xs[i], label, polynomial=True)


def pullback_bivector(F: Callable, jacobian: Callable, pi_src: BivectorField, xs) -> np.ndarray:
    """DF . pi_src . DF^T at xs (pushforward of the tensor along F)."""
    J = jacobian(xs)
    return J @ pi_src.matrix(xs) @ J.T


def map_jacobian(F: Callable[[Sequence[Any]], Sequence[Any]], xs: Sequence[Any]) -> tuple[list, np.ndarray]:
    """Value and Jacobian (m, d) of a coordinate map, via dual numbers."""
    from .scalars import seed_duals, split

    duals, lvl = seed_duals(list(xs))
    out = F(duals)
    vals, rows = [], []
    for y in out:
        v, g = split(y, lvl, len(xs))
        vals.append(v)
        rows.append(list(g))
    return vals, as_array([c for r in rows for c in r], (len(out), len(xs)))
