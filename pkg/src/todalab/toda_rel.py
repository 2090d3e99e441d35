"""Relativistic Toda lattice in (a, b) variables plus its canonical form."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

import numpy as np

from .geomcore import (
    BivectorField,
    Chart,
    SamplerConfig,
    ScalarField,
    VectorField,
    Q,
    combine,
    exp,
    hamiltonian_vf,
    lie_derivative_bivector,
    sqrt,
    vf_commutator,
)
from .geomcore import linalg as la
from .geomcore.checks import IdentityReport, check_equal

SYSTEM = "relativistic"


@lru_cache(maxsize=None)
def rel_chart(N: int) -> Chart:
    """Coordinates a_1..a_{N-1}, b_1..b_N (a_N is identically zero)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    labels = tuple(f"a{i}" for i in range(1, N)) + tuple(f"b{i}" for i in range(1, N + 1))
    return Chart(f"rel{N}", labels, meta={"N": N})


@lru_cache(maxsize=None)
def canonical_chart(N: int) -> Chart:
    labels = tuple(f"q{i}" for i in range(1, N + 1)) + tuple(f"p{i}" for i in range(1, N + 1))
    return Chart(f"relcanon{N}", labels, exact=False, meta={"N": N})


@dataclass(frozen=True)
class RelState:
    a: tuple
    b: tuple

    def __post_init__(self):
        N = len(self.b)
        if len(self.a) not in (N - 1, N):
            raise ValueError("need N-1 (or N, last ignored) a-values for N b-values")

    @property
    def N(self) -> int:
        return len(self.b)

    def coords(self) -> tuple:
        return tuple(self.a[: self.N - 1]) + tuple(self.b)


def _ab(xs, N):
    a = list(xs[: N - 1])
    b = list(xs[N - 1 : 2 * N - 1])
    return (lambda i: a[i - 1] if 1 <= i <= N - 1 else 0), (lambda i: b[i - 1])


# canonical Hamiltonian ------------------------------------------------------------------

def _f(x, g):
    return sqrt(1 + g * g * exp(x))


def rel_hamiltonian(q: Sequence[float], p: Sequence[float], g: float) -> float:
    """sum_j e^{p_j} f(q_{j-1} - q_j) f(q_j - q_{j+1}), f(x) = sqrt(1 + g^2 e^x)."""
    if not g > 0:
        raise ValueError("coupling g must be positive")
    N = len(q)
    tot = 0.0
    for j in range(N):
        left = _f(q[j - 1] - q[j], g) if j > 0 else 1.0
        right = _f(q[j] - q[j + 1], g) if j < N - 1 else 1.0
        tot = tot + exp(p[j]) * left * right
    return tot


@lru_cache(maxsize=None)
def rel_hamiltonian_field(N: int, g: float) -> ScalarField:
    return ScalarField(
        canonical_chart(N), lambda xs: rel_hamiltonian(xs[:N], xs[N:], g), f"H(g={g})", system=SYSTEM
    )


def rel_coordinates(xs: Sequence[Any], g: float) -> list:
    """(q, p) -> (a_1..a_{N-1}, b_1..b_N); b_j = qdot_j - a_j."""
    N = len(xs) // 2
    q, p = xs[:N], xs[N:]

    def term(j):
        left = _f(q[j - 1] - q[j], g) if j > 0 else 1
        right = _f(q[j] - q[j + 1], g) if j < N - 1 else 1
        return exp(p[j]) * left * right

    qdot = [term(j) for j in range(N)]  # dH/dp_j
    a = [g * g * exp(q[j] - q[j + 1] + p[j]) * (_f(q[j - 1] - q[j], g) if j > 0 else 1) / _f(q[j] - q[j + 1], g) for j in range(N - 1)]
    a_full = a + [0]
    return a + [qdot[j] - a_full[j] for j in range(N)]


def newton_field(N: int, g: float, c: float = 0.0) -> VectorField:
    """Second-order relativistic equations as a first-order field on (Q, V),
    with q = Q + c t and qdot = V + c."""
    ch = Chart(f"relnewton{N}", tuple(f"Q{i}" for i in range(1, N + 1)) + tuple(f"V{i}" for i in range(1, N + 1)), exact=False)

    def fn(xs):
        Q, V = xs[:N], xs[N:]
        qd = [v + c for v in V]
        acc = []
        for j in range(N):
            s = 0
            if j > 0:
                e = exp(Q[j - 1] - Q[j])
                s = s + qd[j - 1] * e / (1 + g * g * e)
            if j < N - 1:
                e = exp(Q[j] - Q[j + 1])
                s = s - qd[j + 1] * e / (1 + g * g * e)
            acc.append(g * g * qd[j] * s)
        return list(V) + acc

    return VectorField(ch, fn, f"newton(g={g},c={c})")


def toda_newton_field(N: int) -> VectorField:
    """Classical Toda: Qddot_j = e^{Q_{j-1}-Q_j} - e^{Q_j-Q_{j+1}}."""
    ch = Chart(f"relnewton{N}", tuple(f"Q{i}" for i in range(1, N + 1)) + tuple(f"V{i}" for i in range(1, N + 1)), exact=False)

    def fn(xs):
        Q, V = xs[:N], xs[N:]
        acc = []
        for j in range(N):
            s = 0
            if j > 0:
                s = s + exp(Q[j - 1] - Q[j])
            if j < N - 1:
                s = s - exp(Q[j] - Q[j + 1])
            acc.append(s)
        return list(V) + acc

    return VectorField(ch, fn, "toda-newton")


def nonrelativistic_limit(
    N: int, Q0: Sequence[float], V0: Sequence[float], t_end: float = 2.0, step: float = 1e-3, cs=(10.0, 100.0, 1000.0)
) -> list[float]:
    """Max deviation of relativistic trajectories (g = 1/c) from the classical
    Toda trajectory, one value per c."""
    from .laxode import integrate_flow

    x0 = list(Q0) + list(V0)
    ref = integrate_flow(toda_newton_field(N), x0, t_end, step).states
    out = []
    for c in cs:
        tr = integrate_flow(newton_field(N, 1.0 / c, c), x0, t_end, step).states
        out.append(float(np.max(np.abs(tr - ref))))
    return out


# (a, b) side -------------------------------------------------------------------------

def rel_lax_matrices(xs: Sequence[Any], N: int) -> tuple[list, list]:
    A, B = _ab(xs, N)
    L = [[0] * N for _ in range(N)]
    for i in range(1, N):
        for j in range(1, i + 1):
            L[i - 1][j - 1] = A(i) + B(i)
        L[i - 1][i] = A(i)
    for j in range(N):
        L[N - 1][j] = B(N)
    Bm = [[0] * N for _ in range(N)]
    for i in range(1, N):
        Bm[i - 1][i] = A(i)
        Bm[i][i] = -A(i)
    return L, Bm


def rel_lax(s: RelState) -> tuple[np.ndarray, np.ndarray]:
    L, B = rel_lax_matrices(s.coords(), s.N)
    return np.array(L, dtype=object), np.array(B, dtype=object)


@lru_cache(maxsize=None)
def rel_equations(N: int) -> VectorField:
    """adot_j = a_j (b_j - b_{j+1} + a_{j-1} - a_{j+1}), bdot_j = b_j (a_{j-1} - a_j)."""

    def fn(xs):
        A, B = _ab(xs, N)
        return [A(j) * (B(j) - B(j + 1) + A(j - 1) - A(j + 1)) for j in range(1, N)] + [
            B(j) * (A(j - 1) - A(j)) for j in range(1, N + 1)
        ]

    return VectorField(rel_chart(N), fn, "rel-flow", system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def rel_invariant(k: int, N: int) -> ScalarField:
    """H_k = tr(L^k)/k."""

    def fn(xs):
        L, _ = rel_lax_matrices(xs, N)
        return la.trace(la.matpow(L, k)) / k

    return ScalarField(rel_chart(N), fn, f"H{k}", index=k, system=SYSTEM, polynomial=True)


def _prod_b(N):
    def fn(xs):
        out = 1
        for x in xs[N - 1 :]:
            out = out * x
        return out

    return fn


@lru_cache(maxsize=None)
def prod_b(N: int) -> ScalarField:
    return ScalarField(rel_chart(N), _prod_b(N), "prod b", system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def rel_det(N: int) -> ScalarField:
    return ScalarField(rel_chart(N), lambda xs: la.det(rel_lax_matrices(xs, N)[0]), "det L", polynomial=True)


@lru_cache(maxsize=None)
def rel_trace_inverse(N: int) -> ScalarField:
    def fn(xs):
        return la.trace(la.inverse(rel_lax_matrices(xs, N)[0]))

    return ScalarField(rel_chart(N), fn, "tr L^-1", system=SYSTEM, singular=(("prod b", _prod_b(N)),))


def _rel_table(N: int, n: int):
    def fn(xs):
        A, B = _ab(xs, N)
        ia = lambda i: i - 1  # noqa: E731
        ib = lambda i: N - 2 + i  # noqa: E731
        e: dict = {}

        def put(i, j, v):
            e[(i, j)] = e.get((i, j), 0) + v

        for i in range(1, N):
            if n == 1:
                put(ia(i), ib(i), -A(i))
                put(ia(i), ib(i + 1), A(i))
                put(ib(i), ib(i + 1), -A(i))
            elif n == 2:
                put(ia(i), ib(i), -A(i) * B(i))
                put(ia(i), ib(i + 1), A(i) * B(i + 1))
                if i < N - 1:
                    put(ia(i), ia(i + 1), A(i) * A(i + 1))
            else:
                if i < N - 1:
                    put(ia(i), ia(i + 1), A(i) ** 2 * A(i + 1) + A(i) * A(i + 1) ** 2 + 2 * A(i) * A(i + 1) * B(i + 1))
                    put(ia(i + 1), ib(i), -A(i) * A(i + 1) * B(i))
                    put(ia(i), ib(i + 2), A(i) * A(i + 1) * B(i + 2))
                if i < N - 2:
                    put(ia(i), ia(i + 2), A(i) * A(i + 1) * A(i + 2))
                put(ia(i), ib(i), -A(i) * B(i) * (A(i) + B(i)))
                put(ia(i), ib(i + 1), A(i) * B(i + 1) * (A(i) + B(i + 1)))
                put(ib(i), ib(i + 1), A(i) * B(i) * B(i + 1))
        return e

    return fn


@lru_cache(maxsize=None)
def rel_bracket(n: int, N: int) -> BivectorField:
    if n not in (1, 2, 3, 4):
        raise ValueError(f"relativistic bracket index must be 1..4, got {n}")
    if n == 4:
        if N != 3:
            raise ValueError("pi4 is only defined for N = 3")
        out = lie_derivative_bivector(rel_master(2, N), rel_bracket(2, N), name="pi4")
        out.index, out.system = 4, SYSTEM
        return out
    return BivectorField(rel_chart(N), _rel_table(N, n), f"pi{n}", index=n, system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def rel_master(n: int, N: int) -> VectorField:
    ch = rel_chart(N)
    if n == 1:
        def fn(xs):
            A, B = _ab(xs, N)
            r = [
                A(i) ** 2 + (i + 2) * A(i) * B(i + 1) + (1 - i) * A(i) * B(i) + (i + 2) * A(i) * A(i + 1) + (1 - i) * A(i - 1) * A(i)
                for i in range(1, N)
            ]
            s = [B(i) ** 2 + (i + 1) * A(i) * B(i) + (1 - i) * A(i - 1) * B(i) for i in range(1, N + 1)]
            return r + s

        return VectorField(ch, fn, "X1", index=1, system=SYSTEM, polynomial=True)
    if n == 2:
        if N != 3:
            raise ValueError("X2 is only available in closed form for N = 3")

        def fn2(xs):
            a1, a2, b1, b2, b3 = xs
            return [
                a1 * (a1**2 + 5 * a1 * b1 - a2**2 + 2 * a2 * b1 - 2 * a2 * b2 - a2 * b3 + 4 * b1**2 + 2 * b1 * b2 - b2**2),
                a2 * (3 * a1**2 + 4 * a1 * a2 + 3 * a1 * b1 + 6 * a1 * b2 + 2 * a1 * b3 + a2**2 + 4 * a2 * b2 + a2 * b3
                      - 2 * b1 * b2 + 2 * b1 * b3 + 3 * b2**2 + 2 * b2 * b3),
                b1 * (-2 * a1**2 - 2 * a1 * a2 - a1 * b1 - 2 * a1 * b2 + b1**2),
                b2 * (3 * a1**2 + 2 * a1 * a2 + 3 * a1 * b1 + 4 * a1 * b2 - a2**2 + 2 * a2 * b1 - a2 * b3 + b2**2),
                b3 * (2 * a2**2 + 2 * a1 * a2 - 2 * a2 * b1 + 2 * a2 * b2 + 3 * a2 * b3 + b3**2),
            ]

        return VectorField(ch, fn2, "X2", index=2, system=SYSTEM, polynomial=True)
    if n >= 3:
        if N != 3:
            raise ValueError("X_m for m >= 3 needs X2, available only for N = 3")
        # [X_1, X_{m-1}] = (m-2) X_m
        out = vf_commutator(rel_master(1, N), rel_master(n - 1, N))
        res = combine([(Q(1, n - 2), out)], name=f"X{n}")
        res.index, res.system = n, SYSTEM
        return res
    raise ValueError("master field index must be >= 1")


def rel_hamiltonian_flow(N: int) -> VectorField:
    """pi_2 grad H_1; equals minus the (a, b) equations of motion."""
    return hamiltonian_vf(rel_bracket(2, N), rel_invariant(1, N), name="pi2 dH1")


def lax_commutator_check(N: int, cfg: SamplerConfig) -> IdentityReport:
    """[L, B] equals L evaluated along the flow, entrywise."""
    F = rel_equations(N)

    def lhs(xs):
        L, B = rel_lax_matrices(xs, N)
        LB, BL = la.matmul(L, B), la.matmul(B, L)
        return [LB[i][j] - BL[i][j] for i in range(N) for j in range(N)]

    def rhs(xs):
        Ld, _ = rel_lax_matrices(F.components(xs), N)
        return [Ld[i][j] for i in range(N) for j in range(N)]

    return check_equal(f"rel-lax:[L,B]=Ldot(N={N})", rel_chart(N), lhs, rhs, cfg)


def structure_table(n: int, N: int) -> dict:
    from .toda_an import _poly_str

    pi = rel_bracket(n, N)
    ch = pi.chart
    entries = [
        {"i": ch.labels[i], "j": ch.labels[j], "poly": _poly_str(p)} for (i, j), p in zip(pi.pairs, pi.polys) if p
    ]
    return {"system": SYSTEM, "bracket": n, "N": N, "entries": entries}
