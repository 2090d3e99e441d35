"""Classical nonperiodic Toda lattice (A_{N-1}).

Two charts: canonical ``(q, p)`` (float, exponentials) and Flaschka
``(a, b)`` (exact).  Brackets pi_1..pi_3 are tables.  Higher pi_n and the
master fields X_n (n >= 2) come from the recursion-operator ladder
Z_i = R^i Z_0 on the canonical side, pushed down to the Flaschka chart.
"""
from __future__ import annotations

import math
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
    check_equal,
    check_lie_relation,
    check_poisson_map,
    combine,
    exp,
    hamiltonian_vf,
    lie_derivative_bivector,
    vf_commutator,
)
from .geomcore import linalg as la
from .geomcore.checks import IdentityReport, run_identity, sample_points
from .geomcore.scalars import Q

SYSTEM = "classical"
CANONICAL_HEIGHT = 4


# charts ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def flaschka_chart(N: int) -> Chart:
    if N < 1:
        raise ValueError("N must be >= 1")
    labels = tuple(f"a{i}" for i in range(1, N)) + tuple(f"b{i}" for i in range(1, N + 1))
    return Chart(f"flaschka{N}", labels, meta={"N": N})


@lru_cache(maxsize=None)
def canonical_chart(N: int) -> Chart:
    labels = tuple(f"q{i}" for i in range(1, N + 1)) + tuple(f"p{i}" for i in range(1, N + 1))
    return Chart(f"canonical{N}", labels, exact=False, meta={"N": N})


@lru_cache(maxsize=None)
def time_chart(N: int) -> Chart:
    """Flaschka chart extended by a time coordinate t (last slot)."""
    base = flaschka_chart(N)
    return Chart(f"flaschka{N}+t", base.labels + ("t",), meta={"N": N})


def _ab(xs: Sequence[Any], N: int) -> tuple[list, list]:
    return list(xs[: N - 1]), list(xs[N - 1 : 2 * N - 1])


@dataclass(frozen=True)
class FlaschkaState:
    a: tuple
    b: tuple

    @property
    def N(self) -> int:
        return len(self.b)

    def coords(self) -> tuple:
        return tuple(self.a) + tuple(self.b)


@dataclass(frozen=True)
class CanonicalState:
    q: tuple
    p: tuple

    def __post_init__(self):
        if len(self.q) != len(self.p) or len(self.q) < 2:
            raise ValueError("need len(q) == len(p) >= 2")


def flaschka_map(s: CanonicalState) -> FlaschkaState:
    """a_i = exp((q_i - q_{i+1})/2)/2, b_i = -p_i/2."""
    N = len(s.q)
    a = tuple(exp((s.q[i] - s.q[i + 1]) / 2) / 2 for i in range(N - 1))
    b = tuple(-pi / 2 for pi in s.p)
    return FlaschkaState(a, b)


def flaschka_coords(xs: Sequence[Any]) -> list:
    """Flaschka map on a flat (q, p) coordinate vector; works on duals."""
    N = len(xs) // 2
    q, p = xs[:N], xs[N:]
    return [exp((q[i] - q[i + 1]) / 2) / 2 for i in range(N - 1)] + [-x / 2 for x in p]


# Lax pair and invariants ----------------------------------------------------------

def lax_matrix(a: Sequence[Any], b: Sequence[Any]) -> list[list[Any]]:
    N = len(b)
    L = [[0] * N for _ in range(N)]
    for i in range(N):
        L[i][i] = b[i]
    for i in range(N - 1):
        L[i][i + 1] = a[i]
        L[i + 1][i] = a[i]
    return L


def lax_b(a: Sequence[Any], N: int) -> list[list[Any]]:
    B = [[0] * N for _ in range(N)]
    for i in range(N - 1):
        B[i][i + 1] = a[i]
        B[i + 1][i] = -a[i]
    return B


def lax_pair(s: FlaschkaState) -> tuple[np.ndarray, np.ndarray]:
    L = lax_matrix(s.a, s.b)
    B = lax_b(s.a, s.N)
    return np.array(L, dtype=object), np.array(B, dtype=object)


@lru_cache(maxsize=None)
def invariant(k: int, N: int) -> ScalarField:
    """H_k = tr(L^k)/k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ch = flaschka_chart(N)

    def fn(xs):
        a, b = _ab(xs, N)
        return la.trace(la.matpow(lax_matrix(a, b), k)) / k

    return ScalarField(ch, fn, f"H{k}", index=k, system=SYSTEM, polynomial=True)


def _det_pred(N: int):
    def pred(xs):
        a, b = _ab(xs, N)
        return la.det(lax_matrix(a, b))

    return ("det L", pred)


@lru_cache(maxsize=None)
def det_l(N: int) -> ScalarField:
    ch = flaschka_chart(N)

    def fn(xs):
        a, b = _ab(xs, N)
        return la.det(lax_matrix(a, b))

    return ScalarField(ch, fn, "det L", system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def trace_power(m: int, N: int) -> ScalarField:
    """tr L^m for any integer m (negative powers need det L != 0)."""
    ch = flaschka_chart(N)
    if m >= 0:
        return ScalarField(ch, lambda xs: la.trace(la.matpow(lax_matrix(*_ab(xs, N)), m)), f"tr L^{m}", polynomial=True)

    def fn(xs):
        Li = la.inverse(lax_matrix(*_ab(xs, N)))
        return la.trace(la.matpow(Li, -m))

    return ScalarField(ch, fn, f"tr L^{m}", system=SYSTEM, singular=(_det_pred(N),))


# brackets --------------------------------------------------------------------

def _table(N: int, n: int):
    A = lambda i: i - 1  # noqa: E731  a_i slot, 1-based i
    B = lambda i: N - 2 + i  # noqa: E731  b_i slot

    def fn(xs):
        a, b = _ab(xs, N)
        aa = lambda i: a[i - 1]  # noqa: E731
        bb = lambda i: b[i - 1]  # noqa: E731
        e: dict = {}

        def put(i, j, v):
            e[(i, j)] = e.get((i, j), 0) + v

        for i in range(1, N):
            if n == 1:
                put(A(i), B(i), -aa(i))
                put(A(i), B(i + 1), aa(i))
            elif n == 2:
                if i < N - 1:
                    put(A(i), A(i + 1), aa(i) * aa(i + 1) / 2)
                put(A(i), B(i), -aa(i) * bb(i))
                put(A(i), B(i + 1), aa(i) * bb(i + 1))
                put(B(i), B(i + 1), 2 * aa(i) ** 2)
            else:
                if i < N - 1:
                    put(A(i), A(i + 1), aa(i) * aa(i + 1) * bb(i + 1))
                    put(A(i), B(i + 2), aa(i) * aa(i + 1) ** 2)
                    put(A(i + 1), B(i), -aa(i) ** 2 * aa(i + 1))
                put(A(i), B(i), -aa(i) * bb(i) ** 2 - aa(i) ** 3)
                put(A(i), B(i + 1), aa(i) * bb(i + 1) ** 2 + aa(i) ** 3)
                put(B(i), B(i + 1), 2 * aa(i) ** 2 * (bb(i) + bb(i + 1)))
        return e

    return fn


@lru_cache(maxsize=None)
def bracket(n: int, N: int) -> BivectorField:
    """pi_n on the Flaschka chart of size N."""
    if n < 1:
        raise ValueError(f"bracket index must be >= 1, got {n}")
    ch = flaschka_chart(N)
    if n <= 3:
        return BivectorField(ch, _table(N, n), f"pi{n}", index=n, system=SYSTEM, polynomial=True)
    # L_{X_{n-1}} pi_1 = (1 - (n-1) - 2) pi_n = -n pi_n for the reduced ladder
    L = lie_derivative_bivector(master_field(n - 1, N), bracket(1, N))
    out = combine([(Q(-1, n), L)], name=f"pi{n}")
    out.index, out.system = n, SYSTEM
    return out


# master symmetries ------------------------------------------------------------------

@lru_cache(maxsize=None)
def master_field(n: int, N: int) -> VectorField:
    """X_{-1}, X_0, X_1 in closed form; reduced recursion ladder for n >= 2."""
    ch = flaschka_chart(N)
    if n < -1:
        raise ValueError("master field index must be >= -1")
    if n == -1:
        return VectorField(ch, lambda xs: [0] * (N - 1) + [1] * N, "X-1", index=-1, polynomial=True)
    if n == 0:
        return VectorField(ch, lambda xs: list(xs), "X0", index=0, polynomial=True)
    if n == 1:
        def fn(xs):
            a, b = _ab(xs, N)
            A = lambda i: a[i - 1] if 1 <= i <= N - 1 else 0  # noqa: E731
            da = [-i * A(i) * b[i - 1] + (i + 2) * A(i) * b[i] for i in range(1, N)]
            db = [(2 * i + 3) * A(i) ** 2 + (1 - 2 * i) * A(i - 1) ** 2 + b[i - 1] ** 2 for i in range(1, N + 1)]
            return da + db

        return VectorField(ch, fn, "X1", index=1, polynomial=True)
    return reduced_z(n, N)


# canonical side -------------------------------------------------------------------

def _j0(N: int) -> list[list[int]]:
    J = [[0] * (2 * N) for _ in range(2 * N)]
    for i in range(N):
        J[i][N + i] = 1
        J[N + i][i] = -1
    return J


def _j0_inv(N: int) -> list[list[int]]:
    return [[-v for v in row] for row in _j0(N)]


def _j1_entries(q_diff_exp: Sequence[Any], p: Sequence[Any], N: int) -> list[list[Any]]:
    """J_1 with e^{q_i - q_{i+1}} supplied directly."""
    J = [[0] * (2 * N) for _ in range(2 * N)]
    for i in range(N):
        for j in range(i + 1, N):
            J[i][j] = 1
            J[j][i] = -1
        J[N + i][i] = p[i]
        J[i][N + i] = -p[i]
    for i in range(N - 1):
        J[N + i][N + i + 1] = q_diff_exp[i]
        J[N + i + 1][N + i] = -q_diff_exp[i]
    return J


def _z0(p: Sequence[Any], N: int, printed: bool = False) -> list:
    if printed:
        return [Q(N + 1 - 2 * i, 2) for i in range(1, N + 1)] + list(p)
    return [N + 1 - 2 * i for i in range(1, N + 1)] + list(p)


def _recursion(J1: list, N: int) -> list:
    return la.matmul(J1, _j0_inv(N))


@dataclass(frozen=True)
class CanonicalStructures:
    J0: BivectorField
    J1: BivectorField
    Z0: VectorField
    h0: ScalarField
    h1: ScalarField


@lru_cache(maxsize=None)
def canonical_structures(N: int, printed_z0: bool = False) -> CanonicalStructures:
    ch = canonical_chart(N)

    def j0(xs):
        return {(i, N + i): 1 for i in range(N)}

    def j1(xs):
        q, p = xs[:N], xs[N:]
        e = [exp(q[i] - q[i + 1]) for i in range(N - 1)]
        J = _j1_entries(e, p, N)
        return {(i, j): J[i][j] for i in range(2 * N) for j in range(i + 1, 2 * N)}

    def z0(xs):
        return _z0(xs[N:], N, printed_z0)

    def h0(xs):
        return sum(xs[N:], 0)

    def h1(xs):
        q, p = xs[:N], xs[N:]
        return sum((x * x / 2 for x in p), 0) + sum((exp(q[i] - q[i + 1]) for i in range(N - 1)), 0)

    return CanonicalStructures(
        BivectorField(ch, j0, "J0", index=0),
        BivectorField(ch, j1, "J1", index=1),
        VectorField(ch, z0, "Z0" + ("(printed)" if printed_z0 else ""), index=0),
        ScalarField(ch, h0, "h0"),
        ScalarField(ch, h1, "h1"),
    )


@lru_cache(maxsize=None)
def canonical_hamiltonian(N: int) -> ScalarField:
    return canonical_structures(N).h1


def _ladder_parts(xs, N):
    q, p = xs[:N], xs[N:]
    e = [exp(q[i] - q[i + 1]) for i in range(N - 1)]
    return _recursion(_j1_entries(e, p, N), N), p


@lru_cache(maxsize=None)
def z_field(i: int, N: int) -> VectorField:
    """Z_i = R^i Z_0 on the canonical chart."""
    if i < 0:
        raise ValueError("ladder index must be >= 0")
    ch = canonical_chart(N)

    def fn(xs):
        R, p = _ladder_parts(xs, N)
        v = _z0(p, N)
        for _ in range(i):
            v = la.matvec(R, v)
        return v

    return VectorField(ch, fn, f"Z{i}", index=i)


@lru_cache(maxsize=None)
def j_tensor(j: int, N: int) -> BivectorField:
    """J_j = R^j J_0."""
    ch = canonical_chart(N)

    def fn(xs):
        R, _ = _ladder_parts(xs, N)
        M = _j0(N)
        for _ in range(j):
            M = la.matmul(R, M)
        return {(a, b): M[a][b] for a in range(2 * N) for b in range(a + 1, 2 * N)}

    return BivectorField(ch, fn, f"J{j}", index=j)


@lru_cache(maxsize=None)
def chi_canonical(j: int, N: int) -> VectorField:
    """chi_j = R^{j-1} chi_1 with chi_1 = J_0 grad h_1 (chi_0 = J_0 grad h_0)."""
    ch = canonical_chart(N)
    cs = canonical_structures(N)
    base = hamiltonian_vf(cs.J0, cs.h1, name="chi1")
    if j == 0:
        return hamiltonian_vf(cs.J0, cs.h0, name="chi0")

    def fn(xs):
        R, _ = _ladder_parts(xs, N)
        v = list(base.components(xs))
        for _ in range(j - 1):
            v = la.matvec(R, v)
        return v

    return VectorField(ch, fn, f"chi{j}", index=j)


@lru_cache(maxsize=None)
def reduced_z(i: int, N: int) -> VectorField:
    """2^{-i} DF . Z_i, written in Flaschka variables.

    On the canonical side Z_i only sees q through e^{q_k - q_{k+1}} = 4 a_k^2
    and p = -2 b, so the pushforward is a polynomial field in (a, b).
    """
    ch = flaschka_chart(N)

    def fn(xs):
        a, b = _ab(xs, N)
        e = [4 * x * x for x in a]
        p = [-2 * x for x in b]
        R = _recursion(_j1_entries(e, p, N), N)
        v = _z0(p, N)
        for _ in range(i):
            v = la.matvec(R, v)
        zq, zp = v[:N], v[N:]
        scale = Q(1, 2**i)
        da = [scale * a[k] * (zq[k] - zq[k + 1]) / 2 for k in range(N - 1)]
        db = [-scale * zp[k] / 2 for k in range(N)]
        return da + db

    return VectorField(ch, fn, f"X{i}~", index=i, polynomial=True)


def z_reduction_check(i: int, N: int, cfg: SamplerConfig) -> IdentityReport:
    """DF.Z_i is constant along fibres of F (q -> q + c) and equals 2^i X_i~."""
    ch = canonical_chart(N)
    Z = z_field(i, N)
    red = reduced_z(i, N)
    from .geomcore import map_jacobian

    def push(xs):
        y, J = map_jacobian(flaschka_coords, xs)
        return y, J @ Z.vector(xs)

    def res(xs):
        y, v1 = push(xs)
        shifted = tuple(x + 0.75 for x in xs[:N]) + tuple(xs[N:])
        _, v2 = push(shifted)
        v3 = (2.0**i) * np.array([float(c) for c in red.components(list(y))])
        return np.concatenate([v1 - v2, v1 - v3]), float(np.max(np.abs(v1)))

    return run_identity(f"z-reduction:Z{i}", ch, res, cfg.but(mode="float"))


def canonical_ladder_check(i: int, j: int, N: int, cfg: SamplerConfig) -> list[IdentityReport]:
    """L_{Z_i} J_j = (j-i-1) J_{i+j}, [Z_i, Z_j] = (j-i) Z_{i+j} and
    [Z_i, chi_j] = j chi_{i+j}, in float mode on the canonical chart.

    Samples are drawn with height <= 4: beyond that e^{q_i - q_j} spans more
    than double precision can resolve after two recursion steps.
    """
    fc = cfg.but(mode="float", height=min(cfg.height, CANONICAL_HEIGHT))
    Zi = z_field(i, N)
    return [
        check_lie_relation(Zi, j_tensor(j, N), [(j - i - 1, j_tensor(i + j, N))], fc),
        check_lie_relation(Zi, z_field(j, N), [(j - i, z_field(i + j, N))], fc),
        check_lie_relation(Zi, chi_canonical(j, N), [(j, chi_canonical(i + j, N))], fc),
    ]


def flaschka_ladder_check(i: int, m: int, N: int, cfg: SamplerConfig) -> IdentityReport:
    """L_{X_i} pi_m = (m-i-2) pi_{m+i} for the reduced ladder fields."""
    X = master_field(i, N) if i <= 0 else reduced_z(i, N)
    rhs = [(m - i - 2, bracket(m + i, N))] if m + i >= 1 else []
    return check_lie_relation(X, bracket(m, N), rhs, cfg)


# flows -----------------------------------------------------------------------------

@lru_cache(maxsize=None)
def toda_flow(N: int) -> VectorField:
    """da_i = a_i (b_{i+1} - b_i), db_i = 2 (a_i^2 - a_{i-1}^2)."""
    ch = flaschka_chart(N)

    def fn(xs):
        a, b = _ab(xs, N)
        A = lambda i: a[i - 1] if 1 <= i <= N - 1 else 0  # noqa: E731
        return [A(i) * (b[i] - b[i - 1]) for i in range(1, N)] + [
            2 * (A(i) ** 2 - A(i - 1) ** 2) for i in range(1, N + 1)
        ]

    return VectorField(ch, fn, "toda", polynomial=True)


@lru_cache(maxsize=None)
def chi(l: int, N: int) -> VectorField:
    """Hamiltonian field of H_l with respect to pi_1."""
    return hamiltonian_vf(bracket(1, N), invariant(l, N), name=f"chi{l}")


def canonical_flow(N: int) -> VectorField:
    cs = canonical_structures(N)
    return hamiltonian_vf(cs.J0, cs.h1, name="hamilton")


# symmetry condition -----------------------------------------------------------------

def _embed(p, R):
    """Move a Flaschka-ring polynomial into the (a, b, t) ring."""
    return R.from_dict({exps + (0,): c for exps, c in p.terms()})


def _lift_t(V: VectorField, N: int, tcoef: VectorField | None = None) -> VectorField:
    """Extend a Flaschka field to (a, b, t) as V + t * tcoef, zero t-component."""
    R = time_chart(N).ring
    t = R.gens[-1]
    polys = [_embed(p, R) for p in V.polys]
    if tcoef is not None:
        polys = [p + t * _embed(c, R) for p, c in zip(polys, tcoef.polys)]
    polys.append(R.zero)
    return VectorField(time_chart(N), None, V.name + "(t)", polys=polys)


def y_closed_form(N: int, literal: bool = False, flip: bool = False) -> VectorField:
    """Y_1 = X_1 + t chi_3 written out componentwise on (a, b, t).

    ``literal`` reproduces the printed t-coefficient of the b-equations,
    which differs from chi_3; ``flip`` negates one coefficient of X_1 (a
    deliberately wrong field for negative controls).
    """
    tc = time_chart(N)

    def fn(xs):
        a, b = _ab(xs, N)
        t = xs[-1]
        A = lambda j: a[j - 1] if 1 <= j <= N - 1 else 0  # noqa: E731
        Bf = lambda j: b[j - 1] if 1 <= j <= N else 0  # noqa: E731
        c0 = -1 if flip else 1
        phi = [
            -c0 * j * A(j) * Bf(j)
            + (j + 2) * A(j) * Bf(j + 1)
            + t * (A(j) * A(j + 1) ** 2 + A(j) * Bf(j + 1) ** 2 - A(j - 1) ** 2 * A(j) - A(j) * Bf(j) ** 2)
            for j in range(1, N)
        ]
        if literal:
            tt = lambda j: 2 * A(j) ** 2 * Bf(j + 1) + 2 * A(j) ** 2 - 2 * A(j - 1) ** 2 * A(j) - 2 * A(j - 1) ** 2 * Bf(j)  # noqa: E731
        else:
            tt = lambda j: 2 * A(j) ** 2 * Bf(j + 1) + 2 * A(j) ** 2 * Bf(j) - 2 * A(j - 1) ** 2 * Bf(j - 1) - 2 * A(j - 1) ** 2 * Bf(j)  # noqa: E731
        psi = [(2 * j + 3) * A(j) ** 2 + (1 - 2 * j) * A(j - 1) ** 2 + Bf(j) ** 2 + t * tt(j) for j in range(1, N + 1)]
        return phi + psi + [0]

    tag = "printed" if literal else ("flipped" if flip else "")
    return VectorField(tc, fn, f"Y1{('-' + tag) if tag else ''}", polynomial=True)


def y_field(n: int, N: int) -> VectorField:
    """Y_n = X_n + t chi_{n+2} on the extended chart."""
    return _lift_t(master_field(n, N), N, chi(n + 2, N) if n + 2 >= 1 else None)


def symmetry_residual(Y: VectorField, N: int, cfg: SamplerConfig, name: str | None = None) -> IdentityReport:
    """dY/dt + [chi_2, Y] at sampled (a, b, t)."""
    tc = time_chart(N)
    chi2 = _lift_t(chi(2, N), N)
    com = vf_commutator(chi2, Y)
    t = tc.ring.gens[-1]
    dYdt = [p.diff(t) for p in Y.polys]
    res = VectorField(tc, None, "res", polys=[a + b for a, b in zip(dYdt, com.polys)])
    return check_equal(
        name or f"symmetry:{Y.name}",
        tc,
        lambda xs: res.components(xs),
        lambda xs: [0] * tc.dim,
        cfg,
    )


# Lenard, shift, eigen-gradients ---------------------------------------------------------

def lenard_check(n: int, l: int, N: int, cfg: SamplerConfig) -> IdentityReport:
    """pi_n grad H_l == pi_{n-1} grad H_{l+1}."""
    if n < 2:
        raise ValueError("Lenard relation needs n >= 2 (pi_0 is undefined)")
    lhs = hamiltonian_vf(bracket(n, N), invariant(l, N))
    rhs = hamiltonian_vf(bracket(n - 1, N), invariant(l + 1, N))
    return check_equal(
        f"lenard:pi{n}H{l}=pi{n - 1}H{l + 1}",
        flaschka_chart(N),
        lhs.components,
        rhs.components,
        cfg,
    )


def shift_map(xs: Sequence[Any], N: int, c: Any = 1) -> list:
    a, b = _ab(xs, N)
    return a + [x + c for x in b]


def shift_isomorphism_check(n: int, N: int, cfg: SamplerConfig) -> IdentityReport:
    """f: b -> b+1 is Poisson from sum_j C(n-1, j) pi_{n-j} to pi_n."""
    src = combine([(math.comb(n - 1, j), bracket(n - j, N)) for j in range(n)], name=f"binom{n}")
    return check_poisson_map(lambda xs: shift_map(xs, N), src, bracket(n, N), cfg, name=f"shift:pi{n}")


def eigen_gradient(s: FlaschkaState, which: int, gap: float = 1e-8) -> np.ndarray:
    """grad(lambda) = (2 v_i v_{i+1}, v_i^2) for a simple eigenvalue."""
    L = np.array(lax_matrix([float(x) for x in s.a], [float(x) for x in s.b]), dtype=float)
    w, V = np.linalg.eigh(L)
    nb = [abs(w[which] - w[k]) for k in range(len(w)) if k != which]
    if nb and min(nb) <= gap:
        raise ValueError(f"eigenvalue {which} is not simple (gap {min(nb):.3g})")
    v = V[:, which]
    return np.concatenate([2 * v[:-1] * v[1:], v * v])


# structure-constant dump -----------------------------------------------------------------

def structure_table(n: int, N: int, point: Sequence[Any] | None = None) -> dict:
    pi = bracket(n, N)
    ch = pi.chart
    entries = []
    if n <= 3 and point is None:
        for (i, j), p in zip(pi.pairs, pi.polys):
            if p:
                entries.append({"i": ch.labels[i], "j": ch.labels[j], "poly": _poly_str(p)})
        return {"system": SYSTEM, "bracket": n, "N": N, "entries": entries}
    from .geomcore import qstr

    xs = point if point is not None else sample_points(ch, SamplerConfig(samples=1))[0]
    vals = pi.components(xs)
    for (i, j), v in zip(pi.pairs, vals):
        if v != 0:
            entries.append({"i": ch.labels[i], "j": ch.labels[j], "value": qstr(v)})
    return {
        "system": SYSTEM,
        "bracket": n,
        "N": N,
        "point": dict(zip(ch.labels, (qstr(x) for x in xs))),
        "entries": entries,
    }


def _poly_str(p) -> str:
    return str(p).replace(" ", "")
