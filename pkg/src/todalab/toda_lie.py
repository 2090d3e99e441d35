"""Toda systems attached to simple Lie algebras.

Covers the Hamiltonian catalog (canonical, float), the A_2 change of
variables, the B_n chart with its odd bracket ladder, Dirac reduction and
the rational quadratic bracket on B_2 obtained from A_4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from . import toda_an
from .geomcore import (
    BivectorField,
    Chart,
    ChartError,
    Q,
    SamplerConfig,
    ScalarField,
    SingularPoint,
    VectorField,
    check_equal,
    check_poisson_map,
    exp,
)
from .geomcore import linalg as la
from .geomcore.checks import IdentityReport
from .geomcore.scalars import is_zero

SYSTEM = "bn"

# Hamiltonian catalog ----------------------------------------------------------------------

FAMILIES = ("A", "B", "C", "D", "G2", "F4", "E6", "E7", "E8")
_FIXED = {"G2": 2, "F4": 4, "E6": 6, "E7": 7, "E8": 8}


@dataclass(frozen=True)
class RootSystemId:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        want = _FIXED.get(self.family)
        if want is not None and self.rank != want:
            raise ValueError(f"{self.family} has rank {want}")
        lo = {"A": 1, "B": 2, "C": 2, "D": 3}.get(self.family, 0)
        if self.rank < lo:
            raise ValueError(f"{self.family}_n needs n >= {lo}")

    @classmethod
    def parse(cls, text: str) -> "RootSystemId":
        t = text.strip().upper()
        if t in _FIXED:
            return cls(t, _FIXED[t])
        if len(t) >= 2 and t[0] in "ABCD" and t[1:].isdigit():
            return cls(t[0], int(t[1:]))
        raise ValueError(f"cannot parse root system {text!r}")

    @property
    def label(self) -> str:
        return self.family if self.family in _FIXED else f"{self.family}{self.rank}"

    @property
    def ncoords(self) -> int:
        if self.family == "A":
            return self.rank + 1
        if self.family in ("B", "C", "D", "F4"):
            return self.rank
        if self.family == "G2":
            return 3
        return 8


def potential_exponents(rid: RootSystemId) -> list[tuple[Fraction, ...]]:
    """Linear forms f_k with U = sum_k exp(f_k . q)."""
    m = rid.ncoords
    h = Fraction(1, 2)

    def v(**kw):
        out = [Fraction(0)] * m
        for k, c in kw.items():
            out[int(k[1:]) - 1] += Fraction(c)
        return tuple(out)

    chain = lambda r: [v(**{f"q{j}": 1, f"q{j + 1}": -1}) for j in range(1, r + 1)]  # noqa: E731
    f = rid.family
    if f == "A":
        return chain(m - 1)
    if f == "B":
        return chain(m - 1) + [v(**{f"q{m}": 1})]
    if f == "C":
        return chain(m - 1) + [v(**{f"q{m}": 2})]
    if f == "D":
        return chain(m - 1) + [v(**{f"q{m - 1}": 1, f"q{m}": 1})]
    if f == "G2":
        return [v(q1=1, q2=-1), v(q1=-2, q2=1, q3=1)]
    if f == "F4":
        return chain(2) + [v(q3=1), v(q4=h, q1=-h, q2=-h, q3=-h)]
    links = {"E6": 4, "E7": 5, "E8": 6}[f]
    spin = tuple([-h] + [h] * 6 + [-h])
    return chain(links) + [v(q1=-1, q2=-1), spin]


@lru_cache(maxsize=None)
def lie_chart(rid: RootSystemId) -> Chart:
    m = rid.ncoords
    labels = tuple(f"q{i}" for i in range(1, m + 1)) + tuple(f"p{i}" for i in range(1, m + 1))
    return Chart(f"lie-{rid.label}", labels, exact=False, meta={"root_system": rid.label})


def _dot(c, q):
    s = 0
    for ci, qi in zip(c, q):
        if ci:
            s = s + float(ci) * qi
    return s


@lru_cache(maxsize=None)
def lie_hamiltonian(rid: RootSystemId) -> ScalarField:
    """H = |p|^2 / 2 + sum_k exp(f_k . q)."""
    m = rid.ncoords
    forms = potential_exponents(rid)

    def fn(xs):
        q, p = xs[:m], xs[m:]
        kin = sum((x * x for x in p), 0) / 2
        return kin + sum((exp(_dot(c, q)) for c in forms), 0)

    return ScalarField(lie_chart(rid), fn, f"H[{rid.label}]", system="lie-catalog")


@lru_cache(maxsize=None)
def lie_flow(rid: RootSystemId) -> VectorField:
    """Hamilton's equations: qdot = p, pdot = -sum_k f_k exp(f_k . q)."""
    m = rid.ncoords
    forms = [tuple(float(c) for c in f) for f in potential_exponents(rid)]

    def fn(xs):
        q, p = xs[:m], xs[m:]
        force = [0.0] * m
        for c in forms:
            e = exp(_dot(c, q))
            for i, ci in enumerate(c):
                if ci:
                    force[i] = force[i] - ci * e
        return list(p) + force

    return VectorField(lie_chart(rid), fn, f"flow[{rid.label}]", system="lie-catalog")


# A_2 equivalence -----------------------------------------------------------------------

_S2, _S3, _S6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)


def a2_transform(xs: Sequence[Any]) -> list:
    """(q1, q2, q3, p1, p2, p3) -> (Q1, Q2, P1, P2)."""
    q1, q2, q3, p1, p2, p3 = xs
    return [
        (q1 + q2 - 2 * q3) * (_S2 / 4),
        (q2 - q1) * (_S6 / 4),
        (p1 + p2) * (2 / _S2),
        (p2 - p1) * (2 / _S6),
    ]


@lru_cache(maxsize=None)
def a2_reduced_chart() -> Chart:
    return Chart("a2-reduced", ("Q1", "Q2", "P1", "P2"), exact=False)


def a2_reduced_hamiltonian(kinetic: bool = True, potential: bool = True) -> ScalarField:
    k23 = math.sqrt(2 / 3)

    def fn(xs):
        Q1, Q2, P1, P2 = xs
        out = 0
        if kinetic:
            out = out + (P1 * P1 + P2 * P2) / 2
        if potential:
            out = out + exp(k23 * (_S3 * Q1 + Q2)) + exp(-2 * k23 * Q2)
        return out

    return ScalarField(a2_reduced_chart(), fn, "H(Q,P)")


def _a2_parts(xs):
    q1, q2, q3, p1, p2, p3 = xs
    return (p1 * p1 + p2 * p2 + p3 * p3) / 2, math.exp(q1 - q2) + math.exp(q2 - q3)


def a2_canonical_check(cfg: SamplerConfig) -> IdentityReport:
    """The map carries the standard bracket on (q, p) to the one on (Q, P)."""
    src = toda_an.canonical_structures(3).J0
    dst = BivectorField(a2_reduced_chart(), lambda xs: {(0, 2): 1, (1, 3): 1}, "J0(Q,P)")
    return check_poisson_map(a2_transform, src, dst, cfg.but(mode="float"), name="a2:canonical")


def a2_equivalence_check(cfg: SamplerConfig, kinetic_factor: Fraction = Fraction(4, 3)) -> IdentityReport:
    """H(Q,P) o Phi == U(q) + kinetic_factor * K(p) on the slice p1+p2+p3 = 0.

    The potentials agree identically; ``kinetic_factor = 1`` is the literal
    equality of the two Hamiltonians, which does not hold.
    """
    ch = lie_chart(RootSystemId("A", 2))
    H = a2_reduced_hamiltonian()
    kf = float(kinetic_factor)

    def on_slice(xs):
        xs = list(xs)
        xs[5] = -(xs[3] + xs[4])
        return xs

    def lhs(xs):
        return [H(a2_transform(on_slice(xs)))]

    def rhs(xs):
        K, U = _a2_parts(on_slice(xs))
        return [U + kf * K]

    return check_equal(f"a2:H(Q,P)oPhi=U+{kinetic_factor}K", ch, lhs, rhs, cfg.but(mode="float"))


def a2_potential_check(cfg: SamplerConfig) -> IdentityReport:
    ch = lie_chart(RootSystemId("A", 2))
    U = a2_reduced_hamiltonian(kinetic=False)
    return check_equal(
        "a2:potential", ch, lambda xs: [U(a2_transform(xs))], lambda xs: [_a2_parts(xs)[1]], cfg.but(mode="float")
    )


# B_n chart ----------------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bn_chart(n: int) -> Chart:
    if n < 1:
        raise ValueError("rank must be >= 1")
    labels = tuple(f"a{i}" for i in range(1, n + 1)) + tuple(f"b{i}" for i in range(1, n + 1))
    return Chart(f"B{n}", labels, meta={"n": n})


@dataclass(frozen=True)
class BnState:
    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("B_n state needs n values of a and of b")

    def coords(self) -> tuple:
        return tuple(self.a) + tuple(self.b)


def bn_lax_matrices(xs: Sequence[Any], n: int) -> tuple[list, list]:
    a, b = list(xs[:n]), list(xs[n : 2 * n])
    m = 2 * n + 1
    d = b + [0] + [-x for x in reversed(b)]
    o = a + [-x for x in reversed(a)]
    L = [[0] * m for _ in range(m)]
    B = [[0] * m for _ in range(m)]
    for i in range(m):
        L[i][i] = d[i]
    for i in range(m - 1):
        L[i][i + 1] = L[i + 1][i] = o[i]
        B[i][i + 1] = o[i]
        B[i + 1][i] = -o[i]
    return L, B


def bn_lax(s: BnState) -> tuple[np.ndarray, np.ndarray]:
    L, B = bn_lax_matrices(s.coords(), len(s.a))
    return np.array(L, dtype=object), np.array(B, dtype=object)


@lru_cache(maxsize=None)
def bn_invariant(k: int, n: int) -> ScalarField:
    """H_k = tr(L^k)/k (odd k vanish identically)."""

    def fn(xs):
        return la.trace(la.matpow(bn_lax_matrices(xs, n)[0], k)) / k

    return ScalarField(bn_chart(n), fn, f"H{k}", index=k, system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def bn_lax_flow(n: int) -> VectorField:
    """(adot, bdot) read off from [B, L]."""

    def fn(xs):
        L, B = bn_lax_matrices(xs, n)
        BL, LB = la.matmul(B, L), la.matmul(L, B)
        return [BL[i][i + 1] - LB[i][i + 1] for i in range(n)] + [BL[i][i] - LB[i][i] for i in range(n)]

    return VectorField(bn_chart(n), fn, "[B,L]", system=SYSTEM, polynomial=True)


def bn_flaschka(xs: Sequence[Any]) -> list:
    """a_i = exp((q_i - q_{i+1})/2)/2, a_n = exp(q_n/2)/2, b_i = -p_i/2."""
    n = len(xs) // 2
    q, p = xs[:n], xs[n:]
    a = [exp((q[i] - q[i + 1]) / 2) / 2 for i in range(n - 1)] + [exp(q[n - 1] / 2) / 2]
    return a + [-x / 2 for x in p]


def _bn_table(n: int, j: int):
    ia = lambda i: i - 1  # noqa: E731
    ib = lambda i: n + i - 1  # noqa: E731

    def fn(xs):
        a = lambda i: xs[i - 1]  # noqa: E731
        b = lambda i: xs[n + i - 1]  # noqa: E731
        e: dict = {}

        def put(i, k, v):
            e[(i, k)] = e.get((i, k), 0) + v

        for i in range(1, n + 1):
            if j == 1:
                put(ia(i), ib(i), -a(i))
                if i < n:
                    put(ia(i), ib(i + 1), a(i))
                continue
            if i < n:
                put(ia(i), ia(i + 1), a(i) * a(i + 1) * b(i + 1))
                put(ia(i), ib(i), -a(i) * b(i) ** 2 - a(i) ** 3)
                put(ia(i), ib(i + 1), a(i) * b(i + 1) ** 2 + a(i) ** 3)
                put(ib(i), ib(i + 1), 2 * a(i) ** 2 * (b(i) + b(i + 1)))
            else:
                put(ia(i), ib(i), -a(i) * b(i) ** 2 - 2 * a(i) ** 3)
            if i + 2 <= n:
                put(ia(i), ib(i + 2), a(i) * a(i + 1) ** 2)
            if i > 1:
                put(ia(i), ib(i - 1), -a(i - 1) ** 2 * a(i))
        return e

    return fn


def _nonzero_a(n: int):
    def pred(xs):
        out = 1
        for x in xs[:n]:
            out = out * x
        return out

    return ("prod a", pred)


@lru_cache(maxsize=None)
def bn_bracket(j: int, n: int) -> BivectorField:
    """pi_1, pi_3 as tables; pi_5, pi_7 via the recursion operator."""
    if j % 2 == 0 or j < 1:
        raise ValueError(f"B_n brackets have odd index, got {j}")
    if j > 7:
        raise ValueError("B_n brackets are provided up to pi_7")
    if j <= 3:
        return BivectorField(bn_chart(n), _bn_table(n, j), f"pi{j}", index=j, system=SYSTEM, polynomial=True)
    out = bn_recursion_apply(bn_bracket(j - 2, n), n)
    out.name, out.index = f"pi{j}", j
    return out


class AsymmetricOutput(ArithmeticError):
    pass


def recursion_operator(xs: Sequence[Any], n: int) -> list:
    """N = pi_3 pi_1^{-1} at a point (needs every a_i != 0)."""
    P1 = bn_bracket(1, n).matrix(xs).tolist()
    P3 = bn_bracket(3, n).matrix(xs).tolist()
    return la.matmul(P3, la.inverse(P1))


def bn_recursion_apply(T: BivectorField | VectorField, n: int, name: str | None = None):
    """Left-compose with N at each point.

    Bivector outputs are checked for exact antisymmetry; failure raises
    :class:`AsymmetricOutput`.
    """
    if not T.chart.same(bn_chart(n)):
        raise ChartError(f"{T.name} is not on the B{n} chart")
    sing = (_nonzero_a(n),) + tuple(T.singular)
    nm = name or f"N.{T.name}"
    if isinstance(T, VectorField):
        return VectorField(T.chart, lambda xs: la.matvec(recursion_operator(xs, n), list(T.components(xs))), nm, system=SYSTEM, singular=sing)

    def fn(xs):
        M = la.matmul(recursion_operator(xs, n), T.matrix(xs).tolist())
        d = len(M)
        for i in range(d):
            for k in range(i, d):
                s = M[i][k] + M[k][i]
                if not _null(s):
                    raise AsymmetricOutput(f"N.{T.name} is not antisymmetric at entry ({i},{k})")
        return {(i, k): M[i][k] for i in range(d) for k in range(i + 1, d)}

    return BivectorField(T.chart, fn, nm, system=SYSTEM, singular=sing)


def _null(x) -> bool:
    from .geomcore.scalars import Dual

    if isinstance(x, Dual):
        return _null(x.val) and all(_null(e) for e in x.eps)
    if isinstance(x, float):
        return abs(x) <= 1e-9
    return x == 0


def bn_lenard_check(j: int, i: int, n: int, cfg: SamplerConfig) -> IdentityReport:
    """pi_{j+2} grad H_{2i} == pi_j grad H_{2i+2}."""
    from .geomcore import hamiltonian_vf

    lhs = hamiltonian_vf(bn_bracket(j + 2, n), bn_invariant(2 * i, n))
    rhs = hamiltonian_vf(bn_bracket(j, n), bn_invariant(2 * i + 2, n))
    return check_equal(
        f"bn-lenard:pi{j + 2}H{2 * i}=pi{j}H{2 * i + 2}",
        bn_chart(n),
        lhs.components,
        rhs.components,
        cfg,
        lhs.singular + rhs.singular,
    )


# Dirac reduction ------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstraintSet:
    """Constraints p_k on an ambient chart plus an embedding of the reduced chart.

    ``extensions`` are ambient functions restricting to the reduced
    coordinates; by default the ambient coordinates with the same labels.
    """

    ambient: Chart
    constraints: tuple[ScalarField, ...]
    reduced: Chart
    embed: Callable[[Sequence[Any]], list]
    extensions: tuple[ScalarField, ...] = field(default=())

    def ext(self) -> tuple[ScalarField, ...]:
        if self.extensions:
            return self.extensions
        from .geomcore import coordinate_function

        return tuple(coordinate_function(self.ambient, lab) for lab in self.reduced.labels)

    def on_surface(self, ys: Sequence[Any]) -> bool:
        return all(is_zero(c(ys)) for c in self.constraints)


def dirac_matrices(pi: BivectorField, C: ConstraintSet, ys: Sequence[Any]) -> tuple[list, list, list, list]:
    """(M, P, P^{-1}, E M C^T) at an ambient point."""
    M = pi.matrix(ys).tolist()
    Cg = [list(c.gradient(ys)) for c in C.constraints]
    E = [list(f.gradient(ys)) for f in C.ext()]
    MC = la.matmul(M, la.transpose(Cg)) if Cg else []
    P = la.matmul(Cg, MC) if Cg else []
    Pinv = la.inverse(P) if Cg else []
    EMC = la.matmul(E, MC) if Cg else []
    return M, P, Pinv, EMC


def dirac_reduced_matrix(pi: BivectorField, C: ConstraintSet, ys: Sequence[Any]) -> list:
    """{F,G}_N = {F,G} + sum {F,p_i} P^{ij} {G,p_j} for the coordinate functions."""
    M, P, Pinv, EMC = dirac_matrices(pi, C, ys)
    E = [list(f.gradient(ys)) for f in C.ext()]
    base = la.matmul(la.matmul(E, M), la.transpose(E))
    if not P:
        return base
    corr = la.matmul(la.matmul(EMC, Pinv), la.transpose(EMC))
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(base, corr)]


def dirac_bracket(pi: BivectorField, C: ConstraintSet, F: ScalarField, G: ScalarField, ys: Sequence[Any]) -> Any:
    """Reduced bracket of two ambient extensions at a constrained point."""
    ys = tuple(ys)
    if len(ys) != C.ambient.dim:
        raise ChartError("point is not on the ambient chart")
    if not C.on_surface(ys):
        raise ValueError("point does not satisfy the constraints")
    M = pi.matrix(ys)
    gF, gG = F.gradient(ys), G.gradient(ys)
    val = gF @ M @ gG
    if not C.constraints:
        return val
    _, P, Pinv, _ = dirac_matrices(pi, C, ys)
    Fp = [gF @ M @ c.gradient(ys) for c in C.constraints]
    Gp = [gG @ M @ c.gradient(ys) for c in C.constraints]
    m = len(Fp)
    return val + sum((Fp[i] * Pinv[i][j] * Gp[j] for i in range(m) for j in range(m)), 0)


def dirac_field(pi: BivectorField, C: ConstraintSet, name: str | None = None, singular=()) -> BivectorField:
    d = C.reduced.dim

    def fn(xs):
        R = dirac_reduced_matrix(pi, C, C.embed(list(xs)))
        return {(i, j): R[i][j] for i in range(d) for j in range(i + 1, d)}

    return BivectorField(C.reduced, fn, name or f"dirac[{pi.name}]", singular=singular)


# B_2 inside A_4 -----------------------------------------------------------------------------

def _b3(xs):
    return xs[4]


B2_SINGULAR = (("b3", _b3), ("a1", lambda xs: xs[0]), ("a2", lambda xs: xs[1]))


@lru_cache(maxsize=None)
def b2_chart() -> Chart:
    return Chart("B2-rational", ("a1", "a2", "b1", "b2", "b3"), singular=(("b3", _b3),))


def b2_embed(xs: Sequence[Any]) -> list:
    """(a1, a2, b1, b2, b3) -> A_4 point (a1, a2, -a2, -a1, b1, b2, b3, 2b3-b2, 2b3-b1)."""
    a1, a2, b1, b2, b3 = xs
    return [a1, a2, -a2, -a1, b1, b2, b3, 2 * b3 - b2, 2 * b3 - b1]


def b2_lax_matrix(xs: Sequence[Any]) -> list:
    a1, a2, b1, b2, b3 = xs
    return [
        [b1, a1, 0, 0, 0],
        [a1, b2, a2, 0, 0],
        [0, a2, b3, -a2, 0],
        [0, 0, -a2, 2 * b3 - b2, -a1],
        [0, 0, 0, -a1, 2 * b3 - b1],
    ]


@lru_cache(maxsize=None)
def b2_invariant(k: int) -> ScalarField:
    return ScalarField(b2_chart(), lambda xs: la.trace(la.matpow(b2_lax_matrix(xs), k)) / k, f"H{k}", index=k, polynomial=True)


@lru_cache(maxsize=None)
def b2_det() -> ScalarField:
    return ScalarField(b2_chart(), lambda xs: la.det(b2_lax_matrix(xs)), "det L", polynomial=True)


@lru_cache(maxsize=None)
def b2_constraints() -> ConstraintSet:
    amb = toda_an.flaschka_chart(5)
    ix = amb.index

    def lin(name, terms):
        return ScalarField(amb, lambda ys: sum((c * ys[ix(lab)] for lab, c in terms), 0), name, polynomial=True)

    cons = (
        lin("p1", [("a1", 1), ("a4", 1)]),
        lin("p2", [("a2", 1), ("a3", 1)]),
        lin("p3", [("b1", 1), ("b5", 1), ("b3", -2)]),
        lin("p4", [("b2", 1), ("b4", 1), ("b3", -2)]),
    )
    return ConstraintSet(amb, cons, b2_chart(), b2_embed)


@lru_cache(maxsize=None)
def b2_dirac_bracket(ambient_index: int = 2) -> BivectorField:
    """Dirac reduction of the A_4 bracket pi_{ambient_index} to B_2."""
    pi = toda_an.bracket(ambient_index, 5)
    return dirac_field(pi, b2_constraints(), name=f"dirac[A4 pi{ambient_index}]", singular=B2_SINGULAR)


def b2_p_matrix(xs: Sequence[Any]) -> list:
    """P = {p_i, p_j} at the B_2 point, computed from the ambient bracket."""
    return dirac_matrices(toda_an.bracket(2, 5), b2_constraints(), b2_embed(list(xs)))[1]


def b2_pinv_matrix(xs: Sequence[Any]) -> list:
    return dirac_matrices(toda_an.bracket(2, 5), b2_constraints(), b2_embed(list(xs)))[2]


def b2_p_printed(xs: Sequence[Any]) -> list:
    a1, a2, b1, b2, b3 = xs
    return [
        [0, 0, -2 * a1 * b3, 2 * a1 * b3],
        [0, 0, -4 * a2 * b3, -6 * a2 * b3],
        [2 * a1 * b3, 4 * a2 * b3, 0, 0],
        [-2 * a1 * b3, 6 * a2 * b3, 0, 0],
    ]


def b2_pinv_printed(xs: Sequence[Any]) -> list:
    """Inverse constraint matrix transcribed as published.

    Its lower-left block is the transpose of what antisymmetry requires.
    """
    a1, a2, b1, b2, b3 = xs
    u, v = a1 * b3, a2 * b3
    return [
        [0, 0, Q(3, 10) / u, -Q(1, 5) / u],
        [0, 0, Q(1, 10) / v, Q(1, 10) / v],
        [-Q(3, 10) / u, Q(1, 5) / u, 0, 0],
        [-Q(1, 10) / v, -Q(1, 10) / v, 0, 0],
    ]


def b2_printed_matrix_checks(cfg: SamplerConfig) -> list[IdentityReport]:
    """Computed P and P^-1 against the transcribed matrices at constrained points."""
    ch = b2_chart()

    def flat(M):
        return [v for row in M for v in row]

    return [
        check_equal("b2:P=printed", ch, lambda xs: flat(b2_p_matrix(xs)), lambda xs: flat(b2_p_printed(xs)), cfg, B2_SINGULAR),
        check_equal(
            "b2:Pinv=printed", ch, lambda xs: flat(b2_pinv_matrix(xs)), lambda xs: flat(b2_pinv_printed(xs)), cfg, B2_SINGULAR
        ),
    ]


def _b2_table(xs):
    a1, a2, b1, b2, b3 = xs
    i = {"a1": 0, "a2": 1, "b1": 2, "b2": 3, "b3": 4}
    return {
        (i["a1"], i["a2"]): a1 * a2 * (3 * b3 - b2 - 2 * b1) / (10 * b3),
        (i["a1"], i["b1"]): -a1 * (10 * b1 * b3 - 2 * b1 * b2 - 3 * b1**2 - a1**2) / (10 * b3),
        (i["a1"], i["b2"]): a1 * (10 * b2 * b3 - 3 * b2**2 - 2 * b1 * b2 - 4 * a2**2 - a1**2) / (10 * b3),
        (i["a1"], i["b3"]): a1 * (b2 - b1) / 5,
        (i["a2"], i["b1"]): a2 * (2 * b1 * b3 - 2 * b1 * b2 + a1**2) / (10 * b3),
        (i["a2"], i["b2"]): -a2 * (8 * b2 * b3 - 3 * b2**2 - 6 * a2**2 - 4 * a1**2) / (10 * b3),
        (i["a2"], i["b3"]): a2 * (b3 - b2) / 5,
        (i["b1"], i["b2"]): (10 * a1**2 * b3 - 3 * a1**2 * b2 - 2 * a2**2 * b1 - 3 * a1**2 * b1) / (5 * b3),
        (i["b1"], i["b3"]): 2 * a1**2 / 5,
        (i["b2"], i["b3"]): Q(2, 5) * (a2**2 - a1**2),
    }


@lru_cache(maxsize=None)
def b2_rational_bracket() -> BivectorField:
    return BivectorField(b2_chart(), _b2_table, "pi2[B2]", index=2, system=SYSTEM)


@lru_cache(maxsize=None)
def b2_linear_bracket() -> BivectorField:
    """Dirac reduction of the A_4 linear bracket (b3 is a Casimir)."""
    return b2_dirac_bracket(1)


def b2_matrix_json(xs: Sequence[Any]) -> dict:
    from .geomcore import qstr

    def dump(M):
        return [[qstr(Q(v)) for v in row] for row in M]

    return {
        "point": dict(zip(b2_chart().labels, (qstr(x) for x in xs))),
        "P": dump(b2_p_matrix(xs)),
        "Pinv": dump(b2_pinv_matrix(xs)),
    }


def structure_table(j: int, n: int) -> dict:
    pi = bn_bracket(j, n)
    if j > 3:
        raise ValueError("tables are available for pi_1 and pi_3; higher brackets are rational")
    ch = pi.chart
    entries = [
        {"i": ch.labels[i], "j": ch.labels[k], "poly": toda_an._poly_str(p)} for (i, k), p in zip(pi.pairs, pi.polys) if p
    ]
    return {"system": SYSTEM, "bracket": j, "n": n, "entries": entries}


def b2_table_json(point: Sequence[Any] | None = None) -> dict:
    """The rational B_2 bracket as numerator/denominator strings, or values at a point."""
    from .geomcore import qstr
    import sympy

    ch = b2_chart()
    out = {"system": SYSTEM, "bracket": "B2-rational", "entries": []}
    if point is None:
        syms = sympy.symbols(ch.labels)
        vals = _b2_table(syms)
        for (i, j), v in sorted(vals.items()):
            num, den = sympy.fraction(sympy.factor(sympy.together(v)))
            out["entries"].append(
                {"i": ch.labels[i], "j": ch.labels[j], "numerator": str(sympy.expand(num)), "denominator": str(den)}
            )
        return out
    xs = ch.point(point).coords
    if xs[4] == 0:
        raise SingularPoint("b3")
    vals = _b2_table(xs)
    out["point"] = dict(zip(ch.labels, (qstr(x) for x in xs)))
    for (i, j), v in sorted(vals.items()):
        out["entries"].append({"i": ch.labels[i], "j": ch.labels[j], "value": qstr(v)})
    return out
