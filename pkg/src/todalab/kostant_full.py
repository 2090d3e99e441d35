"""Full Kostant-Toda lattice on epsilon + B_- in gl(n).

Chart coordinates are the entries x_ij with i >= j, ordered band by band:
the diagonal f_1..f_n, then the first subdiagonal g_i, the second h_i, the
third k_i, and generic ``x{i}{j}`` labels further down.  The superdiagonal
is fixed at 1 and everything above it is 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from .geomcore import (
    BivectorField,
    Chart,
    SamplerConfig,
    ScalarField,
    VectorField,
    Q,
    apply_vf,
    check_casimir,
    check_equal,
    check_lie_relation,
    check_trivial_bracket,
    combine,
    hamiltonian_vf,
    lie_derivative_bivector,
    qstr,
)
from .geomcore import linalg as la
from .geomcore.charts import SingularPoint
from .geomcore.checks import IdentityReport

SYSTEM = "kostant"
_BANDS = "fghk"


class ConsistencyError(ValueError):
    """The Y ansatz produced a vector field that leaves epsilon + B_-."""


def _slots(n: int) -> list[tuple[int, int]]:
    """0-based (row, col) with row >= col, band by band."""
    return [(j + d, j) for d in range(n) for j in range(n - d)]


def _label(i: int, j: int) -> str:
    d = i - j
    return f"{_BANDS[d]}{j + 1}" if d < len(_BANDS) else f"x{i + 1}{j + 1}"


@lru_cache(maxsize=None)
def kostant_chart(n: int) -> Chart:
    if n < 2:
        raise ValueError("matrix size must be >= 2")
    return Chart(f"kostant{n}", tuple(_label(i, j) for i, j in _slots(n)), meta={"n": n})


@lru_cache(maxsize=None)
def _pos(n: int) -> dict:
    return {s: k for k, s in enumerate(_slots(n))}


def lax_matrix(xs: Sequence[Any], n: int) -> list[list[Any]]:
    X = [[0] * n for _ in range(n)]
    for (i, j), v in zip(_slots(n), xs):
        X[i][j] = v
    for i in range(n - 1):
        X[i][i + 1] = 1
    return X


def _restrict(M: list[list[Any]], n: int) -> list:
    return [M[i][j] for i, j in _slots(n)]


def _upper(M: list[list[Any]], n: int) -> list[tuple[int, int, Any]]:
    return [(i, j, M[i][j]) for i in range(n) for j in range(i + 1, n) if M[i][j] != 0]


@dataclass(frozen=True)
class KostantState:
    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.n * (self.n + 1) // 2:
            raise ValueError(f"gl({self.n}) state needs {self.n * (self.n + 1) // 2} entries")

    @classmethod
    def from_matrix(cls, M: Sequence[Sequence[Any]]) -> "KostantState":
        n = len(M)
        for i, j, v in _upper([list(r) for r in M], n):
            if not (j == i + 1 and v == 1):
                raise ValueError(f"entry ({i + 1},{j + 1}) = {v} is off epsilon + B_-")
        for i in range(n - 1):
            if M[i][i + 1] != 1:
                raise ValueError("superdiagonal must be 1")
        return cls(n, tuple(M[i][j] for i, j in _slots(n)))

    def coords(self) -> tuple:
        return self.entries

    def matrix(self) -> list[list[Any]]:
        return lax_matrix(self.entries, self.n)


# flow and brackets ------------------------------------------------------------------

@lru_cache(maxsize=None)
def kostant_flow(n: int) -> VectorField:
    """Xdot = [X, P X], P the strictly lower projection."""

    def fn(xs):
        X = lax_matrix(xs, n)
        PX = [[X[i][j] if i > j else 0 for j in range(n)] for i in range(n)]
        A, B = la.matmul(X, PX), la.matmul(PX, X)
        return [A[i][j] - B[i][j] for i, j in _slots(n)]

    return VectorField(kostant_chart(n), fn, "kostant-flow", system=SYSTEM, polynomial=True)


def _pi1_table(n: int):
    slots = _slots(n)

    def fn(xs):
        X = lax_matrix(xs, n)
        e = {}
        for u, (i, j) in enumerate(slots):
            for v in range(u + 1, len(slots)):
                k, l = slots[v]
                val = (X[k][j] if l == i else 0) - (X[i][l] if j == k else 0)
                if not (isinstance(val, int) and val == 0):
                    e[(u, v)] = val
        return e

    return fn


@lru_cache(maxsize=None)
def kostant_bracket(index: int, n: int) -> BivectorField:
    """pi_1 from {x_ij, x_kl} = delta_li x_kj - delta_jk x_il; pi_2 and pi_3
    generated by the Lie derivative along X_1."""
    if index not in (1, 2, 3):
        raise ValueError(f"Kostant bracket index must be 1, 2 or 3, got {index}")
    if index == 1:
        return BivectorField(kostant_chart(n), _pi1_table(n), "pi1", index=1, system=SYSTEM, polynomial=True)
    L = lie_derivative_bivector(kostant_master(1, n), kostant_bracket(index - 1, n))
    out = combine([(Q(-1, 2) if index == 2 else Q(-1), L)], name=f"pi{index}")
    out.index, out.system = index, SYSTEM
    return out


# master symmetries ------------------------------------------------------------------

def _y_matrix(index: int, X: list[list[Any]], n: int) -> list[list[Any]]:
    f = lambda i: X[i - 1][i - 1]  # noqa: E731
    g = lambda i: X[i][i - 1] if 1 <= i <= n - 1 else 0  # noqa: E731
    Y = [[0] * n for _ in range(n)]
    if index == 1:
        for i in range(1, n + 1):
            Y[i - 1][i - 1] = i * f(i) + sum((f(k) for k in range(1, i)), 0)
        for i in range(1, n):
            Y[i - 1][i] = i
        return Y
    for i in range(1, n + 1):
        lower = range(1, i)
        Y[i - 1][i - 1] = (
            i * f(i) ** 2
            + sum((f(k) ** 2 for k in lower), 0)
            + f(i) * sum((f(k) for k in lower), 0)
            + i * (g(i) + g(i - 1))
            + 2 * sum((g(k) for k in range(1, i - 1)), 0)
        )
    for i in range(1, n):
        Y[i - 1][i] = i * (f(i + 1) + f(i)) + sum((f(k) for k in range(1, i)), 0)
    for i in range(1, n - 1):
        Y[i - 1][i + 1] = i
    return Y


def _master_matrix(index: int, xs: Sequence[Any], n: int) -> list[list[Any]]:
    X = lax_matrix(xs, n)
    Y = _y_matrix(index, X, n)
    YX, XY = la.matmul(Y, X), la.matmul(X, Y)
    P = la.matpow(X, index + 1)
    return [[YX[i][j] - XY[i][j] + P[i][j] for j in range(n)] for i in range(n)]


def master_consistency(index: int, n: int) -> list[tuple[int, int, str]]:
    """Nonzero entries of [Y, X] + X^{k+1} above the diagonal (should be none)."""
    if index not in (1, 2):
        raise ValueError("Y ansatz exists for X_1 and X_2 only")
    gens = list(kostant_chart(n).ring.gens)
    return [(i + 1, j + 1, str(v)) for i, j, v in _upper(_master_matrix(index, gens, n), n)]


@lru_cache(maxsize=None)
def kostant_master(index: int, n: int) -> VectorField:
    """X_{-1} = grad H_1, X_0 Euler, X_1 and X_2 from Xdot = [Y, X] + X^2 (X^3)."""
    ch = kostant_chart(n)
    if index == -1:
        return VectorField(ch, lambda xs: [1 if i == j else 0 for i, j in _slots(n)], "X-1", index=-1, polynomial=True)
    if index == 0:
        return VectorField(ch, lambda xs: list(xs), "X0", index=0, polynomial=True)
    if index not in (1, 2):
        raise ValueError(f"Kostant master index must be in -1..2, got {index}")
    bad = master_consistency(index, n)
    if bad:
        raise ConsistencyError(f"X{index} leaves the chart at {bad}")
    return VectorField(
        ch, lambda xs: _restrict(_master_matrix(index, xs, n), n), f"X{index}", index=index, system=SYSTEM, polynomial=True
    )


def chi(l: int, n: int) -> VectorField:
    return hamiltonian_vf(kostant_bracket(1, n), poly_invariant(l, n), name=f"chi{l}")


# invariants -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def poly_invariant(k: int, n: int) -> ScalarField:
    """H_k = tr(X^k)/k."""
    if k < 1:
        raise ValueError("H_k needs k >= 1")
    return ScalarField(
        kostant_chart(n), lambda xs: la.trace(la.matpow(lax_matrix(xs, n), k)) / k, f"H{k}", index=k, system=SYSTEM, polynomial=True
    )


@lru_cache(maxsize=None)
def det_x(n: int) -> ScalarField:
    return ScalarField(kostant_chart(n), lambda xs: la.det(lax_matrix(xs, n)), "det X", system=SYSTEM, polynomial=True)


@lru_cache(maxsize=None)
def trace_inverse(n: int) -> ScalarField:
    d = det_x(n)
    return ScalarField(
        kostant_chart(n),
        lambda xs: la.trace(la.inverse(lax_matrix(xs, n))),
        "tr X^-1",
        system=SYSTEM,
        singular=(("det X", d),),
    )


@dataclass(frozen=True)
class RationalInvariant:
    """I_rk = (coefficient of lam^{n-2k-r}) / E_0k of det((X - lam I)_(k))."""

    n: int
    r: int
    k: int
    numerator: ScalarField
    denominator: ScalarField
    field: ScalarField

    @property
    def name(self) -> str:
        return self.field.name

    def __call__(self, xs: Sequence[Any]) -> Any:
        if self.denominator(xs) == 0:
            raise SingularPoint(f"E0{self.k}")
        return self.field(xs)

    def to_json(self, xs: Sequence[Any]) -> dict:
        num, den = self.numerator(xs), self.denominator(xs)
        out = {"r": self.r, "k": self.k, "numerator": qstr(num), "denominator": qstr(den)}
        out["value"] = None if den == 0 else qstr(num / den)
        return out


@lru_cache(maxsize=None)
def _minor_coeff(n: int, k: int, r: int) -> ScalarField:
    name = f"E{r}{k}"
    return ScalarField(
        kostant_chart(n), lambda xs: la.char_minor(lax_matrix(xs, n), k)[r], name, system=SYSTEM, polynomial=True
    )


@lru_cache(maxsize=None)
def rational_invariant(r: int, k: int, n: int) -> RationalInvariant:
    if not 0 <= k <= (n - 1) // 2:
        raise ValueError(f"k must lie in 0..{(n - 1) // 2} for gl({n})")
    if not 1 <= r <= n - 2 * k:
        raise ValueError(f"r must lie in 1..{n - 2 * k} for k = {k}")
    num, den = _minor_coeff(n, k, r), _minor_coeff(n, k, 0)

    def fn(xs):
        return num(xs) / den(xs)

    sing = ((f"E0{k}", den),)
    fld = ScalarField(kostant_chart(n), fn, f"I{r}{k}", system=SYSTEM, singular=sing)
    return RationalInvariant(n, r, k, num, den, fld)


def all_rational(n: int, k_min: int = 1) -> list[RationalInvariant]:
    return [rational_invariant(r, k, n) for k in range(k_min, (n - 1) // 2 + 1) for r in range(1, n - 2 * k + 1)]


def gl5_k() -> list[ScalarField]:
    """K_1..K_4 on gl(5): the negatives of I_11, I_21, I_31, I_12."""
    out = []
    for i, (r, k) in enumerate(((1, 1), (2, 1), (3, 1), (1, 2)), 1):
        I = rational_invariant(r, k, 5).field
        f = combine([(-1, I)], name=f"K{i}")
        out.append(f)
    return out


def invariant_family(n: int) -> list[ScalarField]:
    """H_1..H_n together with every I_rk, k >= 1."""
    return [poly_invariant(k, n) for k in range(1, n + 1)] + [I.field for I in all_rational(n)]


# checks --------------------------------------------------------------------------------

def _singular_all(n: int) -> tuple:
    return tuple((f"E0{k}", _minor_coeff(n, k, 0)) for k in range(1, (n - 1) // 2 + 1))


def master_hamiltonian_check(i: int, j: int, n: int, cfg: SamplerConfig) -> IdentityReport:
    """X_i(H_j) = (i + j) H_{i+j}."""
    lhs = apply_vf(kostant_master(i, n), poly_invariant(j, n))
    rhs = poly_invariant(i + j, n) if i + j >= 1 else None
    c = i + j
    return check_equal(
        f"kostant:X{i}(H{j})={c}H{i + j}(n={n})",
        kostant_chart(n),
        lambda xs: [lhs(xs)],
        lambda xs: [c * rhs(xs) if rhs is not None else 0],
        cfg,
    )


def chi_commutator_check(i: int, l: int, n: int, cfg: SamplerConfig) -> IdentityReport:
    """[X_i, chi_l] = (l - 1) chi_{l+i}."""
    return check_lie_relation(
        kostant_master(i, n), chi(l, n), [(l - 1, chi(l + i, n))], cfg, name=f"kostant:[X{i},chi{l}]=({l}-1)chi{l + i}(n={n})"
    )


def lenard_check(i: int, l: int, n: int, cfg: SamplerConfig) -> IdentityReport:
    """pi_i grad H_l = pi_{i-1} grad H_{l+1}."""
    A = hamiltonian_vf(kostant_bracket(i, n), poly_invariant(l, n))
    B = hamiltonian_vf(kostant_bracket(i - 1, n), poly_invariant(l + 1, n))
    return check_equal(f"kostant:lenard pi{i}dH{l}=pi{i - 1}dH{l + 1}(n={n})", kostant_chart(n), A.components, B.components, cfg)


def deformation_check(i: int, j: int, n: int, cfg: SamplerConfig) -> IdentityReport:
    """L_{X_i} pi_j - (j - i - 2) pi_{i+j} is trivial on the invariant family."""
    L = lie_derivative_bivector(kostant_master(i, n), kostant_bracket(j, n))
    T = combine([(1, L), (-(j - i - 2), kostant_bracket(i + j, n))], name=f"L[X{i}]pi{j}-({j - i - 2})pi{i + j}")
    return check_trivial_bracket(T, invariant_family(n), cfg, name=f"kostant:deformation({i},{j}) trivial(n={n})")


def _vf_at(X: VectorField, f: ScalarField, xs):
    return X.vector(xs) @ f.gradient(xs)


def gl5_master_action_check(cfg: SamplerConfig) -> IdentityReport:
    """X_1 on K_1..K_4 and the degree-5 formula for X_2(K_3), gl(5)."""
    n = 5
    K1, K2, K3, K4 = gl5_k()
    H = [None] + [poly_invariant(k, n) for k in range(1, 6)]
    X1, X2 = kostant_master(1, n), kostant_master(2, n)

    def lhs(xs):
        return [_vf_at(X1, K, xs) for K in (K1, K2, K3, K4)] + [_vf_at(X2, K3, xs)]

    def rhs(xs):
        k1, k2, k3, k4 = K1(xs), K2(xs), K3(xs), K4(xs)
        h1, h2, h3, h4, h5 = (H[k](xs) for k in range(1, 6))
        x2k3 = (
            h1**5 / 120 - h1**3 * h2 / 6 + h1 * k1 * k3 - h1**2 * k3 / 2 + h1 * h2**2 / 2
            + h1**2 * h3 / 2 - h1 * h4 + k2 * k3 - h2 * h3 + k3 * h2 + h5
        )
        return [2 * k2 + k1**2, 3 * k3 + k1 * k2, k1 * k3, k4**2, x2k3]

    return check_equal("kostant:gl5 X1(K1..K4), X2(K3)", kostant_chart(n), lhs, rhs, cfg, _singular_all(n))


def rational_lenard_check(cfg: SamplerConfig) -> IdentityReport:
    """pi_1 dK_{i+1} = pi_2 dK_i (i = 1..3) and pi_2 dM_1 = pi_3 dK_1, gl(5)."""
    n = 5
    K = gl5_k()
    P1, P2, P3 = (kostant_bracket(i, n) for i in (1, 2, 3))

    def lhs(xs):
        out = []
        for i in range(3):
            out += list(P1.matrix(xs) @ K[i + 1].gradient(xs))
        g1, g2 = K[0].gradient(xs), K[1].gradient(xs)
        k1 = K[0](xs)
        out += list(P2.matrix(xs) @ (g2 + k1 * g1))
        return out

    def rhs(xs):
        out = []
        for i in range(3):
            out += list(P2.matrix(xs) @ K[i].gradient(xs))
        out += list(P3.matrix(xs) @ K[0].gradient(xs))
        return out

    return check_equal("kostant:gl5 rational lenard", kostant_chart(n), lhs, rhs, cfg, _singular_all(n))


def casimir_checks(n: int, cfg: SamplerConfig) -> list[IdentityReport]:
    out = [
        check_casimir(kostant_bracket(1, n), poly_invariant(1, n), cfg, name=f"kostant:casimir trX/pi1(n={n})"),
        check_casimir(kostant_bracket(2, n), det_x(n), cfg, name=f"kostant:casimir detX/pi2(n={n})"),
        check_casimir(kostant_bracket(3, n), trace_inverse(n), cfg, name=f"kostant:casimir trX^-1/pi3(n={n})"),
    ]
    if n >= 3:
        out.append(check_casimir(kostant_bracket(1, n), rational_invariant(1, 1, n).field, cfg, name=f"kostant:casimir I11/pi1(n={n})"))
    if n == 5:
        K = gl5_k()
        out.append(check_casimir(kostant_bracket(2, n), K[2], cfg, name="kostant:casimir K3/pi2(n=5)"))
        out.append(check_casimir(kostant_bracket(2, n), K[3], cfg, name="kostant:casimir K4/pi2(n=5)"))
        out.append(check_casimir(kostant_bracket(3, n), K[3], cfg, name="kostant:casimir K4/pi3(n=5)"))
    return out


# dumps ------------------------------------------------------------------------------

def structure_table(index: int, n: int, point: Sequence[Any] | None = None) -> dict:
    from .toda_an import _poly_str

    pi = kostant_bracket(index, n)
    ch = pi.chart
    out = {"system": SYSTEM, "bracket": index, "n": n}
    if point is None:
        out["entries"] = [
            {"i": ch.labels[i], "j": ch.labels[j], "poly": _poly_str(p)} for (i, j), p in zip(pi.pairs, pi.polys) if p
        ]
    else:
        xs = pi.check_point(point)
        vals = pi.components(xs)
        out["point"] = dict(zip(ch.labels, map(qstr, xs)))
        out["entries"] = [
            {"i": ch.labels[i], "j": ch.labels[j], "value": qstr(v)} for (i, j), v in zip(pi.pairs, vals) if v != 0
        ]
    return out


def rational_json(n: int, point: Sequence[Any]) -> dict:
    """Numerator/denominator values of every I_rk at a point."""
    ch = kostant_chart(n)
    xs = tuple(point)
    if len(xs) != ch.dim:
        raise ValueError(f"gl({n}) point needs {ch.dim} coordinates")
    return {
        "system": SYSTEM,
        "n": n,
        "point": dict(zip(ch.labels, map(qstr, xs))),
        "invariants": [I.to_json(xs) for I in all_rational(n, k_min=0)],
    }
