"""Named check suites per system, integrate targets and table dumps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Callable, Sequence

import numpy as np

from .. import kostant_full as kf
from .. import toda_an as an
from .. import toda_lie as lie
from .. import toda_rel as rel
from ..geomcore import (
    BivectorField,
    IdentityReport,
    Q,
    SamplerConfig,
    ScalarField,
    VectorField,
    apply_vf,
    check_casimir,
    check_compatibility,
    check_equal,
    check_involution,
    check_jacobi,
    check_lie_relation,
    check_poisson_map,
    check_trivial_bracket,
    combine,
    coordinate_function,
    fields_equal,
    hamiltonian_vf,
    lie_derivative_bivector,
)
from .config import ConfigError

Suite = Callable[[Any, SamplerConfig], list]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    run: Suite
    doc: str
    literal: bool = False  # reproduces a printed form that does not hold; not part of "all"
    applies: Callable[[Any], bool] = lambda dim: True


@dataclass(frozen=True)
class Target:
    """What `integrate` needs: chart, flow, invariants, a default point."""

    flow: VectorField
    invariants: list
    point: Callable[[int], list]


@dataclass(frozen=True)
class SystemSpec:
    name: str
    dim_flag: str
    default_dim: Any
    parse_dim: Callable[[Any], Any]
    checks: tuple[CheckSpec, ...]
    target: Callable[[Any], Target]
    table: Callable[[Any, str, Sequence[Any] | None], dict]
    table_indices: Callable[[Any], tuple[str, ...]]

    @property
    def vocabulary(self) -> list[str]:
        return [c.name for c in self.checks]

    def select(self, names, dim) -> list[CheckSpec]:
        by = {c.name: c for c in self.checks}
        if names == "all":
            return [c for c in self.checks if not c.literal and c.applies(dim)]
        bad = [n for n in names if n not in by]
        if bad:
            raise ConfigError(f"unknown check(s) {bad} for {self.name}; valid checks: {', '.join(self.vocabulary)}")
        out = []
        for n in names:
            if not by[n].applies(dim):
                raise ConfigError(f"check {n!r} does not apply to {self.name} with {self.dim_flag} = {dim}")
            out.append(by[n])
        return out


# helpers ----------------------------------------------------------------------------

def _control(rep: IdentityReport) -> IdentityReport:
    """A negative control passes when the underlying identity fails."""
    return replace(rep, name=f"control:{rep.name}", passed=not rep.passed, note="expected to fail")


def _action(X: VectorField, f: ScalarField, c: Any, g: ScalarField | None, cfg: SamplerConfig, name: str) -> IdentityReport:
    """X(f) == c g."""
    lhs = apply_vf(X, f)
    return check_equal(name, f.chart, lambda xs: [lhs(xs)], lambda xs: [c * g(xs) if g is not None else 0], cfg, f.singular)


def _int_dim(lo: int, hi: int | None, flag: str):
    def parse(v):
        try:
            d = int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"--{flag} must be an integer, got {v!r}") from None
        if d < lo or (hi is not None and d > hi):
            rng = f">= {lo}" if hi is None else f"in {lo}..{hi}"
            raise ConfigError(f"--{flag} must be {rng}, got {d}")
        return d

    return parse


def _small_point(dim: int, seed: int, lo: float, hi: float) -> list:
    import random

    rng = random.Random(seed)
    return [rng.uniform(lo, hi) for _ in range(dim)]


def _pairs(idx):
    return list(itertools.combinations(idx, 2))


def _tau() -> BivectorField:
    """{a1,b1} = b1, {a1,b2} = a1 on the N = 2 Flaschka chart; not Poisson."""
    return BivectorField(an.flaschka_chart(2), lambda xs: {(0, 1): xs[1], (0, 2): xs[0]}, "tau", polynomial=True)


def _index_str(idx: Sequence) -> tuple[str, ...]:
    return tuple(str(i) for i in idx)


# classical ---------------------------------------------------------------------------

_CL = range(1, 6)


def _cl_flow(N, cfg):
    return [fields_equal(an.toda_flow(N), an.chi(2, N), cfg, name=f"classical:flow=pi1dH2(N={N})")]


def _cl_jacobi(N, cfg):
    return [check_jacobi(an.bracket(n, N), cfg, name=f"classical:jacobi pi{n}(N={N})") for n in _CL]


def _cl_compat(N, cfg):
    return [
        check_compatibility(an.bracket(i, N), an.bracket(j, N), cfg, name=f"classical:[pi{i},pi{j}]=0(N={N})")
        for i, j in _pairs(_CL)
    ]


def _cl_casimirs(N, cfg):
    out = [
        check_casimir(an.bracket(1, N), an.invariant(1, N), cfg, name=f"classical:casimir H1/pi1(N={N})"),
        check_casimir(an.bracket(2, N), an.det_l(N), cfg, name=f"classical:casimir detL/pi2(N={N})"),
    ]
    for n in (3, 4, 5):
        out.append(
            check_casimir(an.bracket(n, N), an.trace_power(2 - n, N), cfg, name=f"classical:casimir trL^{2 - n}/pi{n}(N={N})")
        )
    return out


def _cl_involution(N, cfg):
    fam = [an.invariant(k, N) for k in range(1, N + 1)]
    return [check_involution(an.bracket(n, N), fam, cfg, name=f"classical:involution H1..H{N}/pi{n}") for n in _CL]


def _cl_lenard(N, cfg):
    return [an.lenard_check(n, l, N, cfg) for n in range(2, 6) for l in range(1, N)]


def _cl_master_action(N, cfg):
    out = []
    for n in (-1, 0, 1, 2):
        for m in range(2 if n == -1 else 1, N + 1):
            X = an.master_field(n, N)
            out.append(
                _action(X, an.invariant(m, N), n + m, an.invariant(n + m, N), cfg, f"classical:X{n}(H{m})={n + m}H{n + m}(N={N})")
            )
    return out


def _cl_master_ladder(N, cfg):
    out = [an.flaschka_ladder_check(i, m, N, cfg) for i in (-1, 0, 1, 2) for m in (1, 2, 3) if m + i >= 1]
    for n in (-1, 0, 1, 2):
        for l in range(max(1, 1 - n), 5):
            out.append(
                check_lie_relation(
                    an.master_field(n, N), an.chi(l, N), [(l - 1, an.chi(l + n, N))], cfg,
                    name=f"classical:[X{n},chi{l}]=({l}-1)chi{l + n}(N={N})",
                )
            )
    out.append(
        check_lie_relation(an.master_field(0, N), an.master_field(-1, N), [(-1, an.master_field(-1, N))], cfg,
                           name=f"classical:[X0,X-1]=-X-1(N={N})")
    )
    return out


def _cl_deformation(N, cfg):
    fam = [an.invariant(k, N) for k in range(1, N + 1)]
    out = []
    for m in (1, 2, 3):
        L = lie_derivative_bivector(an.master_field(1, N), an.bracket(m, N))
        T = combine([(1, L), (-(m - 3), an.bracket(m + 1, N))], name=f"L[X1]pi{m}-({m - 3})pi{m + 1}")
        out.append(check_trivial_bracket(T, fam, cfg, name=f"classical:deformation m={m} trivial(N={N})"))
    return out


def _cl_canonical(N, cfg):
    out = []
    for i in (0, 1, 2):
        for j in (0, 1, 2):
            out += an.canonical_ladder_check(i, j, N, cfg)
    out += [an.z_reduction_check(i, N, cfg) for i in (0, 1, 2)]
    return out


def _cl_flaschka_map(N, cfg):
    fc = cfg.but(mode="float")
    return [
        check_poisson_map(an.flaschka_coords, combine([(4, an.j_tensor(0, N))], name="4J0"), an.bracket(1, N), fc,
                          name=f"classical:flaschka 4J0->pi1(N={N})"),
        check_poisson_map(an.flaschka_coords, combine([(2, an.j_tensor(1, N))], name="2J1"), an.bracket(2, N), fc,
                          name=f"classical:flaschka 2J1->pi2(N={N})"),
    ]


def _cl_symmetry(N, cfg):
    out = [an.symmetry_residual(an.y_field(n, N), N, cfg, name=f"classical:symmetry Y{n}(N={N})") for n in (-1, 0, 1)]
    out.append(an.symmetry_residual(an.y_closed_form(N), N, cfg, name=f"classical:symmetry Y1 closed form(N={N})"))
    return out


def _cl_shift(N, cfg):
    return [an.shift_isomorphism_check(n, N, cfg) for n in _CL]


def _cl_controls(N, cfg):
    J0 = an.j_tensor(0, N)
    ch = J0.chart
    q1, p1 = coordinate_function(ch, "q1"), coordinate_function(ch, "p1")
    return [
        _control(check_jacobi(_tau(), cfg, name="jacobi tau")),
        _control(an.symmetry_residual(an.y_closed_form(N, flip=True), N, cfg, name=f"symmetry perturbed Y1(N={N})")),
        _control(check_involution(J0, [q1, p1], cfg.but(mode="float"), name="involution {q1,p1}/J0")),
    ]


def _cl_literal_y(N, cfg):
    return [an.symmetry_residual(an.y_closed_form(N, literal=True), N, cfg, name=f"classical:symmetry Y1 as printed(N={N})")]


def _cl_literal_z0(N, cfg):
    Z0 = an.canonical_structures(N, printed_z0=True).Z0
    return [check_lie_relation(Z0, an.j_tensor(1, N), [], cfg.but(mode="float"), name=f"classical:L[Z0 printed]J1=0(N={N})")]


def _cl_literal_j0(N, cfg):
    return [check_poisson_map(an.flaschka_coords, an.j_tensor(0, N), an.bracket(1, N), cfg.but(mode="float"),
                              name=f"classical:flaschka J0->pi1(N={N})")]


def _cl_target(N) -> Target:
    def pt(seed):
        return _small_point(N - 1, seed, 0.2, 0.8) + _small_point(N, seed + 1, -0.5, 0.5)

    return Target(an.toda_flow(N), [an.invariant(k, N) for k in range(1, N + 1)], pt)


def _cl_table(N, idx, point):
    return an.structure_table(int(idx), N, point)


CLASSICAL = SystemSpec(
    "classical", "N", 4, _int_dim(2, None, "N"),
    (
        CheckSpec("flow", _cl_flow, "Toda flow is pi1 grad H2"),
        CheckSpec("jacobi", _cl_jacobi, "pi1..pi5 are Poisson"),
        CheckSpec("compatibility", _cl_compat, "all pairs among pi1..pi5 commute"),
        CheckSpec("casimirs", _cl_casimirs, "H1/pi1, det L/pi2, tr L^(2-n)/pi_n"),
        CheckSpec("involution", _cl_involution, "H1..HN under pi1..pi5"),
        CheckSpec("lenard", _cl_lenard, "pi_n dH_l = pi_{n-1} dH_{l+1}"),
        CheckSpec("master-action", _cl_master_action, "X_n(H_m) = (n+m) H_{n+m}"),
        CheckSpec("master-ladder", _cl_master_ladder, "L_{X_i} pi_m, [X_n, chi_l], [X0, X-1]"),
        CheckSpec("deformation", _cl_deformation, "L_{X1} pi_m - (m-3) pi_{m+1} is trivial"),
        CheckSpec("canonical-ladder", _cl_canonical, "J/Z/chi ladder on the canonical chart (float)"),
        CheckSpec("flaschka-map", _cl_flaschka_map, "4 J0 -> pi1 and 2 J1 -> pi2 (float)"),
        CheckSpec("symmetry", _cl_symmetry, "dY/dt + [chi2, Y] = 0 for Y_-1, Y_0, Y_1"),
        CheckSpec("shift", _cl_shift, "b -> b+1 maps the binomial sum to pi_n"),
        CheckSpec("controls", _cl_controls, "negative controls"),
        CheckSpec("symmetry-printed", _cl_literal_y, "Y1 closed form exactly as printed", literal=True),
        CheckSpec("z0-printed", _cl_literal_z0, "printed Z0 is conformal for J1", literal=True),
        CheckSpec("flaschka-j0", _cl_literal_j0, "J0 -> pi1 without the factor 4", literal=True),
    ),
    _cl_target,
    _cl_table,
    lambda N: _index_str(_CL),
)


# relativistic ------------------------------------------------------------------------

def _rel_idx(N):
    return (1, 2, 3, 4) if N == 3 else (1, 2, 3)


def _rel_jacobi(N, cfg):
    return [check_jacobi(rel.rel_bracket(n, N), cfg, name=f"relativistic:jacobi pi{n}(N={N})") for n in _rel_idx(N)]


def _rel_compat(N, cfg):
    pairs = _pairs((1, 2, 3)) + ([(2, 4)] if N == 3 else [])
    return [
        check_compatibility(rel.rel_bracket(i, N), rel.rel_bracket(j, N), cfg, name=f"relativistic:[pi{i},pi{j}]=0(N={N})")
        for i, j in pairs
    ]


def _rel_casimirs(N, cfg):
    return [
        check_casimir(rel.rel_bracket(1, N), rel.rel_invariant(1, N), cfg, name=f"relativistic:casimir trL/pi1(N={N})"),
        check_casimir(rel.rel_bracket(2, N), rel.prod_b(N), cfg, name=f"relativistic:casimir prod b/pi2(N={N})"),
        check_casimir(rel.rel_bracket(3, N), rel.rel_trace_inverse(N), cfg, name=f"relativistic:casimir trL^-1/pi3(N={N})"),
    ]


def _rel_involution(N, cfg):
    fam = [rel.rel_invariant(k, N) for k in range(1, N + 1)]
    return [check_involution(rel.rel_bracket(n, N), fam, cfg, name=f"relativistic:involution/pi{n}(N={N})") for n in _rel_idx(N)]


def _rel_lenard(N, cfg):
    out = []
    for n in (2, 3):
        for l in range(1, N):
            A = hamiltonian_vf(rel.rel_bracket(n, N), rel.rel_invariant(l, N))
            B = hamiltonian_vf(rel.rel_bracket(n - 1, N), rel.rel_invariant(l + 1, N))
            out.append(fields_equal(A, B, cfg, name=f"relativistic:lenard pi{n}dH{l}=pi{n - 1}dH{l + 1}(N={N})"))
    if N == 3:
        # pi4 = L_{X2} pi2 is unnormalized: it carries the factor (2 - 2 - 2)
        for l in range(1, N):
            A = hamiltonian_vf(rel.rel_bracket(4, N), rel.rel_invariant(l, N))
            B = combine([(-2, hamiltonian_vf(rel.rel_bracket(3, N), rel.rel_invariant(l + 1, N)))], name="-2pi3dH")
            out.append(fields_equal(A, B, cfg, name=f"relativistic:lenard pi4dH{l}=-2pi3dH{l + 1}(N=3)"))
    return out


def _rel_flow(N, cfg):
    minus = combine([(-1, hamiltonian_vf(rel.rel_bracket(1, N), rel.rel_invariant(2, N)))], name="-pi1dH2")
    return [
        fields_equal(rel.rel_equations(N), minus, cfg, name=f"relativistic:flow=-pi1dH2(N={N})"),
        rel.lax_commutator_check(N, cfg),
    ]


def _rel_master(N, cfg):
    X1 = rel.rel_master(1, N)
    out = [
        _action(X1, rel.rel_invariant(m, N), m + 1, rel.rel_invariant(m + 1, N), cfg, f"relativistic:X1(H{m})={m + 1}H{m + 1}(N={N})")
        for m in (1, 2, 3)
    ]
    out += [
        check_lie_relation(X1, rel.rel_bracket(1, N), [(-2, rel.rel_bracket(2, N))], cfg, name=f"relativistic:L[X1]pi1=-2pi2(N={N})"),
        check_lie_relation(X1, rel.rel_bracket(2, N), [(-1, rel.rel_bracket(3, N))], cfg, name=f"relativistic:L[X1]pi2=-pi3(N={N})"),
        check_lie_relation(X1, rel.rel_bracket(3, N), [], cfg, name=f"relativistic:L[X1]pi3=0(N={N})"),
    ]
    if N == 3:
        X2 = rel.rel_master(2, N)
        out += [
            _action(X2, rel.rel_invariant(m, N), m + 2, rel.rel_invariant(m + 2, N), cfg, f"relativistic:X2(H{m})={m + 2}H{m + 2}(N=3)")
            for m in (1, 2, 3)
        ]
        out.append(_action(rel.rel_master(3, N), rel.rel_invariant(1, N), 4, rel.rel_invariant(4, N), cfg, "relativistic:X3(H1)=4H4(N=3)"))
        fam = [rel.rel_invariant(k, N) for k in range(1, 4)]
        L = lie_derivative_bivector(X2, rel.rel_bracket(4, N))
        out.append(check_trivial_bracket(L, fam, cfg, name="relativistic:L[X2]pi4 trivial(N=3)"))
    return out


def _rel_limit(N, cfg):
    Q0 = [0.3 * k for k in range(N)]
    V0 = [0.1 * (-1) ** k for k in range(N)]
    devs = rel.nonrelativistic_limit(N, Q0, V0)
    mono = all(b < a for a, b in zip(devs, devs[1:]))
    return [
        IdentityReport(
            name=f"relativistic:nonrelativistic limit(N={N})",
            samples=len(devs),
            seed=cfg.seed,
            mode="float",
            max_residual=devs[-1],
            passed=mono,
            tol=None,
            witness=None if mono else {"deviations": devs},
            note="deviations for c = 10, 100, 1000: " + ", ".join(f"{d:.3e}" for d in devs),
        )
    ]


def _rel_target(N) -> Target:
    def pt(seed):
        return _small_point(N - 1, seed, 0.1, 0.5) + _small_point(N, seed + 1, 0.5, 1.5)

    return Target(rel.rel_equations(N), [rel.rel_invariant(k, N) for k in range(1, N + 1)] + [rel.prod_b(N)], pt)


def _rel_table(N, idx, point):
    if point is not None:
        raise ConfigError("relativistic tables are symbolic; --point is not supported")
    if int(idx) == 4:
        raise ConfigError("pi4 is a generated bracket; no symbolic table (valid indices: 1, 2, 3)")
    return rel.structure_table(int(idx), N)


RELATIVISTIC = SystemSpec(
    "relativistic", "N", 3, _int_dim(2, None, "N"),
    (
        CheckSpec("jacobi", _rel_jacobi, "pi1..pi3 (and pi4 for N=3) are Poisson"),
        CheckSpec("compatibility", _rel_compat, "pairwise compatibility"),
        CheckSpec("casimirs", _rel_casimirs, "tr L/pi1, prod b/pi2, tr L^-1/pi3"),
        CheckSpec("involution", _rel_involution, "H1..HN under every bracket"),
        CheckSpec("lenard", _rel_lenard, "pi_n dH_l = pi_{n-1} dH_{l+1}"),
        CheckSpec("flow", _rel_flow, "equations of motion and the Lax commutator"),
        CheckSpec("master", _rel_master, "X1/X2 actions and pairings"),
        CheckSpec("limit", _rel_limit, "nonrelativistic limit converges monotonically (float)"),
    ),
    _rel_target,
    _rel_table,
    lambda N: _index_str((1, 2, 3)),
)


# B_n ---------------------------------------------------------------------------------

_BN = (1, 3, 5)


def _bn_jacobi(n, cfg):
    return [check_jacobi(lie.bn_bracket(j, n), cfg, name=f"bn:jacobi pi{j}(n={n})") for j in _BN]


def _bn_compat(n, cfg):
    return [check_compatibility(lie.bn_bracket(i, n), lie.bn_bracket(j, n), cfg, name=f"bn:[pi{i},pi{j}]=0(n={n})") for i, j in _pairs(_BN)]


def _bn_involution(n, cfg):
    fam = [lie.bn_invariant(2 * k, n) for k in range(1, n + 1)]
    return [check_involution(lie.bn_bracket(j, n), fam, cfg, name=f"bn:involution H2..H{2 * n}/pi{j}(n={n})") for j in _BN]


def _bn_lenard(n, cfg):
    return [lie.bn_lenard_check(j, i, n, cfg) for j in (1, 3) for i in range(1, n)]


def _bn_flow(n, cfg):
    half = combine([(Q(1, 2), hamiltonian_vf(lie.bn_bracket(1, n), lie.bn_invariant(2, n)))], name="pi1dH2/2")
    return [fields_equal(lie.bn_lax_flow(n), half, cfg, name=f"bn:lax flow=pi1dH2/2(n={n})")]


def _b2_dirac(n, cfg):
    pi = lie.b2_rational_bracket()
    fam = [lie.b2_invariant(k) for k in range(1, 6)]
    out = [fields_equal(lie.b2_dirac_bracket(2), pi, cfg, name="bn:B2 dirac(A4 pi2)=rational table")]
    out.append(lie.b2_printed_matrix_checks(cfg)[0])
    out += [
        check_jacobi(pi, cfg, name="bn:B2 jacobi rational"),
        check_casimir(pi, lie.b2_det(), cfg, name="bn:B2 casimir detL/rational"),
        check_involution(pi, fam, cfg, name="bn:B2 involution H1..H5/rational"),
    ]
    return out


def _b2_pinv(n, cfg):
    return [lie.b2_printed_matrix_checks(cfg)[1]]


def _b2_linear(n, cfg):
    return [check_compatibility(lie.b2_linear_bracket(), lie.b2_rational_bracket(), cfg, name="bn:B2 [linear,rational]=0")]


def _bn_target(n) -> Target:
    def pt(seed):
        return _small_point(n, seed, 0.2, 0.8) + _small_point(n, seed + 1, -0.5, 0.5)

    return Target(lie.bn_lax_flow(n), [lie.bn_invariant(2 * k, n) for k in range(1, n + 1)], pt)


def _bn_table(n, idx, point):
    if idx == "rational":
        if n != 2:
            raise ConfigError("the rational table exists for n = 2 only")
        out = lie.b2_table_json(point)
        if point is not None:
            out.update(lie.b2_matrix_json(lie.b2_chart().point(point).coords))
        return out
    if point is not None:
        raise ConfigError("polynomial tables are symbolic; --point applies to the rational table")
    return lie.structure_table(int(idx), n)


BN = SystemSpec(
    "bn", "n", 2, _int_dim(2, None, "n"),
    (
        CheckSpec("jacobi", _bn_jacobi, "pi1, pi3, pi5 are Poisson"),
        CheckSpec("compatibility", _bn_compat, "pairwise compatibility"),
        CheckSpec("involution", _bn_involution, "even invariants under every bracket"),
        CheckSpec("lenard", _bn_lenard, "pi_{j+2} dH_{2i} = pi_j dH_{2i+2}"),
        CheckSpec("flow", _bn_flow, "Lax flow is half pi1 dH2"),
        CheckSpec("dirac", _b2_dirac, "B2 Dirac reduction of A4 pi2", applies=lambda n: n == 2),
        CheckSpec("pinv-printed", _b2_pinv, "inverse constraint matrix as printed", literal=True, applies=lambda n: n == 2),
        CheckSpec("b2-linear", _b2_linear, "reduced linear bracket compatible with the rational one", literal=True,
                  applies=lambda n: n == 2),
    ),
    _bn_target,
    _bn_table,
    lambda n: ("1", "3") + (("rational",) if n == 2 else ()),
)


# Kostant -----------------------------------------------------------------------------

def _k_jacobi(n, cfg):
    return [check_jacobi(kf.kostant_bracket(i, n), cfg, name=f"kostant:jacobi pi{i}(n={n})") for i in (1, 2, 3)]


def _k_compat(n, cfg):
    return [
        check_compatibility(kf.kostant_bracket(i, n), kf.kostant_bracket(j, n), cfg, name=f"kostant:[pi{i},pi{j}]=0(n={n})")
        for i, j in _pairs((1, 2, 3))
    ]


def _k_flow(n, cfg):
    return [fields_equal(kf.kostant_flow(n), kf.chi(2, n), cfg, name=f"kostant:flow=pi1dH2(n={n})")]


def _k_casimirs(n, cfg):
    return kf.casimir_checks(n, cfg)


def _k_involution(n, cfg):
    fam = kf.invariant_family(n)
    return [check_involution(kf.kostant_bracket(i, n), fam, cfg, name=f"kostant:involution/pi{i}(n={n})") for i in (1, 2, 3)]


def _k_master(n, cfg):
    out = [kf.master_hamiltonian_check(i, j, n, cfg) for i in (1, 2) for j in range(1, n + 1)]
    out += [kf.chi_commutator_check(i, l, n, cfg) for i in (1, 2) for l in (2, 3)]
    out += [kf.deformation_check(1, 1, n, cfg), kf.deformation_check(1, 2, n, cfg)]
    out.append(check_lie_relation(kf.kostant_master(1, n), kf.kostant_bracket(3, n), [], cfg, name=f"kostant:L[X1]pi3=0(n={n})"))
    out.append(
        check_lie_relation(kf.kostant_master(0, n), kf.kostant_master(-1, n), [(-1, kf.kostant_master(-1, n))], cfg,
                           name=f"kostant:[X0,X-1]=-X-1(n={n})")
    )
    return out


def _k_lenard(n, cfg):
    return [kf.lenard_check(i, l, n, cfg) for i in (2, 3) for l in range(1, n)]


def _k_gl5_action(n, cfg):
    return [kf.gl5_master_action_check(cfg)]


def _k_rational_lenard(n, cfg):
    return [kf.rational_lenard_check(cfg)]


def _k_target(n) -> Target:
    dens = [kf.rational_invariant(1, k, n).denominator for k in range(1, (n - 1) // 2 + 1)]

    def pt(seed):
        # small diagonal, positive subdiagonal bands shrinking by 10x per band;
        # redraw if some E_0k is too close to zero
        rng = np.random.default_rng(seed)
        for _ in range(1000):
            vals = [
                float(rng.uniform(-0.5, 0.5)) if i == j else float(rng.uniform(0.5, 1.0)) * 0.1 ** (i - j - 1)
                for i, j in kf._slots(n)
            ]
            if all(abs(d(vals)) > 1e-12 for d in dens):
                return vals
        raise RuntimeError("could not draw a point off the E_0k loci")

    fam = [kf.poly_invariant(k, n) for k in range(1, n + 1)] + [I.field for I in kf.all_rational(n)]
    return Target(kf.kostant_flow(n), fam, pt)


def _k_table(n, idx, point):
    if idx == "rational":
        if point is None:
            raise ConfigError("the rational invariant dump needs --point")
        return kf.rational_json(n, point)
    return kf.structure_table(int(idx), n, point)


KOSTANT = SystemSpec(
    "kostant", "n", 4, _int_dim(3, 6, "n"),
    (
        CheckSpec("jacobi", _k_jacobi, "pi1..pi3 are Poisson"),
        CheckSpec("compatibility", _k_compat, "pairwise compatibility"),
        CheckSpec("flow", _k_flow, "[X, PX] is pi1 grad H2"),
        CheckSpec("casimirs", _k_casimirs, "tr X, I11, det X, tr X^-1 and the gl(5) K's"),
        CheckSpec("involution", _k_involution, "H's and every I_rk under pi1..pi3"),
        CheckSpec("master", _k_master, "X_i(H_j), [X_i, chi_l], deformation, L_{X1} pi3 = 0"),
        CheckSpec("lenard", _k_lenard, "pi_i dH_l = pi_{i-1} dH_{l+1}"),
        CheckSpec("gl5-action", _k_gl5_action, "X1 on K1..K4 and X2(K3), gl(5)", applies=lambda n: n == 5),
        CheckSpec("rational-lenard", _k_rational_lenard, "Lenard chain of K's, gl(5)", applies=lambda n: n == 5),
    ),
    _k_target,
    _k_table,
    lambda n: ("1", "2", "3", "rational"),
)


# Lie catalog ------------------------------------------------------------------------------

def _parse_catalog(v):
    if v is None:
        raise ConfigError("--rank is required for lie-catalog")
    text = str(v).strip()
    if text.isdigit():
        r = int(text)
        out = []
        for fam in ("A", "B", "C", "D"):
            try:
                out.append(lie.RootSystemId(fam, r))
            except ValueError:
                pass
        for fam, rk in (("G2", 2), ("F4", 4), ("E6", 6), ("E7", 7), ("E8", 8)):
            if rk == r:
                out.append(lie.RootSystemId(fam, rk))
        if not out:
            raise ConfigError(f"no root systems of rank {r}")
        return tuple(out)
    try:
        return (lie.RootSystemId.parse(text),)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _cat_energy(rids, cfg):
    from ..laxode import drift_report, integrate_flow

    out = []
    for k, rid in enumerate(rids):
        m = rid.ncoords
        x0 = _small_point(m, cfg.seed + k, -0.3, 0.3) + _small_point(m, cfg.seed + k + 1, -0.3, 0.3)
        tr = integrate_flow(lie.lie_flow(rid), x0, 5.0, 1e-3)
        d = drift_report(tr, [lie.lie_hamiltonian(rid)]).max_drift
        out.append(
            IdentityReport(name=f"lie-catalog:energy {rid.label}", samples=1, seed=cfg.seed, mode="float",
                           max_residual=d, passed=d <= 1e-8, tol=1e-8)
        )
    return out


def _cat_a2(rids, cfg):
    return [lie.a2_canonical_check(cfg), lie.a2_potential_check(cfg), lie.a2_equivalence_check(cfg)]


def _cat_a2_literal(rids, cfg):
    from fractions import Fraction

    return [lie.a2_equivalence_check(cfg, kinetic_factor=Fraction(1))]


def _cat_target(rids) -> Target:
    if len(rids) != 1:
        raise ConfigError("integrate needs a single root system, e.g. --rank B3")
    rid = rids[0]
    return Target(lie.lie_flow(rid), [lie.lie_hamiltonian(rid)], lambda seed: _small_point(2 * rid.ncoords, seed, -0.3, 0.3))


def _cat_table(rids, idx, point):
    raise ConfigError("lie-catalog has no bracket tables (valid indices: none)")


LIE_CATALOG = SystemSpec(
    "lie-catalog", "rank", None, _parse_catalog,
    (
        CheckSpec("energy", _cat_energy, "RK4 energy drift for each listed root system (float)"),
        CheckSpec("a2", _cat_a2, "A2 canonical map, potentials and kinetic factor 4/3",
                  applies=lambda rids: any(r.family == "A" and r.rank == 2 for r in rids)),
        CheckSpec("a2-literal", _cat_a2_literal, "A2 Hamiltonians equal with kinetic factor 1", literal=True,
                  applies=lambda rids: any(r.family == "A" and r.rank == 2 for r in rids)),
    ),
    _cat_target,
    _cat_table,
    lambda rids: (),
)


SYSTEM_SPECS: dict[str, SystemSpec] = {s.name: s for s in (CLASSICAL, RELATIVISTIC, BN, KOSTANT, LIE_CATALOG)}


def resolve_dim(spec: SystemSpec, raw: Any) -> Any:
    if raw is None:
        if spec.default_dim is None:
            return spec.parse_dim(None)
        return spec.default_dim
    return spec.parse_dim(raw)
