import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

import oracles as o
from todalab import toda_an as an
from todalab.geomcore import (
    BivectorField,
    Chart,
    ChartError,
    Q,
    SamplerConfig,
    ScalarField,
    SingularPoint,
    VectorField,
    apply_vf,
    check_casimir,
    check_compatibility,
    check_involution,
    check_jacobi,
    check_lie_relation,
    check_poisson_map,
    check_trivial_bracket,
    combine,
    constant_field,
    coordinate_function,
    eval_bivector,
    exact,
    hamiltonian_vf,
    lie_derivative_bivector,
    poisson_bracket,
    sample_points,
    schouten_22,
    vf_commutator,
)
from todalab.geomcore import exp as dexp
from todalab.geomcore import sqrt as dsqrt
from todalab.geomcore.scalars import seed_duals, split

CFG = SamplerConfig(samples=50, seed=11)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def _tau():
    return BivectorField(an.flaschka_chart(2), lambda xs: {(0, 1): xs[1], (0, 2): xs[0]}, "tau", polynomial=True)


# scalars --------------------------------------------------------------------------------

@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_exact_scalar_is_reduced(n, d):
    q = exact(Fraction(n, d))
    assert q.denominator > 0
    assert math.gcd(int(q.numerator), int(q.denominator)) == 1


def test_exact_rejects_bool_and_inf():
    with pytest.raises(TypeError):
        exact(True)
    with pytest.raises(ValueError):
        exact(float("inf"))
    assert exact("3/6") == Q(1, 2)


@given(rationals, rationals)
def test_dual_product_and_quotient_rules(x, y):
    (dx, dy), lvl = seed_duals([Q(x), Q(y)])
    v, g = split(dx * dy * dy, lvl, 2)
    assert v == Q(x) * Q(y) ** 2
    assert g == (Q(y) ** 2, 2 * Q(x) * Q(y))
    if y != 0:
        v, g = split(dx / dy, lvl, 2)
        assert g == (1 / Q(y), -Q(x) / Q(y) ** 2)


@given(st.floats(-2, 2), st.floats(0.1, 4))
def test_dual_chain_rule_matches_finite_differences(x, y):
    def f(u, w):
        return dexp(u) * dsqrt(w) + u**3 / w

    (du, dw), lvl = seed_duals([x, y])
    _, g = split(f(du, dw), lvl, 2)
    h = 1e-6
    fd = ((f(x + h, y) - f(x - h, y)) / (2 * h), (f(x, y + h) - f(x, y - h)) / (2 * h))
    for a, b in zip(g, fd):
        assert abs(a - b) <= 1e-6 * max(1.0, abs(b))


def test_nested_duals_give_second_derivatives():
    (x,), l1 = seed_duals([Q(3)])
    (y,), l2 = seed_duals([x])
    out = y**3
    v, g = split(out, l2, 1)
    _, gg = split(g[0], l1, 1)
    assert v.val == 27 and g[0].val == 27 and gg[0] == 18


def test_exp_of_nonzero_rational_is_refused():
    with pytest.raises(ValueError):
        dexp(Q(1))
    assert dexp(Q(0)) == 1


# charts and points ---------------------------------------------------------------------

def test_chart_rejects_duplicate_labels():
    with pytest.raises(ChartError):
        Chart("bad", ("x", "x"))


def test_phase_point_length_checked():
    ch = an.flaschka_chart(2)
    with pytest.raises(ChartError):
        ch.point([1, 2])


def test_degenerate_charts():
    c0, c1 = Chart("zero", ()), Chart("one", ("x",))
    for ch in (c0, c1):
        z = constant_field(ch, BivectorField)
        assert check_jacobi(z, SamplerConfig(samples=3)).passed
        assert eval_bivector(z, [0] * ch.dim).shape == (ch.dim, ch.dim)


# eval_bivector --------------------------------------------------------------------------

def _entries(M, labels):
    return {(labels[i], labels[j]): M[i, j] for i in range(len(labels)) for j in range(i + 1, len(labels)) if M[i, j] != 0}


def test_eval_pi1_example():
    pi = an.bracket(1, 2)
    M = eval_bivector(pi, pi.chart.point([1, 2, 3]))
    assert _entries(M, pi.chart.labels) == {("a1", "b1"): -1, ("a1", "b2"): 1}
    assert not np.any(eval_bivector(pi, [0, 2, 3]))


def test_eval_pi2_example():
    pi = an.bracket(2, 2)
    M = eval_bivector(pi, [1, 2, 3])
    assert _entries(M, pi.chart.labels) == {("a1", "b1"): -2, ("a1", "b2"): 3, ("b1", "b2"): 2}


@given(st.lists(rationals, min_size=5, max_size=5))
def test_eval_is_antisymmetric(xs):
    for n in (1, 2, 3, 4):
        M = eval_bivector(an.bracket(n, 3), [Q(x) for x in xs])
        assert (M + M.T == 0).all()


def test_eval_errors():
    pi = an.bracket(1, 3)
    with pytest.raises(ChartError):
        eval_bivector(pi, an.flaschka_chart(2).point([1, 2, 3]))
    f = an.trace_power(-1, 2)
    with pytest.raises(SingularPoint) as e:
        f.value([1, 1, 1])
    assert "det" in e.value.predicate


# schouten -------------------------------------------------------------------------------

@pytest.mark.parametrize("n,m", [(1, 2), (2, 3), (1, 3)])
def test_schouten_matches_bruteforce_oracle(n, m):
    P, R = an.bracket(n, 3), an.bracket(m, 3)
    S = o.syms(P.chart.labels)
    T = o.schouten_symbolic(o.bivector_to_sympy(P), o.bivector_to_sympy(R), S)
    for xs in o.rational_points(P.chart.labels, 10, 3):
        lib = schouten_22(P, R, [Q(x) for x in xs])
        sub = dict(zip(S, map(sp.Rational, xs)))
        for (i, j, k), e in T.items():
            assert Q(str(e.xreplace(sub))) == lib[i, j, k]


def test_broken_tensor_has_nonzero_schouten():
    tau = _tau()
    S = o.syms(tau.chart.labels)
    T = o.schouten_symbolic(o.bivector_to_sympy(tau), o.bivector_to_sympy(tau), S)
    assert any(e != 0 for e in T.values())
    rep = check_jacobi(tau, CFG)
    assert not rep.passed and rep.witness is not None and rep.max_residual != 0


@given(st.lists(rationals, min_size=4, max_size=4))
def test_schouten_totally_antisymmetric(xs):
    P, R = an.bracket(2, 3), _shifted(an.bracket(3, 3))
    A = schouten_22(P, R, [Q(x) for x in xs] + [Q(1)])
    assert (A + A.transpose(1, 0, 2) == 0).all()
    assert (A + A.transpose(0, 2, 1) == 0).all()


def _shifted(pi):
    return combine([(1, pi), (Q(1, 3), an.bracket(1, 3))], name="pi3+pi1/3")


# lie derivative and commutators --------------------------------------------------------

def test_lie_derivative_euler_scales_pi1():
    rep = check_lie_relation(an.master_field(0, 4), an.bracket(1, 4), [(-1, an.bracket(1, 4))], CFG)
    assert rep.passed


def test_lie_derivative_euler_float_finite_differences():
    X0, pi = an.master_field(0, 3), an.bracket(1, 3)
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = rng.uniform(-1, 1, 5)
        h = 1e-6
        # flow of X0 is x -> e^s x; pushforward gives d/ds of pi(e^s x) scaled back
        dpi = (pi.matrix(list(x * math.exp(h))) - pi.matrix(list(x * math.exp(-h)))) / (2 * h)
        L = lie_derivative_bivector(X0, pi).matrix(list(x))
        assert np.allclose(L, dpi - 2 * pi.matrix(list(x)), atol=1e-6)
        assert np.allclose(L, -pi.matrix(list(x)), atol=1e-12)


def test_lie_derivative_translation_lowers_pi2():
    rep = check_lie_relation(an.master_field(-1, 4), an.bracket(2, 4), [(1, an.bracket(1, 4))], CFG)
    assert rep.passed


def test_lie_derivative_of_zero():
    ch = an.flaschka_chart(3)
    L = lie_derivative_bivector(an.master_field(1, 3), constant_field(ch, BivectorField))
    assert all(p == 0 for p in L.polys)


def test_commutator_ladder_ends():
    X0, Xm = an.master_field(0, 4), an.master_field(-1, 4)
    C = vf_commutator(X0, Xm)
    assert [str(p) for p in C.polys] == [str(-p) for p in Xm.polys]
    Z = vf_commutator(an.master_field(1, 3), an.master_field(1, 3))
    assert all(p == 0 for p in Z.polys)


def test_lie_derivative_of_commutator_second_order():
    X, Y, pi = an.master_field(0, 3), an.master_field(1, 3), an.bracket(1, 3)
    lhs = lie_derivative_bivector(vf_commutator(X, Y), pi)
    LXLY = lie_derivative_bivector(X, lie_derivative_bivector(Y, pi))
    LYLX = lie_derivative_bivector(Y, lie_derivative_bivector(X, pi))
    rhs = combine([(1, LXLY), (-1, LYLX)])
    assert all(a == b for a, b in zip(lhs.polys, rhs.polys))


def test_lie_derivative_generic_path_uses_nested_duals():
    ch = an.flaschka_chart(3)
    X, pi = an.master_field(1, 3), an.bracket(2, 3)
    Xg = VectorField(ch, X.components, "X1 (opaque)")
    pig = BivectorField(ch, pi.components, "pi2 (opaque)")
    lhs = lie_derivative_bivector(vf_commutator(Xg, an.master_field(0, 3)), pig)
    exact_lhs = lie_derivative_bivector(vf_commutator(X, an.master_field(0, 3)), pi)
    for xs in sample_points(ch, SamplerConfig(samples=5, seed=2)):
        assert list(lhs.components(xs)) == list(exact_lhs.components(xs))


# hamiltonian fields and brackets --------------------------------------------------------

def test_pi1_H2_is_flaschka_system():
    N = 4
    chi = hamiltonian_vf(an.bracket(1, N), an.invariant(2, N))
    a = sp.symbols("a1:4")
    b = sp.symbols("b1:5")
    A = lambda i: a[i - 1] if 1 <= i <= N - 1 else 0  # noqa: E731
    want = [A(i) * (b[i] - b[i - 1]) for i in range(1, N)] + [2 * (A(i) ** 2 - A(i - 1) ** 2) for i in range(1, N + 1)]
    for xs in o.rational_points(chi.chart.labels, 20, 5):
        sub = dict(zip(a + b, map(sp.Rational, xs)))
        got = chi.components([Q(x) for x in xs])
        assert got == [Q(str(sp.sympify(w).xreplace(sub))) for w in want]


def test_pi1_H1_vanishes_and_pi2_H1_equals_pi1_H2():
    N = 4
    assert all(p == 0 for p in hamiltonian_vf(an.bracket(1, N), an.invariant(1, N)).polys)
    A = hamiltonian_vf(an.bracket(2, N), an.invariant(1, N))
    B = hamiltonian_vf(an.bracket(1, N), an.invariant(2, N))
    assert A.polys == B.polys


def test_poisson_bracket_values():
    pi = an.bracket(1, 4)
    H2, H3 = an.invariant(2, 4), an.invariant(3, 4)
    for xs in sample_points(pi.chart, CFG):
        assert poisson_bracket(pi, H2, H3, xs) == 0
        assert poisson_bracket(pi, H2, H2, xs) == 0
    ch = an.flaschka_chart(2)
    a1, b1 = coordinate_function(ch, "a1"), coordinate_function(ch, "b1")
    assert poisson_bracket(an.bracket(3, 2), a1, b1, [1, 1, 1]) == -2


@given(st.lists(rationals, min_size=5, max_size=5))
def test_hamiltonian_field_antisymmetry(xs):
    pi = an.bracket(2, 3)
    f, g = an.invariant(2, 3), coordinate_function(pi.chart, "a1")
    xq = [Q(x) for x in xs]
    assert apply_vf(hamiltonian_vf(pi, f), g)(xq) == -apply_vf(hamiltonian_vf(pi, g), f)(xq)


# check_* operations ----------------------------------------------------------------------

def test_checks_on_classical_examples():
    N = 3
    for n in (1, 2, 3):
        assert check_jacobi(an.bracket(n, N), CFG).passed
    assert check_compatibility(an.bracket(1, N), an.bracket(2, N), CFG).passed
    assert check_casimir(an.bracket(2, N), an.det_l(N), CFG).passed
    assert check_casimir(an.bracket(1, N), constant_field(an.flaschka_chart(N), ScalarField, 5), CFG).passed
    fam = [an.invariant(k, N) for k in (1, 2, 3)]
    assert check_involution(an.bracket(3, N), fam, CFG).passed


def test_trivial_bracket_examples():
    N = 3
    fam = [an.invariant(k, N) for k in (1, 2, 3)]
    c2, c3 = an.chi(2, N), an.chi(3, N)
    wedge = BivectorField(
        c2.chart,
        lambda xs: {(i, j): u[i] * v[j] - u[j] * v[i] for u, v in [(c2.components(xs), c3.components(xs))]
                    for i in range(len(xs)) for j in range(i + 1, len(xs))},
        "chi2^chi3",
    )
    assert check_trivial_bracket(wedge, fam, CFG).passed
    rep = check_trivial_bracket(an.bracket(1, N), fam, CFG)
    assert not rep.passed


def test_involution_failure_reports_residual():
    J0 = an.j_tensor(0, 2)
    q1, p1 = coordinate_function(J0.chart, "q1"), coordinate_function(J0.chart, "p1")
    rep = check_involution(J0, [q1, p1], CFG.but(mode="float"))
    assert not rep.passed and rep.max_residual == 1.0


def test_poisson_map_identity_and_shift():
    N = 3
    pi = an.bracket(2, N)
    assert check_poisson_map(lambda xs: list(xs), pi, pi, CFG).passed
    src = combine([(1, an.bracket(1, N)), (1, an.bracket(2, N))])
    assert check_poisson_map(lambda xs: an.shift_map(xs, N), src, pi, CFG).passed


def test_reports_are_deterministic():
    a = check_jacobi(_tau(), CFG).to_json()
    b = check_jacobi(_tau(), CFG).to_json()
    assert a == b
    c = check_jacobi(_tau(), CFG.but(seed=12)).to_json()
    assert c["seed"] == 12


def test_sampler_avoids_singular_loci():
    pts = sample_points(an.flaschka_chart(3), CFG, an.det_l(3).singular + (("a1", lambda xs: xs[0]),))
    assert all(p[0] != 0 for p in pts)
    assert all(x.denominator in (1, 2, 3) and abs(x) <= 9 for p in pts for x in p)


def test_seed_env_var(monkeypatch):
    monkeypatch.setenv("TODA_LAB_SEED", "0x10")
    assert SamplerConfig().seed == 16


@pytest.mark.parametrize(
    "field",
    [an.invariant(3, 3), an.trace_power(-1, 3), an.master_field(1, 3), an.bracket(3, 3)],
    ids=lambda f: f.name,
)
def test_dual_partials_match_finite_differences(field):
    rng = np.random.default_rng(7)
    h = 1e-6
    for _ in range(20):
        x = rng.uniform(0.5, 1.5, field.chart.dim)
        vals, grads = field.jet(list(x))
        for l in range(field.chart.dim):
            e = np.zeros_like(x)
            e[l] = h
            fd = (np.array(field.components(list(x + e)), dtype=float) - np.array(field.components(list(x - e)), dtype=float)) / (2 * h)
            assert np.allclose(np.asarray(grads[l], dtype=float), fd, rtol=1e-6, atol=1e-6)
