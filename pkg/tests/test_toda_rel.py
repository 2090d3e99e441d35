import math

import numpy as np
import pytest

import oracles as o
from todalab import toda_rel as rel
from todalab.geomcore import (
    Q,
    SamplerConfig,
    apply_vf,
    check_casimir,
    check_compatibility,
    check_involution,
    check_jacobi,
    check_lie_relation,
    check_trivial_bracket,
    fields_equal,
    hamiltonian_vf,
    lie_derivative_bivector,
    combine,
)

CFG = SamplerConfig(samples=30, seed=8)


def _pts(N, n=15, seed=2):
    return o.rational_points(o.classical_labels(N), n, seed)


def test_hamiltonian_examples():
    assert rel.rel_hamiltonian([0.0], [0.7], 1.0) == pytest.approx(math.exp(0.7))
    assert rel.rel_hamiltonian([0.0, 0.0], [0.0, 0.0], 1.0) == pytest.approx(2 * math.sqrt(2))
    small = rel.rel_hamiltonian([0.1, -0.3, 0.2], [0.2, 0.1, -0.4], 1e-8)
    assert small == pytest.approx(sum(math.exp(p) for p in (0.2, 0.1, -0.4)))
    with pytest.raises(ValueError):
        rel.rel_hamiltonian([0.0], [0.0], 0.0)


def test_lax_example():
    L, B = rel.rel_lax(rel.RelState((1,), (2, 3)))
    assert L.tolist() == [[3, 1], [3, 3]]
    assert B.tolist() == [[0, 1], [0, -1]]


@pytest.mark.parametrize("N", [2, 3, 4])
def test_lax_commutator(N):
    assert rel.lax_commutator_check(N, CFG).passed


def test_trace_of_lax_is_h1():
    N = 4
    for xs in _pts(N):
        xq = [Q(x) for x in xs]
        L, _ = rel.rel_lax_matrices(xq, N)
        assert sum(L[i][i] for i in range(N)) == rel.rel_invariant(1, N)(xq) == sum(xq)


def test_stationary_when_a_vanishes():
    assert all(v == 0 for v in rel.rel_equations(3).components([0, 0, 1, 2, 3]))


@pytest.mark.parametrize("n,oracle", [(1, o.rel_pi1), (2, o.rel_pi2), (3, o.rel_pi3)])
@pytest.mark.parametrize("N", [2, 3, 4])
def test_brackets_match_printed_tables(n, oracle, N):
    M = oracle(N)
    pi = rel.rel_bracket(n, N)
    for xs in _pts(N, 15, seed=N + 10 * n):
        assert o.lib_matrix(pi, xs) == o.eval_matrix(M, pi.chart.labels, xs)


def test_bracket_guards():
    with pytest.raises(ValueError):
        rel.rel_bracket(5, 3)
    with pytest.raises(ValueError):
        rel.rel_bracket(4, 4)
    with pytest.raises(ValueError):
        rel.rel_master(2, 4)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_jacobi_and_compatibility(N):
    for n in (1, 2, 3):
        assert check_jacobi(rel.rel_bracket(n, N), CFG).passed
    for i, j in ((1, 2), (1, 3), (2, 3)):
        assert check_compatibility(rel.rel_bracket(i, N), rel.rel_bracket(j, N), CFG).passed


def test_generated_pi4():
    pi4 = rel.rel_bracket(4, 3)
    assert check_jacobi(pi4, CFG).passed
    assert check_compatibility(rel.rel_bracket(2, 3), pi4, CFG).passed
    fam = [rel.rel_invariant(k, 3) for k in (1, 2, 3)]
    assert check_involution(pi4, fam, CFG).passed


def test_casimirs():
    N = 4
    assert check_casimir(rel.rel_bracket(1, N), rel.rel_invariant(1, N), CFG).passed
    assert check_casimir(rel.rel_bracket(2, N), rel.prod_b(N), CFG).passed
    assert check_casimir(rel.rel_bracket(3, N), rel.rel_trace_inverse(N), CFG).passed


def test_det_is_product_of_b():
    N = 4
    for xs in _pts(N):
        xq = [Q(x) for x in xs]
        assert rel.rel_det(N)(xq) == rel.prod_b(N)(xq)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_involution(N):
    fam = [rel.rel_invariant(k, N) for k in range(1, N + 1)]
    for n in (1, 2, 3):
        assert check_involution(rel.rel_bracket(n, N), fam, CFG).passed


@pytest.mark.parametrize("N", [3, 4])
def test_lenard(N):
    for n in (2, 3):
        for l in range(1, N):
            A = hamiltonian_vf(rel.rel_bracket(n, N), rel.rel_invariant(l, N))
            B = hamiltonian_vf(rel.rel_bracket(n - 1, N), rel.rel_invariant(l + 1, N))
            assert fields_equal(A, B, CFG).passed


def test_lenard_pi4_carries_factor_minus_two():
    N = 3
    for l in (1, 2):
        A = hamiltonian_vf(rel.rel_bracket(4, N), rel.rel_invariant(l, N))
        B = hamiltonian_vf(rel.rel_bracket(3, N), rel.rel_invariant(l + 1, N))
        assert fields_equal(A, combine([(-2, B)]), CFG).passed
        assert not fields_equal(A, B, CFG).passed


def test_equations_are_hamiltonian_up_to_sign():
    N = 4
    eq = rel.rel_equations(N)
    assert fields_equal(eq, combine([(-1, rel.rel_hamiltonian_flow(N))]), CFG).passed
    assert fields_equal(eq, combine([(-1, hamiltonian_vf(rel.rel_bracket(1, N), rel.rel_invariant(2, N)))]), CFG).passed


def test_master_x1_actions():
    N = 4
    X1 = rel.rel_master(1, N)
    for m in (1, 2, 3):
        f = apply_vf(X1, rel.rel_invariant(m, N))
        for xs in _pts(N, 10):
            xq = [Q(x) for x in xs]
            assert f(xq) == (m + 1) * rel.rel_invariant(m + 1, N)(xq)
    assert check_lie_relation(X1, rel.rel_bracket(3, N), [], CFG).passed


def test_master_x2_and_x3():
    N = 3
    X2, X3 = rel.rel_master(2, N), rel.rel_master(3, N)
    for m in (1, 2, 3):
        f = apply_vf(X2, rel.rel_invariant(m, N))
        for xs in _pts(N, 10):
            xq = [Q(x) for x in xs]
            assert f(xq) == (m + 2) * rel.rel_invariant(m + 2, N)(xq)
    f = apply_vf(X3, rel.rel_invariant(1, N))
    for xs in _pts(N, 10):
        xq = [Q(x) for x in xs]
        assert f(xq) == 4 * rel.rel_invariant(4, N)(xq)
    fam = [rel.rel_invariant(k, N) for k in (1, 2, 3)]
    assert check_trivial_bracket(lie_derivative_bivector(X2, rel.rel_bracket(4, N)), fam, CFG).passed


def test_nonrelativistic_limit_is_monotone():
    devs = rel.nonrelativistic_limit(3, [0.0, 0.3, 0.6], [0.1, -0.1, 0.1], t_end=1.0, step=2e-3)
    assert devs[0] > devs[1] > devs[2]
    assert devs[-1] < 1e-3


def test_coordinates_of_canonical_state():
    N, g = 3, 0.5
    rng = np.random.default_rng(0)
    x = list(rng.uniform(-1, 1, 2 * N))
    ab = rel.rel_coordinates(x, g)
    assert len(ab) == 2 * N - 1
    assert all(a > 0 for a in ab[: N - 1])


def test_structure_table_lists_nonzero_entries():
    t = rel.structure_table(2, 2)
    assert {(e["i"], e["j"]) for e in t["entries"]} == {("a1", "b1"), ("a1", "b2")}
