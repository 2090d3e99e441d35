"""Acceptance suite: one test and one verdict line per criterion.

Tolerances and sample counts are pinned here; exact checks use zero tolerance.
"""
import numpy as np
import sympy as sp

import oracles as o
from todalab import kostant_full as kf
from todalab import toda_an as an
from todalab import toda_lie as lie
from todalab import toda_rel as rel
from todalab.geomcore import Q, SamplerConfig, check_casimir, check_involution, check_jacobi
from todalab.harness import registry as reg
from todalab.laxode import drift_report, eigenvalues, integrate_flow, qr_solve

SEED = 20240
EXACT = SamplerConfig(samples=30, seed=SEED)
JACOBI = EXACT.but(samples=100)
TABLE_POINTS = 50
CANON_TOL = 1e-9
POLY_DRIFT, RAT_DRIFT, QR_TOL, EIG_TOL = 1e-8, 1e-6, 1e-6, 1e-10


def _verdict(capsys, num, title, failures, tol):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {num}: {status} | {title} | {tol}"
    if failures:
        line += " | failing: " + "; ".join(map(str, failures[:6]))
    with capsys.disabled():
        print("\n" + line)
    assert not failures, line


def _failed(reports):
    return [r.name for r in reports if not r.passed]


# 1 ------------------------------------------------------------------------------------

def test_criterion_1_jacobi(capsys):
    reps = []
    for N in (2, 3, 4):
        reps += [check_jacobi(an.bracket(n, N), JACOBI, name=f"classical pi{n} N={N}") for n in range(1, 6)]
        reps += [check_jacobi(rel.rel_bracket(n, N), JACOBI, name=f"relativistic pi{n} N={N}") for n in (1, 2, 3)]
    reps.append(check_jacobi(rel.rel_bracket(4, 3), JACOBI, name="relativistic pi4 N=3"))
    for n in (2, 3):
        reps += [check_jacobi(lie.bn_bracket(j, n), JACOBI, name=f"bn pi{j} n={n}") for j in (1, 3, 5)]
    for n in (2, 3, 4, 5):
        reps += [check_jacobi(kf.kostant_bracket(i, n), JACOBI, name=f"kostant pi{i} gl{n}") for i in (1, 2, 3)]
    assert all(r.samples == 100 for r in reps)
    _verdict(capsys, 1, f"Jacobi, {len(reps)} brackets x 100 exact samples", _failed(reps), "tol 0 (exact)")


# 2 ------------------------------------------------------------------------------------

def _table(name, pi, M, pts):
    return [name] if any(o.lib_matrix(pi, xs) != o.eval_matrix(M, pi.chart.labels, xs) for xs in pts) else []


def test_criterion_2_printed_tables(capsys):
    bad = []
    N = 4
    pts = o.rational_points(o.classical_labels(N), TABLE_POINTS, SEED)
    for n, oracle in ((1, o.classical_pi1), (2, o.classical_pi2), (3, o.classical_pi3)):
        bad += _table(f"classical pi{n}", an.bracket(n, N), oracle(N), pts)
        bad += _table(f"relativistic pi{n}", rel.rel_bracket(n, N), getattr(o, f"rel_pi{n}")(N), pts)

    J1 = an.canonical_structures(3).J1
    f = sp.lambdify(o.syms(o.canonical_labels(3)), o.j1_printed(3), "numpy")
    rng = np.random.default_rng(SEED)
    for x in rng.uniform(-1, 1, (TABLE_POINTS, 6)):
        if not np.allclose(J1.matrix(list(x)).astype(float), np.array(f(*x), dtype=float), rtol=0, atol=1e-12):
            bad.append("canonical J1")
            break

    n = 3
    bpts = o.rational_points(o.bn_labels(n), TABLE_POINTS, SEED + 1)
    bad += _table("bn pi1", lie.bn_bracket(1, n), o.bn_pi1(n), bpts)
    bad += _table("bn pi3", lie.bn_bracket(3, n), o.bn_pi3(n), bpts)

    a1, a2, _, _, b3 = o.syms(o.B2_LABELS)
    b2pts = o.rational_points(o.B2_LABELS, TABLE_POINTS, SEED + 2, nonzero=(a1, a2, b3))
    bad += _table("B2 rational", lie.b2_rational_bracket(), o.b2_rational(), b2pts)

    kpts = o.rational_points(o.GL4_LABELS, TABLE_POINTS, SEED + 3, nonzero=(sp.Symbol("k1"),))
    bad += _table("gl4 pi1 list", kf.kostant_bracket(1, 4), o.gl4_pi1_list(), kpts)
    I21, I11, X1 = kf.rational_invariant(2, 1, 4), kf.rational_invariant(1, 1, 4), kf.kostant_master(1, 4)
    comps = o.gl4_x1_list()
    for xs in kpts:
        xq = [Q(x) for x in xs]
        if I21(xq) != o.eval_expr(o.gl4_i21(), o.GL4_LABELS, xs):
            bad.append("I21")
        if I11(xq) != o.eval_expr(o.gl4_i11(), o.GL4_LABELS, xs):
            bad.append("I11")
        if X1.components(xq) != [o.eval_expr(c, o.GL4_LABELS, xs) for c in comps]:
            bad.append("gl4 X1 list")
    _verdict(capsys, 2, f"printed tables at {TABLE_POINTS} points", sorted(set(bad)), "exact; J1 atol 1e-12")


# 3 ------------------------------------------------------------------------------------

def test_criterion_3_dirac_reduction(capsys):
    a1, a2, _, _, b3 = o.syms(o.B2_LABELS)
    pts = o.rational_points(o.B2_LABELS, TABLE_POINTS, SEED + 4, nonzero=(a1, a2, b3))
    D, T = lie.b2_dirac_bracket(2), lie.b2_rational_bracket()
    bad = set()
    for xs in pts:
        xq = [Q(x) for x in xs]
        if list(D.components(xq)) != list(T.components(xq)):
            bad.add("dirac(A4 pi2) != B2 table")
        if [[Q(v) for v in r] for r in lie.b2_p_matrix(xq)] != o.eval_matrix(o.b2_p_printed(), o.B2_LABELS, xs):
            bad.add("P != printed")
        if [[Q(v) for v in r] for r in lie.b2_pinv_matrix(xq)] != o.eval_matrix(o.b2_pinv_printed(), o.B2_LABELS, xs):
            bad.add("P^-1 != printed")
    _verdict(capsys, 3, "B2 Dirac reduction, P and P^-1", sorted(bad), "exact")


# 4 ------------------------------------------------------------------------------------

def test_criterion_4_lenard(capsys):
    reps = reg._cl_lenard(4, EXACT)
    reps += reg._rel_lenard(3, EXACT) + reg._rel_lenard(4, EXACT)
    reps += reg._bn_lenard(2, EXACT) + reg._bn_lenard(3, EXACT)
    gl5 = EXACT.but(samples=8)
    reps += [kf.lenard_check(i, l, 5, gl5) for i in (2, 3) for l in range(1, 5)]
    reps.append(kf.rational_lenard_check(gl5))
    _verdict(capsys, 4, f"Lenard chains, {len(reps)} identities", _failed(reps), "tol 0 (exact)")


# 5 ------------------------------------------------------------------------------------

def test_criterion_5_involution(capsys):
    reps = reg._cl_involution(4, EXACT)
    for N in (2, 3, 4):
        reps += reg._rel_involution(N, EXACT)
    for n in (2, 3):
        reps += reg._bn_involution(n, EXACT)
    reps.append(check_involution(lie.b2_rational_bracket(), [lie.b2_invariant(k) for k in range(1, 6)], EXACT, name="B2 rational"))
    reps += reg._k_involution(4, EXACT.but(samples=10))
    gl5 = EXACT.but(samples=5)
    reps += reg._k_involution(5, gl5)
    fam = [kf.poly_invariant(k, 5) for k in range(1, 6)] + kf.gl5_k()
    reps += [check_involution(kf.kostant_bracket(i, 5), fam, gl5, name=f"gl5 H1..H5,K1..K4/pi{i}") for i in (1, 2, 3)]
    _verdict(capsys, 5, f"involution, {len(reps)} family/bracket pairs", _failed(reps), "tol 0 (exact)")


# 6 ------------------------------------------------------------------------------------

def test_criterion_6_casimirs(capsys):
    reps = reg._cl_casimirs(4, EXACT) + reg._rel_casimirs(4, EXACT)
    reps.append(check_casimir(lie.b2_rational_bracket(), lie.b2_det(), EXACT, name="B2 det L"))
    reps += kf.casimir_checks(4, EXACT) + kf.casimir_checks(5, EXACT.but(samples=8))
    _verdict(capsys, 6, f"Casimirs, {len(reps)} pairs", _failed(reps), "tol 0 (exact)")


# 7 ------------------------------------------------------------------------------------

def test_criterion_7_master_symmetries(capsys):
    small = EXACT.but(samples=10)
    reps = reg._cl_master_action(4, EXACT) + reg._cl_master_ladder(4, small) + reg._cl_deformation(4, small)
    canon = EXACT.but(samples=15, mode="float", tol=CANON_TOL)
    reps += reg._cl_canonical(3, canon)
    reps += reg._rel_master(3, small) + reg._rel_master(4, small)
    reps += reg._k_master(4, small)
    reps.append(kf.gl5_master_action_check(EXACT.but(samples=8)))
    _verdict(capsys, 7, f"master symmetries, {len(reps)} relations", _failed(reps), f"exact; canonical chart float tol {CANON_TOL:g}")


# 8 ------------------------------------------------------------------------------------

def test_criterion_8_symmetry_condition(capsys):
    reps = reg._cl_symmetry(4, EXACT)
    assert any("closed form" in r.name for r in reps)
    _verdict(capsys, 8, "dY/dt + [chi2, Y] = 0 for Y_-1, Y_0, Y_1", _failed(reps), "tol 0 (exact)")


# 9 ------------------------------------------------------------------------------------

def _drift_failures(system, dims, n_poly):
    bad = []
    for d in dims:
        T = reg.SYSTEM_SPECS[system].target(d)
        tr = integrate_flow(T.flow, T.point(SEED), 10.0, 1e-3)
        for k, e in enumerate(drift_report(tr, T.invariants).entries):
            tol = POLY_DRIFT if k < n_poly(d) else RAT_DRIFT
            if not e.drift <= tol:
                bad.append(f"{system} {d} {e.name} drift {e.drift:.2e}")
    return bad


def test_criterion_9_dynamics(capsys):
    bad = _drift_failures("classical", (2, 3, 4), lambda N: N)
    bad += _drift_failures("relativistic", (2, 3, 4), lambda N: N + 1)
    bad += _drift_failures("bn", (2, 3, 4), lambda n: n)
    bad += _drift_failures("kostant", (3, 4), lambda n: n)

    rng = np.random.default_rng(SEED)
    for N in (2, 3, 4, 5):
        x0 = list(rng.uniform(0.1, 1.0, N - 1)) + list(rng.uniform(-1.0, 1.0, N))
        L0 = np.array(an.lax_matrix(x0[: N - 1], x0[N - 1:]), dtype=float)
        traj = integrate_flow(an.toda_flow(N), x0, 5.0, 1e-3)
        ev0 = eigenvalues(L0)
        for t, row in list(zip(traj.times, traj.states))[::250]:
            Lq = qr_solve(L0, t)
            Lr = np.array(an.lax_matrix(row[: N - 1], row[N - 1:]), dtype=float)
            if not np.max(np.abs(Lq - Lr)) <= QR_TOL:
                bad.append(f"qr vs rk4 N={N} t={t:g}")
            if not np.max(np.abs(eigenvalues(Lq) - ev0)) <= EIG_TOL:
                bad.append(f"eigenvalue drift N={N} t={t:g}")
    _verdict(capsys, 9, "RK4 drift over t in [0,10], QR vs RK4, spectrum under QR", sorted(set(bad)),
             f"poly {POLY_DRIFT:g}, rational {RAT_DRIFT:g}, qr {QR_TOL:g}, eigen {EIG_TOL:g}")


# 10 -----------------------------------------------------------------------------------

def test_criterion_10_negative_controls(capsys):
    reps = reg._cl_controls(4, EXACT)
    bad = [r.name for r in reps if not r.passed or not r.max_residual]
    tau = reps[0]
    if tau.witness is None:
        bad.append("tau reported no witness")
    _verdict(capsys, 10, "tau fails Jacobi, perturbed Y1 fails symmetry, {q1,p1} fails involution", bad,
             "residual must be nonzero")

