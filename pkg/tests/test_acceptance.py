"""Acceptance criteria, one test each; every comparison is exact."""

import csv
import io
import random
import subprocess
import sys
import time
from fractions import Fraction as F

from chernbetti import charclass, hilbert, invariants, manifolds, moduli
from chernbetti.cli import calabi_yau_intersections
from chernbetti.core import UniPoly
from chernbetti.symmetric import ChernPoly, substitute

K3 = hilbert.PRESETS["k3"]
CP2 = hilbert.PRESETS["cp2"]


def _dual(d, half):
    b = list(half) + list(half[: (d + 1) // 2])[::-1]
    return invariants.PoincarePoly(d, tuple(b[: d + 1]), closed_oriented=True)


def test_criterion_01_hilbert_fixtures(acceptance):
    t = time.perf_counter()
    P2 = hilbert.hilb_poincare(K3, 2)
    e2 = hilbert.hilb_euler(K3, 2)
    e8 = hilbert.hilb_euler(K3, 8)
    elapsed = time.perf_counter() - t
    ok = P2.betti == (1, 0, 23, 0, 276, 0, 23, 0, 1) and e2 == 324 and e8 == 30178575 and e8 % 2 == 1
    ok = ok and elapsed < 1
    assert acceptance(1, ok, f"P(K3^[2])={P2.betti}, e2={e2}, e8={e8}, {elapsed:.3f}s")


def test_criterion_02_kummer(acceptance):
    fx = hilbert.load_fixtures()["kummer"]
    P = invariants.PoincarePoly(8, tuple(fx["K2"]["betti"]), True, True).validate()
    odd = [P.betti[j] for j in (1, 3, 5, 7)]
    e8 = fx["K8"]["euler"]
    ok = P.euler == 108 and invariants.phi_cap(P) == 0 and all(b % 4 == 0 for b in odd) and e8 == 9477 and e8 % 2
    assert acceptance(2, bool(ok), f"e(K_2)={P.euler}, Phi={invariants.phi_cap(P)}, odd b={odd}, e(K_8)={e8}")


def test_criterion_03_phi_laws(acceptance):
    hilb_zero = all(invariants.phi_cap(hilbert.hilb_poincare(K3, m)) == 0 for m in range(1, 9))
    sym_bad = []
    for m in range(2, 7):
        Phi = invariants.phi_cap(hilbert.sym_product_poincare(K3, m))
        if Phi != F(24 * m * (m - 1), 25):
            sym_bad.append((m, Phi))
    additive = True
    for S in (K3, CP2):
        phi1 = invariants.phi_small(S.poincare())
        additive &= all(invariants.phi_small(hilbert.hilb_poincare(S, m)) == m * phi1 for m in range(1, 7))
    ok = hilb_zero and not sym_bad and additive
    detail = f"Phi(K3^[m])=0: {hilb_zero}; phi additive: {additive}; "
    detail += "Phi(K3^(m)) mismatches " + ", ".join(f"m={m}: {v} vs {F(24 * m * (m - 1), 25)}" for m, v in sym_bad)
    assert acceptance(3, ok, detail)


def test_criterion_04_lemma_suite(acceptance):
    t = time.perf_counter()
    bad = []
    for n in range(2, 9):
        for k in (2, 4, 6):
            if n >= k and charclass.kclass(n, k) != charclass.closed_form_kclass(n, k):
                bad.append((n, k))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 120
    assert acceptance(4, ok, f"mismatches {bad}, {elapsed:.1f}s")


def test_criterion_05_theorems(acceptance):
    t2 = all(charclass.theorem2_identity(n).passed for n in range(2, 9))
    t3 = all(charclass.theorem3_identity(n).passed for n in range(4, 9))
    c = lambda k: ChernPoly.gen(k, 4)  # noqa: E731
    td = substitute(charclass.todd_class(4).homogeneous(4), {1: 0})
    todd = td == (c(2) ** 2 * 3 - c(4)) / 720
    assert acceptance(5, t2 and t3 and todd, f"theorem2 {t2}, theorem3 {t3}, top Todd {td.render()}")


def _affine_holds(d, free, lhs, rhs):
    for i in range(len(free) + 1):
        half = [1] + [0] * (d // 2)
        if i:
            half[free[i - 1]] = 1
        P = _dual(d, half)
        if lhs(P) != rhs(P):
            return False
    return True


def test_criterion_06_betti_algebra(acceptance):
    eq4 = _affine_holds(4, [1, 2], invariants.phi_cap, lambda P: 2 * (22 - 4 * P.betti[1] - P.betti[2]))
    eq8 = _affine_holds(
        8,
        [1, 2, 3, 4],
        invariants.phi_cap,
        lambda P: 4 * (46 - 25 * P.betti[1] + 10 * P.betti[2] - P.betti[3] - P.betti[4]),
    )
    rng = random.Random(2024)
    der = fo = True
    zeros = 0
    for i in range(1000):
        d = 4 * rng.randint(1, 3)
        P = invariants.random_poincare(d, rng)
        if i % 2:
            # pin b_2 so that Phi vanishes when an integral solution exists
            half = list(P.betti[: d // 2 + 1])
            half[2] = 0
            p0 = invariants.phi_cap(_dual(d, half))
            half[2] = 1
            slope = invariants.phi_cap(_dual(d, half)) - p0
            sol = -p0 / slope
            if sol.denominator == 1 and sol >= 0:
                half[2] = int(sol)
                P = _dual(d, half)
        der &= 2 * P.derivative_at_minus_one(1) == -d * P.euler
        lhs, rhs = invariants.fo_form(P)
        fo &= (invariants.phi_cap(P) == 0) == (lhs == rhs)
        zeros += invariants.phi_cap(P) == 0
    ok = eq4 and eq8 and der and fo and zeros > 0
    assert acceptance(6, ok, f"d=4 {eq4}, d=8 {eq8}, derivative {der}, Phi=0 iff fo {fo} ({zeros} zero cases)")


def test_criterion_07_hodge_lemma(acceptance):
    rng = random.Random(11)
    fails = {}
    mirror_ok = True
    for n in (2, 3, 4, 6):
        fails[n] = 0
        for _ in range(1000):
            H = invariants.random_diamond(n, rng)
            fails[n] += not invariants.phi_lemma_check(H).checks[0].ok
            mirror_ok &= invariants.mirror(invariants.mirror(H)) == H
            if n % 2 == 0:
                lhs, rhs = invariants.mirror_sum_identity(H)
                mirror_ok &= lhs == rhs
    ok = not any(fails.values()) and mirror_ok
    assert acceptance(7, ok, f"failing diamonds per n {fails}; mirror involution and sum identity {mirror_ok}")


def test_criterion_08_moduli(acceptance):
    ok = True
    for g in range(2, 9):
        P = moduli.mg_poincare(g)
        chi = moduli.mg_chi(g)
        ok &= moduli.mg_poincare_quotient(g) == moduli.mg_poincare_product(g)
        ok &= P.betti[2] == 1 and P.betti[3] == 2 * g
        ok &= sum(P.betti) == 2 ** (2 * g - 2) * g and P.euler == 0
        ok &= chi.poly(1) == 0 and chi.todd_genus == 1
    shifted = moduli.chi_shifted(moduli.mg_chi(3))
    ok &= shifted == UniPoly([0, 0, 0, 0, 4, -4, 1])
    assert acceptance(8, ok, f"g=3 chi(-1+t) = {shifted.render()}")


def test_criterion_09_manifolds(acceptance):
    k3 = manifolds.complete_intersection_chern(3, [4])
    quintic = manifolds.complete_intersection_chern(4, [5])
    cp2 = manifolds.cp_chern(2)
    chi_k3 = manifolds.chi_from_chern(k3)
    chi_cp2 = manifolds.chi_from_chern(cp2)
    ok = k3.value("c2") == 24 and manifolds.c1_cn1(k3) == 0 == invariants.theorem2_rhs(chi_k3)
    ok &= quintic.euler == -200 and (3 * quintic.euler) % 3 == 0
    ok &= manifolds.c1_cn1(cp2) == 9 == invariants.theorem2_rhs(chi_cp2)
    cis = calabi_yau_intersections(6)
    bad = [
        (N, d) for N, d in cis if not manifolds.divisibility_suite(manifolds.complete_intersection_chern(N, d)).passed
    ]
    ok &= not bad
    assert acceptance(9, ok, f"{len(cis)} c1=0 complete intersections, failures {bad}")


def test_criterion_10_holonomy(acceptance):
    fx = hilbert.load_fixtures()
    ok = True
    for ex in fx["g2"]["examples"]:
        b = ex["betti"]
        q = invariants.g2_quantity(invariants.g2_betti(b[1], b[2], b[3]))
        q2 = invariants.g2_quantity(invariants.g2_betti(b[1], b[2] + 1, b[3] + 3))
        ok &= q == 0 and q2 == 0
    sp = invariants.PoincarePoly(8, tuple(fx["spin7"]["betti"]), True, True)
    ok &= invariants.phi_cap(sp) == 0 and 3 * sp.betti[2] + 7 == 43 == fx["spin7"]["b4_minus"]
    qk = fx["quaternion_kahler"]
    vals = [invariants.qk_constraint(invariants.QKBetti(qk["m"], ex["beta"])) for ex in qk["examples"]]
    ok &= vals == [0, 0, 0, 0]
    assert acceptance(10, ok, f"Spin(7) Phi={invariants.phi_cap(sp)}, quaternion-Kahler values {vals}")


def test_criterion_11_verify_all(acceptance):
    t = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "chernbetti.cli", "verify", "--suite", "all", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - t
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    warns = [r["check"] for r in rows if r["status"] == "WARN"]
    fails = [r["check"] for r in rows if r["status"] == "FAIL"]
    ok = proc.returncode == 0 and len(warns) == 3 and elapsed < 300
    detail = f"exit {proc.returncode}, {len(warns)} WARN, {len(fails)} FAIL {fails}, {elapsed:.1f}s"
    assert acceptance(11, ok, detail)
