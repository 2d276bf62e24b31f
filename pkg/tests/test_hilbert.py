import json
from fractions import Fraction as F
from itertools import combinations_with_replacement
from math import comb

import pytest

from chernbetti.hilbert import (
    FIXTURE_ENV,
    PRESETS,
    CapExceededError,
    SurfaceBetti,
    euler_product_coefficient,
    gs_reading_report,
    hilb_euler,
    hilb_poincare,
    hilb_poincare_per_factor,
    kummer_fixture_check,
    load_fixtures,
    partition_count,
    partitions,
    phi_additivity_check,
    sym_product_poincare,
    symmetric_product_phi_report,
)
from chernbetti.invariants import phi_cap, phi_small

K3 = PRESETS["k3"]


def graded_symmetric_power(S: SurfaceBetti, m: int) -> list[int]:
    """Betti numbers of the m-th graded symmetric power of H*(S), by direct
    enumeration of basis multisets (odd classes at most once)."""
    basis = [(deg, i) for deg, b in enumerate(S.betti) for i in range(b)]
    out = [0] * (4 * m + 1)
    for combo in combinations_with_replacement(basis, m):
        odd = [x for x in combo if x[0] % 2]
        if len(odd) != len(set(odd)):
            continue
        out[sum(x[0] for x in combo)] += 1
    return out


def test_partitions():
    assert partitions(2) == [(2, 0), (0, 1)]
    assert len(partitions(4)) == 5
    assert len(partitions(8)) == 22
    assert partitions(0) == [()]
    for m in range(1, 9):
        assert len(partitions(m)) == partition_count(m)
        for a in partitions(m):
            assert sum((i + 1) * x for i, x in enumerate(a)) == m
    with pytest.raises(ValueError):
        partitions(-1)


def test_partition_counts():
    assert [partition_count(m) for m in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]


@pytest.mark.parametrize("name", ["k3", "cp2", "torus"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_sym_against_enumeration(name, m):
    S = PRESETS[name]
    assert list(sym_product_poincare(S, m).betti) == graded_symmetric_power(S, m)


def test_sym_examples():
    assert sym_product_poincare(K3, 2).betti == (1, 0, 22, 0, 254, 0, 22, 0, 1)
    assert sym_product_poincare(K3, 1).betti == K3.betti
    assert sym_product_poincare(K3, 0).betti == (1,)


def test_hilb_examples():
    assert hilb_poincare(K3, 2).betti == (1, 0, 23, 0, 276, 0, 23, 0, 1)
    assert hilb_poincare(K3, 1).betti == K3.betti
    assert hilb_euler(K3, 2) == 324
    e8 = hilb_euler(K3, 8)
    assert e8 == 30178575 and e8 % 2 == 1
    assert hilb_euler(K3, 0) == 1


def test_euler_product():
    for m in range(11):
        assert hilb_euler(K3, m) == euler_product_coefficient(24, m)
    assert hilb_euler(PRESETS["cp2"], 3) == euler_product_coefficient(3, 3)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_hilb_duality_and_positivity(name):
    S = PRESETS[name]
    for m in range(1, 7):
        b = hilb_poincare(S, m).betti
        assert all(x >= 0 for x in b)
        assert b == b[::-1]


def test_sym_euler_multiset_count():
    for name in ("k3", "cp2"):
        S = PRESETS[name]
        for m in range(1, 7):
            assert sym_product_poincare(S, m).euler == comb(S.euler + m - 1, m)


def test_cap():
    with pytest.raises(CapExceededError):
        hilb_poincare(K3, 13)
    assert hilb_poincare(K3, 13, cap=13).d == 52


def test_phi_additivity():
    rep = phi_additivity_check(PRESETS["cp2"], 6, "CP2")
    assert rep.passed
    for m in range(1, 7):
        assert phi_small(hilb_poincare(PRESETS["cp2"], m)) == F(8 * m, 3)
    for m in range(1, 9):
        assert phi_cap(hilb_poincare(K3, m)) == 0
        assert phi_small(hilb_poincare(K3, m)) == m * F(-20, 3)


def test_symmetric_product_phi_values():
    # Phi(K3^(m)) equals e/12 times 24m(m-1)/25, so the literal comparison fails
    rep = symmetric_product_phi_report(6)
    assert all(c.status == "FAIL" for c in rep.checks)
    for m in range(2, 9):
        P = sym_product_poincare(K3, m)
        assert 12 * phi_cap(P) / P.euler == F(24 * m * (m - 1), 25)
    assert phi_cap(sym_product_poincare(K3, 2)) == 48


def test_gs_reading():
    rep = gs_reading_report()
    assert rep.passed
    assert len(rep.warnings) == 1
    assert hilb_poincare_per_factor(K3, 2) is None
    assert hilb_poincare_per_factor(K3, 1).betti == K3.betti


def test_surface_validation():
    with pytest.raises(ValueError):
        SurfaceBetti(1, 1, 0, 0, 1).validate_connected()
    with pytest.raises(ValueError):
        from chernbetti.hilbert import surface

        surface("enriques")


def test_kummer_fixtures():
    rep = kummer_fixture_check()
    assert rep.passed
    assert rep.data["K8_euler"] == 9477


def test_fixture_override(tmp_path, monkeypatch):
    data = load_fixtures()
    data["kummer"]["K8"]["euler"] = 9478
    (tmp_path / "fixtures.json").write_text(json.dumps(data))
    monkeypatch.setenv(FIXTURE_ENV, str(tmp_path))
    assert load_fixtures()["kummer"]["K8"]["euler"] == 9478
    assert not kummer_fixture_check(load_fixtures()).passed
