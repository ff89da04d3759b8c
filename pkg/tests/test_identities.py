from math import comb, sin, pi

import numpy as np
import pytest

from cyclic_loci.affine import PosetParams, identity_perm
from cyclic_loci.grassmann import sample_cell_point, extended_minor
from cyclic_loci.tptests import eta_singleton
from cyclic_loci import identities as ids


def test_cross_product_pairing(rng):
    vs = [rng.standard_normal(4) for _ in range(3)]
    w = ids.cross(vs)
    u = rng.standard_normal(4)
    assert u @ w == pytest.approx(np.linalg.det(np.array([u] + vs).T))


@pytest.mark.parametrize("l", [2, 3, 4])
def test_L_for_k2_is_a_plucker(l, rng):
    P = PosetParams(2, l, 3 * l)
    X = sample_cell_point(identity_perm(2, l), P, rng=rng)
    assert ids.weyl_L(X, P) == pytest.approx(extended_minor(X, [2, 2 + l]))


@pytest.mark.parametrize("l", [2, 3, 4])
def test_L_for_k3_quadratic(l, rng):
    P = PosetParams(3, l, 6 * l)
    X = sample_cell_point(identity_perm(3, l), P, rng=rng)
    E = lambda *I: extended_minor(X, list(I))
    q = (E(2, l + 2, 2 * l + 1) * E(l + 1, 2 * l + 2, 3 * l + 1)
         - E(l + 1, l + 2, 2 * l + 1) * E(2, 2 * l + 2, 3 * l + 1))
    assert ids.weyl_L(X, P) == pytest.approx(q, rel=1e-10)


def test_weyl_identity_gr312():
    assert ids.verify_weyl(PosetParams(3, 4, 12), 20)["max_residual"] < 1e-8


def test_ptolemy_small_cases():
    assert ids.firstegs_reduction()["max_residual"] < 1e-12
    for p in range(2, 7):
        assert ids.verify_ptolemy(PosetParams(2, 2, 2 * p), 10)["pass"]
        assert eta_singleton(1, 2, p) == pytest.approx(sin(2 * pi / p) / sin(pi / p), abs=1e-12)


@pytest.mark.parametrize("k,l,p", [(3, 2, 4), (4, 3, 5), (3, 4, 8), (4, 4, 4)])
def test_ptolemy_grid_samples(k, l, p):
    assert ids.verify_ptolemy(PosetParams(k, l, p * l), 10)["max_residual"] < 1e-8


def test_toeplitz_minor_identity():
    J, K = 0.7, 1.9
    r = ids.toeplitz_minor_identity(1, J, K, 6, 9)
    assert r["principal"] < 1e-30
    assert ids.toeplitz_matrix(1, J, K, 6, 9)[0, 0] == pytest.approx(K + eta_singleton(1, 6, 9) * J)
    for t in range(2, 9):
        r = ids.toeplitz_minor_identity(t, J, K, 6, 9)
        assert r["principal"] < 1e-20 and r["off_principal"] < 1e-15


def test_toeplitz_t_equals_k_is_ptolemy():
    J, K = 0.4, 2.2
    for k, p in [(3, 5), (4, 7)]:
        M = ids.toeplitz_matrix(k, J, K, k, p)
        assert np.linalg.det(M) == pytest.approx(ids.ptolemy_rhs(K, J, k, p), rel=1e-10)


@pytest.mark.parametrize("k,l,n", [(2, 3, 12), (3, 2, 10), (4, 3, 18), (3, 3, 9)])
def test_weyl_matrix_is_toeplitz(k, l, n):
    assert ids.verify_toeplitz(PosetParams(k, l, n), 5)["pass"]


def test_eta_recurrence_suite():
    for k in range(2, 6):
        for p in range(k, 10):
            assert ids.verify_eta_recurrence(k, p)["pass"]


@pytest.mark.parametrize("k,l", [(2, 3), (2, 4), (3, 4), (3, 5)])
def test_gsv_minors(k, l):
    r = ids.gsv_minor_checks(PosetParams(k, l, k * l), 10)
    assert r["pass"]
    # i = N: empty frozen product, the minor is a multiple of Delta_{I_N} alone
    R, C = ids.gsv_rows_cols(PosetParams(k, l, k * l), (k - 1) * (l - 1))
    assert len(R) == len(C) == 1


def test_gsv_out_of_regime():
    assert ids.gsv_minor_checks(PosetParams(3, 3, 9))["pass"] is None


@pytest.mark.parametrize("l,expo", [(4, [2, 2, 2, 2]), (5, [2, 2, 4, 2, 2])])
def test_misha(l, expo):
    r = ids.misha_check(PosetParams(3, l, 3 * l))
    assert r["pass"] and r["frozen_exponents"] == expo


def test_isospectrality_k2():
    r = ids.isospectrality_experiment(PosetParams(2, 3, 15), 20)
    assert r["std"] < 1e-8 and r["roots_match"] and r["status"] == "proved case"
    r = ids.isospectrality_experiment(PosetParams(3, 4, 12), 20)
    assert r["status"] == "conjectural" and r["std"] < 1e-8


def test_isospectrality_parity_sign():
    for k, l, n in [(2, 4, 12), (3, 4, 16), (3, 5, 20)]:
        assert ids.isospectrality_experiment(PosetParams(k, l, n), 10)["roots_match_parity"]


def test_band_periodicity(rng):
    P = PosetParams(3, 4, 12)
    X = sample_cell_point(identity_perm(3, 4), P, rng=rng)
    B = ids.band_map(X, P)
    assert B(5, 6) == B(1, 2) and B(3, 9) == 0.0


def test_counting_identities():
    r = ids.counting_identities(15)
    assert r["pass"]
    l, d = 3, 2
    lhs = sum(comb(l - 1, a) * comb(l - 1 + a, l - 1) * comb(d + l - 1, d - a) for a in range(3))
    assert lhs == 36 == comb(d + l - 1, l - 1) ** 2
    assert r["kis3"]["coefficients"][2] == 27
    assert 6 * comb(2, 4) + 6 * comb(2, 3) + comb(2, 2) == 1


def test_series_exact():
    # 1/(1-x)^2 = sum (d+1) x^d ; x/(1-x^2) = x + x^3 + ...
    assert ids.series(1, 0, 2, 0, 5) == [1, 2, 3, 4, 5, 6]
    assert ids.series(1, 1, 0, 1, 5) == [0, 1, 0, 1, 0, 1]


def test_scan():
    r = ids.ell_cluster_variable_scan(4, 8, 2)
    assert (r["count"], r["orbit_count"]) == (42, 12)
    reps = {"1357", "2468", "1234", "2345", "1235", "2346", "1345", "2456", "1347", "2458", "1246", "2357"}
    found = {"".join(map(str, I)) for I in r["subsets"]}
    assert reps <= found
    r = ids.ell_cluster_variable_scan(3, 6, 3, include_frozen=False)
    assert (r["count"], r["orbit_count"]) == (12, 6)
    assert {(1, 2, 4), (1, 2, 5), (2, 3, 5), (2, 3, 6), (3, 4, 6), (1, 3, 4)} <= set(r["subsets"])
    r = ids.ell_cluster_variable_scan(2, 8, 2)
    assert [(1, 3), (3, 5), (5, 7), (1, 7)] in r["orbits"]


def test_grading_and_folding():
    g = ids.grading_report(walks=50)
    assert g["pass"] and g["violations"] == 0
    assert ids.folding_report()["pass"]
