import pytest

from conley.combinatorial_dynamics import (
    FiltrationTriple, standard_shift_equivalence,
)
from conley.conley_index import change_coordinates
from conley.connection import (
    ar_decomposition, ar_exact_sequence, gamma_conjugated_check,
    gamma_cross_validate, gamma_rank_bound, gamma_sum_decomposition,
    morse_equation_check, tau,
)
from conley.scalar_linalg import QQ, Field, Matrix, rank

from dynamics_util import ar1d_triple, ar3d_triple, fixture_system


@pytest.fixture(scope="module")
def dec1d():
    _, tr = ar1d_triple()
    return ar_decomposition(tr, QQ)


@pytest.fixture(scope="module")
def dec_nc():
    sysf = fixture_system("no-connection.json")
    tr = FiltrationTriple(sysf.F, sysf.region("N0"), sysf.region("N1"),
                          sysf.region("N2"))
    return ar_decomposition(tr, QQ)


def test_index_sequence_exact(dec1d):
    # exactness is asserted inside; spot-check the dims around the
    # interesting degrees: 0 -> CH_1(R) -> CH_0(A) -> CH_0(S) -> 0
    assert dec1d.idx_R.ch_dims() == {1: 1}
    assert dec1d.idx_A.ch_dims() == {0: 2}
    assert dec1d.idx_S.ch_dims() == {0: 1}
    assert rank(dec1d.gamma_les_matrix(1)) == 1


def test_gamma_two_routes_agree_1d(dec1d):
    report = gamma_cross_validate(dec1d)
    assert report[1]["exact"]
    assert dec1d.gamma_les_matrix(1) == dec1d.gamma_fact_matrix(1)
    col = dec1d.gamma_fact_matrix(1).column(0)
    assert sorted(col.values()) == [QQ.of(-1), QQ.of(1)]


def test_gamma_zero_without_connecting_orbits(dec_nc):
    assert dec_nc.gamma_les_matrix(1).is_zero()
    assert dec_nc.gamma_fact_matrix(1).is_zero()
    gamma_cross_validate(dec_nc)


def test_gamma_3d_product_system():
    _, tr = ar3d_triple()
    dec = ar_decomposition(tr, QQ)
    assert dec.idx_R.ch_dims() == {1: 1}
    assert dec.idx_A.ch_dims() == {0: 2}
    assert dec.witness.n == 0
    assert dec.gamma_les_matrix(1) == dec.gamma_fact_matrix(1)
    assert rank(dec.gamma_fact_matrix(1)) == 1
    gamma_cross_validate(dec)


def test_attractor_equals_whole_set():
    # N1 = N0: the repelling part is empty and Gamma vanishes
    sysf = fixture_system("ar1d.json")
    tr = FiltrationTriple(sysf.F, sysf.region("N0"), sysf.region("N0"),
                          sysf.region("N2"))
    dec = ar_decomposition(tr, QQ)
    assert dec.idx_R.ch_dims() == {}
    assert dec.idx_A.ch_dims() == dec.idx_S.ch_dims()
    assert all(m.is_zero() for m in dec.gamma_les.values())


def test_tau_localizes(dec1d):
    # the connecting set meets both pieces of F, so tau is onto a
    # two-dimensional degree-0 target here
    assert dec1d.H_FS.dims() == {0: 2}
    assert rank(dec1d.tau.matrix(0)) == 2


def test_tau_trivial_target(dec_nc):
    # only the attractor block of F meets S
    assert dec_nc.H_FS.dims() == {0: 1}


def test_sum_decomposition_two_arcs(dec1d):
    pieces = gamma_sum_decomposition(dec1d)
    assert len(pieces) == 2
    left, right = sorted(pieces, key=lambda p: min(p[0].top_cells()))
    lv = sorted(left[1][1].column(0).values())
    rv = sorted(right[1][1].column(0).values())
    assert rank(left[1][1]) == 1 and rank(right[1][1]) == 1
    assert left[1][1] + right[1][1] == dec1d.gamma_fact_matrix(1)
    # each arc contributes a single signed component class
    assert lv in ([QQ.of(-1)], [QQ.of(1)]) or QQ.of(0) in lv
    assert len([v for v in left[1][1].column(0).values() if v != 0]) == 1
    assert len([v for v in right[1][1].column(0).values() if v != 0]) == 1


def test_sum_decomposition_single_component(dec_nc):
    pieces = gamma_sum_decomposition(dec_nc)
    assert len(pieces) == 1
    assert pieces[0][1][1] == dec_nc.gamma_fact_matrix(1)


def test_morse_equation(dec1d, dec_nc):
    for dec in (dec1d, dec_nc):
        for q, row in morse_equation_check(dec).items():
            assert row["ok"], (q, row)


def test_gamma_rank_bound(dec1d, dec_nc):
    for dec in (dec1d, dec_nc):
        for q, row in gamma_rank_bound(dec).items():
            assert row["ok"], (q, row)
    assert gamma_rank_bound(dec1d)[1] == {"rank": 1, "bound": 2, "ok": True}


def test_gamma_mod_p():
    _, tr = ar1d_triple()
    dec = ar_decomposition(tr, Field(7))
    assert rank(dec.gamma_les_matrix(1)) == 1
    assert dec.gamma_les_matrix(1) == dec.gamma_fact_matrix(1)


def test_gamma_conjugated_between_triples():
    # the same dynamics seen through a shrunken triple: Gammas agree up
    # to the index isos and a time shift
    sysf = fixture_system("ar1d.json")
    F = sysf.F
    tr_big = FiltrationTriple(F, sysf.region("N0"), sysf.region("N1"),
                              sysf.region("N2"))
    tr_small = FiltrationTriple(F, sysf.region("N0_alt"),
                                sysf.region("N1_alt"), sysf.region("N2"))
    decA = ar_decomposition(tr_big, QQ)
    decB = ar_decomposition(tr_small, QQ)
    se_R = standard_shift_equivalence(F, tr_big.pair_R, tr_small.pair_R,
                                      QQ, k=1)
    se_A = standard_shift_equivalence(F, tr_big.pair_A, tr_small.pair_A,
                                      QQ, k=1)
    iso_R = change_coordinates(decA.idx_R, decB.idx_R, se_R)
    iso_A = change_coordinates(decA.idx_A, decB.idx_A, se_A)
    shifts = gamma_conjugated_check(decA, decB, iso_R, iso_A)
    assert 1 in shifts
    assert rank(decA.gamma_les_matrix(1)) == rank(decB.gamma_les_matrix(1))
