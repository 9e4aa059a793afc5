import pytest

from conley.combinatorial_dynamics import (
    FiltrationPair, invariant_part, standard_shift_equivalence,
)
from conley.conley_index import conley_index
from conley.cubical_complex import CubicalSet, closure, empty_set
from conley.emit_receive import (
    AdmissibleWitness, Omega_independence_check, Omega_restriction_check,
    check_admissible, emitter, emitter_naturality_check, receiver_omega,
    receiver_omega_map,
)
from conley.errors import NotAdmissibleWithinBounds
from conley.scalar_linalg import QQ, Matrix, rank

from dynamics_util import (
    cells_1d, doubling_map, doubling_pair, fixture_system,
)


def fixture_pair(name, nN, nL):
    sysf = fixture_system(name)
    return sysf, FiltrationPair(sysf.F, sysf.region(nN), sysf.region(nL))


def test_emitter_attractor_is_zero():
    # L empty: nothing ever leaves, the emitted class vanishes
    I = doubling_map()
    pair = FiltrationPair(I, cells_1d([(-8, 8)]),
                          cells_1d([(-8, -2), (2, 8)]))
    em = emitter(I, pair, QQ)
    assert em.matrix(1).rows == 2
    sysf, apair = fixture_pair("ar1d.json", "N1", "N2")
    em = emitter(sysf.F, apair, QQ)
    assert not em.f_domain.top_cells()
    assert all(m.is_zero() for m in em.d_F.values())


def test_emitter_doubling_signed_difference():
    pair = doubling_pair()
    em = emitter(pair.F, pair, QQ)
    # F has two components and the emitted class is their difference
    assert em.H_F.dims() == {0: 2}
    col = em.matrix(1).column(0)
    assert sorted(col.values()) == [QQ.of(-1), QQ.of(1)]


def test_emitter_saddle_two_endpoints():
    sysf, pair = fixture_pair("saddle3d.json", "N", "L")
    em = emitter(sysf.F, pair, sysf.field)
    assert em.H_F.dims() == {0: 2}
    col = em.matrix(1).column(0)
    assert sorted(col.values()) == [QQ.of(-1), QQ.of(1)]


def test_emitter_naturality_same_pair():
    pair = doubling_pair()
    ok, report = emitter_naturality_check(pair.F, pair, pair, QQ)
    assert ok, report


@pytest.mark.parametrize("name", ["saddle3d.json", "flip3d.json"])
def test_emitter_naturality_nested_3d(name):
    sysf = fixture_system(name)
    small = FiltrationPair(sysf.F, sysf.region("N_alt"),
                           sysf.region("L_alt"))
    big = FiltrationPair(sysf.F, sysf.region("N"), sysf.region("L"))
    ok, report = emitter_naturality_check(sysf.F, small, big, sysf.field)
    assert ok, report


def test_emitter_naturality_nested_1d():
    sysf = fixture_system("ar1d.json")
    small = FiltrationPair(sysf.F, sysf.region("N0_alt"),
                           sysf.region("N1_alt"))
    big = FiltrationPair(sysf.F, sysf.region("N0"), sysf.region("N1"))
    ok, report = emitter_naturality_check(sysf.F, small, big, sysf.field)
    assert ok, report


def test_receiver_omega_projects_and_commutes():
    sysf, pair = fixture_pair("ar1d.json", "N1", "N2")
    idx = conley_index(sysf.F, pair, QQ)
    rec = receiver_omega(sysf.F, pair, QQ, idx=idx)
    for q, om in rec.omega.items():
        # omega recovers CH from its included copy
        assert om * (rec.i.matrix(q) * idx.ch_basis(q)) == \
            Matrix.identity(QQ, idx.ch_dim(q))
        assert om * rec.phi_rec.matrix(q) == idx.phi_ch(q) * om


def test_receiver_omega_saddle_degree_one():
    sysf, pair = fixture_pair("saddle3d.json", "N", "L")
    rec = receiver_omega(sysf.F, pair, sysf.field)
    assert rec.H_rec.dims() == {1: 1}
    assert rank(rec.matrix(1)) == 1


def test_check_admissible_stable_pair():
    # (N-cells, stable cells) is admissible with n = 0
    pair = doubling_pair()
    w = check_admissible(pair.F, pair, pair.N, pair.w_stable)
    assert w.n == 0
    assert w.Z0.top_cells() <= w.U.top_cells()


def test_check_admissible_empty_core():
    # empty Z0 makes (A1) vacuous
    pair = doubling_pair()
    Z = cells_1d([(4, 6)])
    w = check_admissible(pair.F, pair, Z, empty_set(1))
    assert not w.Z0.top_cells()


def test_check_admissible_failure():
    pair = doubling_pair()
    # an exit cell never reaches the stable set
    Z0 = cells_1d([(6, 7)])
    with pytest.raises(NotAdmissibleWithinBounds):
        check_admissible(pair.F, pair, pair.N, Z0, n_max=3)


def test_receiver_Omega_reduces_to_omega():
    # Z = N, Z0 = stable cells, n = 0: the two receivers coincide
    sysf, pair = fixture_pair("ar1d.json", "N1", "N2")
    rec = receiver_omega(sysf.F, pair, QQ)
    Z = pair.N
    Z0 = pair.w_stable
    w = AdmissibleWitness(Z, Z0, 0, None, Z)
    data = receiver_omega_map(sysf.F, pair, w, QQ, rec=rec)
    assert data.H_Z.dims() == rec.H_rec.dims()
    for q in rec.omega:
        assert data.matrix(q) == rec.matrix(q)


def test_receiver_Omega_zero_class():
    sysf, pair = fixture_pair("ar1d.json", "N1", "N2")
    Z = pair.N
    w = AdmissibleWitness(Z, pair.w_stable, 0, None, Z)
    data = receiver_omega_map(sysf.F, pair, w, QQ)
    assert all(v == 0 for v in data.apply(0, {}).values())


def test_receiver_Omega_single_block_hits_generator():
    # one component of F, relative to its boundary, receives as a
    # generator of CH_0 of the attracting pair
    sysf = fixture_system("ar1d.json")
    pairR = FiltrationPair(sysf.F, sysf.region("N0"), sysf.region("N1"))
    pairA = FiltrationPair(sysf.F, sysf.region("N1"), sysf.region("N2"))
    S = invariant_part(sysf.F, sysf.region("N0"))
    Z = pairR.f_domain
    right = CubicalSet(1, {q for q in Z.top_cells() if q[0][0] > 0}
                       & S.top_cells())
    w = AdmissibleWitness(Z, right, 0, None, right)
    data = receiver_omega_map(sysf.F, pairA, w, QQ)
    vertex = ((5, 5),)
    got = data.apply(0, {vertex: 1})
    assert sorted(got.values()) in ([QQ.of(1)], [QQ.of(-1)])
    assert len(got) == 1


def test_Omega_independence_across_pairs():
    sysf = fixture_system("ar1d.json")
    pairA = FiltrationPair(sysf.F, sysf.region("N0"), sysf.region("N1"))
    pairB = FiltrationPair(sysf.F, sysf.region("N0_alt"),
                           sysf.region("N1_alt"))
    se = standard_shift_equivalence(sysf.F, pairA, pairB, QQ, k=1)
    # both pairs cut out the same N minus L, so they share W^s cells
    assert pairA.w_stable == pairB.w_stable
    Z = sysf.region("N0_alt")
    Z0 = pairA.w_stable
    ok, report = Omega_independence_check(sysf.F, pairA, pairB, Z, Z0,
                                          QQ, se)
    assert ok, report


def test_Omega_restriction():
    sysf = fixture_system("ar1d.json")
    pairA = FiltrationPair(sysf.F, sysf.region("N1"), sysf.region("N2"))
    pairR = FiltrationPair(sysf.F, sysf.region("N0"), sysf.region("N1"))
    S = invariant_part(sysf.F, sysf.region("N0"))
    Z = pairR.f_domain
    Z0 = CubicalSet(1, Z.top_cells() & S.top_cells())
    dataZ = receiver_omega_map(sysf.F, pairA,
                               AdmissibleWitness(Z, Z0, 0, None, Z), QQ)
    right = CubicalSet(1, {q for q in Z0.top_cells() if q[0][0] > 0})
    dataZp = receiver_omega_map(
        sysf.F, pairA, AdmissibleWitness(right, right, 0, None, right), QQ)
    ok, report = Omega_restriction_check(sysf.F, pairA, dataZ, dataZp, QQ)
    assert ok, report
