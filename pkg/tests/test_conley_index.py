from conley.combinatorial_dynamics import (
    FiltrationPair, MultivaluedMap, standard_shift_equivalence,
)
from conley.conley_index import change_coordinates, conley_index
from conley.cubical_complex import empty_set
from conley.scalar_linalg import QQ, Field, Matrix, rank

from dynamics_util import cells_1d, doubling_pair, doubling_pair_wide


def test_attracting_point_index():
    # trapping box, f = id: CH_0 = K with phi = Id, nothing else
    I = MultivaluedMap(1, [(-4, 4)], matrix=[[1]], offset=[0])
    pair = FiltrationPair(I, cells_1d([(-2, 2)]), empty_set(1))
    idx = conley_index(I, pair, QQ)
    assert idx.ch_dims() == {0: 1}
    assert idx.phi_ch(0) == Matrix.identity(QQ, 1)


def test_repeller_index_doubling():
    pair = doubling_pair()
    idx = conley_index(pair.F, pair, QQ)
    assert idx.ch_dims() == {1: 1}
    assert idx.phi_ch(1) == Matrix.identity(QQ, 1)


def test_repeller_index_orientation_reversing():
    # f(x) = -2x: the degree-1 index map is -Id
    F = MultivaluedMap(1, [(-16, 16)], matrix=[[-2]], offset=[0])
    pair = FiltrationPair(F, cells_1d([(-8, 8)]),
                          cells_1d([(-8, -2), (2, 8)]))
    idx = conley_index(F, pair, QQ)
    assert idx.ch_dims() == {1: 1}
    assert idx.phi_ch(1) == Matrix.from_rows(QQ, [[-1]])


def test_index_field_independent():
    pair = doubling_pair()
    for field in [QQ, Field(7)]:
        idx = conley_index(pair.F, pair, field)
        assert idx.ch_dims() == {1: 1}


def test_change_coordinates():
    pairA = doubling_pair()
    pairB = doubling_pair_wide()
    idxA = conley_index(pairA.F, pairA, QQ)
    idxB = conley_index(pairA.F, pairB, QQ)
    assert idxA.ch_dims() == idxB.ch_dims()
    se = standard_shift_equivalence(pairA.F, pairA, pairB, QQ, k=1)
    isos = change_coordinates(idxA, idxB, se)
    assert rank(isos[1]) == 1
