import pytest

from conley.combinatorial_dynamics import (
    MultivaluedMap, chain_selector, image, image_n, immediate_exit_set,
    invariant_part, local_stable, local_unstable, quotient_chain_map,
    standard_shift_equivalence, transition_digraph,
    validate_filtration_pair,
)
from conley.cubical_complex import (
    CubicalSet, closure, cube, empty_set, from_blocks, relative_complex,
)
from conley.errors import OutOfDomain, TightnessFailure
from conley.homology_engine import homology, induced_map
from conley.scalar_linalg import QQ, Matrix

from dynamics_util import (
    cells_1d, doubling_map, doubling_pair, doubling_pair_wide,
)


def test_affine_blocks():
    F = doubling_map()
    assert F.block(cube([(0, 1)])) == {cube([(0, 1)]), cube([(1, 2)])}
    assert F.block(cube([(-1, 0)])) == {cube([(-2, -1)]), cube([(-1, 0)])}
    with pytest.raises(OutOfDomain):
        F.block(cube([(40, 41)]))


def test_identity_map_blocks():
    F = MultivaluedMap(1, [(-4, 4)], matrix=[[1]], offset=[0])
    q = cube([(2, 3)])
    assert F.block(q) == {q}


def test_table_map_and_carriers():
    table = {
        cube([(-1, 0)]): [cube([(-2, -1)]), cube([(-1, 0)])],
        cube([(0, 1)]): [cube([(0, 1)]), cube([(1, 2)])],
    }
    F = MultivaluedMap(1, [(-1, 1)], table=table)
    # shared vertex: intersection of the two closed carrier boxes
    assert F.carrier_box(((0, 0),)) == ((0, 0),)
    assert F.carrier_box(((0, 1),)) == ((0, 2),)
    with pytest.raises(AssertionError):
        # non-rectangular block rejected
        MultivaluedMap(1, [(0, 3)], table={
            cube([(0, 1)]): [cube([(0, 1)]), cube([(2, 3)])]})


def test_image_and_image_n():
    F = doubling_map()
    X = cells_1d([(0, 1)])
    assert image(F, X) == cells_1d([(0, 2)])
    assert image_n(F, X, 2) == cells_1d([(0, 4)])
    assert image(F, empty_set(1)).is_empty()


def test_invariant_part_doubling():
    F = doubling_map()
    region = cells_1d([(-2, 2)])
    inv = invariant_part(F, region)
    assert inv.top_cells() == cells_1d([(-1, 1)]).top_cells()
    assert invariant_part(F, empty_set(1)).is_empty()
    # fixed point property: every cell keeps an in- and out-neighbour
    graph = transition_digraph(F, inv.top_cells())
    assert all(graph[q] for q in graph)


def test_immediate_exit_set():
    F = doubling_map()
    N = cells_1d([(-1, 1)])
    assert immediate_exit_set(F, N).top_cells() == N.top_cells()
    # trapping region for the identity has empty exit set
    I = MultivaluedMap(1, [(-4, 4)], matrix=[[1]], offset=[0])
    assert immediate_exit_set(I, cells_1d([(-2, 2)])).is_empty()


def test_validate_filtration_pair():
    F = doubling_map()
    N = cells_1d([(-8, 8)])
    L = cells_1d([(-8, -2), (2, 8)])
    ok, report = validate_filtration_pair(F, N, L)
    assert ok, report
    # trapping region with L empty is a valid pair
    I = MultivaluedMap(1, [(-4, 4)], matrix=[[1]], offset=[0])
    ok, _ = validate_filtration_pair(I, cells_1d([(-2, 2)]), empty_set(1))
    assert ok
    # exit set not inside L: condition (ii) with a witness
    ok, report = validate_filtration_pair(F, N, cells_1d([(2, 8)]))
    assert not ok and "(ii)" in report


def test_validate_isolation_failure():
    # L so close that the invariant cells touch it
    F = doubling_map()
    N = cells_1d([(-4, 4)])
    L = cells_1d([(-4, -1), (1, 4)])
    ok, report = validate_filtration_pair(F, N, L)
    assert not ok and "(i)" in report


def test_local_unstable_doubling():
    pair = doubling_pair()
    wu, fdom = local_unstable(pair.F, pair.N, pair.L)
    # everything in N has a backward orbit: f expands onto N
    assert wu.top_cells() == pair.N.top_cells()
    assert fdom.top_cells() == pair.L.top_cells()


def test_local_stable_doubling():
    pair = doubling_pair()
    ws = local_stable(pair.F, pair.N, pair.L)
    assert ws.top_cells() == cells_1d([(-1, 1)]).top_cells()
    # L = N: nothing may stay
    assert local_stable(pair.F, pair.N, pair.N).is_empty()


def test_quotient_chain_map_identity():
    I = MultivaluedMap(1, [(-4, 4)], matrix=[[1]], offset=[0])
    N = cells_1d([(-2, 2)])
    mats = quotient_chain_map(I, N, empty_set(1), QQ)
    C = relative_complex(closure(N), empty_set(1), QQ)
    for q in C.generators:
        assert mats[q] == Matrix.identity(QQ, C.dim(q))


def test_quotient_chain_map_doubling():
    pair = doubling_pair()
    mats = quotient_chain_map(pair.F, pair.N, pair.L, QQ)
    X, A = closure(pair.N), closure(pair.L)
    C = relative_complex(X, A, QQ)
    H = homology(C)
    assert H.dims() == {1: 1}
    gm = induced_map(mats, H, H)  # validates the chain-map identity
    assert gm.matrix(1) == Matrix.identity(QQ, 1)


def test_quotient_chain_map_tightness():
    # a non-exit cube leaking outside N must be reported
    F = doubling_map()
    N = cells_1d([(-2, 2)])
    with pytest.raises(TightnessFailure):
        quotient_chain_map(F, N, empty_set(1), QQ)


def test_chain_selector_zero_steps_is_inclusion():
    pair = doubling_pair()
    X, A = closure(pair.N), closure(pair.L)
    mats = chain_selector(pair.F, X, A, X, A, QQ, steps=0)
    C = relative_complex(X, A, QQ)
    for q in C.generators:
        assert mats[q] == Matrix.identity(QQ, C.dim(q))


def test_standard_shift_equivalence_same_pair():
    pair = doubling_pair()
    se = standard_shift_equivalence(pair.F, pair, pair, QQ, k=0)
    assert se.m == 0
    assert se.rho.matrix(1) == Matrix.identity(QQ, 1)


def test_standard_shift_equivalence_widened():
    pairA = doubling_pair()
    pairB = doubling_pair_wide()
    se = standard_shift_equivalence(pairA.F, pairA, pairB, QQ, k=1)
    from conley.eventual_algebra import verify_shift_equivalence
    for q in [0, 1]:
        ok, report = verify_shift_equivalence(se.degree_se(q))
        assert ok, report
    # degree-1 index maps are conjugated by a nonzero scalar
    assert not se.rho.matrix(1).is_zero()
