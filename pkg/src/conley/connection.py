"""The connection homomorphism of an attractor-repeller decomposition.

Given a filtration triple N2 <= N1 <= N0 the connection homomorphism
Gamma: CH_q(R) -> CH_{q-1}(A) is computed two ways: as the connecting
map of the index-level exact sequence of the triple, and as the
composition Omega . tau . d_F of the emitter of the repelling pair,
the localization at the invariant set and the receiver of the
attracting pair.  The two must agree exactly in the default (N0, N1) /
(N1, N2) coordinates, which is the main cross-validation of the whole
pipeline.
"""

from .errors import (
    ComponentsNotSeparable, CrossValidationFailure, ExactnessViolation,
    NotAdmissibleWithinBounds, NotEquivariant,
)
from .cubical_complex import (
    CubicalSet, closure, cubes_touch, neighborhood, relative_complex,
)
from .combinatorial_dynamics import invariant_part
from .conley_index import conley_index
from .emit_receive import (
    AdmissibleWitness, _a1_holds, _a2_holds, check_admissible, emitter,
    receiver_omega_map,
)
from .homology_engine import (
    check_exact_at, homology, induced_map, inclusion_chain_map,
    triple_sequence,
)
from .scalar_linalg import Matrix, inverse, rank


class ARDecomposition:
    """All data of one attractor-repeller connection computation."""

    __slots__ = ("triple", "field", "idx_S", "idx_R", "idx_A", "S",
                 "seq", "i_ch", "j_ch", "gamma_les", "emit", "C_FS",
                 "H_FS", "tau", "witness", "omega", "gamma_fact")

    def __init__(self, triple, field, idx_S, idx_R, idx_A, S, seq, i_ch,
                 j_ch, gamma_les, emit, C_FS, H_FS, tau, witness, omega,
                 gamma_fact):
        self.triple = triple
        self.field = field
        self.idx_S = idx_S
        self.idx_R = idx_R
        self.idx_A = idx_A
        self.S = S
        self.seq = seq
        self.i_ch = i_ch
        self.j_ch = j_ch
        self.gamma_les = gamma_les
        self.emit = emit
        self.C_FS = C_FS
        self.H_FS = H_FS
        self.tau = tau
        self.witness = witness
        self.omega = omega
        self.gamma_fact = gamma_fact

    def gamma_les_matrix(self, q):
        m = self.gamma_les.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.field, self.idx_A.ch_dim(q - 1),
                           self.idx_R.ch_dim(q))

    def gamma_fact_matrix(self, q):
        m = self.gamma_fact.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.field, self.idx_A.ch_dim(q - 1),
                           self.idx_R.ch_dim(q))

    def degrees(self):
        return sorted(set(self.idx_S.ch_dims()) | set(self.idx_R.ch_dims())
                      | set(self.idx_A.ch_dims()))


def ar_exact_sequence(triple, field, idx_S=None, idx_R=None, idx_A=None):
    """Index-level exact sequence of a triple.

    Returns (seq, i_ch, j_ch, gamma_les): the full-homology sequence and
    the three per-degree matrices restricted to the index summands,
    ... -> CH_q(A) -> CH_q(S) -> CH_q(R) -> CH_{q-1}(A) -> ...
    Exactness at every index node is verified.
    """
    F = triple.F
    idx_S = idx_S or conley_index(F, triple.pair_S, field)
    idx_R = idx_R or conley_index(F, triple.pair_R, field)
    idx_A = idx_A or conley_index(F, triple.pair_A, field)
    seq = triple_sequence(closure(triple.N0), closure(triple.N1),
                          closure(triple.N2), field)
    # seq homology bases coincide with the indices' own: both are built
    # deterministically from the same relative complexes
    assert seq.H10.dims() == idx_A.H.dims()
    assert seq.H20.dims() == idx_S.H.dims()
    assert seq.H01.dims() == idx_R.H.dims()
    qs = sorted(set(seq.H10.dims()) | set(seq.H20.dims())
                | set(seq.H01.dims()) | {0})
    for q in qs:
        if seq.i.matrix(q) * idx_A.phi.matrix(q) != \
                idx_S.phi.matrix(q) * seq.i.matrix(q):
            raise NotEquivariant("A->S map not equivariant in degree %d" % q)
        if seq.j.matrix(q) * idx_S.phi.matrix(q) != \
                idx_R.phi.matrix(q) * seq.j.matrix(q):
            raise NotEquivariant("S->R map not equivariant in degree %d" % q)
        if seq.d.matrix(q, shift=-1) * idx_R.phi.matrix(q) != \
                idx_A.phi.matrix(q - 1) * seq.d.matrix(q, shift=-1):
            raise NotEquivariant(
                "connecting map not equivariant in degree %d" % q)
    i_ch, j_ch, gamma_les = {}, {}, {}
    for q in qs:
        i_ch[q] = idx_S.ch_project(q) * (
            seq.i.matrix(q) * idx_A.ch_basis(q))
        j_ch[q] = idx_R.ch_project(q) * (
            seq.j.matrix(q) * idx_S.ch_basis(q))
        gamma_les[q] = idx_A.ch_project(q - 1) * (
            seq.d.matrix(q, shift=-1) * idx_R.ch_basis(q))
    for q in qs:
        g_up = gamma_les.get(q + 1,
                             Matrix.zero(field, idx_A.ch_dim(q), 0))
        if not check_exact_at(g_up, i_ch[q], idx_A.ch_dim(q)):
            raise ExactnessViolation("index sequence at CH_%d(A)" % q)
        if not check_exact_at(i_ch[q], j_ch[q], idx_S.ch_dim(q)):
            raise ExactnessViolation("index sequence at CH_%d(S)" % q)
        if not check_exact_at(j_ch[q], gamma_les[q], idx_R.ch_dim(q)):
            raise ExactnessViolation("index sequence at CH_%d(R)" % q)
    return seq, i_ch, j_ch, gamma_les


def tau(emit, S, field):
    """Localization at S: H_*(F) -> H_*(F, F minus S-cells).

    Returns (C_FS, H_FS, GradedMap); the target is trivial when no cell
    of F meets S.
    """
    fdom = emit.f_domain
    out_cells = fdom.top_cells() - S.top_cells()
    C_FS = relative_complex(closure(fdom),
                            closure(CubicalSet(fdom.ambient, out_cells)),
                            field)
    H_FS = homology(C_FS)
    t = induced_map(inclusion_chain_map(emit.H_F.complex, C_FS),
                    emit.H_F, H_FS, tag="localize")
    return C_FS, H_FS, t


def _components(cells):
    """Connected components of a set of top cells (closure adjacency)."""
    left = set(cells)
    comps = []
    while left:
        seed = min(left)
        comp = {seed}
        frontier = [seed]
        while frontier:
            p = frontier.pop()
            for q in sorted(left - comp):
                if cubes_touch(p, q):
                    comp.add(q)
                    frontier.append(q)
        comps.append(frozenset(comp))
        left -= comp
    return comps


def _witness_for(F, pair_A, Z, Z0, n_max, r_max):
    # the n = 0, U = Z witness is attempted first: it makes the two
    # Gamma routes agree on the nose; general search is the fallback
    if _a1_holds(F, pair_A, Z0, 0) and _a2_holds(F, pair_A, Z, Z0, 0):
        return AdmissibleWitness(Z, Z0, 0, None, Z)
    return check_admissible(F, pair_A, Z, Z0, n_max=n_max, r_max=r_max)


def ar_decomposition(triple, field, n_max=16, r_max=8):
    """Full connection computation for a filtration triple."""
    F = triple.F
    idx_S = conley_index(F, triple.pair_S, field)
    idx_R = conley_index(F, triple.pair_R, field)
    idx_A = conley_index(F, triple.pair_A, field)
    seq, i_ch, j_ch, gamma_les = ar_exact_sequence(
        triple, field, idx_S=idx_S, idx_R=idx_R, idx_A=idx_A)
    S = invariant_part(F, CubicalSet(
        triple.ambient, triple.N0.top_cells() - triple.N2.top_cells()))
    emit = emitter(F, triple.pair_R, field, idx=idx_R)
    C_FS, H_FS, t = tau(emit, S, field)
    Z = emit.f_domain
    Z0 = CubicalSet(triple.ambient, Z.top_cells() & S.top_cells())
    witness = _witness_for(F, triple.pair_A, Z, Z0, n_max, r_max)
    omega = receiver_omega_map(F, triple.pair_A, witness, field, idx=idx_A)
    # Omega's domain complex equals tau's target by construction
    assert omega.H_Z.dims() == H_FS.dims()
    gamma_fact = {}
    for q in sorted(idx_R.ch_dims()):
        gamma_fact[q] = omega.matrix(q - 1) * (
            t.matrix(q - 1) * emit.matrix(q))
    return ARDecomposition(triple, field, idx_S, idx_R, idx_A, S, seq,
                           i_ch, j_ch, gamma_les, emit, C_FS, H_FS, t,
                           witness, omega, gamma_fact)


def gamma_cross_validate(decomp):
    """Both Gamma routes agree.

    In the default coordinates with the n = 0 whole-domain witness the
    matrices must be equal; in general ranks must match degreewise.
    Returns a per-degree report, raises CrossValidationFailure.
    """
    report = {}
    exact = decomp.witness.n == 0
    for q in decomp.degrees():
        les = decomp.gamma_les_matrix(q)
        fact = decomp.gamma_fact_matrix(q)
        if rank(les) != rank(fact):
            raise CrossValidationFailure(
                "Gamma ranks differ in degree %d: %d vs %d"
                % (q, rank(les), rank(fact)))
        if exact and les != fact:
            raise CrossValidationFailure(
                "Gamma matrices differ in degree %d: %r vs %r"
                % (q, les.to_rows(), fact.to_rows()))
        report[q] = {"rank": rank(les), "les": les.to_rows(),
                     "fact": fact.to_rows(), "exact": exact}
    return report


def gamma_conjugated_check(decompA, decompB, iso_R, iso_A, power_window=8):
    """The two Gammas of one system in different coordinates agree.

    iso_R, iso_A: per-degree index isomorphisms from decompA's pairs to
    decompB's (from change_coordinates).  The identity holds up to a
    power of the index automorphism (the time shift hidden in the
    shift equivalences); the power is searched in a symmetric window
    and reported.  Raises CrossValidationFailure when no power works.
    """
    found = {}
    for q in sorted(set(decompA.gamma_les) | set(decompB.gamma_les)):
        lhs = decompB.gamma_les_matrix(q)
        if lhs.rows == 0 or lhs.cols == 0:
            continue
        base = iso_A.get(q - 1) * (
            decompA.gamma_les_matrix(q) * inverse(iso_R.get(q)))
        phi = decompB.idx_A.phi_ch(q - 1)
        for s in range(-power_window, power_window + 1):
            shifted = (phi.power(s) if s >= 0
                       else inverse(phi).power(-s)) * base
            if shifted == lhs:
                found[q] = s
                break
        else:
            raise CrossValidationFailure(
                "no time shift matches Gamma in degree %d" % q)
    return found


def gamma_sum_decomposition(decomp, r_max=8):
    """Gamma as a sum over components of the connecting set F cap S.

    Returns a list of (component cells, per-degree matrices); the sum
    of the pieces must equal the factored Gamma.  Components need
    disjoint closed neighborhoods, ComponentsNotSeparable otherwise.
    """
    F = decomp.triple.F
    field = decomp.field
    pair_A = decomp.triple.pair_A
    Z = decomp.emit.f_domain
    amb = Z.ambient
    comps = _components(decomp.witness.Z0.top_cells())
    n = decomp.witness.n
    # per component the smallest collar whose localized pair passes
    # excision is taken: r = None means U is the component itself, the
    # grown neighborhoods repair components that touch the rest of Z
    if decomp.witness.r is None:
        radii = [None] + list(range(1, r_max + 1))
    else:
        radii = [decomp.witness.r]
    pieces = []
    for comp in comps:
        Z0_i = CubicalSet(amb, comp)
        assert _a1_holds(F, pair_A, Z0_i, n)
        w_i = om_i = None
        for r_i in radii:
            if r_i is None:
                U_i = Z0_i
            else:
                U_i = CubicalSet(amb, neighborhood(Z, Z0_i, r_i).top_cells())
            if not _a2_holds(F, pair_A, U_i, Z0_i, n):
                continue
            cand = AdmissibleWitness(Z, Z0_i, n, r_i, U_i)
            try:
                om_i = receiver_omega_map(F, pair_A, cand, field,
                                          idx=decomp.idx_A)
            except NotAdmissibleWithinBounds:
                continue
            w_i = cand
            break
        if w_i is None:
            raise ComponentsNotSeparable(
                "no admissible neighborhood for component at %r"
                % (min(comp),))
        pieces.append((Z0_i, w_i, om_i))
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            ca = closure(CubicalSet(amb, pieces[a][1].U.top_cells()))
            cb = closure(CubicalSet(amb, pieces[b][1].U.top_cells()))
            if ca.cubes & cb.cubes:
                raise ComponentsNotSeparable(
                    "neighborhoods of components %d and %d overlap"
                    % (a, b))
    out = []
    total = {}
    for Z0_i, w_i, om_i in pieces:
        out_cells = Z.top_cells() - Z0_i.top_cells()
        C_i = relative_complex(closure(Z),
                               closure(CubicalSet(amb, out_cells)), field)
        H_i = homology(C_i)
        t_i = induced_map(inclusion_chain_map(decomp.emit.H_F.complex, C_i),
                          decomp.emit.H_F, H_i, tag="localize-component")
        mats = {}
        for q in sorted(decomp.idx_R.ch_dims()):
            m = om_i.matrix(q - 1) * (t_i.matrix(q - 1)
                                      * decomp.emit.matrix(q))
            mats[q] = m
            total[q] = total.get(q, Matrix.zero(field, m.rows, m.cols)) + m
        out.append((Z0_i, mats))
    for q, m in total.items():
        assert m == decomp.gamma_fact_matrix(q), \
            "component sum differs from Gamma in degree %d" % q
    return out


def morse_equation_check(decomp):
    """dim CH_q(A) + dim CH_q(R) = dim CH_q(S) + rk G_q + rk G_{q+1}."""
    report = {}
    for q in sorted(set(decomp.degrees()) | {0}):
        lhs = decomp.idx_A.ch_dim(q) + decomp.idx_R.ch_dim(q)
        rhs = decomp.idx_S.ch_dim(q) + \
            rank(decomp.gamma_les_matrix(q)) + \
            rank(decomp.gamma_les_matrix(q + 1))
        report[q] = {"lhs": lhs, "rhs": rhs, "ok": lhs == rhs}
    return report


def gamma_rank_bound(decomp):
    """rank Gamma_q is at most dim H_{q-1}(F, F minus S)."""
    report = {}
    for q in decomp.degrees():
        r = rank(decomp.gamma_les_matrix(q))
        bound = decomp.H_FS.dim(q - 1)
        report[q] = {"rank": r, "bound": bound, "ok": r <= bound}
    return report
