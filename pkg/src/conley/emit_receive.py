"""Emitting and receiving homology classes across a filtration pair.

The emitter turns an index class of a repelling region into an
absolute class of F = W^u_loc ∩ L, the set through which everything
leaves.  The receiver takes a relative class of an admissible pair
(Z, Z0) around the stable set and projects it, after enough forward
steps, back onto the index of the receiving region.  Composed with the
localization map these give the factored connection homomorphism.
"""

from .errors import (
    AlgebraicInverseFailure, DecompositionFailure, NotAdmissibleWithinBounds,
    NotEquivariant, OutOfDomain, SelectorLeak,
)
from .cubical_complex import (
    CubicalSet, closure, empty_set, neighborhood, relative_complex,
)
from .combinatorial_dynamics import chain_selector, image_n
from .conley_index import conley_index
from .eventual_algebra import EndoSpace, algebraic_part
from .homology_engine import (
    connecting_map, homology, induced_map, inclusion_chain_map,
)
from .scalar_linalg import Matrix, inverse, rank


class EmitterData:
    """The boundary-of-algebraic-representative map of a pair.

    d_F[q]: CH_q(N/L) -> H_{q-1}(F_domain), computed as the connecting
    map of (W^u_loc, F) after inverting the inclusion on algebraic
    parts.
    """

    __slots__ = ("pair", "field", "idx", "w_unstable", "f_domain",
                 "C_WF", "H_WF", "H_F", "phi_WF", "decomps_WF", "j",
                 "bdry", "d_F")

    def __init__(self, pair, field, idx, w_unstable, f_domain, C_WF, H_WF,
                 H_F, phi_WF, decomps_WF, j, bdry, d_F):
        self.pair = pair
        self.field = field
        self.idx = idx
        self.w_unstable = w_unstable
        self.f_domain = f_domain
        self.C_WF = C_WF
        self.H_WF = H_WF
        self.H_F = H_F
        self.phi_WF = phi_WF
        self.decomps_WF = decomps_WF
        self.j = j
        self.bdry = bdry
        self.d_F = d_F

    def matrix(self, q):
        """d_F in degree q; zero when CH_q or H_{q-1}(F) is trivial."""
        m = self.d_F.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.field, self.H_F.dim(q - 1),
                           self.idx.ch_dim(q))


def emitter(F, pair, field, idx=None):
    """EmitterData of a validated pair."""
    if idx is None:
        idx = conley_index(F, pair, field)
    wu = pair.w_unstable
    fdom = pair.f_domain
    Xw = closure(wu)
    Aw = closure(fdom)
    C_WF = relative_complex(Xw, Aw, field)
    H_WF = homology(C_WF)
    # endomorphism of (W^u, F); carriers of W^u cells stay in W^u
    # because W^u is the image fixpoint inside N
    phi_mats = chain_selector(F, Xw, Aw, Xw, Aw, field, steps=1)
    phi_WF = induced_map(phi_mats, H_WF, H_WF, tag="unstable-endo")
    j = induced_map(inclusion_chain_map(C_WF, idx.complex), H_WF, idx.H,
                    tag="unstable-inclusion")
    H_WF_top, H_F, bdry = connecting_map(Xw, Aw, empty_set(pair.ambient),
                                         field, H_top=H_WF)
    assert H_WF_top is H_WF
    decomps = {}
    d_F = {}
    for q in sorted(set(H_WF.dims()) | set(idx.ch_dims())):
        dec = algebraic_part(EndoSpace(phi_WF.matrix(q)))
        decomps[q] = dec
        # the inclusion must carry the algebraic part isomorphically
        # onto CH_q(N/L); failure means the grid is too coarse
        j_alg = idx.ch_project(q) * (j.matrix(q) * dec.algebraic_basis)
        if dec.alg_dim != idx.ch_dim(q) or (
                j_alg.cols and rank(j_alg) < j_alg.cols):
            raise AlgebraicInverseFailure(
                "inclusion not invertible on algebraic parts in degree %d"
                % q)
        if idx.ch_dim(q) == 0:
            continue
        d_F[q] = bdry.matrix(q, shift=-1) * (
            dec.algebraic_basis * inverse(j_alg))
    return EmitterData(pair, field, idx, wu, fdom, C_WF, H_WF, H_F,
                       phi_WF, decomps, j, bdry, d_F)


def emitter_naturality_check(F, pairA, pairB, field,
                             emitA=None, emitB=None):
    """Inclusion naturality of the emitter for nested pairs.

    For (N, L) of pairA contained in (N', L') of pairB the square
    i_* . d_F = d_F' . r_* must commute on CH, where r_* and i_* are
    inclusion-induced.  Returns (ok, report).
    """
    assert pairA.N <= pairB.N and pairA.L <= pairB.L, "pairs not nested"
    emitA = emitA or emitter(F, pairA, field)
    emitB = emitB or emitter(F, pairB, field)
    idxA, idxB = emitA.idx, emitB.idx
    r = induced_map(inclusion_chain_map(idxA.complex, idxB.complex),
                    idxA.H, idxB.H, tag="pair-inclusion")
    i = induced_map(inclusion_chain_map(emitA.H_F.complex,
                                        emitB.H_F.complex),
                    emitA.H_F, emitB.H_F, tag="domain-inclusion")
    for q in sorted(set(idxA.ch_dims()) | set(idxB.ch_dims())):
        # inclusion is equivariant on homology, hence maps CH into CH
        if r.matrix(q) * idxA.phi.matrix(q) != \
                idxB.phi.matrix(q) * r.matrix(q):
            raise NotEquivariant(
                "pair inclusion not equivariant in degree %d" % q)
        r_ch = idxB.ch_project(q) * (r.matrix(q) * idxA.ch_basis(q))
        lhs = i.matrix(q - 1) * emitA.matrix(q)
        rhs = emitB.matrix(q) * r_ch
        if lhs != rhs:
            return False, "naturality square fails in degree %d" % q
    return True, "commutes"


class ReceiverData:
    """The projection of H(N, N minus the stable part) onto the index.

    omega[q]: H_q(N, complement(W^s) in N joined with L) -> CH_q(N/L) in
    CH coordinates, the inverse of the inclusion on algebraic parts
    composed with the canonical projection.
    """

    __slots__ = ("pair", "field", "idx", "stable", "B", "C_rec", "H_rec",
                 "phi_rec", "i", "decomps_rec", "omega")

    def __init__(self, pair, field, idx, stable, B, C_rec, H_rec, phi_rec,
                 i, decomps_rec, omega):
        self.pair = pair
        self.field = field
        self.idx = idx
        self.stable = stable
        self.B = B
        self.C_rec = C_rec
        self.H_rec = H_rec
        self.phi_rec = phi_rec
        self.i = i
        self.decomps_rec = decomps_rec
        self.omega = omega

    def matrix(self, q):
        m = self.omega.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.field, self.idx.ch_dim(q),
                           self.H_rec.dim(q))


def receiver_omega(F, pair, field, idx=None):
    """ReceiverData of a validated pair."""
    if idx is None:
        idx = conley_index(F, pair, field)
    ws = pair.w_stable
    comp_cells = (pair.N.top_cells() - pair.L.top_cells()) - ws.top_cells()
    B = closure(CubicalSet(pair.ambient, comp_cells)) | closure(pair.L)
    B = CubicalSet(pair.ambient, B.cubes, closed=True)
    XN = closure(pair.N)
    C_rec = relative_complex(XN, B, field)
    H_rec = homology(C_rec)
    phi_mats = chain_selector(F, XN, B, XN, B, field, steps=1)
    phi_rec = induced_map(phi_mats, H_rec, H_rec, tag="receiver-endo")
    i = induced_map(inclusion_chain_map(idx.complex, C_rec), idx.H, H_rec,
                    tag="receiver-inclusion")
    decomps = {}
    omega = {}
    for q in sorted(set(H_rec.dims()) | set(idx.ch_dims())):
        dec = algebraic_part(EndoSpace(phi_rec.matrix(q)))
        decomps[q] = dec
        # the inclusion must identify CH with the algebraic part of the
        # receiver homology
        i_alg = dec.omega * (i.matrix(q) * idx.ch_basis(q))
        if dec.alg_dim != idx.ch_dim(q) or (
                i_alg.cols and rank(i_alg) < i_alg.cols):
            raise DecompositionFailure(
                "inclusion does not split off CH in degree %d" % q)
        if idx.ch_dim(q) == 0:
            continue
        om = inverse(i_alg) * dec.omega
        assert om * (i.matrix(q) * idx.ch_basis(q)) == \
            Matrix.identity(field, idx.ch_dim(q))
        if om * phi_rec.matrix(q) != idx.phi_ch(q) * om:
            raise DecompositionFailure(
                "projection not equivariant in degree %d" % q)
        omega[q] = om
    return ReceiverData(pair, field, idx, ws, B, C_rec, H_rec, phi_rec, i,
                        decomps, omega)


class AdmissibleWitness:
    """An admissible pair (Z, Z0) with its time n and neighborhood U."""

    __slots__ = ("Z", "Z0", "n", "r", "U")

    def __init__(self, Z, Z0, n, r, U):
        self.Z = Z
        self.Z0 = Z0
        self.n = n
        self.r = r
        self.U = U

    def __repr__(self):
        # r is None when U was taken to be all of Z rather than grown
        return "AdmissibleWitness(n=%d, r=%s, |Z|=%d, |Z0|=%d, |U|=%d)" % (
            self.n, self.r, len(self.Z.top_cells()),
            len(self.Z0.top_cells()), len(self.U.top_cells()))


def _forward(F, X, n):
    """n-step image, or None when the orbit leaves the map domain."""
    try:
        return image_n(F, X, n)
    except OutOfDomain:
        return None


def _a1_holds(F, pair, Z0, n):
    img = _forward(F, Z0, n)
    return img is not None and \
        img.top_cells() <= pair.w_stable.top_cells()


def _a2_holds(F, pair, U, Z0, n):
    ws = pair.w_stable.top_cells()
    n_cells = pair.N.top_cells()
    for q in sorted(U.top_cells() - Z0.top_cells()):
        img = _forward(F, CubicalSet(U.ambient, {q}), n)
        if img is None:
            return False
        cells = img.top_cells()
        if not cells <= n_cells:
            return False
        if cells & ws:
            return False
    return True


def check_admissible(F, pair, Z, Z0, n_max=16, r_max=8):
    """Smallest n and largest r making (Z, Z0) admissible via
    U = neighborhood(Z, Z0, r); NotAdmissibleWithinBounds otherwise."""
    assert Z0.top_cells() <= Z.top_cells(), "Z0 not inside Z"
    best = None
    for n in range(n_max + 1):
        if not _a1_holds(F, pair, Z0, n):
            if best is None:
                best = "condition (A1) fails at n=%d" % n
            continue
        for r in range(r_max, 0, -1):
            U = CubicalSet(Z.ambient, neighborhood(Z, Z0, r).top_cells())
            if _a2_holds(F, pair, U, Z0, n):
                return AdmissibleWitness(Z, Z0, n, r, U)
        best = "condition (A2) fails for all r at n=%d" % n
    raise NotAdmissibleWithinBounds(
        "%s (n_max=%d, r_max=%d)" % (best or "no candidate", n_max, r_max))


class OmegaData:
    """The receiver map of an admissible witness.

    mats[q]: H_q(Z, Z minus Z0) -> CH_q(N/L) in CH coordinates, the
    composition of excision, the n-step selector into the receiver
    complex, the canonical projection and the n-fold inverse index
    automorphism.
    """

    __slots__ = ("witness", "rec", "idx", "C_Z", "H_Z", "C_U", "H_U",
                 "sel", "mats")

    def __init__(self, witness, rec, idx, C_Z, H_Z, C_U, H_U, sel, mats):
        self.witness = witness
        self.rec = rec
        self.idx = idx
        self.C_Z = C_Z
        self.H_Z = H_Z
        self.C_U = C_U
        self.H_U = H_U
        self.sel = sel
        self.mats = mats

    def matrix(self, q):
        m = self.mats.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.rec.field, self.idx.ch_dim(q),
                           self.H_Z.dim(q))

    def apply(self, q, chain):
        """CH coordinates of a relative cycle {cube: scalar} of (Z, Z\\Z0)."""
        vec = self.C_Z.chain_vector(q, chain)
        cls = self.H_Z.project(q, vec)
        assert cls is not None, "chain is not a relative cycle"
        return self.matrix(q).apply(cls)


def receiver_omega_map(F, pair, witness, field, rec=None, idx=None):
    """OmegaData for an admissible witness of a validated pair."""
    if rec is None:
        rec = receiver_omega(F, pair, field, idx=idx)
    idx = rec.idx
    amb = pair.ambient
    Z, Z0, U = witness.Z, witness.Z0, witness.U
    ZmZ0 = closure(CubicalSet(amb, Z.top_cells() - Z0.top_cells()))
    UmZ0 = closure(CubicalSet(amb, U.top_cells() - Z0.top_cells()))
    XZ, XU = closure(Z), closure(U)
    C_Z = relative_complex(XZ, ZmZ0, field)
    C_U = relative_complex(XU, UmZ0, field)
    H_Z = homology(C_Z)
    H_U = homology(C_U)
    # excision: quotienting further is always a chain map; it must be an
    # isomorphism, otherwise U is too small a neighborhood at this grid
    exc = induced_map(inclusion_chain_map(C_U, C_Z), H_U, H_Z,
                      tag="excision")
    for q in set(H_U.dims()) | set(H_Z.dims()):
        if H_U.dim(q) != H_Z.dim(q) or (
                H_Z.dim(q) and rank(exc.matrix(q)) < H_Z.dim(q)):
            raise NotAdmissibleWithinBounds(
                "excision fails for U at r=%s in degree %d"
                % (witness.r, q))
    sel_mats = chain_selector(F, XU, UmZ0, closure(pair.N), rec.B, field,
                              steps=witness.n, leak_error=SelectorLeak)
    sel = induced_map(sel_mats, H_U, rec.H_rec, tag="witness-push")
    mats = {}
    for q in sorted(idx.ch_dims()):
        if H_Z.dim(q) == 0:
            continue
        phi_inv_n = inverse(idx.phi_ch(q)).power(witness.n)
        mats[q] = phi_inv_n * (rec.matrix(q) * (
            sel.matrix(q) * inverse(exc.matrix(q))))
    return OmegaData(witness, rec, idx, C_Z, H_Z, C_U, H_U, sel, mats)


def receiver_Omega(F, pair, witness, q, chain, field, data=None):
    """CH_q coordinates received from a relative cycle of (Z, Z\\Z0)."""
    if data is None:
        data = receiver_omega_map(F, pair, witness, field)
    return data.apply(q, chain)


def Omega_independence_check(F, pairA, pairB, Z, Z0, field, se,
                             n_max=16, r_max=8):
    """The received class does not depend on the filtration pair.

    For a standard shift equivalence with forward power k the identity
    Omega_B = phi_B^(-k) . r_* . Omega_A must hold on all of
    H(Z, Z\\Z0).  Returns (ok, report).
    """
    from .conley_index import change_coordinates
    idxA = conley_index(F, pairA, field)
    idxB = conley_index(F, pairB, field)
    wA = check_admissible(F, pairA, Z, Z0, n_max=n_max, r_max=r_max)
    wB = check_admissible(F, pairB, Z, Z0, n_max=n_max, r_max=r_max)
    # shared n and U keep the two receivers comparable classwise
    n = max(wA.n, wB.n)
    r = min(wA.r, wB.r)
    wA = AdmissibleWitness(Z, Z0, n, r,
                           CubicalSet(Z.ambient,
                                      neighborhood(Z, Z0, r).top_cells()))
    assert _a1_holds(F, pairA, Z0, n) and _a2_holds(F, pairA, wA.U, Z0, n)
    assert _a1_holds(F, pairB, Z0, n) and _a2_holds(F, pairB, wA.U, Z0, n)
    omA = receiver_omega_map(F, pairA, wA, field, idx=idxA)
    omB = receiver_omega_map(F, pairB, wA, field, idx=idxB)
    isos = change_coordinates(idxA, idxB, se)
    for q in sorted(set(idxA.ch_dims()) | set(idxB.ch_dims())):
        if omA.H_Z.dim(q) == 0:
            continue
        phi_inv_k = inverse(idxB.phi_ch(q)).power(se.k)
        lhs = omB.matrix(q)
        rhs = phi_inv_k * (isos[q] * omA.matrix(q))
        if lhs != rhs:
            return False, "independence fails in degree %d" % q
    return True, "independent"


def Omega_restriction_check(F, pair, dataZ, dataZp, field):
    """Restricting the admissible pair commutes with receiving.

    dataZp comes from (Z', Z' cap Z0) with Z' inside Z; the identity
    Omega' = Omega . j_* must hold, j_* induced by inclusion.  Returns
    (ok, report).
    """
    assert dataZp.witness.Z.top_cells() <= dataZ.witness.Z.top_cells()
    j = induced_map(inclusion_chain_map(dataZp.C_Z, dataZ.C_Z),
                    dataZp.H_Z, dataZ.H_Z, tag="witness-inclusion")
    for q in sorted(dataZp.H_Z.dims()):
        lhs = dataZp.matrix(q)
        rhs = dataZ.matrix(q) * j.matrix(q)
        if lhs != rhs:
            return False, "restriction square fails in degree %d" % q
    return True, "commutes"
