"""Homology of chain complexes over a field, induced maps, connecting
homomorphisms and exact sequences of pairs and triples.

Homology bases are cycle representatives chosen by extending an echelon
basis of the boundaries, so bases and all matrices are deterministic.
"""

from .errors import (
    ExactnessViolation, InternalInconsistency, NotChainMap,
)
from .cubical_complex import chain_complex, relative_complex
from .scalar_linalg import Echelon, Matrix, kernel_basis, rank


class _DegreeHomology:
    """H_q data: representatives and a projection to class coordinates."""

    __slots__ = ("field", "chain_dim", "reps", "_ech", "_rep_cols")

    def __init__(self, field, chain_dim, boundary_cols, cycle_cols):
        self.field = field
        self.chain_dim = chain_dim
        # echelon of boundary columns, extended by cycles that add rank;
        # those cycles are the homology representatives
        self._ech = Echelon(Matrix(field, chain_dim, len(boundary_cols),
                                   boundary_cols))
        self._rep_cols = {}
        reps = []
        for col in cycle_cols:
            j = len(self._ech.pivot_src) + len(self._ech.kernel_combos)
            if self._ech.add(col):
                self._rep_cols[j] = len(reps)
                reps.append(col)
        self.reps = Matrix(field, chain_dim, len(reps), reps)

    @property
    def dim(self):
        return self.reps.cols

    def project(self, chain_vec):
        """Class coordinates of a cycle (sparse chain vector).

        Returns a sparse dict over representative indices, or None when
        the chain does not lie in the span of boundaries and cycles.
        """
        x = self._ech.solve(chain_vec)
        if x is None:
            return None
        return {self._rep_cols[j]: c for j, c in x.items()
                if j in self._rep_cols}


class GradedHomology:
    """Homology of a ChainComplexF in every degree."""

    __slots__ = ("complex", "field", "degrees")

    def __init__(self, C):
        self.complex = C
        self.field = C.field
        self.degrees = {}
        for q in sorted(C.generators):
            n = C.dim(q)
            dq = C.boundary.get(q, Matrix.zero(C.field, 0, n))
            cycles = kernel_basis(dq)
            dq1 = C.boundary.get(q + 1)
            bnd_cols = list(dq1.data) if dq1 is not None else []
            self.degrees[q] = _DegreeHomology(
                C.field, n, bnd_cols, list(cycles.data))

    def dim(self, q):
        h = self.degrees.get(q)
        return h.dim if h else 0

    def dims(self):
        return {q: h.dim for q, h in self.degrees.items() if h.dim}

    def rep(self, q, j):
        """j-th representative of H_q as a sparse chain vector."""
        return self.degrees[q].reps.column(j)

    def project(self, q, chain_vec):
        h = self.degrees.get(q)
        if h is None:
            return {} if not chain_vec else None
        return h.project(chain_vec)


def homology(C):
    return GradedHomology(C)


class GradedMap:
    """Per-degree matrices between two GradedHomology values."""

    __slots__ = ("src", "dst", "mats", "tag")

    def __init__(self, src, dst, mats, tag=""):
        self.src = src
        self.dst = dst
        self.mats = dict(mats)
        self.tag = tag

    def matrix(self, q, shift=0):
        """Matrix H_q(src) -> H_{q+shift}(dst); zero when absent."""
        m = self.mats.get(q)
        if m is not None:
            return m
        return Matrix.zero(self.src.field, self.dst.dim(q + shift),
                           self.src.dim(q))

    def degrees(self):
        return sorted(set(self.src.dims()) | set(self.mats))

    def rank(self, q):
        return rank(self.mats[q]) if q in self.mats else 0

    def compose(self, other):
        """self after other (other first)."""
        assert other.dst is self.src or other.dst.dims() == self.src.dims()
        mats = {}
        for q in other.src.dims():
            mats[q] = self.matrix(q) * other.matrix(q)
        return GradedMap(other.src, self.dst, mats,
                         tag="%s.%s" % (self.tag, other.tag))


def induced_map(chain_maps, H_src, H_dst, tag="chain-map-induced",
                degree_shift=0, validate=True):
    """GradedMap from per-degree chain matrices F_q: C_q(src) -> C_{q+s}(dst).

    Validates the chain-map identity d' F = F d (with the sign-free
    convention for s = 0; callers with s != 0 validate separately) and
    that images of cycles project to classes.
    """
    Cs, Cd = H_src.complex, H_dst.complex
    f = Cs.field
    if validate and degree_shift == 0:
        for q in sorted(Cs.generators):
            Fq = chain_maps.get(q, Matrix.zero(f, Cd.dim(q), Cs.dim(q)))
            Fq1 = chain_maps.get(q - 1,
                                 Matrix.zero(f, Cd.dim(q - 1), Cs.dim(q - 1)))
            ds = Cs.boundary.get(q, Matrix.zero(f, 0, Cs.dim(q)))
            dd = Cd.boundary.get(q, Matrix.zero(f, 0, Cd.dim(q)))
            if q - 1 in Cs.generators and dd.rows == Cd.dim(q - 1):
                if dd * Fq != Fq1 * ds:
                    raise NotChainMap("boundary square fails in degree %d" % q)
    mats = {}
    for q, h in H_src.degrees.items():
        if h.dim == 0:
            continue
        qq = q + degree_shift
        Fq = chain_maps.get(q, Matrix.zero(f, Cd.dim(qq), Cs.dim(q)))
        cols = []
        for j in range(h.dim):
            img = Fq.apply(h.reps.column(j))
            cls = H_dst.project(qq, img)
            if cls is None:
                raise NotChainMap(
                    "image of a cycle is not a cycle in degree %d" % q)
            cols.append(cls)
        mats[q] = Matrix(f, H_dst.dim(qq), h.dim, cols)
    return GradedMap(H_src, H_dst, mats, tag=tag)


def inclusion_chain_map(C_src, C_dst):
    """Chain map of an inclusion of (relative) complexes.

    A generator of C_src goes to the same cube in C_dst, or to zero if
    the cube was quotiented away there.
    """
    f = C_src.field
    mats = {}
    for q, gens in C_src.generators.items():
        idx = C_dst.index.get(q, {})
        cols = []
        for g in gens:
            cols.append({idx[g]: f.one()} if g in idx else {})
        mats[q] = Matrix(f, C_dst.dim(q), len(gens), cols)
    return mats


def connecting_map(X, A, B, field, H_top=None, H_bot=None):
    """Connecting homomorphism of the triple B <= A <= X.

    Returns (H(X,A), H(A,B), GradedMap d: H_q(X,A) -> H_{q-1}(A,B)).
    A pair's connecting map is the case B = empty.
    """
    C_top = relative_complex(X, A, field)
    C_X = chain_complex(X, field)
    C_bot = relative_complex(A, B, field)
    Ht = H_top if H_top is not None else homology(C_top)
    Hb = H_bot if H_bot is not None else homology(C_bot)
    mats = {}
    for q, h in Ht.degrees.items():
        if h.dim == 0 or q == 0:
            continue
        cols = []
        for j in range(h.dim):
            rep = C_top.vector_chain(q, h.reps.column(j))
            # lift: the same cubes viewed as a chain in X
            lifted = {C_X.index[q][g]: c for g, c in rep.items()}
            bnd = C_X.boundary[q].apply(lifted)
            bnd_cubes = C_X.vector_chain(q - 1, bnd)
            # relative cycle: the boundary lies in A, and survives to (A,B)
            vec = {}
            for g, c in bnd_cubes.items():
                if g in B.cubes:
                    continue
                if g not in A.cubes:
                    raise InternalInconsistency(
                        "boundary of a relative cycle leaves A")
                vec[C_bot.index[q - 1][g]] = c
            cls = Hb.project(q - 1, vec)
            if cls is None:
                raise InternalInconsistency(
                    "connecting image is not a cycle")
            cols.append(cls)
        mats[q] = Matrix(field, Hb.dim(q - 1), h.dim, cols)
    return Ht, Hb, GradedMap(Ht, Hb, mats, tag="connecting")


def check_exact_at(m_in, m_out, dim_mid):
    """im(m_in) = ker(m_out) at a node of dimension dim_mid."""
    if not (m_out * m_in).is_zero():
        return False
    return rank(m_in) + rank(m_out) == dim_mid


class TripleSequence:
    """Long exact sequence of the triple N2 <= N1 <= N0.

    Fields: H10 = H(N1,N2), H20 = H(N0,N2), H01 = H(N0,N1); maps
    i (inclusion (N1,N2)->(N0,N2)), j (inclusion (N0,N2)->(N0,N1)),
    d (connecting H_q(N0,N1) -> H_{q-1}(N1,N2)).
    """

    __slots__ = ("field", "H10", "H20", "H01", "i", "j", "d")

    def __init__(self, N0, N1, N2, field):
        C10 = relative_complex(N1, N2, field)
        C20 = relative_complex(N0, N2, field)
        C01 = relative_complex(N0, N1, field)
        self.field = field
        self.H10 = homology(C10)
        self.H20 = homology(C20)
        self.H01 = homology(C01)
        self.i = induced_map(inclusion_chain_map(C10, C20),
                             self.H10, self.H20, tag="inclusion-induced")
        self.j = induced_map(inclusion_chain_map(C20, C01),
                             self.H20, self.H01, tag="inclusion-induced")
        _, _, self.d = connecting_map(N0, N1, N2, field,
                                      H_top=self.H01, H_bot=self.H10)
        self.verify_exactness()

    def verify_exactness(self):
        qs = set(self.H10.dims()) | set(self.H20.dims()) | \
            set(self.H01.dims())
        for q in sorted(qs):
            # ... -> H_q(N1,N2) -i-> H_q(N0,N2) -j-> H_q(N0,N1)
            #   -d-> H_{q-1}(N1,N2) -i-> ...
            i_q = self.i.matrix(q)
            j_q = self.j.matrix(q)
            d_q = self.d.matrix(q, shift=-1)
            d_q1 = self.d.matrix(q + 1, shift=-1)
            if not check_exact_at(d_q1, i_q, self.H10.dim(q)):
                raise ExactnessViolation("at H_%d(N1,N2)" % q)
            if not check_exact_at(i_q, j_q, self.H20.dim(q)):
                raise ExactnessViolation("at H_%d(N0,N2)" % q)
            if not check_exact_at(j_q, d_q, self.H01.dim(q)):
                raise ExactnessViolation("at H_%d(N0,N1)" % q)


def triple_sequence(N0, N1, N2, field):
    return TripleSequence(N0, N1, N2, field)
