"""Multivalued cubical maps and the combinatorial dynamics around
filtration pairs.

A map is given per top cell, either by exact affine interval arithmetic
or by an explicit table of rectangular image blocks.  The transition
digraph on top cells drives invariant parts, exit sets, local stable
and unstable sets and the validation of filtration pairs.  Chain-level
realizations of f are built as chain selectors carried by closed
carrier boxes: carriers are rectangles, hence acyclic, so a selector
exists degree by degree and any two choices are chain homotopic.
"""

from fractions import Fraction
from itertools import product

from .errors import (
    NoLagFound, NotChainMap, OutOfDomain, TightnessFailure,
)
from .cubical_complex import (
    CubicalSet, block_cubes, closure, cube_dim, relative_complex,
)
from .scalar_linalg import Matrix, solve


def _box_of_cube(q):
    """Closed vertex-coordinate box spanned by a cube."""
    return tuple((lo, hi) for lo, hi in q)


def _bbox(boxes):
    out = []
    for axis in zip(*boxes):
        out.append((min(a for a, _ in axis), max(b for _, b in axis)))
    return tuple(out)


def _box_cells(box):
    """Top cells tiling a closed box (degenerate axes have no cells)."""
    ranges = []
    for a, b in box:
        if a == b:
            return set()
        ranges.append((a, b))
    return block_cubes(ranges)


def _box_maximal_cubes(box):
    """Cubes of maximal dimension tiling a (possibly degenerate) box."""
    choices = []
    for a, b in box:
        if a == b:
            choices.append([(a, a)])
        else:
            choices.append([(k, k + 1) for k in range(a, b)])
    return {tuple(c) for c in product(*choices)}


def _box_closure(ambient, box):
    """Closed CubicalSet of all cubes inside a closed box."""
    return closure(CubicalSet(ambient, _box_maximal_cubes(box)))


def _intersect_boxes(boxes):
    out = []
    for axis in zip(*boxes):
        lo = max(a for a, _ in axis)
        hi = min(b for _, b in axis)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


class MultivaluedMap:
    """Cube -> rectangular block representation of f.

    bounds: per axis (lo, hi) vertex coordinates of the domain grid;
    the domain consists of every top cell inside the bounds (affine
    mode) or of the tabulated cells (table mode).
    """

    def __init__(self, ambient, bounds, matrix=None, offset=None,
                 table=None):
        assert len(bounds) == ambient
        self.ambient = ambient
        self.bounds = tuple((int(a), int(b)) for a, b in bounds)
        for a, b in self.bounds:
            assert a < b
        if table is not None:
            assert matrix is None and offset is None
            self.mode = "table"
            self.matrix = None
            self.offset = None
            tab = {}
            for q, block in table.items():
                q = tuple((int(a), int(b)) for a, b in q)
                assert cube_dim(q) == ambient, "table keys must be top cells"
                cells = frozenset(tuple((int(a), int(b)) for a, b in c)
                                  for c in block)
                assert cells, "empty image block for %r" % (q,)
                # block must be a solid rectangle of cells
                box = _bbox([_box_of_cube(c) for c in cells])
                assert cells == frozenset(_box_cells(box)), \
                    "image of %r is not a rectangular block" % (q,)
                tab[q] = box
            self._table = tab
        else:
            assert matrix is not None and offset is not None
            self.mode = "affine"
            self.matrix = tuple(tuple(Fraction(x) for x in row)
                                for row in matrix)
            self.offset = tuple(Fraction(x) for x in offset)
            assert len(self.matrix) == ambient and \
                len(self.offset) == ambient
            for row in self.matrix:
                assert len(row) == ambient
            self._table = None

    # domain handling
    def in_domain(self, q):
        if self.mode == "table":
            return q in self._table
        return all(a <= lo and hi <= b
                   for (lo, hi), (a, b) in zip(q, self.bounds))

    def domain_cells(self):
        if self.mode == "table":
            return set(self._table)
        return block_cubes(self.bounds)

    # carrier boxes
    def _affine_box(self, box):
        out = []
        for i in range(self.ambient):
            lo = self.offset[i]
            hi = self.offset[i]
            for j, (a, b) in enumerate(box):
                c = self.matrix[i][j]
                if c >= 0:
                    lo += c * a
                    hi += c * b
                else:
                    lo += c * b
                    hi += c * a
            fl = lo.numerator // lo.denominator
            ce = -((-hi.numerator) // hi.denominator)
            out.append((fl, ce))
        return tuple(out)

    def _cell_box(self, q):
        """Closed carrier box of a top cell."""
        if self.mode == "table":
            box = self._table.get(q)
            if box is None:
                raise OutOfDomain("cell %r not in the map table" % (q,))
            return box
        if not self.in_domain(q):
            raise OutOfDomain("cell %r outside bounds" % (q,))
        return self._affine_box(_box_of_cube(q))

    def carrier_box(self, box):
        """Closed box containing f(box) for a closed vertex box.

        Degenerate axes are handled by intersecting over the adjacent
        cells (the image of a shared face lies in every neighbour's
        carrier); non-degenerate spans are handled by union.
        """
        if self.mode == "affine":
            return self._affine_box(box)
        span = []
        for (a, b), (lo, hi) in zip(box, self.bounds):
            if a < b:
                span.append([(k, False) for k in range(a, b)])
            else:
                sides = [k for k in (a - 1, a) if lo <= k < hi]
                assert sides, "box axis [%d,%d] outside bounds" % (a, b)
                span.append([(tuple(sides), True)])
        pieces = []
        for combo in product(*span):
            cell_choices = []
            for k, degen in combo:
                cell_choices.append(list(k) if degen else [k])
            boxes = []
            for cell_lo in product(*cell_choices):
                q = tuple((k, k + 1) for k in cell_lo)
                # cells past the domain boundary put no constraint
                if not self.in_domain(q):
                    continue
                boxes.append(self._cell_box(q))
            if not boxes:
                raise OutOfDomain(
                    "box %r has a piece outside the map domain" % (box,))
            piece = _intersect_boxes(boxes)
            if piece is None:
                raise TightnessFailure(
                    "empty carrier at face of box %r" % (box,))
            pieces.append(piece)
        return _bbox(pieces)

    def block(self, q):
        """Image block of a top cell as a set of top cells.

        A degenerate image axis is clamped to the cell of its floor, so
        the block is always nonempty.
        """
        box = self._cell_box(q)
        ranges = []
        for a, b in box:
            if a == b:
                ranges.append((a, a + 1))
            else:
                ranges.append((a, b))
        return block_cubes(ranges)


def image(F, X):
    """Union of image blocks over the top cells of X."""
    cells = X.top_cells() if isinstance(X, CubicalSet) else set(X)
    out = set()
    for q in sorted(cells):
        out |= F.block(q)
    ambient = X.ambient if isinstance(X, CubicalSet) else F.ambient
    return CubicalSet(ambient, out)


def image_n(F, X, n):
    for _ in range(n):
        X = image(F, X)
    return X


def transition_digraph(F, region_cells):
    """Edges Q -> Q' of the map restricted to a set of top cells."""
    region = set(region_cells)
    return {q: sorted(F.block(q) & region) for q in sorted(region)}


def invariant_part(F, region):
    """Top cells on a bi-infinite walk of the restricted digraph."""
    cells = region.top_cells() if isinstance(region, CubicalSet) \
        else set(region)
    cells = {q for q in cells if F.in_domain(q)}
    while True:
        graph = transition_digraph(F, cells)
        has_in = set()
        for q, outs in graph.items():
            has_in.update(outs)
        keep = {q for q in cells if graph[q] and q in has_in}
        if keep == cells:
            break
        cells = keep
    ambient = region.ambient if isinstance(region, CubicalSet) else F.ambient
    return CubicalSet(ambient, cells)


def immediate_exit_set(F, N):
    """Top cells of N whose image block is not contained in N."""
    n_cells = N.top_cells()
    out = {q for q in n_cells if not F.block(q) <= n_cells}
    return CubicalSet(N.ambient, out)


def _touches(q, cells_closed):
    from .cubical_complex import cubes_touch
    return any(cubes_touch(q, p) for p in cells_closed)


def validate_filtration_pair(F, N, L):
    """The three conditions on (N, L); returns (ok, report).

    Combinatorial readings: (i) the invariant part of N minus L must
    avoid the cells of N minus L that touch L (isolation towards L);
    (ii) the immediate exit set lies in L and no exit cell touches the
    closure of N minus L; (iii) the closed image of L avoids every cube
    of N outside the closure of L.
    """
    n_cells = N.top_cells()
    l_cells = L.top_cells()
    if not l_cells <= n_cells:
        return False, "L is not contained in N"
    region = n_cells - l_cells
    # (i) isolation of the invariant part
    inv = invariant_part(F, region).top_cells()
    frontier = {q for q in region if _touches(q, l_cells)}
    bad = sorted(inv & frontier)
    if bad:
        return False, "(i) invariant part touches L at %r" % (bad[0],)
    # (ii) L is a neighbourhood of the immediate exit set
    exit_cells = immediate_exit_set(F, N).top_cells()
    outside = sorted(exit_cells - l_cells)
    if outside:
        return False, "(ii) exit cell %r not in L" % (outside[0],)
    bad = sorted(q for q in exit_cells if _touches(q, region))
    if bad:
        return False, "(ii) exit cell %r touches cl(N\\L)" % (bad[0],)
    # (iii) f(L) avoids cl(N \ L)
    gen_cubes = closure(CubicalSet(N.ambient, n_cells)).cubes - \
        closure(CubicalSet(N.ambient, l_cells)).cubes
    for q in sorted(l_cells):
        img = closure(CubicalSet(N.ambient, F.block(q)))
        hit = sorted(img.cubes & gen_cubes)
        if hit:
            return False, "(iii) f(%r) meets cl(N\\L) at %r" % (q, hit[0])
    return True, "valid"


class FiltrationPair:
    """A validated pair (N, L) with cached dynamical data.

    N, L are given as sets of top cells; closures are taken whenever a
    complex is built.
    """

    __slots__ = ("F", "N", "L", "ambient", "_exit", "_wu", "_fdom", "_ws")

    def __init__(self, F, N, L, validate=True):
        self.F = F
        self.N = CubicalSet(N.ambient, N.top_cells())
        self.L = CubicalSet(N.ambient, L.top_cells())
        self.ambient = N.ambient
        if validate:
            ok, report = validate_filtration_pair(F, self.N, self.L)
            assert ok, report
        self._exit = None
        self._wu = None
        self._fdom = None
        self._ws = None

    @property
    def exit_set(self):
        if self._exit is None:
            self._exit = immediate_exit_set(self.F, self.N)
        return self._exit

    def _unstable(self):
        if self._wu is None:
            self._wu, self._fdom = local_unstable(self.F, self.N, self.L)
        return self._wu, self._fdom

    @property
    def w_unstable(self):
        return self._unstable()[0]

    @property
    def f_domain(self):
        return self._unstable()[1]

    @property
    def w_stable(self):
        if self._ws is None:
            self._ws = local_stable(self.F, self.N, self.L)
        return self._ws

    def closed_N(self):
        return closure(self.N)

    def closed_L(self):
        return closure(self.L)


class FiltrationTriple:
    """Nested regions N2 <= N1 <= N0 cutting out three pairs.

    (N0, N2) isolates the full invariant set S, (N0, N1) its repelling
    part R and (N1, N2) its attracting part A; all three pairs are
    validated.
    """

    __slots__ = ("F", "N0", "N1", "N2", "ambient", "pair_S", "pair_R",
                 "pair_A")

    def __init__(self, F, N0, N1, N2, validate=True):
        assert N2.top_cells() <= N1.top_cells(), "N2 not inside N1"
        assert N1.top_cells() <= N0.top_cells(), "N1 not inside N0"
        self.F = F
        self.N0 = CubicalSet(N0.ambient, N0.top_cells())
        self.N1 = CubicalSet(N0.ambient, N1.top_cells())
        self.N2 = CubicalSet(N0.ambient, N2.top_cells())
        self.ambient = N0.ambient
        self.pair_S = FiltrationPair(F, self.N0, self.N2, validate=validate)
        self.pair_R = FiltrationPair(F, self.N0, self.N1, validate=validate)
        self.pair_A = FiltrationPair(F, self.N1, self.N2, validate=validate)


def local_unstable(F, N, L):
    """Stabilized W_k+1 = image(W_k) ∩ N and its part inside L."""
    n_cells = N.top_cells()
    w = set(n_cells)
    first = True
    while True:
        nxt = image(F, w).top_cells() & n_cells
        if nxt == w:
            break
        # monotone after the first step since image is monotone
        assert first or nxt <= w
        first = False
        w = nxt
    wu = CubicalSet(N.ambient, w)
    fdom = CubicalSet(N.ambient, w & L.top_cells())
    return wu, fdom


def local_stable(F, N, L):
    """May-stay set: cells with an infinite forward walk in N minus L."""
    cells = N.top_cells() - L.top_cells()
    while True:
        graph = transition_digraph(F, cells)
        keep = {q for q in cells if graph[q]}
        if keep == cells:
            break
        cells = keep
    return CubicalSet(N.ambient, cells)


class _SelectorBuilder:
    """Chain selector from C(X, A) to C(Y, B) carried by n-step boxes.

    X, A, Y, B closed.  Degree 0: a generator vertex goes to the class
    of the lexicographically smallest vertex of its carrier box.
    Higher degrees solve d c = psi(d sigma) inside the carrier box
    relative to the B-part, which is solvable because carriers are
    acyclic rectangles (failure signals a coarse grid).
    """

    def __init__(self, F, X, A, Y, B, field, steps, leak_error):
        self.F = F
        self.X, self.A, self.Y, self.B = X, A, Y, B
        self.field = field
        self.steps = steps
        self.leak_error = leak_error
        self.C_src = relative_complex(X, A, field)
        self.C_dst = relative_complex(Y, B, field)
        self._psi = {}

    def carrier(self, g):
        box = _box_of_cube(g)
        for _ in range(self.steps):
            box = self.F.carrier_box(box)
        return box

    def _check_box(self, g, box):
        for c in sorted(_box_maximal_cubes(box)):
            if c not in self.Y.cubes:
                raise self.leak_error(
                    "carrier of %r leaves the target at %r" % (g, c))

    def psi(self, g):
        if g in self._psi:
            return self._psi[g]
        box = self.carrier(g)
        self._check_box(g, box)
        if cube_dim(g) == 0:
            v = tuple((a, a) for a, _ in box)
            out = {} if v in self.B.cubes else {v: self.field.one()}
        else:
            out = self._solve(g, box)
        self._psi[g] = out
        return out

    def _solve(self, g, box):
        f = self.field
        q = cube_dim(g)
        # rhs: psi applied to the relative boundary of g
        rhs_cubes = {}
        src_idx = self.C_src.index[q]
        col = self.C_src.boundary[q].column(src_idx[g])
        for i, c in col.items():
            face = self.C_src.generators[q - 1][i]
            for h, v in self.psi(face).items():
                w = f.add(rhs_cubes.get(h, f.zero()), f.mul(c, v))
                if w == 0:
                    rhs_cubes.pop(h, None)
                else:
                    rhs_cubes[h] = w
        # local complex of the carrier box relative to its B-part
        box_cl = _box_closure(self.F.ambient, box)
        b_part = CubicalSet(self.F.ambient, box_cl.cubes & self.B.cubes,
                            closed=True)
        C_loc = relative_complex(box_cl, b_part, f)
        rhs = {}
        for h, v in rhs_cubes.items():
            idx = C_loc.index.get(q - 1, {})
            if h not in idx:
                raise TightnessFailure(
                    "face image of %r escapes its carrier box" % (g,))
            rhs[idx[h]] = v
        if q not in C_loc.boundary or C_loc.dim(q) == 0:
            if rhs:
                raise TightnessFailure(
                    "no degree-%d chains in carrier of %r" % (q, g))
            return {}
        x = solve(C_loc.boundary[q], rhs)
        if x is None:
            raise TightnessFailure(
                "selector equation unsolvable for %r" % (g,))
        out = {}
        for i, c in x.column(0).items():
            out[C_loc.generators[q][i]] = c
        return out

    def matrices(self):
        mats = {}
        for q in sorted(self.C_src.generators):
            cols = []
            dst_idx = self.C_dst.index.get(q, {})
            for g in self.C_src.generators[q]:
                vec = {}
                for h, v in self.psi(g).items():
                    if h in dst_idx:
                        vec[dst_idx[h]] = v
                cols.append(vec)
            mats[q] = Matrix(self.field, self.C_dst.dim(q),
                             self.C_src.dim(q), cols)
        return mats


def chain_selector(F, X, A, Y, B, field, steps=1,
                   leak_error=TightnessFailure):
    """Per-degree matrices of an f^steps selector C(X,A) -> C(Y,B)."""
    if steps == 0:
        from .homology_engine import inclusion_chain_map
        C_src = relative_complex(X, A, field)
        C_dst = relative_complex(Y, B, field)
        return inclusion_chain_map(C_src, C_dst)
    builder = _SelectorBuilder(F, X, A, Y, B, field, steps, leak_error)
    return builder.matrices()


def quotient_chain_map(F, N, L, field):
    """Chain map on relative_complex(cl N, cl L) realizing f_{N/L}.

    Every top cube of N outside L must have its image block inside N
    (TightnessFailure otherwise: the grid is too coarse).
    """
    n_cells = N.top_cells()
    for q in sorted(n_cells - L.top_cells()):
        if not F.block(q) <= n_cells:
            raise TightnessFailure(
                "image of non-exit cell %r leaks outside N" % (q,))
    X = closure(CubicalSet(N.ambient, n_cells))
    A = closure(CubicalSet(N.ambient, L.top_cells()))
    return chain_selector(F, X, A, X, A, field, steps=1)


class StandardSE:
    """Standard shift equivalence between two pairs.

    Chain level: r = f^k selector A-pair -> B-pair, s = f^l selector
    back; homology level: rho, sigma GradedMaps verified against the
    index endomorphisms with lag m = k + l in every degree.
    """

    __slots__ = ("pairA", "pairB", "r_mats", "s_mats", "k", "l",
                 "H_A", "H_B", "phi_A", "phi_B", "rho", "sigma")

    def __init__(self, pairA, pairB, r_mats, s_mats, k, l,
                 H_A, H_B, phi_A, phi_B, rho, sigma):
        self.pairA = pairA
        self.pairB = pairB
        self.r_mats = r_mats
        self.s_mats = s_mats
        self.k = k
        self.l = l
        self.H_A = H_A
        self.H_B = H_B
        self.phi_A = phi_A
        self.phi_B = phi_B
        self.rho = rho
        self.sigma = sigma

    @property
    def m(self):
        return self.k + self.l

    def degree_se(self, q):
        """The shift equivalence on H_q as eventual_algebra data."""
        from .eventual_algebra import EndoSpace, ShiftEquivalence
        E_A = EndoSpace(self.phi_A.matrix(q))
        E_B = EndoSpace(self.phi_B.matrix(q))
        return ShiftEquivalence(E_A, E_B, self.rho.matrix(q),
                                self.sigma.matrix(q), self.m)


def standard_shift_equivalence(F, pairA, pairB, field, k=0, n_max=64):
    """Standard maps r = f^k: A-pair -> B-pair and s = f^l back.

    The lag l is searched upward until the f^l selector exists and the
    four shift-equivalence identities hold on homology in every degree;
    NoLagFound past n_max.
    """
    from .eventual_algebra import verify_shift_equivalence
    from .homology_engine import homology, induced_map

    XA, AA = closure(pairA.N), closure(pairA.L)
    XB, AB = closure(pairB.N), closure(pairB.L)
    C_A = relative_complex(XA, AA, field)
    C_B = relative_complex(XB, AB, field)
    H_A, H_B = homology(C_A), homology(C_B)
    phi_A = induced_map(quotient_chain_map(F, pairA.N, pairA.L, field),
                        H_A, H_A, tag="index-endo")
    phi_B = induced_map(quotient_chain_map(F, pairB.N, pairB.L, field),
                        H_B, H_B, tag="index-endo")
    r_mats = chain_selector(F, XA, AA, XB, AB, field, steps=k)
    rho = induced_map(r_mats, H_A, H_B, tag="standard-r")
    degrees = sorted(set(H_A.dims()) | set(H_B.dims()))
    for l in range(0, n_max + 1):
        try:
            s_mats = chain_selector(F, XB, AB, XA, AA, field, steps=l)
            sigma = induced_map(s_mats, H_B, H_A, tag="standard-s")
        except (TightnessFailure, NotChainMap):
            continue
        se = StandardSE(pairA, pairB, r_mats, s_mats, k, l,
                        H_A, H_B, phi_A, phi_B, rho, sigma)
        if all(verify_shift_equivalence(se.degree_se(q))[0]
               for q in degrees):
            return se
    raise NoLagFound("no return lag up to %d" % n_max)
