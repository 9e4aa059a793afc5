"""Elementary cubes, cubical sets and their (relative) chain complexes.

A cube is a tuple of d intervals (lo, hi) with hi in {lo, lo+1}; its
dimension is the number of unit intervals.  Boundary signs follow the
tensor rule: the k-th unit interval of a cube carries sign (-1)^(k-1)
and d[a, a+1] = [a+1] - [a].  Generators in every degree are sorted, so
all matrices are deterministic.
"""

from itertools import product

from .errors import NotSubcomplex
from .scalar_linalg import Matrix


def cube(intervals):
    """Canonical cube from an iterable of (lo, hi) pairs."""
    out = []
    for lo, hi in intervals:
        lo, hi = int(lo), int(hi)
        assert hi in (lo, lo + 1), "interval [%d,%d] not elementary" % (lo, hi)
        out.append((lo, hi))
    return tuple(out)


def cube_dim(q):
    return sum(1 for lo, hi in q if hi != lo)


def primary_faces(q):
    """Codimension-one faces with signs: list of (face, sign)."""
    out = []
    k = 0
    for j, (lo, hi) in enumerate(q):
        if hi == lo:
            continue
        sign = 1 if k % 2 == 0 else -1
        out.append((q[:j] + ((hi, hi),) + q[j + 1:], sign))
        out.append((q[:j] + ((lo, lo),) + q[j + 1:], -sign))
        k += 1
    return out


def all_faces(q):
    """Every face of q, including q itself."""
    choices = []
    for lo, hi in q:
        if hi == lo:
            choices.append(((lo, lo),))
        else:
            choices.append(((lo, lo), (hi, hi), (lo, hi)))
    return set(product(*choices))


def block_cubes(ranges):
    """Top cells of the solid block prod [a_i, b_i] (cell coordinates).

    ranges: per axis (a, b) with a <= b; yields cubes with lo in
    [a, b - 1] per axis, i.e. the full cells tiling the block.
    """
    axes = []
    for a, b in ranges:
        assert a < b, "degenerate block axis [%d,%d]" % (a, b)
        axes.append([(k, k + 1) for k in range(a, b)])
    return {tuple(c) for c in product(*axes)}


class CubicalSet:
    """Finite set of elementary cubes in a fixed ambient dimension."""

    __slots__ = ("ambient", "cubes", "closed")

    def __init__(self, ambient, cubes_iter, closed=None):
        self.ambient = ambient
        cs = frozenset(cube(q) for q in cubes_iter)
        for q in cs:
            assert len(q) == ambient
        self.cubes = cs
        if closed is None:
            closed = all(all_faces(q) <= cs for q in cs)
        self.closed = closed

    def __len__(self):
        return len(self.cubes)

    def __contains__(self, q):
        return q in self.cubes

    def __iter__(self):
        return iter(sorted(self.cubes))

    def __eq__(self, other):
        return (isinstance(other, CubicalSet) and
                self.ambient == other.ambient and self.cubes == other.cubes)

    def __hash__(self):
        return hash((self.ambient, self.cubes))

    def __le__(self, other):
        return self.cubes <= other.cubes

    def __or__(self, other):
        assert self.ambient == other.ambient
        return CubicalSet(self.ambient, self.cubes | other.cubes)

    def __and__(self, other):
        assert self.ambient == other.ambient
        return CubicalSet(self.ambient, self.cubes & other.cubes)

    def __sub__(self, other):
        assert self.ambient == other.ambient
        return CubicalSet(self.ambient, self.cubes - other.cubes)

    def __repr__(self):
        return "CubicalSet(d=%d, %d cubes%s)" % (
            self.ambient, len(self.cubes), ", closed" if self.closed else "")

    def top_cells(self):
        """Cubes of full ambient dimension."""
        return {q for q in self.cubes if cube_dim(q) == self.ambient}

    def is_empty(self):
        return not self.cubes


def empty_set(ambient):
    return CubicalSet(ambient, (), closed=True)


def from_blocks(ambient, blocks):
    """CubicalSet of top cells tiling a union of integer blocks."""
    cs = set()
    for ranges in blocks:
        assert len(ranges) == ambient
        cs |= block_cubes(ranges)
    return CubicalSet(ambient, cs)


def closure(X):
    """Smallest closed superset."""
    if X.closed:
        return X
    cs = set()
    for q in X.cubes:
        cs |= all_faces(q)
    return CubicalSet(X.ambient, cs, closed=True)


class ChainComplexF:
    """Chain complex over a field with sorted cube generators.

    generators[q]: tuple of cubes; boundary[q]: Matrix C_q -> C_{q-1}.
    """

    __slots__ = ("field", "generators", "boundary", "index")

    def __init__(self, field, generators, boundary):
        self.field = field
        self.generators = generators
        self.boundary = boundary
        self.index = {q: {g: i for i, g in enumerate(gs)}
                      for q, gs in generators.items()}
        for q, d in boundary.items():
            if q - 1 in boundary:
                assert (boundary[q - 1] * d).is_zero(), "dd != 0 in deg %d" % q

    def dims(self):
        return {q: len(gs) for q, gs in self.generators.items() if gs}

    def degrees(self):
        return sorted(self.generators)

    def gens(self, q):
        return self.generators.get(q, ())

    def dim(self, q):
        return len(self.generators.get(q, ()))

    def chain_vector(self, q, coeffs):
        """Sparse vector from {cube: scalar}; cubes must be generators."""
        idx = self.index.get(q, {})
        f = self.field
        out = {}
        for g, c in coeffs.items():
            c = f.of(c)
            if c != 0:
                assert g in idx, "cube %r is not a degree-%d generator" % (g, q)
                out[idx[g]] = c
        return out

    def vector_chain(self, q, vec):
        gs = self.generators.get(q, ())
        return {gs[i]: c for i, c in vec.items()}


def _complex_from_cubes(field, cubes, dropped):
    """Chain complex on `cubes`; boundary entries in `dropped` vanish."""
    by_deg = {}
    for q in cubes:
        by_deg.setdefault(cube_dim(q), []).append(q)
    if not by_deg:
        return ChainComplexF(field, {0: ()}, {0: Matrix.zero(field, 0, 0)})
    top = max(by_deg)
    generators = {}
    for q in range(0, top + 1):
        generators[q] = tuple(sorted(by_deg.get(q, [])))
    index = {q: {g: i for i, g in enumerate(gs)}
             for q, gs in generators.items()}
    boundary = {0: Matrix.zero(field, 0, len(generators[0]))}
    for q in range(1, top + 1):
        lower = index[q - 1]
        cols = []
        for g in generators[q]:
            col = {}
            for face, sign in primary_faces(g):
                if face in dropped:
                    continue
                assert face in lower, "face %r missing from complex" % (face,)
                col[lower[face]] = field.of(sign)
            cols.append(col)
        boundary[q] = Matrix(field, len(generators[q - 1]),
                             len(generators[q]), cols)
    return ChainComplexF(field, generators, boundary)


def chain_complex(X, field):
    assert X.closed, "chain complex needs a closed cubical set"
    return _complex_from_cubes(field, X.cubes, frozenset())


def relative_complex(X, A, field):
    """Quotient complex C(X)/C(A); A must be a closed subcomplex of X."""
    assert X.closed, "relative complex needs closed X"
    if not A.closed:
        raise NotSubcomplex("A is not closed")
    if not A.cubes <= X.cubes:
        raise NotSubcomplex("A is not contained in X")
    return _complex_from_cubes(field, X.cubes - A.cubes, A.cubes)


def cubes_touch(p, q):
    """True iff the closures of p and q intersect."""
    for (a, b), (c, d) in zip(p, q):
        if b < c or d < a:
            return False
    return True


def neighborhood(X, A, r):
    """Cubes of X within combinatorial distance r of A.

    Distance is shared-face adjacency between cubes; r = 0 returns
    closure(A) intersected with X.  Monotone in r.
    """
    current = closure(A).cubes & X.cubes
    for _ in range(r):
        grown = set(current)
        for q in X.cubes:
            if q in grown:
                continue
            if any(cubes_touch(q, p) for p in current):
                grown.add(q)
        if grown == current:
            break
        current = grown
    return CubicalSet(X.ambient, current)


def euler_characteristic(C):
    return sum((-1) ** q * len(gs) for q, gs in C.generators.items())
