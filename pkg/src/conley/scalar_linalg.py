"""Exact linear algebra over Q or Z/p.

Matrices are stored as tuples of sparse columns (dict row -> scalar).
Scalars are Fraction over Q and plain ints in [0, p) over Z/p.
A single column-echelon routine with deterministic pivoting (smallest
available row index) backs rank, kernel, image, solve and inverse, so
every basis produced by the library is reproducible across runs.
"""

from fractions import Fraction

from .errors import FieldMismatch, NotInvariant, NotInvertible


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Field descriptor: exact rationals ('Q') or integers mod a prime."""

    def __init__(self, p=None):
        if p is not None:
            if not _is_prime(p):
                raise FieldMismatch("modulus %r is not prime" % (p,))
        self.p = p

    @property
    def is_rational(self):
        return self.p is None

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else "Zp:%d" % self.p

    # scalar constructors and arithmetic
    def of(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = pow(x.denominator % self.p, self.p - 2, self.p)
            return (x.numerator % self.p) * den % self.p
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p is None else pow(a, self.p - 2, self.p)


QQ = Field()


def _addmul(field, col, other, c):
    # col += c * other, in place, dropping zeros
    if c == 0:
        return
    for r, v in other.items():
        w = field.add(col.get(r, field.zero()), field.mul(c, v))
        if w == 0:
            col.pop(r, None)
        else:
            col[r] = w


class Matrix:
    """Immutable sparse matrix over a Field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows, cols, data):
        assert rows >= 0 and cols >= 0
        assert len(data) == cols
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = tuple(dict(c) for c in data)
        for c in self.data:
            for r in c:
                assert 0 <= r < rows

    @staticmethod
    def zero(field, rows, cols):
        return Matrix(field, rows, cols, [{} for _ in range(cols)])

    @staticmethod
    def identity(field, n):
        one = field.one()
        return Matrix(field, n, n, [{i: one} for i in range(n)])

    @staticmethod
    def from_rows(field, rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        data = [{} for _ in range(cols)]
        for i, row in enumerate(rows_list):
            assert len(row) == cols
            for j, x in enumerate(row):
                v = field.of(x)
                if v != 0:
                    data[j][i] = v
        return Matrix(field, rows, cols, data)

    @staticmethod
    def from_cols(field, rows, cols_list):
        data = []
        for col in cols_list:
            if isinstance(col, dict):
                data.append({r: field.of(v) for r, v in col.items()
                             if field.of(v) != 0})
            else:
                assert len(col) == rows
                data.append({i: field.of(v) for i, v in enumerate(col)
                             if field.of(v) != 0})
        return Matrix(field, rows, len(data), data)

    def column(self, j):
        return dict(self.data[j])

    def entry(self, i, j):
        return self.data[j].get(i, self.field.zero())

    def to_rows(self):
        out = [[self.field.zero()] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.data):
            for i, v in col.items():
                out[i][j] = v
        return out

    def is_zero(self):
        return all(not c for c in self.data)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols,
                     tuple(tuple(sorted(c.items())) for c in self.data)))

    def __repr__(self):
        return "Matrix(%r, %dx%d)" % (self.field, self.rows, self.cols)

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch("%r vs %r" % (self.field, other.field))

    def __add__(self, other):
        self._check(other)
        assert (self.rows, self.cols) == (other.rows, other.cols)
        data = []
        for a, b in zip(self.data, other.data):
            c = dict(a)
            _addmul(self.field, c, b, self.field.one())
            data.append(c)
        return Matrix(self.field, self.rows, self.cols, data)

    def __neg__(self):
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      [{r: f.neg(v) for r, v in c.items()} for c in self.data])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        f = self.field
        c = f.of(c)
        if c == 0:
            return Matrix.zero(f, self.rows, self.cols)
        return Matrix(f, self.rows, self.cols,
                      [{r: f.mul(c, v) for r, v in col.items()}
                       for col in self.data])

    def __mul__(self, other):
        self._check(other)
        assert self.cols == other.rows, "shape mismatch"
        f = self.field
        data = []
        for bcol in other.data:
            acc = {}
            for k, c in bcol.items():
                _addmul(f, acc, self.data[k], c)
            data.append(acc)
        return Matrix(f, self.rows, other.cols, data)

    def apply(self, vec):
        """Apply to a sparse column vector (dict)."""
        f = self.field
        acc = {}
        for k, c in vec.items():
            _addmul(f, acc, self.data[k], f.of(c))
        return acc

    def power(self, n):
        assert self.rows == self.cols and n >= 0
        result = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def hstack(self, other):
        self._check(other)
        assert self.rows == other.rows
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      list(self.data) + list(other.data))

    def submatrix_cols(self, indices):
        return Matrix(self.field, self.rows, len(indices),
                      [self.data[j] for j in indices])

    def transpose(self):
        data = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.data):
            for i, v in col.items():
                data[i][j] = v
        return Matrix(self.field, self.cols, self.rows, data)


class Echelon:
    """Column echelon form with recorded column operations.

    After construction: pivots maps pivot row -> reduced column (dict,
    pivot entry 1), and combo maps pivot row -> expression of that
    reduced column in the original columns (dict col index -> scalar).
    Pivot rows are chosen as the smallest nonzero row of each reduced
    column, processed in original column order, so results are
    deterministic.
    """

    def __init__(self, M):
        self.field = M.field
        self.pivots = {}
        self.combo = {}
        self.kernel_combos = []
        self.pivot_src = []
        f = M.field
        for j in range(M.cols):
            col = dict(M.data[j])
            expr = {j: f.one()}
            self._reduce(col, expr)
            if col:
                r = min(col)
                c = f.inv(col[r])
                col = {k: f.mul(c, v) for k, v in col.items()}
                expr = {k: f.mul(c, v) for k, v in expr.items()}
                self.pivots[r] = col
                self.combo[r] = expr
                self.pivot_src.append(j)
            else:
                self.kernel_combos.append(expr)

    def add(self, vec):
        """Append one more column; True iff the rank increased."""
        f = self.field
        j = len(self.pivot_src) + len(self.kernel_combos)
        col = dict(vec)
        expr = {j: f.one()}
        self._reduce(col, expr)
        if not col:
            self.kernel_combos.append(expr)
            return False
        r = min(col)
        c = f.inv(col[r])
        self.pivots[r] = {k: f.mul(c, v) for k, v in col.items()}
        self.combo[r] = {k: f.mul(c, v) for k, v in expr.items()}
        self.pivot_src.append(j)
        return True

    def _reduce(self, col, expr=None):
        f = self.field
        while col:
            r = min(col)
            piv = self.pivots.get(r)
            if piv is None:
                return
            c = f.neg(col[r])
            _addmul(f, col, piv, c)
            if expr is not None:
                _addmul(f, expr, self.combo[r], c)

    def residual(self, vec):
        col = dict(vec)
        self._reduce(col)
        return col

    def coordinates(self, vec):
        """Coefficients writing vec over the reduced pivot columns.

        Returns (coeffs keyed by pivot row, residual); residual empty
        iff vec lies in the column space.
        """
        f = self.field
        col = dict(vec)
        coeffs = {}
        while col:
            r = min(col)
            piv = self.pivots.get(r)
            if piv is None:
                return coeffs, col
            c = col[r]
            coeffs[r] = c
            _addmul(f, col, piv, f.neg(c))
        return coeffs, col

    def solve(self, vec):
        """x with M x = vec, or None; expressed in original columns."""
        f = self.field
        coeffs, residual = self.coordinates(vec)
        if residual:
            return None
        x = {}
        for r, c in coeffs.items():
            _addmul(f, x, self.combo[r], c)
        return x


def rank(M):
    return len(Echelon(M).pivots)


def kernel_basis(M):
    """Columns spanning ker M."""
    ech = Echelon(M)
    return Matrix(M.field, M.cols, len(ech.kernel_combos), ech.kernel_combos)


def image_basis(M):
    """Columns spanning im M (reduced, deterministic)."""
    ech = Echelon(M)
    rows = sorted(ech.pivots)
    return Matrix(M.field, M.rows, len(rows), [ech.pivots[r] for r in rows])


def solve(M, b):
    """Some x with M x = b, or None.  b: dense list or sparse dict."""
    f = M.field
    if not isinstance(b, dict):
        assert len(b) == M.rows
        b = {i: f.of(v) for i, v in enumerate(b) if f.of(v) != 0}
    else:
        b = {i: f.of(v) for i, v in b.items() if f.of(v) != 0}
    x = Echelon(M).solve(b)
    if x is None:
        return None
    return Matrix(f, M.cols, 1, [x])


def in_span(M, b):
    f = M.field
    if not isinstance(b, dict):
        b = {i: f.of(v) for i, v in enumerate(b) if f.of(v) != 0}
    return not Echelon(M).residual(b)


def same_span(A, B):
    if A.field != B.field or A.rows != B.rows:
        raise FieldMismatch("incompatible spans")
    ra, rb = rank(A), rank(B)
    return ra == rb == rank(A.hstack(B))


def solve_matrix(M, B):
    """X with M X = B, or None (column by column, one echelon pass)."""
    M._check(B)
    assert M.rows == B.rows
    ech = Echelon(M)
    data = []
    for j in range(B.cols):
        x = ech.solve(B.data[j])
        if x is None:
            return None
        data.append(x)
    return Matrix(M.field, M.cols, B.cols, data)


def inverse(M):
    assert M.rows == M.cols
    X = solve_matrix(M, Matrix.identity(M.field, M.rows))
    if X is None or rank(M) < M.rows:
        raise NotInvertible("matrix of rank %d, size %d" % (rank(M), M.rows))
    return X


def restricted_inverse(M, B):
    """Inverse of M on span(B), in B-coordinates.

    Requires M to map span(B) isomorphically onto itself; returns the
    k x k matrix X (k = B.cols) with M B X = B.
    """
    M._check(B)
    assert M.rows == M.cols == B.rows
    if rank(B) < B.cols:
        raise NotInvariant("B columns are dependent")
    MB = M * B
    # P expresses M on span(B): M B = B P
    P = solve_matrix(B, MB)
    if P is None:
        raise NotInvariant("M does not preserve span(B)")
    try:
        return inverse(P)
    except NotInvertible as e:
        raise NotInvariant("M drops rank on span(B)") from e
