"""Independent homology oracle via Smith normal form over Z.

Boundary matrices of cubical complexes have integer entries, so their
Smith normal form (computed by sympy, not by this package's linear
algebra) determines the rank of each boundary over Q and over Z/p: the
rank over Q is the number of nonzero diagonal entries and the rank over
Z/p drops by the number of entries divisible by p.  Homology dimension
then follows from dim H_q = dim C_q - rank d_q - rank d_{q+1}.
"""

from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form


def _int_matrix(M):
    rows = []
    for row in M.to_rows():
        out = []
        for v in row:
            if isinstance(v, Fraction):
                assert v.denominator == 1, "oracle needs integer entries"
                out.append(int(v))
            else:
                out.append(int(v))
        rows.append(out)
    return sympy.Matrix(M.rows, M.cols, [x for r in rows for x in r])


def snf_diagonal(M):
    """Diagonal of the Smith normal form of an integer Matrix."""
    if M.rows == 0 or M.cols == 0:
        return []
    S = smith_normal_form(_int_matrix(M))
    return [int(S[i, i]) for i in range(min(M.rows, M.cols))]


def boundary_rank(M, p=None):
    diag = snf_diagonal(M)
    if p is None:
        return sum(1 for d in diag if d != 0)
    return sum(1 for d in diag if d % p != 0)


def homology_dims(C, p=None):
    """Homology dimensions of a ChainComplexF, over Q or Z/p.

    Works from the integer boundary matrices only; every linear algebra
    step is sympy's, independent of the package under test.
    """
    dims = {}
    degrees = sorted(C.generators)
    for q in degrees:
        n = len(C.generators[q])
        rq = boundary_rank(C.boundary[q], p) if q in C.boundary else 0
        rq1 = boundary_rank(C.boundary[q + 1], p) if q + 1 in C.boundary \
            else 0
        dims[q] = n - rq - rq1
        assert dims[q] >= 0
    return {q: d for q, d in dims.items() if d}
