"""Eventual algebra of a linear endomorphism.

For (V, phi) with V finite dimensional, the algebraic part AV is the
largest subspace on which phi is invertible; it equals im(phi^dim) and
is complementary to the generalized kernel gker phi = ker(phi^dim).
The canonical projection omega projects V onto AV along gker phi.
Shift equivalences between two such spaces induce isomorphisms of the
algebraic parts, which is what makes the downstream indices well
defined.
"""

from .errors import (
    FieldMismatch, InternalInconsistency, NotEquivariant, NotExact,
    NotInvertible,
)
from .scalar_linalg import (
    Matrix, image_basis, inverse, kernel_basis, rank, restricted_inverse,
    solve_matrix,
)


class EndoSpace:
    """A based vector space with an endomorphism phi."""

    __slots__ = ("field", "dim", "phi")

    def __init__(self, phi):
        assert phi.rows == phi.cols
        self.field = phi.field
        self.dim = phi.rows
        self.phi = phi

    def __repr__(self):
        return "EndoSpace(dim=%d, %r)" % (self.dim, self.field)


class CanonicalDecomposition:
    """V = gker phi (+) AV with the projection omega onto AV.

    algebraic_basis, gker_basis: columns in ambient coordinates.
    omega: ambient -> AV-coordinates (rows indexed by algebraic_basis).
    phi_on_A: phi restricted to AV, in algebraic_basis coordinates.
    """

    __slots__ = ("space", "algebraic_basis", "gker_basis", "omega",
                 "phi_on_A")

    def __init__(self, space, algebraic_basis, gker_basis, omega, phi_on_A):
        self.space = space
        self.algebraic_basis = algebraic_basis
        self.gker_basis = gker_basis
        self.omega = omega
        self.phi_on_A = phi_on_A

    @property
    def alg_dim(self):
        return self.algebraic_basis.cols

    def omega_ambient(self):
        """omega as an ambient V -> V projection matrix."""
        return self.algebraic_basis * self.omega


def algebraic_part(E):
    """Canonical decomposition of (V, phi)."""
    phi_d = E.phi.power(E.dim)
    A = image_basis(phi_d)
    G = kernel_basis(phi_d)
    assert A.cols + G.cols == E.dim
    basis = A.hstack(G)
    # coords of ambient vectors in the (A | G) basis; the A-block rows
    # give omega since omega kills gker and is the identity on AV
    coords = solve_matrix(basis, Matrix.identity(E.field, E.dim))
    if coords is None or rank(basis) < E.dim:
        raise InternalInconsistency("AV and gker do not span V")
    omega = Matrix(E.field, A.cols, E.dim,
                   [{r: v for r, v in col.items() if r < A.cols}
                    for col in coords.data])
    if A.cols:
        phi_on_A = solve_matrix(A, E.phi * A)
        if phi_on_A is None:
            raise InternalInconsistency("phi does not preserve AV")
        if rank(phi_on_A) < A.cols:
            raise InternalInconsistency("phi not invertible on AV")
    else:
        phi_on_A = Matrix.zero(E.field, 0, 0)
    dec = CanonicalDecomposition(E, A, G, omega, phi_on_A)
    # omega restricted to AV is the identity
    assert dec.omega * A == Matrix.identity(E.field, A.cols)
    assert (dec.omega * G).is_zero()
    return dec


def is_algebraic(E, v):
    """True iff v lies in AV = im(phi^dim).  v: list or sparse dict."""
    from .scalar_linalg import in_span
    dec = algebraic_part(E)
    f = E.field
    if not isinstance(v, dict):
        if len(v) != E.dim:
            raise FieldMismatch("vector length %d, dim %d"
                                % (len(v), E.dim))
        v = {i: f.of(x) for i, x in enumerate(v) if f.of(x) != 0}
    return in_span(dec.algebraic_basis, v)


class ShiftEquivalence:
    """Maps rho: V -> V', sigma: V' -> V with lag m."""

    __slots__ = ("src", "dst", "rho", "sigma", "m")

    def __init__(self, src, dst, rho, sigma, m):
        assert rho.rows == dst.dim and rho.cols == src.dim
        assert sigma.rows == src.dim and sigma.cols == dst.dim
        assert m >= 0
        self.src = src
        self.dst = dst
        self.rho = rho
        self.sigma = sigma
        self.m = m


def verify_shift_equivalence(se):
    """Check the four identities; returns (ok, report string)."""
    if se.src.field != se.dst.field:
        raise FieldMismatch("shift equivalence across different fields")
    phi, phi2 = se.src.phi, se.dst.phi
    if se.rho * phi != phi2 * se.rho:
        return False, "rho not equivariant: rho.phi != phi'.rho"
    if se.sigma * phi2 != phi * se.sigma:
        return False, "sigma not equivariant: sigma.phi' != phi.sigma"
    if se.sigma * se.rho != phi.power(se.m):
        return False, "sigma.rho != phi^m"
    if se.rho * se.sigma != phi2.power(se.m):
        return False, "rho.sigma != phi'^m"
    return True, "valid"


def induced_iso_on_algebraic(se, dec_src=None, dec_dst=None):
    """rho restricted to algebraic parts, AV-coords to AV'-coords.

    Verified invertible, with inverse (phi|_AV)^-m composed with sigma
    as in the proof that shift equivalent spaces share their algebraic
    part.
    """
    ok, report = verify_shift_equivalence(se)
    if not ok:
        raise NotEquivariant(report)
    dec_src = dec_src or algebraic_part(se.src)
    dec_dst = dec_dst or algebraic_part(se.dst)
    iso = dec_dst.omega * (se.rho * dec_src.algebraic_basis)
    if dec_src.alg_dim != dec_dst.alg_dim or \
            (iso.cols and rank(iso) < iso.cols):
        raise NotInvertible("rho does not carry AV isomorphically to AV'")
    if iso.cols:
        # inverse formula: (phi|_AV)^-m . sigma, restricted to AV'
        phiA_inv_m = inverse(dec_src.phi_on_A).power(se.m)
        sigma_alg = dec_src.omega * (se.sigma * dec_dst.algebraic_basis)
        expected_inv = phiA_inv_m * sigma_alg
        if iso * expected_inv != Matrix.identity(se.src.field, iso.rows):
            raise InternalInconsistency("inverse formula for induced iso")
    return iso


def check_algebraic_exactness(E1, alpha1, E2, alpha2, E3):
    """Exactness of AV1 -> AV2 -> AV3 given exactness of V1 -> V2 -> V3.

    Preconditions (checked): alpha1, alpha2 equivariant; im alpha1 =
    ker alpha2.  The restricted sequence is then exact; a failure is an
    implementation bug.
    """
    if not (E1.field == E2.field == E3.field):
        raise FieldMismatch("mixed fields in sequence")
    if alpha1 * E1.phi != E2.phi * alpha1:
        raise NotEquivariant("alpha1 not equivariant")
    if alpha2 * E2.phi != E3.phi * alpha2:
        raise NotEquivariant("alpha2 not equivariant")
    from .scalar_linalg import same_span
    im1 = image_basis(alpha1)
    ker2 = kernel_basis(alpha2)
    if im1.cols != ker2.cols or not same_span(im1, ker2):
        raise NotExact("im alpha1 != ker alpha2")
    d1, d2, d3 = algebraic_part(E1), algebraic_part(E2), algebraic_part(E3)
    a1 = d2.omega * (alpha1 * d1.algebraic_basis)
    a2 = d3.omega * (alpha2 * d2.algebraic_basis)
    if not (a2 * a1).is_zero():
        raise InternalInconsistency("restricted composition nonzero")
    im_a1 = image_basis(a1)
    ker_a2 = kernel_basis(a2)
    if im_a1.cols != ker_a2.cols or \
            (im_a1.cols and not same_span(im_a1, ker_a2)):
        raise InternalInconsistency("algebraic parts not exact")
    return True
