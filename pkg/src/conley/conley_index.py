"""The homological Conley index of a filtration pair.

CH_*(N/L) is the algebraic part of H_*(N/L, [L]) under the induced
endomorphism of the quotient map, together with the restriction of
that endomorphism (the index automorphism).  It is stored in the
pair's own coordinates; cross-pair statements go through
change_coordinates with a verified shift equivalence.
"""

from .errors import ConjugacyViolation
from .cubical_complex import closure, relative_complex
from .combinatorial_dynamics import quotient_chain_map
from .eventual_algebra import (
    EndoSpace, algebraic_part, induced_iso_on_algebraic,
)
from .homology_engine import homology, induced_map
from .scalar_linalg import Matrix, inverse, rank


class ConleyIndex:
    """Graded canonical decompositions of (H_q(N,L), (f_{N/L})_*)."""

    __slots__ = ("pair", "field", "complex", "H", "chain_maps", "phi",
                 "decomps")

    def __init__(self, pair, field, complex_, H, chain_maps, phi, decomps):
        self.pair = pair
        self.field = field
        self.complex = complex_
        self.H = H
        self.chain_maps = chain_maps
        self.phi = phi
        self.decomps = decomps

    def degrees(self):
        return sorted(self.decomps)

    def ch_dim(self, q):
        dec = self.decomps.get(q)
        return dec.alg_dim if dec else 0

    def ch_dims(self):
        return {q: self.ch_dim(q) for q in self.degrees() if self.ch_dim(q)}

    def phi_ch(self, q):
        """Index automorphism on CH_q, in CH-basis coordinates."""
        dec = self.decomps.get(q)
        if dec is None:
            return Matrix.zero(self.field, 0, 0)
        return dec.phi_on_A

    def ch_basis(self, q):
        """CH_q basis columns in H_q coordinates."""
        dec = self.decomps.get(q)
        if dec is None:
            return Matrix.zero(self.field, self.H.dim(q), 0)
        return dec.algebraic_basis

    def ch_project(self, q):
        """Projection H_q -> CH_q coordinates (kills the gker part)."""
        dec = self.decomps.get(q)
        if dec is None:
            return Matrix.zero(self.field, 0, self.H.dim(q))
        return dec.omega

    def report(self):
        out = {}
        for q in self.degrees():
            if self.ch_dim(q):
                out[q] = {"dim": self.ch_dim(q),
                          "phi": self.phi_ch(q).to_rows()}
        return out


def conley_index(F, pair, field):
    """Compute CH_*(N/L) and the index automorphism for a valid pair."""
    X = closure(pair.N)
    A = closure(pair.L)
    C = relative_complex(X, A, field)
    H = homology(C)
    chain_maps = quotient_chain_map(F, pair.N, pair.L, field)
    phi = induced_map(chain_maps, H, H, tag="index-endo")
    decomps = {}
    for q in sorted(H.dims()):
        dec = algebraic_part(EndoSpace(phi.matrix(q)))
        # phi is invertible on CH by construction
        assert dec.alg_dim == 0 or rank(dec.phi_on_A) == dec.alg_dim
        decomps[q] = dec
    return ConleyIndex(pair, field, C, H, chain_maps, phi, decomps)


def change_coordinates(idxA, idxB, se):
    """Per-degree isomorphism CH(A-pair) -> CH(B-pair) from a standard
    shift equivalence; verified to conjugate the index automorphisms."""
    out = {}
    degrees = sorted(set(idxA.decomps) | set(idxB.decomps))
    for q in degrees:
        dse = se.degree_se(q)
        dec_src = idxA.decomps.get(q)
        dec_dst = idxB.decomps.get(q)
        iso = induced_iso_on_algebraic(dse, dec_src, dec_dst)
        if iso.cols:
            lhs = iso * idxA.phi_ch(q)
            rhs = idxB.phi_ch(q) * iso
            if lhs != rhs:
                raise ConjugacyViolation(
                    "index automorphisms not conjugated in degree %d" % q)
            # sanity: the iso is invertible
            inverse(iso)
        out[q] = iso
    return out
