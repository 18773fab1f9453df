#pragma once

#include <string>
#include <vector>

#include "cmlat/hermitian.hpp"

namespace cmlat {

// Anti-unitary involution alpha(x) = A * sigma(x), with sigma applied
// entrywise to coordinates.  The semilinearity alpha(b*x) = sigma(b)*alpha(x)
// is automatic from this encoding; the matrix carries the two nontrivial
// identities (involution and isometry), checked by validate_involution.
struct AntiUnitaryInvolution {
    HermitianLattice lat;
    KMatrix A;

    KVector operator()(const KVector& x) const;
};

struct InvolutionVerdict {
    bool valid = true;
    std::string failure;  // first failing identity, empty when valid
};

// Exact check of A * sigma(A) = I and h(alpha e_i, alpha e_j) = sigma(h(e_i, e_j)).
InvolutionVerdict validate_involution(const HermitianLattice& lat, const KMatrix& A);

// Validates and wraps; throws DomainError on failure.
AntiUnitaryInvolution make_involution(const HermitianLattice& lat, KMatrix A);

// diag(1, -1 x i, 1 x (n - i)) on a rank n+1 lattice, or its global negative.
AntiUnitaryInvolution standard_involution(const HermitianLattice& lat, size_t i,
                                          bool negated = false);

// g * alpha * g^{-1} for an isometry g of the lattice.
AntiUnitaryInvolution conjugate_by(const KMatrix& g, const AntiUnitaryInvolution& alpha);

enum class SquareClass { Square, NonSquare, Zero };

const char* square_class_name(SquareClass c);

// Reduction of (Lambda, h, alpha) modulo the ramified prime: W = Lambda/pLambda
// over F_p, d = dim of the fixed subspace of the reduced alpha, t = det of the
// reduced form restricted there.  Determinants are basis-dependent up to
// squares, so t is reported as a square class; the raw value for the computed
// kernel basis comes along for reproducibility.
struct InvariantPair {
    size_t d = 0;
    SquareClass t_class = SquareClass::Zero;
    unsigned long t_raw = 0;
};

InvariantPair conjugacy_invariants(const AntiUnitaryInvolution& alpha);

// O_F-basis of the fixed module {v in Lambda : alpha(v) = v} and the
// restriction of h to it.  Entries of the Gram are elements of O_F.
struct FixedLattice {
    std::vector<KVector> basis;
    std::vector<std::vector<FieldElement>> gram;
    std::string note;
};

FixedLattice fixed_lattice_gram(const AntiUnitaryInvolution& alpha);

// Coordinates of a totally real element against the power basis of
// F = Q(mu): a = sum c_l mu^l, l < [F:Q].
std::vector<mpq_class> real_subfield_coords(const FieldElement& a);

}  // namespace cmlat
