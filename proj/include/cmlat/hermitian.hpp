#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmlat/linalg.hpp"

namespace cmlat {

// Free O_K-lattice of rank n+1 with an integral hermitian form, linear in the
// first argument.  The Gram matrix satisfies H = conj(H)^T and is
// nondegenerate.  Signatures at all real places are computed eagerly from one
// exact symmetric elimination, so instances are immutable and cheap to share.
class HermitianLattice {
public:
    HermitianLattice(const CMField& f, KMatrix gram);
    static HermitianLattice diagonal(const CMField& f, const KVector& diag);

    const CMField& field() const { return *field_; }
    size_t rank() const { return gram_.rows(); }
    const KMatrix& gram() const { return gram_; }

    // h(x, y) for coordinate vectors over K
    FieldElement inner(const KVector& x, const KVector& y) const;

    // (positives, negatives) at embedding k = 1..g
    const std::vector<std::pair<unsigned, unsigned>>& signatures() const {
        return signatures_;
    }
    bool admissible() const { return admissible_; }
    // 1-based embedding index carrying signature (n, 1); 0 when not admissible
    unsigned hyperbolic_embedding() const { return hyperbolic_; }

private:
    const CMField* field_;
    KMatrix gram_;
    std::vector<std::pair<unsigned, unsigned>> signatures_;
    bool admissible_ = false;
    unsigned hyperbolic_ = 0;
};

struct AdmissibilityReport {
    bool admissible;
    std::vector<std::pair<unsigned, unsigned>> signatures;
    unsigned hyperbolic_index;  // 1-based; 0 if absent or not unique
    std::string note;
};

AdmissibilityReport check_admissible(const HermitianLattice& lat);

// The Z-bilinear form E(x, y) = Tr_{K/Q}(eta^{-1} h(x, y)) on the Z-basis
// {w_j e_i} ordered lexicographically by (i, j).
ZMatrix alternating_form(const HermitianLattice& lat);

// eta^{-1} * Gram: the skew-hermitian form the alternating form determines.
KMatrix skew_from_hermitian(const HermitianLattice& lat);

// Recover the skew-hermitian Gram from E via the trace pairing.
KMatrix skew_hermitian_from_alternating(const CMField& f, const ZMatrix& E,
                                        size_t rank);

// Same recovery along the two closed formulas, used as independent
// cross-checks of the trace-pairing route.
KMatrix skew_via_quadratic_identity(const CMField& f, const ZMatrix& E, size_t rank);
KMatrix skew_via_cyclotomic_average(const CMField& f, const ZMatrix& E, size_t rank);

// Check T^* = -T and that eta * T is integral.
bool is_skew_hermitian(const CMField& f, const KMatrix& T, std::string* why = nullptr);

// Gram of (a, b) -> Tr_{K/Q}(eta^{-1} a conj(b)) on the power basis of O_K.
ZMatrix polarization_gram(const CMField& f);

}  // namespace cmlat
