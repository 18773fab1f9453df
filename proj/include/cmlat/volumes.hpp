#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmlat/cm_field.hpp"

namespace cmlat {

// B_k by the defining recurrence; only even k is meaningful here.
mpq_class bernoulli(unsigned k);

// Independent evaluation through the double sum over falling powers, kept as
// a cross-check of the recurrence.
mpq_class bernoulli_double_sum(unsigned k);

// Coefficient c with covolume c * pi^r of PO of the even-rank form:
// c = (2^r + eps_r) / (2r)! * prod_{k<=r} |B_2k|, eps_r = +1 iff r = 0,1 mod 4.
struct VolumeResult {
    unsigned r = 0;
    mpq_class coefficient;
    std::string symbolic;  // "<coefficient>*pi^<r>"
    double value = 0;      // floating approximation of c * pi^r
};

VolumeResult vol_psi0_even(unsigned r);

// lambda_a = zeta^((1-a)/2) (zeta^a - 1)/(zeta - 1), the totally real
// cyclotomic unit; the fractional exponent is read in Z/p.
FieldElement cyclotomic_unit(unsigned p, unsigned a);

// Certified signs of a nonzero sigma-fixed element at the g real embeddings.
std::vector<int> sign_pattern(const FieldElement& lambda);

struct UnitCandidate {
    FieldElement lambda;
    std::vector<int> signs;
    unsigned long residue = 0;  // mod the ramified prime
    bool admissible = false;    // one positive sign, residue != p-1
    std::string note;
};

// Recomputes pattern and residue for a totally real unit of O_F; throws
// DomainError when lambda is not one.
UnitCandidate verify_unit(const FieldElement& lambda);

// First candidate +-prod lambda_a^{e_a} (graded lexicographic exponent order,
// positive sign first) with exactly one positive embedding sign and residue
// distinct from -1.  p = 3 returns -1 outright: with g = 1 the sign condition
// is vacuous and diag(1, ..., 1, -(-1)) is the intended form.
std::optional<UnitCandidate> search_admissible_unit(unsigned p, unsigned bound);

}  // namespace cmlat
