#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmlat/involutions.hpp"
#include "cmlat/roots.hpp"

namespace cmlat {

// Node hyperplanes through x together with the permutation alpha induces on
// them.  Representatives are relabeled: swapped pairs first, adjacent
// (indices 2t, 2t+1), fixed nodes last; ties broken by coordinate order.
struct NodeStructure {
    std::vector<std::vector<long>> reps;
    std::vector<size_t> perm;  // involution of {0..k-1} in the relabeled order
    size_t a = 0;              // 2-cycles
    size_t b = 0;              // fixed nodes
    size_t k() const { return reps.size(); }
};

NodeStructure node_structure(const HermitianLattice& lat, const KVector& x,
                             const AntiUnitaryInvolution& alpha);

// Class of an isometry in G(x) = <[phi_r] : r node at x> modulo torsion
// scalars: u * g = prod_j phi_{r_j}^{i_j} against the canonical
// nodes_at_point order.
struct LocalGroupElement {
    std::vector<long> exponents;  // reduced mod m
    FieldElement scalar;          // the torsion unit u
};

std::optional<LocalGroupElement> membership_in_local_group(
    const HermitianLattice& lat, const KVector& x, const KMatrix& g);

// (x, alpha) ~ (y, beta): same point of CH^n and beta o alpha in G(x).
bool decide_glued(const HermitianLattice& lat, const KVector& x,
                  const AntiUnitaryInvolution& alpha, const KVector& y,
                  const AntiUnitaryInvolution& beta);

// Number of involutions gluing to alpha at x: m^(a+b), cross-checked by
// iterating all m^k exponent vectors and validating each candidate.
struct EquivalentCount {
    size_t k = 0, a = 0, b = 0;
    mpz_class closed_form;
    mpz_class brute;
    bool agree = false;
};

EquivalentCount equivalent_involution_count(const HermitianLattice& lat,
                                            const KVector& x,
                                            const AntiUnitaryInvolution& alpha);

// m^a real-ball sheets through the image of x.
mpz_class sheet_count(const HermitianLattice& lat, const KVector& x,
                      const AntiUnitaryInvolution& alpha);

struct RelationReport {
    size_t sample_count = 0;
    bool reflexive = true, symmetric = true, transitive = true;
    std::vector<std::string> violations;
    bool ok() const { return reflexive && symmetric && transitive; }
};

// Equivalence-relation axioms of decide_glued over a finite sample.
RelationReport relation_properties_check(
    const HermitianLattice& lat,
    const std::vector<std::pair<KVector, AntiUnitaryInvolution>>& samples);

// Canonical representative of t = zeta_{2m}^j * r (r >= 0) modulo <zeta_m>:
// zeta_{2^(e+1)}^epsilon * r with e = v_2(m).  The exponent arrives as the
// rational j_num/j_den, which must be an integer for t^m to be real.
struct TorsionNormalForm {
    int epsilon = 0;
    std::string tag;  // "r" or "zeta_<2^(e+1)>*r"
};

TorsionNormalForm torsion_normal_form(unsigned m, long j_num, long j_den,
                                      bool negative_magnitude);

}  // namespace cmlat
