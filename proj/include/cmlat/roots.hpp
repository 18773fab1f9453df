#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmlat/hermitian.hpp"

namespace cmlat {

// Coordinates of lattice vectors against the Z-basis {theta^j e_i}, ordered
// i-major: index i*degree + j.
KVector vector_from_coords(const CMField& f, const std::vector<long>& c, size_t rank);
std::vector<long> coords_from_vector(const KVector& v);

bool is_short_root(const HermitianLattice& lat, const KVector& r);

// Throws DomainError unless x is a nonzero integral vector with
// certified tau(h(x,x)) < 0 on an admissible lattice.
void require_negative_point(const HermitianLattice& lat, const KVector& x);

int configured_threads();

// The positive-definite majorant of h relative to a negative vector x:
//   q_+(v) = sum_{phi in Phi} h_phi(v,v) + 2|h_tau(v,x)|^2 / (-h_tau(x,x)),
// materialized on the Z-basis as a symmetric matrix of elements of F, so that
// q_+(v) = tau(W(v)) is decided by certified_sign with no irrational
// comparisons.
class Majorant {
public:
    Majorant(const HermitianLattice& lat, const KVector& x);

    unsigned tau() const { return tau_; }
    size_t dim() const { return dim_; }
    const FieldElement& entry(size_t a, size_t b) const { return W_[a * dim_ + b]; }

    FieldElement value(const std::vector<long>& c) const;  // W(v) in F

    // Midpoints of certified enclosures of tau(W_ab); the 2^-20 enumeration
    // margin dominates both the enclosure width and double rounding.
    std::vector<std::vector<double>> midpoint_gram(mpfr_prec_t prec = 128) const;

private:
    size_t dim_;
    unsigned tau_;
    std::vector<FieldElement> W_;
};

struct ShortRootList {
    std::vector<std::vector<long>> roots;  // canonical lex order, both signs
    std::string note;
    size_t candidates = 0;
    int threads = 1;
};

// All r in Lambda with h(r,r) = 1 and q_+(r) <= B.  Serial reference
// implementation and the OpenMP kernel produce identical output.
ShortRootList enumerate_short_roots_near(const HermitianLattice& lat,
                                         const KVector& x, const mpq_class& B);
ShortRootList enumerate_short_roots_near_serial(const HermitianLattice& lat,
                                                const KVector& x, const mpq_class& B);

// t = c*r with c*conj(c) = 1, i.e. H_r = H_t.
bool same_hyperplane(const HermitianLattice& lat, const KVector& r, const KVector& t);

// H_r and H_t intersect inside the ball: certified_sign(1 - N(h(r,t)), tau) = +1.
// Throws DomainError if the hyperplanes coincide.
bool hyperplanes_meet(const HermitianLattice& lat, const KVector& r, const KVector& t);

// Matrix of x -> x - (1 - zeta^i) h(x,r) r.
KMatrix reflection_matrix(const HermitianLattice& lat, const KVector& r, long i);

// One canonical representative (lex-least coordinate vector) per hyperplane
// through x, from exact kernel enumeration.
std::vector<std::vector<long>> nodes_at_point(const HermitianLattice& lat,
                                              const KVector& x);

struct AuditViolation {
    std::vector<long> r, t;
    std::string h_rt;
};

struct AuditReport {
    size_t root_count = 0;
    size_t pairs_checked = 0;  // unordered pairs with distinct hyperplanes
    size_t same_hyperplane_pairs = 0;
    size_t meeting_pairs = 0;
    std::vector<AuditViolation> violations;
};

// Tests every distinct-hyperplane pair of enumerated roots for the
// orthogonality property: meeting implies h(r,t) = 0.  base may be omitted for
// diagonal Gram matrices (e_0 is used); otherwise it must be supplied.
AuditReport orthogonality_audit(const HermitianLattice& lat, const mpq_class& B,
                                const KVector* base = nullptr);

// u = c*v for some c in K*; reports the ratio when asked.
bool proportional_over_K(const KVector& u, const KVector& v,
                         FieldElement* ratio = nullptr);

struct WordSampleCheck {
    bool fixed;               // w x = c x over K
    bool on_all_hyperplanes;  // h(x, r_j) = 0 for every root of the word
    bool agree;
};

// Per-sample check that the fixed locus of a word of reflections in pairwise
// orthogonal roots is the intersection of their hyperplanes.
std::vector<WordSampleCheck> fixed_locus_of_word(
    const HermitianLattice& lat,
    const std::vector<std::pair<KVector, long>>& word,
    const std::vector<KVector>& samples);

}  // namespace cmlat
