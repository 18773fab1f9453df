#pragma once

#include <gmpxx.h>

#include <array>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cmlat/interval.hpp"

namespace cmlat {

enum class FieldKind { ImagQuadratic, Cyclotomic };

class CMField;

// Element of O_K (or K) in the field's power basis, as exact rational
// coefficients.  Carries a pointer to its field; fields are process-lifetime
// singletons, so the pointer never dangles.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const CMField& f, std::vector<mpq_class> coeffs);

    static FieldElement zero(const CMField& f);
    static FieldElement one(const CMField& f);
    static FieldElement rational(const CMField& f, const mpq_class& q);
    static FieldElement theta(const CMField& f);  // the power-basis generator

    const CMField& field() const { return *field_; }
    bool attached() const { return field_ != nullptr; }
    const mpq_class& coeff(size_t j) const { return c_[j]; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement conj() const;      // the CM involution
    FieldElement inverse() const;   // throws DomainError on zero
    FieldElement scaled(const mpq_class& q) const;

    bool is_zero() const;
    bool is_integral() const;       // all coefficients in Z
    bool is_real() const;           // fixed by the CM involution
    bool is_rational() const;

    std::string str() const;        // diagnostic form, e.g. "1 - 2*t"

private:
    const CMField* field_ = nullptr;
    std::vector<mpq_class> c_;

    friend class CMField;
};

struct EmbeddingValue {
    RealInterval re, im;
};

// CM field K: either Q(sqrt(-p)) or Q(zeta_p) for an odd prime p, with its
// integral power basis, the CM involution, a fixed generator eta of the
// different with eta-bar = -eta, and a distinguished embedding index tau.
// Instances are immutable after construction and shared per (kind, p, tau).
class CMField {
public:
    static const CMField& get(FieldKind kind, unsigned p, unsigned tau_index = 0);

    FieldKind kind() const { return kind_; }
    unsigned p() const { return p_; }
    unsigned degree() const { return degree_; }
    unsigned real_degree() const { return g_; }          // [F : Q]
    unsigned torsion_order() const { return m_; }        // |mu_K|
    unsigned two_adic_valuation_of_torsion() const { return e_; }
    unsigned tau_index() const { return tau_index_; }    // 0-based, embedding k = tau_index+1

    const FieldElement& eta() const { return eta_; }
    const FieldElement& zeta() const { return zeta_; }   // generator of mu_K
    const std::vector<FieldElement>& torsion_units() const { return torsion_; }

    // Trace pairing Gram Tr(w_i * w_j) on the power basis.
    const std::vector<std::vector<mpq_class>>& trace_pairing_gram() const { return tp_gram_; }

    // Orientation sign of embedding k (1-based): +1 if theta -> e^{2*pi*i*k/p}
    // lies in the CM type, -1 if the conjugate does.
    int cm_orientation(unsigned k) const;

    bool operator==(const CMField& o) const { return this == &o; }

private:
    CMField(FieldKind kind, unsigned p, unsigned tau_index);

    FieldKind kind_;
    unsigned p_, degree_, g_, m_, e_, tau_index_;
    std::vector<std::vector<mpq_class>> redrows_;        // theta^t for t in [D, 2D-2]
    std::vector<std::vector<mpq_class>> sigma_basis_;    // conj(theta^j)
    std::vector<mpq_class> trace_basis_;                 // Tr(theta^j)
    std::vector<unsigned long> residue_basis_;           // theta^j mod the ramified prime
    std::vector<std::vector<mpq_class>> tp_gram_;
    std::vector<mpq_class> real_minpoly_;                // cyclotomic: monic minpoly of mu
    FieldElement eta_, zeta_;
    std::vector<FieldElement> torsion_;
    std::vector<int> orientations_;

    // lazily built cos/sin tables per precision-ladder level, shared by threads
    struct TrigTables;
    static constexpr int ladder_levels_ = 11;            // 64 << i, i = 0..10
    mutable std::array<std::once_flag, ladder_levels_> trig_once_;
    mutable std::array<std::shared_ptr<const TrigTables>, ladder_levels_> trig_;
    const TrigTables& trig_level(int level) const;

    friend class FieldElement;
    friend mpq_class trace_to_Q(const FieldElement& a);
    friend unsigned long residue_mod_ramified_prime(const FieldElement& a);
    friend int certified_sign(const FieldElement& a, unsigned k);
    friend EmbeddingValue embed(const FieldElement& a, unsigned k, mpfr_prec_t prec);
};

// Tr_{K/Q}(a).
mpq_class trace_to_Q(const FieldElement& a);

// Image of an integral element in O_K / p_ram = F_p, where p_ram is the unique
// ramified prime above p.
unsigned long residue_mod_ramified_prime(const FieldElement& a);

// Sign of the real number phi_k(a) for a in the real subfield F (1-based k).
// Exact zero is decided symbolically; otherwise interval refinement with a
// doubling precision ladder capped by CMLAT_PREC_CAP.
int certified_sign(const FieldElement& a, unsigned k);

// Certified enclosure of phi_k(a) for the CM-type representative of index k.
EmbeddingValue embed(const FieldElement& a, unsigned k, mpfr_prec_t prec = 128);

// a * conj(a), an element of F (totally nonnegative).
FieldElement norm_to_F(const FieldElement& a);

mpfr_prec_t precision_cap();

}  // namespace cmlat
