#include <doctest.h>

#include "cmlat/cm_field.hpp"
#include "cmlat/errors.hpp"
#include "cmlat/linalg.hpp"

using namespace cmlat;

namespace {

FieldElement el(const CMField& f, std::vector<mpq_class> c) {
    c.resize(f.degree(), 0);
    return FieldElement(f, std::move(c));
}

// Tr(eta^-1 w_i w_j) on the power basis; unimodular exactly when eta
// generates the different.
mpz_class dual_pairing_det(const CMField& f) {
    unsigned D = f.degree();
    FieldElement etainv = f.eta().inverse();
    ZMatrix M(D, std::vector<mpz_class>(D));
    for (unsigned i = 0; i < D; ++i)
        for (unsigned j = 0; j < D; ++j) {
            std::vector<mpq_class> ci(D, 0), cj(D, 0);
            ci[i] = 1;
            cj[j] = 1;
            mpq_class t = trace_to_Q(etainv * FieldElement(f, ci) * FieldElement(f, cj));
            REQUIRE(t.get_den() == 1);
            M[i][j] = t.get_num();
        }
    return det_integer(M);
}

}  // namespace

TEST_CASE("field constants for the small imaginary quadratic fields") {
    const CMField& q3 = CMField::get(FieldKind::ImagQuadratic, 3);
    CHECK(q3.degree() == 2);
    CHECK(q3.real_degree() == 1);
    CHECK(q3.torsion_order() == 6);
    CHECK(q3.two_adic_valuation_of_torsion() == 1);

    const CMField& q7 = CMField::get(FieldKind::ImagQuadratic, 7);
    CHECK(q7.torsion_order() == 2);
    const CMField& q5 = CMField::get(FieldKind::ImagQuadratic, 5);
    CHECK(q5.torsion_order() == 2);
    const CMField& q11 = CMField::get(FieldKind::ImagQuadratic, 11);
    CHECK(q11.torsion_order() == 2);
}

TEST_CASE("field constants for the small cyclotomic fields") {
    const CMField& c3 = CMField::get(FieldKind::Cyclotomic, 3);
    CHECK(c3.degree() == 2);
    CHECK(c3.real_degree() == 1);
    CHECK(c3.torsion_order() == 6);

    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    CHECK(c5.degree() == 4);
    CHECK(c5.real_degree() == 2);
    CHECK(c5.torsion_order() == 10);
    CHECK(c5.two_adic_valuation_of_torsion() == 1);

    const CMField& c7 = CMField::get(FieldKind::Cyclotomic, 7);
    CHECK(c7.degree() == 6);
    CHECK(c7.real_degree() == 3);
    CHECK(c7.torsion_order() == 14);
}

TEST_CASE("constructor rejects bad parameters") {
    CHECK_THROWS_AS(CMField::get(FieldKind::Cyclotomic, 4), DomainError);
    CHECK_THROWS_AS(CMField::get(FieldKind::Cyclotomic, 2), DomainError);
    CHECK_THROWS_AS(CMField::get(FieldKind::ImagQuadratic, 9), DomainError);
    CHECK_THROWS_AS(CMField::get(FieldKind::Cyclotomic, 3, 1), DomainError);
    CHECK_THROWS_AS(CMField::get(FieldKind::Cyclotomic, 5, 2), DomainError);
    CHECK_THROWS_AS(CMField::get(FieldKind::ImagQuadratic, 7, 1), DomainError);
}

TEST_CASE("power basis arithmetic satisfies the defining relations") {
    const CMField& q3 = CMField::get(FieldKind::ImagQuadratic, 3);
    FieldElement w = FieldElement::theta(q3);
    CHECK(w * w == w - FieldElement::one(q3));  // w^2 - w + 1 = 0

    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    FieldElement z = FieldElement::theta(c5);
    FieldElement z4 = z * z * z * z;
    CHECK(z4 * z == FieldElement::one(c5));
    CHECK(el(c5, {1}) + z + z * z + z * z * z + z4 == FieldElement::zero(c5));
}

TEST_CASE("inverse and conjugation round-trip") {
    const CMField& c7 = CMField::get(FieldKind::Cyclotomic, 7);
    FieldElement a = el(c7, {1, -2, 0, 3, 0, mpq_class(1, 2)});
    CHECK(a * a.inverse() == FieldElement::one(c7));
    CHECK(a.conj().conj() == a);
    CHECK((a * a.conj()).is_real());
    CHECK(norm_to_F(a).is_real());
    CHECK_THROWS_AS(FieldElement::zero(c7).inverse(), DomainError);
}

TEST_CASE("integrality and reality predicates") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    FieldElement mu = el(c5, {-1, 0, -1, -1});  // zeta + zeta^-1
    CHECK(mu.is_integral());
    CHECK(mu.is_real());
    CHECK(!mu.is_rational());
    CHECK(!FieldElement::theta(c5).is_real());
    CHECK(el(c5, {mpq_class(1, 3)}).is_rational());
    CHECK(!el(c5, {mpq_class(1, 3)}).is_integral());
}

TEST_CASE("eta is integral, anti-fixed, and generates the different") {
    for (auto [kind, p] : {std::pair{FieldKind::ImagQuadratic, 3u},
                           {FieldKind::ImagQuadratic, 5u},
                           {FieldKind::ImagQuadratic, 7u},
                           {FieldKind::ImagQuadratic, 11u},
                           {FieldKind::Cyclotomic, 3u},
                           {FieldKind::Cyclotomic, 5u},
                           {FieldKind::Cyclotomic, 7u}}) {
        const CMField& f = CMField::get(kind, p);
        CAPTURE((int)kind);
        CAPTURE(p);
        CHECK(f.eta().is_integral());
        CHECK(f.eta().conj() == -f.eta());
        mpz_class d = dual_pairing_det(f);
        CHECK((d == 1 || d == -1));
    }
}

TEST_CASE("eta in the quadratic case is the ramified square root") {
    const CMField& q3 = CMField::get(FieldKind::ImagQuadratic, 3);
    FieldElement eta = q3.eta();
    CHECK(eta * eta == el(q3, {-3}));
    const CMField& q5 = CMField::get(FieldKind::ImagQuadratic, 5);
    CHECK(q5.eta() * q5.eta() == el(q5, {-20}));  // 2*theta with theta^2 = -5
    const CMField& q11 = CMField::get(FieldKind::ImagQuadratic, 11);
    CHECK(q11.eta() * q11.eta() == el(q11, {-11}));
}

TEST_CASE("torsion units form a cyclic group generated by zeta") {
    for (auto [kind, p] : {std::pair{FieldKind::ImagQuadratic, 3u},
                           {FieldKind::ImagQuadratic, 7u},
                           {FieldKind::Cyclotomic, 3u},
                           {FieldKind::Cyclotomic, 5u},
                           {FieldKind::Cyclotomic, 7u}}) {
        const CMField& f = CMField::get(kind, p);
        unsigned m = f.torsion_order();
        const auto& tu = f.torsion_units();
        REQUIRE(tu.size() == m);
        FieldElement pw = FieldElement::one(f);
        for (unsigned i = 0; i < m; ++i) {
            CHECK(tu[i] == pw);
            CHECK(norm_to_F(tu[i]) == FieldElement::one(f));
            pw = pw * f.zeta();
        }
        CHECK(pw == FieldElement::one(f));               // zeta^m = 1
        CHECK(tu[m / 2] == -FieldElement::one(f));       // zeta^(m/2) = -1
    }
}

TEST_CASE("traces of basis elements") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    CHECK(trace_to_Q(FieldElement::one(c5)) == 4);
    CHECK(trace_to_Q(FieldElement::theta(c5)) == -1);
    const CMField& q7 = CMField::get(FieldKind::ImagQuadratic, 7);
    CHECK(trace_to_Q(FieldElement::one(q7)) == 2);
    CHECK(trace_to_Q(q7.eta()) == 0);
    CHECK(trace_to_Q(el(c5, {0, 1, 1, 1})) == -3);
}

TEST_CASE("trace pairing gram is symmetric and integral") {
    const CMField& c7 = CMField::get(FieldKind::Cyclotomic, 7);
    const auto& g = c7.trace_pairing_gram();
    REQUIRE(g.size() == 6);
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = 0; j < 6; ++j) {
            CHECK(g[i][j] == g[j][i]);
            CHECK(g[i][j].get_den() == 1);
        }
}

TEST_CASE("residues modulo the ramified prime") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    CHECK(residue_mod_ramified_prime(FieldElement::theta(c5)) == 1);
    CHECK(residue_mod_ramified_prime(el(c5, {7})) == 2);
    CHECK(residue_mod_ramified_prime(el(c5, {-1})) == 4);
    FieldElement mu = el(c5, {-1, 0, -1, -1});
    CHECK(residue_mod_ramified_prime(mu) == 2);  // 2 cos is 1 + 1 mod (1 - zeta)

    const CMField& q3 = CMField::get(FieldKind::ImagQuadratic, 3);
    CHECK(residue_mod_ramified_prime(FieldElement::theta(q3)) == 2);  // 2w = 1 + sqrt(-3)

    CHECK_THROWS_AS(residue_mod_ramified_prime(el(c5, {mpq_class(1, 2)})), DomainError);
}

TEST_CASE("certified signs of real elements") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    FieldElement mu = el(c5, {-1, 0, -1, -1});
    CHECK(certified_sign(mu, 1) == 1);   // 2 cos(2 pi / 5) > 0
    CHECK(certified_sign(mu, 2) == -1);  // 2 cos(4 pi / 5) < 0
    CHECK(certified_sign(FieldElement::zero(c5), 1) == 0);
    CHECK(certified_sign(el(c5, {-3}), 2) == -1);

    // mu^2 + mu - 1 = 0: symbolic zero must be detected, not refined forever
    FieldElement rel = mu * mu + mu - FieldElement::one(c5);
    CHECK(certified_sign(rel, 1) == 0);
    CHECK(certified_sign(rel, 2) == 0);

    const CMField& c7 = CMField::get(FieldKind::Cyclotomic, 7);
    FieldElement z = FieldElement::theta(c7);
    FieldElement mu7 = z + z.conj();
    CHECK(certified_sign(mu7, 1) == 1);
    CHECK(certified_sign(mu7, 2) == -1);
    CHECK(certified_sign(mu7, 3) == -1);

    CHECK_THROWS_AS(certified_sign(z, 1), DomainError);  // not real
    CHECK_THROWS_AS(certified_sign(mu, 3), DomainError);  // only g embeddings
}

TEST_CASE("embedding enclosures surround the true values") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    FieldElement mu = el(c5, {-1, 0, -1, -1});
    EmbeddingValue v1 = embed(mu, 1);
    // (sqrt(5) - 1) / 2 = 0.61803...
    CHECK(v1.re.lower() < 0.61804);
    CHECK(v1.re.upper() > 0.61803);
    CHECK(v1.im.contains_zero());
    EmbeddingValue v2 = embed(mu, 2);
    CHECK(v2.re.upper() < -1.61803);
    CHECK(v2.re.lower() > -1.61804);

    // the orientation at index 1 picks zeta -> e^(2 pi i / 5)
    EmbeddingValue z1 = embed(FieldElement::theta(c5), 1);
    CHECK(z1.re.lower() > 0.3090);
    CHECK(z1.re.upper() < 0.3091);
    CHECK(z1.im.lower() > 0.9510);
    CHECK(z1.im.upper() < 0.9511);
}

TEST_CASE("cm orientations mark which of each conjugate pair is preferred") {
    const CMField& c5 = CMField::get(FieldKind::Cyclotomic, 5);
    CHECK(c5.cm_orientation(1) == 1);
    CHECK(c5.cm_orientation(2) == -1);
    const CMField& q7 = CMField::get(FieldKind::ImagQuadratic, 7);
    CHECK(q7.cm_orientation(1) == 1);
}

TEST_CASE("precision cap is sane") {
    CHECK(precision_cap() >= 64);
}
