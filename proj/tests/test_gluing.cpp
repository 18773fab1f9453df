#include <doctest.h>

#include "cmlat/errors.hpp"
#include "cmlat/gluing.hpp"

using namespace cmlat;

namespace {

HermitianLattice eisenstein_ball() {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 3);
    return HermitianLattice::diagonal(
        f, {-FieldElement::one(f), FieldElement::one(f), FieldElement::one(f)});
}

KVector base_point(const HermitianLattice& lat) {
    KVector x = kvector_zero(lat.field(), lat.rank());
    x[0] = FieldElement::one(lat.field());
    return x;
}

KMatrix swap12(const CMField& f) {
    KMatrix g(f, 3, 3);
    g.at(0, 0) = FieldElement::one(f);
    g.at(1, 2) = FieldElement::one(f);
    g.at(2, 1) = FieldElement::one(f);
    return g;
}

AntiUnitaryInvolution phi_alpha(const HermitianLattice& lat, long i, long j) {
    // phi_{e1}^i phi_{e2}^j composed with plain conjugation
    const CMField& f = lat.field();
    KMatrix A = KMatrix::identity(f, 3);
    A.at(1, 1) = f.torsion_units()[((i % 6) + 6) % 6];
    A.at(2, 2) = f.torsion_units()[((j % 6) + 6) % 6];
    return make_involution(lat, A);
}

}  // namespace

TEST_CASE("node structure under plain conjugation") {
    HermitianLattice lat = eisenstein_ball();
    KVector x = base_point(lat);
    NodeStructure ns = node_structure(lat, x, standard_involution(lat, 0));
    CHECK(ns.k() == 2);
    CHECK(ns.a == 0);
    CHECK(ns.b == 2);
    CHECK(ns.perm == std::vector<size_t>{0, 1});
    CHECK(ns.reps == std::vector<std::vector<long>>{{0, 0, -1, -1, 0, 0},
                                                    {0, 0, 0, 0, -1, -1}});
}

TEST_CASE("node structure with a genuine two-cycle") {
    HermitianLattice lat = eisenstein_ball();
    const CMField& f = lat.field();
    KVector x = base_point(lat);
    AntiUnitaryInvolution sw = make_involution(lat, swap12(f));
    NodeStructure ns = node_structure(lat, x, sw);
    CHECK(ns.a == 1);
    CHECK(ns.b == 0);
    CHECK(ns.perm == std::vector<size_t>{1, 0});

    // relabeled list keeps swapped pairs adjacent
    KVector r0 = vector_from_coords(f, ns.reps[0], 3);
    KVector r1 = vector_from_coords(f, ns.reps[1], 3);
    CHECK(!same_hyperplane(lat, r0, r1));
    CHECK(same_hyperplane(lat, sw(r0), r1));
}

TEST_CASE("node structure requires a compatible involution") {
    HermitianLattice lat = eisenstein_ball();
    KVector y = kvector_zero(lat.field(), 3);
    y[0] = FieldElement::rational(lat.field(), 2);
    y[1] = FieldElement::one(lat.field());
    // alpha_1 sends (2,1,0) to (2,-1,0), which is no scalar multiple
    CHECK_THROWS_AS(node_structure(lat, y, standard_involution(lat, 1)),
                    DomainError);
}

TEST_CASE("membership in the local reflection group") {
    HermitianLattice lat = eisenstein_ball();
    const CMField& f = lat.field();
    KVector x = base_point(lat);

    // phi_{r}^1 for the first node: diagonal zeta_6 on slot 1
    KMatrix g = KMatrix::identity(f, 3);
    g.at(1, 1) = f.zeta();
    auto cls = membership_in_local_group(lat, x, g);
    REQUIRE(cls.has_value());
    CHECK(cls->exponents == std::vector<long>{1, 0});
    CHECK(cls->scalar == FieldElement::one(f));

    // a global torsion scalar is the empty word with the inverse multiplier
    KMatrix zg = KMatrix::identity(f, 3).scaled(f.zeta());
    auto triv = membership_in_local_group(lat, x, zg);
    REQUIRE(triv.has_value());
    CHECK(triv->exponents == std::vector<long>{0, 0});
    CHECK(triv->scalar == f.torsion_units()[5]);

    // the swap permutes the two node hyperplanes: not in the group
    CHECK(!membership_in_local_group(lat, x, swap12(f)).has_value());

    KMatrix notiso = KMatrix::identity(f, 3);
    notiso.at(1, 1) = FieldElement::rational(f, 2);
    CHECK_THROWS_AS(membership_in_local_group(lat, x, notiso), DomainError);
}

TEST_CASE("gluing decisions at the base point") {
    HermitianLattice lat = eisenstein_ball();
    const CMField& f = lat.field();
    KVector x = base_point(lat);
    AntiUnitaryInvolution a0 = standard_involution(lat, 0);

    CHECK(decide_glued(lat, x, a0, x, a0));
    CHECK(decide_glued(lat, x, a0, x, phi_alpha(lat, 1, 0)));
    CHECK(decide_glued(lat, x, a0, x, phi_alpha(lat, 4, 3)));

    // same point written with a different torsion representative
    KVector zx = x;
    zx[0] = f.zeta();
    CHECK(decide_glued(lat, x, a0, zx, a0));

    // the swap composed with conjugation is not glued to plain conjugation
    AntiUnitaryInvolution sw = make_involution(lat, swap12(f));
    CHECK(!decide_glued(lat, x, a0, x, sw));

    // different points are never glued
    KVector y = kvector_zero(f, 3);
    y[0] = FieldElement::rational(f, 2);
    y[1] = FieldElement::one(f);
    CHECK(!decide_glued(lat, x, a0, y, a0));

    // precondition: both involutions must fix their points
    CHECK_THROWS_AS(decide_glued(lat, y, standard_involution(lat, 1), x, a0),
                    DomainError);
}

TEST_CASE("equivalent involution counts and sheet counts") {
    HermitianLattice lat = eisenstein_ball();
    KVector x = base_point(lat);

    EquivalentCount ec =
        equivalent_involution_count(lat, x, standard_involution(lat, 0));
    CHECK(ec.k == 2);
    CHECK(ec.a == 0);
    CHECK(ec.b == 2);
    CHECK(ec.closed_form == 36);
    CHECK(ec.brute == 36);
    CHECK(ec.agree);
    CHECK(sheet_count(lat, x, standard_involution(lat, 0)) == 1);

    AntiUnitaryInvolution sw = make_involution(lat, swap12(lat.field()));
    EquivalentCount es = equivalent_involution_count(lat, x, sw);
    CHECK(es.a == 1);
    CHECK(es.b == 0);
    CHECK(es.closed_form == 6);
    CHECK(es.brute == 6);
    CHECK(es.agree);
    CHECK(sheet_count(lat, x, sw) == 6);
}

TEST_CASE("gluing is an equivalence relation on a mixed sample") {
    HermitianLattice lat = eisenstein_ball();
    const CMField& f = lat.field();
    KVector x = base_point(lat);
    KVector zx = x;
    zx[0] = f.zeta();

    std::vector<std::pair<KVector, AntiUnitaryInvolution>> samples = {
        {x, standard_involution(lat, 0)},
        {x, phi_alpha(lat, 1, 0)},
        {x, phi_alpha(lat, 0, 3)},
        {zx, standard_involution(lat, 0)},
        {zx, phi_alpha(lat, 5, 2)},
        {x, make_involution(lat, swap12(f))},
        {x, standard_involution(lat, 2)},
    };
    RelationReport rep = relation_properties_check(lat, samples);
    CHECK(rep.sample_count == samples.size());
    CHECK(rep.ok());
    CHECK(rep.violations.empty());
}

TEST_CASE("torsion exponents reduce to the binary normal form") {
    TorsionNormalForm nf = torsion_normal_form(6, 4, 1, false);
    CHECK(nf.epsilon == 0);
    CHECK(nf.tag == "r");

    nf = torsion_normal_form(6, 3, 1, false);
    CHECK(nf.epsilon == 1);
    CHECK(nf.tag == "zeta_4*r");

    // a negative magnitude shifts the exponent by m
    nf = torsion_normal_form(6, 1, 1, true);
    CHECK(nf.epsilon == 1);
    nf = torsion_normal_form(6, 0, 1, true);
    CHECK(nf.epsilon == 0);

    nf = torsion_normal_form(10, 7, 1, false);
    CHECK(nf.epsilon == 1);
    CHECK(nf.tag == "zeta_4*r");

    CHECK_THROWS_AS(torsion_normal_form(6, 1, 2, false), DomainError);
    CHECK_THROWS_AS(torsion_normal_form(6, 1, 0, false), DomainError);

    // j and j + m describe the same torsion class up to mu_m
    for (long j = 0; j < 12; ++j)
        CHECK(torsion_normal_form(6, j, 1, false).epsilon == (j % 2 + 2) % 2);
}
