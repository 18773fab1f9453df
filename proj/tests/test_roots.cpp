#include <doctest.h>

#include <cstdlib>

#include "box_oracle.hpp"
#include "cmlat/errors.hpp"
#include "cmlat/roots.hpp"

using namespace cmlat;

namespace {

HermitianLattice eisenstein_ball() {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 3);
    return HermitianLattice::diagonal(
        f, {-FieldElement::one(f), FieldElement::one(f), FieldElement::one(f)});
}

HermitianLattice zeta5_ball() {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 5, 0);
    FieldElement mu(f, {-1, 0, -1, -1});
    return HermitianLattice::diagonal(
        f, {-mu, FieldElement::one(f), FieldElement::one(f)});
}

KVector base_point(const HermitianLattice& lat) {
    KVector x = kvector_zero(lat.field(), lat.rank());
    x[0] = FieldElement::one(lat.field());
    return x;
}

KVector slots(const HermitianLattice& lat, std::vector<long> s) {
    KVector x = kvector_zero(lat.field(), lat.rank());
    for (size_t i = 0; i < s.size(); ++i)
        x[i] = FieldElement::rational(lat.field(), s[i]);
    return x;
}

}  // namespace

TEST_CASE("coordinate round-trip") {
    HermitianLattice lat = zeta5_ball();
    std::vector<long> c = {1, -2, 0, 3, 0, 0, 5, 0, 1, 1, 1, 1};
    KVector v = vector_from_coords(lat.field(), c, 3);
    CHECK(coords_from_vector(v) == c);
}

TEST_CASE("negative point preconditions") {
    HermitianLattice lat = eisenstein_ball();
    CHECK_NOTHROW(require_negative_point(lat, base_point(lat)));
    CHECK_NOTHROW(require_negative_point(lat, slots(lat, {2, 1, 0})));
    CHECK_THROWS_AS(require_negative_point(lat, slots(lat, {0, 1, 0})), DomainError);
    CHECK_THROWS_AS(require_negative_point(lat, slots(lat, {0, 0, 0})), DomainError);
    KVector half = base_point(lat);
    half[0] = FieldElement::rational(lat.field(), mpq_class(1, 2));
    CHECK_THROWS_AS(require_negative_point(lat, half), DomainError);
}

TEST_CASE("majorant evaluates to slot norm sums on the standard ball") {
    HermitianLattice lat = eisenstein_ball();
    Majorant q(lat, base_point(lat));
    CHECK(q.tau() == 1);
    CHECK(q.dim() == 6);
    // q_+(v) = N(v0) + N(v1) + N(v2); at (1,1,1) that is 3
    CHECK(q.value({1, 0, 1, 0, 1, 0}) ==
          FieldElement::rational(lat.field(), 3));
    // 1 - zeta has norm 3
    CHECK(q.value({0, 0, 1, -1, 0, 0}) ==
          FieldElement::rational(lat.field(), 3));
}

TEST_CASE("twelve roots at the smallest interesting bound") {
    HermitianLattice lat = eisenstein_ball();
    ShortRootList rl = enumerate_short_roots_near(lat, base_point(lat), 2);
    std::vector<std::vector<long>> expected = {
        {0, 0, -1, -1, 0, 0}, {0, 0, -1, 0, 0, 0}, {0, 0, 0, -1, 0, 0},
        {0, 0, 0, 0, -1, -1}, {0, 0, 0, 0, -1, 0}, {0, 0, 0, 0, 0, -1},
        {0, 0, 0, 0, 0, 1},  {0, 0, 0, 0, 1, 0},  {0, 0, 0, 0, 1, 1},
        {0, 0, 0, 1, 0, 0},  {0, 0, 1, 0, 0, 0},  {0, 0, 1, 1, 0, 0}};
    CHECK(rl.roots == expected);
    CHECK(rl.note.empty());
    CHECK(rl.candidates >= rl.roots.size());
    for (const auto& c : rl.roots)
        CHECK(is_short_root(lat, vector_from_coords(lat.field(), c, 3)));
}

TEST_CASE("bound below the minimum is reported provably empty") {
    HermitianLattice lat = eisenstein_ball();
    ShortRootList rl = enumerate_short_roots_near(lat, base_point(lat), mpq_class(1, 2));
    CHECK(rl.roots.empty());
    CHECK(rl.note ==
          "bound below the minimum majorant value of a short root; result "
          "provably empty");
}

TEST_CASE("serial and parallel enumeration agree") {
    HermitianLattice lat = eisenstein_ball();
    ShortRootList par = enumerate_short_roots_near(lat, base_point(lat), 6);
    ShortRootList ser = enumerate_short_roots_near_serial(lat, base_point(lat), 6);
    CHECK(par.roots == ser.roots);
    CHECK(par.roots.size() == 228);

    HermitianLattice z5 = zeta5_ball();
    ShortRootList p5 = enumerate_short_roots_near(z5, base_point(z5), 4);
    ShortRootList s5 = enumerate_short_roots_near_serial(z5, base_point(z5), 4);
    CHECK(p5.roots == s5.roots);
}

TEST_CASE("enumeration matches the coefficient-box oracle") {
    HermitianLattice lat = eisenstein_ball();
    for (long B : {2L, 6L}) {
        ShortRootList rl = enumerate_short_roots_near(lat, base_point(lat), B);
        CHECK(rl.roots == box_oracle::eisenstein_roots(B));
    }
    HermitianLattice z5 = zeta5_ball();
    ShortRootList rl5 = enumerate_short_roots_near(z5, base_point(z5), 6);
    CHECK(rl5.roots == box_oracle::zeta5_roots(6));
}

TEST_CASE("thread override is honored") {
    char saved[16] = {0};
    const char* old = std::getenv("CMLAT_THREADS");
    if (old) std::snprintf(saved, sizeof saved, "%s", old);
    setenv("CMLAT_THREADS", "3", 1);
    CHECK(configured_threads() == 3);
    if (old) setenv("CMLAT_THREADS", saved, 1);
    else unsetenv("CMLAT_THREADS");
    CHECK(configured_threads() >= 1);
}

TEST_CASE("same hyperplane is torsion-proportionality on these roots") {
    HermitianLattice lat = eisenstein_ball();
    const CMField& f = lat.field();
    KVector e1 = slots(lat, {0, 1, 0});
    KVector e2 = slots(lat, {0, 0, 1});
    KVector ze1 = e1;
    ze1[1] = f.zeta();
    CHECK(same_hyperplane(lat, e1, ze1));
    CHECK(same_hyperplane(lat, e1, slots(lat, {0, -1, 0})));
    CHECK(!same_hyperplane(lat, e1, e2));
    CHECK(!same_hyperplane(lat, e1, slots(lat, {1, 1, 1})));
    // non-roots are rejected
    CHECK_THROWS_AS(same_hyperplane(lat, e1, slots(lat, {0, 2, 0})), DomainError);
}

TEST_CASE("meet criterion distinguishes crossing, tangent, and disjoint") {
    HermitianLattice lat = eisenstein_ball();
    KVector e1 = slots(lat, {0, 1, 0});
    KVector e2 = slots(lat, {0, 0, 1});
    CHECK(hyperplanes_meet(lat, e1, e2));  // orthogonal: h = 0
    // h(r,t) = 1: tangent at the boundary, not a meet inside the ball
    CHECK(!hyperplanes_meet(lat, slots(lat, {1, 1, 1}), e2));
    // h(r,t) = 2: disjoint
    CHECK(!hyperplanes_meet(lat, e2, slots(lat, {2, 1, 2})));
    CHECK_THROWS_AS(hyperplanes_meet(lat, e1, e1), DomainError);
}

TEST_CASE("reflections are integral isometries of finite order") {
    for (const HermitianLattice& lat : {eisenstein_ball(), zeta5_ball()}) {
        const CMField& f = lat.field();
        unsigned m = f.torsion_order();
        KVector r = slots(lat, {0, 1, 0});
        KMatrix M = reflection_matrix(lat, r, 1);
        CHECK(M.is_integral());

        // preserves h on basis vectors
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j) {
                KVector ei = kvector_zero(f, 3), ej = kvector_zero(f, 3);
                ei[i] = FieldElement::one(f);
                ej[j] = FieldElement::one(f);
                CHECK(lat.inner(apply_matrix(M, ei), apply_matrix(M, ej)) ==
                      lat.inner(ei, ej));
            }

        // order exactly m
        KMatrix P = KMatrix::identity(f, 3);
        for (unsigned i = 1; i < m; ++i) {
            P = P * M;
            CHECK(P != KMatrix::identity(f, 3));
        }
        CHECK(P * M == KMatrix::identity(f, 3));

        // exponents compose additively
        CHECK(reflection_matrix(lat, r, 3) == M * M * M);
        // the reflection depends on the hyperplane only
        KVector zr = r;
        zr[1] = f.zeta();
        CHECK(reflection_matrix(lat, zr, 5) == reflection_matrix(lat, r, 5));
    }
}

TEST_CASE("node representatives at the base point") {
    HermitianLattice lat = eisenstein_ball();
    auto nodes = nodes_at_point(lat, base_point(lat));
    std::vector<std::vector<long>> expected = {{0, 0, -1, -1, 0, 0},
                                               {0, 0, 0, 0, -1, -1}};
    CHECK(nodes == expected);

    // each representative is a root orthogonal to x, on its own hyperplane
    auto at = nodes_at_point(lat, slots(lat, {2, 1, 0}));
    KVector x = slots(lat, {2, 1, 0});
    for (size_t i = 0; i < at.size(); ++i) {
        KVector r = vector_from_coords(lat.field(), at[i], 3);
        CHECK(is_short_root(lat, r));
        CHECK(lat.inner(r, x).is_zero());
        for (size_t j = i + 1; j < at.size(); ++j)
            CHECK(!same_hyperplane(lat, r,
                                   vector_from_coords(lat.field(), at[j], 3)));
    }
}

TEST_CASE("orthogonality audit on the small bound") {
    HermitianLattice lat = eisenstein_ball();
    AuditReport rep = orthogonality_audit(lat, 6);
    CHECK(rep.root_count == 228);
    CHECK(rep.same_hyperplane_pairs == 570);
    CHECK(rep.pairs_checked == 25308);
    CHECK(rep.meeting_pairs == 1332);
    CHECK(rep.violations.empty());

    box_oracle::PairCounts pc = box_oracle::eisenstein_audit(6);
    CHECK(pc.roots == rep.root_count);
    CHECK(pc.same_hyperplane_pairs == rep.same_hyperplane_pairs);
    CHECK(pc.checked_pairs == rep.pairs_checked);
    CHECK(pc.meeting_pairs == rep.meeting_pairs);
}

TEST_CASE("audit of a non-diagonal gram needs an explicit base") {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 3);
    KMatrix H = KMatrix::identity(f, 3);
    H.at(0, 0) = -FieldElement::one(f);
    H.at(0, 1) = FieldElement::theta(f);
    H.at(1, 0) = FieldElement::theta(f).conj();
    HermitianLattice lat(f, H);
    CHECK_THROWS_AS(orthogonality_audit(lat, 2), DomainError);
    KVector x = kvector_zero(f, 3);
    x[0] = FieldElement::one(f);
    AuditReport rep = orthogonality_audit(lat, 2, &x);
    CHECK(rep.violations.empty());
}

TEST_CASE("fixed locus of an orthogonal reflection word") {
    HermitianLattice lat = eisenstein_ball();
    KVector r1 = slots(lat, {0, 1, 0});
    KVector r2 = slots(lat, {0, 0, 1});
    std::vector<std::pair<KVector, long>> word = {{r1, 1}, {r2, 2}};
    std::vector<KVector> samples = {base_point(lat), slots(lat, {2, 1, 0})};
    auto checks = fixed_locus_of_word(lat, word, samples);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].fixed);
    CHECK(checks[0].on_all_hyperplanes);
    CHECK(checks[0].agree);
    CHECK(!checks[1].fixed);
    CHECK(!checks[1].on_all_hyperplanes);
    CHECK(checks[1].agree);

    CHECK_THROWS_AS(fixed_locus_of_word(lat, {{r1, 6}}, samples), DomainError);
    KVector r3 = slots(lat, {1, 1, 1});
    CHECK_THROWS_AS(fixed_locus_of_word(lat, {{r1, 1}, {r3, 1}}, samples),
                    DomainError);
}
