#include <doctest.h>

#include "cmlat/errors.hpp"
#include "cmlat/linalg.hpp"

using namespace cmlat;

TEST_CASE("row hnf of a full-rank matrix") {
    ZMatrix M = {{4, 6}, {2, 4}};
    HNFResult r = row_hnf(M);
    CHECK(r.rank == 2);
    CHECK(r.H == ZMatrix{{2, 0}, {0, 2}});
    // U * M = H
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            mpz_class s = 0;
            for (size_t k = 0; k < 2; ++k) s += r.U[i][k] * M[k][j];
            CHECK(s == r.H[i][j]);
        }
}

TEST_CASE("row hnf reduces entries above pivots") {
    ZMatrix M = {{1, 7, 3}, {0, 5, 1}};
    HNFResult r = row_hnf(M);
    CHECK(r.rank == 2);
    CHECK(r.H[0][1] >= 0);
    CHECK(r.H[0][1] < r.H[1][1]);
}

TEST_CASE("left kernel is saturated") {
    // rows (1,2) and (2,4) are dependent; kernel of the stacked matrix must
    // contain the primitive (2,-1), not just a multiple
    ZMatrix M = {{1, 2}, {2, 4}};
    ZMatrix K = left_kernel(M);
    REQUIRE(K.size() == 1);
    CHECK(K[0] == std::vector<mpz_class>{2, -1});

    ZMatrix M2 = {{2, 0}, {0, 3}};
    CHECK(left_kernel(M2).empty());
}

TEST_CASE("smith normal form diagonal") {
    ZMatrix M = {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}};
    auto d = snf_diagonal(M);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == 2);
    CHECK(d[1] == 2);
    CHECK(d[2] == 156);
}

TEST_CASE("integer and rational determinants agree") {
    ZMatrix M = {{3, 1, 0}, {-1, 4, 2}, {5, 0, 7}};
    QMatrix Q(3, std::vector<mpq_class>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Q[i][j] = mpq_class(M[i][j]);
    CHECK(det_integer(M) == 101);
    CHECK(det_rational(Q) == 101);
}

TEST_CASE("rational inverse and solve") {
    QMatrix A = {{1, 2}, {3, 5}};
    QMatrix Ai = inverse_rational(A);
    CHECK(Ai == QMatrix{{-5, 2}, {3, -1}});
    auto x = solve_rational(A, {1, 2});
    CHECK(x == std::vector<mpq_class>{-1, 1});
    CHECK_THROWS_AS(inverse_rational(QMatrix{{1, 2}, {2, 4}}), DomainError);
}

TEST_CASE("field matrix algebra") {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 5);
    FieldElement z = FieldElement::theta(f);
    KMatrix A = KMatrix::identity(f, 2);
    A.at(0, 1) = z;
    A.at(1, 0) = z.conj();
    A.at(1, 1) = FieldElement::rational(f, 2);

    CHECK(A.conj_transpose() == A);  // hermitian by construction
    KMatrix Ai = A.inverse();
    CHECK(A * Ai == KMatrix::identity(f, 2));
    CHECK(Ai * A == KMatrix::identity(f, 2));
    CHECK((A - A) == KMatrix(f, 2, 2));
    CHECK(A.is_integral());
    CHECK(Ai.is_integral());  // the determinant is 1

    // det(A) = 2 - z zbar = 1
    CHECK(A.determinant() == FieldElement::one(f));

    KMatrix S(f, 2, 2);
    CHECK_THROWS_AS(S.inverse(), DomainError);
}

TEST_CASE("matrix action on vectors") {
    const CMField& f = CMField::get(FieldKind::ImagQuadratic, 7);
    KMatrix A = KMatrix::identity(f, 2);
    A.at(0, 1) = FieldElement::theta(f);
    KVector v = kvector_zero(f, 2);
    v[1] = FieldElement::rational(f, 3);
    KVector w = apply_matrix(A, v);
    CHECK(w[0] == FieldElement::theta(f).scaled(3));
    CHECK(w[1] == v[1]);
    CHECK(!kvector_is_zero(w));
    CHECK(kvector_is_zero(kvector_zero(f, 4)));
}

TEST_CASE("right kernel over the field") {
    const CMField& f = CMField::get(FieldKind::Cyclotomic, 3);
    FieldElement z = FieldElement::theta(f);
    // one row: x0 + z x1 = 0
    KMatrix M(f, 1, 2);
    M.at(0, 0) = FieldElement::one(f);
    M.at(0, 1) = z;
    auto ker = right_kernel_K(M);
    REQUIRE(ker.size() == 1);
    CHECK(apply_matrix(M, ker[0])[0].is_zero());
    CHECK(!kvector_is_zero(ker[0]));
}
