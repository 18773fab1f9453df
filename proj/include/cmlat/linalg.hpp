#pragma once

#include <gmpxx.h>

#include <vector>

#include "cmlat/cm_field.hpp"

namespace cmlat {

using ZMatrix = std::vector<std::vector<mpz_class>>;
using QMatrix = std::vector<std::vector<mpq_class>>;

struct HNFResult {
    ZMatrix H;      // row Hermite normal form: echelon, positive pivots,
                    // entries above a pivot reduced into [0, pivot)
    ZMatrix U;      // unimodular with U * M = H
    size_t rank;
};

HNFResult row_hnf(ZMatrix M);

// Canonical basis (row HNF) of {v : v * M = 0}; saturated because the rows
// come from a unimodular transform.
ZMatrix left_kernel(const ZMatrix& M);

// Elementary divisors d_1 | d_2 | ..., nonnegative, padded with zeros up to
// min(rows, cols).
std::vector<mpz_class> snf_diagonal(ZMatrix M);

mpz_class det_integer(ZMatrix M);
mpq_class det_rational(QMatrix M);
QMatrix inverse_rational(QMatrix M);
std::vector<mpq_class> solve_rational(QMatrix A, std::vector<mpq_class> b);

// Dense matrix over a CM field.
class KMatrix {
public:
    KMatrix() = default;
    KMatrix(const CMField& f, size_t rows, size_t cols);
    static KMatrix identity(const CMField& f, size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const CMField& field() const { return *field_; }

    FieldElement& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const FieldElement& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    KMatrix operator*(const KMatrix& o) const;
    KMatrix operator+(const KMatrix& o) const;
    KMatrix operator-(const KMatrix& o) const;
    bool operator==(const KMatrix& o) const;
    bool operator!=(const KMatrix& o) const { return !(*this == o); }

    KMatrix transpose() const;
    KMatrix conj() const;             // entrywise CM involution
    KMatrix conj_transpose() const;
    KMatrix scaled(const FieldElement& s) const;
    KMatrix operator-() const;

    bool is_integral() const;
    FieldElement determinant() const;  // Gaussian elimination over K
    KMatrix inverse() const;           // throws DomainError when singular

private:
    const CMField* field_ = nullptr;
    size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElement> data_;
};

using KVector = std::vector<FieldElement>;

KVector apply_matrix(const KMatrix& M, const KVector& v);
KVector kvector_zero(const CMField& f, size_t n);
bool kvector_is_zero(const KVector& v);

// Basis of {v : M v = 0} over K by Gaussian elimination on the columns.
std::vector<KVector> right_kernel_K(const KMatrix& M);

}  // namespace cmlat
