#include "cmlat/linalg.hpp"

#include <algorithm>

#include "cmlat/errors.hpp"

namespace cmlat {

namespace {

void sub_scaled_row(std::vector<mpz_class>& dst, const std::vector<mpz_class>& src,
                    const mpz_class& q) {
    if (q == 0) return;
    for (size_t j = 0; j < dst.size(); ++j) dst[j] -= q * src[j];
}

void negate_row(std::vector<mpz_class>& r) {
    for (auto& x : r) x = -x;
}

}  // namespace

HNFResult row_hnf(ZMatrix M) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    ZMatrix U(rows, std::vector<mpz_class>(rows, 0));
    for (size_t i = 0; i < rows; ++i) U[i][i] = 1;
    size_t pr = 0;
    for (size_t col = 0; col < cols && pr < rows; ++col) {
        // Euclidean reduction below the pivot row until one nonzero remains
        while (true) {
            size_t sel = SIZE_MAX;
            for (size_t i = pr; i < rows; ++i) {
                if (M[i][col] == 0) continue;
                if (sel == SIZE_MAX ||
                    cmp(abs(M[i][col]), abs(M[sel][col])) < 0)
                    sel = i;
            }
            if (sel == SIZE_MAX) break;
            if (sel != pr) {
                std::swap(M[sel], M[pr]);
                std::swap(U[sel], U[pr]);
            }
            bool others = false;
            for (size_t i = pr + 1; i < rows; ++i) {
                if (M[i][col] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), M[i][col].get_mpz_t(), M[pr][col].get_mpz_t());
                sub_scaled_row(M[i], M[pr], q);
                sub_scaled_row(U[i], U[pr], q);
                if (M[i][col] != 0) others = true;
            }
            if (!others) break;
        }
        if (M[pr][col] == 0) continue;
        if (M[pr][col] < 0) {
            negate_row(M[pr]);
            negate_row(U[pr]);
        }
        for (size_t i = 0; i < pr; ++i) {
            if (M[i][col] == 0) continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), M[i][col].get_mpz_t(), M[pr][col].get_mpz_t());
            sub_scaled_row(M[i], M[pr], q);
            sub_scaled_row(U[i], U[pr], q);
        }
        ++pr;
    }
    return {std::move(M), std::move(U), pr};
}

ZMatrix left_kernel(const ZMatrix& M) {
    HNFResult r = row_hnf(M);
    ZMatrix ker;
    for (size_t i = r.rank; i < r.U.size(); ++i) ker.push_back(r.U[i]);
    if (ker.empty()) return ker;
    return row_hnf(std::move(ker)).H;
}

std::vector<mpz_class> snf_diagonal(ZMatrix M) {
    size_t rows = M.size();
    size_t cols = rows ? M[0].size() : 0;
    size_t n = std::min(rows, cols);
    std::vector<mpz_class> d(n, 0);
    size_t t = 0;
    while (t < n) {
        // find a minimal nonzero entry in the trailing block
        size_t pi = SIZE_MAX, pj = SIZE_MAX;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (M[i][j] == 0) continue;
                if (pi == SIZE_MAX || cmp(abs(M[i][j]), abs(M[pi][pj])) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == SIZE_MAX) break;
        std::swap(M[pi], M[t]);
        for (size_t i = t; i < rows; ++i) std::swap(M[i][pj], M[i][t]);
        bool dirty = false;
        for (size_t i = t + 1; i < rows; ++i) {
            if (M[i][t] == 0) continue;
            mpz_class q = M[i][t] / M[t][t];
            sub_scaled_row(M[i], M[t], q);
            if (M[i][t] != 0) dirty = true;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            if (M[t][j] == 0) continue;
            mpz_class q = M[t][j] / M[t][t];
            for (size_t i = t; i < rows; ++i) M[i][j] -= q * M[i][t];
            if (M[t][j] != 0) dirty = true;
        }
        if (dirty) continue;
        // divisibility of the remaining block by the pivot
        bool fixed = true;
        for (size_t i = t + 1; i < rows && fixed; ++i)
            for (size_t j = t + 1; j < cols && fixed; ++j)
                if (M[i][j] % M[t][t] != 0) {
                    for (size_t c = t; c < cols; ++c) M[t][c] += M[i][c];
                    fixed = false;
                }
        if (!fixed) continue;
        d[t] = abs(M[t][t]);
        ++t;
    }
    return d;
}

mpz_class det_integer(ZMatrix M) {
    size_t n = M.size();
    if (n == 0) return 1;
    if (M[0].size() != n) throw DomainError("determinant of non-square matrix");
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            size_t sel = SIZE_MAX;
            for (size_t i = k + 1; i < n; ++i)
                if (M[i][k] != 0) { sel = i; break; }
            if (sel == SIZE_MAX) return 0;
            std::swap(M[k], M[sel]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                M[i][j] = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = M[k][k];
    }
    return sign > 0 ? M[n - 1][n - 1] : -M[n - 1][n - 1];
}

mpq_class det_rational(QMatrix M) {
    size_t n = M.size();
    if (n == 0) return 1;
    if (M[0].size() != n) throw DomainError("determinant of non-square matrix");
    mpq_class det = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (M[i][k] != 0) { sel = i; break; }
        if (sel == SIZE_MAX) return 0;
        if (sel != k) {
            std::swap(M[sel], M[k]);
            det = -det;
        }
        det *= M[k][k];
        mpq_class inv = 1 / M[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            if (M[i][k] == 0) continue;
            mpq_class f = M[i][k] * inv;
            for (size_t j = k; j < n; ++j) M[i][j] -= f * M[k][j];
        }
    }
    return det;
}

QMatrix inverse_rational(QMatrix M) {
    size_t n = M.size();
    QMatrix inv(n, std::vector<mpq_class>(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (M[i][k] != 0) { sel = i; break; }
        if (sel == SIZE_MAX) throw DomainError("matrix is singular");
        if (sel != k) {
            std::swap(M[sel], M[k]);
            std::swap(inv[sel], inv[k]);
        }
        mpq_class piv = 1 / M[k][k];
        for (size_t j = 0; j < n; ++j) {
            M[k][j] *= piv;
            inv[k][j] *= piv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k || M[i][k] == 0) continue;
            mpq_class f = M[i][k];
            for (size_t j = 0; j < n; ++j) {
                M[i][j] -= f * M[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

std::vector<mpq_class> solve_rational(QMatrix A, std::vector<mpq_class> b) {
    size_t n = A.size();
    if (n == 0) return {};
    if (A[0].size() != n || b.size() != n)
        throw DomainError("solve_rational expects a square system");
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (A[i][k] != 0) { sel = i; break; }
        if (sel == SIZE_MAX) throw DomainError("matrix is singular");
        if (sel != k) {
            std::swap(A[sel], A[k]);
            std::swap(b[sel], b[k]);
        }
        mpq_class piv = 1 / A[k][k];
        for (size_t j = k; j < n; ++j) A[k][j] *= piv;
        b[k] *= piv;
        for (size_t i = 0; i < n; ++i) {
            if (i == k || A[i][k] == 0) continue;
            mpq_class f = A[i][k];
            for (size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// KMatrix

KMatrix::KMatrix(const CMField& f, size_t rows, size_t cols)
    : field_(&f), rows_(rows), cols_(cols),
      data_(rows * cols, FieldElement::zero(f)) {}

KMatrix KMatrix::identity(const CMField& f, size_t n) {
    KMatrix m(f, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(f);
    return m;
}

KMatrix KMatrix::operator*(const KMatrix& o) const {
    if (cols_ != o.rows_) throw DomainError("matrix shape mismatch");
    KMatrix r(*field_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const FieldElement& a = at(i, k);
            if (a.is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += a * o.at(k, j);
            }
        }
    return r;
}

KMatrix KMatrix::operator+(const KMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DomainError("matrix shape mismatch");
    KMatrix r(*field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

KMatrix KMatrix::operator-(const KMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DomainError("matrix shape mismatch");
    KMatrix r(*field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

bool KMatrix::operator==(const KMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
        if (!(data_[i] == o.data_[i])) return false;
    return true;
}

KMatrix KMatrix::transpose() const {
    KMatrix r(*field_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

KMatrix KMatrix::conj() const {
    KMatrix r(*field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].conj();
    return r;
}

KMatrix KMatrix::conj_transpose() const { return conj().transpose(); }

KMatrix KMatrix::scaled(const FieldElement& s) const {
    KMatrix r(*field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

KMatrix KMatrix::operator-() const {
    KMatrix r(*field_, rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
}

bool KMatrix::is_integral() const {
    for (const auto& e : data_)
        if (!e.is_integral()) return false;
    return true;
}

FieldElement KMatrix::determinant() const {
    if (rows_ != cols_) throw DomainError("determinant of non-square matrix");
    KMatrix M = *this;
    size_t n = rows_;
    FieldElement det = FieldElement::one(*field_);
    bool neg = false;
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (!M.at(i, k).is_zero()) { sel = i; break; }
        if (sel == SIZE_MAX) return FieldElement::zero(*field_);
        if (sel != k) {
            for (size_t j = 0; j < n; ++j) std::swap(M.at(sel, j), M.at(k, j));
            neg = !neg;
        }
        det = det * M.at(k, k);
        FieldElement inv = M.at(k, k).inverse();
        for (size_t i = k + 1; i < n; ++i) {
            if (M.at(i, k).is_zero()) continue;
            FieldElement f = M.at(i, k) * inv;
            for (size_t j = k; j < n; ++j)
                M.at(i, j) = M.at(i, j) - f * M.at(k, j);
        }
    }
    return neg ? -det : det;
}

KMatrix KMatrix::inverse() const {
    if (rows_ != cols_) throw DomainError("inverse of non-square matrix");
    size_t n = rows_;
    KMatrix M = *this;
    KMatrix R = KMatrix::identity(*field_, n);
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (!M.at(i, k).is_zero()) { sel = i; break; }
        if (sel == SIZE_MAX) throw DomainError("matrix not invertible over K");
        if (sel != k)
            for (size_t j = 0; j < n; ++j) {
                std::swap(M.at(sel, j), M.at(k, j));
                std::swap(R.at(sel, j), R.at(k, j));
            }
        FieldElement inv = M.at(k, k).inverse();
        for (size_t j = 0; j < n; ++j) {
            M.at(k, j) = M.at(k, j) * inv;
            R.at(k, j) = R.at(k, j) * inv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k || M.at(i, k).is_zero()) continue;
            FieldElement f = M.at(i, k);
            for (size_t j = 0; j < n; ++j) {
                M.at(i, j) = M.at(i, j) - f * M.at(k, j);
                R.at(i, j) = R.at(i, j) - f * R.at(k, j);
            }
        }
    }
    return R;
}

KVector apply_matrix(const KMatrix& M, const KVector& v) {
    if (M.cols() != v.size()) throw DomainError("matrix shape mismatch");
    KVector r = kvector_zero(M.field(), M.rows());
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) {
            if (M.at(i, j).is_zero() || v[j].is_zero()) continue;
            r[i] += M.at(i, j) * v[j];
        }
    return r;
}

KVector kvector_zero(const CMField& f, size_t n) {
    return KVector(n, FieldElement::zero(f));
}

bool kvector_is_zero(const KVector& v) {
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

std::vector<KVector> right_kernel_K(const KMatrix& M) {
    const CMField& f = M.field();
    size_t rows = M.rows(), cols = M.cols();
    KMatrix A = M;
    std::vector<size_t> pivot_col;
    size_t pr = 0;
    for (size_t col = 0; col < cols && pr < rows; ++col) {
        size_t sel = SIZE_MAX;
        for (size_t i = pr; i < rows; ++i)
            if (!A.at(i, col).is_zero()) { sel = i; break; }
        if (sel == SIZE_MAX) continue;
        if (sel != pr)
            for (size_t j = 0; j < cols; ++j) std::swap(A.at(sel, j), A.at(pr, j));
        FieldElement inv = A.at(pr, col).inverse();
        for (size_t j = col; j < cols; ++j) A.at(pr, j) = A.at(pr, j) * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == pr || A.at(i, col).is_zero()) continue;
            FieldElement fe = A.at(i, col);
            for (size_t j = col; j < cols; ++j)
                A.at(i, j) = A.at(i, j) - fe * A.at(pr, j);
        }
        pivot_col.push_back(col);
        ++pr;
    }
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    std::vector<KVector> basis;
    for (size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        KVector v = kvector_zero(f, cols);
        v[free] = FieldElement::one(f);
        for (size_t r = 0; r < pivot_col.size(); ++r)
            v[pivot_col[r]] = -A.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace cmlat
