#include "cmlat/involutions.hpp"

#include <algorithm>
#include <sstream>

#include "cmlat/errors.hpp"

namespace cmlat {

KVector AntiUnitaryInvolution::operator()(const KVector& x) const {
    KVector sx = x;
    for (auto& c : sx) c = c.conj();
    return apply_matrix(A, sx);
}

InvolutionVerdict validate_involution(const HermitianLattice& lat, const KMatrix& A) {
    size_t n = lat.rank();
    if (A.rows() != n || A.cols() != n)
        throw DomainError("involution matrix has wrong shape");
    if (!(A.field() == lat.field()))
        throw DomainError("involution matrix over the wrong field");

    InvolutionVerdict v;
    if (!A.is_integral()) {
        v.valid = false;
        v.failure = "matrix is not integral";
        return v;
    }
    KMatrix AsA = A * A.conj();
    if (AsA != KMatrix::identity(A.field(), n)) {
        v.valid = false;
        v.failure = "A * sigma(A) != I";
        return v;
    }
    // h(alpha e_i, alpha e_j) = sigma(h(e_i, e_j))  <=>  A^T H sigma(A) = sigma(H)
    KMatrix lhs = A.transpose() * lat.gram() * A.conj();
    KMatrix rhs = lat.gram().conj();
    if (lhs != rhs) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!(lhs.at(i, j) == rhs.at(i, j))) {
                    std::ostringstream os;
                    os << "isometry identity fails at basis pair (" << i << ", "
                       << j << ")";
                    v.valid = false;
                    v.failure = os.str();
                    return v;
                }
    }
    return v;
}

AntiUnitaryInvolution make_involution(const HermitianLattice& lat, KMatrix A) {
    InvolutionVerdict v = validate_involution(lat, A);
    if (!v.valid) throw DomainError("not an anti-unitary involution: " + v.failure);
    return AntiUnitaryInvolution{lat, std::move(A)};
}

AntiUnitaryInvolution standard_involution(const HermitianLattice& lat, size_t i,
                                          bool negated) {
    size_t n = lat.rank() - 1;
    if (i > n) throw DomainError("standard involution index out of range");
    const CMField& f = lat.field();
    KMatrix A(f, n + 1, n + 1);
    for (size_t k = 0; k <= n; ++k) {
        bool neg = (k >= 1 && k <= i) != negated;
        A.at(k, k) = neg ? -FieldElement::one(f) : FieldElement::one(f);
    }
    return make_involution(lat, std::move(A));
}

AntiUnitaryInvolution conjugate_by(const KMatrix& g, const AntiUnitaryInvolution& alpha) {
    const HermitianLattice& lat = alpha.lat;
    size_t n = lat.rank();
    if (g.rows() != n || g.cols() != n || !(g.field() == lat.field()))
        throw DomainError("conjugating matrix has wrong shape");
    if (!g.is_integral()) throw DomainError("g does not preserve the lattice");
    if (g.transpose() * lat.gram() * g.conj() != lat.gram())
        throw DomainError("g is not an isometry");
    KMatrix ginv = g.inverse();
    if (!ginv.is_integral()) throw DomainError("g does not preserve the lattice");
    KMatrix B = g * alpha.A * ginv.conj();
    return make_involution(lat, std::move(B));
}

const char* square_class_name(SquareClass c) {
    switch (c) {
        case SquareClass::Square: return "square";
        case SquareClass::NonSquare: return "nonsquare";
        default: return "zero";
    }
}

// ---------------------------------------------------------------------------
// invariants modulo the ramified prime

namespace {

using FpMatrix = std::vector<std::vector<unsigned long>>;

FpMatrix reduce_matrix(const KMatrix& M) {
    FpMatrix R(M.rows(), std::vector<unsigned long>(M.cols()));
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j)
            R[i][j] = residue_mod_ramified_prime(M.at(i, j));
    return R;
}

// column vectors spanning {v : M v = 0 mod p}
std::vector<std::vector<unsigned long>> fp_nullspace(FpMatrix M, unsigned long p) {
    size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    auto inv_mod = [p](unsigned long a) {
        long t = 0, nt = 1;
        long r = (long)p, nr = (long)(a % p);
        while (nr != 0) {
            long q = r / nr;
            t -= q * nt; std::swap(t, nt);
            r -= q * nr; std::swap(r, nr);
        }
        return (unsigned long)((t % (long)p + (long)p) % (long)p);
    };
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = SIZE_MAX;
        for (size_t i = r; i < rows; ++i)
            if (M[i][c] % p != 0) { sel = i; break; }
        if (sel == SIZE_MAX) continue;
        std::swap(M[sel], M[r]);
        unsigned long iv = inv_mod(M[r][c]);
        for (size_t j = 0; j < cols; ++j) M[r][j] = M[r][j] * iv % p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] % p == 0) continue;
            unsigned long f = M[i][c] % p;
            for (size_t j = 0; j < cols; ++j)
                M[i][j] = (M[i][j] + (p - f) * M[r][j]) % p;
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::vector<unsigned long>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<unsigned long> v(cols, 0);
        v[c] = 1;
        for (size_t t = 0; t < pivot_col.size(); ++t)
            v[pivot_col[t]] = (p - M[t][c] % p) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

unsigned long fp_det(FpMatrix M, unsigned long p) {
    size_t n = M.size();
    auto inv_mod = [p](unsigned long a) {
        long t = 0, nt = 1;
        long r = (long)p, nr = (long)(a % p);
        while (nr != 0) {
            long q = r / nr;
            t -= q * nt; std::swap(t, nt);
            r -= q * nr; std::swap(r, nr);
        }
        return (unsigned long)((t % (long)p + (long)p) % (long)p);
    };
    unsigned long det = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t sel = SIZE_MAX;
        for (size_t i = k; i < n; ++i)
            if (M[i][k] % p != 0) { sel = i; break; }
        if (sel == SIZE_MAX) return 0;
        if (sel != k) {
            std::swap(M[sel], M[k]);
            det = (p - det) % p;
        }
        det = det * (M[k][k] % p) % p;
        unsigned long iv = inv_mod(M[k][k]);
        for (size_t i = k + 1; i < n; ++i) {
            if (M[i][k] % p == 0) continue;
            unsigned long f = M[i][k] * iv % p;
            for (size_t j = k; j < n; ++j)
                M[i][j] = (M[i][j] + (p - f) * M[k][j] % p) % p;
        }
    }
    return det;
}

unsigned long powmod(unsigned long b, unsigned long e, unsigned long p) {
    unsigned long r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

}  // namespace

InvariantPair conjugacy_invariants(const AntiUnitaryInvolution& alpha) {
    const CMField& f = alpha.lat.field();
    unsigned long p = f.p();
    size_t n = alpha.lat.rank();

    // sigma acts trivially mod the ramified prime, so the reduction of alpha
    // is the plain F_p matrix of A
    FpMatrix Abar = reduce_matrix(alpha.A);
    for (size_t i = 0; i < n; ++i) Abar[i][i] = (Abar[i][i] + p - 1) % p;
    auto W = fp_nullspace(Abar, p);

    FpMatrix qbar = reduce_matrix(alpha.lat.gram());
    size_t d = W.size();
    FpMatrix G(d, std::vector<unsigned long>(d, 0));
    for (size_t r = 0; r < d; ++r)
        for (size_t s = 0; s < d; ++s) {
            unsigned long acc = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    acc = (acc + W[r][i] * qbar[i][j] % p * W[s][j]) % p;
            G[r][s] = acc;
        }

    InvariantPair out;
    out.d = d;
    out.t_raw = d ? fp_det(G, p) : 1;
    if (out.t_raw == 0)
        out.t_class = SquareClass::Zero;
    else
        out.t_class = powmod(out.t_raw, (p - 1) / 2, p) == 1 ? SquareClass::Square
                                                             : SquareClass::NonSquare;
    return out;
}

// ---------------------------------------------------------------------------
// fixed lattice

namespace {

// row of Z-coordinates of an integral KVector, slot-major
std::vector<mpz_class> z_row(const KVector& v, size_t D) {
    std::vector<mpz_class> w(v.size() * D);
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < D; ++j) {
            const mpq_class& q = v[i].coeff(j);
            if (q.get_den() != 1) throw DomainError("vector is not integral");
            w[i * D + j] = q.get_num();
        }
    return w;
}

KVector from_z_row(const CMField& f, const std::vector<mpz_class>& w, size_t rank) {
    size_t D = f.degree();
    KVector v;
    v.reserve(rank);
    for (size_t i = 0; i < rank; ++i) {
        std::vector<mpq_class> c(D);
        for (size_t j = 0; j < D; ++j) c[j] = mpq_class(w[i * D + j]);
        v.emplace_back(f, std::move(c));
    }
    return v;
}

// coordinates against a row-HNF basis; throws if w is outside the span
std::vector<mpq_class> hnf_coords(const ZMatrix& K, const std::vector<size_t>& pivots,
                                  std::vector<mpz_class> w) {
    std::vector<mpq_class> c(K.size());
    for (size_t t = 0; t < K.size(); ++t) {
        mpq_class ct(w[pivots[t]], K[t][pivots[t]]);
        ct.canonicalize();
        c[t] = ct;
        if (ct != 0)
            for (size_t j = 0; j < w.size(); ++j) {
                mpq_class upd = mpq_class(w[j]) - ct * K[t][j];
                if (upd.get_den() != 1) throw DomainError("non-integral HNF coordinate");
                w[j] = upd.get_num();
            }
    }
    for (const auto& x : w)
        if (x != 0) throw DomainError("vector outside the fixed module");
    return c;
}

}  // namespace

FixedLattice fixed_lattice_gram(const AntiUnitaryInvolution& alpha) {
    const HermitianLattice& lat = alpha.lat;
    const CMField& f = lat.field();
    size_t rank = lat.rank(), D = f.degree(), g = f.real_degree();
    size_t N = rank * D;

    // Z-matrix of v -> alpha(v) - v on the basis {theta^j e_i}: block (i, k)
    // is multiplication by A[i][k] composed with sigma
    std::vector<FieldElement> theta_pows(D);
    theta_pows[0] = FieldElement::one(f);
    for (size_t j = 1; j < D; ++j)
        theta_pows[j] = theta_pows[j - 1] * FieldElement::theta(f);

    ZMatrix BT(N, std::vector<mpz_class>(N, 0));  // transpose of alpha_Z - I
    for (size_t i = 0; i < rank; ++i)
        for (size_t k = 0; k < rank; ++k) {
            if (alpha.A.at(i, k).is_zero()) continue;
            for (size_t jin = 0; jin < D; ++jin) {
                FieldElement col = alpha.A.at(i, k) * theta_pows[jin].conj();
                for (size_t jout = 0; jout < D; ++jout) {
                    const mpq_class& q = col.coeff(jout);
                    if (q.get_den() != 1)
                        throw DomainError("involution matrix is not integral");
                    BT[k * D + jin][i * D + jout] += q.get_num();
                }
            }
        }
    for (size_t t = 0; t < N; ++t) BT[t][t] -= 1;

    ZMatrix kernel = left_kernel(BT);
    if (kernel.size() != g * rank)
        throw DomainError("fixed module has unexpected rank");
    std::vector<size_t> pivots;
    for (const auto& row : kernel) {
        size_t c = 0;
        while (c < N && row[c] == 0) ++c;
        pivots.push_back(c);
    }

    FixedLattice out;
    if (g == 1) {
        for (const auto& row : kernel) out.basis.push_back(from_z_row(f, row, rank));
        out.note = "hnf basis of the fixed-point kernel";
    } else {
        // candidate fixed vectors: the kernel basis first, then the averaging
        // seeds (1 + alpha)(theta^l e_j); pick the first subset of size rank
        // whose mu-power span has unimodular coordinates in the kernel basis
        std::vector<KVector> cand;
        for (const auto& row : kernel) cand.push_back(from_z_row(f, row, rank));
        for (size_t j = 0; j < rank; ++j)
            for (size_t l = 0; l < D; ++l) {
                KVector e = kvector_zero(f, rank);
                e[j] = theta_pows[l];
                KVector s = e;
                KVector ae = alpha(e);
                for (size_t t = 0; t < rank; ++t) s[t] = s[t] + ae[t];
                if (!kvector_is_zero(s)) cand.push_back(std::move(s));
            }

        FieldElement mu = FieldElement::theta(f) + FieldElement::theta(f).conj();
        std::vector<FieldElement> mu_pows(g);
        mu_pows[0] = FieldElement::one(f);
        for (size_t l = 1; l < g; ++l) mu_pows[l] = mu_pows[l - 1] * mu;

        std::vector<size_t> idx(rank);
        for (size_t t = 0; t < rank; ++t) idx[t] = t;
        bool found = false;
        while (true) {
            QMatrix coords;
            bool ok = true;
            try {
                for (size_t t = 0; t < rank && ok; ++t)
                    for (size_t l = 0; l < g; ++l) {
                        KVector v = cand[idx[t]];
                        for (auto& c : v) c = c * mu_pows[l];
                        coords.push_back(hnf_coords(kernel, pivots, z_row(v, D)));
                    }
            } catch (const DomainError&) {
                ok = false;
            }
            if (ok) {
                mpq_class det = det_rational(coords);
                if (det == 1 || det == -1) {
                    for (size_t t = 0; t < rank; ++t)
                        out.basis.push_back(cand[idx[t]]);
                    found = true;
                    break;
                }
            }
            // next lexicographic subset
            size_t t = rank;
            while (t > 0 && idx[t - 1] == cand.size() - rank + t - 1) --t;
            if (t == 0) break;
            ++idx[t - 1];
            for (size_t s = t; s < rank; ++s) idx[s] = idx[s - 1] + 1;
        }
        if (!found)
            throw DomainError(
                "no O_F-basis of the fixed module found among kernel and "
                "averaging candidates");
        out.note = "subset of kernel/averaging vectors with unimodular mu-span";
    }

    out.gram.assign(rank, std::vector<FieldElement>(rank));
    for (size_t r = 0; r < rank; ++r)
        for (size_t s = 0; s < rank; ++s) {
            FieldElement v = lat.inner(out.basis[r], out.basis[s]);
            if (!v.is_real() || !v.is_integral())
                throw DomainError("restricted form is not O_F-valued");
            out.gram[r][s] = v;
        }
    return out;
}

std::vector<mpq_class> real_subfield_coords(const FieldElement& a) {
    const CMField& f = a.field();
    size_t D = f.degree(), g = f.real_degree();
    if (!a.is_real()) throw DomainError("element is not totally real");

    FieldElement mu = FieldElement::theta(f) + FieldElement::theta(f).conj();
    QMatrix M(D, std::vector<mpq_class>(g));
    FieldElement pw = FieldElement::one(f);
    for (size_t l = 0; l < g; ++l) {
        for (size_t j = 0; j < D; ++j) M[j][l] = pw.coeff(j);
        pw = pw * mu;
    }
    // overdetermined but consistent; eliminate and back-substitute
    std::vector<mpq_class> b(D);
    for (size_t j = 0; j < D; ++j) b[j] = a.coeff(j);
    std::vector<size_t> pivot_row(g);
    size_t r = 0;
    for (size_t c = 0; c < g; ++c) {
        size_t sel = SIZE_MAX;
        for (size_t i = r; i < D; ++i)
            if (M[i][c] != 0) { sel = i; break; }
        if (sel == SIZE_MAX) throw DomainError("degenerate real basis");
        std::swap(M[sel], M[r]);
        std::swap(b[sel], b[r]);
        mpq_class iv = 1 / M[r][c];
        for (size_t j = c; j < g; ++j) M[r][j] *= iv;
        b[r] *= iv;
        for (size_t i = 0; i < D; ++i) {
            if (i == r || M[i][c] == 0) continue;
            mpq_class fct = M[i][c];
            for (size_t j = c; j < g; ++j) M[i][j] -= fct * M[r][j];
            b[i] -= fct * b[r];
        }
        pivot_row[c] = r++;
    }
    for (size_t i = r; i < D; ++i)
        if (b[i] != 0) throw DomainError("element outside Q(mu)");
    std::vector<mpq_class> out(g);
    for (size_t c = 0; c < g; ++c) out[c] = b[pivot_row[c]];
    return out;
}

}  // namespace cmlat
