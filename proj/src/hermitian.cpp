#include "cmlat/hermitian.hpp"

#include "cmlat/errors.hpp"

namespace cmlat {

namespace {

// Exact pivots of a hermitian form: totally real, nonzero, one list serving
// every embedding.  Zero diagonals are repaired by passing to e_i + h(e_i,e_j) e_j,
// whose norm 2 N(h(e_i,e_j)) cannot vanish.
std::vector<FieldElement> hermitian_pivots(const CMField& f, const KMatrix& H) {
    size_t n = H.rows();
    std::vector<KVector> b;
    for (size_t i = 0; i < n; ++i) {
        KVector e = kvector_zero(f, n);
        e[i] = FieldElement::one(f);
        b.push_back(std::move(e));
    }
    auto val = [&](const KVector& x, const KVector& y) {
        FieldElement s = FieldElement::zero(f);
        for (size_t i = 0; i < n; ++i) {
            if (x[i].is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                if (y[j].is_zero() || H.at(i, j).is_zero()) continue;
                s += x[i] * H.at(i, j) * y[j].conj();
            }
        }
        return s;
    };
    std::vector<size_t> active(n);
    for (size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<FieldElement> pivots;
    while (!active.empty()) {
        size_t pick = SIZE_MAX;
        for (size_t a = 0; a < active.size(); ++a) {
            if (!val(b[active[a]], b[active[a]]).is_zero()) {
                pick = a;
                break;
            }
        }
        if (pick == SIZE_MAX) {
            bool fixed = false;
            for (size_t a = 0; a < active.size() && !fixed; ++a)
                for (size_t c = a + 1; c < active.size() && !fixed; ++c) {
                    FieldElement w = val(b[active[a]], b[active[c]]);
                    if (w.is_zero()) continue;
                    KVector& bi = b[active[a]];
                    const KVector& bj = b[active[c]];
                    for (size_t t = 0; t < n; ++t) bi[t] += w * bj[t];
                    pick = a;
                    fixed = true;
                }
            if (!fixed) throw DomainError("hermitian form is degenerate");
        }
        size_t i = active[pick];
        FieldElement d = val(b[i], b[i]);
        if (!d.is_real()) throw DomainError("hermitian Gram is not conj-symmetric");
        pivots.push_back(d);
        active.erase(active.begin() + pick);
        FieldElement dinv = d.inverse();
        for (size_t a : active) {
            FieldElement fcoef = val(b[a], b[i]) * dinv;
            if (fcoef.is_zero()) continue;
            for (size_t t = 0; t < n; ++t) b[a][t] = b[a][t] - fcoef * b[i][t];
        }
    }
    return pivots;
}

}  // namespace

HermitianLattice::HermitianLattice(const CMField& f, KMatrix gram) : field_(&f) {
    if (gram.rows() == 0 || gram.rows() != gram.cols())
        throw DomainError("Gram matrix must be square and nonempty");
    if (!(gram.field() == f)) throw DomainError("Gram field mismatch");
    if (!gram.is_integral())
        throw DomainError("hermitian Gram must have entries in O_K");
    if (gram.conj_transpose() != gram)
        throw DomainError("Gram matrix is not hermitian");
    gram_ = std::move(gram);

    std::vector<FieldElement> pivots = hermitian_pivots(f, gram_);
    unsigned g = f.real_degree();
    size_t n1 = gram_.rows();
    signatures_.resize(g);
    unsigned hyper_count = 0;
    bool definite_elsewhere = true;
    for (unsigned k = 1; k <= g; ++k) {
        unsigned pos = 0, neg = 0;
        for (const auto& d : pivots) {
            int s = certified_sign(d, k);
            if (s > 0) ++pos;
            else ++neg;  // s == 0 impossible: pivots are nonzero in F
        }
        signatures_[k - 1] = {pos, neg};
        if (pos == n1 - 1 && neg == 1) {
            ++hyper_count;
            hyperbolic_ = k;
        } else if (neg != 0) {
            definite_elsewhere = false;
        }
    }
    admissible_ = (hyper_count == 1) && definite_elsewhere;
    if (!admissible_) hyperbolic_ = 0;
}

HermitianLattice HermitianLattice::diagonal(const CMField& f, const KVector& diag) {
    KMatrix H(f, diag.size(), diag.size());
    for (size_t i = 0; i < diag.size(); ++i) H.at(i, i) = diag[i];
    return HermitianLattice(f, std::move(H));
}

FieldElement HermitianLattice::inner(const KVector& x, const KVector& y) const {
    size_t n = rank();
    if (x.size() != n || y.size() != n)
        throw DomainError("vector length does not match lattice rank");
    FieldElement s = FieldElement::zero(*field_);
    for (size_t i = 0; i < n; ++i) {
        if (x[i].is_zero()) continue;
        for (size_t j = 0; j < n; ++j) {
            if (y[j].is_zero() || gram_.at(i, j).is_zero()) continue;
            s += x[i] * gram_.at(i, j) * y[j].conj();
        }
    }
    return s;
}

AdmissibilityReport check_admissible(const HermitianLattice& lat) {
    AdmissibilityReport r;
    r.admissible = lat.admissible();
    r.signatures = lat.signatures();
    r.hyperbolic_index = lat.hyperbolic_embedding();
    size_t n1 = lat.rank();
    if (r.admissible) {
        r.note = "signature (" + std::to_string(n1 - 1) + ",1) at embedding " +
                 std::to_string(r.hyperbolic_index) + ", definite elsewhere";
        if (r.hyperbolic_index != lat.field().tau_index() + 1)
            r.note += "; hyperbolic embedding differs from the field's declared tau";
    } else {
        r.note = "no unique hyperbolic embedding with definite complement";
    }
    return r;
}

ZMatrix alternating_form(const HermitianLattice& lat) {
    const CMField& f = lat.field();
    unsigned D = f.degree();
    size_t n1 = lat.rank();
    FieldElement etainv = f.eta().inverse();
    std::vector<FieldElement> basis;
    FieldElement b = FieldElement::one(f);
    FieldElement th = FieldElement::theta(f);
    for (unsigned j = 0; j < D; ++j) {
        basis.push_back(b);
        b = b * th;
    }
    ZMatrix E(n1 * D, std::vector<mpz_class>(n1 * D));
    for (size_t i = 0; i < n1; ++i)
        for (size_t k = 0; k < n1; ++k) {
            if (lat.gram().at(i, k).is_zero()) continue;
            FieldElement base = etainv * lat.gram().at(i, k);
            for (unsigned j = 0; j < D; ++j) {
                FieldElement left = base * basis[j];
                for (unsigned l = 0; l < D; ++l) {
                    mpq_class v = trace_to_Q(left * basis[l].conj());
                    if (v.get_den() != 1)
                        throw DomainError("alternating form value not an integer");
                    E[i * D + j][k * D + l] = v.get_num();
                }
            }
        }
    return E;
}

KMatrix skew_from_hermitian(const HermitianLattice& lat) {
    return lat.gram().scaled(lat.field().eta().inverse());
}

KMatrix skew_hermitian_from_alternating(const CMField& f, const ZMatrix& E,
                                        size_t rank) {
    unsigned D = f.degree();
    if (E.size() != rank * D || (rank && E[0].size() != rank * D))
        throw DomainError("alternating form size does not match rank * degree");
    QMatrix G = f.trace_pairing_gram();
    QMatrix Ginv = inverse_rational(G);
    KMatrix T(f, rank, rank);
    for (size_t i = 0; i < rank; ++i)
        for (size_t k = 0; k < rank; ++k) {
            // Tr(w_r * t_ik) = E(w_r e_i, e_k)
            std::vector<mpq_class> rhs(D);
            for (unsigned r = 0; r < D; ++r)
                rhs[r] = mpq_class(E[i * D + r][k * D + 0]);
            std::vector<mpq_class> c(D, mpq_class(0));
            for (unsigned s = 0; s < D; ++s)
                for (unsigned r = 0; r < D; ++r)
                    if (Ginv[s][r] != 0 && rhs[r] != 0) c[s] += Ginv[s][r] * rhs[r];
            T.at(i, k) = FieldElement(f, std::move(c));
        }
    return T;
}

namespace {

// E evaluated on a*e_i, b*e_k for integral field scalars a, b.
mpq_class eval_E(const ZMatrix& E, unsigned D, size_t i, size_t k,
                 const FieldElement& a, const FieldElement& b) {
    mpq_class s = 0;
    for (unsigned j = 0; j < D; ++j) {
        if (a.coeff(j) == 0) continue;
        for (unsigned l = 0; l < D; ++l) {
            if (b.coeff(l) == 0) continue;
            s += a.coeff(j) * b.coeff(l) * E[i * D + j][k * D + l];
        }
    }
    return s;
}

}  // namespace

KMatrix skew_via_quadratic_identity(const CMField& f, const ZMatrix& E, size_t rank) {
    if (f.kind() != FieldKind::ImagQuadratic)
        throw DomainError("quadratic identity requires an imaginary quadratic field");
    unsigned D = f.degree();
    FieldElement sd = f.eta();  // sqrt(Delta)
    FieldElement one = FieldElement::one(f);
    FieldElement half_inv = (sd + sd).inverse();
    KMatrix T(f, rank, rank);
    for (size_t i = 0; i < rank; ++i)
        for (size_t k = 0; k < rank; ++k) {
            mpq_class e1 = eval_E(E, D, i, k, sd, one);
            mpq_class e0 = eval_E(E, D, i, k, one, one);
            FieldElement num =
                FieldElement::rational(f, e1) + sd.scaled(e0);
            T.at(i, k) = num * half_inv;
        }
    return T;
}

KMatrix skew_via_cyclotomic_average(const CMField& f, const ZMatrix& E, size_t rank) {
    if (f.kind() != FieldKind::Cyclotomic)
        throw DomainError("cyclotomic average requires a cyclotomic field");
    unsigned D = f.degree();
    unsigned p = f.p();
    FieldElement one = FieldElement::one(f);
    FieldElement th = FieldElement::theta(f);
    std::vector<FieldElement> zp;  // zeta^j, j = 0..p-1
    FieldElement z = one;
    for (unsigned j = 0; j < p; ++j) {
        zp.push_back(z);
        z = z * th;
    }
    KMatrix T(f, rank, rank);
    for (size_t i = 0; i < rank; ++i)
        for (size_t k = 0; k < rank; ++k) {
            FieldElement acc = FieldElement::zero(f);
            for (unsigned j = 0; j < p; ++j) {
                mpq_class e = eval_E(E, D, i, k, one, zp[j]);
                if (e != 0) acc += zp[j].scaled(e);
            }
            T.at(i, k) = acc.scaled(mpq_class(1, p));
        }
    return T;
}

bool is_skew_hermitian(const CMField& f, const KMatrix& T, std::string* why) {
    if (T.rows() != T.cols()) {
        if (why) *why = "matrix not square";
        return false;
    }
    if (T.conj_transpose() != -T) {
        if (why) *why = "conj-transpose is not the negative";
        return false;
    }
    if (!T.scaled(f.eta()).is_integral()) {
        if (why) *why = "eta * T is not integral";
        return false;
    }
    return true;
}

ZMatrix polarization_gram(const CMField& f) {
    unsigned D = f.degree();
    FieldElement etainv = f.eta().inverse();
    std::vector<FieldElement> basis;
    FieldElement b = FieldElement::one(f);
    FieldElement th = FieldElement::theta(f);
    for (unsigned j = 0; j < D; ++j) {
        basis.push_back(b);
        b = b * th;
    }
    ZMatrix Q(D, std::vector<mpz_class>(D));
    for (unsigned r = 0; r < D; ++r)
        for (unsigned s = 0; s < D; ++s) {
            mpq_class v = trace_to_Q(etainv * basis[r] * basis[s].conj());
            if (v.get_den() != 1)
                throw DomainError("polarization Gram value not an integer");
            Q[r][s] = v.get_num();
        }
    return Q;
}

}  // namespace cmlat
