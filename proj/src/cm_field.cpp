#include "cmlat/cm_field.hpp"

#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "cmlat/errors.hpp"

namespace cmlat {

namespace {

bool is_odd_prime(unsigned p) {
    if (p < 3 || p % 2 == 0) return false;
    for (unsigned d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

// Solve A x = b exactly, A given column-major as rows x cols, throwing if the
// system is inconsistent or underdetermined.  Sizes here are at most 12.
std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> A,
                                   std::vector<mpq_class> b, size_t cols) {
    size_t rows = A.size();
    size_t prow = 0;
    std::vector<size_t> pivot_of_col(cols, SIZE_MAX);
    for (size_t col = 0; col < cols && prow < rows; ++col) {
        size_t sel = SIZE_MAX;
        for (size_t r = prow; r < rows; ++r)
            if (A[r][col] != 0) { sel = r; break; }
        if (sel == SIZE_MAX) continue;
        std::swap(A[sel], A[prow]);
        std::swap(b[sel], b[prow]);
        mpq_class inv = 1 / A[prow][col];
        for (size_t c = col; c < cols; ++c) A[prow][c] *= inv;
        b[prow] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == prow || A[r][col] == 0) continue;
            mpq_class f = A[r][col];
            for (size_t c = col; c < cols; ++c) A[r][c] -= f * A[prow][c];
            b[r] -= f * b[prow];
        }
        pivot_of_col[col] = prow;
        ++prow;
    }
    for (size_t r = prow; r < rows; ++r)
        if (b[r] != 0) throw DomainError("linear system inconsistent");
    std::vector<mpq_class> x(cols, mpq_class(0));
    for (size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] == SIZE_MAX)
            throw DomainError("linear system underdetermined");
        x[col] = b[pivot_of_col[col]];
    }
    return x;
}

const char* basis_symbol(FieldKind kind, unsigned p) {
    if (kind == FieldKind::Cyclotomic) return "z";
    return (p % 4 == 3) ? "w" : "s";
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(const CMField& f, std::vector<mpq_class> coeffs)
    : field_(&f), c_(std::move(coeffs)) {
    if (c_.size() != f.degree())
        throw DomainError("coefficient vector length does not match field degree");
    for (auto& q : c_) q.canonicalize();
}

FieldElement FieldElement::zero(const CMField& f) {
    return FieldElement(f, std::vector<mpq_class>(f.degree(), mpq_class(0)));
}

FieldElement FieldElement::one(const CMField& f) {
    return rational(f, mpq_class(1));
}

FieldElement FieldElement::rational(const CMField& f, const mpq_class& q) {
    std::vector<mpq_class> c(f.degree(), mpq_class(0));
    c[0] = q;
    return FieldElement(f, std::move(c));
}

FieldElement FieldElement::theta(const CMField& f) {
    std::vector<mpq_class> c(f.degree(), mpq_class(0));
    c[1] = 1;
    return FieldElement(f, std::move(c));
}

static void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (!a.attached() || !b.attached() || !(a.field() == b.field()))
        throw DomainError("field mismatch between operands");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_field(*this, o);
    std::vector<mpq_class> c(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) c[j] = c_[j] + o.c_[j];
    return FieldElement(*field_, std::move(c));
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    require_same_field(*this, o);
    for (size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_field(*this, o);
    std::vector<mpq_class> c(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) c[j] = c_[j] - o.c_[j];
    return FieldElement(*field_, std::move(c));
}

FieldElement FieldElement::operator-() const {
    std::vector<mpq_class> c(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) c[j] = -c_[j];
    return FieldElement(*field_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_field(*this, o);
    size_t D = c_.size();
    std::vector<mpq_class> conv(2 * D - 1, mpq_class(0));
    for (size_t i = 0; i < D; ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < D; ++j) {
            if (o.c_[j] == 0) continue;
            conv[i + j] += c_[i] * o.c_[j];
        }
    }
    std::vector<mpq_class> c(conv.begin(), conv.begin() + D);
    for (size_t t = D; t < conv.size(); ++t) {
        if (conv[t] == 0) continue;
        const auto& row = field_->redrows_[t - D];
        for (size_t j = 0; j < D; ++j)
            if (row[j] != 0) c[j] += conv[t] * row[j];
    }
    return FieldElement(*field_, std::move(c));
}

bool FieldElement::operator==(const FieldElement& o) const {
    require_same_field(*this, o);
    return c_ == o.c_;
}

FieldElement FieldElement::conj() const {
    size_t D = c_.size();
    std::vector<mpq_class> c(D, mpq_class(0));
    for (size_t j = 0; j < D; ++j) {
        if (c_[j] == 0) continue;
        const auto& img = field_->sigma_basis_[j];
        for (size_t i = 0; i < D; ++i)
            if (img[i] != 0) c[i] += c_[j] * img[i];
    }
    return FieldElement(*field_, std::move(c));
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    size_t D = c_.size();
    // columns of M are the coefficients of a * theta^j
    std::vector<std::vector<mpq_class>> M(D, std::vector<mpq_class>(D, mpq_class(0)));
    FieldElement pw = *this;
    FieldElement th = theta(*field_);
    for (size_t j = 0; j < D; ++j) {
        for (size_t i = 0; i < D; ++i) M[i][j] = pw.c_[i];
        if (j + 1 < D) pw = pw * th;
    }
    std::vector<mpq_class> rhs(D, mpq_class(0));
    rhs[0] = 1;
    return FieldElement(*field_, solve_exact(std::move(M), std::move(rhs), D));
}

FieldElement FieldElement::scaled(const mpq_class& q) const {
    std::vector<mpq_class> c(c_.size());
    for (size_t j = 0; j < c_.size(); ++j) c[j] = c_[j] * q;
    return FieldElement(*field_, std::move(c));
}

bool FieldElement::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

bool FieldElement::is_integral() const {
    for (const auto& q : c_)
        if (q.get_den() != 1) return false;
    return true;
}

bool FieldElement::is_real() const { return conj() == *this; }

bool FieldElement::is_rational() const {
    for (size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) return false;
    return true;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    bool first = true;
    const char* sym = basis_symbol(field_->kind(), field_->p());
    for (size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        mpq_class a = c_[j];
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        if (j == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << sym;
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

FieldElement norm_to_F(const FieldElement& a) { return a * a.conj(); }

// ---------------------------------------------------------------------------
// CMField construction

CMField::CMField(FieldKind kind, unsigned p, unsigned tau_index)
    : kind_(kind), p_(p), tau_index_(tau_index) {
    if (!is_odd_prime(p)) throw DomainError("p must be an odd prime");
    if (kind == FieldKind::ImagQuadratic) {
        degree_ = 2;
        g_ = 1;
    } else {
        degree_ = p - 1;
        g_ = (p - 1) / 2;
    }
    if (tau_index >= g_) throw DomainError("tau index out of range");
    unsigned D = degree_;

    if (kind == FieldKind::ImagQuadratic) {
        redrows_.resize(1, std::vector<mpq_class>(2, mpq_class(0)));
        sigma_basis_.assign(2, std::vector<mpq_class>(2, mpq_class(0)));
        sigma_basis_[0][0] = 1;
        if (p % 4 == 3) {
            // basis {1, w}, w = (1 + sqrt(-p))/2, w^2 = w - (1+p)/4
            redrows_[0][0] = mpq_class(-(long)((1 + p) / 4));
            redrows_[0][1] = 1;
            sigma_basis_[1][0] = 1;
            sigma_basis_[1][1] = -1;
            trace_basis_ = {mpq_class(2), mpq_class(1)};
        } else {
            // basis {1, s}, s = sqrt(-p)
            redrows_[0][0] = mpq_class(-(long)p);
            sigma_basis_[1][1] = -1;
            trace_basis_ = {mpq_class(2), mpq_class(0)};
        }
    } else {
        // basis {1, z, ..., z^{p-2}} with z^{p-1} = -(1 + z + ... + z^{p-2})
        std::vector<mpq_class> relation(D, mpq_class(-1));
        redrows_.push_back(relation);
        for (unsigned t = D + 1; t <= 2 * D - 2; ++t) {
            // z^t = z^{t-p} for t >= p
            std::vector<mpq_class> row(D, mpq_class(0));
            row[t - p] = 1;
            redrows_.push_back(std::move(row));
        }
        sigma_basis_.assign(D, std::vector<mpq_class>(D, mpq_class(0)));
        sigma_basis_[0][0] = 1;
        for (unsigned j = 1; j < D; ++j) {
            unsigned img = p - j;
            if (img <= D - 1) {
                sigma_basis_[j][img] = 1;
            } else {
                sigma_basis_[j] = relation;
            }
        }
        trace_basis_.assign(D, mpq_class(-1));
        trace_basis_[0] = p - 1;
    }

    // residues modulo the ramified prime above p
    residue_basis_.assign(D, 1);
    if (kind == FieldKind::ImagQuadratic) {
        if (p % 4 == 3) {
            unsigned long inv2 = (p + 1) / 2;  // 2*inv2 = p+1 = 1 mod p
            residue_basis_[1] = inv2;
        } else {
            residue_basis_[1] = 0;
        }
    }

    // torsion
    if (kind == FieldKind::ImagQuadratic) {
        if (p == 3) {
            m_ = 6;
            zeta_ = FieldElement::theta(*this);
        } else {
            m_ = 2;
            zeta_ = FieldElement::rational(*this, mpq_class(-1));
        }
    } else {
        m_ = 2 * p;
        zeta_ = -FieldElement::theta(*this);
    }
    e_ = 0;
    for (unsigned t = m_; t % 2 == 0; t /= 2) ++e_;
    torsion_.reserve(m_);
    FieldElement u = FieldElement::one(*this);
    for (unsigned t = 0; t < m_; ++t) {
        torsion_.push_back(u);
        u = u * zeta_;
    }
    if (u != FieldElement::one(*this))
        throw DomainError("torsion generator does not have the declared order");
    for (unsigned q : {2u, 3u, p_}) {
        if (m_ % q != 0) continue;
        if (torsion_[m_ / q] == FieldElement::one(*this))
            throw DomainError("torsion generator order too small");
    }

    // eta
    if (kind == FieldKind::ImagQuadratic) {
        if (p % 4 == 3) {
            eta_ = FieldElement(*this, {mpq_class(-1), mpq_class(2)});  // sqrt(-p) = 2w - 1
        } else {
            eta_ = FieldElement(*this, {mpq_class(0), mpq_class(2)});   // 2*sqrt(-p)
        }
    } else {
        FieldElement th = FieldElement::theta(*this);
        FieldElement th_inv = th.conj();  // z^{p-1} = z^{-1}
        FieldElement mu = th + th_inv;
        // minimal polynomial of mu over Q: monic of degree g
        std::vector<FieldElement> mupow;
        FieldElement mp = FieldElement::one(*this);
        for (unsigned t = 0; t <= g_; ++t) {
            mupow.push_back(mp);
            mp = mp * mu;
        }
        std::vector<std::vector<mpq_class>> A(D, std::vector<mpq_class>(g_));
        std::vector<mpq_class> rhs(D);
        for (unsigned i = 0; i < D; ++i) {
            for (unsigned t = 0; t < g_; ++t) A[i][t] = mupow[t].coeff(i);
            rhs[i] = mupow[g_].coeff(i);
        }
        std::vector<mpq_class> a = solve_exact(std::move(A), std::move(rhs), g_);
        real_minpoly_.assign(g_ + 1, mpq_class(0));
        real_minpoly_[g_] = 1;
        for (unsigned t = 0; t < g_; ++t) {
            real_minpoly_[t] = -a[t];
            if (real_minpoly_[t].get_den() != 1)
                throw DomainError("real subfield minimal polynomial is not integral");
        }
        // g'(mu) by Horner
        FieldElement gp = FieldElement::zero(*this);
        for (unsigned t = g_; t >= 1; --t) {
            gp = gp * mu + FieldElement::rational(*this, real_minpoly_[t] * t);
        }
        eta_ = (th - th_inv) * gp;
        // eta generates the different: compare with Phi_p'(zeta) = p*z^{p-1}/(z-1)
        FieldElement dgen = FieldElement::rational(*this, mpq_class(p)) * th_inv *
                            (th - FieldElement::one(*this)).inverse();
        if (!(eta_ * dgen.inverse()).is_integral() ||
            !(dgen * eta_.inverse()).is_integral())
            throw DomainError("eta does not generate the different");
    }
    if (eta_.conj() != -eta_)
        throw DomainError("eta is not totally imaginary");

    // trace pairing Gram
    tp_gram_.assign(D, std::vector<mpq_class>(D));
    {
        std::vector<FieldElement> basis;
        FieldElement b = FieldElement::one(*this);
        FieldElement th = FieldElement::theta(*this);
        for (unsigned j = 0; j < D; ++j) {
            basis.push_back(b);
            b = b * th;
        }
        for (unsigned i = 0; i < D; ++i)
            for (unsigned j = 0; j < D; ++j)
                tp_gram_[i][j] = trace_to_Q(basis[i] * basis[j]);
    }

    // CM-type orientations: pick the representative with Im(phi(eta)) > 0
    orientations_.assign(g_, 1);
    if (kind == FieldKind::ImagQuadratic) {
        // Im of a + b*theta at the + representative has the sign of b
        if (sgn(eta_.coeff(1)) < 0) orientations_[0] = -1;
        if (eta_.coeff(1) == 0) throw DomainError("eta has no imaginary part");
    } else {
        for (unsigned k = 1; k <= g_; ++k) {
            int s = 0;
            for (int level = 0; level < ladder_levels_ && s == 0; ++level) {
                mpfr_prec_t prec = mpfr_prec_t(64) << level;
                if (prec > precision_cap()) break;
                RealInterval pi2 = RealInterval::pi(prec);
                RealInterval im = RealInterval::exact(0L, prec);
                for (unsigned j = 0; j < D; ++j) {
                    if (eta_.coeff(j) == 0) continue;
                    unsigned long r = ((unsigned long)k * j) % p;
                    RealInterval ang = pi2.scaled(mpq_class(2 * r, p));
                    im += ang.sin_enclosure().scaled(eta_.coeff(j));
                }
                if (im.definitely_positive()) s = 1;
                if (im.definitely_negative()) s = -1;
            }
            if (s == 0)
                throw PrecisionError("could not orient embedding of eta");
            orientations_[k - 1] = s;
        }
    }
}

// ---------------------------------------------------------------------------
// trig tables and sign certification

struct CMField::TrigTables {
    // cos_[k-1][j], sin_[k-1][j] enclose cos/sin(2*pi*k*j/p)
    std::vector<std::vector<RealInterval>> cos_, sin_;
};

const CMField::TrigTables& CMField::trig_level(int level) const {
    std::call_once(trig_once_[level], [&] {
        auto t = std::make_shared<TrigTables>();
        mpfr_prec_t prec = mpfr_prec_t(64) << level;
        RealInterval pi = RealInterval::pi(prec);
        t->cos_.resize(g_);
        t->sin_.resize(g_);
        for (unsigned k = 1; k <= g_; ++k) {
            for (unsigned j = 0; j < degree_; ++j) {
                unsigned long r = ((unsigned long)k * j) % p_;
                RealInterval ang = pi.scaled(mpq_class(2 * r, p_));
                t->cos_[k - 1].push_back(ang.cos_enclosure());
                t->sin_[k - 1].push_back(ang.sin_enclosure());
            }
        }
        trig_[level] = std::move(t);
    });
    return *trig_[level];
}

mpfr_prec_t precision_cap() {
    static mpfr_prec_t cap = [] {
        const char* s = std::getenv("CMLAT_PREC_CAP");
        if (!s) return (mpfr_prec_t)65536;
        long v = std::atol(s);
        return (mpfr_prec_t)(v >= 64 ? v : 65536);
    }();
    return cap;
}

int CMField::cm_orientation(unsigned k) const {
    if (k < 1 || k > g_) throw DomainError("embedding index out of range");
    return orientations_[k - 1];
}

mpq_class trace_to_Q(const FieldElement& a) {
    const CMField& f = a.field();
    mpq_class t = 0;
    for (size_t j = 0; j < f.degree_; ++j)
        if (a.coeff(j) != 0) t += a.coeff(j) * f.trace_basis_[j];
    return t;
}

unsigned long residue_mod_ramified_prime(const FieldElement& a) {
    if (!a.is_integral())
        throw DomainError("residue requires an integral element");
    const CMField& f = a.field();
    mpz_class acc = 0;
    for (size_t j = 0; j < f.degree_; ++j) {
        if (a.coeff(j) == 0) continue;
        acc += a.coeff(j).get_num() * (long)f.residue_basis_[j];
    }
    mpz_class r = acc % (long)f.p_;
    if (r < 0) r += f.p_;
    return r.get_ui();
}

int certified_sign(const FieldElement& a, unsigned k) {
    const CMField& f = a.field();
    if (k < 1 || k > f.real_degree())
        throw DomainError("embedding index out of range");
    if (!a.is_real())
        throw DomainError("certified_sign requires an element of the real subfield");
    if (a.is_zero()) return 0;
    if (f.kind() == FieldKind::ImagQuadratic) {
        // real elements have zero theta coefficient in both quadratic bases
        return sgn(a.coeff(0));
    }
    for (int level = 0; level < CMField::ladder_levels_; ++level) {
        mpfr_prec_t prec = mpfr_prec_t(64) << level;
        if (prec > precision_cap()) break;
        const auto& tab = f.trig_level(level);
        RealInterval r = RealInterval::exact(0L, prec);
        for (size_t j = 0; j < f.degree_; ++j) {
            if (a.coeff(j) == 0) continue;
            r += tab.cos_[k - 1][j].scaled(a.coeff(j));
        }
        if (r.definitely_positive()) return 1;
        if (r.definitely_negative()) return -1;
    }
    throw PrecisionError("sign of " + a.str() + " at embedding " + std::to_string(k) +
                         " not certified within precision cap " +
                         std::to_string((long)precision_cap()));
}

EmbeddingValue embed(const FieldElement& a, unsigned k, mpfr_prec_t prec) {
    const CMField& f = a.field();
    if (k < 1 || k > f.real_degree())
        throw DomainError("embedding index out of range");
    EmbeddingValue v{RealInterval::exact(0L, prec), RealInterval::exact(0L, prec)};
    if (f.kind() == FieldKind::ImagQuadratic) {
        RealInterval sqp = RealInterval::exact(mpq_class((long)f.p()), prec).sqrt_nonneg();
        if (f.p() % 4 == 3) {
            v.re = RealInterval::exact(a.coeff(0) + a.coeff(1) / 2, prec);
            v.im = sqp.scaled(a.coeff(1) / 2);
        } else {
            v.re = RealInterval::exact(a.coeff(0), prec);
            v.im = sqp.scaled(a.coeff(1));
        }
        return v;
    }
    RealInterval pi = RealInterval::pi(prec);
    int orient = f.cm_orientation(k);
    for (size_t j = 0; j < f.degree(); ++j) {
        if (a.coeff(j) == 0) continue;
        unsigned long r = ((unsigned long)k * j) % f.p();
        RealInterval ang = pi.scaled(mpq_class(2 * r, f.p()));
        v.re += ang.cos_enclosure().scaled(a.coeff(j));
        v.im += ang.sin_enclosure().scaled(a.coeff(j) * orient);
    }
    return v;
}

// ---------------------------------------------------------------------------
// registry

const CMField& CMField::get(FieldKind kind, unsigned p, unsigned tau_index) {
    static std::mutex mu;
    static std::map<std::tuple<int, unsigned, unsigned>, std::unique_ptr<CMField>> reg;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple((int)kind, p, tau_index);
    auto it = reg.find(key);
    if (it == reg.end()) {
        auto f = std::unique_ptr<CMField>(new CMField(kind, p, tau_index));
        it = reg.emplace(key, std::move(f)).first;
    }
    return *it->second;
}

}  // namespace cmlat
