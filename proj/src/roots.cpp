#include "cmlat/roots.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "cmlat/errors.hpp"

namespace cmlat {

KVector vector_from_coords(const CMField& f, const std::vector<long>& c, size_t rank) {
    unsigned D = f.degree();
    if (c.size() != rank * D)
        throw DomainError("coordinate vector length does not match rank * degree");
    KVector v;
    v.reserve(rank);
    for (size_t i = 0; i < rank; ++i) {
        std::vector<mpq_class> cf(D);
        for (unsigned j = 0; j < D; ++j) cf[j] = c[i * D + j];
        v.emplace_back(f, std::move(cf));
    }
    return v;
}

std::vector<long> coords_from_vector(const KVector& v) {
    std::vector<long> c;
    for (const auto& e : v) {
        if (!e.is_integral())
            throw DomainError("vector is not integral");
        for (size_t j = 0; j < e.coeffs().size(); ++j) {
            if (!e.coeff(j).get_num().fits_slong_p())
                throw DomainError("coordinate too large for machine integer");
            c.push_back(e.coeff(j).get_num().get_si());
        }
    }
    return c;
}

bool is_short_root(const HermitianLattice& lat, const KVector& r) {
    for (const auto& e : r)
        if (!e.is_integral()) return false;
    return lat.inner(r, r) == FieldElement::one(lat.field());
}

void require_negative_point(const HermitianLattice& lat, const KVector& x) {
    if (!lat.admissible())
        throw DomainError("lattice is not admissible");
    if (x.size() != lat.rank())
        throw DomainError("point length does not match lattice rank");
    bool nonzero = false;
    for (const auto& e : x) {
        if (!e.is_integral())
            throw DomainError("point must have entries in O_K");
        if (!e.is_zero()) nonzero = true;
    }
    if (!nonzero) throw DomainError("point must be nonzero");
    if (certified_sign(lat.inner(x, x), lat.hyperbolic_embedding()) >= 0)
        throw DomainError("point is not negative at the hyperbolic embedding");
}

int configured_threads() {
    const char* s = std::getenv("CMLAT_THREADS");
    if (s) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return omp_get_max_threads();
}

// ---------------------------------------------------------------------------
// Majorant

Majorant::Majorant(const HermitianLattice& lat, const KVector& x) {
    require_negative_point(lat, x);
    const CMField& f = lat.field();
    unsigned D = f.degree();
    size_t n1 = lat.rank();
    dim_ = n1 * D;
    tau_ = lat.hyperbolic_embedding();

    std::vector<FieldElement> pw;  // theta^j
    FieldElement b = FieldElement::one(f);
    FieldElement th = FieldElement::theta(f);
    for (unsigned j = 0; j < D; ++j) {
        pw.push_back(b);
        b = b * th;
    }
    std::vector<KVector> basis;
    basis.reserve(dim_);
    for (size_t i = 0; i < n1; ++i)
        for (unsigned j = 0; j < D; ++j) {
            KVector e = kvector_zero(f, n1);
            e[i] = pw[j];
            basis.push_back(std::move(e));
        }

    std::vector<FieldElement> hx(dim_);  // h(b_a, x)
    for (size_t a = 0; a < dim_; ++a) hx[a] = lat.inner(basis[a], x);
    FieldElement cinv = (-lat.inner(x, x)).inverse();

    W_.assign(dim_ * dim_, FieldElement::zero(f));
    for (size_t a = 0; a < dim_; ++a)
        for (size_t bb = a; bb < dim_; ++bb) {
            FieldElement hab = lat.inner(basis[a], basis[bb]);
            mpq_class r = trace_to_Q(hab) / 2;
            FieldElement w =
                (hx[a] * hx[bb].conj() + hx[bb] * hx[a].conj()) * cinv;
            FieldElement total = FieldElement::rational(f, r) + w;
            if (!total.is_real())
                throw DomainError("majorant entry is not totally real");
            W_[a * dim_ + bb] = total;
            W_[bb * dim_ + a] = std::move(total);
        }
}

FieldElement Majorant::value(const std::vector<long>& c) const {
    if (c.size() != dim_) throw DomainError("coordinate length mismatch");
    const CMField& f = entry(0, 0).field();
    FieldElement acc = FieldElement::zero(f);
    for (size_t a = 0; a < dim_; ++a) {
        if (c[a] == 0) continue;
        for (size_t b = a; b < dim_; ++b) {
            if (c[b] == 0) continue;
            mpq_class s = mpq_class(c[a]) * c[b];
            if (b != a) s *= 2;
            acc += entry(a, b).scaled(s);
        }
    }
    return acc;
}

std::vector<std::vector<double>> Majorant::midpoint_gram(mpfr_prec_t prec) const {
    std::vector<std::vector<double>> G(dim_, std::vector<double>(dim_));
    for (size_t a = 0; a < dim_; ++a)
        for (size_t b = a; b < dim_; ++b) {
            const FieldElement& w = entry(a, b);
            double v;
            if (w.is_rational()) {
                v = w.coeff(0).get_d();
            } else {
                v = embed(w, tau_, prec).re.midpoint();
            }
            G[a][b] = G[b][a] = v;
        }
    return G;
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration

namespace {

std::vector<std::vector<double>> cholesky_upper(
    const std::vector<std::vector<double>>& G) {
    size_t n = G.size();
    std::vector<std::vector<double>> U(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        double d = G[i][i];
        for (size_t k = 0; k < i; ++k) d -= U[k][i] * U[k][i];
        if (!(d > 0))
            throw DomainError("majorant Gram is not numerically positive definite");
        U[i][i] = std::sqrt(d);
        for (size_t j = i + 1; j < n; ++j) {
            double s = G[i][j];
            for (size_t k = 0; k < i; ++k) s -= U[k][i] * U[k][j];
            U[i][j] = s / U[i][i];
        }
    }
    return U;
}

constexpr double kBoundSlack = 1e-9;

// Backtracking over levels top..0; zero_prefix restricts to the half-space
// where the leading nonzero coordinate is positive.
void enumerate_levels(const std::vector<std::vector<double>>& U, double budget,
                      int level, std::vector<long>& c, double used,
                      bool zero_prefix, std::vector<std::vector<long>>& sink) {
    size_t n = U.size();
    double s = 0;
    for (size_t j = level + 1; j < n; ++j) s += U[level][j] * c[j];
    double rem = budget - used;
    if (rem < 0) return;
    double rad = std::sqrt(rem);
    double dii = U[level][level];
    long lo = (long)std::ceil((-rad - s) / dii - kBoundSlack);
    long hi = (long)std::floor((rad - s) / dii + kBoundSlack);
    if (zero_prefix && lo < 0) lo = 0;
    for (long v = lo; v <= hi; ++v) {
        double contrib = dii * v + s;
        double next_used = used + contrib * contrib;
        if (next_used > budget * (1 + kBoundSlack)) continue;
        c[level] = v;
        if (level == 0) {
            bool allzero = true;
            for (size_t j = 0; j < n; ++j)
                if (c[j] != 0) { allzero = false; break; }
            if (!allzero) sink.push_back(c);
        } else {
            enumerate_levels(U, budget, level - 1, c, next_used,
                             zero_prefix && v == 0, sink);
        }
    }
    c[level] = 0;
}

struct EnumSetup {
    Majorant maj;
    std::vector<std::vector<double>> U;
    double budget;
};

ShortRootList filter_and_emit(const HermitianLattice& lat, const Majorant& maj,
                              const mpq_class& B,
                              const std::vector<std::vector<long>>& candidates,
                              int threads) {
    const CMField& f = lat.field();
    FieldElement Bf = FieldElement::rational(f, B);
    FieldElement one = FieldElement::one(f);
    size_t n1 = lat.rank();
    std::vector<std::vector<long>> out;
#pragma omp parallel num_threads(threads)
    {
        std::vector<std::vector<long>> local;
#pragma omp for schedule(dynamic, 64)
        for (long idx = 0; idx < (long)candidates.size(); ++idx) {
            const auto& c = candidates[idx];
            KVector v = vector_from_coords(f, c, n1);
            if (!(lat.inner(v, v) == one)) continue;
            FieldElement diff = Bf - maj.value(c);
            if (certified_sign(diff, maj.tau()) < 0) continue;
            local.push_back(c);
            std::vector<long> neg(c.size());
            for (size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
            local.push_back(std::move(neg));
        }
#pragma omp critical
        out.insert(out.end(), local.begin(), local.end());
    }
    std::sort(out.begin(), out.end());
    ShortRootList r;
    r.roots = std::move(out);
    r.candidates = candidates.size();
    r.threads = threads;
    return r;
}

bool below_minimum(const CMField& f, const mpq_class& B, ShortRootList& out) {
    if (B < (long)f.real_degree()) {
        out.note = "bound below the minimum majorant value of a short root; "
                   "result provably empty";
        return true;
    }
    return false;
}

}  // namespace

ShortRootList enumerate_short_roots_near_serial(const HermitianLattice& lat,
                                                const KVector& x,
                                                const mpq_class& B) {
    ShortRootList empty;
    if (below_minimum(lat.field(), B, empty)) {
        require_negative_point(lat, x);
        return empty;
    }
    Majorant maj(lat, x);
    auto U = cholesky_upper(maj.midpoint_gram());
    double budget = B.get_d() * (1.0 + std::ldexp(1.0, -20));
    std::vector<std::vector<long>> candidates;
    std::vector<long> c(maj.dim(), 0);
    enumerate_levels(U, budget, (int)maj.dim() - 1, c, 0.0, true, candidates);
    ShortRootList r = filter_and_emit(lat, maj, B, candidates, 1);
    r.threads = 1;
    return r;
}

ShortRootList enumerate_short_roots_near(const HermitianLattice& lat,
                                         const KVector& x, const mpq_class& B) {
    ShortRootList empty;
    if (below_minimum(lat.field(), B, empty)) {
        require_negative_point(lat, x);
        return empty;
    }
    int threads = configured_threads();
    Majorant maj(lat, x);
    auto U = cholesky_upper(maj.midpoint_gram());
    double budget = B.get_d() * (1.0 + std::ldexp(1.0, -20));
    size_t n = maj.dim();
    int top = (int)n - 1;
    long hi = (long)std::floor(std::sqrt(budget) / U[top][top] + kBoundSlack);
    std::vector<std::vector<long>> candidates;
    if (top == 0) {
        std::vector<long> c(1, 0);
        enumerate_levels(U, budget, 0, c, 0.0, true, candidates);
    } else {
#pragma omp parallel num_threads(threads)
        {
            std::vector<std::vector<long>> local;
            std::vector<long> c(n, 0);
#pragma omp for schedule(dynamic)
            for (long v = 0; v <= hi; ++v) {
                double contrib = U[top][top] * v;
                double used = contrib * contrib;
                if (used > budget * (1 + kBoundSlack)) continue;
                c.assign(n, 0);
                c[top] = v;
                enumerate_levels(U, budget, top - 1, c, used, v == 0, local);
            }
#pragma omp critical
            candidates.insert(candidates.end(), local.begin(), local.end());
        }
    }
    return filter_and_emit(lat, maj, B, candidates, threads);
}

// ---------------------------------------------------------------------------
// hyperplane predicates and reflections

namespace {

void require_root(const HermitianLattice& lat, const KVector& r) {
    if (!is_short_root(lat, r))
        throw DomainError("vector is not a short root (h(r,r) must be 1)");
}

}  // namespace

bool same_hyperplane(const HermitianLattice& lat, const KVector& r,
                     const KVector& t) {
    require_root(lat, r);
    require_root(lat, t);
    const CMField& f = lat.field();
    size_t i = 0;
    while (i < r.size() && r[i].is_zero()) ++i;
    if (t[i].is_zero()) return false;
    FieldElement c = t[i] * r[i].inverse();
    for (size_t j = 0; j < r.size(); ++j)
        if (!(t[j] == c * r[j])) return false;
    return norm_to_F(c) == FieldElement::one(f);
}

bool hyperplanes_meet(const HermitianLattice& lat, const KVector& r,
                      const KVector& t) {
    if (same_hyperplane(lat, r, t))
        throw DomainError("hyperplanes coincide; meet is undefined");
    FieldElement w = lat.inner(r, t);
    FieldElement crit = FieldElement::one(lat.field()) - norm_to_F(w);
    return certified_sign(crit, lat.hyperbolic_embedding()) > 0;
}

KMatrix reflection_matrix(const HermitianLattice& lat, const KVector& r, long i) {
    require_root(lat, r);
    const CMField& f = lat.field();
    unsigned m = f.torsion_order();
    long e = ((i % (long)m) + (long)m) % (long)m;
    FieldElement factor = FieldElement::one(f) - f.torsion_units()[e];
    size_t n1 = lat.rank();
    // h(e_k, r) for each basis vector
    KVector hk = kvector_zero(f, n1);
    for (size_t k = 0; k < n1; ++k)
        for (size_t l = 0; l < n1; ++l) {
            if (lat.gram().at(k, l).is_zero() || r[l].is_zero()) continue;
            hk[k] += lat.gram().at(k, l) * r[l].conj();
        }
    KMatrix M = KMatrix::identity(f, n1);
    for (size_t j = 0; j < n1; ++j)
        for (size_t k = 0; k < n1; ++k) {
            if (r[j].is_zero() || hk[k].is_zero()) continue;
            M.at(j, k) = M.at(j, k) - factor * hk[k] * r[j];
        }
    if (!M.is_integral())
        throw DomainError("reflection matrix is not integral");
    return M;
}

// ---------------------------------------------------------------------------
// nodes

std::vector<std::vector<long>> nodes_at_point(const HermitianLattice& lat,
                                              const KVector& x) {
    require_negative_point(lat, x);
    const CMField& f = lat.field();
    unsigned D = f.degree();
    size_t n1 = lat.rank();
    size_t N = n1 * D;

    std::vector<FieldElement> pw;
    FieldElement b = FieldElement::one(f);
    FieldElement th = FieldElement::theta(f);
    for (unsigned j = 0; j < D; ++j) {
        pw.push_back(b);
        b = b * th;
    }

    // Z-matrix of v -> h(v, x) on the Z-basis
    ZMatrix M(N, std::vector<mpz_class>(D));
    for (size_t i = 0; i < n1; ++i)
        for (unsigned j = 0; j < D; ++j) {
            KVector e = kvector_zero(f, n1);
            e[i] = pw[j];
            FieldElement val = lat.inner(e, x);
            if (!val.is_integral())
                throw DomainError("inner product against point is not integral");
            for (unsigned l = 0; l < D; ++l)
                M[i * D + j][l] = val.coeff(l).get_num();
        }
    ZMatrix ker = left_kernel(M);
    size_t kd = ker.size();
    if (kd == 0) return {};

    std::vector<KVector> kvecs;
    for (size_t u = 0; u < kd; ++u) {
        std::vector<long> c(N);
        for (size_t a = 0; a < N; ++a) {
            if (!ker[u][a].fits_slong_p())
                throw DomainError("kernel coordinate too large");
            c[a] = ker[u][a].get_si();
        }
        kvecs.push_back(vector_from_coords(f, c, n1));
    }

    // On x-perp the majorant is Tr_F(h(v,v)); roots sit exactly on level g.
    QMatrix Q(kd, std::vector<mpq_class>(kd));
    for (size_t u = 0; u < kd; ++u)
        for (size_t v = u; v < kd; ++v) {
            mpq_class val = trace_to_Q(lat.inner(kvecs[u], kvecs[v])) / 2;
            Q[u][v] = Q[v][u] = val;
        }
    std::vector<std::vector<double>> Gd(kd, std::vector<double>(kd));
    for (size_t u = 0; u < kd; ++u)
        for (size_t v = 0; v < kd; ++v) Gd[u][v] = Q[u][v].get_d();
    auto U = cholesky_upper(Gd);
    double budget = (double)f.real_degree() * (1.0 + std::ldexp(1.0, -20));
    std::vector<std::vector<long>> kcands;
    std::vector<long> c(kd, 0);
    enumerate_levels(U, budget, (int)kd - 1, c, 0.0, true, kcands);

    FieldElement one = FieldElement::one(f);
    std::vector<std::vector<long>> roots;
    for (const auto& kc : kcands) {
        KVector v = kvector_zero(f, n1);
        for (size_t u = 0; u < kd; ++u) {
            if (kc[u] == 0) continue;
            FieldElement s = FieldElement::rational(f, mpq_class(kc[u]));
            for (size_t t = 0; t < n1; ++t) v[t] += s * kvecs[u][t];
        }
        if (!(lat.inner(v, v) == one)) continue;
        std::vector<long> amb = coords_from_vector(v);
        roots.push_back(amb);
        for (auto& z : amb) z = -z;
        roots.push_back(std::move(amb));
    }
    std::sort(roots.begin(), roots.end());

    std::vector<std::vector<long>> reps;
    std::vector<KVector> repvecs;
    for (const auto& rc : roots) {
        KVector rv = vector_from_coords(f, rc, n1);
        bool fresh = true;
        for (const auto& pv : repvecs)
            if (same_hyperplane(lat, pv, rv)) { fresh = false; break; }
        if (fresh) {
            reps.push_back(rc);
            repvecs.push_back(std::move(rv));
        }
    }
    return reps;
}

// ---------------------------------------------------------------------------
// orthogonality audit

AuditReport orthogonality_audit(const HermitianLattice& lat, const mpq_class& B,
                                const KVector* base) {
    if (lat.rank() < 3)
        throw DomainError("orthogonality audit requires rank at least 3");
    const CMField& f = lat.field();
    KVector x;
    if (base) {
        x = *base;
    } else {
        bool diag = true;
        for (size_t i = 0; i < lat.rank() && diag; ++i)
            for (size_t j = 0; j < lat.rank() && diag; ++j)
                if (i != j && !lat.gram().at(i, j).is_zero()) diag = false;
        if (!diag)
            throw DomainError(
                "non-diagonal Gram: a negative base vector must be supplied");
        x = kvector_zero(f, lat.rank());
        x[0] = FieldElement::one(f);
    }
    ShortRootList rl = enumerate_short_roots_near(lat, x, B);
    size_t n = rl.roots.size();
    std::vector<KVector> rv;
    rv.reserve(n);
    for (const auto& c : rl.roots) rv.push_back(vector_from_coords(f, c, lat.rank()));

    AuditReport rep;
    rep.root_count = n;
    unsigned tau = lat.hyperbolic_embedding();
    FieldElement one = FieldElement::one(f);

    // Group the roots into hyperplane classes first.  Among short roots a
    // K-proportionality t = c r forces N(c) = 1 (compare h(t,t) = N(c)
    // h(r,r) = 1), so classes are exactly the K-lines, keyed by the
    // projective normalization at the first nonzero slot.  The meet
    // criterion and orthogonality only see N(h), which is invariant under
    // norm-one rescaling of either argument, so each class pair is decided
    // once and weighted by the product of class sizes.
    std::map<std::string, size_t> class_of;
    std::vector<std::vector<size_t>> members;
    for (size_t i = 0; i < n; ++i) {
        size_t s = 0;
        while (s < lat.rank() && rv[i][s].is_zero()) ++s;
        FieldElement inv = rv[i][s].inverse();
        std::string key = std::to_string(s);
        for (size_t j = 0; j < lat.rank(); ++j) {
            key += '|';
            key += (rv[i][j] * inv).str();
        }
        auto [it, fresh] = class_of.try_emplace(key, members.size());
        if (fresh) members.emplace_back();
        members[it->second].push_back(i);
    }
    size_t nc = members.size();

    size_t same_h = 0, meets = 0;
    for (const auto& cls : members) same_h += cls.size() * (cls.size() - 1) / 2;

    std::vector<AuditViolation> viols;
    int threads = configured_threads();
#pragma omp parallel num_threads(threads) reduction(+ : meets)
    {
        std::vector<AuditViolation> local;
#pragma omp for schedule(dynamic, 8)
        for (long a = 0; a < (long)nc; ++a) {
            for (size_t b = a + 1; b < nc; ++b) {
                FieldElement w = lat.inner(rv[members[a][0]], rv[members[b][0]]);
                FieldElement crit = one - norm_to_F(w);
                if (certified_sign(crit, tau) <= 0) continue;
                meets += members[a].size() * members[b].size();
                if (w.is_zero()) continue;
                for (size_t i : members[a])
                    for (size_t j : members[b]) {
                        AuditViolation v;
                        size_t lo = std::min(i, j), hi = std::max(i, j);
                        v.r = rl.roots[lo];
                        v.t = rl.roots[hi];
                        v.h_rt = lat.inner(rv[lo], rv[hi]).str();
                        local.push_back(std::move(v));
                    }
            }
        }
#pragma omp critical
        viols.insert(viols.end(), local.begin(), local.end());
    }
    std::sort(viols.begin(), viols.end(),
              [](const AuditViolation& a, const AuditViolation& b) {
                  if (a.r != b.r) return a.r < b.r;
                  return a.t < b.t;
              });
    rep.same_hyperplane_pairs = same_h;
    rep.pairs_checked = n * (n - 1) / 2 - same_h;
    rep.meeting_pairs = meets;
    rep.violations = std::move(viols);
    return rep;
}

// ---------------------------------------------------------------------------
// fixed locus of a reflection word

bool proportional_over_K(const KVector& u, const KVector& v, FieldElement* ratio) {
    size_t i = 0;
    while (i < v.size() && v[i].is_zero()) ++i;
    if (i == v.size()) return kvector_is_zero(u);
    if (u[i].is_zero()) return false;
    FieldElement c = u[i] * v[i].inverse();
    for (size_t j = 0; j < v.size(); ++j)
        if (!(u[j] == c * v[j])) return false;
    if (ratio) *ratio = c;
    return true;
}

std::vector<WordSampleCheck> fixed_locus_of_word(
    const HermitianLattice& lat,
    const std::vector<std::pair<KVector, long>>& word,
    const std::vector<KVector>& samples) {
    const CMField& f = lat.field();
    unsigned m = f.torsion_order();
    for (const auto& [r, e] : word) {
        require_root(lat, r);
        if (((e % (long)m) + (long)m) % (long)m == 0)
            throw DomainError("word exponent is zero mod m");
    }
    for (size_t a = 0; a < word.size(); ++a)
        for (size_t b = a + 1; b < word.size(); ++b)
            if (!lat.inner(word[a].first, word[b].first).is_zero())
                throw DomainError("word roots are not pairwise orthogonal");

    KMatrix W = KMatrix::identity(f, lat.rank());
    for (const auto& [r, e] : word) W = W * reflection_matrix(lat, r, e);

    std::vector<WordSampleCheck> out;
    for (const auto& x : samples) {
        require_negative_point(lat, x);
        WordSampleCheck c{};
        c.fixed = proportional_over_K(apply_matrix(W, x), x);
        c.on_all_hyperplanes = true;
        for (const auto& [r, e] : word)
            if (!lat.inner(x, r).is_zero()) {
                c.on_all_hyperplanes = false;
                break;
            }
        c.agree = (c.fixed == c.on_all_hyperplanes);
        out.push_back(c);
    }
    return out;
}

}  // namespace cmlat
