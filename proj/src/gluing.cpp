#include "cmlat/gluing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cmlat/errors.hpp"

namespace cmlat {

namespace {

void require_isometry(const HermitianLattice& lat, const KMatrix& g) {
    size_t n = lat.rank();
    if (g.rows() != n || g.cols() != n || !(g.field() == lat.field()))
        throw DomainError("matrix has wrong shape");
    if (!g.is_integral() || !g.inverse().is_integral())
        throw DomainError("g does not preserve the lattice");
    if (g.transpose() * lat.gram() * g.conj() != lat.gram())
        throw DomainError("g is not an isometry");
}

std::vector<FieldElement> zeta_powers(const CMField& f) {
    unsigned m = f.torsion_order();
    std::vector<FieldElement> zp(m);
    zp[0] = FieldElement::one(f);
    for (unsigned i = 1; i < m; ++i) zp[i] = zp[i - 1] * f.zeta();
    return zp;
}

// torsion scalar c with alpha(x) = c x, or throws
FieldElement fixed_point_scalar(const CMField& f, const AntiUnitaryInvolution& alpha,
                                const KVector& x) {
    FieldElement c;
    if (!proportional_over_K(alpha(x), x, &c))
        throw DomainError("x is not fixed by the involution up to a scalar");
    for (const auto& u : f.torsion_units())
        if (c == u) return c;
    throw DomainError("x is fixed only up to a non-torsion scalar");
}

}  // namespace

NodeStructure node_structure(const HermitianLattice& lat, const KVector& x,
                             const AntiUnitaryInvolution& alpha) {
    const CMField& f = lat.field();
    require_negative_point(lat, x);
    fixed_point_scalar(f, alpha, x);

    auto reps = nodes_at_point(lat, x);
    size_t k = reps.size();
    std::vector<KVector> rv;
    rv.reserve(k);
    for (const auto& c : reps) rv.push_back(vector_from_coords(f, c, lat.rank()));

    std::vector<size_t> perm(k, SIZE_MAX);
    for (size_t i = 0; i < k; ++i) {
        KVector img = alpha(rv[i]);
        for (size_t j = 0; j < k; ++j)
            if (same_hyperplane(lat, img, rv[j])) {
                perm[i] = j;
                break;
            }
        if (perm[i] == SIZE_MAX)
            throw DomainError(
                "internal inconsistency: image of a node hyperplane is not a "
                "node hyperplane");
    }
    for (size_t i = 0; i < k; ++i)
        if (perm[perm[i]] != i)
            throw DomainError("internal inconsistency: induced map is not an involution");

    // relabel: 2-cycles first as adjacent pairs, fixed nodes last
    std::vector<std::pair<size_t, size_t>> cycles;
    std::vector<size_t> fixed;
    for (size_t i = 0; i < k; ++i) {
        if (perm[i] == i)
            fixed.push_back(i);
        else if (i < perm[i])
            cycles.emplace_back(i, perm[i]);
    }
    std::sort(cycles.begin(), cycles.end(),
              [&](auto& l, auto& r) { return reps[l.first] < reps[r.first]; });
    std::sort(fixed.begin(), fixed.end(),
              [&](size_t l, size_t r) { return reps[l] < reps[r]; });

    NodeStructure ns;
    ns.a = cycles.size();
    ns.b = fixed.size();
    for (const auto& [i, j] : cycles) {
        ns.reps.push_back(reps[i]);
        ns.reps.push_back(reps[j]);
        size_t t = ns.perm.size();
        ns.perm.push_back(t + 1);
        ns.perm.push_back(t);
    }
    for (size_t i : fixed) {
        ns.reps.push_back(reps[i]);
        ns.perm.push_back(ns.perm.size());
    }
    return ns;
}

std::optional<LocalGroupElement> membership_in_local_group(
    const HermitianLattice& lat, const KVector& x, const KMatrix& g) {
    const CMField& f = lat.field();
    require_isometry(lat, g);
    require_negative_point(lat, x);

    auto reps = nodes_at_point(lat, x);
    size_t k = reps.size(), n = lat.rank();
    std::vector<KVector> rv;
    for (const auto& c : reps) rv.push_back(vector_from_coords(f, c, n));

    // K-basis of span(x, r_1..r_k)^perp from the h-functionals
    KMatrix rowsM(f, k + 1, n);
    for (size_t j = 0; j < n; ++j) {
        KVector e = kvector_zero(f, n);
        e[j] = FieldElement::one(f);
        rowsM.at(0, j) = lat.inner(e, x);
        for (size_t t = 0; t < k; ++t) rowsM.at(t + 1, j) = lat.inner(e, rv[t]);
    }
    auto comp = right_kernel_K(rowsM);

    auto zp = zeta_powers(f);
    for (const auto& u : f.torsion_units()) {
        KMatrix T = g.scaled(u);
        if (!(apply_matrix(T, x) == x)) continue;
        std::vector<long> expo(k, -1);
        bool ok = true;
        for (size_t t = 0; t < k && ok; ++t) {
            FieldElement c;
            if (!proportional_over_K(apply_matrix(T, rv[t]), rv[t], &c)) {
                ok = false;
                break;
            }
            for (size_t i = 0; i < zp.size(); ++i)
                if (c == zp[i]) {
                    expo[t] = (long)i;
                    break;
                }
            if (expo[t] < 0) ok = false;
        }
        if (!ok) continue;
        for (const auto& w : comp)
            if (!(apply_matrix(T, w) == w)) {
                ok = false;
                break;
            }
        if (!ok) continue;

        KMatrix prod = KMatrix::identity(f, n);
        for (size_t t = 0; t < k; ++t)
            prod = prod * reflection_matrix(lat, rv[t], expo[t]);
        if (T != prod)
            throw DomainError(
                "internal inconsistency: diagonal action does not reconstruct "
                "the reflection word");
        return LocalGroupElement{std::move(expo), u};
    }
    return std::nullopt;
}

bool decide_glued(const HermitianLattice& lat, const KVector& x,
                  const AntiUnitaryInvolution& alpha, const KVector& y,
                  const AntiUnitaryInvolution& beta) {
    const CMField& f = lat.field();
    require_negative_point(lat, x);
    require_negative_point(lat, y);
    fixed_point_scalar(f, alpha, x);
    fixed_point_scalar(f, beta, y);
    if (!proportional_over_K(y, x)) return false;
    KMatrix g = beta.A * alpha.A.conj();  // beta o alpha as a K-linear map
    return membership_in_local_group(lat, x, g).has_value();
}

EquivalentCount equivalent_involution_count(const HermitianLattice& lat,
                                            const KVector& x,
                                            const AntiUnitaryInvolution& alpha) {
    const CMField& f = lat.field();
    NodeStructure ns = node_structure(lat, x, alpha);
    unsigned m = f.torsion_order();

    EquivalentCount out;
    out.k = ns.k();
    out.a = ns.a;
    out.b = ns.b;
    mpz_ui_pow_ui(out.closed_form.get_mpz_t(), m, ns.a + ns.b);

    std::vector<KVector> rv;
    for (const auto& c : ns.reps) rv.push_back(vector_from_coords(f, c, lat.rank()));
    std::vector<std::vector<KMatrix>> refl(out.k);
    for (size_t t = 0; t < out.k; ++t)
        for (unsigned i = 0; i < m; ++i)
            refl[t].push_back(reflection_matrix(lat, rv[t], i));

    mpz_class count = 0;
    std::vector<unsigned> e(out.k, 0);
    while (true) {
        KMatrix W = KMatrix::identity(f, lat.rank());
        for (size_t t = 0; t < out.k; ++t)
            if (e[t]) W = W * refl[t][e[t]];
        if (validate_involution(lat, W * alpha.A).valid) ++count;
        size_t t = 0;
        while (t < out.k && ++e[t] == m) e[t++] = 0;
        if (t == out.k) break;
    }
    out.brute = count;
    out.agree = (out.brute == out.closed_form);
    return out;
}

mpz_class sheet_count(const HermitianLattice& lat, const KVector& x,
                      const AntiUnitaryInvolution& alpha) {
    NodeStructure ns = node_structure(lat, x, alpha);
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), lat.field().torsion_order(), ns.a);
    return s;
}

RelationReport relation_properties_check(
    const HermitianLattice& lat,
    const std::vector<std::pair<KVector, AntiUnitaryInvolution>>& samples) {
    size_t n = samples.size();
    RelationReport rep;
    rep.sample_count = n;

    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            rel[i][j] = decide_glued(lat, samples[i].first, samples[i].second,
                                     samples[j].first, samples[j].second);

    auto flag = [&rep](bool& axiom, const std::string& msg) {
        axiom = false;
        rep.violations.push_back(msg);
    };
    for (size_t i = 0; i < n; ++i)
        if (!rel[i][i]) {
            std::ostringstream os;
            os << "not reflexive at sample " << i;
            flag(rep.reflexive, os.str());
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (rel[i][j] != rel[j][i]) {
                std::ostringstream os;
                os << "not symmetric at samples (" << i << ", " << j << ")";
                flag(rep.symmetric, os.str());
            }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t t = 0; t < n; ++t)
                if (rel[i][j] && rel[j][t] && !rel[i][t]) {
                    std::ostringstream os;
                    os << "not transitive at samples (" << i << ", " << j << ", "
                       << t << ")";
                    flag(rep.transitive, os.str());
                }
    return rep;
}

TorsionNormalForm torsion_normal_form(unsigned m, long j_num, long j_den,
                                      bool negative_magnitude) {
    if (j_den == 0) throw DomainError("zero denominator in torsion exponent");
    if (j_num % j_den != 0)
        throw DomainError(
            "not in T: the phase is not an integral power of zeta_2m");
    long j = j_num / j_den;
    long two_m = 2 * (long)m;
    j %= two_m;
    if (j < 0) j += two_m;
    if (negative_magnitude) j = (j + (long)m) % two_m;

    unsigned e = 0;
    for (unsigned q = m; q % 2 == 0; q /= 2) ++e;

    TorsionNormalForm out;
    out.epsilon = (int)(j % 2);
    if (out.epsilon == 0) {
        out.tag = "r";
    } else {
        std::ostringstream os;
        os << "zeta_" << (1ul << (e + 1)) << "*r";
        out.tag = os.str();
    }
    return out;
}

}  // namespace cmlat
