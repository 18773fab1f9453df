#include "cmlat/volumes.hpp"

#include <mpfr.h>

#include <sstream>

#include "cmlat/errors.hpp"

namespace cmlat {

mpq_class bernoulli(unsigned k) {
    if (k % 2 == 1) throw DomainError("bernoulli index must be even");
    std::vector<mpq_class> B(k + 1);
    for (unsigned n = 0; n <= k; ++n) {
        if (n == 0) {
            B[0] = 1;
            continue;
        }
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        mpq_class s = 0;
        for (unsigned j = 0; j < n; ++j) {
            mpz_class c;
            mpz_bin_uiui(c.get_mpz_t(), n + 1, j);
            s += c * B[j];
        }
        B[n] = -s / mpq_class(n + 1);
    }
    return B[k];
}

mpq_class bernoulli_double_sum(unsigned k) {
    if (k % 2 == 1) throw DomainError("bernoulli index must be even");
    mpq_class out = 0;
    for (unsigned t = 0; t <= k; ++t) {
        mpq_class inner = 0;
        for (unsigned j = 0; j <= t; ++j) {
            mpz_class c, pw;
            mpz_bin_uiui(c.get_mpz_t(), t, j);
            if (j == 0)
                pw = (k == 0) ? 1 : 0;
            else
                mpz_ui_pow_ui(pw.get_mpz_t(), j, k);
            inner += (j % 2 ? -1 : 1) * mpq_class(c * pw);
        }
        out += inner / mpq_class(t + 1);
    }
    return out;
}

VolumeResult vol_psi0_even(unsigned r) {
    if (r < 1) throw DomainError("volume index must be at least 1");
    mpz_class two_r, fact;
    mpz_ui_pow_ui(two_r.get_mpz_t(), 2, r);
    mpz_fac_ui(fact.get_mpz_t(), 2 * r);
    int eps = (r % 4 == 0 || r % 4 == 1) ? 1 : -1;

    mpq_class c(two_r + eps, fact);
    c.canonicalize();
    for (unsigned k = 1; k <= r; ++k) {
        mpq_class b = bernoulli(2 * k);
        c *= abs(b);
    }

    VolumeResult out;
    out.r = r;
    out.coefficient = c;
    std::ostringstream os;
    os << c.get_str() << "*pi^" << r;
    out.symbolic = os.str();

    mpfr_t pi, v;
    mpfr_init2(pi, 128);
    mpfr_init2(v, 128);
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_pow_ui(v, pi, r, MPFR_RNDN);
    mpfr_mul_q(v, v, c.get_mpq_t(), MPFR_RNDN);
    out.value = mpfr_get_d(v, MPFR_RNDN);
    mpfr_clear(pi);
    mpfr_clear(v);
    return out;
}

FieldElement cyclotomic_unit(unsigned p, unsigned a) {
    if (!(1 < a && 2 * a < p)) throw DomainError("unit index out of range");
    const CMField& f = CMField::get(FieldKind::Cyclotomic, p, 0);
    FieldElement z = FieldElement::theta(f);
    FieldElement za = FieldElement::one(f);
    for (unsigned t = 0; t < a; ++t) za = za * z;
    unsigned long inv2 = (p + 1) / 2;
    long raw = (long)((1 - (long)a) * (long)inv2) % (long)p;
    unsigned expo = (unsigned)((raw + (long)p) % (long)p);
    FieldElement ze = FieldElement::one(f);
    for (unsigned t = 0; t < expo; ++t) ze = ze * z;

    FieldElement one = FieldElement::one(f);
    FieldElement lam = ze * (za - one) * (z - one).inverse();
    if (!lam.is_integral() || !lam.is_real() || !lam.inverse().is_integral())
        throw DomainError("cyclotomic unit construction failed");
    return lam;
}

std::vector<int> sign_pattern(const FieldElement& lambda) {
    if (lambda.is_zero()) throw DomainError("sign pattern of zero");
    if (!lambda.is_real()) throw DomainError("element is not fixed by sigma");
    const CMField& f = lambda.field();
    std::vector<int> signs(f.real_degree());
    for (unsigned k = 1; k <= f.real_degree(); ++k)
        signs[k - 1] = certified_sign(lambda, k);
    return signs;
}

UnitCandidate verify_unit(const FieldElement& lambda) {
    if (!lambda.is_integral() || lambda.is_zero() || !lambda.is_real())
        throw DomainError("not a totally real integral element");
    if (!lambda.inverse().is_integral()) throw DomainError("not a unit");
    const CMField& f = lambda.field();

    UnitCandidate c;
    c.lambda = lambda;
    c.signs = sign_pattern(lambda);
    c.residue = residue_mod_ramified_prime(lambda);
    int positives = 0;
    for (int s : c.signs) positives += (s > 0);
    c.admissible = (positives == 1) && (c.residue != f.p() - 1);
    return c;
}

std::optional<UnitCandidate> search_admissible_unit(unsigned p, unsigned bound) {
    if (p == 3) {
        const CMField& f = CMField::get(FieldKind::Cyclotomic, 3, 0);
        UnitCandidate c = verify_unit(-FieldElement::one(f));
        c.admissible = true;  // both lemma conditions are dispensed at p = 3
        c.note = "p = 3: -1 by convention; -lambda = 1 recovers the Eisenstein form";
        return c;
    }

    std::vector<FieldElement> base;
    for (unsigned a = 2; 2 * a < p; ++a) base.push_back(cyclotomic_unit(p, a));
    size_t nb = base.size();
    if (nb == 0) return std::nullopt;

    const CMField& f = base[0].field();
    FieldElement one = FieldElement::one(f);

    // graded lexicographic over exponent vectors in [-bound, bound]^nb
    for (unsigned grade = 0; grade <= bound * nb; ++grade) {
        std::vector<long> e(nb, -(long)bound);
        while (true) {
            long g1 = 0;
            for (long v : e) g1 += std::abs(v);
            if (g1 == (long)grade) {
                FieldElement prod = one;
                for (size_t t = 0; t < nb; ++t) {
                    FieldElement pw = e[t] >= 0 ? base[t] : base[t].inverse();
                    for (long q = 0; q < std::abs(e[t]); ++q) prod = prod * pw;
                }
                for (int s : {+1, -1}) {
                    UnitCandidate c = verify_unit(s > 0 ? prod : -prod);
                    if (c.admissible) {
                        std::ostringstream os;
                        os << (s > 0 ? "+" : "-") << "prod lambda_a^e, e = (";
                        for (size_t t = 0; t < nb; ++t)
                            os << (t ? "," : "") << e[t];
                        os << ")";
                        c.note = os.str();
                        return c;
                    }
                }
            }
            size_t t = nb;
            while (t > 0 && e[t - 1] == (long)bound) e[--t] = -(long)bound;
            if (t == 0) break;
            ++e[t - 1];
        }
    }
    return std::nullopt;
}

}  // namespace cmlat
