#include "cmlat/interval.hpp"

#include <sstream>
#include <utility>

namespace cmlat {

RealInterval::RealInterval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

RealInterval::RealInterval(const RealInterval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

RealInterval::RealInterval(RealInterval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

RealInterval& RealInterval::operator=(const RealInterval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

RealInterval& RealInterval::operator=(RealInterval&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

RealInterval::~RealInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

RealInterval RealInterval::exact(const mpq_class& q, mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::exact(long v, mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::pi(mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator+(const RealInterval& o) const {
    RealInterval r(std::max(prec_, o.prec_));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

RealInterval& RealInterval::operator+=(const RealInterval& o) {
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

RealInterval RealInterval::operator-(const RealInterval& o) const {
    RealInterval r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator-() const {
    RealInterval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator*(const RealInterval& o) const {
    RealInterval r(std::max(prec_, o.prec_));
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, r.prec_);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, c[0], c[1], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[2], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[3], MPFR_RNDD);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, c[0], c[1], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[2], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[3], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

RealInterval RealInterval::scaled(const mpq_class& q) const {
    RealInterval r(prec_);
    if (sgn(q) >= 0) {
        mpfr_mul_q(r.lo_, lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, hi_, q.get_mpq_t(), MPFR_RNDU);
    } else {
        mpfr_mul_q(r.lo_, hi_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, lo_, q.get_mpq_t(), MPFR_RNDU);
    }
    return r;
}

RealInterval RealInterval::sqrt_nonneg() const {
    RealInterval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

bool RealInterval::definitely_positive() const { return mpfr_sgn(lo_) > 0; }
bool RealInterval::definitely_negative() const { return mpfr_sgn(hi_) < 0; }

bool RealInterval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

double RealInterval::midpoint() const {
    return (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)) / 2.0;
}

double RealInterval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double RealInterval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::string RealInterval::str() const {
    std::ostringstream os;
    os << "[" << lower() << ", " << upper() << "]";
    return os.str();
}

RealInterval trig_enclosure(const RealInterval& x, bool use_cos) {
    mpfr_prec_t prec = x.prec_;
    RealInterval r(prec);
    mpfr_t mid, rad, tmp;
    mpfr_init2(mid, prec);
    mpfr_init2(rad, prec);
    mpfr_init2(tmp, prec);
    // mid = (lo+hi)/2 rounded to nearest; rad covers both |mid-lo| and |hi-mid|
    mpfr_add(mid, x.lo_, x.hi_, MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    mpfr_sub(rad, x.hi_, mid, MPFR_RNDU);
    mpfr_sub(tmp, mid, x.lo_, MPFR_RNDU);
    mpfr_max(rad, rad, tmp, MPFR_RNDU);
    if (use_cos) {
        mpfr_cos(r.lo_, mid, MPFR_RNDD);
        mpfr_cos(r.hi_, mid, MPFR_RNDU);
    } else {
        mpfr_sin(r.lo_, mid, MPFR_RNDD);
        mpfr_sin(r.hi_, mid, MPFR_RNDU);
    }
    mpfr_sub(r.lo_, r.lo_, rad, MPFR_RNDD);
    mpfr_add(r.hi_, r.hi_, rad, MPFR_RNDU);
    mpfr_clear(mid);
    mpfr_clear(rad);
    mpfr_clear(tmp);
    return r;
}

RealInterval RealInterval::cos_enclosure() const { return trig_enclosure(*this, true); }
RealInterval RealInterval::sin_enclosure() const { return trig_enclosure(*this, false); }

}  // namespace cmlat
