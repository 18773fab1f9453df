#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace cmlat {

// Closed interval [lo, hi] with mpfr endpoints rounded outward.  Every
// arithmetic operation keeps the true real value enclosed, so a sign query
// that excludes zero is a certificate.
class RealInterval {
public:
    explicit RealInterval(mpfr_prec_t prec = 64);
    RealInterval(const RealInterval& o);
    RealInterval(RealInterval&& o) noexcept;
    RealInterval& operator=(const RealInterval& o);
    RealInterval& operator=(RealInterval&& o) noexcept;
    ~RealInterval();

    static RealInterval exact(const mpq_class& q, mpfr_prec_t prec);
    static RealInterval exact(long v, mpfr_prec_t prec);
    static RealInterval pi(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }

    RealInterval operator+(const RealInterval& o) const;
    RealInterval operator-(const RealInterval& o) const;
    RealInterval operator*(const RealInterval& o) const;
    RealInterval operator-() const;
    RealInterval& operator+=(const RealInterval& o);

    RealInterval scaled(const mpq_class& q) const;  // multiply by exact rational
    RealInterval sqrt_nonneg() const;               // requires lo >= 0

    bool definitely_positive() const;
    bool definitely_negative() const;
    bool contains_zero() const;

    double midpoint() const;
    double lower() const;
    double upper() const;
    std::string str() const;

    // cos/sin enclosures: evaluate at the midpoint with both roundings, then
    // widen by the interval radius (the derivative bound |cos'|, |sin'| <= 1).
    RealInterval cos_enclosure() const;
    RealInterval sin_enclosure() const;

private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;

    friend RealInterval trig_enclosure(const RealInterval& x, bool use_cos);
};

}  // namespace cmlat
