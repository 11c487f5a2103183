#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>
#include <variant>

#include "carleman/errors.hpp"

// Certified arithmetic kernel.  Every value is either an exact rational or a
// closed interval [lo, hi] whose endpoints are binary floats rounded outward
// (lo toward -inf, hi toward +inf).  Field operations on exact operands stay
// exact; any operation touching an interval, or any irrational function,
// produces an interval.  Containment of the true value is an invariant of
// every operation.

namespace carleman {

inline constexpr long kDefaultPrec = 256;
inline constexpr long kMaxPrec = 4096;

/// Outcome of a certified comparison.
enum class Cmp { Less, Greater, Indeterminate };

/// Closed interval with mpfr endpoints at a fixed working precision.
/// lo <= hi always; endpoints may be +-inf but never NaN.
class Interval {
  public:
    explicit Interval(long prec = kDefaultPrec);  // [0, 0]
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval from_rational(const mpq_class& q, long prec);
    static Interval from_long(long v, long prec);
    static Interval from_double(double v, long prec);
    /// Takes ownership of the endpoint values; requires lo <= hi.
    static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, long prec);

    long prec() const { return prec_; }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }

    bool contains_zero() const;
    bool is_certainly_positive() const;  // lo > 0
    bool is_certainly_negative() const;  // hi < 0
    bool contains(const mpq_class& q) const;
    bool contains(const Interval& o) const;  // o subset of *this
    bool overlaps(const Interval& o) const;
    bool is_finite() const;

    double lo_double() const;  // rounded down
    double hi_double() const;  // rounded up
    double mid_double() const;
    /// Midpoint of [lo, hi] rounded to nearest at the working precision.
    std::string midpoint_str(int digits = 25) const;
    /// Upper bound on the distance from the reported midpoint to either end.
    double radius_double() const;
    std::string str(int digits = 20) const;  // "[lo, hi]"

    Interval neg() const;
    Interval abs() const;
    friend Interval add(const Interval& a, const Interval& b);
    friend Interval sub(const Interval& a, const Interval& b);
    friend Interval mul(const Interval& a, const Interval& b);
    /// Throws NeedMorePrecision when b contains zero.
    friend Interval div(const Interval& a, const Interval& b);

    static Interval sqr(const Interval& a);
    /// Negative part below zero is treated as rounding slack and clamped.
    static Interval sqrt(const Interval& a);
    static Interval log(const Interval& a);   // requires lo > 0
    static Interval log2(const Interval& a);  // requires lo > 0
    static Interval exp(const Interval& a);
    static Interval exp2(const Interval& a);
    /// a^n for integer n; n < 0 requires a not containing zero.
    static Interval pow_int(const Interval& a, long n);
    /// a^e for certainly positive a.
    static Interval pow(const Interval& a, const Interval& e);
    static Interval min(const Interval& a, const Interval& b);
    static Interval max(const Interval& a, const Interval& b);
    static Interval hull(const Interval& a, const Interval& b);

    /// Outward re-rounding to a new working precision.
    Interval round_to(long prec) const;

    Cmp compare(const Interval& o) const;  // certified three-way

  private:
    mpfr_t lo_;
    mpfr_t hi_;
    long prec_;
};

/// Exact rational or certified interval, with automatic routing: exact
/// operands propagate exactness through +,-,*,/ and integer powers.
class Enclosure {
  public:
    Enclosure() : v_(mpq_class(0)) {}
    Enclosure(long v) : v_(mpq_class(v)) {}
    Enclosure(const mpq_class& q) : v_(q) {}
    Enclosure(mpq_class&& q) : v_(std::move(q)) {}
    Enclosure(const Interval& iv) : v_(iv) {}
    Enclosure(Interval&& iv) : v_(std::move(iv)) {}

    bool is_exact() const { return std::holds_alternative<mpq_class>(v_); }
    const mpq_class& rational() const;  // throws std::logic_error if inexact
    const Interval& interval() const;   // throws std::logic_error if exact
    /// Exact values convert to a tight interval at the given precision.
    Interval as_interval(long prec = kDefaultPrec) const;
    /// Working precision of the interval representation; 0 when exact.
    long precision_bits() const;

    bool is_zero() const;  // exact zero only
    bool contains_zero() const;
    bool is_certainly_positive() const;
    bool is_certainly_negative() const;
    bool contains(const mpq_class& q) const;
    bool contains(const Enclosure& o) const;
    bool overlaps(const Enclosure& o) const;

    std::string midpoint_str(int digits = 25) const;
    double radius_double() const;  // 0 for exact values
    double mid_double() const;
    std::string str(int digits = 20) const;

    Enclosure operator-() const;
    Enclosure abs() const;
    friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator/(const Enclosure& a, const Enclosure& b);
    Enclosure& operator+=(const Enclosure& o) { return *this = *this + o; }
    Enclosure& operator-=(const Enclosure& o) { return *this = *this - o; }
    Enclosure& operator*=(const Enclosure& o) { return *this = *this * o; }
    Enclosure& operator/=(const Enclosure& o) { return *this = *this / o; }

    Enclosure sqr() const;            // exact-preserving, never negative
    Enclosure pow_int(long n) const;  // exact-preserving
    Enclosure sqrt(long prec = kDefaultPrec) const;
    Enclosure log(long prec = kDefaultPrec) const;
    Enclosure log2(long prec = kDefaultPrec) const;
    Enclosure exp(long prec = kDefaultPrec) const;
    Enclosure pow(const Enclosure& e, long prec = kDefaultPrec) const;

    Cmp compare(const Enclosure& o) const;
    bool certainly_lt(const Enclosure& o) const;
    bool certainly_gt(const Enclosure& o) const;
    bool certainly_le(const Enclosure& o) const;
    bool certainly_ge(const Enclosure& o) const;

    static Enclosure min(const Enclosure& a, const Enclosure& b);
    static Enclosure max(const Enclosure& a, const Enclosure& b);
    static Enclosure hull(const Enclosure& a, const Enclosure& b, long prec = kDefaultPrec);

  private:
    std::variant<mpq_class, Interval> v_;
};

/// Rectangular complex enclosure.  Division never accepts a divisor whose
/// squared magnitude enclosure contains zero.
class ComplexEnclosure {
  public:
    ComplexEnclosure() = default;
    ComplexEnclosure(Enclosure re, Enclosure im)
        : re_(std::move(re)), im_(std::move(im)) {}
    static ComplexEnclosure real(Enclosure re) { return {std::move(re), Enclosure(0)}; }

    const Enclosure& re() const { return re_; }
    const Enclosure& im() const { return im_; }
    bool is_exact() const { return re_.is_exact() && im_.is_exact(); }

    ComplexEnclosure operator-() const { return {-re_, -im_}; }
    ComplexEnclosure conj() const { return {re_, -im_}; }
    friend ComplexEnclosure operator+(const ComplexEnclosure& a, const ComplexEnclosure& b);
    friend ComplexEnclosure operator-(const ComplexEnclosure& a, const ComplexEnclosure& b);
    friend ComplexEnclosure operator*(const ComplexEnclosure& a, const ComplexEnclosure& b);
    friend ComplexEnclosure operator/(const ComplexEnclosure& a, const ComplexEnclosure& b);
    ComplexEnclosure& operator+=(const ComplexEnclosure& o) { return *this = *this + o; }
    ComplexEnclosure& operator*=(const ComplexEnclosure& o) { return *this = *this * o; }

    Enclosure abs2() const;
    Enclosure abs(long prec = kDefaultPrec) const { return abs2().sqrt(prec); }
    ComplexEnclosure reciprocal() const;
    ComplexEnclosure pow_int(long n) const;

    std::string str(int digits = 20) const;

  private:
    Enclosure re_{0};
    Enclosure im_{0};
};

/// Sign and log2-magnitude view of a real quantity, for comparisons whose
/// operands may sit anywhere in the mpfr exponent range.  sign is -1, 0, +1;
/// sign 0 means the underlying enclosure may be zero, and the magnitude
/// interval then only upper-bounds |x|.
class LogMag {
  public:
    LogMag(int sign, Interval log2_abs);
    static LogMag from_enclosure(const Enclosure& x, long prec = kDefaultPrec);

    int sign() const { return sign_; }
    const Interval& log2_abs() const { return log2_; }
    bool is_zero() const;  // sign 0 with magnitude bound -inf
    double log2_lo() const { return log2_.lo_double(); }
    double log2_hi() const { return log2_.hi_double(); }

    friend LogMag lm_mul(const LogMag& a, const LogMag& b);
    friend LogMag lm_div(const LogMag& a, const LogMag& b);
    friend LogMag lm_pow_int(const LogMag& a, long n);

    std::string str() const;

  private:
    int sign_;
    Interval log2_;
};

/// Certified three-way comparison by sign first, then log-magnitude.
Cmp log_compare(const LogMag& a, const LogMag& b);

/// Runs f(prec) with retry-doubling from start_prec up to kMaxPrec whenever
/// f throws NeedMorePrecision or IndeterminateAtPrecision.  The last failure
/// propagates once the cap is exceeded.
template <class F>
auto with_precision_retry(F&& f, long start_prec = kDefaultPrec) {
    for (long p = start_prec;; p *= 2) {
        try {
            return f(p);
        } catch (const NeedMorePrecision&) {
            if (p * 2 > kMaxPrec) throw;
        } catch (const IndeterminateAtPrecision&) {
            if (p * 2 > kMaxPrec) throw;
        }
    }
}

/// Parses "p/q" or a plain integer into an exact rational (canonicalized).
mpq_class parse_rational(const std::string& text);

/// True when q = p/2^k (binary-exact inputs route to the exact path).
bool is_dyadic(const mpq_class& q);

}  // namespace carleman
