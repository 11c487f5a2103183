#include "carleman/enclosure.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace carleman {

namespace {

long max_prec(const Interval& a, const Interval& b) {
    return std::max(a.prec(), b.prec());
}

// Sets rop to the min/max over already-rounded candidates.
void mpfr_assign_min(mpfr_ptr rop, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
    if (mpfr_cmp(a, b) <= 0) mpfr_set(rop, a, rnd);
    else mpfr_set(rop, b, rnd);
}

void mpfr_assign_max(mpfr_ptr rop, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
    if (mpfr_cmp(a, b) >= 0) mpfr_set(rop, a, rnd);
    else mpfr_set(rop, b, rnd);
}

struct ScopedMpfr {
    mpfr_t v;
    explicit ScopedMpfr(long prec) { mpfr_init2(v, prec); }
    ~ScopedMpfr() { mpfr_clear(v); }
    ScopedMpfr(const ScopedMpfr&) = delete;
    ScopedMpfr& operator=(const ScopedMpfr&) = delete;
    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
};

}  // namespace

Interval::Interval(long prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    lo_[0] = o.lo_[0];
    hi_[0] = o.hi_[0];
    // Leave the source in a destructible state.
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
    mpfr_set_zero(o.lo_, 1);
    mpfr_set_zero(o.hi_, 1);
}

Interval& Interval::operator=(const Interval& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    if (this == &o) return *this;
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from_rational(const mpq_class& q, long prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_long(long v, long prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_double(double v, long prec) {
    Interval r(prec);
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, long prec) {
    if (mpfr_nan_p(lo) || mpfr_nan_p(hi) || mpfr_cmp(lo, hi) > 0)
        throw std::logic_error("interval endpoints out of order");
    Interval r(prec);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::is_certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::is_certainly_negative() const { return mpfr_sgn(hi_) < 0; }

bool Interval::contains(const mpq_class& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
}

bool Interval::overlaps(const Interval& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
}

bool Interval::is_finite() const {
    return mpfr_number_p(lo_) && mpfr_number_p(hi_);
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
    ScopedMpfr m(prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    return mpfr_get_d(m, MPFR_RNDN);
}

std::string Interval::midpoint_str(int digits) const {
    ScopedMpfr m(prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, (mpfr_srcptr)m);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

double Interval::radius_double() const {
    ScopedMpfr m(prec_), r1(prec_), r2(prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    mpfr_sub(r1, m, lo_, MPFR_RNDU);
    mpfr_sub(r2, hi_, m, MPFR_RNDU);
    mpfr_assign_max(r1, r1, r2, MPFR_RNDU);
    return mpfr_get_d(r1, MPFR_RNDU);
}

std::string Interval::str(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Interval Interval::neg() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::abs() const {
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return neg();
    ScopedMpfr nl(prec_);
    mpfr_neg(nl, lo_, MPFR_RNDU);
    mpfr_set_zero(r.lo_, 1);
    mpfr_assign_max(r.hi_, nl, hi_, MPFR_RNDU);
    return r;
}

Interval add(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval sub(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Interval mul(const Interval& a, const Interval& b) {
    const long p = max_prec(a, b);
    Interval r(p);
    // The point interval {0} absorbs unbounded operands; guard against the
    // 0 * inf = NaN path before the sign split.
    if ((mpfr_zero_p(a.lo_) && mpfr_zero_p(a.hi_)) ||
        (mpfr_zero_p(b.lo_) && mpfr_zero_p(b.hi_)))
        return r;
    const int alo = mpfr_sgn(a.lo_), ahi = mpfr_sgn(a.hi_);
    const int blo = mpfr_sgn(b.lo_), bhi = mpfr_sgn(b.hi_);
    if (alo >= 0) {
        if (blo >= 0) {
            mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(r.lo_, a.hi_, b.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.lo_, b.hi_, MPFR_RNDU);
        } else {
            mpfr_mul(r.lo_, a.hi_, b.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        }
    } else if (ahi <= 0) {
        if (blo >= 0) {
            mpfr_mul(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(r.lo_, a.hi_, b.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        } else {
            mpfr_mul(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        }
    } else {
        if (blo >= 0) {
            mpfr_mul(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        } else if (bhi <= 0) {
            mpfr_mul(r.lo_, a.hi_, b.lo_, MPFR_RNDD);
            mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        } else {
            ScopedMpfr t(p);
            mpfr_mul(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
            mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
            mpfr_assign_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
            mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
            mpfr_assign_max(r.hi_, r.hi_, t, MPFR_RNDU);
        }
    }
    return r;
}

Interval div(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        throw NeedMorePrecision("division by an enclosure containing zero");
    const long p = max_prec(a, b);
    // 1/x is decreasing on either side of zero, so the endpoint formula is
    // the same for certainly positive and certainly negative divisors.
    Interval rb(p);
    mpfr_ui_div(rb.lo_, 1, b.hi_, MPFR_RNDD);
    mpfr_ui_div(rb.hi_, 1, b.lo_, MPFR_RNDU);
    return mul(a, rb);
}

Interval Interval::sqr(const Interval& a) {
    Interval r(a.prec_);
    const int slo = mpfr_sgn(a.lo_), shi = mpfr_sgn(a.hi_);
    if (slo >= 0) {
        mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
    } else if (shi <= 0) {
        mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    } else {
        ScopedMpfr t(a.prec_);
        mpfr_set_zero(r.lo_, 1);
        mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
        mpfr_sqr(t, a.lo_, MPFR_RNDU);
        mpfr_assign_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
    return r;
}

Interval Interval::sqrt(const Interval& a) {
    if (mpfr_sgn(a.hi_) < 0)
        throw std::logic_error("sqrt of a certainly negative enclosure");
    Interval r(a.prec_);
    if (mpfr_sgn(a.lo_) <= 0) mpfr_set_zero(r.lo_, 1);
    else mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::log(const Interval& a) {
    if (!a.is_certainly_positive())
        throw NeedMorePrecision("log of an enclosure touching zero");
    Interval r(a.prec_);
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::log2(const Interval& a) {
    if (!a.is_certainly_positive())
        throw NeedMorePrecision("log2 of an enclosure touching zero");
    Interval r(a.prec_);
    mpfr_log2(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log2(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp(const Interval& a) {
    Interval r(a.prec_);
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp2(const Interval& a) {
    Interval r(a.prec_);
    mpfr_exp2(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp2(r.hi_, a.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pow_int(const Interval& a, long n) {
    if (n < 0) {
        if (a.contains_zero())
            throw NeedMorePrecision("negative power of an enclosure containing zero");
        Interval one = Interval::from_long(1, a.prec_);
        return div(one, pow_int(a, -n));
    }
    if (n == 0) return Interval::from_long(1, a.prec_);
    if (n == 1) return a;
    Interval r(a.prec_);
    if (n % 2 == 1 || mpfr_sgn(a.lo_) >= 0) {
        // Monotone on the whole line (odd) or on [0, inf) (even, nonneg).
        mpfr_pow_si(r.lo_, a.lo_, n, MPFR_RNDD);
        mpfr_pow_si(r.hi_, a.hi_, n, MPFR_RNDU);
    } else if (mpfr_sgn(a.hi_) <= 0) {
        mpfr_pow_si(r.lo_, a.hi_, n, MPFR_RNDD);
        mpfr_pow_si(r.hi_, a.lo_, n, MPFR_RNDU);
    } else {
        ScopedMpfr t(a.prec_);
        mpfr_set_zero(r.lo_, 1);
        mpfr_pow_si(r.hi_, a.hi_, n, MPFR_RNDU);
        mpfr_pow_si(t, a.lo_, n, MPFR_RNDU);
        mpfr_assign_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
    return r;
}

Interval Interval::pow(const Interval& a, const Interval& e) {
    if (!a.is_certainly_positive())
        throw NeedMorePrecision("pow base enclosure touching zero");
    const long p = std::max(a.prec(), e.prec());
    // Endpoint products of a monotone-in-each-argument map: evaluate all
    // four corners with outward rounding.
    ScopedMpfr c1(p), c2(p), c3(p), c4(p);
    mpfr_pow(c1, a.lo_, e.lo_, MPFR_RNDD);
    mpfr_pow(c2, a.lo_, e.hi_, MPFR_RNDD);
    mpfr_pow(c3, a.hi_, e.lo_, MPFR_RNDD);
    mpfr_pow(c4, a.hi_, e.hi_, MPFR_RNDD);
    Interval r(p);
    mpfr_assign_min(r.lo_, c1, c2, MPFR_RNDD);
    mpfr_assign_min(r.lo_, r.lo_, c3, MPFR_RNDD);
    mpfr_assign_min(r.lo_, r.lo_, c4, MPFR_RNDD);
    mpfr_pow(c1, a.lo_, e.lo_, MPFR_RNDU);
    mpfr_pow(c2, a.lo_, e.hi_, MPFR_RNDU);
    mpfr_pow(c3, a.hi_, e.lo_, MPFR_RNDU);
    mpfr_pow(c4, a.hi_, e.hi_, MPFR_RNDU);
    mpfr_assign_max(r.hi_, c1, c2, MPFR_RNDU);
    mpfr_assign_max(r.hi_, r.hi_, c3, MPFR_RNDU);
    mpfr_assign_max(r.hi_, r.hi_, c4, MPFR_RNDU);
    return r;
}

Interval Interval::min(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_assign_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_assign_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::max(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_assign_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_assign_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_assign_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_assign_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::round_to(long prec) const {
    Interval r(prec);
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Cmp Interval::compare(const Interval& o) const {
    if (mpfr_cmp(hi_, o.lo_) < 0) return Cmp::Less;
    if (mpfr_cmp(lo_, o.hi_) > 0) return Cmp::Greater;
    return Cmp::Indeterminate;
}

// ---------------------------------------------------------------------------

const mpq_class& Enclosure::rational() const {
    if (!is_exact()) throw std::logic_error("enclosure is not exact");
    return std::get<mpq_class>(v_);
}

const Interval& Enclosure::interval() const {
    if (is_exact()) throw std::logic_error("enclosure is exact");
    return std::get<Interval>(v_);
}

Interval Enclosure::as_interval(long prec) const {
    if (is_exact()) return Interval::from_rational(rational(), prec);
    return interval();
}

long Enclosure::precision_bits() const {
    return is_exact() ? 0 : interval().prec();
}

bool Enclosure::is_zero() const { return is_exact() && sgn(rational()) == 0; }

bool Enclosure::contains_zero() const {
    return is_exact() ? sgn(rational()) == 0 : interval().contains_zero();
}

bool Enclosure::is_certainly_positive() const {
    return is_exact() ? sgn(rational()) > 0 : interval().is_certainly_positive();
}

bool Enclosure::is_certainly_negative() const {
    return is_exact() ? sgn(rational()) < 0 : interval().is_certainly_negative();
}

bool Enclosure::contains(const mpq_class& q) const {
    return is_exact() ? rational() == q : interval().contains(q);
}

bool Enclosure::contains(const Enclosure& o) const {
    if (is_exact()) {
        if (o.is_exact()) return rational() == o.rational();
        // An exact value contains an interval only when the interval is the
        // degenerate point equal to it.
        const Interval& iv = o.interval();
        return mpfr_cmp(iv.lo(), iv.hi()) == 0 && iv.contains(rational());
    }
    if (o.is_exact()) return interval().contains(o.rational());
    return interval().contains(o.interval());
}

bool Enclosure::overlaps(const Enclosure& o) const {
    if (is_exact() && o.is_exact()) return rational() == o.rational();
    if (is_exact()) return o.interval().contains(rational());
    if (o.is_exact()) return interval().contains(o.rational());
    return interval().overlaps(o.interval());
}

std::string Enclosure::midpoint_str(int digits) const {
    if (is_exact()) return as_interval(kDefaultPrec).midpoint_str(digits);
    return interval().midpoint_str(digits);
}

double Enclosure::radius_double() const {
    return is_exact() ? 0.0 : interval().radius_double();
}

double Enclosure::mid_double() const {
    return is_exact() ? as_interval(128).mid_double() : interval().mid_double();
}

std::string Enclosure::str(int digits) const {
    if (is_exact()) {
        const mpq_class& q = rational();
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    return interval().str(digits);
}

Enclosure Enclosure::operator-() const {
    if (is_exact()) return Enclosure(mpq_class(-rational()));
    return Enclosure(interval().neg());
}

Enclosure Enclosure::abs() const {
    if (is_exact()) return Enclosure(mpq_class(::abs(rational())));
    return Enclosure(interval().abs());
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact())
        return Enclosure(mpq_class(a.rational() + b.rational()));
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(add(a.as_interval(p), b.as_interval(p)));
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact())
        return Enclosure(mpq_class(a.rational() - b.rational()));
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(sub(a.as_interval(p), b.as_interval(p)));
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact())
        return Enclosure(mpq_class(a.rational() * b.rational()));
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(mul(a.as_interval(p), b.as_interval(p)));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact()) {
        if (sgn(b.rational()) == 0) throw std::domain_error("exact division by zero");
        return Enclosure(mpq_class(a.rational() / b.rational()));
    }
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(div(a.as_interval(p), b.as_interval(p)));
}

Enclosure Enclosure::sqr() const {
    if (is_exact()) return Enclosure(mpq_class(rational() * rational()));
    return Enclosure(Interval::sqr(interval()));
}

Enclosure Enclosure::pow_int(long n) const {
    if (is_exact()) {
        if (n == 0) return Enclosure(1);
        const mpq_class& q = rational();
        if (sgn(q) == 0 && n < 0) throw std::domain_error("exact division by zero");
        mpq_class out;
        const unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
        mpz_pow_ui(out.get_num_mpz_t(), mpq_numref(q.get_mpq_t()), e);
        mpz_pow_ui(out.get_den_mpz_t(), mpq_denref(q.get_mpq_t()), e);
        out.canonicalize();
        if (n < 0) out = 1 / out;
        return Enclosure(out);
    }
    return Enclosure(Interval::pow_int(interval(), n));
}

Enclosure Enclosure::sqrt(long prec) const {
    return Enclosure(Interval::sqrt(as_interval(prec)));
}

Enclosure Enclosure::log(long prec) const {
    return Enclosure(Interval::log(as_interval(prec)));
}

Enclosure Enclosure::log2(long prec) const {
    return Enclosure(Interval::log2(as_interval(prec)));
}

Enclosure Enclosure::exp(long prec) const {
    return Enclosure(Interval::exp(as_interval(prec)));
}

Enclosure Enclosure::pow(const Enclosure& e, long prec) const {
    return Enclosure(Interval::pow(as_interval(prec), e.as_interval(prec)));
}

Cmp Enclosure::compare(const Enclosure& o) const {
    if (is_exact() && o.is_exact()) {
        const int c = cmp(rational(), o.rational());
        if (c < 0) return Cmp::Less;
        if (c > 0) return Cmp::Greater;
        // Equal exact values: not certainly less, not certainly greater.
        return Cmp::Indeterminate;
    }
    const long p = std::max(precision_bits(), o.precision_bits());
    return as_interval(p).compare(o.as_interval(p));
}

bool Enclosure::certainly_lt(const Enclosure& o) const {
    return compare(o) == Cmp::Less;
}

bool Enclosure::certainly_gt(const Enclosure& o) const {
    return compare(o) == Cmp::Greater;
}

bool Enclosure::certainly_le(const Enclosure& o) const {
    if (is_exact() && o.is_exact()) return rational() <= o.rational();
    const long p = std::max(precision_bits(), o.precision_bits());
    return mpfr_cmp(as_interval(p).hi(), o.as_interval(p).lo()) <= 0;
}

bool Enclosure::certainly_ge(const Enclosure& o) const {
    return o.certainly_le(*this);
}

Enclosure Enclosure::min(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact())
        return a.rational() <= b.rational() ? a : b;
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(Interval::min(a.as_interval(p), b.as_interval(p)));
}

Enclosure Enclosure::max(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact())
        return a.rational() >= b.rational() ? a : b;
    const long p = std::max(a.precision_bits(), b.precision_bits());
    return Enclosure(Interval::max(a.as_interval(p), b.as_interval(p)));
}

Enclosure Enclosure::hull(const Enclosure& a, const Enclosure& b, long prec) {
    if (a.is_exact() && b.is_exact() && a.rational() == b.rational()) return a;
    const long p = std::max({a.precision_bits(), b.precision_bits(), prec});
    return Enclosure(Interval::hull(a.as_interval(p), b.as_interval(p)));
}

// ---------------------------------------------------------------------------

ComplexEnclosure operator+(const ComplexEnclosure& a, const ComplexEnclosure& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
}

ComplexEnclosure operator-(const ComplexEnclosure& a, const ComplexEnclosure& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
}

ComplexEnclosure operator*(const ComplexEnclosure& a, const ComplexEnclosure& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

Enclosure ComplexEnclosure::abs2() const {
    // Squares through sqr() so a component straddling zero still yields a
    // nonnegative lower endpoint.
    return re_.sqr() + im_.sqr();
}

ComplexEnclosure ComplexEnclosure::reciprocal() const {
    Enclosure d = abs2();
    if (d.contains_zero())
        throw NeedMorePrecision("complex reciprocal of an enclosure containing zero");
    return {re_ / d, (-im_) / d};
}

ComplexEnclosure operator/(const ComplexEnclosure& a, const ComplexEnclosure& b) {
    return a * b.reciprocal();
}

ComplexEnclosure ComplexEnclosure::pow_int(long n) const {
    if (n < 0) return reciprocal().pow_int(-n);
    ComplexEnclosure acc = real(Enclosure(1));
    ComplexEnclosure base = *this;
    unsigned long e = static_cast<unsigned long>(n);
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

std::string ComplexEnclosure::str(int digits) const {
    return re_.str(digits) + " + " + im_.str(digits) + "*i";
}

// ---------------------------------------------------------------------------

LogMag::LogMag(int sign, Interval log2_abs)
    : sign_(sign), log2_(std::move(log2_abs)) {
    if (sign_ < -1 || sign_ > 1) throw std::logic_error("LogMag sign out of range");
}

LogMag LogMag::from_enclosure(const Enclosure& x, long prec) {
    if (x.is_zero()) {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_inf(lo, -1);
        mpfr_set_inf(hi, -1);
        Interval r = Interval::from_endpoints(lo, hi, prec);
        mpfr_clear(lo);
        mpfr_clear(hi);
        return LogMag(0, std::move(r));
    }
    Interval a = x.abs().as_interval(prec);
    int sign = 0;
    if (x.is_certainly_positive()) sign = 1;
    else if (x.is_certainly_negative()) sign = -1;
    if (sign == 0) {
        // May be zero: magnitude lower bound is -inf, upper bound from |x|.
        mpfr_t lo, hi;
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        mpfr_set_inf(lo, -1);
        if (mpfr_sgn(a.hi()) > 0) mpfr_log2(hi, a.hi(), MPFR_RNDU);
        else mpfr_set_inf(hi, -1);
        Interval r = Interval::from_endpoints(lo, hi, prec);
        mpfr_clear(lo);
        mpfr_clear(hi);
        return LogMag(0, std::move(r));
    }
    return LogMag(sign, Interval::log2(a));
}

bool LogMag::is_zero() const {
    return sign_ == 0 && mpfr_inf_p(log2_.hi()) && mpfr_sgn(log2_.hi()) < 0;
}

LogMag lm_mul(const LogMag& a, const LogMag& b) {
    return LogMag(a.sign_ * b.sign_, add(a.log2_, b.log2_));
}

LogMag lm_div(const LogMag& a, const LogMag& b) {
    if (b.sign_ == 0) throw NeedMorePrecision("log-magnitude division by possible zero");
    return LogMag(a.sign_ * b.sign_, sub(a.log2_, b.log2_));
}

LogMag lm_pow_int(const LogMag& a, long n) {
    if (n == 0) return LogMag(1, Interval(a.log2_.prec()));
    if (n < 0 && a.sign_ == 0)
        throw NeedMorePrecision("negative log-magnitude power of possible zero");
    const int sign = (n % 2 == 0) ? (a.sign_ == 0 ? 0 : 1) : a.sign_;
    Interval scaled = mul(a.log2_, Interval::from_long(n, a.log2_.prec()));
    return LogMag(sign, std::move(scaled));
}

std::string LogMag::str() const {
    std::string s = sign_ > 0 ? "+" : (sign_ < 0 ? "-" : "0");
    return s + " 2^" + log2_.str(8);
}

Cmp log_compare(const LogMag& a, const LogMag& b) {
    const int sa = a.sign(), sb = b.sign();
    if (sa > 0 && sb < 0) return Cmp::Greater;
    if (sa < 0 && sb > 0) return Cmp::Less;
    if (sa != 0 && sa == sb) {
        const Cmp mag = a.log2_abs().compare(b.log2_abs());
        if (mag == Cmp::Indeterminate) return Cmp::Indeterminate;
        if (sa > 0) return mag;
        return mag == Cmp::Less ? Cmp::Greater : Cmp::Less;
    }
    // One operand has unknown sign: it still decides when its magnitude
    // ceiling sits strictly below the other's magnitude floor.  A floor of
    // -inf (exact zero) decides against any strictly signed operand.
    if (sa != 0 && sb == 0) {
        const bool smaller = mpfr_cmp(b.log2_abs().hi(), a.log2_abs().lo()) < 0;
        if (!smaller) return Cmp::Indeterminate;
        return sa > 0 ? Cmp::Greater : Cmp::Less;
    }
    if (sa == 0 && sb != 0) {
        const bool smaller = mpfr_cmp(a.log2_abs().hi(), b.log2_abs().lo()) < 0;
        if (!smaller) return Cmp::Indeterminate;
        return sb > 0 ? Cmp::Less : Cmp::Greater;
    }
    return Cmp::Indeterminate;
}

// ---------------------------------------------------------------------------

mpq_class parse_rational(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw ParseError("empty rational literal");
    const auto slash = t.find('/');
    auto check_int = [&](const std::string& s) {
        if (s.empty()) throw ParseError("malformed rational literal: " + text);
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw ParseError("malformed rational literal: " + text);
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw ParseError("malformed rational literal: " + text);
    };
    auto strip_plus = [](std::string s) {
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        return s;
    };
    mpq_class q;
    if (slash == std::string::npos) {
        check_int(t);
        q = mpq_class(strip_plus(t));
    } else {
        const std::string num = strip_plus(t.substr(0, slash));
        const std::string den = strip_plus(t.substr(slash + 1));
        check_int(num);
        check_int(den);
        if (mpz_class(den) == 0) throw ParseError("zero denominator: " + text);
        q = mpq_class(num + "/" + den);
    }
    q.canonicalize();
    return q;
}

bool is_dyadic(const mpq_class& q) {
    mpz_class den = q.get_den();
    if (den == 1) return true;
    const mp_bitcnt_t tz = mpz_scan1(den.get_mpz_t(), 0);
    mpz_class shifted;
    mpz_tdiv_q_2exp(shifted.get_mpz_t(), den.get_mpz_t(), tz);
    return shifted == 1;
}

}  // namespace carleman
