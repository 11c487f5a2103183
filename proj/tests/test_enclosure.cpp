#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "carleman/enclosure.hpp"
#include "carleman/errors.hpp"

using namespace carleman;

namespace {

Interval iv_of(const mpq_class& q, long prec = 64) {
    return Interval::from_rational(q, prec);
}

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }

}  // namespace

TEST_CASE("exact field operations stay exact") {
    Enclosure a(q(1, 3)), b(q(1, 6));
    Enclosure s = a + b;
    REQUIRE(s.is_exact());
    CHECK(s.rational() == q(1, 2));
    CHECK((a * b).rational() == q(1, 18));
    CHECK((a - b).rational() == q(1, 6));
    CHECK((a / b).rational() == 2);
    CHECK(Enclosure(q(2)).pow_int(3).rational() == 8);
    CHECK(Enclosure(q(-3, 2)).pow_int(2).rational() == q(9, 4));
    CHECK(Enclosure(q(2, 3)).pow_int(-2).rational() == q(9, 4));
    CHECK_THROWS_AS(Enclosure(1) / Enclosure(0), std::domain_error);
}

TEST_CASE("exact complex cube and reciprocal") {
    ComplexEnclosure two = ComplexEnclosure::real(Enclosure(2));
    ComplexEnclosure c = two.pow_int(3);
    REQUIRE(c.is_exact());
    CHECK(c.re().rational() == 8);
    CHECK(c.im().rational() == 0);

    ComplexEnclosure i(Enclosure(0), Enclosure(1));
    ComplexEnclosure i2 = i * i;
    CHECK(i2.re().rational() == -1);
    CHECK(i2.im().rational() == 0);

    ComplexEnclosure z(Enclosure(3), Enclosure(4));
    ComplexEnclosure r = z.reciprocal();
    REQUIRE(r.is_exact());
    CHECK(r.re().rational() == q(3, 25));
    CHECK(r.im().rational() == q(-4, 25));

    ComplexEnclosure one = z * r;
    CHECK(one.re().rational() == 1);
    CHECK(one.im().rational() == 0);
}

TEST_CASE("interval square brackets the true range") {
    Interval x = Interval::hull(iv_of(q(9, 10)), iv_of(q(11, 10)));
    Interval x2 = Interval::sqr(x);
    CHECK(x2.contains(q(81, 100)));
    CHECK(x2.contains(q(121, 100)));
    CHECK(x2.contains(q(1)));
    CHECK_FALSE(x2.contains(q(8, 10)));
    CHECK_FALSE(x2.contains(q(123, 100)));
}

TEST_CASE("squaring a straddling interval never dips below zero") {
    Interval x = Interval::hull(iv_of(q(-2)), iv_of(q(3)));
    Interval x2 = Interval::sqr(x);
    CHECK(mpfr_sgn(x2.lo()) == 0);
    CHECK(x2.contains(q(9)));
    CHECK(x2.contains(q(4)));

    ComplexEnclosure z(Enclosure(x), Enclosure(q(1, 2)));
    Enclosure a2 = z.abs2();
    CHECK_FALSE(a2.interval().is_certainly_negative());
    CHECK(mpfr_sgn(a2.interval().lo()) >= 0);
}

TEST_CASE("division by an enclosure containing zero is refused") {
    Interval num = iv_of(q(1));
    Interval den = Interval::hull(iv_of(q(-1, 100)), iv_of(q(1, 100)));
    CHECK_THROWS_AS(div(num, den), NeedMorePrecision);

    ComplexEnclosure z{Enclosure(den), Enclosure(den)};
    CHECK_THROWS_AS(z.reciprocal(), NeedMorePrecision);
}

TEST_CASE("random expression containment against exact rational arithmetic") {
    std::mt19937_64 rng(20240817u);
    std::uniform_int_distribution<long> num(-40, 40);
    std::uniform_int_distribution<long> den(1, 30);
    std::uniform_int_distribution<int> op(0, 4);
    std::uniform_int_distribution<long> small_pow(0, 5);

    std::vector<std::pair<mpq_class, Interval>> pool;
    for (int i = 0; i < 8; ++i) {
        mpq_class v = q(num(rng), den(rng));
        pool.emplace_back(v, iv_of(v));
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

    for (int step = 0; step < 400; ++step) {
        const auto& [qa, ia] = pool[pick(rng)];
        const auto& [qb, ib] = pool[pick(rng)];
        mpq_class qe;
        Interval ie(64);
        switch (op(rng)) {
            case 0: qe = qa + qb; ie = add(ia, ib); break;
            case 1: qe = qa - qb; ie = sub(ia, ib); break;
            case 2: qe = qa * qb; ie = mul(ia, ib); break;
            case 3: {
                if (sgn(qb) == 0 || ib.contains_zero()) continue;
                qe = qa / qb;
                ie = div(ia, ib);
                break;
            }
            default: {
                const long n = small_pow(rng);
                mpq_class p;
                mpz_pow_ui(p.get_num_mpz_t(), mpq_numref(qa.get_mpq_t()),
                           static_cast<unsigned long>(n));
                mpz_pow_ui(p.get_den_mpz_t(), mpq_denref(qa.get_mpq_t()),
                           static_cast<unsigned long>(n));
                p.canonicalize();
                qe = p;
                ie = Interval::pow_int(ia, n);
                break;
            }
        }
        REQUIRE(ie.contains(qe));
        // Keep the pool bounded in bit size to avoid blowup.
        const std::size_t bits =
            mpz_sizeinbase(mpq_numref(qe.get_mpq_t()), 2) +
            mpz_sizeinbase(mpq_denref(qe.get_mpq_t()), 2);
        if (bits < 256) pool[pick(rng)] = {qe, ie};
    }
}

TEST_CASE("higher working precision nests inside lower") {
    auto expr = [](long prec) {
        Interval x = Interval::from_rational(q(7, 5), prec);
        Interval three = Interval::from_long(3, prec);
        Interval t = add(Interval::exp(x), three);
        t = Interval::log(t);
        t = mul(t, Interval::sqr(x));
        t = Interval::sqrt(t);
        return div(t, Interval::from_long(7, prec));
    };
    Interval a = expr(128);
    Interval b = expr(256);
    Interval c = expr(512);
    CHECK(a.contains(b));
    CHECK(b.contains(c));
    CHECK(mpfr_cmp(a.lo(), a.hi()) < 0);
}

TEST_CASE("integer powers of intervals") {
    Interval x = Interval::hull(iv_of(q(-3)), iv_of(q(2)));
    Interval odd = Interval::pow_int(x, 3);
    CHECK(odd.contains(q(-27)));
    CHECK(odd.contains(q(8)));
    Interval even = Interval::pow_int(x, 4);
    CHECK(mpfr_sgn(even.lo()) == 0);
    CHECK(even.contains(q(81)));

    Interval one = Interval::pow_int(x, 0);
    CHECK(one.contains(q(1)));

    Interval pos = Interval::hull(iv_of(q(2)), iv_of(q(5, 2)));
    Interval invsq = Interval::pow_int(pos, -2);
    CHECK(invsq.contains(q(1, 4)));
    CHECK(invsq.contains(q(4, 25)));
    CHECK_THROWS_AS(Interval::pow_int(x, -1), NeedMorePrecision);
}

TEST_CASE("real exponent power brackets known values") {
    Interval two = iv_of(q(2), 128);
    Interval half = iv_of(q(1, 2), 128);
    Interval r = Interval::pow(two, half);
    Interval s = Interval::sqrt(two);
    CHECK(r.overlaps(s));
    CHECK(r.lo_double() > 1.414213);
    CHECK(r.hi_double() < 1.414214);
}

TEST_CASE("certified comparison is tri-state") {
    Interval a = Interval::hull(iv_of(q(1)), iv_of(q(2)));
    Interval b = Interval::hull(iv_of(q(3)), iv_of(q(4)));
    Interval c = Interval::hull(iv_of(q(2)), iv_of(q(7, 2)));
    CHECK(a.compare(b) == Cmp::Less);
    CHECK(b.compare(a) == Cmp::Greater);
    CHECK(a.compare(c) == Cmp::Indeterminate);
    CHECK(c.compare(b) == Cmp::Indeterminate);

    CHECK(Enclosure(q(1, 3)).certainly_lt(Enclosure(q(1, 2))));
    CHECK(Enclosure(q(1, 2)).certainly_ge(Enclosure(q(1, 2))));
    CHECK(Enclosure(q(1, 2)).compare(Enclosure(q(1, 2))) == Cmp::Indeterminate);
}

TEST_CASE("log-magnitude comparisons far outside double range") {
    // 2^5000 and 2^4999 both overflow double; the log view still separates
    // them.
    Enclosure big = Enclosure(q(2)).pow_int(5000);
    Enclosure bigger = Enclosure(q(2)).pow_int(5001);
    LogMag la = LogMag::from_enclosure(big);
    LogMag lb = LogMag::from_enclosure(bigger);
    CHECK(la.sign() == 1);
    CHECK(la.log2_abs().contains(q(5000)));
    CHECK(log_compare(la, lb) == Cmp::Less);
    CHECK(log_compare(lb, la) == Cmp::Greater);

    Enclosure tiny = Enclosure(q(2)).pow_int(-5000);
    LogMag lt = LogMag::from_enclosure(tiny);
    CHECK(log_compare(lt, la) == Cmp::Less);

    Enclosure neg = -bigger;
    LogMag ln = LogMag::from_enclosure(neg);
    CHECK(ln.sign() == -1);
    CHECK(log_compare(ln, la) == Cmp::Less);
    CHECK(log_compare(ln, lt) == Cmp::Less);

    LogMag prod = lm_mul(la, lb);
    CHECK(prod.log2_abs().contains(q(10001)));
    LogMag pw = lm_pow_int(la, 3);
    CHECK(pw.log2_abs().contains(q(15000)));
}

TEST_CASE("log-magnitude of possible zero decides only by ceiling") {
    Interval straddle = Interval::hull(iv_of(q(-1, 1024)), iv_of(q(1, 1024)));
    LogMag lz = LogMag::from_enclosure(Enclosure(straddle));
    CHECK(lz.sign() == 0);
    LogMag lone = LogMag::from_enclosure(Enclosure(1));
    CHECK(log_compare(lz, lone) == Cmp::Less);
    CHECK(log_compare(lone, lz) == Cmp::Greater);
    // Ceiling 2^-10 does not separate from 2^-12.
    LogMag lsmall = LogMag::from_enclosure(Enclosure(q(1, 4096)));
    CHECK(log_compare(lz, lsmall) == Cmp::Indeterminate);

    LogMag zero = LogMag::from_enclosure(Enclosure(0));
    CHECK(zero.is_zero());
    CHECK(log_compare(zero, lone) == Cmp::Less);
    CHECK(log_compare(lone, zero) == Cmp::Greater);
    CHECK(log_compare(zero, zero) == Cmp::Indeterminate);
}

TEST_CASE("precision retry ladder") {
    int calls = 0;
    auto result = with_precision_retry([&](long prec) {
        ++calls;
        if (prec < 1024) throw NeedMorePrecision("not yet");
        return prec;
    });
    CHECK(result == 1024);
    CHECK(calls == 3);

    CHECK_THROWS_AS(with_precision_retry([](long) -> int {
                        throw NeedMorePrecision("never enough");
                    }),
                    NeedMorePrecision);
}

TEST_CASE("rational literal parsing") {
    CHECK(parse_rational("3/4") == q(3, 4));
    CHECK(parse_rational("-7") == q(-7));
    CHECK(parse_rational("+5") == q(5));
    CHECK(parse_rational("10/4") == q(5, 2));
    CHECK(parse_rational(" 12 / 8 ") == q(3, 2));
    CHECK(parse_rational("5/-3") == q(-5, 3));
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("/3"), ParseError);
}

TEST_CASE("dyadic detection") {
    CHECK(is_dyadic(q(1, 2)));
    CHECK(is_dyadic(q(-3, 8)));
    CHECK(is_dyadic(q(7)));
    CHECK(is_dyadic(q(0)));
    CHECK(is_dyadic(q(5, 1024)));
    CHECK_FALSE(is_dyadic(q(1, 3)));
    CHECK_FALSE(is_dyadic(q(1, 6)));
    CHECK_FALSE(is_dyadic(q(22, 7)));
}

TEST_CASE("midpoint and radius cover the interval") {
    Interval x = Interval::hull(iv_of(q(9, 10), 128), iv_of(q(11, 10), 128));
    CHECK(x.mid_double() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.radius_double() >= 0.0999999);
    CHECK(x.radius_double() <= 0.1000001);

    Enclosure e(q(5, 4));
    CHECK(e.radius_double() == 0.0);
    CHECK(e.mid_double() == doctest::Approx(1.25));
    CHECK(e.str() == "5/4");
}

TEST_CASE("mixed exact and interval arithmetic promotes soundly") {
    Enclosure exact(q(1, 3));
    Enclosure ball(Interval::hull(iv_of(q(1, 4), 128), iv_of(q(1, 2), 128)));
    Enclosure sum = exact + ball;
    REQUIRE_FALSE(sum.is_exact());
    CHECK(sum.contains(q(7, 12)));   // 1/3 + 1/4
    CHECK(sum.contains(q(5, 6)));    // 1/3 + 1/2
    CHECK(sum.precision_bits() == 128);

    Enclosure prod = exact * ball;
    CHECK(prod.contains(q(1, 12)));
    CHECK(prod.contains(q(1, 6)));
}
