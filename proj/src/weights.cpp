#include "carleman/weights.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "carleman/errors.hpp"

namespace carleman {

namespace {

Interval const_e(long prec) {
    return Interval::exp(Interval::from_long(1, prec));
}

mpq_class mpq_pow_si(const mpq_class& base, long e) {
    mpq_class out;
    const unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(out.get_num_mpz_t(), mpq_numref(base.get_mpq_t()), a);
    mpz_pow_ui(out.get_den_mpz_t(), mpq_denref(base.get_mpq_t()), a);
    out.canonicalize();
    if (e < 0) {
        if (out == 0) throw std::domain_error("zero base with negative power");
        out = 1 / out;
    }
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Decimal strings in table files are exact: "2.25" -> 9/4.
mpq_class parse_decimal_or_rational(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return parse_rational(text);
    std::string intpart = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed decimal literal: " + text);
    bool neg = false;
    if (!intpart.empty() && (intpart[0] == '-' || intpart[0] == '+')) {
        neg = intpart[0] == '-';
        intpart.erase(0, 1);
    }
    if (intpart.empty()) intpart = "0";
    if (intpart.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed decimal literal: " + text);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpq_class q(mpz_class(intpart) * scale + mpz_class(frac), scale);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

}  // namespace

struct WeightSequence::Impl {
    virtual ~Impl() = default;
    virtual Enclosure weight(long n, long prec) const = 0;
    virtual Enclosure ratio(long n, long prec) const = 0;
    virtual bool exact() const = 0;
    virtual Strictness strictness() const = 0;
    virtual QuasiStatus quasi() const = 0;
    virtual std::string name() const = 0;
    virtual long max_index() const { return -1; }
};

namespace {

struct GevreyImpl final : WeightSequence::Impl {
    mpq_class s;
    mutable std::vector<mpz_class> facts{1};
    mutable std::mutex mu;

    explicit GevreyImpl(mpq_class sv) : s(std::move(sv)) {}

    mpz_class factorial(long n) const {
        std::lock_guard<std::mutex> lk(mu);
        while (static_cast<long>(facts.size()) <= n)
            facts.push_back(facts.back() * static_cast<long>(facts.size()));
        return facts[n];
    }

    bool integer_s() const { return s.get_den() == 1; }

    Enclosure weight(long n, long prec) const override {
        const mpz_class f = factorial(n);
        if (integer_s())
            return Enclosure(mpq_pow_si(mpq_class(f), s.get_num().get_si()));
        Interval base = Interval::from_rational(mpq_class(f), prec);
        return Enclosure(Interval::pow(base, Interval::from_rational(s, prec)));
    }

    Enclosure ratio(long n, long prec) const override {
        if (integer_s())
            return Enclosure(mpq_pow_si(mpq_class(n + 1), s.get_num().get_si()));
        Interval base = Interval::from_long(n + 1, prec);
        return Enclosure(Interval::pow(base, Interval::from_rational(s, prec)));
    }

    bool exact() const override { return integer_s(); }
    Strictness strictness() const override { return Strictness::KnownStrict; }
    QuasiStatus quasi() const override { return QuasiStatus::NonQuasianalytic; }
    std::string name() const override { return "gevrey:" + s.get_str(); }
};

struct QFamilyImpl final : WeightSequence::Impl {
    mutable long memo_prec = 0;
    mutable std::vector<Enclosure> memo;
    mutable std::mutex mu;

    Enclosure ratio(long n, long prec) const override {
        Interval x = add(Interval::from_long(n, prec), const_e(prec));
        return Enclosure(Interval::log(x));
    }

    Enclosure weight(long n, long prec) const override {
        std::lock_guard<std::mutex> lk(mu);
        if (prec > memo_prec) {
            memo.clear();
            memo_prec = prec;
        }
        if (memo.empty()) memo.emplace_back(1);
        while (static_cast<long>(memo.size()) <= n) {
            const long i = static_cast<long>(memo.size()) - 1;
            memo.push_back(memo.back() * ratio(i, memo_prec));
        }
        return memo[n];
    }

    bool exact() const override { return false; }
    Strictness strictness() const override { return Strictness::KnownStrict; }
    QuasiStatus quasi() const override { return QuasiStatus::Quasianalytic; }
    std::string name() const override { return "qfamily"; }
};

struct TableImpl final : WeightSequence::Impl {
    std::vector<mpq_class> vals;
    Strictness strict_flag;
    std::string id;

    explicit TableImpl(std::vector<mpq_class> v) : vals(std::move(v)) {
        if (vals.empty() || vals[0] != 1)
            throw ParseError("table weight sequence must start with M_0 = 1");
        for (const auto& q : vals)
            if (sgn(q) <= 0)
                throw ParseError("table weight sequence entries must be positive");
        strict_flag = Strictness::KnownStrict;
        for (std::size_t n = 0; n + 2 < vals.size(); ++n) {
            const mpq_class m0 = vals[n + 1] / vals[n];
            const mpq_class m1 = vals[n + 2] / vals[n + 1];
            if (m1 <= m0) {
                strict_flag = Strictness::Unknown;
                break;
            }
        }
        std::ostringstream os;
        for (const auto& q : vals) os << q.get_str() << ",";
        std::ostringstream hex;
        hex << std::hex << fnv1a(os.str());
        id = "table-h" + hex.str();
    }

    Enclosure weight(long n, long) const override {
        if (n >= static_cast<long>(vals.size()))
            throw OutOfTable("table weight index " + std::to_string(n) +
                             " past last entry " + std::to_string(vals.size() - 1));
        return Enclosure(vals[n]);
    }

    Enclosure ratio(long n, long prec) const override {
        return weight(n + 1, prec) / weight(n, prec);
    }

    bool exact() const override { return true; }
    Strictness strictness() const override { return strict_flag; }
    QuasiStatus quasi() const override { return QuasiStatus::Unknown; }
    std::string name() const override { return id; }
    long max_index() const override { return static_cast<long>(vals.size()) - 1; }
};

struct MkImpl final : WeightSequence::Impl {
    WeightSequence inner;
    long k;
    Enclosure c;

    MkImpl(WeightSequence in, long kk, Enclosure cc)
        : inner(std::move(in)), k(kk), c(std::move(cc)) {}

    Enclosure weight(long n, long prec) const override {
        if (n < k) return Enclosure(1);
        return c.pow_int(2 * n - 2 * k + 1) * inner.weight(n, prec);
    }

    Enclosure ratio(long n, long prec) const override {
        if (n + 1 < k) return Enclosure(1);
        if (n + 1 == k) return c * inner.weight(k, prec);
        return c.sqr() * inner.ratio(n, prec);
    }

    bool exact() const override { return inner.exact() && c.is_exact(); }
    Strictness strictness() const override { return Strictness::Unknown; }
    QuasiStatus quasi() const override { return inner.quasi_status(); }
    std::string name() const override {
        return "mk(" + inner.name() + ",k=" + std::to_string(k) + ")";
    }
    long max_index() const override { return inner.max_index(); }
};

// Plateau repair: maximal blocks of equal ratios get geometric multipliers
// climbing toward the jump that closes the block.
struct RegularizedImpl final : WeightSequence::Impl {
    WeightSequence inner;
    long scan_limit;

    struct Block {
        long start;
        long len;
        Enclosure A;
    };
    mutable std::vector<Block> blocks;
    mutable long covered = 0;
    mutable std::mutex mu;

    RegularizedImpl(WeightSequence in, long limit)
        : inner(std::move(in)), scan_limit(limit) {}

    // Tri-state plateau test; equality is only decidable on the exact path.
    enum class Rel { Equal, Jump };
    Rel relate(const Enclosure& prev, const Enclosure& next, long idx) const {
        if (prev.is_exact() && next.is_exact()) {
            const int cc = cmp(next.rational(), prev.rational());
            if (cc == 0) return Rel::Equal;
            if (cc > 0) return Rel::Jump;
            throw std::logic_error("ratio sequence decreases; not log-convex");
        }
        const Cmp cc = next.compare(prev);
        if (cc == Cmp::Greater) return Rel::Jump;
        if (cc == Cmp::Less)
            throw std::logic_error("ratio sequence decreases; not log-convex");
        throw IndeterminateAtPrecision(
            "cannot separate adjacent ratios while closing a plateau", idx);
    }

    void ensure_covered(long idx, long prec) const {
        while (covered <= idx) {
            const long start = covered;
            const Enclosure base = inner.ratio(start, prec);
            long j = start + 1;
            while (true) {
                if (j - start > scan_limit)
                    throw ScanExhausted("plateau starting at " +
                                        std::to_string(start) +
                                        " did not close within the scan budget");
                const Enclosure next = inner.ratio(j, prec);
                if (relate(base, next, j) == Rel::Jump) break;
                ++j;
            }
            const Enclosure jump = inner.ratio(j, prec) / inner.ratio(j - 1, prec);
            Block b;
            b.start = start;
            b.len = j - start;
            b.A = Enclosure::min(Enclosure(2), jump);
            blocks.push_back(std::move(b));
            covered = j;
        }
    }

    Enclosure multiplier_product(long n, long prec) const {
        // prod_{i < n} a_i with a_{start+i} = A^{i/len}, combined per block.
        Enclosure p(1);
        for (const Block& b : blocks) {
            if (b.start >= n) break;
            if (b.len == 1) continue;
            const long j = std::min(n - b.start, b.len);
            if (j <= 1) continue;
            mpq_class expo(j * (j - 1), 2 * b.len);
            expo.canonicalize();
            if (expo.get_den() == 1 && b.A.is_exact())
                p *= b.A.pow_int(expo.get_num().get_si());
            else
                p *= b.A.pow(Enclosure(expo), prec);
        }
        return p;
    }

    Enclosure weight(long n, long prec) const override {
        std::lock_guard<std::mutex> lk(mu);
        if (n > 0) ensure_covered(n - 1, prec);
        return inner.weight(n, prec) * multiplier_product(n, prec);
    }

    Enclosure ratio(long n, long prec) const override {
        std::lock_guard<std::mutex> lk(mu);
        ensure_covered(n, prec);
        const Block* blk = nullptr;
        for (const Block& b : blocks)
            if (b.start <= n && n < b.start + b.len) blk = &b;
        const long i = n - blk->start;
        Enclosure a(1);
        if (i > 0) {
            mpq_class expo(i, blk->len);
            expo.canonicalize();
            if (expo.get_den() == 1 && blk->A.is_exact())
                a = blk->A.pow_int(expo.get_num().get_si());
            else
                a = blk->A.pow(Enclosure(expo), prec);
        }
        return inner.ratio(n, prec) * a;
    }

    bool exact() const override { return false; }
    Strictness strictness() const override { return Strictness::KnownStrict; }
    QuasiStatus quasi() const override { return inner.quasi_status(); }
    std::string name() const override { return "regularized(" + inner.name() + ")"; }
    long max_index() const override { return inner.max_index(); }
};

}  // namespace

WeightSequence::WeightSequence(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

WeightSequence WeightSequence::gevrey(const mpq_class& s) {
    if (sgn(s) <= 0) throw ParseError("gevrey exponent must be positive");
    return WeightSequence(std::make_shared<GevreyImpl>(s));
}

WeightSequence WeightSequence::qfamily() {
    return WeightSequence(std::make_shared<QFamilyImpl>());
}

WeightSequence WeightSequence::table(std::vector<mpq_class> values) {
    return WeightSequence(std::make_shared<TableImpl>(std::move(values)));
}

WeightSequence WeightSequence::parse_spec(const std::string& spec) {
    if (spec == "qfamily") return qfamily();
    if (spec.rfind("gevrey:", 0) == 0)
        return gevrey(parse_decimal_or_rational(spec.substr(7)));
    if (spec.rfind("table:", 0) == 0) {
        const std::string path = spec.substr(6);
        std::ifstream in(path);
        if (!in) throw IoError("cannot open table file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("table file " + path + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("M") || !j["M"].is_array())
            throw ParseError("table file must be an object with an \"M\" array");
        std::vector<mpq_class> vals;
        for (const auto& entry : j["M"]) {
            if (entry.is_string())
                vals.push_back(parse_decimal_or_rational(entry.get<std::string>()));
            else if (entry.is_number_integer())
                vals.push_back(mpq_class(entry.get<long>()));
            else
                throw ParseError("table entries must be exact strings or integers");
        }
        WeightSequence ws = table(std::move(vals));
        // File-loaded sequences must be usable by every construction:
        // enforce log-convexity and M_1 >= M_0 up front.
        const long depth = ws.max_index() - 1;
        if (depth >= 1) {
            auto rep = check_log_convex(ws, depth, false);
            if (!rep.ok)
                throw ParseError("table file is not log-convex at ratio index " +
                                 std::to_string(rep.first_violation_index));
        }
        if (ws.max_index() >= 1 && !ws.ratio(0).certainly_ge(Enclosure(1)))
            throw ParseError("table file must have M_1 >= M_0 = 1");
        return ws;
    }
    throw ParseError("unknown weight sequence spec: " + spec);
}

Enclosure WeightSequence::weight(long n, long prec) const {
    if (n < 0) throw std::invalid_argument("weight index must be nonnegative");
    return impl_->weight(n, prec);
}

Enclosure WeightSequence::ratio(long n, long prec) const {
    if (n < 0) throw std::invalid_argument("ratio index must be nonnegative");
    return impl_->ratio(n, prec);
}

bool WeightSequence::exact() const { return impl_->exact(); }
Strictness WeightSequence::strictness() const { return impl_->strictness(); }
QuasiStatus WeightSequence::quasi_status() const { return impl_->quasi(); }
std::string WeightSequence::name() const { return impl_->name(); }
long WeightSequence::max_index() const { return impl_->max_index(); }

ConvexityReport check_log_convex(const WeightSequence& M, long depth,
                                 bool strict, long prec) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    Enclosure prev = M.ratio(0, prec);
    for (long n = 0; n < depth; ++n) {
        Enclosure next = M.ratio(n + 1, prec);
        bool ok;
        if (prev.is_exact() && next.is_exact()) {
            const int c = cmp(next.rational(), prev.rational());
            ok = strict ? c > 0 : c >= 0;
        } else {
            const Cmp c = next.compare(prev);
            if (c == Cmp::Indeterminate)
                throw IndeterminateAtPrecision(
                    "cannot certify ratio monotonicity", n);
            ok = c == Cmp::Greater;
        }
        if (!ok) return {false, n};
        prev = std::move(next);
    }
    return {true, -1};
}

PhiResult phi(const WeightSequence& M, const Enclosure& alpha, long scan_limit,
              long prec) {
    if (!alpha.is_certainly_positive())
        throw std::invalid_argument("phi requires a certainly positive alpha");
    std::vector<Enclosure> terms;
    Enclosure alpha_pow = alpha;  // alpha^{l+1} at index l
    long stop = -1;
    for (long l = 0; l < scan_limit; ++l) {
        terms.push_back(alpha_pow / M.weight(l, prec));
        const Enclosure m = M.ratio(l, prec);
        if (m.certainly_gt(alpha)) {
            stop = l;
            break;
        }
        alpha_pow *= alpha;
    }
    if (stop < 0)
        throw AnalyticLikeOrScanTooShort(
            "ratio sequence did not certifiably exceed alpha within " +
            std::to_string(scan_limit) + " terms; phi may be infinite");

    long best = 0;
    Interval best_hi = terms[0].as_interval(prec);
    for (long l = 1; l <= stop; ++l) {
        Interval iv = terms[l].as_interval(prec);
        if (mpfr_cmp(iv.hi(), best_hi.hi()) > 0) {
            best = l;
            best_hi = iv;
        }
    }

    // Successor term decides the tie flag; at the stop index it is computed
    // fresh from alpha^{stop+2}/M_{stop+1}.
    Enclosure succ = (best < stop)
                         ? terms[best + 1]
                         : alpha_pow * alpha / M.weight(stop + 1, prec);
    PhiResult r;
    r.value = terms[best];
    r.argmax_index = best;
    r.is_tie = !terms[best].certainly_gt(succ);
    return r;
}

IdentityReport phi_identity_check(const WeightSequence& M, long n, long prec) {
    const Enclosure m = M.ratio(n, prec);
    const PhiResult pr = phi(M, m, kDefaultScanLimit, prec);
    IdentityReport rep;
    rep.lhs = M.weight(n, prec) * pr.value;
    rep.rhs = m.pow_int(n + 1);
    if (rep.lhs.is_exact() && rep.rhs.is_exact())
        rep.ok = rep.lhs.rational() == rep.rhs.rational();
    else
        rep.ok = rep.lhs.overlaps(rep.rhs);
    return rep;
}

WeightSequence regularize_strict(const WeightSequence& M, long scan_limit) {
    if (M.strictness() == Strictness::KnownStrict) return M;
    return WeightSequence(std::make_shared<RegularizedImpl>(M, scan_limit));
}

ClassVerdict quasianalytic_diagnostic(const WeightSequence& M, long depth,
                                      long prec) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    ClassVerdict v;
    v.status = M.quasi_status();
    v.depth = depth;
    Enclosure sum(0);
    for (long n = 0; n <= depth; ++n)
        sum += Enclosure(1) / (Enclosure(n + 1) * M.ratio(n, prec));
    v.partial_sum = std::move(sum);
    return v;
}

InclusionReport inclusion_diagnostic(const WeightSequence& M,
                                     const WeightSequence& N, long depth,
                                     long prec) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    InclusionReport rep;
    Interval first(prec), last(prec);
    Interval best(prec);
    for (long n = 1; n <= depth; ++n) {
        const Enclosure q = M.weight(n, prec) / N.weight(n, prec);
        mpq_class e(1, n);
        Interval r = Interval::pow(q.as_interval(prec),
                                   Interval::from_rational(e, prec));
        if (n == 1) {
            first = r;
            best = r;
            rep.argmax_index = 1;
        } else if (mpfr_cmp(r.hi(), best.hi()) > 0) {
            best = r;
            rep.argmax_index = n;
        }
        if (n == depth) last = r;
    }
    rep.sup_so_far = Enclosure(best);
    const double f = first.mid_double(), l = last.mid_double();
    if (l > f * 1.01) rep.trend = Trend::Increasing;
    else if (l < f * 0.99) rep.trend = Trend::Decreasing;
    else rep.trend = Trend::Flat;
    return rep;
}

std::vector<mpz_class> b_sequence_prefix(const WeightSequence& M, long n,
                                         long prec) {
    if (n < 1) throw std::invalid_argument("b_sequence index must be >= 1");
    std::vector<mpz_class> b;
    b.push_back(1);  // b_1
    for (long i = 1; i < n; ++i) {
        // b_{i+1} = 2 b_i iff 2 b_i <= m_{i+1}.
        const mpz_class doubled = 2 * b.back();
        const Enclosure lhs{mpq_class(doubled)};
        const Enclosure m = M.ratio(i + 1, prec);
        if (lhs.certainly_le(m)) {
            b.push_back(doubled);
        } else if (lhs.certainly_gt(m)) {
            b.push_back(b.back());
        } else {
            throw IndeterminateAtPrecision(
                "cannot decide the doubling test for b", i + 1);
        }
    }
    return b;
}

mpz_class b_sequence(const WeightSequence& M, long n, long prec) {
    return b_sequence_prefix(M, n, prec).back();
}

WeightSequence mk_sequence(const WeightSequence& M, long k,
                           const Enclosure& c_k, long prec) {
    if (k < 1) throw std::invalid_argument("mk shift index must be >= 1");
    const Enclosure mk = M.weight(k, prec);
    if (c_k.certainly_ge(mk))
        return WeightSequence(std::make_shared<MkImpl>(M, k, c_k));
    if (c_k.certainly_lt(mk))
        throw InvalidConstant("scaling constant c_" + std::to_string(k) +
                              " is below M_" + std::to_string(k));
    throw IndeterminateAtPrecision("cannot certify c_k >= M_k", k);
}

}  // namespace carleman
