#pragma once

#include <memory>
#include <string>
#include <vector>

#include "carleman/enclosure.hpp"

// Weight sequences M = (M_n) with M_0 = 1 and non-decreasing ratios
// m_n = M_{n+1}/M_n, the scale function phi(a) = sup_l a^{l+1}/M_l, strict
// regularization, and the auxiliary sequences the constructions consume.

namespace carleman {

enum class Strictness { KnownStrict, Unknown };
enum class QuasiStatus { Quasianalytic, NonQuasianalytic, Unknown };
enum class Trend { Increasing, Decreasing, Flat };

class WeightSequence {
  public:
    /// M_n = (n!)^s for positive rational s; exact when s is an integer.
    static WeightSequence gevrey(const mpq_class& s);
    /// Quasianalytic, non-analytic test family with m_n = log(n+e).
    static WeightSequence qfamily();
    /// Explicit prefix of values; requires M_0 = 1 and positive entries.
    static WeightSequence table(std::vector<mpq_class> values);
    /// Parses `gevrey:<s>`, `qfamily`, `table:<path>`.  Table files are JSON
    /// { "M": ["1", "1", "2", ...] } with exact rational/decimal strings and
    /// must be log-convex.
    static WeightSequence parse_spec(const std::string& spec);

    Enclosure weight(long n, long prec = kDefaultPrec) const;
    Enclosure ratio(long n, long prec = kDefaultPrec) const;

    bool exact() const;
    Strictness strictness() const;
    QuasiStatus quasi_status() const;
    /// Stable identifier used in cache keys and reports.
    std::string name() const;
    /// Last index with a defined weight, or -1 when unbounded.
    long max_index() const;

    struct Impl;
    explicit WeightSequence(std::shared_ptr<const Impl> impl);
    const std::shared_ptr<const Impl>& impl() const { return impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

struct PhiResult {
    Enclosure value;
    long argmax_index = 0;
    bool is_tie = false;
};

struct ConvexityReport {
    bool ok = true;
    long first_violation_index = -1;
};

struct IdentityReport {
    bool ok = false;
    Enclosure lhs;
    Enclosure rhs;
};

struct ClassVerdict {
    QuasiStatus status = QuasiStatus::Unknown;
    Enclosure partial_sum;
    long depth = 0;
};

struct InclusionReport {
    Enclosure sup_so_far;
    long argmax_index = 1;
    Trend trend = Trend::Flat;
};

inline constexpr long kDefaultScanLimit = 100000;

/// Certifies m_{n+1} >= m_n (strict: >) for all n < depth.  An enclosure
/// overlap that cannot be decided raises IndeterminateAtPrecision with the
/// offending index.
ConvexityReport check_log_convex(const WeightSequence& M, long depth,
                                 bool strict, long prec = kDefaultPrec);

/// sup_{l>=0} alpha^{l+1}/M_l by the unimodal scan: terms rise while
/// m_l <= alpha and fall once m_l > alpha, so the scan stops at the first
/// certified crossing.  Raises AnalyticLikeOrScanTooShort when no crossing
/// is certified within scan_limit.
PhiResult phi(const WeightSequence& M, const Enclosure& alpha,
              long scan_limit = kDefaultScanLimit, long prec = kDefaultPrec);

/// Checks M_n * phi(m_n) = m_n^{n+1}: exact equality on the exact path,
/// enclosure consistency (overlap) otherwise.
IdentityReport phi_identity_check(const WeightSequence& M, long n,
                                  long prec = kDefaultPrec);

/// Smallest-multiplier repair of constancy plateaus in the ratio sequence:
/// each maximal block of equal ratios of length l gets multipliers A^{i/l},
/// i = 0..l-1, with A = min(2, jump to the next block).  Returns the input
/// unchanged when it is already known strictly log-convex.
WeightSequence regularize_strict(const WeightSequence& M,
                                 long scan_limit = kDefaultScanLimit);

/// Partial sum of sum_n M_n/((n+1) M_{n+1}) through `depth`, with the
/// closed-form classification where the family is known.
ClassVerdict quasianalytic_diagnostic(const WeightSequence& M, long depth,
                                      long prec = kDefaultPrec);

/// sup_{1<=n<=depth} (M_n/N_n)^{1/n} over the scanned prefix plus a trend
/// heuristic; finite data cannot certify the true sup.
InclusionReport inclusion_diagnostic(const WeightSequence& M,
                                     const WeightSequence& N, long depth,
                                     long prec = kDefaultPrec);

/// b_1 = 1, b_{n+1} = 2 b_n exactly when 2 b_n <= m_{n+1} certifies; every
/// term is a power of two and b_n <= min(m_n, 2^n).
mpz_class b_sequence(const WeightSequence& M, long n, long prec = kDefaultPrec);
std::vector<mpz_class> b_sequence_prefix(const WeightSequence& M, long n,
                                         long prec = kDefaultPrec);

/// The shifted family M^k: 1 below k, c_k^{2n-2k+1} M_n from k on.
/// Requires k >= 1 and certified c_k >= M_k.
WeightSequence mk_sequence(const WeightSequence& M, long k,
                           const Enclosure& c_k, long prec = kDefaultPrec);

}  // namespace carleman
