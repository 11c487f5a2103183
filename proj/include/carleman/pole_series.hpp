#pragma once

#include <memory>
#include <vector>

#include "carleman/enclosure.hpp"
#include "carleman/weights.hpp"

// The two one-dimensional constructions as certified-evaluable series of
// simple poles: the lattice series (rows of poles over dyadic rationals at
// heights 1/m_k, group weight 1/(3^k phi(m_k))) and the single-pole block
// series (pole i/m_k, group weight 1/(2^k phi(m_k))).  Derivatives are taken
// term by term in normalized form f^(j)/j!; factorials never materialize.

namespace carleman {

enum class SeriesKind { Thm1, Block };

struct PoleGroup {
    long group_index = 0;
    Enclosure coeff;  // certainly positive
    std::vector<ComplexEnclosure> poles;
};

/// Truncation certificate: everything past group K is bounded by tail_bound
/// in absolute value, uniformly over the evaluation point used.
struct Certificate {
    long groups_used = 0;
    Enclosure tail_bound;
    long precision_bits = 0;
};

/// t = p/2^q in (-1,1), reduced (p odd or zero).
struct DyadicPoint {
    mpz_class p;
    unsigned long q = 0;

    DyadicPoint() = default;
    DyadicPoint(mpz_class num, unsigned long expo);
    static DyadicPoint from_rational(const mpq_class& v);
    mpq_class to_rational() const;
};

class PoleSeries {
  public:
    SeriesKind kind() const;
    const WeightSequence& weights() const;
    /// Group k >= 1, generated on demand and memoized.
    const PoleGroup& group(long k, long prec = kDefaultPrec) const;
    /// Closed-form bound on the full series of normalized j-th derivative
    /// magnitudes over groups k > K: M_j (6 (2/3)^{K+1} + (3/2) 3^{-(K+1)})
    /// for the lattice series, M_j 2^{-K} for the block series.
    Enclosure tail_majorant(long j, long K, long prec = kDefaultPrec) const;

    struct Impl;
    explicit PoleSeries(std::shared_ptr<Impl> impl);
    const std::shared_ptr<Impl>& impl() const { return impl_; }

  private:
    std::shared_ptr<Impl> impl_;
};

PoleSeries build_thm1(WeightSequence M);
PoleSeries build_block(WeightSequence M);

/// Either a fixed number of groups or a tolerance relative to M_j; the
/// tolerance mode picks the smallest K with tail_majorant(j, K) <= tol M_j
/// and fails with TailNotSmallEnough past the group budget.
struct Truncation {
    static Truncation groups(long K);
    static Truncation tolerance(mpq_class tol, long budget = 2048);
    long fixed_K = -1;
    mpq_class tol;
    long budget = 2048;
};

struct CoeffResult {
    // K-group partial sum of f^(j)(x)/j!; on the inexact path the tail bound
    // is already folded into the enclosure, on the exact path the partial
    // sum is exact and the tail lives only in the certificate.
    ComplexEnclosure value;
    Certificate cert;
    bool tail_folded = false;
    /// Enclosure of the full series value regardless of path.
    ComplexEnclosure full() const;
};

struct RealCoeffResult {
    Enclosure value;  // Re + Im of the complex coefficient
    Certificate cert;
    bool tail_folded = false;
    Enclosure full() const;
};

/// Enclosure of f^(j)(x)/j! = sum_k coeff_k sum_poles (-1)^j (x-z)^{-(j+1)}.
/// The lattice series requires |x| < 1 certified.  Dyadic x with an exact
/// weight family stays on the exact-rational path.
CoeffResult taylor_coeff(const PoleSeries& series, const Enclosure& x, long j,
                         const Truncation& trunc, long prec = kDefaultPrec);
CoeffResult taylor_coeff(const PoleSeries& series, const DyadicPoint& x, long j,
                         const Truncation& trunc, long prec = kDefaultPrec);

/// All normalized coefficients j = 0..j_max at once, sharing the per-pole
/// reciprocals across orders.
std::vector<CoeffResult> taylor_coeff_range(const PoleSeries& series,
                                            const Enclosure& x, long j_max,
                                            long K, long prec = kDefaultPrec);

/// Re + Im of the complex coefficient: the real-valued variant g = Re f + Im f.
RealCoeffResult real_variant_coeff(const PoleSeries& series, const Enclosure& x,
                                   long j, const Truncation& trunc,
                                   long prec = kDefaultPrec);

/// Smallest k such that the group-k lattice has a pole column above t
/// (b_k a multiple of 2^q); lattice series only.
long first_group_containing(const PoleSeries& series, const DyadicPoint& t,
                            long search_limit = 4096);

/// Certified enclosure of C_j = 2 sum_{n>=1} (n^2+1)^{-(j+1)/2}: partial sum
/// to N plus the integral tail bound 2 N^{-j}/j.  N = 0 picks a default
/// schedule by j.
Enclosure cj_value(long j, long N = 0, long prec = kDefaultPrec);

}  // namespace carleman
