#pragma once

#include <stdexcept>
#include <string>

namespace carleman {

/// Raised when an enclosure is too wide to decide a comparison or finish a
/// computation at the current working precision, after retry-doubling up to
/// the hard precision cap.
struct NeedMorePrecision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A certified comparison between two enclosures could not be decided.
/// `index` identifies the offending element when the check scans a sequence.
struct IndeterminateAtPrecision : std::runtime_error {
    long index;
    explicit IndeterminateAtPrecision(const std::string& msg, long idx = -1)
        : std::runtime_error(msg), index(idx) {}
};

/// Table-backed weight sequence queried past the last stored entry.
struct OutOfTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A scaling constant violates its lower-bound requirement (c_k >= M_k).
struct InvalidConstant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A bounded forward scan (ratio plateaus, pole groups) hit its budget
/// before the structural condition it was waiting for occurred.
struct ScanExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The truncation tail cannot be pushed below the requested tolerance
/// within the group budget.
struct TailNotSmallEnough : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The ratio sequence never exceeded the scanned threshold: either the
/// sequence is analytic-like (sup over the scan is not the supremum) or the
/// scan limit is too small.
struct AnalyticLikeOrScanTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed user input (sequence spec strings, rationals, config files).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing reports and caches.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace carleman
