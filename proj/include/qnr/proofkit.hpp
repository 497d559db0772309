#pragma once

/**
 * @file proofkit.hpp
 * @brief Executable checks for the argument that no long non-residue run
 *        exists for p = 13 (mod 24) beyond the computed range.
 *
 * Notation used throughout, for an odd prime p and an integer k >= 1:
 *
 *   h          = (p + 1) / 2                the inverse of 2 mod p
 *   s          = floor(sqrt p)
 *   window     = [h + k, h + k + s]         a hypothetical run of s+1 non-residues
 *   diag(x)    = h^2 + k + k^2 + 2kx + x + x^2
 *
 * diag(x) is congruent to (h + k + x)^2, the square of the window element at
 * offset x. With m = x - y and n = x + y the product (h+k+m)(h+k+n) is
 * congruent to diag(x) - y^2, so sweeping y walks down from diag(x) in steps
 * of 2y + 1. If the walk lands in a copy of the window shifted by a multiple
 * of p, a product of two window elements (a residue) reduces into the window,
 * which contradicts the run consisting of non-residues.
 */

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnr/arith.hpp"
#include "qnr/radical.hpp"
#include "qnr/residue.hpp"

namespace qnr::proofkit {

using arith::Rational;
using radical::RadicalExpr;
using radical::TriBool;

/// Beyond this bound the argument covers every prime; below it the
/// exhaustive scan does.
inline constexpr u64 kProofBound = 38659;

// ---------------------------------------------------------------------------
// Localization of long runs

/// Where a run sits relative to the intervals a long run is confined to.
enum class Placement {
    Localized,  ///< ((p+3+sqrt p)/2, p/2 + 2^(1/2) p^(3/4) - sqrt(p)/2)
    UpperHalf,  ///< (p/2, p/2 + 2^(1/2) p^(3/4) - sqrt(p)/2)
    Central,    ///< (p/2 - 2^(1/2) p^(3/4) + sqrt(p)/2, p/2 + 2^(1/2) p^(3/4) - sqrt(p)/2)
    Low,        ///< (1, 2^(1/2) p^(3/4) - sqrt(p)/2)
    High,       ///< (p - 2^(1/2) p^(3/4) + sqrt(p)/2, p - 1)
    Outside,
};

std::string to_string(Placement t);

struct PlacedRun {
    residue::Run run;
    Placement placement = Placement::Outside;
};

struct LocalizationReport {
    u64 p = 0;
    u64 threshold = 0;
    std::optional<u64> gapA;               ///< a with N = 2a^2 below sqrt(p)
    std::optional<u64> gapWitnessN;        ///< N = 2a^2, a non-residue
    u64 leastOddQnrU = 0;
    std::optional<u64> upperHalfResidue;   ///< residue r with p/2 < r and (2r - p)^2 < p
    std::vector<PlacedRun> runsAtThreshold;
    bool factsHold = false;                ///< all three facts established
    bool longRunsLocalized = true;         ///< every run with length^2 > p is Localized
};

/// Requires a prime p = 13 (mod 24). For p above kProofBound a missing fact
/// raises VerificationFailure; below it the facts are reported as found.
LocalizationReport localization_report(u64 p, u64 threshold);

/// Smallest placement (most specific first) containing the whole run.
Placement place_run(u64 p, const residue::Run& run);

// ---------------------------------------------------------------------------
// Product criterion and witness

/// diag(x) for the given p and k, exact.
i128 diagonal_value(u64 p, u64 k, i64 x);

struct CriterionReport {
    u64 p = 0;
    u64 k = 0;
    Rational a;
    TriBool spanHolds;       ///< (a sqrt p - 2)^2 > 2k + 2(1-a) sqrt p + 2 - s
    bool diffExceedsP = false;
    i64 xLow = 0;            ///< floor(a sqrt p) - 2
    i64 xHigh = 0;           ///< floor((1-a) sqrt p)
    i64 diffValue = 0;       ///< diag(xHigh) - diag(xLow)

    bool holds() const noexcept { return spanHolds.is_true() && diffExceedsP; }
};

/// Requires p = 13 (mod 24), p < 2^32, 1 <= k <= p, and 1/4 <= a <= 15/32.
CriterionReport product_criterion(u64 p, u64 k, Rational a);

struct Witness {
    u64 p = 0;
    u64 k = 0;
    Rational a;
    i64 x = 0;
    i64 c = 0;       ///< copy index: the window shifted by c*p is straddled
    i64 y = 0;
    i64 m = 0;       ///< x - y
    i64 n = 0;       ///< x + y
    u64 residue = 0; ///< (h+k+m)(h+k+n) mod p, inside the window
    /// True when diag(x-1) already reduces into the window; the witness is
    /// then m = n = x (x having been stepped back by one) with y = 0.
    bool direct = false;
};

/// Throws PreconditionError unless product_criterion(p, k, a).holds();
/// VerificationFailure when the search comes back empty.
Witness product_witness(u64 p, u64 k, Rational a);

/// a for the range k falls in: 1/4 when k <= 2 sqrt p, 3/8 when
/// k <= 8 sqrt p, 15/32 above. Requires floor(sqrt(p)/2) + 1 < k.
Rational case_select(u64 p, u64 k);

struct SweepFailure {
    u64 k = 0;
    Rational a;
    std::string reason;
};

struct BoundaryProbe {
    u64 k = 0;
    Rational a;
    bool criterionHolds = false;
    bool witnessFound = false;
};

struct SweepSummary {
    u64 p = 0;
    u64 kFirst = 0;  ///< smallest integer k > sqrt(p)/2 + 1
    u64 kLast = 0;   ///< largest integer k < 2^(1/2) p^(3/4) - sqrt(p)
    u64 checked = 0;
    u64 refuted = 0;
    std::vector<SweepFailure> failures;   ///< ascending k
    std::vector<BoundaryProbe> boundary;  ///< kFirst - 1 and kLast + 1, informational
    std::vector<Witness> witnesses;       ///< filled when requested, ascending k
};

struct SweepOptions {
    unsigned jobs = 1;
    bool keepWitnesses = false;
};

/// Every k strictly inside the window must be refuted. Requires a prime
/// p = 13 (mod 24) above kProofBound.
SweepSummary sweep_k(u64 p, const SweepOptions& opts = {});

// ---------------------------------------------------------------------------
// Thresholds

enum class ThresholdCase { SmallK, MiddleK, LargeK, OddNonResidueBound };

std::string to_string(ThresholdCase c);

/// The claimed inequality lhs > rhs at p.
std::pair<RadicalExpr, RadicalExpr> threshold_inequality(ThresholdCase c, u64 p);

struct ThresholdReport {
    ThresholdCase caseId = ThresholdCase::SmallK;
    u64 paperThreshold = 0;
    u64 verifiedFrom = 0;       ///< smallest P with the inequality true on [P, checkedUpTo]
    u64 checkedUpTo = 0;
    bool holdsAtThreshold = false;
    bool holdsJustAbove = false;
    u64 violationsAbove = 0;    ///< integers in (paperThreshold, checkedUpTo] where it fails
    u64 indeterminate = 0;
    std::string boundaryBehavior;

    bool ok() const noexcept { return violationsAbove == 0 && indeterminate == 0; }
};

struct ThresholdOptions {
    u64 upTo = 1'000'000;
    unsigned jobs = 1;
};

std::vector<ThresholdReport> threshold_report(const ThresholdOptions& opts = {});
ThresholdReport threshold_report(ThresholdCase c, const ThresholdOptions& opts = {});

// ---------------------------------------------------------------------------
// Cited bounds, checked empirically

enum class Bound {
    BrauerOdd5mod8,  ///< least odd non-residue u < 2^(3/5) p^(2/5) + 2^(-6/5) 25 p^(1/5) + 3, p = 5 (mod 8)
    Brauer4n1,       ///< longest constant-character run l satisfies l^2 < p, p = 3 (mod 4)
    Norton,          ///< longest constant-character run H < 4.1 p^(1/4) log p
};

std::string to_string(Bound b);

struct BoundViolation {
    u64 p = 0;
    u64 value = 0;  ///< u, l or H
};

struct BoundSummary {
    Bound which = Bound::Brauer4n1;
    u64 lo = 0;
    u64 hi = 0;
    u64 primesChecked = 0;
    std::vector<BoundViolation> violations;
    u64 indeterminate = 0;
    bool probative = true;  ///< false for bounds that are asserted but unproven

    bool ok() const noexcept { return violations.empty() && indeterminate == 0; }
};

BoundSummary bound_check(Bound which, u64 lo, u64 hi, unsigned jobs = 1);

/// Single-prime forms of the checks, for tests and diagnostics.
TriBool brauer_odd_bound_holds(u64 p, u64 u);
TriBool norton_bound_holds(u64 p, u64 h);

}  // namespace qnr::proofkit
