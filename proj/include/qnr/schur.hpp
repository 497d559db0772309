#pragma once

/**
 * @file schur.hpp
 * @brief Sweeps over prime ranges comparing the longest non-residue run
 *        with sqrt(p), plus the published sample table.
 */

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qnr/arith.hpp"
#include "qnr/residue.hpp"

namespace qnr::schur {

struct VerificationRecord {
    u64 p = 0;
    u64 maxRunLength = 0;
    u64 runStart = 0;
    u64 floorSqrtP = 0;
    bool exceeds = false;
    u64 elapsedMicros = 0;  ///< diagnostic only; never serialized
};

struct ClassFilter {
    u64 residue = 0;
    u64 modulus = 1;  ///< 1 means every prime

    bool all() const noexcept { return modulus == 1; }
    friend bool operator==(const ClassFilter&, const ClassFilter&) = default;
};

struct BatchSummary {
    u64 lo = 0;
    u64 hi = 0;
    ClassFilter classFilter;
    u64 primesChecked = 0;
    std::vector<VerificationRecord> records;     ///< ascending in p
    std::vector<VerificationRecord> exceedances; ///< records with exceeds set
    // max of maxRunLength^2 / p, in lowest terms (0/1 when nothing was checked)
    u64 maxRatioSqNumerator = 0;
    u64 maxRatioSqDenominator = 1;
    u64 maxRatioPrime = 0;
};

VerificationRecord verify_prime(u64 p, const residue::TableLimits& limits = {});

struct RangeOptions {
    unsigned jobs = 1;
    residue::TableLimits limits;
    /// Called from the merging thread with (done, total); may be empty.
    std::function<void(u64, u64)> progress;
};

/// One record per odd prime in [lo, hi] of the selected class. The prime 2
/// has no non-residue and is skipped. Output order is ascending p for any
/// number of jobs.
BatchSummary verify_range(u64 lo, u64 hi, ClassFilter filter, const RangeOptions& opts = {});

struct PaperTuple {
    u64 p;
    u64 maxRunLength;
    u64 floorSqrtP;
};

/// The twenty published sample tuples (p, longest run, floor(sqrt p)).
const std::array<PaperTuple, 20>& paper_tuples();

struct TableRow {
    PaperTuple expected;
    VerificationRecord computed;
    std::vector<std::string> diffs;  ///< field names that disagree; empty on match
};

struct PaperTableResult {
    std::vector<TableRow> rows;
    bool all_match() const;
};

PaperTableResult paper_table();

}  // namespace qnr::schur
