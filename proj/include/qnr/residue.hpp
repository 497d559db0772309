#pragma once

/**
 * @file residue.hpp
 * @brief Quadratic-character tables for an odd prime and run statistics.
 *
 * Runs live on 1..p-1 only: 0 has character 0, so nothing wraps past p.
 */

#include <optional>
#include <span>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr::residue {

struct TableLimits {
    u64 maxBits = u64{1} << 31;
};

/// Bit-packed classification of 1..p-1; a set bit marks a quadratic residue.
class ResidueTable {
public:
    /// Marks k^2 mod p for k = 1..(p-1)/2. Throws PreconditionError for
    /// p < 3 or even p, BudgetError when p bits exceed the limit.
    /// Primality is the caller's responsibility (checked in debug paths).
    static ResidueTable build(u64 p, const TableLimits& limits = {});

    u64 p() const noexcept { return p_; }

    /// i in 1..p-1
    bool is_residue(u64 i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }

    /// +1 residue, -1 non-residue, 0 for multiples of p.
    int character(u64 i) const noexcept {
        const u64 r = i % p_;
        return r == 0 ? 0 : (is_residue(r) ? 1 : -1);
    }

    u64 residue_count() const noexcept;

    /// Words covering bit indices 0..p; bit 0 and bit p are always clear.
    std::span<const u64> words() const noexcept { return words_; }

private:
    ResidueTable(u64 p, std::vector<u64> words) : p_(p), words_(std::move(words)) {}

    u64 p_;
    std::vector<u64> words_;
};

struct Run {
    u64 start = 0;
    u64 length = 0;

    u64 end() const noexcept { return start + length - 1; }
    friend bool operator==(const Run&, const Run&) = default;
    friend auto operator<=>(const Run&, const Run&) = default;
};

struct RunReport {
    u64 p = 0;
    u64 maxRunLength = 0;
    u64 runStart = 0;  ///< smallest start among runs of maximal length
    u64 floorSqrtP = 0;
    bool exceeds = false;  ///< maxRunLength^2 > p
};

struct RunScan {
    RunReport report;
    std::vector<Run> runs;  ///< maximal non-residue runs with length >= minLength, by start
};

/// Maximal blocks of consecutive non-residues in 1..p-1.
RunScan scan_runs(const ResidueTable& table, u64 minLength);

/// Same report as scan_runs without collecting runs.
RunReport longest_run(const ResidueTable& table);

/// Smallest odd non-residue.
u64 least_odd_qnr(const ResidueTable& table);

/// Same quantity through the Jacobi symbol, without building a table.
u64 least_odd_qnr(u64 p);

/// a with 2a^2 a non-residue strictly inside (sqrt p - 2^(3/2) p^(1/4) + 2, sqrt p).
/// The smallest such a is returned. Requires p = 13 (mod 24).
std::optional<u64> find_qnr_2a2_gap(const ResidueTable& table);

struct CharacterRunStat {
    u64 p = 0;
    u64 longestConstantRun = 0;  ///< either character value
};

CharacterRunStat char_run_stats(const ResidueTable& table);

}  // namespace qnr::residue
