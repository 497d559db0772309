#include "qnr/schur.hpp"

#include <chrono>
#include <numeric>

#include "qnr/errors.hpp"
#include "parallel.hpp"

namespace qnr::schur {

VerificationRecord verify_prime(u64 p, const residue::TableLimits& limits) {
    if (p < 3 || !arith::is_prime(p)) throw PreconditionError("verify_prime: " + std::to_string(p) + " is not an odd prime");
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = residue::ResidueTable::build(p, limits);
    const residue::RunReport r = residue::longest_run(table);
    const auto t1 = std::chrono::steady_clock::now();
    VerificationRecord rec;
    rec.p = p;
    rec.maxRunLength = r.maxRunLength;
    rec.runStart = r.runStart;
    rec.floorSqrtP = r.floorSqrtP;
    rec.exceeds = r.exceeds;
    rec.elapsedMicros = static_cast<u64>(std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count());
    return rec;
}

BatchSummary verify_range(u64 lo, u64 hi, ClassFilter filter, const RangeOptions& opts) {
    if (lo > hi) throw PreconditionError("verify_range: lo must not exceed hi");
    if (filter.modulus == 0 || filter.residue >= filter.modulus) throw PreconditionError("verify_range: bad class filter");
    std::vector<u64> primes = arith::primes_in_class(std::max<u64>(lo, 3), hi, filter.residue, filter.modulus);

    BatchSummary s;
    s.lo = lo;
    s.hi = hi;
    s.classFilter = filter;
    s.records.resize(primes.size());
    detail::parallel_for(primes.size(), opts.jobs, opts.progress,
                 [&](u64 i) { s.records[i] = verify_prime(primes[i], opts.limits); });

    s.primesChecked = s.records.size();
    for (const VerificationRecord& r : s.records) {
        if (r.exceeds) s.exceedances.push_back(r);
        // L^2/p > current max  <=>  L^2 * den > num * p
        const u128 l2 = static_cast<u128>(r.maxRunLength) * r.maxRunLength;
        if (s.maxRatioPrime == 0 ||
            l2 * s.maxRatioSqDenominator > static_cast<u128>(s.maxRatioSqNumerator) * r.p) {
            const u64 num = static_cast<u64>(l2);
            const u64 g = std::gcd(num, r.p);
            s.maxRatioSqNumerator = num / g;
            s.maxRatioSqDenominator = r.p / g;
            s.maxRatioPrime = r.p;
        }
    }
    return s;
}

const std::array<PaperTuple, 20>& paper_tuples() {
    static const std::array<PaperTuple, 20> tuples{{
        {13, 4, 3},        {757, 8, 27},      {3181, 9, 56},     {5869, 9, 76},     {7237, 10, 85},
        {9397, 10, 96},    {12037, 11, 109},  {14389, 12, 119},  {16477, 12, 128},  {18517, 13, 136},
        {20509, 13, 143},  {22381, 12, 149},  {24061, 13, 155},  {26029, 13, 161},  {28429, 13, 168},
        {30469, 14, 174},  {32749, 15, 180},  {34693, 14, 186},  {36709, 15, 191},  {38653, 15, 196},
    }};
    return tuples;
}

bool PaperTableResult::all_match() const {
    for (const TableRow& r : rows) {
        if (!r.diffs.empty()) return false;
    }
    return rows.size() == paper_tuples().size();
}

PaperTableResult paper_table() {
    PaperTableResult out;
    for (const PaperTuple& t : paper_tuples()) {
        TableRow row{t, verify_prime(t.p), {}};
        if (row.computed.maxRunLength != t.maxRunLength) row.diffs.push_back("max_run");
        if (row.computed.floorSqrtP != t.floorSqrtP) row.diffs.push_back("isqrt_p");
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace qnr::schur
