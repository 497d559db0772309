#include "qnr/residue.hpp"

#include <algorithm>
#include <bit>
#include <utility>
#include <string>

#include "qnr/errors.hpp"
#include "qnr/radical.hpp"

namespace qnr::residue {

namespace {

/// s mod p for s < 2p. Branchless; the wrap is close to a coin flip.
inline u64 reduce_once(u64 s, u64 p) {
#if defined(__x86_64__)
    u64 t = s - p;
    asm("cmp %2, %1\n\tcmovb %1, %0" : "+r"(t) : "r"(s), "r"(p) : "cc");
    return t;
#else
    return s >= p ? s - p : s;
#endif
}

}  // namespace

ResidueTable ResidueTable::build(u64 p, const TableLimits& limits) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("residue table needs an odd prime p >= 3");
    if (p > limits.maxBits) {
        throw BudgetError("residue table for p=" + std::to_string(p) + " needs " + std::to_string(p) +
                              " bits, budget is " + std::to_string(limits.maxBits),
                          p, limits.maxBits);
    }
    std::vector<u64> words(p / 64 + 1, 0);
    // Squares of 1..q and of q+1..2q as two independent chains, each step
    // (k+1)^2 = k^2 + 2k + 1 reduced with a conditional subtract.
    const u64 half = (p - 1) / 2;
    const u64 q = half / 2;
    u64 a = 0, da = 1;
    u64 b = static_cast<u64>(static_cast<u128>(q) * q % p), db = (2 * q + 1) % p;
    for (u64 k = 0; k < q; ++k) {
        a = reduce_once(a + da, p);
        b = reduce_once(b + db, p);
        da += 2;
        db = reduce_once(db + 2, p);
        words[a >> 6] |= u64{1} << (a & 63);
        words[b >> 6] |= u64{1} << (b & 63);
    }
    if (half % 2) {
        const u64 r = static_cast<u64>(static_cast<u128>(half) * half % p);
        words[r >> 6] |= u64{1} << (r & 63);
    }
    return ResidueTable(p, std::move(words));
}

u64 ResidueTable::residue_count() const noexcept {
    u64 n = 0;
    for (u64 w : words_) n += static_cast<u64>(std::popcount(w));
    return n;
}

namespace {

/// Calls f(position) for every residue in ascending order, then f(p).
template <class F>
void for_each_boundary(const ResidueTable& table, F&& f) {
    const auto words = table.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        u64 bits = words[w];
        while (bits) {
            f(static_cast<u64>(w) * 64 + static_cast<u64>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    f(table.p());
}

RunReport make_report(u64 p, u64 len, u64 start) {
    RunReport r;
    r.p = p;
    r.maxRunLength = len;
    r.runStart = start;
    r.floorSqrtP = arith::isqrt(p);
    r.exceeds = static_cast<u128>(len) * len > p;
    return r;
}

}  // namespace

RunScan scan_runs(const ResidueTable& table, u64 minLength) {
    RunScan out;
    u64 prev = 0, best = 0, bestStart = 0;
    for_each_boundary(table, [&](u64 b) {
        const u64 gap = b - prev - 1;
        if (gap > 0) {
            if (gap > best) {
                best = gap;
                bestStart = prev + 1;
            }
            if (gap >= minLength) out.runs.push_back({prev + 1, gap});
        }
        prev = b;
    });
    out.report = make_report(table.p(), best, bestStart);
    return out;
}

namespace {

// Word-at-a-time longest run of clear bits (of set bits when `invert`) in
// 1..p-1. Bit 0 and every bit from p upward act as separators either way.
// A run that crosses word boundaries is accumulated in `carry`; runs inside a
// word are only examined bit by bit when a shift-and test says one is longer
// than the current best. Returns (length, smallest start).
std::pair<u64, u64> longest_clear_run(std::span<const u64> words, u64 p, bool invert) {
    const std::size_t n = words.size();
    u64 best = 0, bestStart = 0, carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        u64 x = invert ? ~words[i] : words[i];
        if (i == 0) x |= 1;
        if (i + 1 == n) x |= ~u64{0} << (p & 63);
        const u64 base = static_cast<u64>(i) * 64;
        if (x == 0) {
            carry += 64;
            continue;
        }
        const u64 low = static_cast<u64>(std::countr_zero(x));
        if (carry + low > best) {
            best = carry + low;
            bestStart = base - carry;
        }
        const u64 high = 63 - static_cast<u64>(std::countl_zero(x));
        if (best < 62 && high > low + 1) {
            // zeros strictly between the lowest and highest set bit
            const u64 upto = high == 63 ? ~u64{0} : (u64{1} << (high + 1)) - 1;
            u64 v = ~x & upto & ~((u64{1} << (low + 1)) - 1);
            const u64 want = best + 1;
            u64 len = 1;
            while (v && len * 2 <= want) {
                v &= v >> len;
                len *= 2;
            }
            if (want > len) v &= v >> (want - len);
            if (v) {
                u64 prev = low, rest = x & (x - 1);
                while (rest) {
                    const u64 pos = static_cast<u64>(std::countr_zero(rest));
                    rest &= rest - 1;
                    if (pos - prev - 1 > best) {
                        best = pos - prev - 1;
                        bestStart = base + prev + 1;
                    }
                    prev = pos;
                }
            }
        }
        carry = static_cast<u64>(std::countl_zero(x));
    }
    return {best, bestStart};
}

}  // namespace

RunReport longest_run(const ResidueTable& table) {
    const auto [len, start] = longest_clear_run(table.words(), table.p(), false);
    return make_report(table.p(), len, start);
}

u64 least_odd_qnr(const ResidueTable& table) {
    for (u64 u = 1;; u += 2) {
        if (table.character(u) == -1) return u;
    }
}

u64 least_odd_qnr(u64 p) {
    for (u64 u = 1;; u += 2) {
        if (arith::jacobi(static_cast<i64>(u), p) == -1) return u;
    }
}

std::optional<u64> find_qnr_2a2_gap(const ResidueTable& table) {
    using namespace radical;
    const u64 p = table.p();
    if (p % 24 != 13) throw PreconditionError("find_qnr_2a2_gap requires p = 13 (mod 24)");
    // sqrt(p) - 2^(3/2) p^(1/4) + 2
    const RadicalExpr lower(p, {Term{1, kP1_2}, Term{-2, kP1_4, kSqrt2}, Term{2}});
    for (u64 a = 1;; ++a) {
        const u64 n = 2 * a * a;
        if (static_cast<u128>(n) * n >= p) break;  // n < sqrt(p)
        if (!cmp_radical(RadicalExpr::constant(p, static_cast<i64>(n)), lower).is_true()) continue;
        if (table.character(n) == -1) return a;
    }
    return std::nullopt;
}

CharacterRunStat char_run_stats(const ResidueTable& table) {
    const u64 nonResidue = longest_clear_run(table.words(), table.p(), false).first;
    const u64 residue = longest_clear_run(table.words(), table.p(), true).first;
    return {table.p(), std::max(nonResidue, residue)};
}

}  // namespace qnr::residue
