#include "qnr/proofkit.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>

#include <mpfr.h>

#include "qnr/errors.hpp"
#include "parallel.hpp"

namespace qnr::proofkit {

using namespace radical;

namespace {

RadicalExpr konst(u64 p, Rational c) { return RadicalExpr::constant(p, c); }
RadicalExpr sqrt_p(u64 p) { return RadicalExpr::term(p, 1, kP1_2); }

/// 2^(1/2) p^(3/4) - sqrt(p)/2
RadicalExpr central_halfwidth(u64 p) {
    return RadicalExpr(p, {Term{1, kP3_4, kSqrt2}, Term{Rational(-1, 2), kP1_2}});
}

bool greater(const RadicalExpr& a, const RadicalExpr& b) {
    const TriBool t = cmp_radical(a, b);
    if (!t.decided()) throw VerificationFailure("radical comparison undecided: " + a.str() + " vs " + b.str());
    return t.is_true();
}

/// Open-interval containment of [run.start, run.end()] in (lo, hi).
bool inside(const residue::Run& run, const RadicalExpr& lo, const RadicalExpr& hi) {
    const u64 p = lo.p();
    return greater(konst(p, static_cast<i64>(run.start)), lo) && greater(hi, konst(p, static_cast<i64>(run.end())));
}

void require_13_mod_24(u64 p, const char* what) {
    if (p % 24 != 13) throw PreconditionError(std::string(what) + ": p must be 13 (mod 24), got " + std::to_string(p));
}

}  // namespace

// ---------------------------------------------------------------------------
// Localization

std::string to_string(Placement t) {
    switch (t) {
        case Placement::Localized: return "localized";
        case Placement::UpperHalf: return "upper_half";
        case Placement::Central: return "central";
        case Placement::Low: return "low";
        case Placement::High: return "high";
        case Placement::Outside: return "outside";
    }
    return "?";
}

Placement place_run(u64 p, const residue::Run& run) {
    const RadicalExpr half = konst(p, Rational(static_cast<i64>(p), 2));
    const RadicalExpr width = central_halfwidth(p);
    const RadicalExpr top = half + width;
    const RadicalExpr localizedLo = konst(p, Rational(static_cast<i64>(p) + 3, 2)) + Rational(1, 2) * sqrt_p(p);

    if (inside(run, localizedLo, top)) return Placement::Localized;
    if (inside(run, half, top)) return Placement::UpperHalf;
    if (inside(run, half - width, top)) return Placement::Central;
    if (inside(run, konst(p, 1), width)) return Placement::Low;
    if (inside(run, konst(p, static_cast<i64>(p)) - width, konst(p, static_cast<i64>(p) - 1))) return Placement::High;
    return Placement::Outside;
}

LocalizationReport localization_report(u64 p, u64 threshold) {
    require_13_mod_24(p, "localization_report");
    if (!arith::is_prime(p)) throw PreconditionError("localization_report: p must be prime");
    const auto table = residue::ResidueTable::build(p);

    LocalizationReport r;
    r.p = p;
    r.threshold = threshold;
    if (auto a = residue::find_qnr_2a2_gap(table)) {
        r.gapA = *a;
        r.gapWitnessN = 2 * *a * *a;
    }
    r.leastOddQnrU = residue::least_odd_qnr(table);

    // (p+u)/2 = u * h is a residue; it lies in (p/2, (p + sqrt p)/2) once u^2 < p.
    auto in_upper_band = [p](u64 v) {
        const u64 d = 2 * v - p;
        return static_cast<u128>(d) * d < p;
    };
    const u64 viaU = (p + r.leastOddQnrU) / 2;
    if (r.leastOddQnrU < p && table.character(viaU) == 1 && in_upper_band(viaU)) {
        r.upperHalfResidue = viaU;
    } else {
        for (u64 v = (p + 1) / 2; in_upper_band(v); ++v) {
            if (table.character(v) == 1) {
                r.upperHalfResidue = v;
                break;
            }
        }
    }
    r.factsHold = r.gapWitnessN.has_value() && r.upperHalfResidue.has_value();

    for (const residue::Run& run : residue::scan_runs(table, threshold).runs) {
        const Placement where = place_run(p, run);
        r.runsAtThreshold.push_back({run, where});
        if (static_cast<u128>(run.length) * run.length > p && where != Placement::Localized) {
            r.longRunsLocalized = false;
        }
    }

    if (p > kProofBound && !r.factsHold) {
        throw VerificationFailure("localization facts missing for p=" + std::to_string(p) +
                                  (r.gapWitnessN ? "" : " (no 2a^2 non-residue below sqrt p)") +
                                  (r.upperHalfResidue ? "" : " (no residue in (p/2, (p+sqrt p)/2))"));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Product criterion and witness

i128 diagonal_value(u64 p, u64 k, i64 x) {
    const i128 h = static_cast<i128>((p + 1) / 2);
    const i128 kk = static_cast<i128>(k);
    const i128 xx = x;
    return h * h + kk + kk * kk + 2 * kk * xx + xx + xx * xx;
}

namespace {

void check_criterion_args(u64 p, u64 k, const Rational& a) {
    require_13_mod_24(p, "product_criterion");
    if (p >= (u64{1} << 32)) throw PreconditionError("product_criterion: p must be below 2^32");
    if (k < 1 || k > p) throw PreconditionError("product_criterion: k must lie in [1, p]");
    if (a < Rational(1, 4) || a > Rational(15, 32)) {
        throw PreconditionError("product_criterion: a=" + a.str() + " outside [1/4, 15/32]");
    }
}

}  // namespace

CriterionReport product_criterion(u64 p, u64 k, Rational a) {
    check_criterion_args(p, k, a);
    const u64 s = arith::isqrt(p);
    const u64 an = static_cast<u64>(a.num()), ad = static_cast<u64>(a.den());

    CriterionReport r;
    r.p = p;
    r.k = k;
    r.a = a;
    r.xLow = static_cast<i64>(arith::floor_scaled_sqrt(an, ad, p)) - 2;
    r.xHigh = static_cast<i64>(arith::floor_scaled_sqrt(ad - an, ad, p));

    const RadicalExpr shifted = a * sqrt_p(p) - konst(p, 2);
    const RadicalExpr lhs = shifted * shifted;
    const RadicalExpr rhs = konst(p, static_cast<i64>(2 * k + 2) - static_cast<i64>(s)) +
                            (Rational(2) * (Rational(1) - a)) * sqrt_p(p);
    r.spanHolds = cmp_radical(lhs, rhs);

    const i128 diff = diagonal_value(p, k, r.xHigh) - diagonal_value(p, k, r.xLow);
    r.diffValue = static_cast<i64>(diff);
    r.diffExceedsP = diff > static_cast<i128>(p);
    return r;
}

Witness product_witness(u64 p, u64 k, Rational a) {
    const CriterionReport crit = product_criterion(p, k, a);
    if (!crit.holds()) {
        throw PreconditionError("product_witness: criterion not satisfied for p=" + std::to_string(p) +
                                " k=" + std::to_string(k) + " a=" + a.str());
    }
    const i128 P = static_cast<i128>(p);
    const i128 s = static_cast<i128>(arith::isqrt(p));
    const i128 winLo = static_cast<i128>((p + 1) / 2 + k);
    const i128 winHi = winLo + s;

    auto product_mod = [&](i64 m, i64 n) {
        const u64 f1 = static_cast<u64>((winLo + m) % P);
        const u64 f2 = static_cast<u64>((winLo + n) % P);
        return arith::mulmod(f1, f2, p);
    };
    auto in_window = [&](u64 v) { return static_cast<i128>(v) >= winLo && static_cast<i128>(v) <= winHi; };

    for (i64 x = crit.xHigh; x > crit.xLow; --x) {
        const i128 cur = diagonal_value(p, k, x);
        const i128 prev = diagonal_value(p, k, x - 1);
        // Largest c with c*p + winHi < diag(x).
        const i128 excess = cur - winHi - 1;
        const i128 c = excess >= 0 ? excess / P : -((-excess + P - 1) / P);
        if (prev > c * P + winHi) continue;

        Witness w;
        w.p = p;
        w.k = k;
        w.a = a;
        w.c = static_cast<i64>(c);
        if (prev >= c * P + winLo) {
            // diag(x-1) itself sits in the shifted window.
            w.x = x - 1;
            w.m = w.n = x - 1;
            w.residue = product_mod(w.m, w.n);
            w.direct = true;
            if (in_window(w.residue)) return w;
        } else {
            const i64 ySteps = crit.xLow + 1;
            for (i64 y = 0; y <= ySteps; ++y) {
                const i64 m = x - y, n = x + y;
                if (m < 0 || n > static_cast<i64>(s)) break;
                const u64 res = product_mod(m, n);
                if (in_window(res)) {
                    w.x = x;
                    w.y = y;
                    w.m = m;
                    w.n = n;
                    w.residue = res;
                    return w;
                }
            }
        }
        throw VerificationFailure("product_witness: sweep at x=" + std::to_string(x) + " missed the window for p=" +
                                  std::to_string(p) + " k=" + std::to_string(k) + " a=" + a.str());
    }
    throw VerificationFailure("product_witness: no straddling x for p=" + std::to_string(p) + " k=" + std::to_string(k) +
                              " a=" + a.str());
}

Rational case_select(u64 p, u64 k) {
    if (k <= arith::floor_scaled_sqrt(1, 2, p) + 1) {
        throw PreconditionError("case_select: k=" + std::to_string(k) + " is below the localization window");
    }
    const u128 k2 = static_cast<u128>(k) * k;
    if (k2 <= 4 * static_cast<u128>(p)) return {1, 4};
    if (k2 <= 64 * static_cast<u128>(p)) return {3, 8};
    return {15, 32};
}

SweepSummary sweep_k(u64 p, const SweepOptions& opts) {
    require_13_mod_24(p, "sweep_k");
    if (p <= kProofBound) throw PreconditionError("sweep_k: p must exceed " + std::to_string(kProofBound));
    if (p >= (u64{1} << 32)) throw PreconditionError("sweep_k: p must be below 2^32");
    if (!arith::is_prime(p)) throw PreconditionError("sweep_k: p must be prime");

    const RadicalExpr lower = Rational(1, 2) * sqrt_p(p) + konst(p, 1);
    const RadicalExpr upper = RadicalExpr(p, {Term{1, kP3_4, kSqrt2}, Term{-1, kP1_2}});
    auto K = [p](u64 k) { return konst(p, static_cast<i64>(k)); };

    u64 first = arith::floor_scaled_sqrt(1, 2, p);
    while (!greater(K(first), lower)) ++first;
    while (first > 0 && greater(K(first - 1), lower)) --first;
    const u128 p3 = static_cast<u128>(p) * p * p;
    u64 last = arith::iroot(4 * p3, 4) - arith::isqrt(p);
    while (!greater(upper, K(last))) --last;
    while (greater(upper, K(last + 1))) ++last;

    SweepSummary out;
    out.p = p;
    out.kFirst = first;
    out.kLast = last;
    const u64 count = last >= first ? last - first + 1 : 0;

    std::vector<std::optional<Witness>> found(count);
    std::vector<std::optional<SweepFailure>> failed(count);
    detail::parallel_for(count, opts.jobs, {}, [&](u64 i) {
        const u64 k = first + i;
        const Rational a = case_select(p, k);
        const CriterionReport crit = product_criterion(p, k, a);
        if (!crit.holds()) {
            failed[i] = SweepFailure{k, a,
                                     "criterion not satisfied (span " + crit.spanHolds.str() + ", difference " +
                                         (crit.diffExceedsP ? "exceeds p" : "does not exceed p") + ")"};
            return;
        }
        try {
            found[i] = product_witness(p, k, a);
        } catch (const VerificationFailure& e) {
            failed[i] = SweepFailure{k, a, e.what()};
        }
    });

    out.checked = count;
    for (u64 i = 0; i < count; ++i) {
        if (failed[i]) out.failures.push_back(*failed[i]);
        if (found[i]) {
            ++out.refuted;
            if (opts.keepWitnesses) out.witnesses.push_back(*found[i]);
        }
    }

    // The two integers just outside the window; outcomes are informational.
    for (u64 k : {first - 1, last + 1}) {
        BoundaryProbe probe;
        probe.k = k;
        probe.a = k <= arith::floor_scaled_sqrt(1, 2, p) + 1 ? Rational(1, 4) : case_select(p, k);
        const CriterionReport crit = product_criterion(p, k, probe.a);
        probe.criterionHolds = crit.holds();
        if (probe.criterionHolds) {
            try {
                product_witness(p, k, probe.a);
                probe.witnessFound = true;
            } catch (const VerificationFailure&) {
            }
        }
        out.boundary.push_back(probe);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Thresholds

std::string to_string(ThresholdCase c) {
    switch (c) {
        case ThresholdCase::SmallK: return "1";
        case ThresholdCase::MiddleK: return "2";
        case ThresholdCase::LargeK: return "3";
        case ThresholdCase::OddNonResidueBound: return "brauer_sqrt";
    }
    return "?";
}

namespace {

u64 paper_threshold(ThresholdCase c) {
    switch (c) {
        case ThresholdCase::SmallK: return 7711;
        case ThresholdCase::MiddleK: return 15917;
        case ThresholdCase::LargeK: return 27250;
        case ThresholdCase::OddNonResidueBound: return kProofBound;
    }
    return 0;
}

/// (a sqrt p - 2)^2
RadicalExpr shifted_square(u64 p, Rational a) {
    const RadicalExpr e = a * sqrt_p(p) - konst(p, 2);
    return e * e;
}

/// 2^(3/5) p^(2/5) + 25 * 2^(-6/5) p^(1/5) + 3
RadicalExpr brauer_bound(u64 p) {
    return RadicalExpr(p, {Term{1, Exponent::of(2, 5), Exponent::of(3, 5)},
                           Term{25, Exponent::of(1, 5), Exponent{-24}}, Term{3}});
}

}  // namespace

std::pair<RadicalExpr, RadicalExpr> threshold_inequality(ThresholdCase c, u64 p) {
    switch (c) {
        case ThresholdCase::SmallK:
            return {shifted_square(p, {1, 4}), RadicalExpr(p, {Term{Rational(9, 2), kP1_2}, Term{3}})};
        case ThresholdCase::MiddleK:
            return {shifted_square(p, {3, 8}), RadicalExpr(p, {Term{Rational(65, 4), kP1_2}, Term{3}})};
        case ThresholdCase::LargeK:
            return {shifted_square(p, {15, 32}),
                    RadicalExpr(p, {Term{2, kP3_4, kSqrt2}, Term{Rational(-31, 16), kP1_2}, Term{3}})};
        case ThresholdCase::OddNonResidueBound:
            return {sqrt_p(p), brauer_bound(p)};
    }
    throw PreconditionError("unknown threshold case");
}

ThresholdReport threshold_report(ThresholdCase c, const ThresholdOptions& opts) {
    const u64 T = paper_threshold(c);
    if (opts.upTo <= T) throw PreconditionError("threshold_report: upper bound must exceed " + std::to_string(T));

    // 0 false, 1 true, 2 undecided; index p - 1.
    std::vector<unsigned char> verdict(opts.upTo);
    constexpr u64 kChunk = 4096;
    const u64 chunks = (opts.upTo + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, opts.jobs, {}, [&](u64 ci) {
        const u64 from = ci * kChunk + 1, to = std::min(opts.upTo, (ci + 1) * kChunk);
        for (u64 p = from; p <= to; ++p) {
            const auto [lhs, rhs] = threshold_inequality(c, p);
            const TriBool t = cmp_radical(lhs, rhs);
            verdict[p - 1] = t.is_true() ? 1 : (t.is_false() ? 0 : 2);
        }
    });

    ThresholdReport r;
    r.caseId = c;
    r.paperThreshold = T;
    r.checkedUpTo = opts.upTo;
    u64 lastNotTrue = 0;
    for (u64 p = 1; p <= opts.upTo; ++p) {
        const unsigned char v = verdict[p - 1];
        if (v != 1) lastNotTrue = p;
        if (v == 2) ++r.indeterminate;
        if (p > T && v == 0) ++r.violationsAbove;
    }
    r.verifiedFrom = lastNotTrue + 1;
    r.holdsAtThreshold = verdict[T - 1] == 1;
    r.holdsJustAbove = verdict[T] == 1;

    const std::string range = "[" + std::to_string(r.verifiedFrom) + ", " + std::to_string(opts.upTo) + "]";
    if (r.verifiedFrom == T + 1) {
        r.boundaryBehavior = "fails at " + std::to_string(T) + ", holds for every integer in " + range;
    } else if (r.verifiedFrom <= T) {
        r.boundaryBehavior = "holds already from " + std::to_string(r.verifiedFrom) + " (every integer in " + range +
                             "); last failure " + (lastNotTrue ? std::to_string(lastNotTrue) : std::string("none"));
    } else {
        r.boundaryBehavior = "fails above the stated bound; last failure at " + std::to_string(lastNotTrue);
    }
    return r;
}

std::vector<ThresholdReport> threshold_report(const ThresholdOptions& opts) {
    std::vector<ThresholdReport> out;
    for (ThresholdCase c : {ThresholdCase::SmallK, ThresholdCase::MiddleK, ThresholdCase::LargeK,
                            ThresholdCase::OddNonResidueBound}) {
        out.push_back(threshold_report(c, opts));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cited bounds

std::string to_string(Bound b) {
    switch (b) {
        case Bound::BrauerOdd5mod8: return "brauer5mod8";
        case Bound::Brauer4n1: return "brauer4n1";
        case Bound::Norton: return "norton";
    }
    return "?";
}

TriBool brauer_odd_bound_holds(u64 p, u64 u) {
    return cmp_radical(brauer_bound(p), konst(p, static_cast<i64>(u)));
}

namespace {

/// 4.1 * p^(1/4) * ln(p), rounded toward `rnd` at every step. Every factor
/// is positive, so one rounding direction bounds the product.
void norton_rhs(mpfr_t out, u64 p, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    mpfr_t t, q;
    mpfr_inits2(prec, t, q, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(t, 41, rnd);
    mpfr_div_ui(t, t, 10, rnd);
    mpfr_set_ui(q, static_cast<unsigned long>(p), rnd);
    mpfr_sqrt(q, q, rnd);
    mpfr_sqrt(q, q, rnd);
    mpfr_mul(t, t, q, rnd);
    mpfr_set_ui(q, static_cast<unsigned long>(p), rnd);
    mpfr_log(q, q, rnd);
    mpfr_mul(out, t, q, rnd);
    mpfr_clears(t, q, static_cast<mpfr_ptr>(nullptr));
}

}  // namespace

TriBool norton_bound_holds(u64 p, u64 h) {
    if (p < 2) throw PreconditionError("norton_bound_holds: p must be at least 2");
    for (mpfr_prec_t prec = 64; prec <= 4096; prec *= 2) {
        mpfr_t lo, hi;
        mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
        norton_rhs(lo, p, prec, MPFR_RNDD);
        norton_rhs(hi, p, prec, MPFR_RNDU);
        const bool below = mpfr_cmp_ui(lo, static_cast<unsigned long>(h)) > 0;   // h < lo <= rhs
        const bool atOrAbove = mpfr_cmp_ui(hi, static_cast<unsigned long>(h)) <= 0;  // rhs <= hi <= h
        mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
        if (below) return {radical::Truth::True, static_cast<unsigned>(prec)};
        if (atOrAbove) return {radical::Truth::False, static_cast<unsigned>(prec)};
    }
    return {radical::Truth::Indeterminate, 4096};
}

BoundSummary bound_check(Bound which, u64 lo, u64 hi, unsigned jobs) {
    if (lo > hi) throw PreconditionError("bound_check: lo must not exceed hi");
    BoundSummary out;
    out.which = which;
    out.lo = lo;
    out.hi = hi;
    out.probative = which != Bound::Norton;

    std::vector<u64> primes;
    switch (which) {
        case Bound::BrauerOdd5mod8: primes = arith::primes_in_class(lo, hi, 5, 8); break;
        case Bound::Brauer4n1: primes = arith::primes_in_class(lo, hi, 3, 4); break;
        case Bound::Norton: primes = arith::primes_in_class(std::max<u64>(lo, 3), hi, 0, 1); break;
    }

    // 0 holds, 1 violated, 2 undecided
    std::vector<unsigned char> verdict(primes.size());
    std::vector<u64> value(primes.size());
    detail::parallel_for(primes.size(), jobs, {}, [&](u64 i) {
        const u64 p = primes[i];
        TriBool t;
        if (which == Bound::BrauerOdd5mod8) {
            value[i] = residue::least_odd_qnr(p);
            t = brauer_odd_bound_holds(p, value[i]);
        } else {
            value[i] = residue::char_run_stats(residue::ResidueTable::build(p)).longestConstantRun;
            if (which == Bound::Brauer4n1) {
                t = {static_cast<u128>(value[i]) * value[i] < p ? radical::Truth::True : radical::Truth::False, 0};
            } else {
                t = norton_bound_holds(p, value[i]);
            }
        }
        verdict[i] = t.is_true() ? 0 : (t.is_false() ? 1 : 2);
    });

    out.primesChecked = primes.size();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (verdict[i] == 1) out.violations.push_back({primes[i], value[i]});
        if (verdict[i] == 2) ++out.indeterminate;
    }
    return out;
}

}  // namespace qnr::proofkit
