#include <doctest.h>

#include <random>

#include <gmpxx.h>

#include "qnr/errors.hpp"
#include "qnr/proofkit.hpp"

using namespace qnr;
using namespace qnr::proofkit;

namespace {

std::vector<u64> first_primes_above_bound(std::size_t n) {
    auto v = arith::primes_in_class(kProofBound + 1, kProofBound + 10'000, 13, 24);
    v.resize(n);
    return v;
}

mpz_class big(i64 v) { return mpz_class(std::to_string(v)); }

// Witness soundness with GMP products, independent of mulmod.
void check_witness(const Witness& w) {
    const u64 s = arith::isqrt(w.p);
    const mpz_class P = big(static_cast<i64>(w.p));
    const mpz_class winLo = big(static_cast<i64>((w.p + 1) / 2 + w.k));
    const mpz_class winHi = winLo + static_cast<unsigned long>(s);
    REQUIRE(w.m == w.x - w.y);
    REQUIRE(w.n == w.x + w.y);
    REQUIRE(0 <= w.m);
    REQUIRE(w.m <= w.n);
    REQUIRE(w.n <= static_cast<i64>(s));
    mpz_class prod = (winLo + big(w.m)) * (winLo + big(w.n));
    mpz_class r;
    mpz_mod(r.get_mpz_t(), prod.get_mpz_t(), P.get_mpz_t());
    REQUIRE(r == big(static_cast<i64>(w.residue)));
    REQUIRE(r >= winLo);
    REQUIRE(r <= winHi);

    const auto crit = product_criterion(w.p, w.k, w.a);
    const i64 xTop = w.direct ? w.x + 1 : w.x;
    REQUIRE(xTop > crit.xLow);
    REQUIRE(xTop <= crit.xHigh);

    // Straddle: diag(x) overshoots copy c of the window, diag(x-1) falls
    // short of it (direct witnesses land inside it instead).
    const mpz_class cp = big(w.c) * P;
    const mpz_class here = mpz_class(std::to_string(static_cast<long long>(diagonal_value(w.p, w.k, xTop))));
    const mpz_class prev = mpz_class(std::to_string(static_cast<long long>(diagonal_value(w.p, w.k, xTop - 1))));
    REQUIRE(here > cp + winHi);
    if (w.direct) {
        REQUIRE(prev >= cp + winLo);
        REQUIRE(prev <= cp + winHi);
    } else {
        REQUIRE(prev < cp + winLo);
    }

    // Walking y down from x the products fall by n - m + 1 = 2y + 1 each step.
    for (i64 y = 0; y < w.y; ++y) {
        const mpz_class a = (winLo + big(w.x - y)) * (winLo + big(w.x + y));
        const mpz_class b = (winLo + big(w.x - y - 1)) * (winLo + big(w.x + y + 1));
        const i64 step = (w.x + y + 1) - (w.x - y - 1) - 1;
        REQUIRE(a - b == big(step));
        REQUIRE(step > 0);
        REQUIRE(step <= static_cast<i64>(s));
    }
}

}  // namespace

TEST_CASE("diagonal values") {
    // diag(x) = (h + k + x)^2 - p (k + x): congruent to the square, exact.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<u64> pv(5, 4'000'000'000ull);
    for (int i = 0; i < 10'000; ++i) {
        const u64 p = pv(rng) | 1;
        const u64 k = pv(rng) % p + 1;
        const i64 x = static_cast<i64>(pv(rng) % 70'000);
        const i128 h = static_cast<i128>((p + 1) / 2);
        const i128 sq = (h + k + x) * (h + k + x) - static_cast<i128>(p) * (k + x);
        REQUIRE(diagonal_value(p, k, x) == sq);
        // consecutive differences 2k + 2x + 2
        REQUIRE(diagonal_value(p, k, x + 1) - diagonal_value(p, k, x) == static_cast<i128>(2 * k + 2 * x + 2));
    }
}

TEST_CASE("span identity") {
    std::mt19937_64 rng(11);
    for (u64 p : {38677ull, 1'000'081ull, 4'294'967'029ull}) {
        for (const Rational a : {Rational(1, 4), Rational(3, 8), Rational(15, 32)}) {
            const i128 L = static_cast<i128>(arith::floor_scaled_sqrt(a.num(), a.den(), p)) - 2;
            std::uniform_int_distribution<i64> xv(-100'000, 100'000);
            for (int i = 0; i < 100; ++i) {
                const i128 x = xv(rng);
                REQUIRE(x * x - (x - L) * (x + L) == L * L);
            }
        }
    }
}

TEST_CASE("case selection") {
    const u64 p = 38677, s = arith::isqrt(p);
    CHECK(case_select(p, s) == Rational(1, 4));
    CHECK(case_select(p, 5 * s) == Rational(3, 8));
    CHECK(case_select(p, 9 * s) == Rational(15, 32));
    CHECK_THROWS_AS(case_select(p, s / 2), PreconditionError);
    // Ties only happen at square p: k^2 = 4p and k^2 = 64p take the smaller a.
    CHECK(case_select(10'000, 200) == Rational(1, 4));
    CHECK(case_select(10'000, 201) == Rational(3, 8));
    CHECK(case_select(10'000, 800) == Rational(3, 8));
    CHECK(case_select(10'000, 801) == Rational(15, 32));
}

TEST_CASE("product criterion") {
    const auto small = product_criterion(13, 1, Rational(1, 4));
    CHECK_FALSE(small.holds());

    const u64 p = first_primes_above_bound(1)[0];
    CHECK(p == 38677);
    const u64 s = arith::isqrt(p);
    const auto c1 = product_criterion(p, s / 2 + 2, Rational(1, 4));
    CHECK(c1.spanHolds.is_true());
    CHECK(c1.diffExceedsP);
    CHECK(c1.xLow == static_cast<i64>(arith::floor_scaled_sqrt(1, 4, p)) - 2);
    CHECK(c1.xHigh == static_cast<i64>(arith::floor_scaled_sqrt(3, 4, p)));
    CHECK(c1.diffValue == static_cast<i64>(diagonal_value(p, s / 2 + 2, c1.xHigh) - diagonal_value(p, s / 2 + 2, c1.xLow)));
    CHECK(product_criterion(p, 3 * s, Rational(3, 8)).holds());

    CHECK_THROWS_AS(product_criterion(p, 10, Rational(1, 8)), PreconditionError);
    CHECK_THROWS_AS(product_criterion(p, 10, Rational(1, 2)), PreconditionError);
    CHECK_THROWS_AS(product_criterion(p, 0, Rational(1, 4)), PreconditionError);
    CHECK_THROWS_AS(product_criterion(38669, 10, Rational(1, 4)), PreconditionError);
}

TEST_CASE("product witness") {
    const u64 p = 38677, s = arith::isqrt(p);
    check_witness(product_witness(p, s / 2 + 2, Rational(1, 4)));
    check_witness(product_witness(p, 10 * s, Rational(15, 32)));
    CHECK_THROWS_AS(product_witness(13, 1, Rational(1, 4)), PreconditionError);
}

TEST_CASE("sweep over the first two primes above the proof bound") {
    for (u64 p : first_primes_above_bound(2)) {
        REQUIRE(arith::is_prime(p));
        SweepOptions opts;
        opts.keepWitnesses = true;
        const auto s = sweep_k(p, opts);
        CHECK(s.failures.empty());
        CHECK(s.checked == s.kLast - s.kFirst + 1);
        CHECK(s.refuted == s.checked);
        REQUIRE(s.witnesses.size() == s.checked);
        for (const Witness& w : s.witnesses) check_witness(w);
        CHECK(s.boundary.size() == 2);
    }
    CHECK_THROWS_AS(sweep_k(13), PreconditionError);
}

TEST_CASE("sweep is independent of the worker count") {
    const u64 p = first_primes_above_bound(3)[2];
    const auto a = sweep_k(p, {1, false});
    const auto b = sweep_k(p, {3, false});
    CHECK(a.checked == b.checked);
    CHECK(a.refuted == b.refuted);
    CHECK(a.failures.size() == b.failures.size());
}

TEST_CASE("localization report examples") {
    const auto r13 = localization_report(13, 4);
    REQUIRE(r13.runsAtThreshold.size() == 1);
    CHECK(r13.runsAtThreshold[0].run == residue::Run{5, 4});
    CHECK(r13.runsAtThreshold[0].placement == Placement::Central);
    CHECK(r13.gapWitnessN == std::optional<u64>{2});
    CHECK(r13.leastOddQnrU == 5);
    // No residue in (13/2, (13 + sqrt 13)/2): 7 and 8 are both non-residues.
    CHECK_FALSE(r13.upperHalfResidue.has_value());
    CHECK_FALSE(r13.factsHold);
    CHECK_FALSE(r13.longRunsLocalized);

    const auto r61 = localization_report(61, 3);
    CHECK(r61.gapWitnessN == std::optional<u64>{2});
    CHECK(r61.leastOddQnrU == 7);
    CHECK(r61.upperHalfResidue == std::optional<u64>{34});
    CHECK(r61.factsHold);
    REQUIRE(r61.runsAtThreshold.size() == 3);
    CHECK(r61.runsAtThreshold[0].placement == Placement::Central);
    CHECK(r61.runsAtThreshold[1].placement == Placement::Central);
    CHECK(r61.runsAtThreshold[2].placement == Placement::Localized);

    const auto r37 = localization_report(37, 100);
    CHECK(r37.runsAtThreshold.empty());
    CHECK(r37.factsHold);
    CHECK(r37.upperHalfResidue == std::optional<u64>{21});

    CHECK_THROWS_AS(localization_report(17, 3), PreconditionError);
    CHECK_THROWS_AS(localization_report(85, 3), PreconditionError);
}

TEST_CASE("localization facts for every prime 13 (mod 24) in [38661, 10^5]") {
    for (u64 p : arith::primes_in_class(38'661, 100'000, 13, 24)) {
        const auto r = localization_report(p, arith::isqrt(p) + 1);
        REQUIRE(r.factsHold);
        const auto t = residue::ResidueTable::build(p);
        CHECK(t.character(*r.gapWitnessN) == -1);
        CHECK(t.character(r.leastOddQnrU) == -1);
        CHECK(r.leastOddQnrU * r.leastOddQnrU < p);
        const u64 v = *r.upperHalfResidue;
        CHECK(t.character(v) == 1);
        CHECK(2 * v > p);
        CHECK((2 * v - p) * (2 * v - p) < p);
        CHECK(r.runsAtThreshold.empty());
    }
}

TEST_CASE("threshold inequalities") {
    ThresholdOptions opts;
    opts.upTo = 60'000;
    const auto reports = threshold_report(opts);
    REQUIRE(reports.size() == 4);
    const u64 expected[] = {7711, 15917, 27250, 38659};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& r = reports[i];
        CHECK(r.paperThreshold == expected[i]);
        CHECK(r.ok());
        CHECK_FALSE(r.holdsAtThreshold);
        CHECK(r.holdsJustAbove);
        CHECK(r.verifiedFrom == expected[i] + 1);
        CHECK(r.checkedUpTo == 60'000);
    }
    const auto [lhs, rhs] = threshold_inequality(ThresholdCase::SmallK, 7712);
    CHECK(radical::cmp_radical(lhs, rhs).is_true());
}

TEST_CASE("cited bounds") {
    CHECK(bound_check(Bound::Brauer4n1, 3, 100'000).violations.empty());
    CHECK(bound_check(Bound::BrauerOdd5mod8, 5, 100'000).violations.empty());
    const auto n = bound_check(Bound::Norton, 3, 100'000);
    CHECK_FALSE(n.probative);
    CHECK(n.violations.empty());
    CHECK(n.indeterminate == 0);

    CHECK(brauer_odd_bound_holds(13, 5).is_true());
    CHECK(brauer_odd_bound_holds(13, 1000).is_false());
    CHECK(norton_bound_holds(13, 4).is_true());
    CHECK(norton_bound_holds(13, 50).is_false());
}
