#include <doctest.h>

#include "qnr/errors.hpp"
#include "qnr/output.hpp"
#include "qnr/schur.hpp"

using namespace qnr;
using namespace qnr::schur;

TEST_CASE("verify_prime examples") {
    const auto r13 = verify_prime(13);
    CHECK(r13.maxRunLength == 4);
    CHECK(r13.floorSqrtP == 3);
    CHECK(r13.exceeds);

    const auto r = verify_prime(38653);
    CHECK(r.maxRunLength == 15);
    CHECK(r.floorSqrtP == 196);
    CHECK_FALSE(r.exceeds);

    const auto r3 = verify_prime(3);
    CHECK(r3.maxRunLength == 1);
    CHECK(r3.runStart == 2);
    CHECK(r3.floorSqrtP == 1);
    CHECK_FALSE(r3.exceeds);

    CHECK_THROWS_AS(verify_prime(15), PreconditionError);
    CHECK_THROWS_AS(verify_prime(2), PreconditionError);
}

TEST_CASE("verify_range examples") {
    const auto s = verify_range(2, 100, {13, 24});
    REQUIRE(s.records.size() == 3);
    CHECK(s.records[0].p == 13);
    CHECK(s.records[1].p == 37);
    CHECK(s.records[2].p == 61);
    REQUIRE(s.exceedances.size() == 1);
    CHECK(s.exceedances[0].p == 13);
    CHECK(s.maxRatioSqNumerator == 16);
    CHECK(s.maxRatioSqDenominator == 13);
    CHECK(s.maxRatioPrime == 13);

    CHECK(verify_range(14, 20, {13, 24}).primesChecked == 0);
    CHECK_THROWS_AS(verify_range(20, 14, {}), PreconditionError);
    CHECK_THROWS_AS(verify_range(2, 14, {24, 24}), PreconditionError);
}

TEST_CASE("the full range below the proof bound has a single exceedance") {
    const auto s = verify_range(2, 38659, {}, RangeOptions{4, {}, {}});
    CHECK(s.primesChecked == arith::primes_in_class(3, 38659, 0, 1).size());
    REQUIRE(s.exceedances.size() == 1);
    CHECK(s.exceedances[0].p == 13);
    CHECK(s.exceedances[0].maxRunLength == 4);
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        const auto& r = s.records[i];
        REQUIRE(r.maxRunLength >= 1);
        REQUIRE(r.exceeds == (r.maxRunLength * r.maxRunLength > r.p));
        if (i) REQUIRE(s.records[i - 1].p < r.p);
        if (r.exceeds) CHECK(r.p % 24 == 13);
    }
}

TEST_CASE("output is identical across worker counts") {
    const output::Json args{{"from", 2}, {"to", 60000}};
    const auto one = verify_range(2, 60'000, {}, RangeOptions{1, {}, {}});
    const auto many = verify_range(2, 60'000, {}, RangeOptions{7, {}, {}});
    CHECK(output::batch_csv(one) == output::batch_csv(many));
    CHECK(output::render(output::batch_document(one, args)) == output::render(output::batch_document(many, args)));
}

TEST_CASE("progress callback sees every prime") {
    u64 lastDone = 0, lastTotal = 0;
    RangeOptions opts;
    opts.jobs = 2;
    opts.progress = [&](u64 done, u64 total) {
        lastDone = done;
        lastTotal = total;
    };
    const auto s = verify_range(2, 20'000, {}, opts);
    CHECK(lastTotal == s.primesChecked);
    CHECK(lastDone == s.primesChecked);
}

TEST_CASE("published tuples") {
    const auto& t = paper_tuples();
    CHECK(t[0].p == 13);
    CHECK(t[0].maxRunLength == 4);
    CHECK(t[0].floorSqrtP == 3);
    CHECK(t[4].p == 7237);
    CHECK(t[4].maxRunLength == 10);
    CHECK(t[4].floorSqrtP == 85);
    CHECK(t[19].p == 38653);
    CHECK(t[19].maxRunLength == 15);
    CHECK(t[19].floorSqrtP == 196);
    for (const auto& row : t) CHECK(row.p % 24 == 13);
}

TEST_CASE("paper_table reports per-field diffs") {
    const auto result = paper_table();
    REQUIRE(result.rows.size() == 20);
    for (const auto& row : result.rows) {
        CHECK(row.computed.p == row.expected.p);
        CHECK(row.computed.floorSqrtP == row.expected.floorSqrtP);
        const bool same = row.computed.maxRunLength == row.expected.maxRunLength;
        CHECK(row.diffs.empty() == same);
        if (!same) {
            // The one printed tuple that disagrees with the computation:
            // mod 28429 the non-residues 13323..13336 form a run of 14.
            CHECK(row.expected.p == 28429);
            CHECK(row.computed.maxRunLength == 14);
            CHECK(row.computed.runStart == 13323);
            CHECK(row.diffs == std::vector<std::string>{"max_run"});
        }
    }
}
