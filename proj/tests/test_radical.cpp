#include <doctest.h>

#include <cstdint>
#include <random>

#include <mpfr.h>

#include "qnr/errors.hpp"
#include "qnr/radical.hpp"

using namespace qnr;
using namespace qnr::radical;

namespace {

constexpr mpfr_prec_t kOracleBits = 1000;

// Fixed-precision evaluation through mpfr_pow; ~2^-990 relative error.
struct OracleValue {
    mpfr_t v, scale;  // scale: sum of |term| values, for the decision margin
    OracleValue() {
        mpfr_init2(v, kOracleBits);
        mpfr_init2(scale, kOracleBits);
    }
    ~OracleValue() {
        mpfr_clear(v);
        mpfr_clear(scale);
    }
};

void eval_terms(const RadicalExpr& e, int sign, OracleValue& out) {
    mpfr_t t, base, ex;
    mpfr_inits2(kOracleBits, t, base, ex, static_cast<mpfr_ptr>(nullptr));
    for (const Term& term : e.terms()) {
        mpfr_set_si(t, term.coef.num(), MPFR_RNDN);
        mpfr_div_si(t, t, term.coef.den(), MPFR_RNDN);
        mpfr_set_ui(base, e.p(), MPFR_RNDN);
        mpfr_set_si(ex, term.pPow.twentieths, MPFR_RNDN);
        mpfr_div_ui(ex, ex, 20, MPFR_RNDN);
        mpfr_pow(base, base, ex, MPFR_RNDN);
        mpfr_mul(t, t, base, MPFR_RNDN);
        mpfr_set_ui(base, 2, MPFR_RNDN);
        mpfr_set_si(ex, term.twoPow.twentieths, MPFR_RNDN);
        mpfr_div_ui(ex, ex, 20, MPFR_RNDN);
        mpfr_pow(base, base, ex, MPFR_RNDN);
        mpfr_mul(t, t, base, MPFR_RNDN);
        if (sign < 0) mpfr_neg(t, t, MPFR_RNDN);
        mpfr_add(out.v, out.v, t, MPFR_RNDN);
        mpfr_abs(t, t, MPFR_RNDN);
        mpfr_add(out.scale, out.scale, t, MPFR_RNDN);
    }
    mpfr_clears(t, base, ex, static_cast<mpfr_ptr>(nullptr));
}

/// +1, -1, or 0 when the difference is below the oracle's resolution.
int oracle_sign(const RadicalExpr& lhs, const RadicalExpr& rhs) {
    OracleValue d;
    mpfr_set_ui(d.v, 0, MPFR_RNDN);
    mpfr_set_ui(d.scale, 0, MPFR_RNDN);
    eval_terms(lhs, 1, d);
    eval_terms(rhs, -1, d);
    mpfr_t margin;
    mpfr_init2(margin, kOracleBits);
    mpfr_mul_2si(margin, d.scale, -900, MPFR_RNDN);
    int s = 0;
    if (mpfr_cmpabs(d.v, margin) > 0) s = mpfr_sgn(d.v);
    mpfr_clear(margin);
    return s;
}

const Exponent kPTags[] = {kP0, kP1_4, kP1_2, kP3_4, kP1, Exponent::of(1, 5), Exponent::of(2, 5)};
const Exponent kTwoTags[] = {kOne, kSqrt2, Exponent::of(3, 2), Exponent::of(3, 5), Exponent::of(-6, 5)};

RadicalExpr random_expr(std::mt19937_64& rng, u64 p) {
    std::uniform_int_distribution<int> count(1, 4), num(-50, 50), den(0, 5), ptag(0, 6), ttag(0, 4);
    std::vector<Term> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        terms.push_back(Term{Rational(num(rng), i64{1} << den(rng)), kPTags[ptag(rng)], kTwoTags[ttag(rng)]});
    }
    return {p, terms};
}

}  // namespace

TEST_CASE("examples") {
    CHECK(cmp_radical(RadicalExpr::term(16, 1, kP3_4, kSqrt2), RadicalExpr::term(16, 1, kP1)).is_false());
    const RadicalExpr s = RadicalExpr::term(99, 1, kP1_2);
    CHECK(cmp_radical(s, s).is_false());

    const u64 p = 7712;
    const RadicalExpr base = RadicalExpr::term(p, Rational(1, 4), kP1_2) - RadicalExpr::constant(p, 2);
    const RadicalExpr rhs = RadicalExpr::term(p, Rational(9, 2), kP1_2) + RadicalExpr::constant(p, 3);
    CHECK(cmp_radical(base * base, rhs).is_true());
    CHECK(cmp_radical(rhs, base * base).is_false());
}

TEST_CASE("mismatched evaluation points are rejected") {
    CHECK_THROWS_AS(cmp_radical(RadicalExpr::constant(5, 1), RadicalExpr::constant(7, 1)), PreconditionError);
}

TEST_CASE("expression algebra") {
    const u64 p = 1000;
    // (sqrt2 p^(1/4))^2 = 2 p^(1/2)
    const RadicalExpr r = RadicalExpr::term(p, 1, kP1_4, kSqrt2);
    const RadicalExpr sq = r * r;
    REQUIRE(sq.terms().size() == 1);
    CHECK(sq.terms()[0].coef == Rational(2));
    CHECK(sq.terms()[0].pPow == kP1_2);
    CHECK(sq.terms()[0].twoPow == kOne);
    // like terms merge, cancelling ones disappear
    const RadicalExpr z = RadicalExpr::term(p, 3, kP1_2) - RadicalExpr::term(p, 3, kP1_2);
    CHECK(z.terms().empty());
}

TEST_CASE("single-term comparisons are exact at perfect powers") {
    // p^(1/2) vs 1000 at p = 10^6: equal, not greater.
    CHECK(cmp_radical(RadicalExpr::term(1'000'000, 1, kP1_2), RadicalExpr::constant(1'000'000, 1000)).is_false());
    CHECK(cmp_radical(RadicalExpr::constant(1'000'000, 1000), RadicalExpr::term(1'000'000, 1, kP1_2)).is_false());
    CHECK(cmp_radical(RadicalExpr::constant(1'000'001, 1000), RadicalExpr::term(1'000'001, 1, kP1_2)).is_false());
    CHECK(cmp_radical(RadicalExpr::term(1'000'001, 1, kP1_2), RadicalExpr::constant(1'000'001, 1000)).is_true());
    // 2^(1/2) p^(3/4) vs p: 2^2 p^3 vs p^4, equal at p = 4.
    CHECK(cmp_radical(RadicalExpr::term(4, 1, kP3_4, kSqrt2), RadicalExpr::term(4, 1, kP1)).is_false());
    CHECK(cmp_radical(RadicalExpr::term(5, 1, kP3_4, kSqrt2), RadicalExpr::term(5, 1, kP1)).is_false());
    CHECK(cmp_radical(RadicalExpr::term(3, 1, kP3_4, kSqrt2), RadicalExpr::term(3, 1, kP1)).is_true());
}

TEST_CASE("ties between exact roots are decided") {
    const u64 p = 1'000'000;
    const RadicalExpr lhs = RadicalExpr::term(p, 1, kP1_2) + RadicalExpr::constant(p, 1);
    CHECK(cmp_radical(lhs, RadicalExpr::constant(p, 1001)).is_false());
}

TEST_CASE("an irrational tie reports Indeterminate at the cap") {
    // sqrt(p) + 1 against sqrt(2) + 1 at p = 2: equal, and no bracket excludes 0.
    const u64 p = 2;
    const RadicalExpr lhs = RadicalExpr::term(p, 1, kP1_2) + RadicalExpr::constant(p, 1);
    const RadicalExpr rhs = RadicalExpr::term(p, 1, kP0, kSqrt2) + RadicalExpr::constant(p, 1);
    const TriBool t = cmp_radical(lhs, rhs, {128, 1024});
    CHECK(t.value == Truth::Indeterminate);
    CHECK(t.bitsUsed == 1024);
}

TEST_CASE("scaled bounds bracket the value") {
    // 2^8 * sqrt(2) = 362.03...
    const ScaledBounds b = scaled_bounds(RadicalExpr::term(7, 1, kP0, kSqrt2), 8);
    CHECK(std::stoll(b.lo) <= 362);
    CHECK(std::stoll(b.hi) >= 363);
}

TEST_CASE("cmp_radical agrees with a 1000-bit oracle") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<u64> pv(2, 1'000'000'000);
    std::uniform_int_distribution<int> mode(0, 9);
    int wrong = 0, undecided = 0, decided = 0;
    for (int i = 0; i < 10'000; ++i) {
        const u64 p = mode(rng) == 0 ? (pv(rng) % 30'000 + 2) : pv(rng);
        const RadicalExpr lhs = random_expr(rng, p);
        RadicalExpr rhs = random_expr(rng, p);
        if (mode(rng) == 0) rhs = lhs + RadicalExpr::constant(p, Rational(1, i64{1} << 40));  // near tie
        const TriBool got = cmp_radical(lhs, rhs);
        const int want = oracle_sign(lhs, rhs);
        if (!got.decided()) {
            ++undecided;
            continue;
        }
        ++decided;
        if (want == 0) continue;
        if (got.is_true() != (want > 0)) ++wrong;
    }
    CHECK(wrong == 0);
    CHECK(undecided == 0);
    CHECK(decided == 10'000);
}
