#pragma once

/**
 * @file radical.hpp
 * @brief Sums of radical terms in a single integer p, and a sign-exact
 *        comparison engine for them.
 *
 * A term is  coef * 2^(e2) * p^(ep)  with a rational coefficient and
 * exponents that are multiples of 1/20. That covers the quarter powers of p
 * (p^0, p^1/4, p^1/2, p^3/4, p) with an optional sqrt(2) factor, and the
 * fifth powers in the least-odd-non-residue bound (2^(3/5) p^(2/5) ...).
 *
 * Comparisons are decided by integer floor-roots at a fixed number of
 * fractional bits: every term becomes an integer interval [lo, hi] that
 * contains 2^F times its value, and the sum of intervals is compared with
 * zero. F starts at 128 and doubles until the sign is certain or the cap is
 * reached.
 */

#include <string>
#include <vector>

#include "qnr/arith.hpp"

namespace qnr::radical {

using arith::Rational;

/// Exponent in units of 1/20.
struct Exponent {
    int twentieths = 0;

    static constexpr Exponent of(int num, int den) { return {num * (20 / den)}; }
    friend constexpr Exponent operator+(Exponent a, Exponent b) { return {a.twentieths + b.twentieths}; }
    friend constexpr bool operator==(Exponent, Exponent) = default;
    friend constexpr auto operator<=>(Exponent, Exponent) = default;
};

// p-power tags
inline constexpr Exponent kP0 = Exponent::of(0, 1);
inline constexpr Exponent kP1_4 = Exponent::of(1, 4);
inline constexpr Exponent kP1_2 = Exponent::of(1, 2);
inline constexpr Exponent kP3_4 = Exponent::of(3, 4);
inline constexpr Exponent kP1 = Exponent::of(1, 1);

// radical factors
inline constexpr Exponent kOne = Exponent::of(0, 1);
inline constexpr Exponent kSqrt2 = Exponent::of(1, 2);

struct Term {
    Rational coef;
    Exponent pPow = kP0;
    Exponent twoPow = kOne;
};

/// Finite sum of terms evaluated at one positive integer p.
class RadicalExpr {
public:
    explicit RadicalExpr(u64 p) : p_(p) {}
    RadicalExpr(u64 p, std::vector<Term> terms);

    static RadicalExpr constant(u64 p, Rational c) { return {p, {Term{c}}}; }
    static RadicalExpr term(u64 p, Rational c, Exponent pPow, Exponent twoPow = kOne) {
        return {p, {Term{c, pPow, twoPow}}};
    }

    u64 p() const noexcept { return p_; }
    /// Like terms merged, zero terms dropped, sorted by exponent.
    const std::vector<Term>& terms() const noexcept { return terms_; }

    friend RadicalExpr operator+(const RadicalExpr& a, const RadicalExpr& b);
    friend RadicalExpr operator-(const RadicalExpr& a, const RadicalExpr& b);
    friend RadicalExpr operator*(const RadicalExpr& a, const RadicalExpr& b);
    friend RadicalExpr operator*(Rational k, const RadicalExpr& a);
    RadicalExpr operator-() const;

    std::string str() const;

private:
    void normalize();

    u64 p_;
    std::vector<Term> terms_;
};

enum class Truth { False, True, Indeterminate };

/// Outcome of a comparison. bitsUsed is the last precision tried (0 when
/// the exact single-term path decided).
struct TriBool {
    Truth value = Truth::Indeterminate;
    unsigned bitsUsed = 0;

    bool is_true() const noexcept { return value == Truth::True; }
    bool is_false() const noexcept { return value == Truth::False; }
    bool decided() const noexcept { return value != Truth::Indeterminate; }
    std::string str() const;
};

struct CompareOptions {
    unsigned startBits = 128;
    unsigned maxBits = 8192;
};

/// True iff lhs > rhs as real numbers. Throws PreconditionError when the two
/// sides are evaluated at different p.
TriBool cmp_radical(const RadicalExpr& lhs, const RadicalExpr& rhs, const CompareOptions& opts = {});

/// Integer interval [lo, hi] (decimal strings) containing 2^bits * value.
/// Exposed for diagnostics and tests.
struct ScaledBounds {
    std::string lo;
    std::string hi;
};
ScaledBounds scaled_bounds(const RadicalExpr& e, unsigned bits);

}  // namespace qnr::radical
