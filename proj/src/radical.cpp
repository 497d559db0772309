#include "qnr/radical.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <gmpxx.h>

#include "qnr/errors.hpp"

namespace qnr::radical {

namespace {

Rational pow2(int k) {
    if (k >= 0) return {i64{1} << k, 1};
    return {1, i64{1} << -k};
}

std::string exponent_str(Exponent e) {
    const int g = std::gcd(e.twentieths, 20);
    const int n = e.twentieths / g, d = 20 / g;
    return d == 1 ? std::to_string(n) : "(" + std::to_string(n) + "/" + std::to_string(d) + ")";
}

mpz_class to_mpz(u64 v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

mpz_class ipow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

struct Interval {
    mpz_class lo, hi;
};

/// [lo, hi] containing 2^bits * term(p).
Interval term_bounds(const Term& t, u64 p, unsigned bits) {
    const int e2 = t.twoPow.twentieths;
    const int ep = t.pPow.twentieths;
    if (ep < 0) throw PreconditionError("radical term with negative power of p");
    const int g = std::gcd(std::gcd(std::abs(e2), ep), 20);
    const unsigned long degree = static_cast<unsigned long>(20 / g);
    const long twoExp = static_cast<long>(e2 / g) + static_cast<long>(bits) * static_cast<long>(degree);
    const unsigned long pExp = static_cast<unsigned long>(ep / g);
    if (twoExp < 0) throw PreconditionError("radical precision too small for term");

    const i64 num = t.coef.num();
    mpz_class radicand = ipow(to_mpz(static_cast<u64>(num < 0 ? -num : num)), degree) * ipow(to_mpz(p), pExp);
    radicand <<= static_cast<mp_bitcnt_t>(twoExp);
    const mpz_class den = ipow(to_mpz(t.coef.den()), degree);

    mpz_class q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), radicand.get_mpz_t(), den.get_mpz_t());
    mpz_class root;
    bool exact = mpz_root(root.get_mpz_t(), q.get_mpz_t(), degree) != 0;
    exact = exact && rem == 0;

    Interval iv{root, exact ? root : mpz_class(root + 1)};
    if (num < 0) {
        iv = {-iv.hi, -iv.lo};
    }
    return iv;
}

Interval expr_bounds(const RadicalExpr& e, unsigned bits) {
    Interval sum{0, 0};
    for (const Term& t : e.terms()) {
        const Interval iv = term_bounds(t, e.p(), bits);
        sum.lo += iv.lo;
        sum.hi += iv.hi;
    }
    return sum;
}

int sign(i64 v) { return (v > 0) - (v < 0); }

/// Exact comparison of two single terms by raising both to the 20th power.
TriBool compare_single(const Term* a, const Term* b, u64 p) {
    const int sa = a ? sign(a->coef.num()) : 0;
    const int sb = b ? sign(b->coef.num()) : 0;
    if (sa != sb || sa == 0) return {sa > sb ? Truth::True : Truth::False, 0};

    auto magnitude20 = [&](const Term& t, const Term& other) {
        const i64 n = t.coef.num();
        mpz_class m = ipow(to_mpz(static_cast<u64>(n < 0 ? -n : n)), 20) *
                      ipow(to_mpz(other.coef.den()), 20) *
                      ipow(to_mpz(p), static_cast<unsigned long>(t.pPow.twentieths));
        return m;
    };
    mpz_class ma = magnitude20(*a, *b);
    mpz_class mb = magnitude20(*b, *a);
    const int shift = a->twoPow.twentieths - b->twoPow.twentieths;
    if (shift >= 0) {
        ma <<= static_cast<mp_bitcnt_t>(shift);
    } else {
        mb <<= static_cast<mp_bitcnt_t>(-shift);
    }
    const bool greater = sa > 0 ? ma > mb : ma < mb;
    return {greater ? Truth::True : Truth::False, 0};
}

}  // namespace

RadicalExpr::RadicalExpr(u64 p, std::vector<Term> terms) : p_(p), terms_(std::move(terms)) {
    if (p == 0) throw PreconditionError("radical expression needs p >= 1");
    normalize();
}

void RadicalExpr::normalize() {
    for (Term& t : terms_) {
        // Keep the power of two in [0, 1); integer parts move into the coefficient.
        int e = t.twoPow.twentieths;
        int whole = e >= 0 ? e / 20 : -((-e + 19) / 20);
        t.twoPow.twentieths = e - 20 * whole;
        if (whole != 0) t.coef = t.coef * pow2(whole);
    }
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        return std::tie(b.pPow, b.twoPow) < std::tie(a.pPow, a.twoPow);
    });
    std::vector<Term> merged;
    for (const Term& t : terms_) {
        if (!merged.empty() && merged.back().pPow == t.pPow && merged.back().twoPow == t.twoPow) {
            merged.back().coef = merged.back().coef + t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef.is_zero(); });
    terms_ = std::move(merged);
}

RadicalExpr operator+(const RadicalExpr& a, const RadicalExpr& b) {
    if (a.p_ != b.p_) throw PreconditionError("radical expressions at different p");
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return {a.p_, std::move(t)};
}

RadicalExpr operator-(const RadicalExpr& a, const RadicalExpr& b) { return a + (-b); }

RadicalExpr RadicalExpr::operator-() const { return Rational(-1) * *this; }

RadicalExpr operator*(Rational k, const RadicalExpr& a) {
    std::vector<Term> t = a.terms_;
    for (Term& x : t) x.coef = x.coef * k;
    return {a.p_, std::move(t)};
}

RadicalExpr operator*(const RadicalExpr& a, const RadicalExpr& b) {
    if (a.p_ != b.p_) throw PreconditionError("radical expressions at different p");
    std::vector<Term> t;
    for (const Term& x : a.terms_) {
        for (const Term& y : b.terms_) {
            t.push_back({x.coef * y.coef, x.pPow + y.pPow, x.twoPow + y.twoPow});
        }
    }
    return {a.p_, std::move(t)};
}

std::string RadicalExpr::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        Rational c = t.coef;
        if (!first) {
            os << (c.num() < 0 ? " - " : " + ");
            if (c.num() < 0) c = -c;
        }
        first = false;
        os << c.str();
        if (t.twoPow.twentieths != 0) os << "*2^" << exponent_str(t.twoPow);
        if (t.pPow.twentieths != 0) os << "*p^" << exponent_str(t.pPow);
    }
    return os.str();
}

std::string TriBool::str() const {
    switch (value) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        case Truth::Indeterminate: return "indeterminate@" + std::to_string(bitsUsed);
    }
    return "?";
}

TriBool cmp_radical(const RadicalExpr& lhs, const RadicalExpr& rhs, const CompareOptions& opts) {
    if (lhs.p() != rhs.p()) throw PreconditionError("cmp_radical: expressions evaluated at different p");
    if (lhs.terms().size() <= 1 && rhs.terms().size() <= 1) {
        const Term* a = lhs.terms().empty() ? nullptr : &lhs.terms().front();
        const Term* b = rhs.terms().empty() ? nullptr : &rhs.terms().front();
        if (!a || !b) {
            const int sa = a ? sign(a->coef.num()) : 0;
            const int sb = b ? sign(b->coef.num()) : 0;
            return {sa > sb ? Truth::True : Truth::False, 0};
        }
        return compare_single(a, b, lhs.p());
    }

    const RadicalExpr diff = lhs - rhs;
    if (diff.terms().empty()) return {Truth::False, 0};
    unsigned bits = std::max(1u, opts.startBits);
    for (;;) {
        const Interval iv = expr_bounds(diff, bits);
        if (iv.lo > 0) return {Truth::True, bits};
        if (iv.hi <= 0) return {Truth::False, bits};
        if (bits >= opts.maxBits) return {Truth::Indeterminate, bits};
        bits = std::min(bits * 2, opts.maxBits);
    }
}

ScaledBounds scaled_bounds(const RadicalExpr& e, unsigned bits) {
    const Interval iv = expr_bounds(e, bits);
    return {iv.lo.get_str(), iv.hi.get_str()};
}

}  // namespace qnr::radical
