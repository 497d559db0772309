#pragma once

/**
 * @file arith.hpp
 * @brief Exact integer and modular arithmetic, primality, and sieving.
 *
 * Everything here is integer-only. Square roots, floors of scaled roots and
 * modular products never touch floating point, so results are exact over the
 * whole supported range (64-bit moduli, 128-bit intermediates).
 */

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace qnr {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

namespace arith {

/// Exact rational number in lowest terms with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(i64 num, i64 den = 1);

    i64 num() const noexcept { return num_; }
    i64 den() const noexcept { return den_; }

    Rational operator-() const { return {-num_, den_}; }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    bool is_zero() const noexcept { return num_ == 0; }
    std::string str() const;

private:
    i64 num_ = 0;
    i64 den_ = 1;
};

/// Floor of the square root: r with r*r <= n < (r+1)*(r+1).
u64 isqrt(u64 n);
u64 isqrt(u128 n);

/// Floor of the k-th root of n (k >= 1).
u64 iroot(u128 n, unsigned k);

/// a*b mod m through a 128-bit product. a, b may be any 64-bit values.
constexpr u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m);

/// Jacobi symbol (a|n) for odd n >= 3, by quadratic reciprocity.
/// Throws PreconditionError for even n or n == 1.
int jacobi(i64 a, u64 n);

/// Deterministic Miller-Rabin, exact for every 64-bit n.
bool is_prime(u64 n);

/// Primes p in [lo, hi] with p = residue (mod modulus), ascending.
/// modulus == 1 selects all primes. Segmented, odd-only bit sieve.
std::vector<u64> primes_in_class(u64 lo, u64 hi, u64 residue, u64 modulus);

/// floor((num/den) * sqrt(p)): the largest t with t^2 den^2 <= num^2 p.
u64 floor_scaled_sqrt(u64 num, u64 den, u64 p);

}  // namespace arith
}  // namespace qnr
