#include "qnr/arith.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "qnr/errors.hpp"

namespace qnr::arith {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(i64 num, i64 den) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i64 g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

namespace {

i64 narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw PreconditionError("rational overflow");
    return static_cast<i64>(v);
}

Rational make(i128 num, i128 den) {
    const i128 g = std::gcd(num < 0 ? -num : num, den < 0 ? -den : den);
    return {narrow(num / g), narrow(den / g)};
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

// ---------------------------------------------------------------------------
// Roots

namespace {

template <class U>
U newton_isqrt(U n) {
    if (n < 2) return n;
    const int bits = static_cast<int>(sizeof(U) * 8) - [&] {
        if constexpr (sizeof(U) == 16) {
            const u64 hi = static_cast<u64>(n >> 64);
            return hi ? std::countl_zero(hi) : 64 + std::countl_zero(static_cast<u64>(n));
        } else {
            return std::countl_zero(n);
        }
    }();
    // 2^ceil(bits/2) is an overestimate; Newton then decreases monotonically.
    U x = U{1} << ((bits + 1) / 2);
    for (;;) {
        const U y = (x + n / x) >> 1;
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

}  // namespace

u64 isqrt(u64 n) {
    // x + 1 can reach 2^32 for n near 2^64; the square must not wrap.
    return static_cast<u64>(newton_isqrt<u128>(n));
}

u64 isqrt(u128 n) {
    if (n >> 126) {
        // Keep (x+1)^2 representable: split off two bits.
        const u64 r = isqrt(n >> 2) * 2;
        const u128 rr = static_cast<u128>(r + 1) * (r + 1);
        return rr <= n ? r + 1 : r;
    }
    return static_cast<u64>(newton_isqrt<u128>(n));
}

u64 iroot(u128 n, unsigned k) {
    if (k == 0) throw PreconditionError("iroot: k must be positive");
    if (k == 1) return static_cast<u64>(n);
    // pow_le(r): r^k <= n without overflow.
    auto pow_le = [&](u64 r) {
        u128 acc = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (r != 0 && acc > n / r) return false;
            acc *= r;
        }
        return acc <= n;
    };
    u64 r = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const u64 cand = r | (u64{1} << bit);
        if (pow_le(cand)) r = cand;
    }
    return r;
}

u64 floor_scaled_sqrt(u64 num, u64 den, u64 p) {
    if (num == 0 || den == 0 || p == 0) throw PreconditionError("floor_scaled_sqrt: arguments must be positive");
    const u128 nn = static_cast<u128>(num) * num;
    if (nn != 0 && p > (~u128{0}) / nn) throw PreconditionError("floor_scaled_sqrt: num^2 * p exceeds 128 bits");
    // t*den <= sqrt(num^2 p)  <=>  t*den <= isqrt(num^2 p)
    return isqrt(nn * p) / den;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

int jacobi(i64 a, u64 n) {
    if (n < 3 || n % 2 == 0) throw PreconditionError("jacobi: modulus must be odd and >= 3");
    u64 x = a >= 0 ? static_cast<u64>(a) % n
                   : (n - static_cast<u64>(-(a + 1)) % n - 1) % n;
    int t = 1;
    while (x != 0) {
        const int tz = std::countr_zero(x);
        x >>= tz;
        // (2|n) = -1 iff n = 3, 5 (mod 8)
        if ((tz & 1) && ((n & 7) == 3 || (n & 7) == 5)) t = -t;
        // reciprocity flips the sign iff both are 3 (mod 4)
        if ((x & 3) == 3 && (n & 3) == 3) t = -t;
        std::swap(x, n);
        x %= n;
    }
    return n == 1 ? t : 0;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 q : small) {
        if (n % q == 0) return n == q;
    }
    if (n < 41 * 41) return true;
    u64 d = n - 1;
    const int s = std::countr_zero(d);
    d >>= s;
    // The first twelve prime bases are deterministic below 3.3e24.
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> primes_in_class(u64 lo, u64 hi, u64 residue, u64 modulus) {
    if (modulus == 0 || residue >= modulus) throw PreconditionError("primes_in_class: need 0 <= residue < modulus");
    if (hi > (u64{1} << 62)) throw PreconditionError("primes_in_class: upper bound too large to sieve");
    std::vector<u64> out;
    if (lo > hi || hi < 2) return out;
    lo = std::max<u64>(lo, 2);

    auto keep = [&](u64 p) { return p % modulus == residue; };
    if (lo <= 2 && keep(2)) out.push_back(2);

    // Base primes up to sqrt(hi), odd only, by a plain sieve.
    const u64 root = isqrt(hi);
    std::vector<u64> base;
    {
        std::vector<bool> composite(root + 1, false);
        for (u64 i = 3; i <= root; i += 2) {
            if (composite[i]) continue;
            base.push_back(i);
            for (u64 j = i * i; j <= root; j += 2 * i) composite[j] = true;
        }
    }

    // Segments over odd numbers; bit i of a segment stands for first + 2i.
    constexpr u64 kSegmentOdds = u64{1} << 18;
    std::vector<u64> bits(kSegmentOdds / 64);
    u64 first = std::max<u64>(lo, 3) | 1;
    while (first <= hi) {
        const u64 count = std::min<u64>(kSegmentOdds, (hi - first) / 2 + 1);
        std::fill(bits.begin(), bits.end(), 0);
        const u64 last = first + 2 * (count - 1);
        for (u64 q : base) {
            if (q * q > last) break;
            u64 start = std::max(q * q, (first + q - 1) / q * q);
            if (start % 2 == 0) start += q;
            for (u64 j = start; j <= last; j += 2 * q) {
                const u64 i = (j - first) / 2;
                bits[i >> 6] |= u64{1} << (i & 63);
            }
        }
        for (u64 i = 0; i < count; ++i) {
            if (bits[i >> 6] >> (i & 63) & 1) continue;
            const u64 v = first + 2 * i;
            if (v > 1 && keep(v)) out.push_back(v);
        }
        if (last >= hi) break;
        first = last + 2;
    }
    return out;
}

}  // namespace qnr::arith
