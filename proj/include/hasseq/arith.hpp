#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hasseq/errors.hpp"

namespace hasseq {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((u128)a * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = m > 1 ? 1 : 0;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while (r + 1 <= n / (r + 1)) ++r;
    return r;
}

inline bool is_perfect_square(u64 n, u64* root = nullptr) {
    u64 r = isqrt(n);
    if (root) *root = r;
    return r * r == n;
}

// Deterministic Miller-Rabin; the witness set certifies every 64-bit n.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
    // Brent's cycle variant; caller guarantees n odd composite.
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 v) { return (static_cast<u64>((u128)v * v % n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        do {
            x = step(x);
            y = step(step(y));
            u64 diff = x > y ? x - y : y - x;
            d = diff ? std::gcd(diff, n) : n;
        } while (d == 1);
        if (d != n) return d;
    }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
    while (n > 1) {
        if (is_prime(n)) { out.push_back(n); return; }
        u64 d = pollard_rho(n);
        factor_into(d, out);
        n /= d;
    }
}

} // namespace detail

// An integer carrying its factorization into distinct primes, each certified
// by the deterministic primality test.
struct FactoredInteger {
    u64 value = 1;
    std::vector<u64> primes;        // strictly ascending
    std::vector<u32> exponents;     // aligned with primes, all >= 1

    unsigned omega() const { return static_cast<unsigned>(primes.size()); }

    bool squarefree() const {
        return std::all_of(exponents.begin(), exponents.end(),
                           [](u32 e) { return e == 1; });
    }
};

inline FactoredInteger factor(u64 n) {
    if (n < 1) throw std::invalid_argument("factor: n must be >= 1");
    FactoredInteger f;
    f.value = n;
    if (n == 1) return f;
    std::vector<u64> ps;
    // strip small primes first, then rho on the odd cofactor
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        while (n % p == 0) { ps.push_back(p); n /= p; }
    }
    detail::factor_into(n, ps);
    std::sort(ps.begin(), ps.end());
    for (std::size_t i = 0; i < ps.size();) {
        std::size_t j = i;
        while (j < ps.size() && ps[j] == ps[i]) ++j;
        f.primes.push_back(ps[i]);
        f.exponents.push_back(static_cast<u32>(j - i));
        i = j;
    }
    return f;
}

inline bool is_squarefree(u64 n) {
    if (n < 1) throw std::invalid_argument("is_squarefree: n must be >= 1");
    if (n < 4) return true;
    if (n % 4 == 0 || n % 9 == 0 || n % 25 == 0 || n % 49 == 0) return false;
    return factor(n).squarefree();
}

// Jacobi symbol (a/n) for odd positive n; 0 iff gcd(a,n) > 1.
inline int jacobi(i64 a, u64 n) {
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: n must be odd and positive");
    int t = 1;
    u64 ua;
    if (a < 0) {
        // (-1/n) = (-1)^((n-1)/2)
        if (((n - 1) / 2) % 2 == 1) t = -t;
        ua = static_cast<u64>(-(a + 1)) + 1;  // |a| without overflow at INT64_MIN
    } else {
        ua = static_cast<u64>(a);
    }
    ua %= n;
    while (ua != 0) {
        while (ua % 2 == 0) {
            ua /= 2;
            u64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(ua, n);
        if (ua % 4 == 3 && n % 4 == 3) t = -t;
        ua %= n;
    }
    return n == 1 ? t : 0;
}

// chi(n) = (-1)^((n-1)/2) for odd n; the quadratic character of -1.
inline int chi_minus1(u64 n) {
    if (n % 2 == 0) throw std::invalid_argument("chi_minus1: n must be odd");
    return (n % 4 == 1) ? 1 : -1;
}

inline std::vector<u32> sieve_primes(u32 limit) {
    std::vector<u32> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (u32 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            primes.push_back(i);
            for (u64 j = (u64)i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return primes;
}

struct SieveConfig {
    u64 segment_size = 1u << 20;      // values per segment
    u64 max_hi = 4'000'000'000ull;    // safety bound; prime slots are 32-bit
};

namespace detail {

// Sub-block width for the factor-collecting sieve; keeps per-position slot
// arrays inside L2.
constexpr u64 kSieveBlock = 1u << 14;
constexpr int kMaxSmallFactors = 10;  // primorial(10) = 6.5e9 > max_hi

} // namespace detail

// Streams every squarefree n in [lo, hi] in ascending order, with its full
// factorization, via a segmented sieve over the primes <= sqrt(hi).
// `sieve` must contain all primes <= sqrt(hi) (extra entries are ignored).
inline void squarefree_range_segment(u64 lo, u64 hi, const std::vector<u32>& sieve,
                                     const std::function<void(const FactoredInteger&)>& emit) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("squarefree_range: need 1 <= lo <= hi");
    const u64 root = isqrt(hi);
    FactoredInteger out;
    for (u64 blo = lo; blo <= hi; blo += detail::kSieveBlock) {
        const u64 bhi = std::min(hi, blo + detail::kSieveBlock - 1);
        const std::size_t len = static_cast<std::size_t>(bhi - blo + 1);
        static thread_local std::vector<u64> rem;
        static thread_local std::vector<u32> slots;
        static thread_local std::vector<signed char> nfac;  // -1 marks non-squarefree
        rem.assign(len, 0);
        slots.assign(len * detail::kMaxSmallFactors, 0);
        nfac.assign(len, 0);
        for (std::size_t i = 0; i < len; ++i) rem[i] = blo + i;
        for (u32 p : sieve) {
            if ((u64)p > root) break;
            u64 m = ((blo + p - 1) / p) * p;
            for (; m <= bhi; m += p) {
                const std::size_t idx = static_cast<std::size_t>(m - blo);
                if (nfac[idx] < 0) {
                    // already non-squarefree; still strip so rem stays consistent
                    while (rem[idx] % p == 0) rem[idx] /= p;
                    continue;
                }
                int e = 0;
                while (rem[idx] % p == 0) { rem[idx] /= p; ++e; }
                if (e >= 2) {
                    nfac[idx] = -1;
                } else {
                    slots[idx * detail::kMaxSmallFactors + nfac[idx]] = p;
                    ++nfac[idx];
                }
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (nfac[i] < 0) continue;
            const u64 n = blo + i;
            out.value = n;
            out.primes.clear();
            out.exponents.clear();
            for (int k = 0; k < nfac[i]; ++k) {
                out.primes.push_back(slots[i * detail::kMaxSmallFactors + k]);
                out.exponents.push_back(1);
            }
            if (rem[i] > 1) {
                out.primes.push_back(rem[i]);  // prime cofactor > sqrt(hi)
                out.exponents.push_back(1);
            }
            emit(out);
        }
    }
}

inline void squarefree_range(u64 lo, u64 hi,
                             const std::function<void(const FactoredInteger&)>& emit,
                             const SieveConfig& cfg = {}) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("squarefree_range: need 1 <= lo <= hi");
    if (hi > cfg.max_hi) throw std::invalid_argument("squarefree_range: hi exceeds sieve bound");
    const auto sieve = sieve_primes(static_cast<u32>(isqrt(hi)));
    squarefree_range_segment(lo, hi, sieve, emit);
}

} // namespace hasseq
