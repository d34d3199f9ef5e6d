#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "hasseq/arith.hpp"

namespace hasseq {

// Periodic continued fraction of sqrt(D) with convergents and their norms
// over one full period.
struct ContinuedFraction {
    u64 D = 0;
    u64 a0 = 0;
    std::vector<u64> period;              // a_1..a_l, last entry = 2*a0
    std::vector<mpz_class> p_seq, q_seq;  // convergents p_i/q_i, i = 0..l-1
    std::vector<i64> norm_seq;            // p_i^2 - D q_i^2, i = 0..l-1

    std::size_t period_length() const { return period.size(); }
};

struct NormEquationSolution {
    u64 D = 0;
    i64 N = 0;
    mpz_class x, y;
};

namespace detail {

// One step of the P,Q recurrence for sqrt(D). All quantities stay below
// 2*sqrt(D)+1, so 64-bit arithmetic suffices for any 64-bit D.
struct PQState {
    u64 D, a0, P, Q;
    u64 advance() {  // returns partial quotient a_i, moves to (P_{i+1}, Q_{i+1})
        u64 a = (P + a0) / Q;
        P = a * Q - P;
        Q = (D - P * P) / Q;
        return a;
    }
};

inline u64 cf_period_length(u64 D, u64 a0) {
    PQState st{D, a0, a0, D - a0 * a0};  // state after the integer part
    u64 len = 1;
    while (st.Q != 1) { st.advance(); ++len; }
    return len;
}

} // namespace detail

inline ContinuedFraction cf_sqrt(u64 D) {
    if (D < 2) throw std::invalid_argument("cf_sqrt: D must be >= 2");
    const u64 a0 = isqrt(D);
    if (a0 * a0 == D) throw std::invalid_argument("cf_sqrt: D is a perfect square");
    ContinuedFraction cf;
    cf.D = D;
    cf.a0 = a0;
    mpz_class pm1 = 1, p0 = a0, qm1 = 0, q0 = 1;
    cf.p_seq.push_back(p0);
    cf.q_seq.push_back(q0);
    detail::PQState st{D, a0, a0, D - a0 * a0};
    // norm of p_i/q_i is (-1)^(i+1) * Q_{i+1}
    cf.norm_seq.push_back(-static_cast<i64>(st.Q));
    int sign = 1;
    while (true) {
        const u64 a = st.advance();
        cf.period.push_back(a);
        if (a == 2 * a0) break;
        mpz_class p = static_cast<unsigned long>(a) * p0 + pm1;
        mpz_class q = static_cast<unsigned long>(a) * q0 + qm1;
        pm1 = p0; p0 = p;
        qm1 = q0; q0 = q;
        cf.p_seq.push_back(p0);
        cf.q_seq.push_back(q0);
        cf.norm_seq.push_back(sign * static_cast<i64>(st.Q));
        sign = -sign;
    }
    return cf;
}

// Index of the first convergent (over two periods) whose norm equals N,
// using only the 64-bit P,Q recurrence.
inline std::optional<u64> norm_scan(u64 D, i64 N) {
    const u64 a0 = isqrt(D);
    if (a0 * a0 == D) throw std::invalid_argument("norm_scan: D is a perfect square");
    const u64 len = detail::cf_period_length(D, a0);
    detail::PQState st{D, a0, a0, D - a0 * a0};
    i64 sign = -1;  // (-1)^(i+1) at i = 0
    for (u64 i = 0; i < 2 * len; ++i) {
        if (sign * static_cast<i64>(st.Q) == N) return i;
        st.advance();
        sign = -sign;
    }
    return std::nullopt;
}

namespace detail {

inline std::optional<NormEquationSolution> exhaustive_norm_search(u64 D, i64 N, u64 y_bound) {
    for (u64 y = 0; y <= y_bound; ++y) {
        const __int128 t = (__int128)D * y * y + N;
        if (t < 0) continue;
        u64 root;
        if (is_perfect_square(static_cast<u64>(t), &root))
            return NormEquationSolution{D, N, mpz_class(static_cast<unsigned long>(root)),
                                        mpz_class(static_cast<unsigned long>(y))};
    }
    return std::nullopt;
}

} // namespace detail

// Test-facing oracle: scan 0 <= y <= y_bound directly.
inline std::optional<NormEquationSolution> brute_force_norm_search(u64 D, i64 N, u64 y_bound) {
    return detail::exhaustive_norm_search(D, N, y_bound);
}

// Solve x^2 - D y^2 = N for N in {+-1} or squarefree N with N^2 < D
// (the artifact uses N in {1,-1,2,-2}). Complete: for such N every integer
// solution is primitive, hence comes from a convergent of sqrt(D).
inline std::optional<NormEquationSolution> solve_norm_equation(u64 D, i64 N) {
    const u64 a0 = isqrt(D);
    if (D < 2 || a0 * a0 == D)
        throw std::invalid_argument("solve_norm_equation: D must be a non-square >= 2");
    if (N == 0) throw std::invalid_argument("solve_norm_equation: N must be nonzero");
    const u64 absN = N < 0 ? static_cast<u64>(-N) : static_cast<u64>(N);
    if ((D == 2 || D == 3) && absN == 2)
        return detail::exhaustive_norm_search(D, N, D * absN);
    if (absN != 1) {
        if ((u128)absN * absN >= D || !is_squarefree(absN))
            throw std::invalid_argument("solve_norm_equation: N outside supported domain");
    }
    if (N == 1) return NormEquationSolution{D, N, 1, 0};
    const auto hit = norm_scan(D, N);
    if (!hit) return std::nullopt;
    // regenerate convergents up to the hit index
    mpz_class pm1 = 1, p0 = a0, qm1 = 0, q0 = 1;
    detail::PQState st{D, a0, a0, D - a0 * a0};
    for (u64 i = 0; i < *hit; ++i) {
        const u64 a = st.advance();
        mpz_class p = static_cast<unsigned long>(a) * p0 + pm1;
        mpz_class q = static_cast<unsigned long>(a) * q0 + qm1;
        pm1 = p0; p0 = p;
        qm1 = q0; q0 = q;
    }
    return NormEquationSolution{D, N, p0, q0};
}

// Hasse unit index Q(L) for L = Q(sqrt(d), i), d squarefree > 3.
// Q = 2 iff 2 ramifies in Q(sqrt(d)) (d != 1 mod 4) and x^2 - d y^2 = +-2
// has an integer solution.
inline int hasse_unit_index(const FactoredInteger& d) {
    if (d.value < 2 || !d.squarefree())
        throw std::invalid_argument("hasse_unit_index: d must be squarefree and > 3");
    if (d.value == 2 || d.value == 3)
        throw torsion_error("hasse_unit_index: d in {2,3} has |T_L| > 4");
    if (d.value % 4 == 1) return 1;
    if (norm_scan(d.value, 2) || norm_scan(d.value, -2)) return 2;
    return 1;
}

inline int hasse_unit_index(u64 d) { return hasse_unit_index(factor(d)); }

} // namespace hasseq
