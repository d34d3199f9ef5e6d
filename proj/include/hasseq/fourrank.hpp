#pragma once

#include <array>
#include <bit>
#include <string>

#include "hasseq/arith.hpp"
#include "hasseq/bqf.hpp"

namespace hasseq {

enum class FourRankMethod { FK_GENERAL, FK_SPECIAL, BQF_ORACLE };

inline const char* to_string(FourRankMethod m) {
    switch (m) {
        case FourRankMethod::FK_GENERAL: return "fk";
        case FourRankMethod::FK_SPECIAL: return "special";
        case FourRankMethod::BQF_ORACLE: return "oracle";
    }
    return "?";
}

struct FourRankReport {
    u64 d = 1;
    u64 discriminant = 8;
    FourRankMethod method = FourRankMethod::FK_GENERAL;
    u64 power = 1;      // 2^rank
    unsigned rank = 0;  // rk_4 Cl+(8d)
};

namespace fk_detail {

// Pairwise symbol table for the prime factors of d: jac[i][j] = (p_i / p_j),
// two[i] = (2 / p_i), m1[i] = (-1 / p_i).
struct SymbolTable {
    unsigned t;
    std::array<std::array<int, 20>, 20> jac;
    std::array<int, 20> two, m1;
};

inline SymbolTable build_symbols(const FactoredInteger& d) {
    if (!d.squarefree() || d.value % 2 == 0)
        throw std::invalid_argument("fourrank: d must be odd and squarefree");
    if (d.omega() > 20) throw std::invalid_argument("fourrank: omega(d) > 20");
    SymbolTable st;
    st.t = d.omega();
    for (unsigned i = 0; i < st.t; ++i) {
        st.two[i] = jacobi(2, d.primes[i]);
        st.m1[i] = chi_minus1(d.primes[i]);
        for (unsigned j = 0; j < st.t; ++j)
            if (i != j) st.jac[i][j] = jacobi(static_cast<i64>(d.primes[i]), d.primes[j]);
    }
    return st;
}

// The four symbols (D2/D0)(D1/D3)(D3/D0)(D0/D3) contribute the pair (i,j)
// exactly when (slot_i, slot_j) is one of (2,0), (1,3), (3,0), (0,3).
inline bool pair_active(int si, int sj) {
    return (si == 2 && sj == 0) || (si == 1 && sj == 3) || (si == 3 && sj == 0) ||
           (si == 0 && sj == 3);
}

template <typename TermFn>
inline i64 slot_sum(const SymbolTable& st, TermFn&& term) {
    const unsigned t = st.t;
    std::array<int, 20> slot{};
    i64 total = 0;
    const u64 n_assign = 1ull << (2 * t);  // 4^t
    for (u64 code = 0; code < n_assign; ++code) {
        u64 c = code;
        for (unsigned i = 0; i < t; ++i) { slot[i] = static_cast<int>(c & 3); c >>= 2; }
        int sym = 1;
        for (unsigned i = 0; i < t; ++i)
            for (unsigned j = 0; j < t; ++j)
                if (i != j && pair_active(slot[i], slot[j])) sym *= st.jac[i][j];
        total += term(slot, sym);
    }
    return total;
}

inline FourRankReport finish(const FactoredInteger& d, FourRankMethod method, i64 total,
                             u64 denom) {
    if (total <= 0 || total % static_cast<i64>(denom) != 0)
        throw internal_error("fourrank: divisor sum not a positive multiple of the denominator");
    const u64 power = static_cast<u64>(total) / denom;
    if (!std::has_single_bit(power))
        throw internal_error("fourrank: quotient is not a power of two for d=" +
                             std::to_string(d.value));
    FourRankReport rep;
    rep.d = d.value;
    rep.discriminant = 8 * d.value;
    rep.method = method;
    rep.power = power;
    rep.rank = static_cast<unsigned>(std::countr_zero(power));
    if (rep.rank > d.omega()) throw internal_error("fourrank: rank exceeds omega(d)");
    return rep;
}

} // namespace fk_detail

// 2^{rk_4 Cl+(8d)} by the divisor-sum formula over ordered factorizations
// d = D0 D1 D2 D3:
//   (2 * 2^omega(d))^{-1} * sum (2/D3)(D2/D0)(D1/D3)(D3/D0)(D0/D3)
//                               * [(-1/D0) + (-1/D3)].
inline FourRankReport fourrank_fk(const FactoredInteger& d) {
    const auto st = fk_detail::build_symbols(d);
    const i64 total = fk_detail::slot_sum(st, [&](const std::array<int, 20>& slot, int sym) {
        int chi0 = 1, chi3 = 1, two3 = 1;
        for (unsigned i = 0; i < st.t; ++i) {
            if (slot[i] == 0) chi0 *= st.m1[i];
            if (slot[i] == 3) { chi3 *= st.m1[i]; two3 *= st.two[i]; }
        }
        return static_cast<i64>(sym * two3 * (chi0 + chi3));
    });
    return fk_detail::finish(d, FourRankMethod::FK_GENERAL, total, 2ull << d.omega());
}

// Specialization for 2d in D_2 (every p | d has (2/p) = 1):
//   2^{-omega(d)} * sum (-1/D3)(D2/D0)(D1/D3)(D3/D0)(D0/D3).
inline FourRankReport fourrank_fk_special(const FactoredInteger& d) {
    const auto st = fk_detail::build_symbols(d);
    for (unsigned i = 0; i < st.t; ++i)
        if (st.two[i] != 1)
            throw std::invalid_argument("fourrank_fk_special: prime " +
                                        std::to_string(d.primes[i]) + " violates (2/p) = 1");
    const i64 total = fk_detail::slot_sum(st, [&](const std::array<int, 20>& slot, int sym) {
        int chi3 = 1;
        for (unsigned i = 0; i < st.t; ++i)
            if (slot[i] == 3) chi3 *= st.m1[i];
        return static_cast<i64>(sym * chi3);
    });
    return fk_detail::finish(d, FourRankMethod::FK_SPECIAL, total, 1ull << d.omega());
}

// Independent oracle: rk_4 = #{elementary divisors of Cl+(8d) divisible by 4},
// with the group computed from reduced indefinite forms.
inline FourRankReport fourrank_oracle(const FactoredInteger& d, u64 max_disc = 1'000'000) {
    if (!d.squarefree() || d.value % 2 == 0)
        throw std::invalid_argument("fourrank_oracle: d must be odd and squarefree");
    const auto grp = bqf_class_group(8 * d.value, max_disc);
    FourRankReport rep;
    rep.d = d.value;
    rep.discriminant = 8 * d.value;
    rep.method = FourRankMethod::BQF_ORACLE;
    rep.rank = 0;
    for (u64 dv : grp.elementary_divisors)
        if (dv % 4 == 0) ++rep.rank;
    rep.power = 1ull << rep.rank;
    return rep;
}

} // namespace hasseq
