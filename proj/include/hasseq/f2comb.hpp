#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <vector>

#include "hasseq/arith.hpp"

namespace hasseq {

// Element of F_2^{2k} as a 2k-bit mask. Coordinates are block-paired:
// bit 2j holds u_{2j+1}, bit 2j+1 holds u_{2j+2}, which makes lambda_k and
// phi_k word-parallel popcounts.
struct F2Vec {
    unsigned k = 1;
    u32 bits = 0;
};

namespace f2_detail {

inline u32 even_mask(unsigned k) { return 0x55555555u & ((k >= 16) ? ~0u : ((1u << (2 * k)) - 1)); }

inline int lambda_bits(unsigned k, u32 u) {
    return std::popcount(u & (u >> 1) & even_mask(k)) & 1;
}

// Phi_k(u, v) = sum_j (u_{2j+1} + v_{2j+1})(u_{2j+1} + v_{2j+2})
inline int phi_bits(unsigned k, u32 u, u32 v) {
    return std::popcount((u ^ v) & (u ^ (v >> 1)) & even_mask(k)) & 1;
}

inline bool unlinked_bits(unsigned k, u32 u, u32 v) {
    return phi_bits(k, u, v) == phi_bits(k, v, u);
}

inline void check_dims(const F2Vec& u, const F2Vec& v) {
    if (u.k != v.k) throw std::invalid_argument("f2comb: mismatched k");
}

inline void check_vec(const F2Vec& u) {
    if (u.k < 1 || u.k > 15) throw std::invalid_argument("f2comb: k out of range");
    if (u.k < 16 && (u.bits >> (2 * u.k)) != 0)
        throw std::invalid_argument("f2comb: bits beyond position 2k");
}

} // namespace f2_detail

inline int lambda_k(const F2Vec& u) {
    f2_detail::check_vec(u);
    return f2_detail::lambda_bits(u.k, u.bits);
}

inline int phi_k(const F2Vec& u, const F2Vec& v) {
    f2_detail::check_vec(u);
    f2_detail::check_vec(v);
    f2_detail::check_dims(u, v);
    return f2_detail::phi_bits(u.k, u.bits, v.bits);
}

inline bool unlinked(const F2Vec& u, const F2Vec& v) {
    f2_detail::check_vec(u);
    f2_detail::check_vec(v);
    f2_detail::check_dims(u, v);
    return f2_detail::unlinked_bits(u.k, u.bits, v.bits);
}

// A maximal family of pairwise-unlinked vectors; always a coset of a
// k-dimensional subspace, hence of size 2^k.
struct UnlinkedFamily {
    unsigned k = 1;
    std::vector<u32> members;  // ascending
};

enum class FamilyMode { BRUTE_FORCE, COSET };

namespace f2_detail {

// Bron-Kerbosch with pivoting over at most 64 vertices.
inline void bron_kerbosch(const std::vector<u64>& adj, u64 R, u64 P, u64 X,
                          std::vector<u64>& out) {
    if (P == 0 && X == 0) { out.push_back(R); return; }
    const u64 PX = P | X;
    int pivot = std::countr_zero(PX);
    int best = -1;
    for (u64 s = PX; s; s &= s - 1) {
        const int v = std::countr_zero(s);
        const int deg = std::popcount(P & adj[v]);
        if (deg > best) { best = deg; pivot = v; }
    }
    u64 cand = P & ~adj[pivot];
    while (cand) {
        const int v = std::countr_zero(cand);
        cand &= cand - 1;
        const u64 bit = 1ull << v;
        bron_kerbosch(adj, R | bit, P & adj[v], X & adj[v], out);
        P &= ~bit;
        X |= bit;
    }
}

// All k-dimensional subspaces of F_2^{2k}, enumerated through reduced
// row-echelon bases.
inline void for_each_subspace(unsigned n, unsigned k, const std::function<void(const std::vector<u32>&)>& fn) {
    std::vector<unsigned> pivots(k);
    std::vector<u32> basis(k);
    // choose pivot columns c_0 < ... < c_{k-1}
    std::function<void(unsigned, unsigned)> choose = [&](unsigned idx, unsigned from) {
        if (idx == k) {
            // free positions: row i, column c with c > pivots[i], c not a pivot
            std::vector<std::pair<unsigned, unsigned>> free_pos;
            std::vector<bool> is_pivot(n, false);
            for (unsigned c : pivots) is_pivot[c] = true;
            for (unsigned i = 0; i < k; ++i)
                for (unsigned c = pivots[i] + 1; c < n; ++c)
                    if (!is_pivot[c]) free_pos.emplace_back(i, c);
            const u64 nfill = 1ull << free_pos.size();
            for (u64 fill = 0; fill < nfill; ++fill) {
                for (unsigned i = 0; i < k; ++i) basis[i] = 1u << pivots[i];
                for (std::size_t t = 0; t < free_pos.size(); ++t)
                    if (fill >> t & 1) basis[free_pos[t].first] |= 1u << free_pos[t].second;
                fn(basis);
            }
            return;
        }
        for (unsigned c = from; c + (k - idx) <= n; ++c) {
            pivots[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
}

inline std::vector<u32> span_of(const std::vector<u32>& basis) {
    std::vector<u32> elems(1u << basis.size(), 0);
    for (std::size_t m = 1; m < elems.size(); ++m) {
        const unsigned j = static_cast<unsigned>(std::countr_zero(m));
        elems[m] = elems[m & (m - 1)] ^ basis[j];
    }
    return elems;
}

inline bool pairwise_unlinked(unsigned k, const std::vector<u32>& elems) {
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i + 1; j < elems.size(); ++j)
            if (!unlinked_bits(k, elems[i], elems[j])) return false;
    return true;
}

} // namespace f2_detail

// "Good" subspace: k-dimensional subspace of F_2^{2k} whose elements are
// pairwise unlinked. Returns each as its full sorted element list.
inline std::vector<std::vector<u32>> good_subspaces(unsigned k) {
    if (k < 1 || k > 4) throw std::invalid_argument("good_subspaces: k must be in [1,4]");
    std::vector<std::vector<u32>> out;
    f2_detail::for_each_subspace(2 * k, k, [&](const std::vector<u32>& basis) {
        auto elems = f2_detail::span_of(basis);
        if (f2_detail::pairwise_unlinked(k, elems)) {
            std::sort(elems.begin(), elems.end());
            out.push_back(std::move(elems));
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

// Maximal pairwise-unlinked subsets of F_2^{2k}. BRUTE_FORCE enumerates
// maximal cliques of the unlinked graph directly (k <= 3); COSET generates
// the cosets c + U_0 of good subspaces (k <= 4). The two agree where both run.
inline std::vector<UnlinkedFamily> maximal_unlinked_subsets(unsigned k, FamilyMode mode) {
    std::vector<UnlinkedFamily> fams;
    if (mode == FamilyMode::BRUTE_FORCE) {
        if (k < 1 || k > 3)
            throw std::invalid_argument("maximal_unlinked_subsets: brute-force mode needs k <= 3");
        const unsigned n = 1u << (2 * k);
        std::vector<u64> adj(n, 0);
        for (unsigned u = 0; u < n; ++u)
            for (unsigned v = 0; v < n; ++v)
                if (u != v && f2_detail::unlinked_bits(k, u, v)) adj[u] |= 1ull << v;
        std::vector<u64> cliques;
        f2_detail::bron_kerbosch(adj, 0, n == 64 ? ~0ull : (1ull << n) - 1, 0, cliques);
        for (u64 c : cliques) {
            UnlinkedFamily fam;
            fam.k = k;
            for (u64 s = c; s; s &= s - 1) fam.members.push_back(static_cast<u32>(std::countr_zero(s)));
            fams.push_back(std::move(fam));
        }
    } else {
        if (k < 1 || k > 4)
            throw std::invalid_argument("maximal_unlinked_subsets: coset mode needs k <= 4");
        std::set<std::vector<u32>> seen;
        for (const auto& sub : good_subspaces(k)) {
            for (u32 c = 0; c < (1u << (2 * k)); ++c) {
                std::vector<u32> coset;
                coset.reserve(sub.size());
                for (u32 u : sub) coset.push_back(u ^ c);
                std::sort(coset.begin(), coset.end());
                seen.insert(std::move(coset));
            }
        }
        for (const auto& m : seen) fams.push_back({k, m});
    }
    std::sort(fams.begin(), fams.end(),
              [](const UnlinkedFamily& a, const UnlinkedFamily& b) { return a.members < b.members; });
    return fams;
}

// gamma+(U, nu) = sum over subsets S of U with |S| = nu mod 2 of (-1)^{e+(S)},
// where e+(S) = sum_{u in S} lambda_k(u) + sum_{pairs {u,v} in S} Phi(u,v).
// All pairs in U are unlinked, so Phi is symmetric on them and the pair term
// is well defined.
inline i64 gamma_plus(const UnlinkedFamily& U, int nu) {
    if (nu != 0 && nu != 1) throw std::invalid_argument("gamma_plus: nu must be 0 or 1");
    const auto& el = U.members;
    const unsigned m = static_cast<unsigned>(el.size());
    if (m > 20) throw std::invalid_argument("gamma_plus: family too large");
    std::vector<u32> lam(m), row(m, 0);
    for (unsigned i = 0; i < m; ++i) {
        lam[i] = static_cast<u32>(f2_detail::lambda_bits(U.k, el[i]));
        for (unsigned j = 0; j < m; ++j)
            if (i != j && f2_detail::phi_bits(U.k, el[i], el[j])) row[i] |= 1u << j;
    }
    // Gray-code walk: step g toggles element countr_zero(g), keeping the
    // running parity of e+(S) in O(1) per subset.
    i64 total = (nu == 0) ? 1 : 0;  // S = {} contributes +1 to nu = 0
    u32 S = 0;
    int e = 0;
    for (u32 g = 1; g < (1u << m); ++g) {
        const unsigned x = static_cast<unsigned>(std::countr_zero(g));
        const u32 bit = 1u << x;
        if (S & bit) {
            S ^= bit;  // removing: pairs counted against S after removal
            e ^= lam[x] ^ (std::popcount(row[x] & S) & 1);
        } else {
            e ^= lam[x] ^ (std::popcount(row[x] & S) & 1);
            S ^= bit;
        }
        if ((std::popcount(S) & 1) == nu) total += e ? -1 : 1;
    }
    return total;
}

// Independent evaluation of gamma+(U, 1) in its residue-tuple form: tuples
// (h_u) in {1, 3 mod 4}^U with prod h_u = 3 mod 4, weight
// prod (-1)^{lambda(u) (h_u-1)/2} * prod (-1)^{Phi(u,v) (h_u-1)/2 (h_v-1)/2}.
inline i64 gamma_plus_residue_form(const UnlinkedFamily& U, int nu) {
    const auto& el = U.members;
    const unsigned m = static_cast<unsigned>(el.size());
    if (m > 20) throw std::invalid_argument("gamma_plus_residue_form: family too large");
    i64 total = 0;
    for (u32 T = 0; T < (1u << m); ++T) {
        if ((std::popcount(T) & 1) != nu) continue;  // prod h_u = 3^{|T|} mod 4
        int e = 0;
        for (unsigned i = 0; i < m; ++i) {
            if (!(T >> i & 1)) continue;
            e ^= f2_detail::lambda_bits(U.k, el[i]);
            for (unsigned j = i + 1; j < m; ++j)
                if (T >> j & 1) e ^= f2_detail::phi_bits(U.k, el[i], el[j]);
        }
        total += e ? -1 : 1;
    }
    return total;
}

// N(m, 2): number of subspaces of F_2^m, as the sum of Gaussian binomials.
inline u64 count_subspaces(unsigned m) {
    if (m > 30) throw std::invalid_argument("count_subspaces: m too large");
    // [n, j]_2 by the q-Pascal recurrence
    std::vector<std::vector<u128>> gb(m + 1, std::vector<u128>(m + 1, 0));
    for (unsigned n = 0; n <= m; ++n) {
        gb[n][0] = 1;
        for (unsigned j = 1; j <= n; ++j)
            gb[n][j] = gb[n - 1][j - 1] + (j <= n - 1 ? (gb[n - 1][j] << j) : (u128)0);
    }
    u128 total = 0;
    for (unsigned j = 0; j <= m; ++j) total += gb[m][j];
    if (total > ~0ull) throw std::invalid_argument("count_subspaces: overflow");
    return static_cast<u64>(total);
}

// sum over sigma in F_2^{2k} of (-1)^{lambda_k(sigma)}; equals 2^k.
inline i64 lambda_character_sum(unsigned k) {
    if (k < 1 || k > 12) throw std::invalid_argument("lambda_character_sum: k must be in [1,12]");
    const u64 n = 1ull << (2 * k);
    const u32 mask = f2_detail::even_mask(k);
    i64 total = 0;
    for (u64 s = 0; s < n; ++s) {
        const u32 u = static_cast<u32>(s);
        total += (std::popcount(u & (u >> 1) & mask) & 1) ? -1 : 1;
    }
    return total;
}

// Counts of sigma by m(sigma) = #{blocks j with sigma_{2j+1} = sigma_{2j+2} = 1};
// entry m holds binom(k,m) * 3^{k-m}.
inline std::vector<u64> lambda_weight_histogram(unsigned k) {
    if (k < 1 || k > 12) throw std::invalid_argument("lambda_weight_histogram: k in [1,12]");
    std::vector<u64> hist(k + 1, 0);
    const u64 n = 1ull << (2 * k);
    const u32 mask = f2_detail::even_mask(k);
    for (u64 s = 0; s < n; ++s) {
        const u32 u = static_cast<u32>(s);
        ++hist[std::popcount(u & (u >> 1) & mask)];
    }
    return hist;
}

struct MuFiberReport {
    unsigned k = 0;
    u64 codomain_size = 0;    // |U0 + <c>|
    u64 fiber_size = 0;       // common fiber cardinality of mu on all subsets
    u64 odd_fiber_size = 0;   // common fiber cardinality on odd-size subsets
    bool surjective = false;  // image of mu = U0 + <c>
    bool odd_image_is_coset = false;  // image of odd subsets = c + U0
    bool uniform = false;
    bool ok = false;
};

// Checks the subset-sum map mu(S) = sum of S over subsets of the coset
// c + U0: surjectivity onto U0 + <c>, uniform fibers, and that odd-size
// subsets map exactly onto c + U0 with fibers of size 2^{2^k - k - 1}.
inline MuFiberReport mu_fiber_check(unsigned k, const std::vector<u32>& U0_elems, u32 c) {
    if (k < 1 || k > 4) throw std::invalid_argument("mu_fiber_check: k must be in [1,4]");
    if (U0_elems.size() != (1ull << k))
        throw std::invalid_argument("mu_fiber_check: U0 must have 2^k elements");
    // U0 must be a subspace, good (pairwise unlinked)
    std::set<u32> set0(U0_elems.begin(), U0_elems.end());
    if (!set0.count(0) || set0.size() != U0_elems.size())
        throw std::invalid_argument("mu_fiber_check: U0 is not a subspace");
    for (u32 a : U0_elems)
        for (u32 b : U0_elems)
            if (!set0.count(a ^ b)) throw std::invalid_argument("mu_fiber_check: U0 is not a subspace");
    if (!f2_detail::pairwise_unlinked(k, U0_elems))
        throw std::invalid_argument("mu_fiber_check: U0 is not good");

    const unsigned m = 1u << k;  // coset size
    std::vector<u32> coset(m);
    for (unsigned i = 0; i < m; ++i) coset[i] = U0_elems[i] ^ c;
    std::set<u32> codomain;  // U0 + <c>
    for (u32 u : U0_elems) { codomain.insert(u); codomain.insert(u ^ c); }

    const u64 nsub = 1ull << m;
    std::vector<u64> fiber(1u << (2 * k), 0), odd_fiber(1u << (2 * k), 0);
    std::vector<u32> sigma(nsub, 0);
    for (u64 S = 1; S < nsub; ++S)
        sigma[S] = sigma[S & (S - 1)] ^ coset[std::countr_zero(S)];
    for (u64 S = 0; S < nsub; ++S) {
        ++fiber[sigma[S]];
        if (std::popcount(S) & 1) ++odd_fiber[sigma[S]];
    }

    MuFiberReport rep;
    rep.k = k;
    rep.codomain_size = codomain.size();
    rep.fiber_size = fiber[0];
    rep.surjective = true;
    rep.uniform = true;
    for (u32 v = 0; v < (1u << (2 * k)); ++v) {
        const bool in_cod = codomain.count(v) > 0;
        if (in_cod && fiber[v] == 0) rep.surjective = false;
        if (!in_cod && fiber[v] != 0) rep.surjective = false;
        if (in_cod && fiber[v] != nsub / codomain.size()) rep.uniform = false;
    }
    if (rep.uniform) rep.fiber_size = nsub / rep.codomain_size;
    std::set<u32> coset_set(coset.begin(), coset.end());
    rep.odd_image_is_coset = true;
    rep.odd_fiber_size = nsub / (2 * m);  // 2^{2^k - k - 1}
    for (u32 v = 0; v < (1u << (2 * k)); ++v) {
        const bool in_coset = coset_set.count(v) > 0;
        if (in_coset && odd_fiber[v] != rep.odd_fiber_size) rep.odd_image_is_coset = false;
        if (!in_coset && odd_fiber[v] != 0) rep.odd_image_is_coset = false;
    }
    rep.ok = rep.surjective && rep.uniform && rep.odd_image_is_coset;
    return rep;
}

} // namespace hasseq
