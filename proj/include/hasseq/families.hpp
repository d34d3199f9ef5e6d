#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hasseq/arith.hpp"
#include "hasseq/exec.hpp"
#include "hasseq/pell.hpp"

namespace hasseq {

enum class FamilyTag : unsigned { D2 = 1, DM2 = 2, SD = 4 };

inline unsigned operator|(FamilyTag a, FamilyTag b) {
    return static_cast<unsigned>(a) | static_cast<unsigned>(b);
}
inline unsigned operator|(unsigned a, FamilyTag b) { return a | static_cast<unsigned>(b); }
inline bool has_tag(unsigned mask, FamilyTag t) { return mask & static_cast<unsigned>(t); }

// d in D_2: squarefree, > 1, != 1 mod 4, every odd prime p | d has (2/p) = 1,
// i.e. p = +-1 mod 8. The prime 2 imposes no condition.
inline bool in_D2(const FactoredInteger& n) {
    if (n.value < 2 || !n.squarefree() || n.value % 4 == 1) return false;
    for (u64 p : n.primes) {
        if (p == 2) continue;
        const u64 r = p % 8;
        if (r != 1 && r != 7) return false;
    }
    return true;
}

// d in D_-2: as above with (-2/p) = 1, i.e. p = 1 or 3 mod 8.
inline bool in_DM2(const FactoredInteger& n) {
    if (n.value < 2 || !n.squarefree() || n.value % 4 == 1) return false;
    for (u64 p : n.primes) {
        if (p == 2) continue;
        const u64 r = p % 8;
        if (r != 1 && r != 3) return false;
    }
    return true;
}

// d in S_D: Q(Q(sqrt(d), i)) = 2. Propagates the torsion error for d in {2,3}.
inline bool in_SD(const FactoredInteger& d) { return hasse_unit_index(d) == 2; }

struct CensusRecord {
    FactoredInteger d;      // the enumerated census value
    unsigned memberships;   // FamilyTag mask, restricted to evaluated tags
    int residue_mod8;
};

struct ResidueFilter {
    int r = 3;
    int m = 4;  // supported moduli: 4 and 8
};

struct CensusCounts {
    u64 X = 0;
    unsigned tags = 0;                    // which memberships were evaluated
    std::optional<ResidueFilter> filter;  // membership evaluated at 2d when set
    u64 scanned = 0;
    u64 d2 = 0, dm2 = 0, sd = 0;
    u64 sd_excluded = 0;   // d in {2,3}: torsion exception, never counted in SD
    std::string note;
    int jobs = 1;
};

namespace detail {

inline unsigned census_memberships(const FactoredInteger& n, unsigned tags) {
    unsigned m = 0;
    if (has_tag(tags, FamilyTag::D2) && in_D2(n)) m = m | FamilyTag::D2;
    if (has_tag(tags, FamilyTag::DM2) && in_DM2(n)) m = m | FamilyTag::DM2;
    if (has_tag(tags, FamilyTag::SD) && n.value > 3 && in_SD(n)) m = m | FamilyTag::SD;
    return m;
}

inline FactoredInteger doubled(const FactoredInteger& d) {
    FactoredInteger two_d;
    two_d.value = 2 * d.value;
    two_d.primes.reserve(d.primes.size() + 1);
    two_d.exponents.assign(d.primes.size() + 1, 1);
    two_d.primes.push_back(2);
    two_d.primes.insert(two_d.primes.end(), d.primes.begin(), d.primes.end());
    return two_d;
}

} // namespace detail

// Enumerates the census in ascending order of d, calling `emit` for every
// record with at least one requested membership. Without a filter, records
// range over squarefree 2 <= n <= X and memberships are evaluated at n.
// With a filter (r mod m), records range over odd squarefree d <= X/2 with
// d = r mod m, and memberships are evaluated at 2d; this realizes counts of
// the shape |{2d in D_2 : d <= X/2, d = r mod m}|.
inline CensusCounts census(u64 X, unsigned tags, std::optional<ResidueFilter> filter,
                           const std::function<void(const CensusRecord&)>& emit,
                           int jobs = 1, const SieveConfig& cfg = {}) {
    if (X < 2) throw std::invalid_argument("census: X must be >= 2");
    if (tags == 0) throw std::invalid_argument("census: no family tags requested");
    if (filter) {
        if ((filter->m != 4 && filter->m != 8) || filter->r < 0 || filter->r >= filter->m ||
            filter->r % 2 == 0)
            throw std::invalid_argument("census: residue filter must be odd r mod 4 or mod 8");
    }
    const u64 hi = filter ? X / 2 : X;
    const u64 lo = filter ? 1 : 2;
    CensusCounts counts;
    counts.X = X;
    counts.tags = tags;
    counts.filter = filter;
    counts.jobs = jobs;
    if (hi < lo) return counts;
    if (hi > cfg.max_hi) throw std::invalid_argument("census: X exceeds sieve bound");
    const auto sieve = sieve_primes(static_cast<u32>(isqrt(hi)));

    struct Block {
        u64 scanned = 0, d2 = 0, dm2 = 0, sd = 0, sd_excluded = 0;
        std::vector<CensusRecord> rows;
    };
    run_blocks<Block>(
        lo, hi, cfg.segment_size, jobs,
        [&](u64 blo, u64 bhi) {
            Block blk;
            squarefree_range_segment(blo, bhi, sieve, [&](const FactoredInteger& f) {
                if (filter && (f.value % 2 == 0 ||
                               f.value % static_cast<u64>(filter->m) != static_cast<u64>(filter->r)))
                    return;
                ++blk.scanned;
                const FactoredInteger& probe = filter ? detail::doubled(f) : f;
                if (has_tag(tags, FamilyTag::SD) && probe.value <= 3) ++blk.sd_excluded;
                const unsigned m = detail::census_memberships(probe, tags);
                if (has_tag(m, FamilyTag::D2)) ++blk.d2;
                if (has_tag(m, FamilyTag::DM2)) ++blk.dm2;
                if (has_tag(m, FamilyTag::SD)) ++blk.sd;
                if (m) blk.rows.push_back({f, m, static_cast<int>(f.value % 8)});
            });
            return blk;
        },
        [&](Block& blk) {
            counts.scanned += blk.scanned;
            counts.d2 += blk.d2;
            counts.dm2 += blk.dm2;
            counts.sd += blk.sd;
            counts.sd_excluded += blk.sd_excluded;
            for (const auto& r : blk.rows) emit(r);
        });
    if (has_tag(tags, FamilyTag::SD))
        counts.note = "S_D membership is undefined for d in {2,3} (|T_L| > 4); "
                      "such d are excluded from the S_D count";
    return counts;
}

// Membership in the census behind A(X; 3, 4): odd squarefree d with
// d = 3 mod 4 and every prime factor = +-1 mod 8 (equivalently 2d in D_2).
inline bool a34_member(const FactoredInteger& f) {
    if (f.value % 4 != 3 || !f.squarefree()) return false;
    for (u64 p : f.primes) {
        const u64 r = p % 8;
        if (r != 1 && r != 7) return false;
    }
    return true;
}

// Runs `fold` over the A(X;3,4) census members (d <= X/2, ascending blocks)
// on worker threads, combining per-block results of type R in block order
// via `combine`. Returns the census size.
template <typename R, typename Fold, typename Combine>
inline u64 a34_survey(u64 X, int jobs, Fold&& fold, Combine&& combine,
                      const SieveConfig& cfg = {}) {
    if (X < 2) throw std::invalid_argument("a34_survey: X must be >= 2");
    const u64 hi = X / 2;
    if (hi < 3) return 0;
    if (hi > cfg.max_hi) throw std::invalid_argument("a34_survey: X exceeds sieve bound");
    const auto sieve = sieve_primes(static_cast<u32>(isqrt(hi)));
    struct Block {
        u64 count = 0;
        R value{};
    };
    u64 total = 0;
    run_blocks<Block>(
        3, hi, cfg.segment_size, jobs,
        [&](u64 blo, u64 bhi) {
            Block blk;
            squarefree_range_segment(blo, bhi, sieve, [&](const FactoredInteger& f) {
                if (!a34_member(f)) return;
                ++blk.count;
                fold(blk.value, f);
            });
            return blk;
        },
        [&](Block& blk) {
            total += blk.count;
            combine(blk.value);
        });
    return total;
}

// Streams the A(X; 3, 4) census members in ascending order.
inline u64 for_each_a34(u64 X, int jobs, const std::function<void(const FactoredInteger&)>& emit,
                        const SieveConfig& cfg = {}) {
    return a34_survey<std::vector<FactoredInteger>>(
        X, jobs,
        [](std::vector<FactoredInteger>& rows, const FactoredInteger& f) { rows.push_back(f); },
        [&](std::vector<FactoredInteger>& rows) {
            for (const auto& f : rows) emit(f);
        },
        cfg);
}

} // namespace hasseq
