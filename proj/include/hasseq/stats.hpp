#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hasseq/f2comb.hpp"
#include "hasseq/families.hpp"
#include "hasseq/fourrank.hpp"

namespace hasseq {

// eta_r(2) = prod_{j=1}^{r} (1 - 2^{-j})
inline double eta(unsigned r) {
    double v = 1.0;
    for (unsigned j = 1; j <= r; ++j) v *= 1.0 - std::ldexp(1.0, -static_cast<int>(j));
    return v;
}

// eta_infinity(2), truncated once the tail bound 2^{-j} drops below `precision`.
inline double eta_infinity(double precision = 1e-12) {
    if (precision <= 0) throw std::invalid_argument("eta_infinity: precision must be positive");
    double v = 1.0;
    for (unsigned j = 1; j <= 64; ++j) {
        const double q = std::ldexp(1.0, -static_cast<int>(j));
        v *= 1.0 - q;
        if (q < precision) break;
    }
    return v;
}

// Limiting probability of rk_4 = r: 2^{-r^2} eta_inf(2) / eta_r(2)^2.
inline double predicted_rank_probability(unsigned r) {
    const double er = eta(r);
    return std::ldexp(1.0, -static_cast<int>(r * r)) * eta_infinity() / (er * er);
}

struct MomentReport {
    u64 X = 0;
    unsigned k = 1;
    u64 S_value = 0;   // sum of 2^{k rk_4} over the census
    u64 A_value = 0;   // census size A(X; 3, 4)
    double ratio = 0;  // S/A
    u64 predicted = 0;  // N(k, 2), the limiting ratio
    int jobs = 1;
};

// S(X, k; 3, 4) over the census {2d in D_2 : d <= X/2, d = 3 mod 4}, summand
// 2^{k rk_4 Cl+(8d)} evaluated by the specialized divisor-sum formula.
inline MomentReport moment_survey(u64 X, unsigned k, int jobs = 1, const SieveConfig& cfg = {}) {
    if (k > 4) throw std::invalid_argument("moment_survey: k must be in [0,4]");
    MomentReport rep;
    rep.X = X;
    rep.k = k;
    rep.predicted = count_subspaces(k);
    rep.jobs = jobs;
    rep.A_value = a34_survey<u64>(
        X, jobs,
        [&](u64& s, const FactoredInteger& d) { s += 1ull << (k * fourrank_fk_special(d).rank); },
        [&](u64& s) { rep.S_value += s; }, cfg);
    rep.ratio = rep.A_value ? static_cast<double>(rep.S_value) / static_cast<double>(rep.A_value) : 0.0;
    return rep;
}

struct DistributionReport {
    u64 X = 0;
    unsigned r_max = 0;
    std::map<unsigned, u64> histogram;   // rank -> count over the census
    std::vector<double> predicted;       // predicted probability for r = 0..r_max
    u64 total = 0;                       // = A(X; 3, 4)
    int jobs = 1;
};

inline DistributionReport rank_distribution(u64 X, unsigned r_max, int jobs = 1,
                                            const SieveConfig& cfg = {}) {
    DistributionReport rep;
    rep.X = X;
    rep.r_max = r_max;
    rep.jobs = jobs;
    using Hist = std::map<unsigned, u64>;
    rep.total = a34_survey<Hist>(
        X, jobs,
        [](Hist& h, const FactoredInteger& d) { ++h[fourrank_fk_special(d).rank]; },
        [&](Hist& h) {
            for (const auto& [r, c] : h) rep.histogram[r] += c;
        },
        cfg);
    for (unsigned r = 0; r <= r_max; ++r) rep.predicted.push_back(predicted_rank_probability(r));
    return rep;
}

enum class ConstantMethod { COUNT_INVERSION, EULER_PRODUCT };

struct ConstantEstimate {
    FamilyTag family = FamilyTag::D2;  // D2 or DM2
    u64 X = 0;
    double estimate = 0;
    ConstantMethod method = ConstantMethod::COUNT_INVERSION;
};

namespace stats_detail {

inline u64 family_count(FamilyTag family, u64 X, int jobs, const SieveConfig& cfg) {
    const auto counts = census(X, static_cast<unsigned>(family), std::nullopt,
                               [](const CensusRecord&) {}, jobs, cfg);
    return family == FamilyTag::D2 ? counts.d2 : counts.dm2;
}

// C_{+-2} at s = 1 after factoring out sqrt((s-1) zeta(s)) -> 1:
//   C = (1/sqrt(pi)) * (3/2) * prod_{chi(p)=1} (1 - p^-2)
//       * sqrt( L(1,chi) * (1/2) * prod_{chi(p)=-1} (1 - p^-2) )
// where chi is the quadratic character attached to +-2 and the split
// products come from (1 + p^-s) = (1 - p^-2s) / (1 - p^-s).
inline double euler_product_constant(FamilyTag family) {
    const bool plus = family == FamilyTag::D2;
    // L(1, (2/.)) = log(1 + sqrt 2)/sqrt 2;  L(1, (-2/.)) = pi/(2 sqrt 2)
    const double L1 = plus ? std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0)
                           : std::acos(-1.0) / (2.0 * std::sqrt(2.0));
    const u32 cutoff = 2'000'000;
    double prod_split = 1.0, prod_inert = 1.0;
    for (u32 p : sieve_primes(cutoff)) {
        if (p == 2) continue;
        const u64 r = p % 8;
        const bool split = plus ? (r == 1 || r == 7) : (r == 1 || r == 3);
        const double term = 1.0 - 1.0 / (static_cast<double>(p) * p);
        (split ? prod_split : prod_inert) *= term;
    }
    return (1.0 / std::sqrt(std::acos(-1.0))) * 1.5 * prod_split *
           std::sqrt(L1 * 0.5 * prod_inert);
}

} // namespace stats_detail

// COUNT_INVERSION inverts |D_{+-2}(X)| ~ (2C/3) X / sqrt(log X);
// EULER_PRODUCT evaluates the defining limit directly.
inline ConstantEstimate estimate_constant(FamilyTag family, u64 X, ConstantMethod method,
                                          int jobs = 1, const SieveConfig& cfg = {}) {
    if (family != FamilyTag::D2 && family != FamilyTag::DM2)
        throw std::invalid_argument("estimate_constant: family must be D2 or DM2");
    ConstantEstimate est;
    est.family = family;
    est.X = X;
    est.method = method;
    if (method == ConstantMethod::COUNT_INVERSION) {
        if (X < 10'000)
            throw std::invalid_argument("estimate_constant: COUNT_INVERSION needs X >= 10^4");
        const u64 count = stats_detail::family_count(family, X, jobs, cfg);
        est.estimate = static_cast<double>(count) * 3.0 *
                       std::sqrt(std::log(static_cast<double>(X))) / (2.0 * static_cast<double>(X));
    } else {
        est.estimate = stats_detail::euler_product_constant(family);
    }
    return est;
}

struct TheoremBandReport {
    u64 X = 0;
    u64 sd_count = 0;
    double c1_hat = 0, c2_hat = 0;    // C2_hat/6 * eta_inf, 2(C2_hat + Cm2_hat)/3
    double lower = 0, upper = 0;      // c_hat * X / sqrt(log X)
    double scaled_count = 0;          // sd_count / (X / sqrt(log X))
    double c2_estimate = 0, cm2_estimate = 0;
    int jobs = 1;
};

// Counts S_D(X) (excluding d in {2,3}) and compares it against the band
// [c1 X/sqrt(log X), c2 X/sqrt(log X)] built from count-inversion estimates.
// One census pass collects all three family counts; the estimates coincide
// exactly with standalone estimate_constant calls at the same X.
inline TheoremBandReport sd_band_check(u64 X, int jobs = 1, const SieveConfig& cfg = {}) {
    if (X < 10'000) throw std::invalid_argument("sd_band_check: X must be >= 10^4");
    TheoremBandReport rep;
    rep.X = X;
    rep.jobs = jobs;
    const unsigned tags = FamilyTag::D2 | FamilyTag::DM2 | FamilyTag::SD;
    const auto counts = census(X, tags, std::nullopt, [](const CensusRecord&) {}, jobs, cfg);
    rep.sd_count = counts.sd;
    // identical expression to estimate_constant COUNT_INVERSION, so the
    // values agree bit for bit
    rep.c2_estimate = static_cast<double>(counts.d2) * 3.0 *
                      std::sqrt(std::log(static_cast<double>(X))) / (2.0 * static_cast<double>(X));
    rep.cm2_estimate = static_cast<double>(counts.dm2) * 3.0 *
                       std::sqrt(std::log(static_cast<double>(X))) / (2.0 * static_cast<double>(X));
    rep.c1_hat = rep.c2_estimate / 6.0 * eta_infinity();
    rep.c2_hat = 2.0 * (rep.c2_estimate + rep.cm2_estimate) / 3.0;
    const double scale = static_cast<double>(X) / std::sqrt(std::log(static_cast<double>(X)));
    rep.lower = rep.c1_hat * scale;
    rep.upper = rep.c2_hat * scale;
    rep.scaled_count = static_cast<double>(rep.sd_count) / scale;
    return rep;
}

} // namespace hasseq
