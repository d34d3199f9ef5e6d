#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "hasseq/arith.hpp"

namespace hasseq {

// Primitive integral binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
    i64 a = 0, b = 0, c = 0;
    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm& f, const QuadForm& g) {
        return std::tie(f.a, f.b, f.c) <=> std::tie(g.a, g.b, g.c);
    }
};

// Narrow (form) class group of a positive non-square discriminant, with the
// reduced forms partitioned into reduction cycles, one per class.
struct IndefiniteFormClassGroup {
    u64 discriminant = 0;
    std::vector<std::vector<QuadForm>> cycles;
    std::vector<u64> elementary_divisors;  // d1 | d2 | ..., product = #cycles
    std::size_t identity = 0;              // cycle index of the principal class

    u64 class_number() const { return cycles.size(); }
};

namespace bqf_detail {

struct ExtGcd {
    i64 g, u, v;  // u*a + v*b = g >= 0
};

inline ExtGcd extgcd(i64 a, i64 b) {
    i64 old_r = a, r = b, old_u = 1, u = 0, old_v = 0, v = 1;
    while (r != 0) {
        const i64 q = old_r / r;
        old_r -= q * r; std::swap(old_r, r);
        old_u -= q * u; std::swap(old_u, u);
        old_v -= q * v; std::swap(old_v, v);
    }
    if (old_r < 0) { old_r = -old_r; old_u = -old_u; old_v = -old_v; }
    return {old_r, old_u, old_v};
}

inline i64 pos_mod(i64 a, i64 m) {
    const i64 r = a % m;
    return r < 0 ? r + m : r;
}

struct Ctx {
    u64 D;
    u64 root;  // isqrt(D)
};

inline bool is_reduced(const Ctx& cx, const QuadForm& f) {
    // |sqrt(D) - 2|a|| < b < sqrt(D), exact integer comparisons
    if (f.b <= 0) return false;
    const u64 b = static_cast<u64>(f.b);
    if ((u128)b * b >= cx.D) return false;
    const u64 twoa = 2 * static_cast<u64>(f.a < 0 ? -f.a : f.a);
    if ((u128)(twoa + b) * (twoa + b) <= cx.D) return false;  // need sqrt(D) < 2|a| + b
    if (twoa > b && (u128)(twoa - b) * (twoa - b) >= cx.D) return false;  // need 2|a| - b < sqrt(D)
    return true;
}

// Reduction step: (a,b,c) -> (c, r, (r^2 - D)/(4c)) with r = -b mod 2|c|
// placed in the standard window. Intermediates may exceed 64 bits before
// the form shrinks, so products go through 128-bit arithmetic.
inline QuadForm rho(const Ctx& cx, const QuadForm& f) {
    const i64 c = f.c;
    const i64 absc = c < 0 ? -c : c;
    i64 r;
    if ((u128)absc * absc > cx.D) {
        r = pos_mod(-f.b, 2 * absc);
        if (r > absc) r -= 2 * absc;
    } else {
        // unique r = -b (mod 2|c|) in (sqrt(D) - 2|c|, sqrt(D))
        r = static_cast<i64>(cx.root) - pos_mod(static_cast<i64>(cx.root) + f.b, 2 * absc);
    }
    const __int128 c2 = ((__int128)r * r - static_cast<i64>(cx.D)) / (4 * (__int128)c);
    return {c, r, static_cast<i64>(c2)};
}

inline QuadForm reduce(const Ctx& cx, QuadForm f) {
    for (int i = 0; i < 100000; ++i) {
        if (is_reduced(cx, f)) return f;
        f = rho(cx, f);
    }
    throw internal_error("bqf: reduction did not terminate");
}

inline i64 eval(const QuadForm& f, i64 x, i64 y) {
    return f.a * x * x + f.b * x * y + f.c * y * y;
}

// Proper equivalence transform by [[x, r],[y, s]] with x s - y r = 1.
inline QuadForm transform(const QuadForm& f, i64 x, i64 y, i64 r, i64 s) {
    QuadForm g;
    g.a = eval(f, x, y);
    g.c = eval(f, r, s);
    g.b = 2 * f.a * x * r + f.b * (x * s + y * r) + 2 * f.c * y * s;
    return g;
}

// Gauss composition via concordant forms: bring f2 to a leading coefficient
// coprime to f1.a, align the middle coefficients by CRT, multiply.
inline QuadForm compose(const Ctx& cx, const QuadForm& f1, const QuadForm& f2) {
    const i64 a1 = f1.a;
    const i64 abs_a1 = a1 < 0 ? -a1 : a1;
    // find primitive (x,y) with f2(x,y) nonzero and coprime to a1
    i64 fx = 0, fy = 0, v = 0;
    bool found = false;
    for (i64 radius = 1; radius <= 4 * abs_a1 + 4 && !found; ++radius) {
        for (i64 x = -radius; x <= radius && !found; ++x) {
            for (i64 y = -radius; y <= radius && !found; ++y) {
                if (std::max(x < 0 ? -x : x, y < 0 ? -y : y) != radius) continue;
                if (std::gcd(x, y) != 1) continue;
                const i64 val = eval(f2, x, y);
                if (val != 0 && std::gcd(val < 0 ? -val : val, abs_a1) == 1) {
                    fx = x; fy = y; v = val;
                    found = true;
                }
            }
        }
    }
    if (!found) throw internal_error("bqf: no representation coprime to a1");
    const auto e = extgcd(fx, fy);  // e.u*fx + e.v*fy = 1
    const QuadForm g2 = transform(f2, fx, fy, -e.v, e.u);
    // B = b1 (mod 2|a1|), B = g2.b (mod 2|v|); gcd(a1, v) = 1
    const i64 abs_v = v < 0 ? -v : v;
    i64 B;
    if (abs_v == 1) {
        B = f1.b;
    } else {
        const i64 half_diff = (g2.b - f1.b) / 2;
        const auto inv = extgcd(pos_mod(abs_a1, abs_v), abs_v);
        const i64 t = pos_mod(half_diff % abs_v * (inv.u % abs_v), abs_v);
        B = f1.b + 2 * abs_a1 * t;
    }
    const i64 a3 = a1 * v;
    const __int128 num = (__int128)B * B - static_cast<i64>(cx.D);
    if (num % (4 * (__int128)a3) != 0) throw internal_error("bqf: concordance failed");
    return reduce(cx, QuadForm{a3, B, static_cast<i64>(num / (4 * (__int128)a3))});
}

} // namespace bqf_detail

// Enumerate every reduced form of the discriminant.
inline std::vector<QuadForm> reduced_forms(u64 disc) {
    const u64 root = isqrt(disc);
    if (root * root == disc || disc < 5)
        throw std::invalid_argument("reduced_forms: discriminant must be positive non-square");
    if (disc % 4 == 2 || disc % 4 == 3)
        throw std::invalid_argument("reduced_forms: discriminant must be 0 or 1 mod 4");
    std::vector<QuadForm> forms;
    for (u64 b = (disc % 2 == 0) ? 2 : 1; b <= root; b += 2) {
        const u64 M = (disc - b * b) / 4;  // = |a| * |c|
        for (u64 u = 1; u * u <= M; ++u) {
            if (M % u != 0) continue;
            for (u64 absa : {u, M / u}) {
                const u64 twoa = 2 * absa;
                // reduced iff sqrt(D) - b < 2|a| < sqrt(D) + b
                if ((u128)(twoa + b) * (twoa + b) <= disc) continue;
                if (twoa > b && (u128)(twoa - b) * (twoa - b) >= disc) continue;
                const i64 a = static_cast<i64>(absa);
                const i64 cc = -static_cast<i64>(M / absa);
                if (std::gcd(std::gcd(a, static_cast<i64>(b)), cc) != 1) continue;
                forms.push_back({a, static_cast<i64>(b), cc});
                forms.push_back({-a, static_cast<i64>(b), -cc});
                if (u == M / u) break;
            }
        }
    }
    std::sort(forms.begin(), forms.end());
    return forms;
}

inline IndefiniteFormClassGroup bqf_class_group(u64 disc, u64 max_disc = 1'000'000) {
    if (disc > max_disc)
        throw std::invalid_argument("bqf_class_group: discriminant exceeds configured bound");
    IndefiniteFormClassGroup grp;
    grp.discriminant = disc;
    const bqf_detail::Ctx cx{disc, isqrt(disc)};
    const auto forms = reduced_forms(disc);

    std::map<QuadForm, std::size_t> cycle_of;
    for (const auto& f : forms) {
        if (cycle_of.count(f)) continue;
        std::vector<QuadForm> cycle;
        QuadForm g = f;
        do {
            cycle_of[g] = grp.cycles.size();
            cycle.push_back(g);
            g = bqf_detail::rho(cx, g);
            if (!bqf_detail::is_reduced(cx, g))
                throw internal_error("bqf: rho left the reduced set");
        } while (g != f);
        grp.cycles.push_back(std::move(cycle));
    }
    const std::size_t h = grp.cycles.size();

    auto class_of = [&](const QuadForm& f) {
        const auto it = cycle_of.find(bqf_detail::reduce(cx, f));
        if (it == cycle_of.end()) throw internal_error("bqf: reduced form missing from cycles");
        return it->second;
    };

    // principal form (1, b0, (b0^2 - D)/4) with the largest b0 <= sqrt(D) of
    // the discriminant's parity
    i64 b0 = static_cast<i64>(cx.root);
    if ((static_cast<u64>(b0) & 1) != (disc & 1)) --b0;
    const QuadForm principal{1, b0, (b0 * b0 - static_cast<i64>(disc)) / 4};
    grp.identity = class_of(principal);

    std::vector<std::vector<std::size_t>> comp_cache(h);
    auto compose_classes = [&](std::size_t i, std::size_t j) {
        if (comp_cache[i].empty()) comp_cache[i].assign(h, h);
        if (comp_cache[i][j] == h) {
            const auto r = class_of(bqf_detail::compose(cx, grp.cycles[i][0], grp.cycles[j][0]));
            comp_cache[i][j] = r;
            if (comp_cache[j].empty()) comp_cache[j].assign(h, h);
            comp_cache[j][i] = r;  // composition is commutative
        }
        return comp_cache[i][j];
    };
    auto class_pow = [&](std::size_t g, u64 e) {
        std::size_t acc = grp.identity, base = g;
        while (e) {
            if (e & 1) acc = compose_classes(acc, base);
            base = compose_classes(base, base);
            e >>= 1;
        }
        return acc;
    };

    // Elementary divisors from the counts of p^j-torsion elements.
    const auto hfac = factor(h);
    std::vector<std::vector<unsigned>> exps_by_prime;  // descending exponent lists
    for (std::size_t pi = 0; pi < hfac.primes.size(); ++pi) {
        const u64 p = hfac.primes[pi];
        const unsigned e_max = hfac.exponents[pi];
        std::vector<unsigned> log_counts(e_max + 1, 0);  // log_p #{x : x^(p^j) = id}
        for (unsigned j = 1; j <= e_max; ++j) {
            u64 pj = 1;
            for (unsigned t = 0; t < j; ++t) pj *= p;
            u64 cnt = 0;
            for (std::size_t g = 0; g < h; ++g)
                if (class_pow(g, pj) == grp.identity) ++cnt;
            unsigned lg = 0;
            for (u64 v = cnt; v > 1; v /= p) ++lg;
            u64 check = 1;
            for (unsigned t = 0; t < lg; ++t) check *= p;
            if (check != cnt) throw internal_error("bqf: torsion count not a power of p");
            log_counts[j] = lg;
        }
        std::vector<unsigned> exps;
        for (unsigned j = 1; j <= e_max; ++j) {
            const unsigned at_least_j = log_counts[j] - log_counts[j - 1];
            exps.resize(std::max<std::size_t>(exps.size(), at_least_j), 0);
            for (unsigned t = 0; t < at_least_j; ++t) exps[t] = j;
        }
        exps_by_prime.push_back(std::move(exps));
    }
    std::size_t nfactors = 0;
    for (const auto& v : exps_by_prime) nfactors = std::max(nfactors, v.size());
    std::vector<u64> divisors(nfactors, 1);
    for (std::size_t pi = 0; pi < hfac.primes.size(); ++pi) {
        const auto& exps = exps_by_prime[pi];
        for (std::size_t t = 0; t < exps.size(); ++t) {
            u64 q = 1;
            for (unsigned j = 0; j < exps[t]; ++j) q *= hfac.primes[pi];
            divisors[t] *= q;  // exps descending: largest factors align
        }
    }
    std::sort(divisors.begin(), divisors.end());
    u64 prod = 1;
    for (u64 dv : divisors) prod *= dv;
    if (prod != h) throw internal_error("bqf: divisor product mismatch");
    grp.elementary_divisors = std::move(divisors);
    return grp;
}

} // namespace hasseq
