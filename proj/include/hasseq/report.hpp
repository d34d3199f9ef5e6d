#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "hasseq/families.hpp"
#include "hasseq/fourrank.hpp"
#include "hasseq/pell.hpp"
#include "hasseq/stats.hpp"

namespace hasseq {

using json = nlohmann::json;

// Locale-independent full-precision doubles for diffable artifacts.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* family_name(FamilyTag t) {
    switch (t) {
        case FamilyTag::D2: return "d2";
        case FamilyTag::DM2: return "dm2";
        case FamilyTag::SD: return "sd";
    }
    return "?";
}

inline json to_json(const FourRankReport& r) {
    return json{{"d", r.d},
                {"discriminant", r.discriminant},
                {"method", to_string(r.method)},
                {"power", r.power},
                {"rank", r.rank}};
}

inline json to_json(const MomentReport& r) {
    return json{{"X", r.X},         {"k", r.k},
                {"S_value", r.S_value}, {"A_value", r.A_value},
                {"ratio", r.ratio}, {"predicted", r.predicted}};
}

inline json to_json(const DistributionReport& r) {
    json hist = json::object();
    for (const auto& [rank, count] : r.histogram) hist[std::to_string(rank)] = count;
    json pred = json::array();
    for (double p : r.predicted) pred.push_back(p);
    return json{{"X", r.X},       {"r_max", r.r_max}, {"histogram", hist},
                {"predicted", pred}, {"total", r.total}};
}

inline json to_json(const ConstantEstimate& r) {
    return json{{"family", family_name(r.family)},
                {"X", r.X},
                {"estimate", r.estimate},
                {"method", r.method == ConstantMethod::COUNT_INVERSION ? "count" : "euler"}};
}

inline json to_json(const TheoremBandReport& r) {
    return json{{"X", r.X},
                {"sd_count", r.sd_count},
                {"c1_hat", r.c1_hat},
                {"c2_hat", r.c2_hat},
                {"lower", r.lower},
                {"upper", r.upper},
                {"scaled_count", r.scaled_count},
                {"c2_estimate", r.c2_estimate},
                {"cm2_estimate", r.cm2_estimate}};
}

inline json to_json(const CensusCounts& c) {
    json j{{"X", c.X}, {"scanned", c.scanned}};
    if (has_tag(c.tags, FamilyTag::D2)) j["count_d2"] = c.d2;
    if (has_tag(c.tags, FamilyTag::DM2)) j["count_dm2"] = c.dm2;
    if (has_tag(c.tags, FamilyTag::SD)) {
        j["count_sd"] = c.sd;
        j["sd_excluded"] = c.sd_excluded;
        j["note"] = c.note;
    }
    if (c.filter) j["filter"] = std::to_string(c.filter->r) + ":" + std::to_string(c.filter->m);
    return j;
}

inline const char* census_csv_header() { return "d,omega,mod8,in_d2,in_dm2,in_sd\n"; }

inline void census_csv_row(std::string& out, const CensusRecord& r) {
    out += std::to_string(r.d.value);
    out += ',';
    out += std::to_string(r.d.omega());
    out += ',';
    out += std::to_string(r.residue_mod8);
    out += ',';
    out += has_tag(r.memberships, FamilyTag::D2) ? '1' : '0';
    out += ',';
    out += has_tag(r.memberships, FamilyTag::DM2) ? '1' : '0';
    out += ',';
    out += has_tag(r.memberships, FamilyTag::SD) ? '1' : '0';
    out += '\n';
}

inline const char* distribution_csv_header() { return "r,count,predicted_probability\n"; }

inline std::string distribution_csv(const DistributionReport& r) {
    std::string out = distribution_csv_header();
    for (unsigned rank = 0; rank <= r.r_max; ++rank) {
        const auto it = r.histogram.find(rank);
        const u64 count = it == r.histogram.end() ? 0 : it->second;
        out += std::to_string(rank);
        out += ',';
        out += std::to_string(count);
        out += ',';
        out += fmt_double(r.predicted[rank]);
        out += '\n';
    }
    return out;
}

inline const char* fourrank_csv_header() { return "d,omega,rank_fk,rank_oracle,agree\n"; }

inline void fourrank_csv_row(std::string& out, u64 d, unsigned omega, unsigned rank_fk,
                             int rank_oracle /* -1 when not computed */) {
    out += std::to_string(d);
    out += ',';
    out += std::to_string(omega);
    out += ',';
    out += std::to_string(rank_fk);
    out += ',';
    if (rank_oracle >= 0) {
        out += std::to_string(rank_oracle);
        out += ',';
        out += (static_cast<int>(rank_fk) == rank_oracle) ? '1' : '0';
    } else {
        out += ",";
    }
    out += '\n';
}

} // namespace hasseq
