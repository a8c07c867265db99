#pragma once

// Sweep result rows and the two report renderings: a machine CSV with the
// fixed column set case,p,r,stage,verdict,witness_q,k_used,checked_count,
// and an aligned per-(case, p) summary table for humans.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fivecubes::sweep {

// Stage vocabulary. For eliminated rows the stage that produced the
// witness; for survivors the last stage that ran.
inline constexpr const char* kStageSieve = "sieve";
inline constexpr const char* kStageLocal = "local";
inline constexpr const char* kStageDescent = "descent";
inline constexpr const char* kStageFallback = "fallback-searched";
inline constexpr const char* kStageNeedsCurve = "needs-curve-methods";

struct Row {
    int case_id = 0;
    unsigned p = 0;
    int64_t r = 0;
    std::string stage;
    std::string verdict; // "eliminated" | "surviving"
    std::string witness_q; // decimal, empty when none
    std::optional<unsigned> k_used;
    unsigned checked_count = 0;
    std::string note; // free-form, table only, never in the CSV

    bool eliminated() const { return verdict == "eliminated"; }
};

inline bool row_order(const Row& a, const Row& b) {
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    if (a.p != b.p) return a.p < b.p;
    return a.r < b.r;
}

struct SweepReport {
    std::vector<Row> rows; // sorted by (case, p, r)
    std::string config_echo; // canonical config JSON
    unsigned k_max = 0;
};

inline void emit_csv(const SweepReport& report, std::ostream& os) {
    os << "case,p,r,stage,verdict,witness_q,k_used,checked_count\n";
    for (const Row& row : report.rows) {
        os << row.case_id << ',' << row.p << ',' << row.r << ',' << row.stage << ','
           << row.verdict << ',' << row.witness_q << ',';
        if (row.k_used) os << *row.k_used;
        os << ',' << row.checked_count << '\n';
    }
}

struct CasePrimeSummary {
    int case_id = 0;
    unsigned p = 0;
    long instances = 0;
    long surviving_sieve = 0;
    long surviving_local = 0;
    long surviving_descent = 0;
    long needs_curve = 0;
    struct SurvivorRef {
        int64_t r;
        std::string stage;
        std::string note;
    };
    std::vector<SurvivorRef> survivors;
};

inline std::vector<CasePrimeSummary> summarize(const SweepReport& report) {
    std::map<std::pair<int, unsigned>, CasePrimeSummary> acc;
    for (const Row& row : report.rows) {
        auto& s = acc[{row.case_id, row.p}];
        s.case_id = row.case_id;
        s.p = row.p;
        ++s.instances;
        if (row.stage == kStageSieve && row.eliminated()) continue;
        ++s.surviving_sieve;
        if (row.stage == kStageLocal && row.eliminated()) continue;
        ++s.surviving_local;
        if (row.stage == kStageDescent && row.eliminated()) continue;
        ++s.surviving_descent;
        if (row.stage == kStageNeedsCurve) ++s.needs_curve;
        s.survivors.push_back({row.r, row.stage, row.note});
    }
    std::vector<CasePrimeSummary> out;
    out.reserve(acc.size());
    for (auto& [key, s] : acc) out.push_back(std::move(s));
    return out;
}

inline void emit_table(const SweepReport& report, std::ostream& os) {
    auto summaries = summarize(report);
    os << "case  p      instances  surv.sieve  surv.local  surv.descent\n";
    os << "----  -----  ---------  ----------  ----------  ------------\n";
    char buf[128];
    for (const auto& s : summaries) {
        std::snprintf(buf, sizeof buf, "%4d  %5u  %9ld  %10ld  %10ld  %12ld\n",
                      s.case_id, s.p, s.instances, s.surviving_sieve, s.surviving_local,
                      s.surviving_descent);
        os << buf;
        if (!s.survivors.empty()) {
            os << "      survivors:";
            size_t shown = 0;
            for (const auto& sv : s.survivors) {
                if (shown == 12) {
                    os << " ... +" << (s.survivors.size() - shown) << " more";
                    break;
                }
                os << " r=" << sv.r << '(' << sv.stage;
                if (!sv.note.empty()) os << "; " << sv.note;
                os << ')';
                ++shown;
            }
            os << '\n';
        }
    }
    os << "\nStage order: sieve -> local solubility -> descent (when data supplied)\n"
          "-> bounded fallback search. Survivor counts depend on the sieve budget\n"
          "(k_max=" << report.k_max << " here); rows record checked_count so runs with\n"
          "different budgets stay comparable. A bounded fallback search is not a\n"
          "proof of nonexistence; 'needs-curve-methods' marks p=5 instances whose\n"
          "resolution requires genus-2 curve machinery outside this tool.\n";
}

} // namespace fivecubes::sweep
