#pragma once

// Batch orchestration: cases -> sieve -> local battery -> optional descent
// checks -> bounded fallback search, over a worker pool with deterministic
// output and resumable checkpoints.
//
// The work unit is one (case_id, r) pair; all exponents p for that pair are
// processed inside the unit. Units are indexed in a fixed order, workers
// pull indices from an atomic counter, and results commit in contiguous
// prefix order, so a run interrupted anywhere resumes into a byte-identical
// final report, for any thread count.

#include "fivecubes/arith.hpp"
#include "fivecubes/bounds.hpp"
#include "fivecubes/cases.hpp"
#include "fivecubes/checkpoint.hpp"
#include "fivecubes/localsolv.hpp"
#include "fivecubes/oracle.hpp"
#include "fivecubes/report.hpp"
#include "fivecubes/selmer.hpp"
#include "fivecubes/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace fivecubes::sweep {

class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// cooperative interruption: SIGINT handlers or tests flip `stop`;
// stop_after_units > 0 simulates an interruption after that many fresh units
struct StopControl {
    std::atomic<bool> stop{false};
    long stop_after_units = -1;
};

struct SweepOutcome {
    bool completed = false;
    SweepReport report;     // meaningful when completed
    Checkpoint checkpoint;  // always valid; covers the committed prefix
};

namespace detail {

struct Unit {
    int case_id;
    int64_t r;
};

using DescentIndex = std::map<std::tuple<int, unsigned, int64_t>, std::vector<selmer::DescentDatum>>;

inline std::vector<unsigned> primes_for_case(const SweepConfig& cfg, int case_id) {
    std::vector<unsigned> ps;
    if (cfg.p_policy == PPolicy::explicit_list) {
        ps = cfg.p_list;
    } else {
        const auto rep = bounds::bounds_table()[size_t(case_id - 1)];
        for (uint32_t q : arith::primes_up_to(uint32_t(rep.p_max)))
            if (q >= 5) ps.push_back(q);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (unsigned p : ps)
        if (p < 5 || !arith::is_prime(p))
            throw std::invalid_argument("sweep: p values must be primes >= 5");
    return ps;
}

// whether a final survivor of (case, p) sits on the genus-2 boundary that
// sieving cannot settle
inline bool needs_curve_methods(int case_id, unsigned p) {
    return p == 5 && (case_id == 2 || case_id == 3 || case_id == 4 || case_id == 5 || case_id == 8);
}

inline Row process_instance(const SweepConfig& cfg, const DescentIndex& descent,
                            int case_id, unsigned p, int64_t r) {
    Row row;
    row.case_id = case_id;
    row.p = p;
    row.r = r;

    const auto inst = cases::instantiate(case_id, p, r);
    const auto verdict = sieve::run_sieve(inst, {cfg.k_max, true});
    row.checked_count = verdict.checked_count;
    if (verdict.status == sieve::Status::eliminated) {
        row.stage = kStageSieve;
        row.verdict = "eliminated";
        row.witness_q = std::to_string(*verdict.witness_q);
        row.k_used = verdict.k_used;
        if (cfg.audit && oracle::residue_audit(inst, *verdict.witness_q)) {
            std::ostringstream msg;
            msg << "audit: case " << case_id << " p=" << p << " r=" << r
                << " eliminated with witness q=" << *verdict.witness_q
                << " but the equation has solutions mod q";
            throw AuditFailure(msg.str());
        }
        return row;
    }

    const auto red = localsolv::reduce(inst);
    if (auto witness = localsolv::run_local_battery(red)) {
        row.stage = kStageLocal;
        row.verdict = "eliminated";
        row.witness_q = witness->get_str();
        return row;
    }

    auto it = descent.find({case_id, p, r});
    if (it != descent.end() && !it->second.empty()) {
        bool all_ruled_out = true;
        uint64_t last_q = 0;
        for (const auto& datum : it->second) {
            auto q = selmer::find_split_witness(datum, cfg.k_max);
            if (!q) {
                all_ruled_out = false;
                break;
            }
            last_q = *q;
        }
        if (all_ruled_out) {
            row.stage = kStageDescent;
            row.verdict = "eliminated";
            row.witness_q = std::to_string(last_q);
            return row;
        }
    }

    row.verdict = "surviving";
    if (needs_curve_methods(case_id, p)) {
        row.stage = kStageNeedsCurve;
        return row;
    }

    // bounded fallback search over |w1| <= W, solving for w2 by integer
    // p-th root; only ever reported, never a proof of nonexistence
    row.stage = kStageFallback;
    std::ostringstream found;
    for (int64_t w1 = 0; w1 <= cfg.fallback_w; ++w1) {
        arith::Int w1pow;
        mpz_ui_pow_ui(w1pow.get_mpz_t(), uint64_t(w1), 2 * p);
        arith::Int t = red.B * w1pow + red.C;
        if (!mpz_divisible_p(t.get_mpz_t(), red.A.get_mpz_t())) continue;
        auto [root, exact] = arith::integer_root(t / red.A, p);
        if (!exact) continue;
        if (found.tellp() > 0) found << ' ';
        found << "(w1=" << (red.w1_divisor * w1).get_str()
              << ",w2=" << (red.w2_divisor * root).get_str() << ")";
    }
    row.note = found.str();
    return row;
}

} // namespace detail

inline std::vector<detail::Unit> plan_units(const SweepConfig& cfg) {
    if (cfg.r_min < 1 || cfg.r_max < cfg.r_min)
        throw std::invalid_argument("sweep: need 1 <= r_min <= r_max");
    if (cfg.k_max < 1) throw std::invalid_argument("sweep: k_max must be >= 1");
    if (cfg.threads < 1) throw std::invalid_argument("sweep: threads must be >= 1");
    std::vector<int> case_ids = cfg.case_ids;
    std::sort(case_ids.begin(), case_ids.end());
    case_ids.erase(std::unique(case_ids.begin(), case_ids.end()), case_ids.end());
    for (int c : case_ids) cases::descriptor(c); // validates range
    std::vector<detail::Unit> units;
    for (int c : case_ids)
        for (int64_t r = cfg.r_min; r <= cfg.r_max; ++r)
            if (!cases::vacuous_for(c, r)) units.push_back({c, r});
    return units;
}

inline SweepOutcome run_sweep(const SweepConfig& cfg, const Checkpoint* resume_from = nullptr,
                              StopControl* stop = nullptr) {
    const auto units = plan_units(cfg);

    std::map<int, std::vector<unsigned>> case_primes;
    for (int c : cfg.case_ids) case_primes.emplace(c, detail::primes_for_case(cfg, c));

    detail::DescentIndex descent;
    if (!cfg.descent_data_path.empty()) {
        for (auto& d : selmer::load_descent_file(cfg.descent_data_path))
            descent[{d.case_id, d.p, d.r}].push_back(d);
    }

    size_t start = 0;
    std::vector<std::vector<Row>> results(units.size());
    std::vector<char> done(units.size(), 0);
    if (resume_from) {
        if (resume_from->hash != config_hash(cfg))
            throw std::runtime_error("sweep: checkpoint was produced by a different config");
        if (resume_from->units_done > units.size())
            throw std::runtime_error("sweep: checkpoint ahead of plan");
        start = resume_from->units_done;
        // stash all prefix rows in slot 0; order is restored by the final sort
        if (start > 0) {
            results[0] = resume_from->rows;
            for (size_t i = 0; i < start; ++i) done[i] = 1;
        }
    }

    const size_t take_end = (stop && stop->stop_after_units >= 0)
        ? std::min(units.size(), start + size_t(stop->stop_after_units))
        : units.size();

    std::atomic<size_t> next{start};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            if (failed.load() || (stop && stop->stop.load())) return;
            const size_t i = next.fetch_add(1);
            if (i >= take_end) return;
            try {
                std::vector<Row> rows;
                const auto& unit = units[i];
                for (unsigned p : case_primes.at(unit.case_id))
                    rows.push_back(detail::process_instance(cfg, descent, unit.case_id, p, unit.r));
                results[i] = std::move(rows);
                done[i] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    {
        std::vector<std::thread> pool;
        const unsigned n = std::max(1u, cfg.threads);
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    size_t prefix = 0;
    while (prefix < units.size() && done[prefix]) ++prefix;

    SweepOutcome outcome;
    outcome.checkpoint.config = cfg;
    outcome.checkpoint.hash = config_hash(cfg);
    outcome.checkpoint.units_done = prefix;
    for (size_t i = 0; i < prefix; ++i)
        for (auto& row : results[i]) outcome.checkpoint.rows.push_back(std::move(row));
    std::sort(outcome.checkpoint.rows.begin(), outcome.checkpoint.rows.end(), row_order);

    if (!cfg.checkpoint_path.empty()) write_checkpoint(outcome.checkpoint, cfg.checkpoint_path);

    if (prefix == units.size()) {
        outcome.completed = true;
        outcome.report.rows = outcome.checkpoint.rows;
        outcome.report.config_echo = config_echo(cfg);
        outcome.report.k_max = cfg.k_max;
    }
    return outcome;
}

inline SweepOutcome resume(const std::string& checkpoint_path, unsigned threads = 1,
                           StopControl* stop = nullptr) {
    Checkpoint ckpt = load_checkpoint(checkpoint_path);
    SweepConfig cfg = ckpt.config;
    cfg.threads = threads;
    cfg.checkpoint_path = checkpoint_path;
    return run_sweep(cfg, &ckpt, stop);
}

} // namespace fivecubes::sweep
