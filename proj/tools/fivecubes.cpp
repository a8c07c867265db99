// Command-line driver: exponent bounds, elimination sweeps with resumable
// checkpoints, brute-force box searches, the case-4 r=1 resolution, and
// post-hoc auditing of sweep reports.

#include "fivecubes/arith.hpp"
#include "fivecubes/bounds.hpp"
#include "fivecubes/cases.hpp"
#include "fivecubes/lehmer.hpp"
#include "fivecubes/oracle.hpp"
#include "fivecubes/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

fivecubes::sweep::StopControl g_stop;

void handle_sigint(int) { g_stop.stop.store(true); }

void print_bounds_table() {
    std::printf("case  a_norm  b_norm  c_factor  p_max   r_threshold\n");
    std::printf("----  ------  ------  --------  ------  -----------\n");
    for (int c = 1; c <= 8; ++c) {
        const auto n = fivecubes::bounds::normalize(c);
        const auto rep = fivecubes::bounds::bounds_table()[size_t(c - 1)];
        const double e = rep.r_threshold_log10;
        const double mant = std::pow(10.0, e - std::floor(e));
        std::printf("%4d  %6ld  %6ld  %8ld  %6ld  %.1fe%.0f\n", c, n.a_norm, n.b_norm,
                    n.c_factor, rep.p_max, mant, std::floor(e));
    }
}

int write_sweep_outputs(const fivecubes::sweep::SweepOutcome& outcome, const std::string& out_path) {
    if (!outcome.completed) {
        std::cerr << "sweep interrupted after " << outcome.checkpoint.units_done
                  << " committed work units";
        if (!outcome.checkpoint.config.checkpoint_path.empty())
            std::cerr << "; checkpoint written to " << outcome.checkpoint.config.checkpoint_path;
        std::cerr << "\n";
        return 3;
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) {
            std::cerr << "cannot write " << out_path << "\n";
            return 1;
        }
        fivecubes::sweep::emit_csv(outcome.report, os);
    }
    fivecubes::sweep::emit_table(outcome.report, std::cout);
    return 0;
}

struct CsvRow {
    int case_id;
    unsigned p;
    int64_t r;
    std::string stage, verdict, witness;
};

std::vector<CsvRow> read_report_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<CsvRow> rows;
    std::string line;
    if (!std::getline(is, line) || line.rfind("case,p,r,stage,verdict", 0) != 0)
        throw std::runtime_error(path + " does not look like a sweep report");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() < 6) throw std::runtime_error("short row in " + path);
        rows.push_back({std::stoi(f[0]), unsigned(std::stoul(f[1])), std::stoll(f[2]),
                        f[3], f[4], f[5]});
    }
    return rows;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elimination pipeline for (x-2r)^3+(x-r)^3+x^3+(x+r)^3+(x+2r)^3 = y^p"};
    app.require_subcommand(1);
    std::signal(SIGINT, handle_sigint);

    // --- bounds ---
    app.add_subcommand("bounds", "print the per-case Mignotte exponent bounds");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "run the elimination pipeline over a (case, r, p) grid");
    fivecubes::sweep::SweepConfig cfg;
    std::string p_policy = "explicit";
    long stop_after = -1;
    sweep_cmd->add_option("--case", cfg.case_ids, "case ids (1..8), repeatable")->expected(-1);
    sweep_cmd->add_option("--r-min", cfg.r_min, "smallest r")->capture_default_str();
    sweep_cmd->add_option("--r-max", cfg.r_max, "largest r")->capture_default_str();
    sweep_cmd->add_option("--p", cfg.p_list, "exponents p (primes >= 5), repeatable")->expected(-1);
    sweep_cmd->add_option("--p-policy", p_policy, "'explicit' (use --p) or 'mignotte' (all p up to the case bound)")
        ->check(CLI::IsMember({"explicit", "mignotte"}))->capture_default_str();
    sweep_cmd->add_option("--k-max", cfg.k_max, "sieve budget over k in q=2kp+1")->capture_default_str();
    sweep_cmd->add_option("--threads", cfg.threads, "worker count")->capture_default_str();
    sweep_cmd->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint file (JSON)");
    sweep_cmd->add_option("--out", cfg.output_path, "CSV report path");
    sweep_cmd->add_option("--descent-data", cfg.descent_data_path, "descent-datum file (see README)");
    sweep_cmd->add_flag("--audit", cfg.audit, "re-check every sieve elimination by residue enumeration");
    sweep_cmd->add_option("--fallback-w", cfg.fallback_w, "bounded-search limit on |w1| for final survivors")
        ->capture_default_str();
    sweep_cmd->add_option("--stop-after", stop_after, "commit N work units, checkpoint, and exit (testing aid)");

    // --- resume ---
    auto* resume_cmd = app.add_subcommand("resume", "continue a checkpointed sweep");
    std::string resume_path;
    unsigned resume_threads = 1;
    long resume_stop_after = -1;
    resume_cmd->add_option("--checkpoint", resume_path, "checkpoint file")->required();
    resume_cmd->add_option("--threads", resume_threads, "worker count")->capture_default_str();
    resume_cmd->add_option("--stop-after", resume_stop_after, "commit N more units, checkpoint, and exit");

    // --- search ---
    auto* search_cmd = app.add_subcommand("search", "brute-force box search for 5x(x^2+6r^2) = y^p");
    fivecubes::oracle::SearchBox box;
    std::string search_out;
    search_cmd->add_option("--x-min", box.x_min, "")->required();
    search_cmd->add_option("--x-max", box.x_max, "")->required();
    search_cmd->add_option("--r-min", box.r_min, "")->capture_default_str();
    search_cmd->add_option("--r-max", box.r_max, "")->required();
    search_cmd->add_option("--p", box.p_set, "exponents, repeatable")->required()->expected(-1);
    search_cmd->add_option("--out", search_out, "CSV output (x,r,y,p)");

    // --- case4-r1 ---
    app.add_subcommand("case4-r1", "resolve case 4 with r = 1 through Lehmer sequences");

    // --- audit ---
    auto* audit_cmd = app.add_subcommand("audit", "re-verify the sieve eliminations of a CSV report");
    std::string audit_in;
    audit_cmd->add_option("--in", audit_in, "sweep report CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("bounds")) {
            print_bounds_table();
            return 0;
        }

        if (app.got_subcommand("sweep")) {
            cfg.p_policy = (p_policy == "mignotte") ? fivecubes::sweep::PPolicy::mignotte
                                                    : fivecubes::sweep::PPolicy::explicit_list;
            g_stop.stop_after_units = stop_after;
            const auto outcome = fivecubes::sweep::run_sweep(cfg, nullptr, &g_stop);
            return write_sweep_outputs(outcome, cfg.output_path);
        }

        if (app.got_subcommand("resume")) {
            g_stop.stop_after_units = resume_stop_after;
            const auto outcome = fivecubes::sweep::resume(resume_path, resume_threads, &g_stop);
            return write_sweep_outputs(outcome, outcome.checkpoint.config.output_path);
        }

        if (app.got_subcommand("search")) {
            const auto found = fivecubes::oracle::search(box);
            size_t trivial = 0;
            for (const auto& s : found)
                if (s.x == 0) ++trivial;
            if (!search_out.empty()) {
                std::ofstream os(search_out, std::ios::binary);
                if (!os) {
                    std::cerr << "cannot write " << search_out << "\n";
                    return 1;
                }
                os << "x,r,y,p\n";
                for (const auto& s : found)
                    os << s.x << ',' << s.r << ',' << s.y.get_str() << ',' << s.p << '\n';
            }
            for (const auto& s : found)
                std::cout << "x=" << s.x << " r=" << s.r << " y=" << s.y.get_str()
                          << " p=" << s.p << (s.x == 0 ? "  (trivial)" : "  (NONTRIVIAL)") << '\n';
            std::cout << found.size() << " tuples, " << trivial << " with x=0, "
                      << (found.size() - trivial) << " nontrivial\n";
            return 0;
        }

        if (app.got_subcommand("case4-r1")) {
            const auto report = fivecubes::lehmer::resolve_case4_r1();
            std::cout << "exponent cap from primitive divisors: p in {5, 7, 11, 13}\n";
            for (const auto& e : report.entries) {
                std::cout << "p=" << e.p << " v=" << (e.v > 0 ? "+1" : "-1")
                          << ": degree " << e.poly.degree() << " polynomial, integer roots {";
                for (size_t i = 0; i < e.roots.size(); ++i)
                    std::cout << (i ? ", " : "") << e.roots[i].get_str();
                std::cout << "}, admissible (u != 0, 6 | u): " << e.admissible.size() << '\n';
            }
            std::cout << (report.no_solutions
                              ? "no admissible roots anywhere: case 4 with r=1 has no solutions\n"
                              : "ADMISSIBLE ROOT FOUND -- investigate\n");
            return report.no_solutions ? 0 : 2;
        }

        if (app.got_subcommand("audit")) {
            const auto rows = read_report_csv(audit_in);
            size_t audited = 0, mismatches = 0;
            for (const auto& row : rows) {
                if (row.stage != "sieve" || row.verdict != "eliminated") continue;
                ++audited;
                const uint64_t q = std::stoull(row.witness);
                const auto inst = fivecubes::cases::instantiate(row.case_id, row.p, row.r);
                if (fivecubes::oracle::residue_audit(inst, q)) {
                    ++mismatches;
                    std::cerr << "MISMATCH: case " << row.case_id << " p=" << row.p
                              << " r=" << row.r << " q=" << q << " has solutions mod q\n";
                }
            }
            std::cout << "audited " << audited << " sieve eliminations, " << mismatches
                      << " mismatches\n";
            return mismatches == 0 ? 0 : 2;
        }
    } catch (const fivecubes::sweep::AuditFailure& e) {
        std::cerr << "AUDIT FAILURE: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
