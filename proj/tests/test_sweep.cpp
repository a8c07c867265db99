#include "fivecubes/sweep.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fivecubes;
namespace fs = std::filesystem;

namespace {

sweep::SweepConfig base_config() {
    sweep::SweepConfig cfg;
    cfg.case_ids = {1};
    cfg.r_min = 1;
    cfg.r_max = 40;
    cfg.p_list = {5, 7};
    cfg.k_max = 200;
    cfg.threads = 1;
    return cfg;
}

std::string csv_of(const sweep::SweepReport& report) {
    std::ostringstream os;
    sweep::emit_csv(report, os);
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fivecubes_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

} // namespace

TEST(Sweep, SingleInstanceMatchesModuleCalls) {
    sweep::SweepConfig cfg = base_config();
    cfg.r_max = 1;
    cfg.p_list = {5};
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    ASSERT_EQ(outcome.report.rows.size(), 1u);
    const auto& row = outcome.report.rows[0];

    auto inst = cases::instantiate(1, 5, 1);
    const auto verdict = sieve::run_sieve(inst, {cfg.k_max, true});
    if (verdict.status == sieve::Status::eliminated) {
        EXPECT_EQ(row.stage, sweep::kStageSieve);
        EXPECT_EQ(row.witness_q, std::to_string(*verdict.witness_q));
    } else {
        EXPECT_EQ(row.verdict, "surviving");
    }
    EXPECT_EQ(row.checked_count, verdict.checked_count);
}

TEST(Sweep, EmptyCaseSetIsEmptySuccess) {
    sweep::SweepConfig cfg = base_config();
    cfg.case_ids = {};
    const auto outcome = sweep::run_sweep(cfg);
    EXPECT_TRUE(outcome.completed);
    EXPECT_TRUE(outcome.report.rows.empty());
}

TEST(Sweep, VacuousCombinationsSkipped) {
    sweep::SweepConfig cfg = base_config();
    cfg.r_max = 10;
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    for (const auto& row : outcome.report.rows)
        EXPECT_NE(row.r % 5, 0) << "case 1 with 5 | r is vacuous";
}

TEST(Sweep, KnownSolutionRowSurvivesWithTrivialFallbackFind) {
    sweep::SweepConfig cfg;
    cfg.case_ids = {2};
    cfg.r_min = 6561;
    cfg.r_max = 6561;
    cfg.p_list = {17};
    cfg.k_max = 150;
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    ASSERT_EQ(outcome.report.rows.size(), 1u);
    const auto& row = outcome.report.rows[0];
    EXPECT_EQ(row.verdict, "surviving");
    EXPECT_EQ(row.stage, sweep::kStageFallback);
    EXPECT_NE(row.note.find("(w1=0,w2=3)"), std::string::npos) << row.note;
}

TEST(Sweep, NeedsCurveMethodsLabel) {
    sweep::SweepConfig cfg;
    cfg.case_ids = {4};
    cfg.r_min = 1;
    cfg.r_max = 1;
    cfg.p_list = {5};
    cfg.k_max = 500; // case 4 r=1 always survives sieve and local tests
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    ASSERT_EQ(outcome.report.rows.size(), 1u);
    EXPECT_EQ(outcome.report.rows[0].verdict, "surviving");
    EXPECT_EQ(outcome.report.rows[0].stage, sweep::kStageNeedsCurve);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
    sweep::SweepConfig cfg = base_config();
    cfg.case_ids = {1, 6};
    cfg.r_max = 25;
    const auto one = sweep::run_sweep(cfg);
    cfg.threads = 4;
    const auto four = sweep::run_sweep(cfg);
    ASSERT_TRUE(one.completed && four.completed);
    EXPECT_EQ(csv_of(one.report), csv_of(four.report));
}

TEST(Sweep, StageCountsNeverIncreaseDownstream) {
    sweep::SweepConfig cfg = base_config();
    cfg.case_ids = {5, 7};
    cfg.r_max = 30;
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    for (const auto& s : summarize(outcome.report)) {
        EXPECT_LE(s.surviving_sieve, s.instances);
        EXPECT_LE(s.surviving_local, s.surviving_sieve);
        EXPECT_LE(s.surviving_descent, s.surviving_local);
    }
}

TEST(Sweep, AuditModeRunsCleanly) {
    sweep::SweepConfig cfg = base_config();
    cfg.r_max = 15;
    cfg.audit = true;
    EXPECT_NO_THROW({
        const auto outcome = sweep::run_sweep(cfg);
        EXPECT_TRUE(outcome.completed);
    });
}

TEST(Sweep, InterruptAndResumeIsByteIdentical) {
    TempDir tmp;
    const std::string ckpt = (tmp.path / "sweep.ckpt").string();

    sweep::SweepConfig cfg = base_config();
    cfg.r_max = 30;
    cfg.checkpoint_path = ckpt;

    // uninterrupted reference
    sweep::SweepConfig ref_cfg = cfg;
    ref_cfg.checkpoint_path.clear();
    const auto reference = sweep::run_sweep(ref_cfg);
    ASSERT_TRUE(reference.completed);

    // interrupted after 7 units, then resumed
    sweep::StopControl stop;
    stop.stop_after_units = 7;
    const auto partial = sweep::run_sweep(cfg, nullptr, &stop);
    ASSERT_FALSE(partial.completed);
    EXPECT_EQ(partial.checkpoint.units_done, 7u);
    ASSERT_TRUE(fs::exists(ckpt));

    const auto resumed = sweep::resume(ckpt, 3);
    ASSERT_TRUE(resumed.completed);
    EXPECT_EQ(csv_of(resumed.report), csv_of(reference.report));

    // resuming the now-complete checkpoint immediately re-emits the report
    const auto again = sweep::resume(ckpt, 1);
    ASSERT_TRUE(again.completed);
    EXPECT_EQ(csv_of(again.report), csv_of(reference.report));
}

TEST(Sweep, ResumeRefusesAlteredConfig) {
    TempDir tmp;
    const std::string ckpt = (tmp.path / "sweep.ckpt").string();
    sweep::SweepConfig cfg = base_config();
    cfg.checkpoint_path = ckpt;
    sweep::StopControl stop;
    stop.stop_after_units = 3;
    (void)sweep::run_sweep(cfg, nullptr, &stop);

    // hand-edit the stored k_max: the recorded hash no longer matches
    std::ifstream in(ckpt);
    nlohmann::json j;
    in >> j;
    in.close();
    j["config"]["k_max"] = 999;
    std::ofstream out(ckpt);
    out << j.dump();
    out.close();
    EXPECT_THROW(sweep::resume(ckpt, 1), std::runtime_error);
}

TEST(Sweep, DescentDataEliminatesMatchingSurvivor) {
    // case 4, r=1, p=7 survives sieve and local tests; feed it a synthetic
    // datum that the split-prime check disposes of, and check the stage
    TempDir tmp;
    const std::string data_path = (tmp.path / "descent.txt").string();
    {
        std::ofstream os(data_path);
        os << "# synthetic fixture\n";
        os << "4 7 1 6 1 2 1 1 0 1 1\n";
    }
    sweep::SweepConfig cfg;
    cfg.case_ids = {4};
    cfg.r_min = 1;
    cfg.r_max = 1;
    cfg.p_list = {7};
    cfg.k_max = 400;
    cfg.descent_data_path = data_path;
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    ASSERT_EQ(outcome.report.rows.size(), 1u);
    const auto& row = outcome.report.rows[0];
    // whichever way the synthetic datum resolves, the row must be either a
    // descent elimination or a fallback survivor, never silently dropped
    if (row.verdict == "eliminated") {
        EXPECT_EQ(row.stage, sweep::kStageDescent);
        EXPECT_FALSE(row.witness_q.empty());
    } else {
        EXPECT_EQ(row.stage, sweep::kStageFallback);
    }
}

TEST(Report, CsvShapeAndOrdering) {
    sweep::SweepConfig cfg = base_config();
    cfg.case_ids = {6, 1};
    cfg.r_max = 8;
    const auto outcome = sweep::run_sweep(cfg);
    ASSERT_TRUE(outcome.completed);
    const std::string csv = csv_of(outcome.report);
    EXPECT_EQ(csv.rfind("case,p,r,stage,verdict,witness_q,k_used,checked_count\n", 0), 0u);
    for (size_t i = 1; i < outcome.report.rows.size(); ++i)
        EXPECT_TRUE(sweep::row_order(outcome.report.rows[i - 1], outcome.report.rows[i]) ||
                    !sweep::row_order(outcome.report.rows[i], outcome.report.rows[i - 1]));
    std::ostringstream table;
    sweep::emit_table(outcome.report, table);
    EXPECT_NE(table.str().find("surv.sieve"), std::string::npos);
}
