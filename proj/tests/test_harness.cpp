#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "kpkvb/harness.hpp"

using namespace kpkvb;

namespace {

// Row with the wall-time column dropped (it is outside the determinism
// contract).
std::string strip_wall_time(const std::string& row) {
    return row.substr(0, row.rfind(','));
}

std::vector<std::string> data_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        rows.push_back(strip_wall_time(line));
    }
    return rows;
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("kpkvb_harness_" + std::to_string(::getpid()) + "_" +
               std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string path(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("trial seeds differ across cells and trials, agree across runs") {
    auto s = trial_seed(1, 100, 0.3, 1.0, ModelKind::Binomial, 0);
    CHECK(s == trial_seed(1, 100, 0.3, 1.0, ModelKind::Binomial, 0));
    CHECK(s != trial_seed(2, 100, 0.3, 1.0, ModelKind::Binomial, 0));
    CHECK(s != trial_seed(1, 101, 0.3, 1.0, ModelKind::Binomial, 0));
    CHECK(s != trial_seed(1, 100, 0.31, 1.0, ModelKind::Binomial, 0));
    CHECK(s != trial_seed(1, 100, 0.3, 1.1, ModelKind::Binomial, 0));
    CHECK(s != trial_seed(1, 100, 0.3, 1.0, ModelKind::Poisson, 0));
    CHECK(s != trial_seed(1, 100, 0.3, 1.0, ModelKind::Binomial, 1));
}

TEST_CASE("run_trial is deterministic and internally consistent") {
    TrialOutcome a = run_trial(400, 0.3, 2.0, 0, 9, ModelKind::Binomial);
    TrialOutcome b = run_trial(400, 0.3, 2.0, 0, 9, ModelKind::Binomial);
    CHECK(strip_wall_time(to_csv_row(a.record)) == strip_wall_time(to_csv_row(b.record)));
    CHECK(a.record.n == 400);
    CHECK(a.record.ham_status != "");
    CHECK(a.record.edge_count > 0);
    CHECK(a.record.Ns >= 0);  // alpha < 1/2 and s < R here
    CHECK(a.record.Ms >= 0);
    if (a.record.ham_status == "success") {
        CHECK(a.record.residual_count == 0);
        CHECK_FALSE(a.record.certified_near_perfect);  // soundness
    }
    CHECK(a.demand_tails.size() > 0);
}

TEST_CASE("run_trial marks the obstruction inapplicable above alpha = 1/2") {
    TrialOutcome o = run_trial(300, 0.75, 1.0, 0, 4, ModelKind::Binomial);
    CHECK(o.record.Ns == -1);
    CHECK(o.record.Ms == -1);
    CHECK_FALSE(o.record.certified_near_perfect);
}

TEST_CASE("run_trial survives a degenerate tiny-radius cell") {
    // n/nu close to 1 gives a tiny disk; whatever happens, failure is data,
    // not an exception.
    TrialOutcome o = run_trial(50, 0.3, 30.0, 0, 4, ModelKind::Binomial);
    CHECK((o.record.ham_status == "success" || o.record.ham_status == "failure" ||
           o.record.ham_status == "skipped"));
}

TEST_CASE("csv row round trip") {
    TrialOutcome o = run_trial(300, 0.3, 1.0, 2, 13, ModelKind::Poisson);
    TempDir tmp;
    {
        std::ofstream f(tmp.path("one.csv"));
        f << kSweepCsvHeader << "\n" << to_csv_row(o.record) << "\n# complete\n";
    }
    bool complete = false;
    auto rows = read_trial_csv(tmp.path("one.csv"), &complete);
    CHECK(complete);
    REQUIRE(rows.size() == 1);
    CHECK(to_csv_row(rows[0]) == to_csv_row(o.record));
}

TEST_CASE("sweep: rows, summary, resume, parallel equivalence, determinism") {
    SweepConfig cfg;
    cfg.n_grid = {200, 400};
    cfg.alpha_grid = {0.3};
    cfg.nu_grid = {0.5, 8.0};
    cfg.trials = 3;
    cfg.master_seed = 99;
    TempDir tmp;

    SUBCASE("basic run and re-run determinism") {
        cfg.csv_path = tmp.path("a.csv");
        SweepResult r = sweep(cfg);
        CHECK(r.rows_written == 12);
        CHECK(r.rows_resumed == 0);
        bool complete = false;
        auto rows = read_trial_csv(cfg.csv_path, &complete);
        CHECK(complete);
        CHECK(rows.size() == 12);
        REQUIRE(std::filesystem::exists(r.summary_path));
        std::ifstream js(r.summary_path);
        std::stringstream ss;
        ss << js.rdbuf();
        CHECK(ss.str().find("\"cells\"") != std::string::npos);
        CHECK(ss.str().find("\"phase_estimates\"") != std::string::npos);
        CHECK(ss.str().find("\"demand_tails\"") != std::string::npos);

        cfg.csv_path = tmp.path("b.csv");
        sweep(cfg);
        CHECK(data_rows(tmp.path("a.csv")) == data_rows(tmp.path("b.csv")));
    }

    SUBCASE("interrupted run resumes without duplicates") {
        cfg.csv_path = tmp.path("full.csv");
        sweep(cfg);
        auto full = data_rows(cfg.csv_path);

        // Simulate an interruption: keep the header and the first 5 rows.
        std::ifstream in(cfg.csv_path);
        std::ostringstream keep;
        std::string line;
        int kept = 0;
        while (std::getline(in, line) && kept < 7) {
            keep << line << "\n";
            ++kept;  // 2 header lines + 5 rows
        }
        in.close();
        cfg.csv_path = tmp.path("partial.csv");
        {
            std::ofstream out(cfg.csv_path);
            out << keep.str();
        }
        SweepResult r = sweep(cfg);
        CHECK(r.rows_resumed == 5);
        CHECK(r.rows_written == 7);
        auto resumed = data_rows(cfg.csv_path);
        std::sort(resumed.begin(), resumed.end());
        auto expected = full;
        std::sort(expected.begin(), expected.end());
        CHECK(resumed == expected);

        // Running again on the complete file is a no-op.
        SweepResult again = sweep(cfg);
        CHECK(again.rows_written == 0);
        CHECK(again.rows_resumed == 12);
        auto after = data_rows(cfg.csv_path);
        std::sort(after.begin(), after.end());
        CHECK(after == resumed);
    }

    SUBCASE("parallel run yields the same row set") {
        cfg.csv_path = tmp.path("serial.csv");
        cfg.parallelism = 1;
        sweep(cfg);
        cfg.csv_path = tmp.path("par.csv");
        cfg.parallelism = 8;
        sweep(cfg);
        auto a = data_rows(tmp.path("serial.csv"));
        auto b = data_rows(tmp.path("par.csv"));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }

    SUBCASE("invalid configs are rejected") {
        SweepConfig bad = cfg;
        bad.csv_path = tmp.path("x.csv");
        bad.trials = 0;
        CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
        bad = cfg;
        bad.csv_path.clear();
        CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
        bad = cfg;
        bad.nu_grid.clear();
        bad.csv_path = tmp.path("y.csv");
        CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
    }
}
