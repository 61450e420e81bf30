#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpkvb/sampler.hpp"

namespace kpkvb {

// One Monte Carlo trial, flattened for CSV. Procedure failure is data, not an
// error: ham_status is "success", "failure", or "skipped" (tiling
// inadmissible at this cell). Ns/Ms are -1 when the obstruction does not
// apply (alpha >= 1/2 or annulus width >= R). wall_time_ms is excluded from
// the determinism contract.
struct TrialRecord {
    long long n = 0;
    double alpha = 0.0;
    double nu = 0.0;
    double R = 0.0;
    ModelKind model = ModelKind::Binomial;
    std::uint64_t seed = 0;  // master seed of the sweep
    int trial = 0;
    std::string ham_status;
    bool fallback_used = false;
    long long residual_count = 0;
    long long Ns = -1;
    long long Ms = -1;
    bool certified_near_perfect = false;
    long long edge_count = 0;
    double mean_degree = 0.0;
    double wall_time_ms = 0.0;
};

// Trial result plus the demand-tail diagnostic (per layer, count of tiles
// with demand >= t), which feeds the sweep summary but not the CSV.
struct TrialOutcome {
    TrialRecord record;
    std::vector<std::vector<long long>> demand_tails;
};

// Substream seed for one trial: master seed folded with the cell and trial
// index, so every trial owns an independent reproducible stream.
std::uint64_t trial_seed(std::uint64_t master_seed, long long n, double alpha, double nu,
                         ModelKind kind, int trial);

// Sample, build the pruned graph, run the constructive procedure (verified on
// success), count the obstruction. Tiling-inadmissible cells yield
// ham_status = "skipped".
TrialOutcome run_trial(long long n, double alpha, double nu, int trial,
                       std::uint64_t master_seed, ModelKind kind);

struct SweepConfig {
    std::vector<long long> n_grid;
    std::vector<double> alpha_grid;
    std::vector<double> nu_grid;
    int trials = 1;
    std::uint64_t master_seed = 1;
    ModelKind model = ModelKind::Binomial;
    std::string csv_path;
    std::string summary_path;  // defaults to csv_path + ".summary.json"
    int parallelism = 1;
};

struct SweepResult {
    long long rows_written = 0;
    long long rows_resumed = 0;  // pre-existing rows kept from a prior run
    std::string csv_path;
    std::string summary_path;
};

// Full harness: one row per (cell, trial), appended and flushed atomically,
// "# complete" marker at the end, idempotent resume keyed on
// (n, alpha, nu, model, trial), summary JSON with per-cell rates, demand-tail
// histograms, and per-(alpha, n) empirical phase estimates.
SweepResult sweep(const SweepConfig& config);

// CSV plumbing, exposed for tests.
extern const char* const kSweepCsvHeader;
std::string to_csv_row(const TrialRecord& r);
// Rows in file order; `complete` reports whether the completeness marker is
// the last content line.
std::vector<TrialRecord> read_trial_csv(const std::string& path, bool* complete = nullptr);

}  // namespace kpkvb
