#include "kpkvb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "kpkvb/graph.hpp"
#include "kpkvb/hamilton.hpp"
#include "kpkvb/matching.hpp"

namespace kpkvb {

namespace {

constexpr int kTailMax = 8;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Key that identifies a trial across runs; doubles compared bitwise after the
// %.17g round trip.
using TrialKey = std::tuple<long long, std::uint64_t, std::uint64_t, int, int>;

TrialKey key_of(long long n, double alpha, double nu, ModelKind kind, int trial) {
    return {n, std::bit_cast<std::uint64_t>(alpha), std::bit_cast<std::uint64_t>(nu),
            static_cast<int>(kind), trial};
}

TrialKey key_of(const TrialRecord& r) { return key_of(r.n, r.alpha, r.nu, r.model, r.trial); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

const char* const kSweepCsvHeader =
    "n,alpha,nu,R,model,seed,trial,ham_status,fallback_used,residual_count,"
    "Ns,Ms,certified_near_perfect,edge_count,mean_degree,wall_time_ms";

std::uint64_t trial_seed(std::uint64_t master_seed, long long n, double alpha, double nu,
                         ModelKind kind, int trial) {
    std::uint64_t h = Rng::mix64(master_seed);
    const std::uint64_t keys[] = {static_cast<std::uint64_t>(n),
                                  std::bit_cast<std::uint64_t>(alpha),
                                  std::bit_cast<std::uint64_t>(nu),
                                  static_cast<std::uint64_t>(kind),
                                  static_cast<std::uint64_t>(trial)};
    for (std::uint64_t k : keys) h = Rng::mix64(h ^ Rng::mix64(k));
    return h;
}

TrialOutcome run_trial(long long n, double alpha, double nu, int trial,
                       std::uint64_t master_seed, ModelKind kind) {
    TrialOutcome out;
    TrialRecord& r = out.record;
    r.n = n;
    r.alpha = alpha;
    r.nu = nu;
    r.model = kind;
    r.seed = master_seed;
    r.trial = trial;

    ModelParams params(n, alpha, nu);
    r.R = params.R;
    std::uint64_t seed = trial_seed(master_seed, n, alpha, nu, kind, trial);

    auto t0 = std::chrono::steady_clock::now();
    PointSet ps = (kind == ModelKind::Binomial) ? sample_binomial(params, seed)
                                                : sample_poisson(params, seed);
    GeomGraph g = build_pruned(std::move(ps));
    const PointSet& pts = g.points;

    r.edge_count = static_cast<long long>(g.edge_count);
    DegreeStats ds = degree_stats(g);
    r.mean_degree = ds.degenerate ? 0.0 : ds.mean;

    try {
        HamResult hr = construct(pts);
        r.fallback_used = hr.fallback_used;
        if (hr.status == HamStatus::Success) {
            VerifyReport vr = verify_cycle(pts, hr.cycle);
            if (!vr.ok)
                throw std::logic_error("run_trial: constructed cycle failed verification: " +
                                       vr.violation);
            r.ham_status = "success";
            r.residual_count = 0;
        } else {
            r.ham_status = "failure";
            r.residual_count = static_cast<long long>(hr.residual_cycles.size() +
                                                      hr.residual_singletons.size());
        }
        out.demand_tails = hr.demand_table.tail_counts(kTailMax);
    } catch (const std::invalid_argument&) {
        r.ham_status = "skipped";  // tiling inadmissible at this cell
        r.residual_count = 0;
    }

    if (alpha < 0.5 && 1.0 / alpha < params.R) {
        Obstruction obs = obstruction_counts(pts, g);
        r.Ns = obs.Ns;
        r.Ms = obs.Ms;
        r.certified_near_perfect = certify_no_near_perfect(obs, pts.size());
    }

    auto t1 = std::chrono::steady_clock::now();
    r.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

std::string to_csv_row(const TrialRecord& r) {
    std::ostringstream os;
    os << r.n << ',' << fmt17(r.alpha) << ',' << fmt17(r.nu) << ',' << fmt17(r.R) << ','
       << to_string(r.model) << ',' << r.seed << ',' << r.trial << ',' << r.ham_status << ','
       << (r.fallback_used ? 1 : 0) << ',' << r.residual_count << ',' << r.Ns << ',' << r.Ms
       << ',' << (r.certified_near_perfect ? 1 : 0) << ',' << r.edge_count << ','
       << fmt17(r.mean_degree) << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", r.wall_time_ms);
    os << buf;
    return os.str();
}

std::vector<TrialRecord> read_trial_csv(const std::string& path, bool* complete) {
    std::vector<TrialRecord> rows;
    if (complete) *complete = false;
    std::ifstream in(path);
    if (!in) return rows;
    std::string line;
    std::string last_content;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        last_content = line;
        if (line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        auto f = split_csv(line);
        if (f.size() != 16) throw std::runtime_error("read_trial_csv: malformed row in " + path);
        TrialRecord r;
        r.n = std::stoll(f[0]);
        r.alpha = std::stod(f[1]);
        r.nu = std::stod(f[2]);
        r.R = std::stod(f[3]);
        r.model = model_kind_from_string(f[4]);
        r.seed = std::stoull(f[5]);
        r.trial = std::stoi(f[6]);
        r.ham_status = f[7];
        r.fallback_used = f[8] == "1";
        r.residual_count = std::stoll(f[9]);
        r.Ns = std::stoll(f[10]);
        r.Ms = std::stoll(f[11]);
        r.certified_near_perfect = f[12] == "1";
        r.edge_count = std::stoll(f[13]);
        r.mean_degree = std::stod(f[14]);
        r.wall_time_ms = std::stod(f[15]);
        rows.push_back(std::move(r));
    }
    if (complete) *complete = (last_content == "# complete");
    return rows;
}

namespace {

struct Task {
    long long n;
    double alpha;
    double nu;
    int trial;
};

nlohmann::json summary_json(const SweepConfig& cfg, const std::vector<TrialRecord>& rows,
                            const std::map<TrialKey, std::vector<std::vector<long long>>>& tails,
                            const std::map<TrialKey, int>& tail_trials) {
    using json = nlohmann::json;
    struct CellAgg {
        long long trials = 0, success = 0, fallback = 0, certified = 0, skipped = 0;
        double sum_Ns = 0, sum_Ms = 0, sum_deg = 0;
        long long obs_rows = 0;
    };
    std::map<std::tuple<long long, double, double>, CellAgg> cells;
    for (const auto& r : rows) {
        auto& c = cells[{r.n, r.alpha, r.nu}];
        ++c.trials;
        if (r.ham_status == "success") ++c.success;
        if (r.ham_status == "skipped") ++c.skipped;
        if (r.fallback_used) ++c.fallback;
        if (r.certified_near_perfect) ++c.certified;
        c.sum_deg += r.mean_degree;
        if (r.Ns >= 0) {
            c.sum_Ns += static_cast<double>(r.Ns);
            c.sum_Ms += static_cast<double>(r.Ms);
            ++c.obs_rows;
        }
    }

    json jcells = json::array();
    for (const auto& [key, c] : cells) {
        auto [n, alpha, nu] = key;
        json jc{{"n", n},
                {"alpha", alpha},
                {"nu", nu},
                {"trials", c.trials},
                {"ham_success_rate", static_cast<double>(c.success) / static_cast<double>(c.trials)},
                {"fallback_rate", static_cast<double>(c.fallback) / static_cast<double>(c.trials)},
                {"cert_near_perfect_rate",
                 static_cast<double>(c.certified) / static_cast<double>(c.trials)},
                {"skipped", c.skipped},
                {"mean_degree", c.sum_deg / static_cast<double>(c.trials)}};
        if (c.obs_rows > 0) {
            jc["mean_Ns"] = c.sum_Ns / static_cast<double>(c.obs_rows);
            jc["mean_Ms"] = c.sum_Ms / static_cast<double>(c.obs_rows);
        }
        jcells.push_back(std::move(jc));
    }

    // Per (alpha, n): smallest grid nu with >= 50% construction success and
    // largest grid nu with >= 50% certification. No curve fitting.
    json jphase = json::array();
    std::map<std::pair<double, long long>, std::pair<json, json>> phase;
    for (const auto& [key, c] : cells) {
        auto [n, alpha, nu] = key;
        auto& [ham_nu, cert_nu] = phase[{alpha, n}];
        double rate = static_cast<double>(c.success) / static_cast<double>(c.trials);
        double crate = static_cast<double>(c.certified) / static_cast<double>(c.trials);
        if (rate >= 0.5 && (ham_nu.is_null() || nu < ham_nu.get<double>())) ham_nu = nu;
        if (crate >= 0.5 && (cert_nu.is_null() || nu > cert_nu.get<double>())) cert_nu = nu;
    }
    for (const auto& [key, est] : phase) {
        jphase.push_back({{"alpha", key.first},
                          {"n", key.second},
                          {"nu_ham_50", est.first},
                          {"nu_cert_50", est.second}});
    }

    // Demand tails aggregated over the trials executed in this invocation
    // (resumed rows carry no tail data).
    std::map<std::tuple<long long, double, double>,
             std::pair<std::vector<std::vector<long long>>, int>>
        cell_tails;
    for (const auto& [k, t] : tails) {
        auto [n, abits, nubits, model, trial] = k;
        (void)model;
        (void)trial;
        auto key = std::make_tuple(n, std::bit_cast<double>(abits), std::bit_cast<double>(nubits));
        auto& [acc, cnt] = cell_tails[key];
        if (acc.empty()) acc.assign(t.size(), std::vector<long long>(t.empty() ? 0 : t[0].size(), 0));
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < t[i].size(); ++j) acc[i][j] += t[i][j];
        cnt += tail_trials.at(k);
    }
    json jtails = json::array();
    for (const auto& [key, val] : cell_tails) {
        auto [n, alpha, nu] = key;
        jtails.push_back({{"n", n},
                          {"alpha", alpha},
                          {"nu", nu},
                          {"trials", val.second},
                          {"tail_counts_by_layer", val.first}});
    }

    return json{{"schema", "kpkvb-sweep-summary-v1"},
                {"master_seed", cfg.master_seed},
                {"model", to_string(cfg.model)},
                {"rows", rows.size()},
                {"cells", std::move(jcells)},
                {"phase_estimates", std::move(jphase)},
                {"demand_tails", std::move(jtails)}};
}

}  // namespace

SweepResult sweep(const SweepConfig& cfg) {
    if (cfg.n_grid.empty() || cfg.alpha_grid.empty() || cfg.nu_grid.empty() || cfg.trials < 1)
        throw std::invalid_argument("sweep: grids must be non-empty and trials >= 1");
    if (cfg.csv_path.empty()) throw std::invalid_argument("sweep: csv_path required");
    SweepResult res;
    res.csv_path = cfg.csv_path;
    res.summary_path = cfg.summary_path.empty() ? cfg.csv_path + ".summary.json" : cfg.summary_path;

    bool was_complete = false;
    std::vector<TrialRecord> rows = read_trial_csv(cfg.csv_path, &was_complete);
    std::map<TrialKey, bool> done;
    for (const auto& r : rows) done[key_of(r)] = true;
    res.rows_resumed = static_cast<long long>(rows.size());

    // Canonical task order: (n, alpha, nu, trial).
    std::vector<Task> tasks;
    for (long long n : cfg.n_grid)
        for (double alpha : cfg.alpha_grid)
            for (double nu : cfg.nu_grid)
                for (int t = 0; t < cfg.trials; ++t)
                    if (!done.count(key_of(n, alpha, nu, cfg.model, t)))
                        tasks.push_back({n, alpha, nu, t});

    const bool fresh = !std::filesystem::exists(cfg.csv_path);
    std::ofstream out;
    if (!tasks.empty() || fresh || !was_complete) {
        out.open(cfg.csv_path, std::ios::app);
        if (!out) throw std::runtime_error("sweep: cannot open " + cfg.csv_path);
        if (fresh) {
            out << "# kpkvb sweep v1 master_seed=" << cfg.master_seed
                << " model=" << to_string(cfg.model) << "\n"
                << kSweepCsvHeader << "\n";
            out.flush();
        }
    }

    std::vector<TrialOutcome> outcomes(tasks.size());
    std::mutex write_mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            TrialOutcome o = run_trial(t.n, t.alpha, t.nu, t.trial, cfg.master_seed, cfg.model);
            {
                std::lock_guard<std::mutex> lk(write_mu);
                out << to_csv_row(o.record) << "\n";
                out.flush();
            }
            outcomes[i] = std::move(o);
        }
    };
    int par = std::max(1, cfg.parallelism);
    if (par == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        int k = std::min<int>(par, static_cast<int>(tasks.size()));
        pool.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::map<TrialKey, std::vector<std::vector<long long>>> tails;
    std::map<TrialKey, int> tail_trials;
    for (auto& o : outcomes) {
        rows.push_back(o.record);
        if (!o.demand_tails.empty()) {
            auto k = key_of(o.record);
            tails[k] = std::move(o.demand_tails);
            tail_trials[k] = 1;
        }
    }
    res.rows_written = static_cast<long long>(tasks.size());

    if (out.is_open()) {
        if (!was_complete || !tasks.empty()) out << "# complete\n";
        out.flush();
        out.close();
    }

    std::sort(rows.begin(), rows.end(),
              [](const TrialRecord& a, const TrialRecord& b) { return key_of(a) < key_of(b); });
    std::ofstream js(res.summary_path);
    if (!js) throw std::runtime_error("sweep: cannot open " + res.summary_path);
    js << summary_json(cfg, rows, tails, tail_trials).dump(2) << "\n";
    return res;
}

}  // namespace kpkvb
