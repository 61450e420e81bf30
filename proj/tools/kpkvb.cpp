// Command-line front end: sampling, graph construction, the Hamilton-cycle
// procedure, the matching obstruction certificate, closed-form constants, and
// the Monte Carlo sweep harness.
//
// Exit codes: 0 success, 1 the construction found no Hamilton cycle,
// 2 invalid input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpkvb/analytics.hpp"
#include "kpkvb/graph.hpp"
#include "kpkvb/hamilton.hpp"
#include "kpkvb/harness.hpp"
#include "kpkvb/matching.hpp"
#include "kpkvb/sampler.hpp"
#include "kpkvb/tiling.hpp"

namespace {

using json = nlohmann::json;

struct GenOpts {
    long long n = 1000;
    double alpha = 0.3;
    double nu = 1.0;
    std::uint64_t seed = 1;
    std::string model = "binomial";
    std::string in;  // read an existing point-set file instead of sampling
};

void add_gen_opts(CLI::App* cmd, GenOpts& o, bool with_in) {
    cmd->add_option("--n", o.n, "number of points (binomial) / intensity (poisson)");
    cmd->add_option("--alpha", o.alpha, "radial density exponent");
    cmd->add_option("--nu", o.nu, "intensity parameter; R = 2 ln(n/nu)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--model", o.model, "binomial|poisson")
        ->check(CLI::IsMember({"binomial", "poisson"}));
    if (with_in) cmd->add_option("--in", o.in, "point-set file (overrides sampling flags)");
}

kpkvb::PointSet points_for(const GenOpts& o) {
    if (!o.in.empty()) return kpkvb::read_point_set_file(o.in);
    kpkvb::ModelParams params(o.n, o.alpha, o.nu);
    return kpkvb::model_kind_from_string(o.model) == kpkvb::ModelKind::Binomial
               ? kpkvb::sample_binomial(params, o.seed)
               : kpkvb::sample_poisson(params, o.seed);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

json residual_certificate(const kpkvb::HamResult& hr) {
    json nonzero = json::array();
    if (hr.demand_table.valid) {
        const auto& geom = hr.demand_table.geom;
        long long ntop = geom.tiles_in_layer(geom.i_max);
        const std::size_t cap = 64;
        for (long long j = 0; j < ntop && nonzero.size() < cap; ++j) {
            long long d = hr.demand_table.demand(geom.i_max, j);
            if (d != 0) nonzero.push_back({{"layer", geom.i_max}, {"tile", j}, {"demand", d}});
        }
    }
    return json{{"status", "failure"},
                {"message", hr.message},
                {"fallback_used", hr.fallback_used},
                {"residual_components",
                 hr.residual_cycles.size() + hr.residual_singletons.size()},
                {"residual_cycles", hr.residual_cycles.size()},
                {"residual_singletons", hr.residual_singletons.size()},
                {"demand_nonzero_tiles", std::move(nonzero)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KPKVB hyperbolic random graphs: sampling, Hamilton-cycle "
                 "construction, matching obstruction certificates, sweeps"};
    app.require_subcommand(1);

    GenOpts gen_o, graph_o, ham_o, cert_o;
    std::string gen_out, graph_out, ham_out, cert_out;
    std::string builder = "pruned";

    auto* gen = app.add_subcommand("gen", "sample a point set and emit it");
    add_gen_opts(gen, gen_o, false);
    gen->add_option("--out", gen_out, "output path (default stdout)");

    auto* graph = app.add_subcommand("graph", "emit the edge list of the geometric graph");
    add_gen_opts(graph, graph_o, true);
    graph->add_option("--out", graph_out, "output path (default stdout)");
    graph->add_option("--builder", builder, "naive|pruned")
        ->check(CLI::IsMember({"naive", "pruned"}));

    auto* ham = app.add_subcommand("ham", "run the Hamilton-cycle construction");
    add_gen_opts(ham, ham_o, true);
    ham->add_option("--out", ham_out, "output path (default stdout)");

    auto* cert = app.add_subcommand("cert", "emit the N/M matching-obstruction counts");
    add_gen_opts(cert, cert_o, true);
    cert->add_option("--out", cert_out, "output path (default stdout)");

    std::vector<double> an_alphas{0.1, 0.2, 0.3, 0.4};
    std::vector<double> an_nus{0.05, 0.1, 0.2, 0.5, 1.0};
    long long an_n = 100000;
    std::string an_out;
    auto* analytic = app.add_subcommand("analytic", "closed-form constants table");
    analytic->add_option("--alpha", an_alphas, "alpha grid");
    analytic->add_option("--nu", an_nus, "nu grid");
    analytic->add_option("--n", an_n, "n used for expected-count columns");
    analytic->add_option("--out", an_out, "output path (default stdout)");

    kpkvb::SweepConfig sw;
    sw.n_grid = {1000};
    sw.alpha_grid = {0.1, 0.2, 0.3, 0.4};
    sw.nu_grid = {0.05, 0.1, 0.2, 0.5, 1, 2, 4, 8, 16, 32, 64};
    sw.trials = 20;
    std::string sw_model = "binomial";
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over (n, alpha, nu)");
    sweep->add_option("--n", sw.n_grid, "n grid");
    sweep->add_option("--alpha", sw.alpha_grid, "alpha grid");
    sweep->add_option("--nu", sw.nu_grid, "nu grid");
    sweep->add_option("--trials", sw.trials, "trials per cell");
    sweep->add_option("--seed", sw.master_seed, "master seed");
    sweep->add_option("--model", sw_model, "binomial|poisson")
        ->check(CLI::IsMember({"binomial", "poisson"}));
    sweep->add_option("--out", sw.csv_path, "CSV output path")->required();
    sweep->add_option("--summary", sw.summary_path, "summary JSON path (default <out>.summary.json)");
    sweep->add_option("--parallel", sw.parallelism, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            std::ofstream f;
            kpkvb::write_point_set(open_out(f, gen_out), points_for(gen_o));
            return 0;
        }
        if (graph->parsed()) {
            kpkvb::PointSet ps = points_for(graph_o);
            kpkvb::GeomGraph g = builder == "naive" ? kpkvb::build_naive(std::move(ps))
                                                    : kpkvb::build_pruned(std::move(ps));
            std::ofstream f;
            kpkvb::write_edge_list(open_out(f, graph_out), g);
            return 0;
        }
        if (ham->parsed()) {
            kpkvb::PointSet ps = points_for(ham_o);
            kpkvb::HamResult hr = kpkvb::construct(ps);
            std::ofstream f;
            std::ostream& os = open_out(f, ham_out);
            if (hr.status == kpkvb::HamStatus::Success) {
                kpkvb::VerifyReport vr = kpkvb::verify_cycle(ps, hr.cycle);
                if (!vr.ok) throw std::logic_error("cycle failed verification: " + vr.violation);
                for (std::size_t i = 0; i < hr.cycle.size(); ++i)
                    os << hr.cycle[i] << (i + 1 == hr.cycle.size() ? '\n' : ' ');
                return 0;
            }
            os << residual_certificate(hr).dump(2) << "\n";
            return 1;
        }
        if (cert->parsed()) {
            kpkvb::PointSet ps = points_for(cert_o);
            kpkvb::Obstruction obs = kpkvb::obstruction_counts(ps);
            json j{{"n", ps.params.n},
                   {"alpha", ps.params.alpha},
                   {"nu", ps.params.nu},
                   {"R", ps.params.R},
                   {"seed", ps.seed},
                   {"model", kpkvb::to_string(ps.kind)},
                   {"count", ps.size()},
                   {"s", obs.s},
                   {"Ns", obs.Ns},
                   {"Ms", obs.Ms},
                   {"certified_perfect",
                    kpkvb::certify_no_perfect(obs, ps.size())},
                   {"certified_near_perfect",
                    kpkvb::certify_no_near_perfect(obs, ps.size())}};
            std::ofstream f;
            open_out(f, cert_out) << j.dump(2) << "\n";
            return 0;
        }
        if (analytic->parsed()) {
            json rows = json::array();
            for (double a : an_alphas) {
                json row{{"alpha", a}};
                if (a > 0.0 && a < 0.5) {
                    kpkvb::PhaseConstants pc = kpkvb::phase_constants(a);
                    row["s"] = pc.s;
                    row["c_alpha"] = pc.c_alpha;
                    row["nu0_bound"] = pc.nu0_bound;
                    json per_nu = json::array();
                    for (double nu : an_nus) {
                        kpkvb::ModelParams p(an_n, a, nu);
                        json cell{{"nu", nu}, {"ENs_lower", kpkvb::ens_lower(p)}};
                        if (1.0 / a < p.R) cell["EMs"] = kpkvb::ems(p);
                        per_nu.push_back(std::move(cell));
                    }
                    row["per_nu"] = std::move(per_nu);
                } else if (a > 0.5) {
                    json per_nu = json::array();
                    for (double nu : an_nus)
                        per_nu.push_back(
                            {{"nu", nu}, {"avg_degree_limit", kpkvb::avg_degree_limit(a, nu)}});
                    row["per_nu"] = std::move(per_nu);
                }
                rows.push_back(std::move(row));
            }
            std::ofstream f;
            open_out(f, an_out) << json{{"n", an_n}, {"table", std::move(rows)}}.dump(2) << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            sw.model = kpkvb::model_kind_from_string(sw_model);
            kpkvb::SweepResult res = kpkvb::sweep(sw);
            std::cout << "rows_written=" << res.rows_written
                      << " rows_resumed=" << res.rows_resumed << " csv=" << res.csv_path
                      << " summary=" << res.summary_path << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
