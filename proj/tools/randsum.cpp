// randsum: simulate and verify limit behavior of normalized random sums.
//
// Subcommands: run, preset, cf-gap, check-conditions, levy.
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randsum/randsum.hpp"

namespace {

randsum::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw randsum::ConfigError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw randsum::ConfigError("scenario " + path + ": " + e.what());
    }
    return randsum::scenario_from_json(j);
}

std::vector<double> load_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw randsum::ConfigError("cannot open sample file: " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw randsum::ConfigError(path + ": non-numeric line \"" + line + "\"");
        }
    }
    if (out.empty()) throw randsum::ConfigError(path + ": no draws found");
    return out;
}

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            const std::string& format, std::int64_t seed_override, int workers) {
    randsum::Scenario s = load_scenario(scenario_path);
    if (seed_override >= 0) s.seed = static_cast<std::uint64_t>(seed_override);
    randsum::ConvergenceReport rep = randsum::run_scenario(s, workers);
    const std::string body = (format == "json") ? randsum::to_json(rep) : randsum::to_csv(rep);
    if (out_path.empty())
        std::cout << body;
    else
        randsum::write_file(out_path, body);
    return 0;
}

int cmd_cf_gap(const std::string& scenario_path, int workers) {
    const randsum::Scenario s = load_scenario(scenario_path);
    const auto limit = randsum::LimitLaw::standard_normal();
    std::cout << "n,T,lemma1_gap,coherency_gap,grid_points,seconds\n";
    for (std::int64_t n : s.n_grid) {
        const randsum::ArrayRow row(s.scheme, n);
        for (double T : s.t_sweep) {
            const auto t0 = std::chrono::steady_clock::now();
            const double lg = randsum::mixture_cf_gap(row, limit, T, workers);
            const double cg = randsum::coherency_gap(row, limit, T, workers);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("%lld,%.12g,%.12g,%.12g,%d,%.12g\n", static_cast<long long>(n), T, lg,
                        cg, 3072, secs);
        }
    }
    return 0;
}

int cmd_check_conditions(const std::string& scenario_path) {
    const randsum::Scenario s = load_scenario(scenario_path);
    std::cout << "n,eps,lindeberg,lyapunov,gf_bound,method\n";
    for (std::int64_t n : s.n_grid) {
        const randsum::ArrayRow row(s.scheme, n);
        const auto rep = randsum::build_condition_report(row, s.eps_sweep);
        for (const auto& [eps, value] : rep.lindeberg) {
            std::printf("%lld,%.12g,%.12g,%.12g,%.12g,%s\n", static_cast<long long>(n), eps,
                        value, rep.lyapunov, rep.gf_bound, rep.method.c_str());
        }
    }
    return 0;
}

int cmd_levy(const std::string& a_path, const std::string& b_spec) {
    using randsum::EvaluableCdf;
    const EvaluableCdf a{randsum::EmpiricalDistribution(load_column(a_path))};
    EvaluableCdf b;
    const std::string mixture_prefix = "mixture:";
    if (b_spec.rfind(mixture_prefix, 0) == 0) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(b_spec.substr(mixture_prefix.size()));
        } catch (const nlohmann::json::exception& e) {
            throw randsum::ConfigError(std::string("--b mixture: bad JSON: ") + e.what());
        }
        if (!j.contains("mixing")) throw randsum::ConfigError("--b mixture: missing \"mixing\"");
        const randsum::NVMixture m(randsum::mixing_from_json(j.at("mixing")),
                                   j.value("alpha", 0.0), j.value("beta", 0.0));
        b = randsum::tabulated_cdf(m);
    } else {
        b = EvaluableCdf{randsum::EmpiricalDistribution(load_column(b_spec))};
    }
    std::printf("%.9g\n", randsum::levy(a, b));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randsum: random-sum convergence toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "csv", preset_name;
    std::string levy_a, levy_b;
    std::int64_t seed_override = -1;
    int workers = 0;

    auto* run = app.add_subcommand("run", "run a scenario and emit a convergence report");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "output path (stdout when omitted)");
    run->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--workers", workers,
                    "worker threads (RANDSUM_WORKERS env overrides; 0 = hardware)");

    auto* pre = app.add_subcommand("preset", "print a built-in scenario as JSON");
    pre->add_option("name", preset_name,
                    "classical | geometric-laplace | mixed-poisson-vg | heterogeneous-laplace")
        ->required();

    auto* cfg = app.add_subcommand("cf-gap", "exact CF gaps over the n-grid and T-sweep");
    cfg->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cfg->add_option("--workers", workers, "worker threads");

    auto* chk = app.add_subcommand("check-conditions",
                                   "Lindeberg/Lyapunov condition values over the n-grid");
    chk->add_option("scenario", scenario_path, "scenario JSON file")->required();

    auto* lev = app.add_subcommand("levy", "Levy distance between two samples or sample/mixture");
    lev->add_option("--a", levy_a, "single-column CSV of draws")->required();
    lev->add_option("--b", levy_b, "single-column CSV, or mixture:<config JSON>")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_path, format, seed_override, workers);
        if (pre->parsed()) {
            const randsum::Scenario s = randsum::preset(preset_name);
            std::cout << randsum::scenario_to_json(s).dump(2) << "\n";
            return 0;
        }
        if (cfg->parsed()) return cmd_cf_gap(scenario_path, workers);
        if (chk->parsed()) return cmd_check_conditions(scenario_path);
        if (lev->parsed()) return cmd_levy(levy_a, levy_b);
    } catch (const randsum::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
