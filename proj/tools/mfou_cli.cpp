// mfou: kernels, simulation, estimation, Monte Carlo and rate predictions
// driven by one JSON config per run.
#include "mfou/asymp.hpp"
#include "mfou/estim.hpp"
#include "mfou/io.hpp"
#include "mfou/kernels.hpp"
#include "mfou/mc.hpp"
#include "mfou/sim.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <span>

namespace fs = std::filesystem;
using namespace mfou;

namespace {

struct Invocation {
    std::string subcommand;
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

// Thrown for anything detected before work starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const Invocation& inv) {
    json j;
    try {
        j = json::parse(read_file(inv.config_path));
    } catch (const json::parse_error& e) {
        throw ConfigError(inv.config_path + ": " + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind != inv.subcommand) {
        throw ConfigError("config kind '" + kind + "' does not match subcommand '" + inv.subcommand + "'");
    }
    return j;
}

void emit(const Invocation& inv, const std::string& text) {
    if (inv.out_path.empty() || inv.out_path == "-") {
        std::cout << text;
    } else {
        write_file_atomic(inv.out_path, text);
    }
}

PairParams marginal(const ModelParams& p, int i) {
    return {p.hurst[i], p.hurst[i], p.alpha[i], p.alpha[i], p.nu[i], p.nu[i], 1.0, 0.0};
}

// Parse-and-validate step returns the work to run.
using Work = std::function<void()>;

Work plan_cov(const Invocation& inv, const json& j) {
    const ValidatedModel m = validate(params_from_json(j.at("params")));
    std::vector<double> lags;
    if (j.contains("lags")) {
        lags = j.at("lags").get<std::vector<double>>();
    } else {
        const double max_lag = j.value("max_lag", 10.0);
        const double step = j.value("step", 1.0);
        if (!(step > 0) || !(max_lag >= 0)) throw ConfigError("cov needs step > 0 and max_lag >= 0");
        for (std::size_t k = 0; k * step <= max_lag + 1e-12; ++k) lags.push_back(k * step);
    }
    return [=] {
        std::string out = "i,j,lag,value\n";
        const auto& p = m.params();
        for (int i = 0; i < p.d; ++i) {
            for (int k = 0; k < p.d; ++k) {
                for (double lag : lags) {
                    const double v = i == k ? mfou_cross_cov(marginal(p, i), 0, 0, lag)
                                            : mfou_cross_cov(m.pair(i, k), 0, 1, lag);
                    out += std::to_string(i + 1) + ',' + std::to_string(k + 1) + ',' + format_double(lag) + ',' +
                           format_double(v) + '\n';
                }
            }
        }
        emit(inv, out);
    };
}

std::string sidecar_path(const std::string& out) {
    fs::path p(out);
    if (p.extension() == ".csv") return p.replace_extension(".json").string();
    return out + ".json";
}

Work plan_simulate(const Invocation& inv, const json& j) {
    if (inv.out_path.empty()) throw ConfigError("simulate needs --out PATH");
    const Scheme scheme = scheme_from_string(j.value("scheme", std::string("exact")));
    const ValidatedModel m =
        validate(params_from_json(j.at("params")), scheme == Scheme::mfbm ? Process::mfbm : Process::mfou);
    const auto& g = j.at("grid");
    const SamplingGrid grid = make_grid(g.at("n").get<std::size_t>(), g.value("delta", 1.0));
    const int substeps = j.value("substeps", 1);
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    const std::size_t rows = scheme == Scheme::mfou_exact ? grid.n + 1 : grid.n * static_cast<std::size_t>(substeps);
    if (static_cast<std::size_t>(m.dim()) * rows > kMaxExactDim) {
        throw ConfigError("grid too large for exact Gaussian sampling (" + std::to_string(m.dim() * rows) + " > " +
                          std::to_string(kMaxExactDim) + "); shorten the grid or lower substeps");
    }
    const std::uint64_t seed = inv.seed.value_or(j.value("seed", std::uint64_t{1}));
    return [=] {
        Trajectory t = scheme == Scheme::mfou_exact   ? simulate_mfou_exact(m, grid, seed)
                       : scheme == Scheme::mfou_euler ? simulate_mfou_euler(m, grid, seed, substeps)
                                                      : simulate_mfbm(m, grid, seed);
        if (scheme == Scheme::mfbm) {
            for (int i = 0; i < m.dim(); ++i) t.values.row(i) *= m.params().nu[i];
        }
        const std::string csv = trajectory_csv(t);
        const std::string meta = trajectory_meta(t, m.params()).dump(2) + '\n';
        write_file_atomic(inv.out_path, csv);
        write_file_atomic(sidecar_path(inv.out_path), meta);
    };
}

Work plan_estimate(const Invocation& inv, const json& j) {
    const ModelParams p = params_from_json(j.at("params"));
    const Estimator est = estimator_from_string(j.at("estimator").get<std::string>());
    const bool alpha_free = est == Estimator::high_freq || est == Estimator::nu_high;
    validate(p, alpha_free ? Process::mfbm : Process::mfou);
    std::string traj = j.at("trajectory").get<std::string>();
    if (!fs::exists(traj)) {
        const fs::path alt = fs::path(inv.config_path).parent_path() / traj;
        if (fs::exists(alt)) traj = alt.string();
    }
    const CsvSeries series = read_trajectory_csv(traj);
    const int s = j.value("s", 1);
    const double delta = j.contains("delta") ? j.at("delta").get<double>() : series.time[1] - series.time[0];
    std::vector<int> pr = j.value("pair", std::vector<int>{1, 2});
    if (pr.empty()) throw ConfigError("'pair' must not be empty");
    const int a = pr[0] - 1;
    const int b = pr.size() > 1 ? pr[1] - 1 : a + 1;
    const bool uni = est == Estimator::nu_low || est == Estimator::nu_high;
    const int cols = static_cast<int>(series.columns.size());
    if (a < 0 || a >= cols || a >= p.d || (!uni && (b < 0 || b >= cols || b >= p.d || b == a))) {
        throw ConfigError("'pair' does not match the trajectory/params components");
    }
    return [=] {
        const std::span<const double> y1(series.columns[a]);
        EstimateResult r;
        if (uni) {
            r = est == Estimator::nu_low ? estimate_nu_low(y1, p.alpha[a], p.hurst[a], s, delta)
                                         : estimate_nu_high(y1, p.hurst[a], delta);
        } else {
            const std::span<const double> y2(series.columns[b]);
            const PairParams pp{p.hurst[a], p.hurst[b], p.alpha[a], p.alpha[b], p.nu[a], p.nu[b], p.rho(a, b), p.eta(a, b)};
            if (est == Estimator::low_freq_cov) r = estimate_low_freq(y1, y2, pp, s, delta);
            else if (est == Estimator::low_freq_corr) r = estimate_low_freq_corr(y1, y2, pp, s, delta);
            else r = estimate_high_freq(y1, y2, pp.h1, pp.h2, pp.nu1, pp.nu2, delta);
        }
        emit(inv, estimate_to_json(r).dump(2) + '\n');
    };
}

double default_rate(const ExperimentConfig& c, bool& log_corr) {
    log_corr = false;
    const auto& p = c.params;
    if (c.estimator == Estimator::nu_low || c.estimator == Estimator::nu_high) return 0.5;
    const double h = p.hurst[c.comp1] + p.hurst[c.comp2];
    if (c.scheme == Scheme::mfbm) return h < 1.0 ? predicted_rate(h, Process::mfbm).exponent : 0.5;
    if (c.estimator == Estimator::high_freq) return 0.5;
    const RatePrediction r = predicted_rate(h, Process::mfou);
    log_corr = r.log_correction;
    return r.exponent;
}

json run_and_write(const ExperimentConfig& c, const std::string& dir, int threads) {
    const McReport r = run_experiment(c, threads);
    json summary = report_summary(r);
    bool log_corr = false;
    const double rate = default_rate(c, log_corr);
    json dens = json::object();
    for (const auto& e : r.estimands) {
        dens[e] = density_to_json(rescaled_density(r, e, rate, c.n_ladder.back(), log_corr));
    }
    summary["density"] = {{"n", c.n_ladder.back()}, {"rate", rate}, {"log_correction", log_corr}, {"estimands", dens}};
    const std::string stem = (fs::path(dir) / ("mc-" + r.config_hash)).string();
    write_file_atomic(stem + "-errors.csv", report_errors_csv(r));
    write_file_atomic(stem + "-summary.json", summary.dump(2) + '\n');
    std::cerr << "montecarlo " << r.config_hash << ": " << r.wall_seconds << " s\n";
    return summary;
}

Work plan_montecarlo(const Invocation& inv, const json& j) {
    if (inv.out_path.empty()) throw ConfigError("montecarlo needs --out DIR");
    ExperimentConfig base = experiment_from_json(j);
    if (inv.seed) base.master_seed = *inv.seed;
    std::vector<ExperimentConfig> points;
    if (j.contains("sweep")) {
        const auto& sw = j.at("sweep");
        const double offset = sw.at("H2_offset").get<double>();
        for (double h1 : sw.at("H1").get<std::vector<double>>()) {
            ExperimentConfig c = base;
            c.params.hurst[c.comp1] = h1;
            c.params.hurst[c.comp2] = h1 + offset;
            validate_config(c);
            points.push_back(c);
        }
        if (points.empty()) throw ConfigError("sweep.H1 is empty");
    } else {
        validate_config(base);
        points.push_back(base);
    }
    const bool sweep = j.contains("sweep");
    const int threads = inv.threads;
    const std::string dir = inv.out_path;
    return [=] {
        json rows = json::array();
        for (const auto& c : points) {
            json s = run_and_write(c, dir, threads);
            if (!sweep) continue;
            const double h = c.params.hurst[c.comp1] + c.params.hurst[c.comp2];
            json row = {{"H1", c.params.hurst[c.comp1]}, {"H2", c.params.hurst[c.comp2]}, {"H", h},
                        {"config_hash", s["config_hash"]}};
            if (s.contains("slopes")) row["slopes"] = s["slopes"];
            const Process proc = c.scheme == Scheme::mfbm ? Process::mfbm : Process::mfou;
            if (proc == Process::mfou || h < 1.0) row["predicted"] = rate_to_json(predicted_rate(h, proc));
            rows.push_back(row);
        }
        if (sweep) {
            json out = {{"config_hash", config_hash(base)}, {"sweep", rows}};
            write_file_atomic((fs::path(dir) / ("sweep-" + config_hash(base) + ".json")).string(), out.dump(2) + '\n');
        }
    };
}

Work plan_rates(const Invocation& inv, const json& j) {
    const Process proc = process_from_string(j.value("process", std::string("mfou")));
    const ModelParams p = params_from_json(j.at("params"));
    validate(p, proc);
    std::vector<int> pr = j.value("pair", std::vector<int>{1, 2});
    if (pr.size() != 2 || pr[0] < 1 || pr[1] < 1 || pr[0] > p.d || pr[1] > p.d || pr[0] == pr[1]) {
        throw ConfigError("'pair' must name two distinct components");
    }
    const int a = pr[0] - 1, b = pr[1] - 1;
    const PairParams pp{p.hurst[a], p.hurst[b], p.alpha[a], p.alpha[b], p.nu[a], p.nu[b], p.rho(a, b), p.eta(a, b)};
    const int s = j.value("s", 1);
    const std::size_t trunc = j.value("truncation", kDefaultTruncation);
    const auto wanted = j.value("variances", std::vector<std::string>{});
    for (const auto& w : wanted) {
        if (w != "low_freq" && w != "high_freq" && w != "supercritical") throw ConfigError("unknown variance '" + w + "'");
    }
    return [=] {
        json out;
        out["H"] = pp.hsum();
        out["process"] = to_string(proc);
        out["rate"] = rate_to_json(predicted_rate(pp.hsum(), proc));
        json vars = json::object();
        for (const auto& w : wanted) {
            try {
                if (w == "low_freq") {
                    const auto c = low_freq_coeffs(pp, s);
                    vars[w] = {{"rho", series_to_json(var_limit_low_freq(pp, c, trunc, Estimand::rho))},
                               {"eta", series_to_json(var_limit_low_freq(pp, c, trunc, Estimand::eta))}};
                } else if (w == "high_freq") {
                    vars[w] = series_to_json(var_limit_high_freq(pp.h1, pp.h2, pp.rho, pp.eta12, trunc));
                } else {
                    const auto c = low_freq_coeffs(pp, s);
                    vars[w] = {{"value", var_limit_supercritical(pp, c.a1 + c.a2 + c.a3)}};
                }
            } catch (const std::domain_error& e) {
                vars[w] = {{"error", e.what()}};
            }
        }
        out["variances"] = vars;
        emit(inv, out.dump(2) + '\n');
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfou: multivariate fractional Ornstein-Uhlenbeck toolkit"};
    app.require_subcommand(1, 1);
    Invocation inv;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", inv.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", inv.out_path, "output file (directory for montecarlo)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", inv.threads, "worker threads (default: MFOU_THREADS or all cores)");
    };
    add_common(app.add_subcommand("cov", "kernel values r_ij(lag) as CSV"));
    add_common(app.add_subcommand("simulate", "one trajectory as CSV plus a JSON sidecar"));
    add_common(app.add_subcommand("estimate", "estimate cross parameters or nu^2 from a trajectory CSV"));
    add_common(app.add_subcommand("montecarlo", "error ladders, slopes and density diagnostics"));
    add_common(app.add_subcommand("rates", "predicted rate and limiting variances as JSON"));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }
    inv.subcommand = app.get_subcommands().front()->get_name();
    if (app.get_subcommands().front()->count("--seed") > 0) inv.seed = seed;
    if (inv.threads <= 0) {
        if (const char* env = std::getenv("MFOU_THREADS")) inv.threads = std::atoi(env);
    }

    Work work;
    try {
        const json j = load_config(inv);
        if (inv.subcommand == "cov") work = plan_cov(inv, j);
        else if (inv.subcommand == "simulate") work = plan_simulate(inv, j);
        else if (inv.subcommand == "estimate") work = plan_estimate(inv, j);
        else if (inv.subcommand == "montecarlo") work = plan_montecarlo(inv, j);
        else work = plan_rates(inv, j);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    try {
        work();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
