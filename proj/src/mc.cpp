#include "mfou/mc.hpp"

#include "mfou/io.hpp"
#include "mfou/rng.hpp"
#include "mfou/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>

namespace mfou {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool univariate(Estimator e) { return e == Estimator::nu_low || e == Estimator::nu_high; }

bool needs_alpha(Estimator e) {
    return e == Estimator::low_freq_cov || e == Estimator::low_freq_corr || e == Estimator::nu_low;
}

ValidatedModel model_of(const ExperimentConfig& c) {
    return validate(c.params, c.scheme == Scheme::mfbm ? Process::mfbm : Process::mfou);
}

Trajectory simulate(const ValidatedModel& m, const ExperimentConfig& c, const SamplingGrid& g, std::uint64_t seed) {
    switch (c.scheme) {
        case Scheme::mfou_exact: return simulate_mfou_exact(m, g, seed);
        case Scheme::mfou_euler: return simulate_mfou_euler(m, g, seed, c.substeps);
        case Scheme::mfbm: {
            Trajectory t = simulate_mfbm(m, g, seed);
            for (int i = 0; i < m.dim(); ++i) t.values.row(i) *= m.params().nu[i];
            return t;
        }
    }
    throw std::logic_error("unreachable scheme");
}

// Errors (estimate - truth) in the order of estimands_of(c.estimator).
std::vector<double> replicate_errors(const ExperimentConfig& c, const Trajectory& t) {
    const auto& p = c.params;
    const int i = c.comp1;
    const auto n1 = static_cast<std::size_t>(t.values.cols());
    const Eigen::VectorXd y1 = t.values.row(i).transpose();
    const std::span<const double> s1(y1.data(), n1);
    const double delta = t.grid.delta;
    if (univariate(c.estimator)) {
        const double truth = p.nu[i] * p.nu[i];
        const EstimateResult r = c.estimator == Estimator::nu_low
                                     ? estimate_nu_low(s1, p.alpha[i], p.hurst[i], c.s, delta)
                                     : estimate_nu_high(s1, p.hurst[i], delta);
        return {*r.nu2 - truth};
    }
    const int j = c.comp2;
    const Eigen::VectorXd y2 = t.values.row(j).transpose();
    const std::span<const double> s2(y2.data(), n1);
    const PairParams pp{p.hurst[i], p.hurst[j], p.alpha[i], p.alpha[j], p.nu[i], p.nu[j], p.rho(i, j), p.eta(i, j)};
    EstimateResult r;
    switch (c.estimator) {
        case Estimator::low_freq_cov: r = estimate_low_freq(s1, s2, pp, c.s, delta); break;
        case Estimator::low_freq_corr: r = estimate_low_freq_corr(s1, s2, pp, c.s, delta); break;
        case Estimator::high_freq: r = estimate_high_freq(s1, s2, pp.h1, pp.h2, pp.nu1, pp.nu2, delta); break;
        default: throw std::logic_error("unreachable estimator");
    }
    return {*r.rho - pp.rho, *r.eta - pp.eta12};
}

LadderStats summarize(const std::vector<double>& e, std::size_t n, double delta) {
    LadderStats s;
    s.n = n;
    s.delta = delta;
    double sum = 0, sum2 = 0, sum4 = 0;
    for (double x : e) {
        if (std::isnan(x)) {
            ++s.failed;
            continue;
        }
        ++s.ok;
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    if (s.ok < 2) return s;
    const double m = static_cast<double>(s.ok);
    s.mean = sum / m;
    const double mse = sum2 / m;
    s.rmse = std::sqrt(mse);
    const double var = (sum2 - m * s.mean * s.mean) / (m - 1);
    s.mean_se = std::sqrt(std::max(0.0, var) / m);
    // delta method on the mean of squared errors
    const double var_sq = (sum4 - m * mse * mse) / (m - 1);
    s.rmse_se = s.rmse > 0 ? std::sqrt(std::max(0.0, var_sq) / m) / (2 * s.rmse) : 0.0;
    return s;
}

}  // namespace

double DeltaRule::at(std::size_t n) const {
    if (kind == Kind::fixed) return value;
    return value * std::pow(static_cast<double>(n), -exponent);
}

std::vector<std::string> estimands_of(Estimator e) {
    if (univariate(e)) return {"nu2"};
    return {"rho", "eta"};
}

void validate_config(const ExperimentConfig& c) {
    std::vector<std::string> errs;
    const Process process = c.scheme == Scheme::mfbm ? Process::mfbm : Process::mfou;
    for (auto& e : violations(c.params, process)) errs.push_back(std::move(e));
    if (c.n_ladder.empty()) errs.push_back("n_ladder is empty");
    for (std::size_t k = 1; k < c.n_ladder.size(); ++k) {
        if (c.n_ladder[k] <= c.n_ladder[k - 1]) errs.push_back("n_ladder must be strictly increasing");
    }
    if (!c.n_ladder.empty() && c.n_ladder.front() < 2) errs.push_back("n_ladder entries must be >= 2");
    if (c.replicates < 2) errs.push_back("replicates must be >= 2");
    if (c.substeps < 1) errs.push_back("substeps must be >= 1");
    if (c.s < 1) errs.push_back("s must be >= 1");
    if (c.delta.kind == DeltaRule::Kind::fixed && !(c.delta.value > 0)) errs.push_back("delta must be > 0");
    if (c.delta.kind == DeltaRule::Kind::power && !(c.delta.value > 0)) errs.push_back("delta scale must be > 0");
    const int d = c.params.d;
    if (c.comp1 < 0 || c.comp1 >= d) errs.push_back("component index out of range");
    if (!univariate(c.estimator) && (c.comp2 < 0 || c.comp2 >= d || c.comp2 == c.comp1)) {
        errs.push_back("pair needs two distinct components");
    }
    if (c.scheme == Scheme::mfbm && needs_alpha(c.estimator)) {
        errs.push_back("estimator " + to_string(c.estimator) + " needs alpha > 0 and cannot run on mfBm");
    }
    if (!errs.empty()) throw ValidationError(std::move(errs));
}

std::size_t McReport::estimand_index(const std::string& name) const {
    for (std::size_t e = 0; e < estimands.size(); ++e) {
        if (estimands[e] == name) return e;
    }
    throw std::out_of_range("no estimand '" + name + "' in report");
}

std::size_t McReport::ladder_index(std::size_t n) const {
    for (std::size_t k = 0; k < config.n_ladder.size(); ++k) {
        if (config.n_ladder[k] == n) return k;
    }
    throw std::out_of_range("n = " + std::to_string(n) + " not in the ladder");
}

std::vector<double> McReport::errors_at(const std::string& estimand, std::size_t n) const {
    std::vector<double> out;
    for (double x : errors[estimand_index(estimand)][ladder_index(n)]) {
        if (!std::isnan(x)) out.push_back(x);
    }
    return out;
}

McReport run_experiment(const ExperimentConfig& c, int threads) {
    validate_config(c);
    const auto start = std::chrono::steady_clock::now();
    const ValidatedModel model = model_of(c);
    McReport r;
    r.config = c;
    r.config_hash = config_hash(c);
    r.estimands = estimands_of(c.estimator);
    const std::size_t ne = r.estimands.size();
    const std::size_t nl = c.n_ladder.size();
    const std::size_t mm = c.replicates;
    r.errors.assign(ne, std::vector<std::vector<double>>(nl, std::vector<double>(mm, kNaN)));

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, mm));

    for (std::size_t li = 0; li < nl; ++li) {
        const std::size_t n = c.n_ladder[li];
        const SamplingGrid grid = make_grid(n, c.delta.at(n));
        std::vector<std::string> reasons(mm);
        // build the shared factor once before fanning out
        if (c.scheme == Scheme::mfou_exact) gram_mfou(model, grid);

        auto work = [&](unsigned w) {
            for (std::size_t m = w; m < mm; m += workers) {
                try {
                    const std::uint64_t seed = derive_seed(c.master_seed, n, m);
                    const auto errs = replicate_errors(c, simulate(model, c, grid, seed));
                    for (std::size_t e = 0; e < ne; ++e) {
                        if (!std::isfinite(errs[e])) throw std::runtime_error("non-finite estimate");
                        r.errors[e][li][m] = errs[e];
                    }
                } catch (const std::exception& ex) {
                    for (std::size_t e = 0; e < ne; ++e) r.errors[e][li][m] = kNaN;
                    reasons[m] = ex.what();
                }
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (std::size_t m = 0; m < mm; ++m) {
            if (!reasons[m].empty()) {
                r.failures.push_back("n=" + std::to_string(n) + " replicate=" + std::to_string(m) + ": " + reasons[m]);
            }
        }
    }

    const std::size_t total = nl * mm;
    if (r.failures.size() * 100 > total) {
        throw std::runtime_error("Monte Carlo run failed: " + std::to_string(r.failures.size()) + " of " +
                                 std::to_string(total) + " replicates failed; first: " + r.failures.front());
    }
    r.stats.assign(ne, {});
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t li = 0; li < nl; ++li) {
            const std::size_t n = c.n_ladder[li];
            r.stats[e].push_back(summarize(r.errors[e][li], n, c.delta.at(n)));
        }
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SlopeFit loglog_slope(const std::vector<double>& n, const std::vector<double>& rmse) {
    if (n.size() < 3) throw std::invalid_argument("ladder too short: need at least 3 points");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < n.size(); ++k) {
        x.push_back(std::log2(n[k]));
        y.push_back(std::log2(rmse[k]));
    }
    const auto f = stats::ols(x, y);
    return {f.slope, f.slope_stderr, f.points};
}

std::map<std::string, SlopeFit> rmse_slopes(const McReport& r) {
    std::map<std::string, SlopeFit> out;
    for (std::size_t e = 0; e < r.estimands.size(); ++e) {
        std::vector<double> n, rmse;
        for (const auto& s : r.stats[e]) {
            if (s.failed != 0) continue;
            n.push_back(static_cast<double>(s.n));
            rmse.push_back(s.rmse);
        }
        out[r.estimands[e]] = loglog_slope(n, rmse);
    }
    return out;
}

DensityDiagnostics density_diagnostics(const std::vector<double>& scaled, double scale) {
    const auto m = stats::moments(scaled);
    DensityDiagnostics d;
    d.scale = scale;
    d.count = m.count;
    d.mean = m.mean;
    d.sd = std::sqrt(m.variance);
    d.skewness = m.skewness;
    d.skewness_se = m.skewness_se;
    d.excess_kurtosis = m.excess_kurtosis;
    d.kurtosis_se = m.kurtosis_se;
    d.ks = stats::ks_normal(scaled, d.mean, d.sd);
    d.ks_critical = stats::ks_critical_1pct(m.count);

    const double lo = d.mean - 5 * d.sd;
    const double width = 10 * d.sd / kDensityBins;
    d.bin_edges.resize(kDensityBins + 1);
    for (int b = 0; b <= kDensityBins; ++b) d.bin_edges[b] = lo + b * width;
    d.density.assign(kDensityBins, 0.0);
    for (double x : scaled) {
        const double pos = (x - lo) / width;
        if (pos < 0 || pos >= kDensityBins) continue;
        d.density[static_cast<std::size_t>(pos)] += 1.0;
    }
    for (double& v : d.density) v /= static_cast<double>(m.count) * width;
    return d;
}

DensityDiagnostics rescaled_density(const McReport& r, const std::string& estimand, double rate, std::size_t n,
                                    bool log_correction) {
    const double nd = static_cast<double>(n);
    const double scale = log_correction ? std::sqrt(nd / std::log(nd)) : std::pow(nd, rate);
    auto e = r.errors_at(estimand, n);
    for (double& x : e) x *= scale;
    return density_diagnostics(e, scale);
}

}  // namespace mfou
