#pragma once

#include "mfou/estim.hpp"
#include "mfou/model.hpp"
#include "mfou/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mfou {

// Observation spacing as a function of n: fixed, or scale * n^{-exponent}.
struct DeltaRule {
    enum class Kind { fixed, power };
    Kind kind = Kind::fixed;
    double value = 1.0;
    double exponent = 0.0;

    double at(std::size_t n) const;
};

struct ExperimentConfig {
    ModelParams params;
    Estimator estimator = Estimator::low_freq_cov;
    std::vector<std::size_t> n_ladder{50, 100, 200, 400};
    DeltaRule delta;
    int s = 1;
    std::size_t replicates = 1000;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::mfou_exact;
    int substeps = 1;
    int comp1 = 0;  // estimated pair (or the single component for nu)
    int comp2 = 1;
};

// Throws ValidationError listing every problem.
void validate_config(const ExperimentConfig& c);
std::vector<std::string> estimands_of(Estimator e);

struct LadderStats {
    std::size_t n = 0;
    double delta = 0;
    std::size_t ok = 0;
    std::size_t failed = 0;
    double mean = 0;  // mean error (bias)
    double rmse = 0;
    double mean_se = 0;
    double rmse_se = 0;
};

struct McReport {
    ExperimentConfig config;
    std::string config_hash;
    std::vector<std::string> estimands;
    // errors[e][ladder index][replicate], NaN for failed replicates
    std::vector<std::vector<std::vector<double>>> errors;
    std::vector<std::vector<LadderStats>> stats;  // [e][ladder index]
    std::vector<std::string> failures;
    double wall_seconds = 0;

    std::size_t estimand_index(const std::string& name) const;
    std::size_t ladder_index(std::size_t n) const;
    // Successful errors only.
    std::vector<double> errors_at(const std::string& estimand, std::size_t n) const;
};

// threads <= 0 means hardware concurrency.
McReport run_experiment(const ExperimentConfig& c, int threads = 0);

struct SlopeFit {
    double slope = 0;
    double stderr_ = 0;
    std::size_t points = 0;
};
// log2(RMSE) on log2(n), using ladder points without failures.
std::map<std::string, SlopeFit> rmse_slopes(const McReport& r);
SlopeFit loglog_slope(const std::vector<double>& n, const std::vector<double>& rmse);

inline constexpr int kDensityBins = 64;

struct DensityDiagnostics {
    double scale = 1;  // errors multiplied by this
    std::vector<double> bin_edges;  // kDensityBins + 1 edges over +-5 sample SD
    std::vector<double> density;    // normalized histogram
    double mean = 0, sd = 0;
    double ks = 0;
    double ks_critical = 0;
    double skewness = 0, skewness_se = 0;
    double excess_kurtosis = 0, kurtosis_se = 0;
    std::size_t count = 0;
};

DensityDiagnostics density_diagnostics(const std::vector<double>& scaled, double scale = 1.0);
// Errors at n scaled by n^rate, or sqrt(n / log n) when log_correction is set.
DensityDiagnostics rescaled_density(const McReport& r, const std::string& estimand, double rate, std::size_t n,
                                    bool log_correction = false);

}  // namespace mfou
