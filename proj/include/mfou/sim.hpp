#pragma once

#include "mfou/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

namespace mfou {

inline constexpr std::size_t kMaxExactDim = 20000;

struct SamplingGrid {
    std::size_t n = 0;
    double delta = 1.0;

    double horizon() const { return static_cast<double>(n) * delta; }
    double time(std::size_t k) const { return static_cast<double>(k) * delta; }
};

SamplingGrid make_grid(std::size_t n, double delta);

enum class Scheme { mfbm, mfou_exact, mfou_euler };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct Trajectory {
    SamplingGrid grid;
    Eigen::MatrixXd values;  // d x (n+1)
    Scheme origin = Scheme::mfou_exact;
    std::uint64_t seed = 0;
    int substeps = 1;
};

// Lower Cholesky factor of a covariance matrix, regularized if needed.
class GramFactor {
public:
    explicit GramFactor(const Eigen::MatrixXd& gram);

    std::size_t dim() const { return static_cast<std::size_t>(lower_.rows()); }
    const Eigen::MatrixXd& lower() const { return lower_; }
    double jitter() const { return jitter_; }            // absolute diagonal shift
    double jitter_level() const { return jitter_level_; }  // shift / (trace/dim)

private:
    Eigen::MatrixXd lower_;
    double jitter_ = 0.0;
    double jitter_level_ = 0.0;
};

// Covariance of the stacked samples Y_{k delta}, time-major (index k*d + i).
Eigen::MatrixXd mfou_gram(const ValidatedModel& m, const SamplingGrid& g);
// Covariance of the stacked unit-sigma mfBm increments over [k delta, (k+1) delta].
Eigen::MatrixXd mfbm_increment_gram(const ValidatedModel& m, const SamplingGrid& g);
// Lag-zero covariance matrix of the stationary mfOU.
Eigen::MatrixXd mfou_lag_zero(const ValidatedModel& m);

// Factors are cached by parameter and grid content; repeated calls share one.
std::shared_ptr<const GramFactor> gram_mfou(const ValidatedModel& m, const SamplingGrid& g);
std::shared_ptr<const GramFactor> gram_mfbm_increments(const ValidatedModel& m, const SamplingGrid& g);
void clear_factor_cache();
std::size_t factor_cache_size();

// Draws first_index .. first_index+count-1 as columns. Draw k uses the normal
// stream keyed by (seed, k), so results do not depend on batching.
Eigen::MatrixXd sample(const GramFactor& f, std::uint64_t seed, std::size_t count, std::uint64_t first_index = 0);

Trajectory simulate_mfou_exact(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed);
// Unit-sigma mfBm (alpha and nu ignored), starting at zero.
Trajectory simulate_mfbm(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed);
Trajectory simulate_mfou_euler(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed, int substeps);

// Mean-reverting Euler recursion on a fine grid, returning every `substeps`-th
// state. increments is d x (fine steps) of unit-sigma fBm increments.
Eigen::MatrixXd euler_path(const Eigen::VectorXd& y0, const Eigen::MatrixXd& increments,
                           const Eigen::VectorXd& alpha, const Eigen::VectorXd& nu, double fine_delta,
                           int substeps);

}  // namespace mfou
