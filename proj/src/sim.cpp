#include "mfou/sim.hpp"

#include "mfou/kernels.hpp"
#include "mfou/rng.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace mfou {

namespace {

constexpr std::uint64_t kInitialStream = 1ull << 63;
constexpr std::size_t kCacheCapacity = 8;

PairParams marginal_pair(const ModelParams& p, int i) {
    return {p.hurst[i], p.hurst[i], p.alpha[i], p.alpha[i], p.nu[i], p.nu[i], 1.0, 0.0};
}

void check_dim(std::size_t dim, const char* what) {
    if (dim > kMaxExactDim) {
        throw std::length_error(std::string(what) + ": dimension " + std::to_string(dim) + " exceeds " +
                                std::to_string(kMaxExactDim) + "; use the Euler scheme or a shorter grid");
    }
}

template <class T>
void put(std::string& key, const T& v) {
    key.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::string cache_key(char kind, const ModelParams& p, const SamplingGrid& g) {
    std::string key(1, kind);
    put(key, p.d);
    for (int i = 0; i < p.d; ++i) {
        put(key, p.hurst[i]);
        put(key, p.alpha[i]);
        put(key, p.nu[i]);
        for (int j = 0; j < p.d; ++j) {
            put(key, p.rho(i, j));
            put(key, p.eta(i, j));
        }
    }
    put(key, g.n);
    put(key, g.delta);
    return key;
}

struct FactorCache {
    std::mutex mu;
    std::unordered_map<std::string, std::shared_ptr<const GramFactor>> map;
};

FactorCache& cache() {
    static FactorCache c;
    return c;
}

template <class Build>
std::shared_ptr<const GramFactor> cached(const std::string& key, Build build) {
    auto& c = cache();
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.map.find(key);
        if (it != c.map.end()) return it->second;
    }
    // factor outside the lock; a concurrent duplicate build is harmless
    auto f = std::make_shared<const GramFactor>(build());
    std::lock_guard<std::mutex> lock(c.mu);
    if (c.map.size() >= kCacheCapacity) c.map.clear();
    return c.map.emplace(key, f).first->second;
}

}  // namespace

SamplingGrid make_grid(std::size_t n, double delta) {
    if (n < 1) throw std::invalid_argument("grid needs n >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("grid needs delta > 0");
    return {n, delta};
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::mfbm: return "mfbm";
        case Scheme::mfou_exact: return "exact";
        case Scheme::mfou_euler: return "euler";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "mfbm") return Scheme::mfbm;
    if (s == "exact") return Scheme::mfou_exact;
    if (s == "euler") return Scheme::mfou_euler;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected exact, euler or mfbm)");
}

GramFactor::GramFactor(const Eigen::MatrixXd& gram) {
    const Eigen::Index dim = gram.rows();
    if (dim == 0 || gram.cols() != dim) throw std::invalid_argument("Gram matrix must be square and non-empty");
    const double scale = gram.trace() / static_cast<double>(dim);
    for (double level : {0.0, 1e-12, 1e-10, 1e-8}) {
        Eigen::MatrixXd a = gram;
        a.diagonal().array() += level * scale;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success) continue;
        Eigen::MatrixXd l = llt.matrixL();
        if (!l.allFinite()) continue;
        lower_ = std::move(l);
        jitter_ = level * scale;
        jitter_level_ = level;
        return;
    }
    throw std::runtime_error("Gram not positive definite even after jitter 1e-8*trace/dim");
}

Eigen::MatrixXd mfou_lag_zero(const ValidatedModel& m) {
    const auto& p = m.params();
    Eigen::MatrixXd c(p.d, p.d);
    for (int i = 0; i < p.d; ++i) {
        c(i, i) = lag_zero_cov(marginal_pair(p, i), 0, 0);
        for (int j = i + 1; j < p.d; ++j) c(i, j) = c(j, i) = lag_zero_cov(m.pair(i, j), 0, 1);
    }
    return c;
}

Eigen::MatrixXd mfou_gram(const ValidatedModel& m, const SamplingGrid& g) {
    if (m.process() != Process::mfou) throw std::invalid_argument("mfOU Gram needs mfOU parameters");
    const auto& p = m.params();
    const int d = p.d;
    const std::size_t n1 = g.n + 1;
    check_dim(static_cast<std::size_t>(d) * n1, "exact mfOU simulation");

    // series[i][j][k] = r_ij(k delta)
    std::vector<std::vector<std::vector<double>>> series(d, std::vector<std::vector<double>>(d));
    for (int i = 0; i < d; ++i) {
        series[i][i] = cross_cov_series(marginal_pair(p, i), 0, 0, g.delta, g.n);
        for (int j = i + 1; j < d; ++j) {
            const PairParams pp = m.pair(i, j);
            series[i][j] = cross_cov_series(pp, 0, 1, g.delta, g.n);
            series[j][i] = cross_cov_series(pp, 1, 0, g.delta, g.n);
        }
    }
    const auto dim = static_cast<Eigen::Index>(d * n1);
    Eigen::MatrixXd gram(dim, dim);
    for (std::size_t k = 0; k < n1; ++k) {
        for (std::size_t h = 0; h < n1; ++h) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    gram(k * d + i, h * d + j) = k >= h ? series[i][j][k - h] : series[j][i][h - k];
                }
            }
        }
    }
    return gram;
}

Eigen::MatrixXd mfbm_increment_gram(const ValidatedModel& m, const SamplingGrid& g) {
    const auto& p = m.params();
    const int d = p.d;
    check_dim(static_cast<std::size_t>(d) * g.n, "exact mfBm increment simulation");
    const auto n = static_cast<long>(g.n);
    const auto dim = static_cast<Eigen::Index>(d * g.n);
    Eigen::MatrixXd gram(dim, dim);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double hsum = p.hurst[i] + p.hurst[j];
            const double rho = i == j ? 1.0 : p.rho(i, j);
            const double eta = i == j ? 0.0 : p.eta(i, j);
            const double scale = std::pow(g.delta, hsum);
            std::vector<double> c(2 * n - 1);
            for (long tau = -(n - 1); tau <= n - 1; ++tau) c[tau + n - 1] = scale * mfbm_increment_cov(hsum, rho, eta, tau);
            for (long k = 0; k < n; ++k) {
                for (long h = 0; h < n; ++h) gram(k * d + i, h * d + j) = c[k - h + n - 1];
            }
        }
    }
    return gram;
}

std::shared_ptr<const GramFactor> gram_mfou(const ValidatedModel& m, const SamplingGrid& g) {
    return cached(cache_key('o', m.params(), g), [&] { return GramFactor(mfou_gram(m, g)); });
}

std::shared_ptr<const GramFactor> gram_mfbm_increments(const ValidatedModel& m, const SamplingGrid& g) {
    // alpha and nu do not enter the increment covariance
    ModelParams key_params = m.params();
    std::fill(key_params.alpha.begin(), key_params.alpha.end(), 0.0);
    std::fill(key_params.nu.begin(), key_params.nu.end(), 0.0);
    return cached(cache_key('b', key_params, g), [&] { return GramFactor(mfbm_increment_gram(m, g)); });
}

void clear_factor_cache() {
    std::lock_guard<std::mutex> lock(cache().mu);
    cache().map.clear();
}

std::size_t factor_cache_size() {
    std::lock_guard<std::mutex> lock(cache().mu);
    return cache().map.size();
}

Eigen::MatrixXd sample(const GramFactor& f, std::uint64_t seed, std::size_t count, std::uint64_t first_index) {
    const auto dim = static_cast<Eigen::Index>(f.dim());
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(count));
    Eigen::VectorXd z(dim);
    // column by column so a draw is bit-identical however the batch is split
    for (std::size_t c = 0; c < count; ++c) {
        NormalStream ns(seed, first_index + c);
        ns.fill(z.data(), f.dim());
        out.col(static_cast<Eigen::Index>(c)).noalias() = f.lower().triangularView<Eigen::Lower>() * z;
    }
    return out;
}

Trajectory simulate_mfou_exact(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed) {
    const auto f = gram_mfou(m, g);
    const Eigen::VectorXd x = sample(*f, seed, 1).col(0);
    const int d = m.dim();
    Trajectory t{g, Eigen::Map<const Eigen::MatrixXd>(x.data(), d, static_cast<Eigen::Index>(g.n + 1)),
                 Scheme::mfou_exact, seed, 1};
    return t;
}

namespace {

Eigen::MatrixXd mfbm_increments(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed) {
    const auto f = gram_mfbm_increments(m, g);
    const Eigen::VectorXd x = sample(*f, seed, 1).col(0);
    return Eigen::Map<const Eigen::MatrixXd>(x.data(), m.dim(), static_cast<Eigen::Index>(g.n));
}

}  // namespace

Trajectory simulate_mfbm(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed) {
    const Eigen::MatrixXd inc = mfbm_increments(m, g, seed);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m.dim(), static_cast<Eigen::Index>(g.n + 1));
    for (Eigen::Index k = 0; k < inc.cols(); ++k) v.col(k + 1) = v.col(k) + inc.col(k);
    return {g, std::move(v), Scheme::mfbm, seed, 1};
}

Eigen::MatrixXd euler_path(const Eigen::VectorXd& y0, const Eigen::MatrixXd& increments, const Eigen::VectorXd& alpha,
                           const Eigen::VectorXd& nu, double fine_delta, int substeps) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const Eigen::Index steps = increments.cols();
    if (steps % substeps != 0) throw std::invalid_argument("fine steps must be a multiple of substeps");
    Eigen::MatrixXd out(y0.size(), steps / substeps + 1);
    Eigen::VectorXd y = y0;
    const Eigen::ArrayXd keep = 1.0 - alpha.array() * fine_delta;
    out.col(0) = y;
    for (Eigen::Index k = 0; k < steps; ++k) {
        y = (keep * y.array() + nu.array() * increments.col(k).array()).matrix();
        if ((k + 1) % substeps == 0) out.col((k + 1) / substeps) = y;
    }
    return out;
}

Trajectory simulate_mfou_euler(const ValidatedModel& m, const SamplingGrid& g, std::uint64_t seed, int substeps) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    if (m.process() != Process::mfou) throw std::invalid_argument("Euler scheme needs mfOU parameters");
    const auto& p = m.params();
    const SamplingGrid fine{g.n * static_cast<std::size_t>(substeps), g.delta / substeps};
    const Eigen::MatrixXd inc = mfbm_increments(m, fine, seed);

    Eigen::LLT<Eigen::MatrixXd> llt(mfou_lag_zero(m));
    if (llt.info() != Eigen::Success) throw std::runtime_error("stationary lag-zero covariance not positive definite");
    Eigen::VectorXd z(p.d);
    NormalStream ns(seed, kInitialStream);
    ns.fill(z.data(), static_cast<std::size_t>(p.d));
    const Eigen::VectorXd y0 = llt.matrixL() * z;

    Eigen::VectorXd alpha = Eigen::Map<const Eigen::VectorXd>(p.alpha.data(), p.d);
    Eigen::VectorXd nu = Eigen::Map<const Eigen::VectorXd>(p.nu.data(), p.d);
    return {g, euler_path(y0, inc, alpha, nu, fine.delta, substeps), Scheme::mfou_euler, seed, substeps};
}

}  // namespace mfou
