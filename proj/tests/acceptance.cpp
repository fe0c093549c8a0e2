// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "mfou/asymp.hpp"
#include "mfou/estim.hpp"
#include "mfou/io.hpp"
#include "mfou/kernels.hpp"
#include "mfou/mc.hpp"
#include "mfou/sim.hpp"
#include "mfou/stats.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace mfou;
using namespace mfou::testing;

namespace {

// Collects named checks; the criterion passes when all of them do.
class Checks {
public:
    void add(const std::string& what, bool ok, const std::string& detail) {
        std::printf("  [%s] %s: %s\n", ok ? "ok" : "FAIL", what.c_str(), detail.c_str());
        all_ &= ok;
    }
    bool passed() const { return all_; }

private:
    bool all_ = true;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

ExperimentConfig figure(const std::string& name) {
    return experiment_from_json(json::parse(read_file(std::string(MFOU_CONFIG_DIR) + "/" + name)));
}

double sample_variance(const std::vector<double>& v) { return stats::moments(v).variance; }

// ---------------------------------------------------------------------------

bool criterion1() {
    Checks ck;
    double worst = 0;
    for (double h : {0.1, 0.3, 0.45, 0.55, 0.7, 0.9}) {
        for (double a : {0.1, 0.5, 2.0}) {
            for (double nu : {0.5, 1.0, 3.0}) {
                const PairParams p{h, h, a, a, nu, nu, 1.0, 0.0};
                const double closed = nu * nu * std::tgamma(2 * h + 1) / (2 * std::pow(a, 2 * h));
                worst = std::max({worst, rel_err(mfou_cross_cov(p, 0, 0, 0.0), closed),
                                  rel_err(spectral_autocov_oracle(h, a, nu, 0.0).value, closed)});
            }
        }
    }
    ck.add("univariate variance vs I-kernel and spectral oracle (54 sets)", worst <= 1e-5, fmt("max rel err %.2e", worst));

    struct Case {
        double ai, aj, h, t;
    };
    worst = 0;
    for (const Case c : {Case{0.5, 0.5, 0.3, 1.0}, Case{0.5, 0.5, 0.3, 4.0}, Case{0.2, 1.3, 0.7, 2.0},
                         Case{1.3, 0.2, 1.25, 0.5}, Case{0.5, 0.5, 1.7, 3.0}, Case{0.1, 0.1, 0.5, 1.0},
                         Case{0.5, 0.8, 1.0, 1.5}, Case{2.0, 0.5, 0.15, 0.1}}) {
        worst = std::max(worst, rel_err(i_integral(c.ai, c.aj, c.h, c.t), i_integral_bruteforce(c.ai, c.aj, c.h, c.t)));
    }
    ck.add("I-integral vs 2-D brute-force quadrature (8 cases)", worst <= 1e-8, fmt("max rel err %.2e", worst));

    worst = 0;
    for (double h : {0.05, 0.25, 0.4, 0.75, 0.95}) worst = std::max(worst, std::fabs(coherence_ellipse(h, h).a - 1.0));
    ck.add("coherence semi-axis a = 1 for equal Hurst", worst == 0.0, fmt("max |a - 1| %.2e", worst));

    const auto sets = admissible_sets();
    worst = 0;
    for (const PairParams& p : sets) {
        for (int s : {1, 2, 5}) {
            const auto c = low_freq_coeffs(p, s);
            const double r0 = mfou_cross_cov(p, 0, 1, 0), rp = mfou_cross_cov(p, 0, 1, s), rm = mfou_cross_cov(p, 1, 0, s);
            worst = std::max({worst, std::fabs(c.a1 * r0 + c.a2 * rp + c.a3 * rm - p.rho),
                              std::fabs(c.b1 * r0 + c.b2 * rp + c.b3 * rm - p.eta12)});
        }
    }
    ck.add("exact inversion of (r(0), r12(s), r21(s))", sets.size() >= 20 && worst <= 1e-8,
           fmt("%.0f sets x 3 lags, max abs err %.2e", static_cast<double>(sets.size()), worst));
    return ck.passed();
}

bool criterion2() {
    Checks ck;
    const auto m = validate(make_pair_model(fig1_pair()));
    const auto grid = make_grid(8, 1.0);
    const Eigen::MatrixXd gram = mfou_gram(m, grid);
    const double count = 1e5;
    const Eigen::MatrixXd draws = sample(*gram_mfou(m, grid), 2024, static_cast<std::size_t>(count));
    const Eigen::MatrixXd emp = zero_mean_cov(draws);
    double worst = 0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            worst = std::max(worst, std::fabs(emp(i, j) - gram(i, j)) / cov_entry_se(gram, i, j, count));
        }
    }
    ck.add("empirical Gram of 1e5 exact draws, n = 8", worst < 4.0, fmt("max |z| %.2f over 171 entries", worst));

    // Stationary covariance of the Euler chain, computed exactly, against the kernel.
    const PairParams p = fig1_pair();
    const double delta = 0.1;
    const int sub = 10;
    const long burn = 400;
    const double e0 = euler_chain_cov(p, 0, 1, delta, sub, 0, 0, burn);
    const double e12 = euler_chain_cov(p, 0, 1, delta, sub, 1, 0, burn);
    const double e21 = euler_chain_cov(p, 1, 0, delta, sub, 1, 0, burn);
    const double k0 = mfou_cross_cov(p, 0, 1, 0), k12 = mfou_cross_cov(p, 0, 1, delta), k21 = mfou_cross_cov(p, 1, 0, delta);
    const double rel = std::max({rel_err(e0, k0), rel_err(e12, k12), rel_err(e21, k21)});
    ck.add("Euler (substeps 10) lag-0/lag-1 cross-covariances vs exact", rel < 0.05,
           fmt("max rel err %.4f (lag0 %.5f vs %.5f)", rel, e0, k0));

    // The sampler realizes that chain: Monte Carlo against the chain's own covariance.
    const std::size_t reps = 3000;
    const long n = 30;
    double s0 = 0, s12 = 0, s21 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t = simulate_mfou_euler(m, make_grid(static_cast<std::size_t>(n), delta), 9000 + r, sub);
        s0 += t.values(0, n) * t.values(1, n);
        s12 += t.values(0, n) * t.values(1, n - 1);
        s21 += t.values(1, n) * t.values(0, n - 1);
    }
    const double v1 = euler_chain_cov(p, 0, 0, delta, sub, n, n), v2 = euler_chain_cov(p, 1, 1, delta, sub, n, n);
    const double w0 = euler_chain_cov(p, 0, 1, delta, sub, n, n);
    const double w12 = euler_chain_cov(p, 0, 1, delta, sub, n, n - 1);
    const double w21 = euler_chain_cov(p, 1, 0, delta, sub, n, n - 1);
    auto z = [&](double sum, double want) {
        return std::fabs(sum / reps - want) / std::sqrt((v1 * v2 + want * want) / reps);
    };
    const double zmax = std::max({z(s0, w0), z(s12, w12), z(s21, w21)});
    ck.add("Euler sampler vs exact chain covariance (3000 paths)", zmax < 4.0, fmt("max |z| %.2f", zmax));
    return ck.passed();
}

bool criterion3() {
    Checks ck;
    const McReport r = run_experiment(figure("fig1.json"));
    const auto slopes = rmse_slopes(r);
    for (const std::string e : {"rho", "eta"}) {
        const double s = slopes.at(e).slope;
        ck.add(e + "_hat RMSE slope in -0.5 +- 0.1", within(s, -0.6, -0.4), fmt("slope %.4f", s));
        const auto d = rescaled_density(r, e, 0.5, 400);
        ck.add(e + "_hat sqrt(n) errors Gaussian KS at n = 400", d.ks < d.ks_critical,
               fmt("KS %.4f vs critical %.4f", d.ks, d.ks_critical));
    }
    return ck.passed();
}

bool criterion4() {
    Checks ck;
    const ExperimentConfig c = figure("fig2.json");
    const double h = c.params.hurst[0] + c.params.hurst[1];
    const McReport r = run_experiment(c);
    const auto slopes = rmse_slopes(r);
    const double s = slopes.at("rho").slope;
    ck.add("rho_hat RMSE slope in -(2-H) +- 0.1", within(s, -(2 - h) - 0.1, -(2 - h) + 0.1),
           fmt("slope %.4f, target %.2f", s, -(2 - h)));
    const auto d = rescaled_density(r, "rho", 2 - h, 400);
    ck.add("rho_hat n^{2-H} errors skewed beyond 4 SE", std::fabs(d.skewness) > 4 * d.skewness_se,
           fmt("skewness %.3f, SE %.3f", d.skewness, d.skewness_se));
    const double se = slopes.at("eta").slope;
    ck.add("eta_hat RMSE slope <= -0.3", se <= -0.3, fmt("slope %.4f", se));
    return ck.passed();
}

bool criterion5() {
    Checks ck;
    const McReport r = run_experiment(figure("fig4.json"));
    const double s = rmse_slopes(r).at("rho").slope;
    ck.add("rho_tilde RMSE slope in -0.5 +- 0.1", within(s, -0.6, -0.4), fmt("slope %.4f", s));
    const auto& st = r.stats[r.estimand_index("rho")].back();
    std::printf("  (rho_tilde at n = 400: bias %.5f +- %.5f, RMSE %.5f)\n", st.mean, st.mean_se, st.rmse);
    const auto d = rescaled_density(r, "rho", 0.5, 400);
    ck.add("rho_tilde sqrt(n) errors Gaussian KS at n = 400", d.ks < d.ks_critical,
           fmt("KS %.4f vs critical %.4f", d.ks, d.ks_critical));
    return ck.passed();
}

bool criterion6() {
    Checks ck;
    const ExperimentConfig base = figure("fig6.json");
    for (const auto [h, target, tol] : {std::tuple{0.35, -0.5, 0.1}, std::tuple{0.7, -0.3, 0.15}}) {
        ExperimentConfig c = base;
        const double h1 = (h - 0.05) / 2;
        c.params.hurst = {h1, h1 + 0.05};
        const auto rate = predicted_rate(h, Process::mfbm);
        const double s = rmse_slopes(run_experiment(c)).at("rho").slope;
        ck.add(fmt("mfBm H = %.2f rho_tilde slope in %.2f +- %.2f", h, target, tol), within(s, target - tol, target + tol),
               fmt("slope %.4f, regime ", s) + to_string(rate.regime));
    }
    return ck.passed();
}

bool criterion7() {
    Checks ck;
    const std::size_t n = 400;
    auto at_n = [&](ExperimentConfig c) {
        c.n_ladder = {n};
        c.replicates = 2000;
        c.master_seed += 7000;
        return run_experiment(c).errors_at("rho", n);
    };

    ExperimentConfig c1 = figure("fig1.json");
    const PairParams p1 = validate(c1.params).pair(0, 1);
    const auto lim1 = var_limit_low_freq(p1, low_freq_coeffs(p1, c1.s));
    const double mc1 = n * sample_variance(at_n(c1));
    std::printf("  (exact finite-n n Var(rho_hat) at n = 400: %.5f)\n", n * finite_var_low_freq(p1, low_freq_coeffs(p1, 1), n));
    ck.add("low-frequency limit vs n Var(rho_hat), within 15%", rel_err(mc1, lim1.value) <= 0.15,
           fmt("MC %.5f, limit %.5f (rel %.3f)", mc1, lim1.value, rel_err(mc1, lim1.value)));

    ExperimentConfig c4 = figure("fig4.json");
    const PairParams p4 = validate(c4.params).pair(0, 1);
    const auto lim4 = var_limit_high_freq(p4.h1, p4.h2, p4.rho, p4.eta12);
    const double mc4 = n * sample_variance(at_n(c4));
    ck.add("high-frequency limit vs Var(sqrt(n) rho_tilde), within 15%", rel_err(mc4, lim4.value) <= 0.15,
           fmt("MC %.5f, limit %.5f (rel %.3f)", mc4, lim4.value, rel_err(mc4, lim4.value)));

    ExperimentConfig c2 = figure("fig2.json");
    const PairParams p2 = validate(c2.params).pair(0, 1);
    const auto k = low_freq_coeffs(p2, c2.s);
    const double lim2 = var_limit_supercritical(p2, k.a1 + k.a2 + k.a3);
    const double mc2 = std::pow(static_cast<double>(n), 2 * (2 - p2.hsum())) * sample_variance(at_n(c2));
    ck.add("supercritical limit vs Var(n^{2-H} rho_hat), within 25%", rel_err(mc2, lim2) <= 0.25,
           fmt("MC %.5f, limit %.5f (rel %.3f)", mc2, lim2, rel_err(mc2, lim2)));
    return ck.passed();
}

bool criterion8() {
    Checks ck;
    ExperimentConfig c;
    c.params = make_pair_model({0.3, 0.3, 0.5, 0.5, 1.0, 1.0, 0.5, 0.0});
    c.n_ladder = {50, 100, 200, 400};
    c.replicates = 1000;
    c.master_seed = 808;
    c.comp1 = 0;

    c.estimator = Estimator::nu_low;
    const auto low = run_experiment(c).stats[0].back();
    ck.add("nu_hat^2 mean within 3 MC SE of 1", std::fabs(low.mean) < 3 * low.mean_se,
           fmt("bias %.5f, SE %.5f", low.mean, low.mean_se));

    c.estimator = Estimator::nu_high;
    c.delta = {DeltaRule::Kind::power, 1.0, 0.6};
    const McReport hr = run_experiment(c);
    const auto high = hr.stats[0].back();
    ck.add("nu_tilde^2 mean within 3 MC SE of 1 (delta = n^-0.6)", std::fabs(high.mean) < 3 * high.mean_se,
           fmt("bias %.5f, SE %.5f", high.mean, high.mean_se));
    const auto d = rescaled_density(hr, "nu2", 0.5, 400);
    ck.add("nu_tilde^2 sqrt(n) errors Gaussian KS at n = 400", d.ks < d.ks_critical,
           fmt("KS %.4f vs critical %.4f", d.ks, d.ks_critical));

    ModelParams one;
    one.d = 1;
    one.hurst = {0.3};
    one.alpha = {0.5};
    one.nu = {1.7};
    one.rho = Eigen::MatrixXd::Ones(1, 1);
    one.eta = Eigen::MatrixXd::Zero(1, 1);
    const auto t = simulate_mfou_exact(validate(one), make_grid(400, 0.05), 31);
    const std::span<const double> y(t.values.data(), static_cast<std::size_t>(t.values.cols()));
    const double nu2 = *estimate_nu_high(y, 0.3, 0.05).nu2;
    const double rho = *estimate_high_freq(y, y, 0.3, 0.3, 1.7, 1.7, 0.05).rho;
    const double gap = std::fabs(nu2 - 1.7 * 1.7 * rho);
    ck.add("nu_tilde^2 = nu^2 rho_tilde on identical components", gap <= 1e-14 * nu2, fmt("|diff| %.2e", gap));
    return ck.passed();
}

bool criterion9() {
    Checks ck;
    const PairParams p = fig1_pair();
    const long n = 400;
    const auto t = simulate_mfou_exact(validate(make_pair_model(p)), make_grid(static_cast<std::size_t>(n), 1.0), 99);
    std::vector<double> r[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r[i][j] = cross_cov_series(p, i, j, 1.0, static_cast<std::size_t>(2 * n));
    }
    auto cov = [&](int i, int j, long k) { return k >= 0 ? r[i][j][k] : r[j][i][-k]; };
    for (long tau : {0L, 1L, 5L}) {
        const long count = n + 1 - tau;  // pairs (Y1_{j+tau}, Y2_j), j = 0..n-tau
        double avg = 0;
        for (long j = 0; j + tau <= n; ++j) avg += t.values(0, j + tau) * t.values(1, j);
        avg /= count;
        // Var of the time average by Isserlis over the exact kernel
        double var = 0;
        for (long d = -(count - 1); d < count; ++d) {
            var += (count - std::labs(d)) * (cov(0, 0, d) * cov(1, 1, d) + cov(0, 1, d + tau) * cov(1, 0, d - tau));
        }
        const double se = std::sqrt(var) / count;
        const double want = cov(0, 1, tau);
        ck.add(fmt("time average vs r12(%.0f)", static_cast<double>(tau)), std::fabs(avg - want) < 4 * se,
               fmt("avg %.5f, r12 %.5f, SE %.5f", avg, want, se));
    }

    double worst = 0;
    for (const PairParams& q : admissible_sets()) {
        if (q.alpha1 != q.alpha2) continue;
        PairParams s = q;
        s.eta12 = 0;
        for (double lag : {0.1, 0.5, 1.0, 3.0, 10.0}) {
            worst = std::max(worst, std::fabs(mfou_cross_cov(s, 0, 1, lag) - mfou_cross_cov(s, 1, 0, lag)));
        }
    }
    ck.add("r12 = r21 for equal rates and eta = 0", worst <= 1e-10, fmt("max |r12 - r21| %.2e", worst));
    return ck.passed();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfou acceptance checks"};
    std::vector<int> which;
    app.add_option("--criterion", which, "criterion number(s) 1-9; default all")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);
    if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    const std::map<int, std::pair<std::string, std::function<bool()>>> criteria{
        {1, {"kernel identities", criterion1}},
        {2, {"sampler moments", criterion2}},
        {3, {"low-frequency estimator, H < 3/2", criterion3}},
        {4, {"low-frequency estimator, H > 3/2", criterion4}},
        {5, {"high-frequency estimator, small alpha", criterion5}},
        {6, {"mfBm high-frequency conjecture", criterion6}},
        {7, {"variance limits", criterion7}},
        {8, {"volatility estimators", criterion8}},
        {9, {"ergodicity and reversibility", criterion9}},
    };
    int failed = 0;
    for (int c : which) {
        const auto& [name, fn] = criteria.at(c);
        std::printf("criterion %d (%s)\n", c, name.c_str());
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            std::printf("  [FAIL] exception: %s\n", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s (%.1f s)\n", c, ok ? "PASS" : "FAIL", secs);
        std::fflush(stdout);
        failed += ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
