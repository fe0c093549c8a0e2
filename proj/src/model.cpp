#include "mfou/model.hpp"

#include "mfou/special.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace mfou {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid parameters:";
    for (const auto& e : v) out += "\n  - " + e;
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void check_marginal(std::vector<std::string>& errs, const std::string& tag, double h, double alpha,
                    double nu, Process process) {
    if (!(h > 0.0 && h < 1.0)) {
        errs.push_back("H" + tag + " = " + fmt(h) + " outside (0,1)");
    } else if (std::fabs(h - 0.5) <= kHalfHurstExclusion) {
        errs.push_back("H" + tag + " = " + fmt(h) + ": excluded Hurst value");
    }
    if (process == Process::mfou) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) errs.push_back("alpha" + tag + " = " + fmt(alpha) + " must be > 0");
        if (!(nu > 0.0) || !std::isfinite(nu)) errs.push_back("nu" + tag + " = " + fmt(nu) + " must be > 0");
    } else {
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) errs.push_back("alpha" + tag + " = " + fmt(alpha) + " must be >= 0");
        if (!(nu > 0.0) || !std::isfinite(nu)) errs.push_back("nu" + tag + " = " + fmt(nu) + " must be > 0");
    }
}

void check_cross(std::vector<std::string>& errs, const std::string& tag, double h1, double h2, double rho,
                 double eta) {
    if (!std::isfinite(rho) || !std::isfinite(eta)) {
        errs.push_back("rho/eta" + tag + " not finite");
        return;
    }
    if (!(h1 > 0.0 && h1 < 1.0 && h2 > 0.0 && h2 < 1.0)) return;
    const double c = coherence(h1, h2, rho, eta);
    if (c > 1.0 + kCoherenceTol) {
        errs.push_back("inadmissible (rho,eta) pair" + tag + ": coherence " + fmt(c) + " > 1");
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> errors)
    : std::invalid_argument(join(errors)), errors_(std::move(errors)) {}

bool near_unit_hsum(double hsum) { return std::fabs(hsum - 1.0) < kUnitHsumBand; }

double coherence(double h1, double h2, double rho, double eta12) {
    const double h = h1 + h2;
    const double g = special::gamma(2 * h1 + 1) * special::gamma(2 * h2 + 1);
    const double ss = std::sin(kPi * h1) * std::sin(kPi * h2);
    if (near_unit_hsum(h)) return (rho * rho + kPi * kPi / 4 * eta12 * eta12) / (g * ss);
    const double gh = special::gamma(h + 1);
    const double sn = std::sin(kPi * h / 2);
    const double cs = std::cos(kPi * h / 2);
    return gh * gh / g * (rho * rho * sn * sn + eta12 * eta12 * cs * cs) / ss;
}

CoherenceEllipse coherence_ellipse(double h1, double h2) {
    const double h = h1 + h2;
    if (near_unit_hsum(h)) {
        throw std::domain_error("coherence_ellipse: H1 + H2 = 1, the logarithmic constraint applies instead");
    }
    const double num = special::gamma(2 * h1 + 1) * special::gamma(2 * h2 + 1) * std::sin(kPi * h1) *
                       std::sin(kPi * h2);
    const double gh = special::gamma(h + 1);
    const double sn = std::sin(kPi * h / 2);
    const double cs = std::cos(kPi * h / 2);
    // equal Hurst exponents cancel exactly: Gamma(2h+1)^2 sin^2(pi h) over itself
    if (h1 == h2) return {1.0, std::sqrt(num / (gh * gh * cs * cs))};
    return {std::sqrt(num / (gh * gh * sn * sn)), std::sqrt(num / (gh * gh * cs * cs))};
}

std::vector<std::string> violations(const ModelParams& p, Process process) {
    std::vector<std::string> errs;
    if (p.d < 1) {
        errs.push_back("d = " + std::to_string(p.d) + " must be >= 1");
        return errs;
    }
    const auto d = static_cast<std::size_t>(p.d);
    if (p.hurst.size() != d) errs.push_back("H has " + std::to_string(p.hurst.size()) + " entries, expected d");
    if (p.alpha.size() != d) errs.push_back("alpha has " + std::to_string(p.alpha.size()) + " entries, expected d");
    if (p.nu.size() != d) errs.push_back("nu has " + std::to_string(p.nu.size()) + " entries, expected d");
    if (p.rho.rows() != p.d || p.rho.cols() != p.d) errs.push_back("rho must be d x d");
    if (p.eta.rows() != p.d || p.eta.cols() != p.d) errs.push_back("eta must be d x d");
    if (!errs.empty()) return errs;

    for (int i = 0; i < p.d; ++i) {
        check_marginal(errs, "[" + std::to_string(i + 1) + "]", p.hurst[i], p.alpha[i], p.nu[i], process);
        if (p.rho(i, i) != 1.0) errs.push_back("rho[" + std::to_string(i + 1) + "][" + std::to_string(i + 1) + "] must be 1");
        if (p.eta(i, i) != 0.0) errs.push_back("eta[" + std::to_string(i + 1) + "][" + std::to_string(i + 1) + "] must be 0");
    }
    for (int i = 0; i < p.d; ++i) {
        for (int j = i + 1; j < p.d; ++j) {
            const std::string tag = " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            if (p.rho(i, j) != p.rho(j, i)) errs.push_back("rho not symmetric at" + tag);
            if (p.eta(i, j) != -p.eta(j, i)) errs.push_back("eta not antisymmetric at" + tag);
            check_cross(errs, tag, p.hurst[i], p.hurst[j], p.rho(i, j), p.eta(i, j));
        }
    }
    return errs;
}

std::vector<std::string> violations(const PairParams& p, Process process) {
    std::vector<std::string> errs;
    check_marginal(errs, "1", p.h1, p.alpha1, p.nu1, process);
    check_marginal(errs, "2", p.h2, p.alpha2, p.nu2, process);
    check_cross(errs, "", p.h1, p.h2, p.rho, p.eta12);
    return errs;
}

ValidatedModel validate(const ModelParams& p, Process process) {
    auto errs = violations(p, process);
    if (!errs.empty()) throw ValidationError(std::move(errs));
    return ValidatedModel(p, process);
}

void require_valid(const PairParams& p, Process process) {
    auto errs = violations(p, process);
    if (!errs.empty()) throw ValidationError(std::move(errs));
}

PairParams ValidatedModel::pair(int i, int j) const {
    if (i < 0 || j < 0 || i >= p_.d || j >= p_.d || i == j) {
        throw std::out_of_range("pair index out of range");
    }
    return {p_.hurst[i], p_.hurst[j], p_.alpha[i], p_.alpha[j], p_.nu[i], p_.nu[j], p_.rho(i, j), p_.eta(i, j)};
}

ModelParams make_pair_model(const PairParams& p) {
    ModelParams m;
    m.d = 2;
    m.hurst = {p.h1, p.h2};
    m.alpha = {p.alpha1, p.alpha2};
    m.nu = {p.nu1, p.nu2};
    m.rho = Eigen::MatrixXd::Identity(2, 2);
    m.rho(0, 1) = m.rho(1, 0) = p.rho;
    m.eta = Eigen::MatrixXd::Zero(2, 2);
    m.eta(0, 1) = p.eta12;
    m.eta(1, 0) = -p.eta12;
    return m;
}

Process process_from_string(const std::string& s) {
    if (s == "mfou") return Process::mfou;
    if (s == "mfbm") return Process::mfbm;
    throw std::invalid_argument("unknown process '" + s + "' (expected mfou or mfbm)");
}

std::string to_string(Process p) { return p == Process::mfou ? "mfou" : "mfbm"; }

}  // namespace mfou
