#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mfou {

inline constexpr double kHalfHurstExclusion = 1e-9;
inline constexpr double kCoherenceTol = 1e-12;
inline constexpr double kUnitHsumBand = 1e-6;

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

// Which process the parameters describe. For mfbm the alpha/nu fields are
// ignored by the samplers and alpha may be zero.
enum class Process { mfou, mfbm };

struct ModelParams {
    int d = 0;
    std::vector<double> hurst;
    std::vector<double> alpha;
    std::vector<double> nu;
    Eigen::MatrixXd rho;
    Eigen::MatrixXd eta;
};

struct PairParams {
    double h1 = 0, h2 = 0;
    double alpha1 = 0, alpha2 = 0;
    double nu1 = 1, nu2 = 1;
    double rho = 0;
    double eta12 = 0;

    double hsum() const { return h1 + h2; }
    double hurst(int c) const { return c == 0 ? h1 : h2; }
    double alpha(int c) const { return c == 0 ? alpha1 : alpha2; }
    double nu(int c) const { return c == 0 ? nu1 : nu2; }
    // eta_{ij} for components c1, c2 in {0, 1}
    double eta(int c1, int c2) const { return c1 == c2 ? 0.0 : (c1 == 0 ? eta12 : -eta12); }
    PairParams swapped() const { return {h2, h1, alpha2, alpha1, nu2, nu1, rho, -eta12}; }
};

// Parameters that passed validate(); the only way to build one.
class ValidatedModel {
public:
    const ModelParams& params() const noexcept { return p_; }
    Process process() const noexcept { return process_; }
    int dim() const noexcept { return p_.d; }
    PairParams pair(int i, int j) const;

private:
    ValidatedModel(ModelParams p, Process process) : p_(std::move(p)), process_(process) {}
    friend ValidatedModel validate(const ModelParams&, Process);

    ModelParams p_;
    Process process_;
};

bool near_unit_hsum(double hsum);

double coherence(double h1, double h2, double rho, double eta12);

struct CoherenceEllipse {
    double a;  // rho semi-axis
    double b;  // eta semi-axis
};
CoherenceEllipse coherence_ellipse(double h1, double h2);

// Every violated constraint, empty when the parameters are admissible.
std::vector<std::string> violations(const ModelParams& p, Process process = Process::mfou);
std::vector<std::string> violations(const PairParams& p, Process process = Process::mfou);

// Throws ValidationError listing all violations.
ValidatedModel validate(const ModelParams& p, Process process = Process::mfou);
void require_valid(const PairParams& p, Process process = Process::mfou);

ModelParams make_pair_model(const PairParams& p);

Process process_from_string(const std::string& s);
std::string to_string(Process p);

}  // namespace mfou
