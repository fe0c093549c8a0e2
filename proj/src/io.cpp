#include "mfou/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfou {

namespace {

std::vector<double> vec(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
    return j.at(key).get<std::vector<double>>();
}

Eigen::MatrixXd mat(const json& j, const char* key, int d, double diag) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    m.diagonal().setConstant(diag);
    if (!j.contains(key)) {
        if (d == 1) return m;
        throw std::invalid_argument(std::string("missing key '") + key + "'");
    }
    const auto& rows = j.at(key);
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
        throw std::invalid_argument(std::string("'") + key + "' must be a d x d array");
    }
    for (int i = 0; i < d; ++i) {
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d) {
            throw std::invalid_argument(std::string("'") + key + "' must be a d x d array");
        }
        for (int k = 0; k < d; ++k) m(i, k) = rows[i][k].get<double>();
    }
    return m;
}

json mat_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
        rows.push_back(r);
    }
    return rows;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.d = j.at("d").get<int>();
    if (p.d < 1) throw std::invalid_argument("d must be >= 1");
    p.hurst = vec(j, "H");
    p.alpha = vec(j, "alpha");
    p.nu = vec(j, "nu");
    p.rho = mat(j, "rho", p.d, 1.0);
    p.eta = mat(j, "eta", p.d, 0.0);
    return p;
}

json params_to_json(const ModelParams& p) {
    json j;
    j["d"] = p.d;
    j["H"] = p.hurst;
    j["alpha"] = p.alpha;
    j["nu"] = p.nu;
    j["rho"] = mat_json(p.rho);
    j["eta"] = mat_json(p.eta);
    return j;
}

DeltaRule delta_rule_from_json(const json& j) {
    DeltaRule d;
    if (j.is_number()) {
        d.value = j.get<double>();
        return d;
    }
    const std::string rule = j.value("rule", "fixed");
    if (rule == "fixed") {
        d.value = j.at("value").get<double>();
    } else if (rule == "power") {
        d.kind = DeltaRule::Kind::power;
        d.value = j.value("scale", 1.0);
        d.exponent = j.at("exponent").get<double>();
    } else {
        throw std::invalid_argument("unknown delta rule '" + rule + "'");
    }
    return d;
}

json delta_rule_to_json(const DeltaRule& d) {
    json j;
    if (d.kind == DeltaRule::Kind::fixed) {
        j["rule"] = "fixed";
        j["value"] = d.value;
    } else {
        j["rule"] = "power";
        j["scale"] = d.value;
        j["exponent"] = d.exponent;
    }
    return j;
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig c;
    c.params = params_from_json(j.at("params"));
    c.estimator = estimator_from_string(j.at("estimator").get<std::string>());
    if (j.contains("n_ladder")) c.n_ladder = j.at("n_ladder").get<std::vector<std::size_t>>();
    if (j.contains("delta")) c.delta = delta_rule_from_json(j.at("delta"));
    c.s = j.value("s", 1);
    c.replicates = j.value("replicates", std::size_t{1000});
    c.master_seed = j.value("seed", std::uint64_t{1});
    c.scheme = scheme_from_string(j.value("scheme", std::string("exact")));
    c.substeps = j.value("substeps", 1);
    if (j.contains("pair")) {
        const auto pr = j.at("pair").get<std::vector<int>>();
        if (pr.empty() || pr.size() > 2) throw std::invalid_argument("'pair' must list one or two components");
        c.comp1 = pr[0] - 1;
        c.comp2 = pr.size() == 2 ? pr[1] - 1 : c.comp1 + 1;
    }
    return c;
}

json experiment_to_json(const ExperimentConfig& c) {
    json j;
    j["params"] = params_to_json(c.params);
    j["estimator"] = to_string(c.estimator);
    j["n_ladder"] = c.n_ladder;
    j["delta"] = delta_rule_to_json(c.delta);
    j["s"] = c.s;
    j["replicates"] = c.replicates;
    j["seed"] = c.master_seed;
    j["scheme"] = to_string(c.scheme);
    j["substeps"] = c.substeps;
    j["pair"] = {c.comp1 + 1, c.comp2 + 1};
    return j;
}

std::string config_hash(const ExperimentConfig& c) {
    const std::string text = experiment_to_json(c).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "t";
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) out += ",Y" + std::to_string(i + 1);
    out += '\n';
    for (Eigen::Index k = 0; k < t.values.cols(); ++k) {
        out += format_double(t.grid.time(static_cast<std::size_t>(k)));
        for (Eigen::Index i = 0; i < t.values.rows(); ++i) out += ',' + format_double(t.values(i, k));
        out += '\n';
    }
    return out;
}

json trajectory_meta(const Trajectory& t, const ModelParams& p) {
    json j;
    j["params"] = params_to_json(p);
    j["grid"] = {{"n", t.grid.n}, {"delta", t.grid.delta}, {"horizon", t.grid.horizon()}};
    j["seed"] = t.seed;
    j["scheme"] = to_string(t.origin);
    j["substeps"] = t.substeps;
    return j;
}

CsvSeries read_trajectory_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty trajectory file");
    std::size_t cols = 0;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) ++cols;
    }
    if (cols < 2) throw std::invalid_argument(path + ": header must be t,Y1,...");
    CsvSeries s;
    s.columns.resize(cols - 1);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= cols) throw std::invalid_argument(path + ": too many fields on line " + std::to_string(row));
            const double v = std::stod(cell);
            if (c == 0) s.time.push_back(v);
            else s.columns[c - 1].push_back(v);
            ++c;
        }
        if (c != cols) throw std::invalid_argument(path + ": wrong field count on line " + std::to_string(row));
    }
    if (s.time.size() < 2) throw std::invalid_argument(path + ": need at least two rows");
    return s;
}

json estimate_to_json(const EstimateResult& r) {
    json j;
    j["estimator"] = to_string(r.estimator);
    j["n"] = r.n;
    if (r.s > 0) j["s"] = r.s;
    j["delta"] = r.delta;
    if (r.rho || r.eta) {
        j["rho"] = opt(r.rho);
        j["eta"] = opt(r.eta);
        j["eta_supported"] = r.eta_supported;
    }
    if (r.rho_eta_zero) j["rho_eta_zero"] = *r.rho_eta_zero;
    if (r.nu2) j["nu2"] = *r.nu2;
    return j;
}

json rate_to_json(const RatePrediction& r) {
    return {{"exponent", r.exponent}, {"log_correction", r.log_correction}, {"regime", to_string(r.regime)}};
}

json series_to_json(const SeriesLimit& s) {
    return {{"value", s.value}, {"tail_bound", s.tail_bound}, {"truncation", s.terms}};
}

json density_to_json(const DensityDiagnostics& d) {
    json j;
    j["scale"] = d.scale;
    j["count"] = d.count;
    j["mean"] = d.mean;
    j["sd"] = d.sd;
    j["ks"] = d.ks;
    j["ks_critical_1pct"] = d.ks_critical;
    j["skewness"] = d.skewness;
    j["skewness_se"] = d.skewness_se;
    j["excess_kurtosis"] = d.excess_kurtosis;
    j["kurtosis_se"] = d.kurtosis_se;
    j["bin_edges"] = d.bin_edges;
    j["density"] = d.density;
    return j;
}

std::string report_errors_csv(const McReport& r) {
    std::string out = "n,replicate,estimand,error\n";
    for (std::size_t li = 0; li < r.config.n_ladder.size(); ++li) {
        const std::string n = std::to_string(r.config.n_ladder[li]);
        for (std::size_t m = 0; m < r.config.replicates; ++m) {
            for (std::size_t e = 0; e < r.estimands.size(); ++e) {
                const double x = r.errors[e][li][m];
                out += n + ',' + std::to_string(m) + ',' + r.estimands[e] + ',' + (std::isnan(x) ? "nan" : format_double(x)) + '\n';
            }
        }
    }
    return out;
}

json report_summary(const McReport& r) {
    json j;
    j["config_hash"] = r.config_hash;
    j["config"] = experiment_to_json(r.config);
    json per = json::object();
    for (std::size_t e = 0; e < r.estimands.size(); ++e) {
        json rows = json::array();
        for (const auto& s : r.stats[e]) {
            rows.push_back({{"n", s.n}, {"delta", s.delta}, {"ok", s.ok}, {"failed", s.failed}, {"mean", s.mean},
                            {"mean_se", s.mean_se}, {"rmse", s.rmse}, {"rmse_se", s.rmse_se}});
        }
        per[r.estimands[e]] = rows;
    }
    j["ladder"] = per;
    if (r.config.n_ladder.size() >= 3) {
        json sl = json::object();
        try {
            for (const auto& [name, f] : rmse_slopes(r)) {
                sl[name] = {{"slope", f.slope}, {"stderr", f.stderr_}, {"points", f.points}};
            }
        } catch (const std::invalid_argument& e) {
            // failures can leave fewer than three clean ladder points
            sl = {{"error", e.what()}};
        }
        j["slopes"] = sl;
    }
    j["failures"] = r.failures;
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, target);
}

}  // namespace mfou
