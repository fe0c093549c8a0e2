#include "mfou/asymp.hpp"
#include "mfou/estim.hpp"
#include "mfou/io.hpp"
#include "mfou/kernels.hpp"
#include "mfou/mc.hpp"
#include "mfou/model.hpp"
#include "mfou/sim.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

namespace py = pybind11;
using namespace mfou;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

// Model parameters cross the boundary as JSON text, in the config-file schema.
ModelParams params_arg(const std::string& text) { return params_from_json(json::parse(text)); }

std::string estimate_json(const EstimateResult& r) { return estimate_to_json(r).dump(); }

}  // namespace

PYBIND11_MODULE(_mfou, m) {
    m.doc() = "multivariate fractional Ornstein-Uhlenbeck toolkit";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<PairParams>(m, "PairParams")
        .def(py::init([](double h1, double h2, double alpha1, double alpha2, double nu1, double nu2, double rho,
                         double eta12) { return PairParams{h1, h2, alpha1, alpha2, nu1, nu2, rho, eta12}; }),
             py::arg("h1"), py::arg("h2"), py::arg("alpha1"), py::arg("alpha2"), py::arg("nu1") = 1.0,
             py::arg("nu2") = 1.0, py::arg("rho") = 0.0, py::arg("eta12") = 0.0)
        .def_readwrite("h1", &PairParams::h1)
        .def_readwrite("h2", &PairParams::h2)
        .def_readwrite("alpha1", &PairParams::alpha1)
        .def_readwrite("alpha2", &PairParams::alpha2)
        .def_readwrite("nu1", &PairParams::nu1)
        .def_readwrite("nu2", &PairParams::nu2)
        .def_readwrite("rho", &PairParams::rho)
        .def_readwrite("eta12", &PairParams::eta12)
        .def("hsum", &PairParams::hsum)
        .def("swapped", &PairParams::swapped)
        .def("__repr__", [](const PairParams& p) {
            return "PairParams(h1=" + format_double(p.h1) + ", h2=" + format_double(p.h2) + ", rho=" +
                   format_double(p.rho) + ", eta12=" + format_double(p.eta12) + ")";
        });

    m.def("violations", [](const PairParams& p, const std::string& process) {
        return violations(p, process_from_string(process));
    }, py::arg("params"), py::arg("process") = "mfou");
    m.def("coherence", &coherence, py::arg("h1"), py::arg("h2"), py::arg("rho"), py::arg("eta12"));
    m.def("coherence_ellipse", [](double h1, double h2) {
        const auto e = coherence_ellipse(h1, h2);
        return py::make_tuple(e.a, e.b);
    }, py::arg("h1"), py::arg("h2"));

    m.def("fbm_cov", &fbm_cov, py::arg("h"), py::arg("t"), py::arg("s"));
    m.def("mfbm_cross_cov", &mfbm_cross_cov, py::arg("h1"), py::arg("h2"), py::arg("rho"), py::arg("eta12"),
          py::arg("t"), py::arg("s"));
    m.def("i_integral", &i_integral, py::arg("alpha_i"), py::arg("alpha_j"), py::arg("hsum"), py::arg("t"));
    m.def("damped_i_integral", &damped_i_integral, py::arg("alpha_i"), py::arg("alpha_j"), py::arg("hsum"),
          py::arg("t"));
    m.def("cross_cov", [](const PairParams& p, int i, int j, double lag) {
        require_valid(p);
        return mfou_cross_cov(p, i, j, lag);
    }, py::arg("params"), py::arg("i"), py::arg("j"), py::arg("lag"));
    m.def("cross_cov_series", [](const PairParams& p, int i, int j, double delta, std::size_t count) {
        require_valid(p);
        const auto v = cross_cov_series(p, i, j, delta, count);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }, py::arg("params"), py::arg("i"), py::arg("j"), py::arg("delta"), py::arg("count"));
    m.def("corr", [](const PairParams& p, int i, int j) {
        require_valid(p);
        return mfou_corr(p, i, j);
    }, py::arg("params"), py::arg("i"), py::arg("j"));

    m.def("_simulate", [](const std::string& params, const std::string& scheme, std::size_t n, double delta,
                          std::uint64_t seed, int substeps) {
        const Scheme s = scheme_from_string(scheme);
        const ValidatedModel vm = validate(params_arg(params), s == Scheme::mfbm ? Process::mfbm : Process::mfou);
        const SamplingGrid g = make_grid(n, delta);
        py::gil_scoped_release unlocked;
        Trajectory t = s == Scheme::mfou_exact ? simulate_mfou_exact(vm, g, seed)
                       : s == Scheme::mfou_euler ? simulate_mfou_euler(vm, g, seed, substeps)
                                                 : simulate_mfbm(vm, g, seed);
        return Eigen::MatrixXd(t.values);
    }, py::arg("params"), py::arg("scheme"), py::arg("n"), py::arg("delta"), py::arg("seed"), py::arg("substeps") = 1);

    m.def("low_freq_coeffs", [](const PairParams& p, int s) {
        const auto c = low_freq_coeffs(p, s);
        py::dict d;
        d["a1"] = c.a1, d["a2"] = c.a2, d["a3"] = c.a3;
        d["b1"] = c.b1, d["b2"] = c.b2, d["b3"] = c.b3;
        return d;
    }, py::arg("params"), py::arg("s") = 1);
    m.def("_estimate_low_freq", [](const Array& y1, const Array& y2, const PairParams& p, int s, double delta,
                                   bool corr) {
        return estimate_json(corr ? estimate_low_freq_corr(view(y1), view(y2), p, s, delta)
                                  : estimate_low_freq(view(y1), view(y2), p, s, delta));
    });
    m.def("_estimate_high_freq", [](const Array& y1, const Array& y2, double h1, double h2, double nu1, double nu2,
                                    double delta) {
        return estimate_json(estimate_high_freq(view(y1), view(y2), h1, h2, nu1, nu2, delta));
    });
    m.def("_estimate_nu_low", [](const Array& y, double alpha, double h, int s, double delta) {
        return estimate_json(estimate_nu_low(view(y), alpha, h, s, delta));
    });
    m.def("_estimate_nu_high", [](const Array& y, double h, double delta) {
        return estimate_json(estimate_nu_high(view(y), h, delta));
    });

    m.def("_predicted_rate", [](double hsum, const std::string& process) {
        return rate_to_json(predicted_rate(hsum, process_from_string(process))).dump();
    });
    m.def("var_limit_low_freq", [](const PairParams& p, int s, std::size_t truncation, const std::string& target) {
        return var_limit_low_freq(p, low_freq_coeffs(p, s), truncation, target == "eta" ? Estimand::eta : Estimand::rho)
            .value;
    }, py::arg("params"), py::arg("s") = 1, py::arg("truncation") = kDefaultTruncation, py::arg("target") = "rho");
    m.def("var_limit_high_freq", [](double h1, double h2, double rho, double eta12, std::size_t truncation) {
        return var_limit_high_freq(h1, h2, rho, eta12, truncation).value;
    }, py::arg("h1"), py::arg("h2"), py::arg("rho"), py::arg("eta12"), py::arg("truncation") = kDefaultTruncation);
    m.def("var_limit_supercritical", [](const PairParams& p, int s) {
        const auto c = low_freq_coeffs(p, s);
        return var_limit_supercritical(p, c.a1 + c.a2 + c.a3);
    }, py::arg("params"), py::arg("s") = 1);

    m.def("_run_experiment", [](const std::string& config, int threads) {
        const ExperimentConfig c = experiment_from_json(json::parse(config));
        McReport r;
        {
            py::gil_scoped_release unlocked;
            r = run_experiment(c, threads);
        }
        return py::make_tuple(report_summary(r).dump(), report_errors_csv(r));
    });
}
