#include "hoinfo/error.hpp"
#include "hoinfo/gaussian_info.hpp"
#include "hoinfo/pairwise.hpp"
#include "hoinfo/pipeline.hpp"
#include "hoinfo/synthgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace hoinfo;

namespace {

Dataset to_dataset(const Matrix& values, std::optional<std::vector<std::string>> names) {
    return Dataset(values, names ? std::move(*names) : default_names(static_cast<std::size_t>(values.cols())));
}

py::dict estimate_dict(const OInfoEstimate& e, const std::string& status) {
    py::dict d;
    d["members"] = e.multiplet.indices();
    d["omega"] = e.omega;
    d["ci"] = py::make_tuple(e.ci_low, e.ci_high);
    d["p_raw"] = e.p_raw;
    d["p_adj"] = e.p_adj;
    d["status"] = status;
    return d;
}

}  // namespace

PYBIND11_MODULE(_hoinfo, m) {
    m.doc() = "Gaussian-copula O-information scans";

    static py::exception<Error> error_type(m, "HoinfoError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def(
        "omega_analytic",
        [](const Matrix& corr) {
            const auto r = omega_analytic(CorrelationModel(corr));
            return py::dict(py::arg("omega") = r.omega, py::arg("tc") = r.tc, py::arg("dtc") = r.dtc);
        },
        py::arg("corr"), "Omega, TC and DTC (nats) of a Gaussian with this correlation matrix.");

    m.def("triplet_omega", &triplet_omega_from_correlations, py::arg("rho_xy"), py::arg("rho_xz"),
          py::arg("rho_yz"));
    m.def("conditional_correlation", &conditional_correlation, py::arg("rho_xy"), py::arg("rho_xz"),
          py::arg("rho_yz"));

    m.def(
        "solve_ecov", [](double target) { return solve_ecov(target).ecov; }, py::arg("target_omega"),
        "Residual covariance giving a triplet of default loadings the target Omega.");

    m.def(
        "copula_scores",
        [](const Matrix& values, std::optional<std::vector<std::string>> names) {
            return copula_transform(to_dataset(values, std::move(names))).scores();
        },
        py::arg("values"), py::arg("names") = py::none());

    m.def(
        "partial_correlations",
        [](const Matrix& values, std::optional<std::vector<std::string>> names) {
            return partial_correlation_network(copula_transform(to_dataset(values, std::move(names)))).partial;
        },
        py::arg("values"), py::arg("names") = py::none());

    m.def(
        "generate",
        [](const std::string& preset, double omega, std::size_t n, std::uint64_t seed) {
            const auto which = parse_preset(preset);
            if (!which) throw Error(ErrorCode::InvalidArgument, "unknown preset '" + preset + "'");
            TripletSpec each;
            each.target_omega = omega;
            const auto layout = preset_layout(*which, each);
            const auto model = assemble(layout);
            const auto d = sample(model.model, n, seed, model.names);
            return py::make_tuple(d.values(), d.names(), layout_manifest_json(layout, model, n, seed));
        },
        py::arg("preset"), py::arg("omega"), py::arg("n") = 5000, py::arg("seed") = 0,
        "Returns (values, names, truth_json).");

    m.def(
        "analyze",
        [](const Matrix& values, std::optional<std::vector<std::string>> names, std::size_t max_order, double alpha,
           std::size_t bootstrap, std::uint64_t seed, std::size_t threads, bool bias_correction,
           bool prune_same_sign_only, std::uint64_t cap) {
            const auto d = to_dataset(values, std::move(names));
            AnalysisConfig cfg;
            cfg.scan.max_order = max_order;
            cfg.scan.cap = cap;
            cfg.bootstrap.n_resamples = bootstrap;
            cfg.bootstrap.alpha = alpha;
            cfg.bootstrap.seed = seed;
            cfg.threads = threads;
            cfg.estimator.bias_correction = bias_correction;
            cfg.prune_same_sign_only = prune_same_sign_only;
            AnalysisResult r;
            {
                py::gil_scoped_release release;
                r = analyze(d, cfg);
            }
            py::list estimates;
            for (std::size_t i = 0; i < r.estimates.size(); ++i) estimates.append(estimate_dict(r.estimates[i], r.status[i]));
            py::dict out;
            out["names"] = r.names;
            out["estimates"] = estimates;
            out["redundancy"] = hypergraph_to_json(r.hypergraphs.redundancy);
            out["synergy"] = hypergraph_to_json(r.hypergraphs.synergy);
            out["redraws"] = r.redraws;
            return out;
        },
        py::arg("values"), py::arg("names") = py::none(), py::arg("max_order") = 4, py::arg("alpha") = 0.01,
        py::arg("bootstrap") = 1000, py::arg("seed") = 0, py::arg("threads") = 0,
        py::arg("bias_correction") = false, py::arg("prune_same_sign_only") = false,
        py::arg("cap") = kDefaultMultipletCap);
}
