#include "uncoupled/baselines.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/errors.hpp"
#include "uncoupled/eval.hpp"
#include "uncoupled/pairgen.hpp"
#include "uncoupled/ra.hpp"
#include "uncoupled/rng.hpp"
#include "uncoupled/tt.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace uncoupled;

namespace {

// Python-facing handle for an immutable target distribution.
struct Distribution {
    DistributionPtr ptr;
    std::string description;
};

std::span<const double> as_span(const Vector& v)
{
    return {v.data(), static_cast<std::size_t>(v.size())};
}

LinearModel model_from(const Vector& theta, bool fit_intercept)
{
    return LinearModel(theta, fit_intercept);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "C++ core for uncoupled regression from pairwise comparisons";
    m.attr("__version__") = std::string(library_version());

    // Later registrations are tried first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

    py::class_<RiskConfig>(m, "RiskConfig")
        .def(py::init([](double w1, double w2, double lam) { return RiskConfig{w1, w2, lam}; }),
             py::arg("w1") = 0.5, py::arg("w2") = 0.0, py::arg("lam") = 0.25)
        .def_readwrite("w1", &RiskConfig::w1)
        .def_readwrite("w2", &RiskConfig::w2)
        .def_readwrite("lam", &RiskConfig::lambda)
        .def("__repr__", [](const RiskConfig& c) {
            return "RiskConfig(w1=" + format_double(c.w1) + ", w2=" + format_double(c.w2) +
                   ", lam=" + format_double(c.lambda) + ")";
        });

    py::class_<Distribution>(m, "Distribution")
        .def("pdf", [](const Distribution& d, double y) { return d.ptr->pdf(y); })
        .def("cdf", [](const Distribution& d, double y) { return d.ptr->cdf(y); })
        .def("inv_cdf", [](const Distribution& d, double u) { return d.ptr->inv_cdf(u); })
        .def("support_bounds", [](const Distribution& d) { return d.ptr->support_bounds(); })
        .def("__repr__", [](const Distribution& d) { return d.description; });

    m.def(
        "gaussian",
        [](double mean, double std) {
            return Distribution{gaussian_distribution(mean, std),
                                "gaussian(" + format_double(mean) + ", " + format_double(std) + ")"};
        },
        py::arg("mean") = 0.0, py::arg("std") = 1.0);
    m.def(
        "uniform",
        [](double a, double b) {
            return Distribution{uniform_distribution(a, b),
                                "uniform(" + format_double(a) + ", " + format_double(b) + ")"};
        },
        py::arg("a") = 0.0, py::arg("b") = 1.0);
    m.def(
        "kde",
        [](const Vector& targets) {
            const KdeModel model = fit_kde(as_span(targets));
            return Distribution{kde_distribution(model),
                                "kde(bandwidth=" + format_double(model.bandwidth) + ")"};
        },
        py::arg("targets"), "Gaussian KDE with a cross-validated bandwidth");
    m.def(
        "empirical",
        [](const Vector& targets) {
            return Distribution{empirical_distribution(EmpiricalCdf(as_span(targets))),
                                "empirical(n=" + std::to_string(targets.size()) + ")"};
        },
        py::arg("targets"));

    m.def(
        "bregman_divergence",
        [](double t, double z, const std::string& generator) {
            return uncoupled::bregman_divergence(BregmanGenerator::from_name(generator), t, z);
        },
        py::arg("t"), py::arg("z"), py::arg("generator") = "squared");

    m.def(
        "err_objective",
        [](const Distribution& d, double w1, double w2, int n_split) {
            RaTuning tuning;
            tuning.n_split = n_split;
            return uncoupled::err_objective(*d.ptr, w1, w2, tuning);
        },
        py::arg("dist"), py::arg("w1"), py::arg("w2"), py::arg("n_split") = 1000);
    m.def(
        "tune_weights",
        [](const Distribution& d, int n_split) {
            RaTuning tuning;
            tuning.n_split = n_split;
            return uncoupled::tune_weights(*d.ptr, tuning);
        },
        py::arg("dist"), py::arg("n_split") = 1000);
    m.def(
        "tune_weights_empirical",
        [](const Vector& targets) { return uncoupled::tune_weights_empirical(as_span(targets)); },
        py::arg("targets"));
    m.def(
        "optimal_lambda",
        [](double w1, double w2, double sigma2_plus, double sigma2_minus) {
            return uncoupled::optimal_lambda(w1, w2, RaVariances{sigma2_plus, sigma2_minus});
        },
        py::arg("w1"), py::arg("w2"), py::arg("sigma2_plus"), py::arg("sigma2_minus"));

    m.def(
        "generate_synthetic",
        [](Eigen::Index n, int dim, double noise_std, std::uint64_t seed) {
            const auto spec = SyntheticSpec::random(dim, noise_std, seed);
            const Dataset data = uncoupled::generate_synthetic(spec, n);
            return py::make_tuple(data.features(), data.targets(), spec.theta_true);
        },
        py::arg("n"), py::arg("dim") = 5, py::arg("noise_std") = 0.1, py::arg("seed") = 0,
        "Returns (x, y, theta_true) from the linear-Gaussian generator");
    m.def(
        "sample_pairs",
        [](const Matrix& x, const Vector& y, Eigen::Index n_r, std::uint64_t seed) {
            Rng rng = make_rng(seed, {2});
            const PairwiseSet pairs = sample_pairwise_from_dataset(Dataset(x, y), n_r, rng);
            return py::make_tuple(pairs.winners(), pairs.losers());
        },
        py::arg("x"), py::arg("y"), py::arg("n_r"), py::arg("seed") = 0,
        "Uniformly sampled comparisons (winners, losers) from labelled rows");

    m.def(
        "ra_empirical_risk",
        [](const Vector& theta, const Matrix& unlabeled, const Matrix& winners,
           const Matrix& losers, const RiskConfig& cfg, const std::string& generator,
           bool fit_intercept) {
            return uncoupled::ra_empirical_risk(model_from(theta, fit_intercept),
                                                BregmanGenerator::from_name(generator), unlabeled,
                                                PairwiseSet(winners, losers), cfg);
        },
        py::arg("theta"), py::arg("unlabeled"), py::arg("winners"), py::arg("losers"),
        py::arg("config"), py::arg("generator") = "squared", py::arg("fit_intercept") = false);
    m.def(
        "ra_fit",
        [](const Matrix& unlabeled, const Matrix& winners, const Matrix& losers,
           const RiskConfig& cfg, const std::string& generator, bool fit_intercept) {
            RaFitOptions options;
            options.fit_intercept = fit_intercept;
            return Vector(uncoupled::ra_fit(BregmanGenerator::from_name(generator), unlabeled,
                                            PairwiseSet(winners, losers), cfg, options)
                              .theta());
        },
        py::arg("unlabeled"), py::arg("winners"), py::arg("losers"), py::arg("config"),
        py::arg("generator") = "squared", py::arg("fit_intercept") = false);

    m.def(
        "tt_surrogate_risk",
        [](const Vector& theta, const Matrix& unlabeled, const Matrix& winners,
           const Matrix& losers, double lam, bool fit_intercept) {
            return uncoupled::tt_surrogate_risk(model_from(theta, fit_intercept),
                                                BregmanGenerator::squared(), unlabeled,
                                                PairwiseSet(winners, losers), lam);
        },
        py::arg("theta"), py::arg("unlabeled"), py::arg("winners"), py::arg("losers"),
        py::arg("lam") = 0.5, py::arg("fit_intercept") = false);
    m.def(
        "tt_fit",
        [](const Matrix& unlabeled, const Matrix& winners, const Matrix& losers, double lam,
           bool fit_intercept) {
            TtConfig cfg;
            cfg.lambda = lam;
            TtFitOptions options;
            options.fit_intercept = fit_intercept;
            return Vector(uncoupled::tt_fit(BregmanGenerator::squared(), unlabeled,
                                            PairwiseSet(winners, losers), cfg, nullptr, options)
                              .theta());
        },
        py::arg("unlabeled"), py::arg("winners"), py::arg("losers"), py::arg("lam") = 0.5,
        py::arg("fit_intercept") = false);
    m.def(
        "tt_predict",
        [](const Vector& theta, const Distribution& d, const Matrix& x, bool fit_intercept) {
            return uncoupled::tt_predict(model_from(theta, fit_intercept), *d.ptr, x);
        },
        py::arg("theta"), py::arg("dist"), py::arg("x"), py::arg("fit_intercept") = false,
        "F_Y^-1(sigma(h(x)))");

    m.def(
        "lr_fit",
        [](const Matrix& x, const Vector& y, bool fit_intercept) {
            return Vector(uncoupled::lr_fit(Dataset(x, y), fit_intercept).theta());
        },
        py::arg("x"), py::arg("y"), py::arg("fit_intercept") = false);
    m.def(
        "ranker_fit",
        [](const Matrix& winners, const Matrix& losers, double reg) {
            return Vector(uncoupled::ranker_fit(PairwiseSet(winners, losers), reg).theta);
        },
        py::arg("winners"), py::arg("losers"), py::arg("reg") = 1e-4);
    m.def(
        "rank_predict",
        [](const Vector& theta, const Matrix& unlabeled, const Distribution& d, const Matrix& x) {
            return uncoupled::rank_predict(RankerModel{theta, 0.0}, unlabeled, d.ptr, x);
        },
        py::arg("theta"), py::arg("unlabeled"), py::arg("dist"), py::arg("x"));

    m.def(
        "mse", [](const Vector& p, const Vector& t) { return uncoupled::mse(p, t); },
        py::arg("predictions"), py::arg("targets"));

    m.def(
        "run_synthetic",
        [](std::vector<std::string> methods, Eigen::Index n_u, std::vector<Eigen::Index> n_r,
           int repeats, std::uint64_t seed, double noise_std, int dim, Eigen::Index test_size,
           int jobs) {
            ExperimentSpec spec;
            spec.methods.clear();
            for (const auto& name : methods)
                spec.methods.push_back(parse_method(name));
            spec.n_u = n_u;
            spec.n_r_values = std::move(n_r);
            spec.repeats = repeats;
            spec.seed = seed;
            spec.noise_std = noise_std;
            spec.dim = dim;
            spec.test_size = test_size;
            spec.jobs = jobs;
            ResultTable table;
            {
                py::gil_scoped_release release;
                table = uncoupled::run_synthetic(spec);
            }
            py::list rows;
            for (const auto& r : table.rows) {
                py::dict row;
                row["method"] = r.method;
                row["n_r"] = r.n_r;
                row["mean_mse"] = r.mean_mse;
                row["std_mse"] = r.std_mse;
                row["repeats"] = r.repeats;
                rows.append(row);
            }
            return rows;
        },
        py::arg("methods") = std::vector<std::string>{"lr", "rank", "ra", "tt"},
        py::arg("n_u") = 2000, py::arg("n_r") = std::vector<Eigen::Index>{100},
        py::arg("repeats") = 3, py::arg("seed") = 0, py::arg("noise_std") = 0.1,
        py::arg("dim") = 5, py::arg("test_size") = 1000, py::arg("jobs") = 1,
        "Synthetic sweep; returns one dict per (method, n_r)");
}
