#pragma once

// Metrics, repeated-experiment protocols and Monte-Carlo property checks.

#include "uncoupled/core.hpp"
#include "uncoupled/ra.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uncoupled {

enum class Method { LR, Rank, RA, TT };

std::string_view method_name(Method m);
/// Accepts lr, rank (or svmrank), ra, tt; case-insensitive.
Method parse_method(std::string_view name);

enum class LambdaMode {
    /// lambda = (w1 + w2) / 2
    Average,
    /// Two-stage variance-optimal lambda.
    Optimal,
};

struct ExperimentSpec {
    std::vector<Method> methods{Method::LR, Method::Rank, Method::RA, Method::TT};
    Eigen::Index n_u = 100000;
    std::vector<Eigen::Index> n_r_values{20, 40, 80, 160, 320, 640, 1280, 2560, 5120, 10240};
    int repeats = 100;
    std::uint64_t seed = 1;
    double noise_std = 0.1;
    int dim = 5;
    Eigen::Index test_size = 1000;
    LambdaMode lambda_mode = LambdaMode::Average;
    /// Use the empirical CDF of the unlabeled targets instead of f_Y.
    bool use_empirical_cdf = false;
    int jobs = 1;
    RaTuning tuning;
    double ranker_reg = 1e-4;
    /// Benchmark only.
    double test_fraction = 0.2;
    bool standardize = false;
    bool fit_intercept = false;

    void validate() const;
};

struct ResultRow {
    std::string method;
    Eigen::Index n_r = 0;
    double mean_mse = 0.0;
    /// Sample standard deviation over repeats; 0 when only one repeat succeeded.
    double std_mse = 0.0;
    int repeats = 0;

    bool operator==(const ResultRow&) const = default;
};

/// A failed fit inside a sweep; the remaining cells still run.
struct CellError {
    std::string method;
    Eigen::Index n_r = 0;
    int repeat = 0;
    std::string message;

    bool operator==(const CellError&) const = default;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<CellError> errors;

    const ResultRow* find(std::string_view method, Eigen::Index n_r) const;
    bool operator==(const ResultTable&) const = default;
};

/// Comment lines ("# key=value") written before the CSV header.
using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

/// Writes "method,n_r,mean_mse,std_mse,repeats" plus '#' metadata and error
/// lines. Numbers use the shortest round-trip representation.
void write_result_csv(std::ostream& out, const ResultTable& table, const CsvMetadata& metadata);
ResultTable read_result_csv(std::istream& in);
/// Whitespace-separated table for gnuplot: one block per method.
void write_plot_data(std::ostream& out, const ResultTable& table);
void print_result_table(std::ostream& out, const ResultTable& table);

/// Library version string, e.g. "0.1.0".
std::string_view library_version();

/// Shortest round-trip decimal form.
std::string format_double(double v);

double mse(const Vector& predictions, const Vector& targets);

ResultTable run_synthetic(const ExperimentSpec& spec);
/// Repeated 80/20 split of a labelled dataset; f_Y is a KDE of the training
/// targets and comparisons come from uniformly sampled training pairs.
ResultTable run_benchmark(const Dataset& data, const ExperimentSpec& spec);

/// One measured statistic against its tolerance.
struct CheckLine {
    std::string check;
    std::string statistic;
    double value = 0.0;
    double tolerance = 0.0;
    /// "<", "<=", ">=" etc., how value is compared with tolerance.
    std::string relation;
    bool passed = false;
};

struct Lemma1Report {
    double rel_err_plus = 0.0;
    double rel_err_minus = 0.0;
    double rel_err_mixture = 0.0;
};

/// Monte-Carlo check of E[phi'(h(X+))] = 2 E[F(Y) phi'(h(X))] and its X-
/// counterpart under the linear-Gaussian generator (d = 5, noise 0.1), for a
/// random unit-norm h and the squared generator.
Lemma1Report check_lemma1(Eigen::Index n_samples, std::uint64_t seed);

struct Theorem1Options {
    Eigen::Index n_r = 200;
    Eigen::Index n_u_ratio = 50;
    int resamples = 2000;
    std::vector<double> offsets{-1.0, -0.5, 0.0, 0.5, 1.0};
    double theta = 2.0;
    double w1 = 0.5;
    double w2 = 0.0;
};

struct Theorem1Report {
    double lambda_star = 0.0;
    RaVariances variances;
    std::vector<double> lambdas;
    std::vector<double> risk_variances;
    std::size_t argmin = 0;
    std::size_t center = 0;
};

/// Variance of ra_empirical_risk across resamples at lambda* + offsets, for
/// X ~ U[0, 1], Y = X and h(x) = theta x. lambda* comes from variances
/// estimated on an independent large comparison sample.
Theorem1Report check_theorem1_variance(const Theorem1Options& options, std::uint64_t seed);

struct CounterexampleReport {
    double ks_x = 0.0;
    double ks_y = 0.0;
    /// (x+ < 0, x- < 0), (<0, >=0), (>=0, <0), (>=0, >=0) masses per variant.
    std::vector<double> base_pair_cells;
    std::vector<double> tilde_pair_cells;
    double tilde_mean_neg = 0.0;
    double tilde_mean_pos = 0.0;
    double base_mean_pos = 0.0;
    /// Base conditional means on 10 equal-width x bins.
    std::vector<double> base_bin_means;
    double base_bin_spread = 0.0;
};

CounterexampleReport check_counterexample(Eigen::Index n_samples, std::uint64_t seed);

struct UnbiasednessReport {
    double mean_risk = 0.0;      // mean of ra_empirical_risk + E[Y^2]
    double standard_error = 0.0;
    double analytic_risk = 0.0;
    /// Mean difference of the risk at lambda = 0 and lambda = 1.
    double lambda_gap = 0.0;
    double lambda_gap_se = 0.0;
};

/// X ~ U[0, 1], Y = X, (w1, w2, lambda) = (1/2, 0, 0), h(x) = theta x.
UnbiasednessReport check_unbiasedness(int resamples, Eigen::Index n, double theta,
                                      std::uint64_t seed);

/// Runs the named suites ("lemma1", "theorem1", "counterexample",
/// "unbiasedness"; empty = all) at their default sizes and tolerances.
std::vector<CheckLine> run_checks(const std::vector<std::string>& only, std::uint64_t seed);

} // namespace uncoupled
