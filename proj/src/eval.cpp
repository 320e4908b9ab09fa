#include "uncoupled/eval.hpp"

#include "uncoupled/baselines.hpp"
#include "uncoupled/dataio.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/errors.hpp"
#include "uncoupled/pairgen.hpp"
#include "uncoupled/rng.hpp"
#include "uncoupled/tt.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

namespace uncoupled {

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::LR: return "lr";
    case Method::Rank: return "rank";
    case Method::RA: return "ra";
    case Method::TT: return "tt";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "lr")
        return Method::LR;
    if (lower == "rank" || lower == "svmrank")
        return Method::Rank;
    if (lower == "ra")
        return Method::RA;
    if (lower == "tt")
        return Method::TT;
    throw ParameterError("unknown method '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const
{
    if (methods.empty())
        throw ParameterError("at least one method is required");
    if (n_u < 1)
        throw ParameterError("n_u must be positive");
    if (n_r_values.empty())
        throw ParameterError("n_r values must be nonempty");
    for (auto n_r : n_r_values)
        if (n_r < 1)
            throw ParameterError("n_r values must be positive");
    if (repeats < 1)
        throw ParameterError("repeats must be at least 1");
    if (dim < 1)
        throw ParameterError("dim must be positive");
    if (test_size < 1)
        throw ParameterError("test_size must be positive");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
        throw ParameterError("noise_std must be finite and nonnegative");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ParameterError("test_fraction must lie in (0, 1)");
    if (!(ranker_reg >= 0.0))
        throw ParameterError("ranker regularization must be nonnegative");
    tuning.validate();
}

const ResultRow* ResultTable::find(std::string_view method, Eigen::Index n_r) const
{
    for (const auto& row : rows)
        if (row.method == method && row.n_r == n_r)
            return &row;
    return nullptr;
}

double mse(const Vector& predictions, const Vector& targets)
{
    if (predictions.size() != targets.size())
        throw ShapeError("mse: prediction and target lengths differ");
    if (predictions.size() == 0)
        throw ShapeError("mse: empty input");
    return (predictions - targets).squaredNorm() / static_cast<double>(targets.size());
}

namespace {

// Outcome of one (repeat, n_r, method) fit.
struct Cell {
    std::optional<double> mse;
    std::string error;
};

// cells[repeat][n_r index][method index]
using Grid = std::vector<std::vector<std::vector<Cell>>>;

void parallel_for(int count, int jobs, const std::function<void(int)>& body)
{
    const int workers = std::clamp(jobs, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++)
                body(i);
        });
}

template <class Fn>
Cell run_cell(Fn&& fn)
{
    Cell cell;
    try {
        cell.mse = fn();
        if (!std::isfinite(*cell.mse)) {
            cell.mse.reset();
            cell.error = "non-finite test MSE";
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

// Everything a method needs for one cell. RA, TT and RANK see only the
// unlabeled features, the comparisons and the target distribution.
struct CellInputs {
    const Dataset& labeled_train;
    const Matrix& unlabeled;
    const PairwiseSet& pairs;
    DistributionPtr dist;
    const RiskConfig& weights;
    const Dataset& test;
};

double fit_and_score(Method method, const CellInputs& in, const ExperimentSpec& spec)
{
    const auto gen = BregmanGenerator::squared();
    const Vector& y_test = in.test.targets();
    switch (method) {
    case Method::LR: {
        const LinearModel model = lr_fit(in.labeled_train, spec.fit_intercept);
        return mse(model.predict(in.test.features()), y_test);
    }
    case Method::Rank: {
        const RankerModel ranker = ranker_fit(in.pairs, spec.ranker_reg);
        return mse(rank_predict(ranker, in.unlabeled, in.dist, in.test.features()), y_test);
    }
    case Method::RA: {
        RaFitOptions options;
        options.fit_intercept = spec.fit_intercept;
        LinearModel model = spec.lambda_mode == LambdaMode::Optimal
                                ? ra_fit_optimal_lambda(gen, in.unlabeled, in.pairs, in.weights.w1,
                                                        in.weights.w2, options)
                                      .model
                                : ra_fit(gen, in.unlabeled, in.pairs, in.weights, options);
        return mse(model.predict(in.test.features()), y_test);
    }
    case Method::TT: {
        TtFitOptions options;
        options.fit_intercept = spec.fit_intercept;
        const TtConfig cfg;
        const LinearModel model = tt_fit(gen, in.unlabeled, in.pairs, cfg, nullptr, options);
        return mse(tt_predict(model, *in.dist, in.test.features(), cfg), y_test);
    }
    }
    throw ParameterError("unknown method");
}

ResultTable aggregate(const Grid& grid, const ExperimentSpec& spec)
{
    ResultTable table;
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
        const std::string name(method_name(spec.methods[m]));
        for (std::size_t k = 0; k < spec.n_r_values.size(); ++k) {
            std::vector<double> values;
            for (int r = 0; r < spec.repeats; ++r) {
                const Cell& cell = grid[static_cast<std::size_t>(r)][k][m];
                if (cell.mse)
                    values.push_back(*cell.mse);
                else
                    table.errors.push_back({name, spec.n_r_values[k], r, cell.error});
            }
            ResultRow row{name, spec.n_r_values[k], std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), static_cast<int>(values.size())};
            if (!values.empty()) {
                const double n = static_cast<double>(values.size());
                const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
                double ss = 0.0;
                for (double v : values)
                    ss += (v - mean) * (v - mean);
                row.mean_mse = mean;
                row.std_mse = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

Grid make_grid(const ExperimentSpec& spec)
{
    return Grid(static_cast<std::size_t>(spec.repeats),
                std::vector<std::vector<Cell>>(spec.n_r_values.size(),
                                               std::vector<Cell>(spec.methods.size())));
}

std::uint64_t u64(std::size_t v) { return static_cast<std::uint64_t>(v); }

} // namespace

ResultTable run_synthetic(const ExperimentSpec& spec)
{
    spec.validate();
    Grid grid = make_grid(spec);

    // The Gaussian target marginal does not depend on theta_true, so its
    // weights are tuned once for the whole sweep.
    const double target_std = std::sqrt(1.0 + spec.noise_std * spec.noise_std);
    const DistributionPtr gaussian = gaussian_distribution(0.0, target_std);
    std::optional<RiskConfig> shared_weights;
    const bool needs_weights =
        std::find(spec.methods.begin(), spec.methods.end(), Method::RA) != spec.methods.end();
    if (needs_weights && !spec.use_empirical_cdf)
        shared_weights = tune_weights(*gaussian, spec.tuning);

    parallel_for(spec.repeats, spec.jobs, [&](int r) {
        const auto ur = static_cast<std::uint64_t>(r);
        for (std::size_t k = 0; k < spec.n_r_values.size(); ++k) {
            auto& cells = grid[static_cast<std::size_t>(r)][k];
            try {
                Rng theta_rng = make_rng(spec.seed, {ur, u64(k), 0});
                const auto problem = SyntheticSpec::random(spec.dim, spec.noise_std, theta_rng());
                Rng data_rng = make_rng(spec.seed, {ur, u64(k), 1});
                const Dataset train = generate_synthetic(problem, spec.n_u, data_rng);
                const Dataset test = generate_synthetic(problem, spec.test_size, data_rng);
                Rng pair_rng = make_rng(spec.seed, {ur, u64(k), 2});
                const PairwiseSet pairs =
                    sample_pairwise_from_spec(problem, spec.n_r_values[k], pair_rng);

                DistributionPtr dist = gaussian;
                RiskConfig weights = shared_weights.value_or(RiskConfig{});
                if (spec.use_empirical_cdf) {
                    const Vector& y = train.targets();
                    const std::span<const double> values(y.data(), static_cast<std::size_t>(y.size()));
                    dist = empirical_distribution(EmpiricalCdf(values));
                    if (needs_weights)
                        weights = tune_weights_empirical(values, spec.tuning);
                }
                const CellInputs inputs{train, train.features(), pairs, dist, weights, test};
                for (std::size_t m = 0; m < spec.methods.size(); ++m)
                    cells[m] = run_cell([&] { return fit_and_score(spec.methods[m], inputs, spec); });
            } catch (const std::exception& e) {
                for (auto& cell : cells)
                    cell = Cell{std::nullopt, e.what()};
            }
        }
    });
    return aggregate(grid, spec);
}

ResultTable run_benchmark(const Dataset& data, const ExperimentSpec& spec)
{
    spec.validate();
    if (!data.has_targets())
        throw ParameterError("benchmark data needs targets");
    const Eigen::Index n = data.rows();
    const auto n_test = static_cast<Eigen::Index>(std::llround(spec.test_fraction * static_cast<double>(n)));
    if (n_test < 1 || n - n_test < 2)
        throw EmptyDataError("dataset too small for a train/test split");

    Grid grid = make_grid(spec);
    parallel_for(spec.repeats, spec.jobs, [&](int r) {
        const auto ur = static_cast<std::uint64_t>(r);
        auto& repeat_cells = grid[static_cast<std::size_t>(r)];
        try {
            Rng split_rng = make_rng(spec.seed, {ur, 1});
            std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            std::shuffle(order.begin(), order.end(), split_rng);
            const std::vector<Eigen::Index> test_rows(order.begin(), order.begin() + n_test);
            const std::vector<Eigen::Index> train_rows(order.begin() + n_test, order.end());
            Dataset train = data.subset(train_rows);
            Dataset test = data.subset(test_rows);
            if (spec.standardize) {
                auto scaled = standardize(train);
                test = scaled.transform.apply(test);
                train = std::move(scaled.data);
            }

            const Vector& y = train.targets();
            const std::span<const double> values(y.data(), static_cast<std::size_t>(y.size()));
            if (y.maxCoeff() == y.minCoeff()) {
                // Every method can only reproduce the single observed value.
                const Vector constant = Vector::Constant(test.rows(), y(0));
                const double err = mse(constant, test.targets());
                for (auto& cells : repeat_cells)
                    for (auto& cell : cells)
                        cell.mse = err;
                return;
            }

            DistributionPtr dist;
            RiskConfig weights;
            if (spec.use_empirical_cdf) {
                dist = empirical_distribution(EmpiricalCdf(values));
                weights = tune_weights_empirical(values, spec.tuning);
            } else {
                dist = kde_distribution(fit_kde(values));
                weights = tune_weights(*dist, spec.tuning);
            }

            for (std::size_t k = 0; k < spec.n_r_values.size(); ++k) {
                auto& cells = repeat_cells[k];
                try {
                    Rng pair_rng = make_rng(spec.seed, {ur, u64(k), 2});
                    const PairwiseSet pairs =
                        sample_pairwise_from_dataset(train, spec.n_r_values[k], pair_rng);
                    const CellInputs inputs{train, train.features(), pairs, dist, weights, test};
                    for (std::size_t m = 0; m < spec.methods.size(); ++m)
                        cells[m] =
                            run_cell([&] { return fit_and_score(spec.methods[m], inputs, spec); });
                } catch (const std::exception& e) {
                    for (auto& cell : cells)
                        cell = Cell{std::nullopt, e.what()};
                }
            }
        } catch (const std::exception& e) {
            for (auto& cells : repeat_cells)
                for (auto& cell : cells)
                    cell = Cell{std::nullopt, e.what()};
        }
    });
    return aggregate(grid, spec);
}

// ---------------------------------------------------------------------------
// Monte-Carlo checks

Lemma1Report check_lemma1(Eigen::Index n_samples, std::uint64_t seed)
{
    if (n_samples < 10000)
        throw ParameterError("check_lemma1 needs at least 1e4 samples");
    const auto gen = BregmanGenerator::squared();
    const auto problem = SyntheticSpec::random(5, 0.1, seed);
    Rng h_rng = make_rng(seed, {3});
    const LinearModel h(random_unit_vector(5, h_rng));
    const auto target = gaussian_distribution(0.0, problem.target_std());

    Rng data_rng = make_rng(seed, {1});
    const Dataset sample = generate_synthetic(problem, n_samples, data_rng);
    Rng pair_rng = make_rng(seed, {2});
    const PairwiseSet pairs = sample_pairwise_from_spec(problem, n_samples, pair_rng);

    const Vector hx = h.predict(sample.features());
    const Vector hp = h.predict(pairs.winners());
    const Vector hm = h.predict(pairs.losers());
    const Vector& y = sample.targets();

    double mean_plus = 0.0, mean_minus = 0.0, abs_plus = 0.0, abs_minus = 0.0;
    for (Eigen::Index i = 0; i < pairs.rows(); ++i) {
        const double a = gen.phi_prime(hp(i));
        const double b = gen.phi_prime(hm(i));
        mean_plus += a;
        mean_minus += b;
        abs_plus += std::abs(a);
        abs_minus += std::abs(b);
    }
    double weighted_plus = 0.0, weighted_minus = 0.0, mean_x = 0.0, abs_x = 0.0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        const double d = gen.phi_prime(hx(i));
        const double f = target->cdf(y(i));
        weighted_plus += 2.0 * f * d;
        weighted_minus += 2.0 * (1.0 - f) * d;
        mean_x += d;
        abs_x += std::abs(d);
    }
    const double nr = static_cast<double>(pairs.rows());
    const double nx = static_cast<double>(sample.rows());
    mean_plus /= nr;
    mean_minus /= nr;
    abs_plus /= nr;
    abs_minus /= nr;
    weighted_plus /= nx;
    weighted_minus /= nx;
    mean_x /= nx;
    abs_x /= nx;

    Lemma1Report report;
    report.rel_err_plus = std::abs(mean_plus - weighted_plus) / (abs_plus + 1e-9);
    report.rel_err_minus = std::abs(mean_minus - weighted_minus) / (abs_minus + 1e-9);
    report.rel_err_mixture = std::abs(mean_x - 0.5 * (mean_plus + mean_minus)) / (abs_x + 1e-9);
    return report;
}

namespace {

// X ~ U[0, 1], Y = X: the winner of a comparison is the larger draw.
PairwiseSet uniform_pairs(Eigen::Index n, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix winners(n, 1), losers(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = unit(rng);
        const double b = unit(rng);
        winners(i, 0) = std::max(a, b);
        losers(i, 0) = std::min(a, b);
    }
    return PairwiseSet(std::move(winners), std::move(losers));
}

Matrix uniform_features(Eigen::Index n, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix x(n, 1);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i, 0) = unit(rng);
    return x;
}

double sample_variance(const std::vector<double>& v)
{
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return v.size() > 1 ? ss / (n - 1.0) : 0.0;
}

} // namespace

Theorem1Report check_theorem1_variance(const Theorem1Options& options, std::uint64_t seed)
{
    if (options.n_r < 1 || options.n_u_ratio < 1 || options.resamples < 2 || options.offsets.empty())
        throw ParameterError("invalid lambda-variance check options");
    const auto gen = BregmanGenerator::squared();
    const LinearModel h(Vector::Constant(1, options.theta));

    Theorem1Report report;
    Rng pilot_rng = make_rng(seed, {20});
    report.variances = estimate_variances(h, gen, uniform_pairs(100000, pilot_rng));
    report.lambda_star = optimal_lambda(options.w1, options.w2, report.variances);

    std::vector<double> offsets = options.offsets;
    std::sort(offsets.begin(), offsets.end());
    for (double o : offsets)
        report.lambdas.push_back(report.lambda_star + o);
    report.center = static_cast<std::size_t>(
        std::min_element(offsets.begin(), offsets.end(),
                         [](double a, double b) { return std::abs(a) < std::abs(b); }) -
        offsets.begin());

    // Common random numbers: every lambda sees the same resampled data.
    std::vector<std::vector<double>> risks(report.lambdas.size());
    Rng rng = make_rng(seed, {21});
    const Eigen::Index n_u = options.n_r * options.n_u_ratio;
    for (int s = 0; s < options.resamples; ++s) {
        const Matrix unlabeled = uniform_features(n_u, rng);
        const PairwiseSet pairs = uniform_pairs(options.n_r, rng);
        for (std::size_t j = 0; j < report.lambdas.size(); ++j) {
            const RiskConfig cfg{options.w1, options.w2, report.lambdas[j]};
            risks[j].push_back(ra_empirical_risk(h, gen, unlabeled, pairs, cfg));
        }
    }
    for (const auto& r : risks)
        report.risk_variances.push_back(sample_variance(r));
    report.argmin = static_cast<std::size_t>(
        std::min_element(report.risk_variances.begin(), report.risk_variances.end()) -
        report.risk_variances.begin());
    return report;
}

CounterexampleReport check_counterexample(Eigen::Index n_samples, std::uint64_t seed)
{
    if (n_samples < 100000)
        throw ParameterError("check_counterexample needs at least 1e5 samples");
    using V = CounterexampleVariant;
    const Dataset base = counterexample_sample(V::Base, n_samples, seed);
    const Dataset tilde = counterexample_sample(V::Tilde, n_samples, seed);

    const auto column = [](const Dataset& d) {
        const auto& x = d.features();
        return std::vector<double>(x.data(), x.data() + x.rows());
    };
    const auto targets = [](const Dataset& d) {
        const auto& y = d.targets();
        return std::vector<double>(y.data(), y.data() + y.size());
    };

    CounterexampleReport report;
    report.ks_x = ks_distance(EmpiricalCdf(column(base)), EmpiricalCdf(column(tilde)));
    report.ks_y = ks_distance(EmpiricalCdf(targets(base)), EmpiricalCdf(targets(tilde)));

    const auto pair_cells = [&](V variant) {
        const Dataset first = counterexample_sample(variant, n_samples, seed + 1);
        const Dataset second = counterexample_sample(variant, n_samples, seed + 2);
        const PairwiseSet pairs = make_pairwise(first.features(), first.targets(),
                                                second.features(), second.targets());
        std::vector<double> cells(4, 0.0);
        for (Eigen::Index i = 0; i < pairs.rows(); ++i) {
            const int idx = (pairs.winners()(i, 0) >= 0.0 ? 2 : 0) + (pairs.losers()(i, 0) >= 0.0 ? 1 : 0);
            cells[static_cast<std::size_t>(idx)] += 1.0;
        }
        for (double& c : cells)
            c /= static_cast<double>(pairs.rows());
        return cells;
    };
    report.base_pair_cells = pair_cells(V::Base);
    report.tilde_pair_cells = pair_cells(V::Tilde);

    const auto conditional_mean = [](const Dataset& d, double lo, double hi) {
        double sum = 0.0;
        double count = 0.0;
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            const double x = d.features()(i, 0);
            if (x >= lo && (x < hi || (hi >= 1.0 && x <= hi))) {
                sum += d.targets()(i);
                count += 1.0;
            }
        }
        return count > 0.0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
    };
    report.tilde_mean_neg = conditional_mean(tilde, -1.0, 0.0);
    report.tilde_mean_pos = conditional_mean(tilde, 0.0, 1.0);
    report.base_mean_pos = conditional_mean(base, 0.0, 1.0);
    for (int b = 0; b < 10; ++b) {
        const double lo = -1.0 + 0.2 * b;
        report.base_bin_means.push_back(conditional_mean(base, lo, lo + 0.2));
    }
    const auto [lo, hi] = std::minmax_element(report.base_bin_means.begin(), report.base_bin_means.end());
    report.base_bin_spread = *hi - *lo;
    return report;
}

UnbiasednessReport check_unbiasedness(int resamples, Eigen::Index n, double theta, std::uint64_t seed)
{
    if (resamples < 2 || n < 1)
        throw ParameterError("invalid unbiasedness check options");
    const auto gen = BregmanGenerator::squared();
    const LinearModel h(Vector::Constant(1, theta));
    const RiskConfig at_zero{0.5, 0.0, 0.0};
    const RiskConfig at_one{0.5, 0.0, 1.0};
    constexpr double kSecondMoment = 1.0 / 3.0; // E[Y^2] for Y ~ U[0, 1]

    Rng rng = make_rng(seed, {30});
    std::vector<double> risks, gaps;
    for (int s = 0; s < resamples; ++s) {
        const Matrix unlabeled = uniform_features(n, rng);
        const PairwiseSet pairs = uniform_pairs(n, rng);
        const double r0 = ra_empirical_risk(h, gen, unlabeled, pairs, at_zero);
        risks.push_back(r0 + kSecondMoment);
        gaps.push_back(r0 - ra_empirical_risk(h, gen, unlabeled, pairs, at_one));
    }
    const double count = static_cast<double>(resamples);
    UnbiasednessReport report;
    report.mean_risk = std::accumulate(risks.begin(), risks.end(), 0.0) / count;
    report.standard_error = std::sqrt(sample_variance(risks) / count);
    report.analytic_risk = (theta - 1.0) * (theta - 1.0) / 3.0;
    report.lambda_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / count;
    report.lambda_gap_se = std::sqrt(sample_variance(gaps) / count);
    return report;
}

namespace {

CheckLine line(std::string check, std::string statistic, double value, std::string relation,
               double tolerance)
{
    bool ok = false;
    if (relation == "<")
        ok = value < tolerance;
    else if (relation == "<=")
        ok = value <= tolerance;
    else if (relation == ">=")
        ok = value >= tolerance;
    return CheckLine{std::move(check), std::move(statistic), value, tolerance, std::move(relation), ok};
}

bool wants(const std::vector<std::string>& only, std::string_view name)
{
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
}

} // namespace

std::vector<CheckLine> run_checks(const std::vector<std::string>& only, std::uint64_t seed)
{
    static const std::vector<std::string> known{"lemma1", "theorem1", "counterexample",
                                                "unbiasedness"};
    for (const auto& name : only)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ParameterError("unknown check '" + name + "'");

    std::vector<CheckLine> out;
    if (wants(only, "lemma1")) {
        const auto r = check_lemma1(1000000, seed);
        out.push_back(line("lemma1", "rel_err_plus", r.rel_err_plus, "<", 0.02));
        out.push_back(line("lemma1", "rel_err_minus", r.rel_err_minus, "<", 0.02));
        out.push_back(line("lemma1", "rel_err_mixture", r.rel_err_mixture, "<", 0.02));
    }
    if (wants(only, "theorem1")) {
        const auto r = check_theorem1_variance(Theorem1Options{}, seed);
        const auto& v = r.risk_variances;
        const std::size_t c = r.center;
        const auto steps = static_cast<double>(r.argmin > c ? r.argmin - c : c - r.argmin);
        out.push_back(line("theorem1", "argmin_steps_from_lambda_star", steps, "<=", 1.0));
        if (c >= 2 && c + 2 < v.size()) {
            out.push_back(line("theorem1", "var_ratio_minus_half", v[c] / v[c - 1], "<=", 1.05));
            out.push_back(line("theorem1", "var_ratio_plus_half", v[c] / v[c + 1], "<=", 1.05));
            out.push_back(line("theorem1", "var_ratio_minus_one", v[c] / v[c - 2], "<", 1.0));
            out.push_back(line("theorem1", "var_ratio_plus_one", v[c] / v[c + 2], "<", 1.0));
        }
    }
    if (wants(only, "counterexample")) {
        const auto r = check_counterexample(1000000, seed);
        out.push_back(line("counterexample", "ks_x", r.ks_x, "<", 0.005));
        out.push_back(line("counterexample", "ks_y", r.ks_y, "<", 0.005));
        double worst = 0.0;
        for (double m : r.base_pair_cells)
            worst = std::max(worst, std::abs(m - 0.25));
        for (double m : r.tilde_pair_cells)
            worst = std::max(worst, std::abs(m - 0.25));
        out.push_back(line("counterexample", "pair_cell_max_dev", worst, "<=", 0.01));
        out.push_back(line("counterexample", "tilde_mean_neg_dev", std::abs(r.tilde_mean_neg - 7.0 / 4.0),
                           "<=", 0.02));
        out.push_back(line("counterexample", "tilde_mean_pos_dev",
                           std::abs(r.tilde_mean_pos - 23.0 / 12.0), "<=", 0.02));
        out.push_back(line("counterexample", "tilde_vs_base_pos_gap",
                           std::abs(r.tilde_mean_pos - r.base_mean_pos), ">=", 0.05));
        out.push_back(line("counterexample", "base_bin_spread", r.base_bin_spread, "<", 0.03));
    }
    if (wants(only, "unbiasedness")) {
        const auto r = check_unbiasedness(1000, 500, 2.0, seed);
        out.push_back(line("unbiasedness", "z_mean_vs_analytic",
                           std::abs(r.mean_risk - r.analytic_risk) / r.standard_error, "<=", 3.0));
        out.push_back(line("unbiasedness", "z_lambda_gap",
                           std::abs(r.lambda_gap) / r.lambda_gap_se, "<=", 3.0));
    }
    return out;
}

} // namespace uncoupled
