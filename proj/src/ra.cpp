#include "uncoupled/ra.hpp"

#include "uncoupled/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uncoupled {

namespace {

void require_same_dim(const LinearModel& model, const Matrix& unlabeled, const PairwiseSet& pairs)
{
    if (unlabeled.cols() != pairs.dim())
        throw ShapeError("unlabeled data and pairs differ in dimension");
    if (unlabeled.cols() != model.input_dim())
        throw ShapeError("model expects " + std::to_string(model.input_dim()) +
                         " features, data has " + std::to_string(unlabeled.cols()));
}

void require_in_domain(const BregmanGenerator& gen, const Vector& values)
{
    for (double v : values)
        if (!gen.in_domain(v))
            throw DomainError("model output outside the " + std::string(gen.name()) +
                              " generator domain");
}

// d/dtheta of sum_i weights_i * h(x_i), including the intercept slot.
Vector accumulate_gradient(const LinearModel& model, const Matrix& x, const Vector& weights)
{
    Vector g(model.theta().size());
    g.head(x.cols()) = x.transpose() * weights;
    if (model.includes_intercept())
        g(g.size() - 1) = weights.sum();
    return g;
}

template <class Objective>
RiskConfig nested_grid_search(const Objective& err, double bound, const RaTuning& tuning)
{
    double c1 = 0.0;
    double c2 = 0.0;
    double half = bound;
    const int points = tuning.grid_points_per_axis;
    for (int round = 0; round < tuning.grid_rounds; ++round) {
        double best = std::numeric_limits<double>::infinity();
        double b1 = c1;
        double b2 = c2;
        for (int i = 0; i < points; ++i) {
            const double w1 = points == 1 ? c1 : c1 - half + 2.0 * half * i / (points - 1);
            for (int j = 0; j < points; ++j) {
                const double w2 = points == 1 ? c2 : c2 - half + 2.0 * half * j / (points - 1);
                const double v = err(w1, w2);
                if (v < best) {
                    best = v;
                    b1 = w1;
                    b2 = w2;
                }
            }
        }
        c1 = b1;
        c2 = b2;
        half /= 5.0;
    }
    return {c1, c2, 0.5 * (c1 + c2)};
}

} // namespace

void RaTuning::validate() const
{
    if (n_split < 1)
        throw ParameterError("n_split must be positive");
    if (!(quantile_lo > 0.0 && quantile_lo < quantile_hi && quantile_hi < 1.0))
        throw ParameterError("need 0 < quantile_lo < quantile_hi < 1");
    if (grid_rounds < 1 || grid_points_per_axis < 1)
        throw ParameterError("grid_rounds and grid_points_per_axis must be positive");
}

ErrGrid::ErrGrid(const TargetDistribution& dist, const RaTuning& tuning)
{
    tuning.validate();
    y_low_ = dist.inv_cdf(tuning.quantile_lo);
    y_high_ = dist.inv_cdf(tuning.quantile_hi);
    if (!(y_high_ > y_low_))
        throw ParameterError("degenerate quantile range for the Err grid");
    const double dy = (y_high_ - y_low_) / tuning.n_split;
    const auto count = static_cast<std::size_t>(tuning.n_split) + 1;
    y_.resize(count);
    mass_.resize(count);
    cdf_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        y_[i] = y_low_ + static_cast<double>(i) * dy;
        mass_[i] = dist.pdf(y_[i]) * dy;
        cdf_[i] = dist.cdf(y_[i]);
    }
}

double ErrGrid::operator()(double w1, double w2) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i)
        s += mass_[i] * std::abs(y_[i] - 2.0 * w1 * cdf_[i] - 2.0 * w2 * (1.0 - cdf_[i]));
    return s;
}

double err_objective(const TargetDistribution& dist, double w1, double w2, const RaTuning& tuning)
{
    return ErrGrid(dist, tuning)(w1, w2);
}

namespace {

struct EmpiricalErr {
    std::vector<double> y;
    std::vector<double> cdf;

    explicit EmpiricalErr(std::span<const double> targets)
    {
        if (targets.empty())
            throw ParameterError("empirical Err needs target values");
        const EmpiricalCdf ecdf(targets);
        // Sorted order makes the sum independent of the input order.
        y = ecdf.sorted_values();
        cdf.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            cdf[i] = ecdf(y[i]);
    }

    double operator()(double w1, double w2) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            s += std::abs(y[i] - 2.0 * w1 * cdf[i] - 2.0 * w2 * (1.0 - cdf[i]));
        return s / static_cast<double>(y.size());
    }
};

} // namespace

double err_objective_empirical(std::span<const double> targets, double w1, double w2)
{
    return EmpiricalErr(targets)(w1, w2);
}

RiskConfig tune_weights(const TargetDistribution& dist, const RaTuning& tuning)
{
    const ErrGrid grid(dist, tuning);
    const double bound = tuning.weight_search_bound > 0.0
                             ? tuning.weight_search_bound
                             : std::max(std::abs(grid.y_low()), std::abs(grid.y_high()));
    return nested_grid_search(grid, bound, tuning);
}

RiskConfig tune_weights_empirical(std::span<const double> targets, const RaTuning& tuning)
{
    tuning.validate();
    const EmpiricalErr err(targets);
    double bound = tuning.weight_search_bound;
    if (!(bound > 0.0)) {
        const EmpiricalCdf ecdf(targets);
        bound = std::max(std::abs(ecdf.quantile(tuning.quantile_lo)),
                         std::abs(ecdf.quantile(tuning.quantile_hi)));
        if (!(bound > 0.0))
            bound = 1.0;
    }
    return nested_grid_search(err, bound, tuning);
}

double optimal_lambda(double w1, double w2, const RaVariances& v)
{
    const double total = v.sigma2_plus + v.sigma2_minus;
    if (!(total > 0.0))
        throw DegenerateVarianceError("both pair variances are zero; optimal lambda undefined");
    return 2.0 * (w1 * v.sigma2_plus + w2 * v.sigma2_minus) / total;
}

RaVariances estimate_variances(const LinearModel& model, const BregmanGenerator& gen,
                               const PairwiseSet& pairs)
{
    if (pairs.rows() < 2)
        throw ParameterError("variance estimation needs at least two comparisons");
    auto sample_variance = [&](const Matrix& x) {
        const Vector h = model.predict(x);
        require_in_domain(gen, h);
        const Vector d = h.unaryExpr([&](double v) { return gen.phi_prime(v); });
        const double mean = d.mean();
        return (d.array() - mean).square().sum() / static_cast<double>(d.size() - 1);
    };
    return {sample_variance(pairs.winners()), sample_variance(pairs.losers())};
}

double ra_empirical_risk(const LinearModel& model, const BregmanGenerator& gen,
                         const Matrix& unlabeled, const PairwiseSet& pairs, const RiskConfig& cfg)
{
    require_same_dim(model, unlabeled, pairs);
    const Vector h = model.predict(unlabeled);
    const Vector hp = model.predict(pairs.winners());
    const Vector hm = model.predict(pairs.losers());
    require_in_domain(gen, h);
    require_in_domain(gen, hp);
    require_in_domain(gen, hm);

    double unl = 0.0;
    for (double v : h)
        unl += gen.phi(v) - (v - cfg.lambda) * gen.phi_prime(v);
    double pair = 0.0;
    const double a = cfg.w1 - 0.5 * cfg.lambda;
    const double b = cfg.w2 - 0.5 * cfg.lambda;
    for (Eigen::Index i = 0; i < hp.size(); ++i)
        pair += a * gen.phi_prime(hp(i)) + b * gen.phi_prime(hm(i));
    return -unl / static_cast<double>(h.size()) - pair / static_cast<double>(hp.size());
}

Vector ra_risk_gradient(const LinearModel& model, const BregmanGenerator& gen,
                        const Matrix& unlabeled, const PairwiseSet& pairs, const RiskConfig& cfg)
{
    require_same_dim(model, unlabeled, pairs);
    const Vector h = model.predict(unlabeled);
    const Vector hp = model.predict(pairs.winners());
    const Vector hm = model.predict(pairs.losers());
    require_in_domain(gen, h);
    require_in_domain(gen, hp);
    require_in_domain(gen, hm);

    const auto n_u = static_cast<double>(h.size());
    const auto n_r = static_cast<double>(hp.size());
    const double a = cfg.w1 - 0.5 * cfg.lambda;
    const double b = cfg.w2 - 0.5 * cfg.lambda;

    const Vector wu =
        h.unaryExpr([&](double v) { return (v - cfg.lambda) * gen.phi_second(v) / n_u; });
    const Vector wp = hp.unaryExpr([&](double v) { return -a * gen.phi_second(v) / n_r; });
    const Vector wm = hm.unaryExpr([&](double v) { return -b * gen.phi_second(v) / n_r; });
    return accumulate_gradient(model, unlabeled, wu) +
           accumulate_gradient(model, pairs.winners(), wp) +
           accumulate_gradient(model, pairs.losers(), wm);
}

namespace {

LinearModel ra_closed_form(const Matrix& unlabeled, const PairwiseSet& pairs,
                           const RiskConfig& cfg, bool intercept)
{
    const Matrix xu = intercept ? with_intercept_column(unlabeled) : unlabeled;
    const Matrix xp = intercept ? with_intercept_column(pairs.winners()) : pairs.winners();
    const Matrix xm = intercept ? with_intercept_column(pairs.losers()) : pairs.losers();
    const auto n_u = static_cast<double>(xu.rows());
    const Matrix gram = (xu.transpose() * xu) / n_u;
    const Vector rhs = cfg.lambda * xu.colwise().mean().transpose() +
                       (cfg.w1 - 0.5 * cfg.lambda) * xp.colwise().mean().transpose() +
                       (cfg.w2 - 0.5 * cfg.lambda) * xm.colwise().mean().transpose();
    return LinearModel(solve_with_ridge(gram, rhs), intercept);
}

} // namespace

LinearModel ra_fit(const BregmanGenerator& gen, const Matrix& unlabeled, const PairwiseSet& pairs,
                   const RiskConfig& cfg, const RaFitOptions& options)
{
    if (unlabeled.rows() < 1 || pairs.rows() < 1)
        throw ParameterError("ra_fit needs unlabeled data and at least one comparison");
    if (unlabeled.cols() != pairs.dim())
        throw ShapeError("unlabeled data and pairs differ in dimension");
    require_finite(unlabeled, "unlabeled data");

    if (gen.kind() == BregmanGenerator::Kind::Squared && !options.force_iterative)
        return ra_closed_form(unlabeled, pairs, cfg, options.fit_intercept);

    const bool intercept = options.fit_intercept;
    Vector theta0 = Vector::Zero(unlabeled.cols() + (intercept ? 1 : 0));
    if (!gen.in_domain(0.0) && intercept)
        theta0(theta0.size() - 1) = 0.5 * (gen.valid_domain().low + gen.valid_domain().high);

    Objective objective = [&](const Vector& theta, Vector* grad) {
        const LinearModel m(theta, intercept);
        try {
            const double v = ra_empirical_risk(m, gen, unlabeled, pairs, cfg);
            if (grad)
                *grad = ra_risk_gradient(m, gen, unlabeled, pairs, cfg);
            return v;
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    Vector scales = column_scales({&unlabeled, &pairs.winners(), &pairs.losers()});
    if (intercept) {
        scales.conservativeResize(scales.size() + 1);
        scales(scales.size() - 1) = 1.0;
    }
    const MinimizeResult r = minimize_scaled(objective, theta0, scales, options.solver);
    return LinearModel(r.x, intercept);
}

RaTwoStageResult ra_fit_optimal_lambda(const BregmanGenerator& gen, const Matrix& unlabeled,
                                       const PairwiseSet& pairs, double w1, double w2,
                                       const RaFitOptions& options)
{
    RiskConfig cfg{w1, w2, 0.5 * (w1 + w2)};
    LinearModel first = ra_fit(gen, unlabeled, pairs, cfg, options);
    if (pairs.rows() < 2)
        return {first, cfg, {}};
    const RaVariances v = estimate_variances(first, gen, pairs);
    if (!(v.sigma2_plus + v.sigma2_minus > 0.0))
        return {first, cfg, v};
    cfg.lambda = optimal_lambda(w1, w2, v);
    return {ra_fit(gen, unlabeled, pairs, cfg, options), cfg, v};
}

} // namespace uncoupled
