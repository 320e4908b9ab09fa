#include "uncoupled/baselines.hpp"

#include "uncoupled/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uncoupled {

LinearModel lr_fit(const Dataset& data, bool fit_intercept)
{
    const Matrix x = fit_intercept ? with_intercept_column(data.features()) : data.features();
    if (x.rows() < x.cols())
        throw ParameterError("least squares needs at least as many rows as weights");
    const auto n = static_cast<double>(x.rows());
    const Matrix gram = x.transpose() * x / n;
    const Vector rhs = x.transpose() * data.targets() / n;
    return LinearModel(solve_with_ridge(gram, rhs), fit_intercept);
}

double ranker_objective(const Vector& theta, const PairwiseSet& pairs, double reg)
{
    const Vector margin = (pairs.winners() - pairs.losers()) * theta;
    double s = 0.0;
    for (double m : margin) {
        const double slack = std::max(0.0, 1.0 - m);
        s += slack * slack;
    }
    return s / static_cast<double>(margin.size()) + reg * theta.squaredNorm();
}

Vector ranker_gradient(const Vector& theta, const PairwiseSet& pairs, double reg)
{
    const Matrix diff = pairs.winners() - pairs.losers();
    const Vector margin = diff * theta;
    const Vector w = margin.unaryExpr([](double m) { return -2.0 * std::max(0.0, 1.0 - m); });
    return diff.transpose() * w / static_cast<double>(margin.size()) + 2.0 * reg * theta;
}

RankerModel ranker_fit(const PairwiseSet& pairs, double reg, const SolverOptions& solver)
{
    if (pairs.rows() < 1)
        throw ParameterError("ranker_fit needs at least one comparison");
    if (!(reg >= 0.0) || !std::isfinite(reg))
        throw ParameterError("ranker regularization must be nonnegative");

    const Matrix diff = pairs.winners() - pairs.losers();
    const auto n = static_cast<double>(diff.rows());
    Objective objective = [&](const Vector& theta, Vector* grad) {
        const Vector margin = diff * theta;
        double s = 0.0;
        Vector w(margin.size());
        for (Eigen::Index i = 0; i < margin.size(); ++i) {
            const double slack = std::max(0.0, 1.0 - margin(i));
            s += slack * slack;
            w(i) = -2.0 * slack;
        }
        if (grad)
            *grad = diff.transpose() * w / n + 2.0 * reg * theta;
        return s / n + reg * theta.squaredNorm();
    };
    const Vector scales = column_scales({&diff});
    MinimizeResult r;
    try {
        r = minimize_scaled(objective, Vector::Zero(pairs.dim()), scales, solver);
    } catch (const DivergenceError& e) {
        throw NumericError(std::string("ranker training diverged: ") + e.what());
    }
    return {r.x, reg};
}

double ranking_loss(const Vector& theta, const PairwiseSet& pairs)
{
    const Vector margin = (pairs.winners() - pairs.losers()) * theta;
    return static_cast<double>((margin.array() < 0.0).count()) /
           static_cast<double>(margin.size());
}

RankPredictor::RankPredictor(std::vector<double> unlabeled_scores, DistributionPtr dist)
    : sorted_(std::move(unlabeled_scores)), dist_(std::move(dist))
{
    if (sorted_.empty())
        throw ParameterError("rank prediction needs a nonempty unlabeled set");
    if (!dist_)
        throw ParameterError("rank prediction needs a target distribution");
    std::sort(sorted_.begin(), sorted_.end());
}

double RankPredictor::quantile_for_score(double score) const
{
    const auto n_u = static_cast<double>(sorted_.size());
    // Strictly greater scores rank above the test point; ties rank below it.
    const auto above = sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), score);
    const double n_prime = 1.0 + static_cast<double>(above);
    const double q = (n_u - n_prime) / n_u;
    return std::clamp(q, 1.0 / (n_u + 1.0), n_u / (n_u + 1.0));
}

double RankPredictor::predict_score(double score) const
{
    return dist_->inv_cdf(quantile_for_score(score));
}

double rank_predict(const RankerModel& ranker, const Matrix& unlabeled, DistributionPtr dist,
                    const Vector& x_test)
{
    const Vector s = ranker.score(unlabeled);
    const RankPredictor predictor(std::vector<double>(s.begin(), s.end()), std::move(dist));
    return predictor.predict_score(ranker.score(x_test));
}

Vector rank_predict(const RankerModel& ranker, const Matrix& unlabeled, DistributionPtr dist,
                    const Matrix& x_test)
{
    const Vector s = ranker.score(unlabeled);
    const RankPredictor predictor(std::vector<double>(s.begin(), s.end()), std::move(dist));
    const Vector t = ranker.score(x_test);
    return t.unaryExpr([&](double v) { return predictor.predict_score(v); });
}

} // namespace uncoupled
