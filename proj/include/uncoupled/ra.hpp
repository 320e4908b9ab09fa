#pragma once

// Risk-approximation estimator: the joint term E[Y phi'(h(X))] is replaced by
// w1 E[phi'(h(X+))] + w2 E[phi'(h(X-))], with a free parameter lambda that
// trades unlabeled against pairwise terms.

#include "uncoupled/core.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/optim.hpp"

#include <span>
#include <vector>

namespace uncoupled {

struct RaTuning {
    int n_split = 1000;
    double quantile_lo = 0.01;
    double quantile_hi = 0.99;
    /// Half-width B of the [-B, B]^2 weight search box; <= 0 selects
    /// max(|y_lo|, |y_hi|) from the quantile range.
    double weight_search_bound = 0.0;
    int grid_rounds = 3;
    int grid_points_per_axis = 51;

    void validate() const;
};

struct RaVariances {
    double sigma2_plus = 0.0;
    double sigma2_minus = 0.0;
};

/// Err(w1, w2) = E|Y - 2 w1 F(Y) - 2 w2 (1 - F(Y))| discretized on n_split + 1
/// equally spaced points between the lo/hi quantiles. The density, CDF and
/// spacing are evaluated once, so repeated calls are O(n_split).
class ErrGrid {
public:
    ErrGrid(const TargetDistribution& dist, const RaTuning& tuning);

    double operator()(double w1, double w2) const;
    double y_low() const { return y_low_; }
    double y_high() const { return y_high_; }

private:
    std::vector<double> y_;
    std::vector<double> mass_; // f(y_i) * dy
    std::vector<double> cdf_;
    double y_low_ = 0.0;
    double y_high_ = 0.0;
};

double err_objective(const TargetDistribution& dist, double w1, double w2,
                     const RaTuning& tuning = {});

/// (1/n) sum |y_i - 2 w1 F_hat(y_i) - 2 w2 (1 - F_hat(y_i))| with the empirical CDF.
double err_objective_empirical(std::span<const double> targets, double w1, double w2);

/// Nested grid search minimizing Err; lambda = (w1 + w2) / 2.
RiskConfig tune_weights(const TargetDistribution& dist, const RaTuning& tuning = {});
/// Same search on the empirical objective; the default box uses the sample's
/// lo/hi quantiles.
RiskConfig tune_weights_empirical(std::span<const double> targets, const RaTuning& tuning = {});

/// Variance-minimizing lambda 2 (w1 s+ + w2 s-) / (s+ + s-).
double optimal_lambda(double w1, double w2, const RaVariances& v);

/// Unbiased sample variances of phi'(h(x+)) and phi'(h(x-)).
RaVariances estimate_variances(const LinearModel& model, const BregmanGenerator& gen,
                               const PairwiseSet& pairs);

/// Empirical approximated risk without the constant E[phi(Y)].
double ra_empirical_risk(const LinearModel& model, const BregmanGenerator& gen,
                         const Matrix& unlabeled, const PairwiseSet& pairs,
                         const RiskConfig& cfg);

/// Gradient of ra_empirical_risk with respect to model.theta().
Vector ra_risk_gradient(const LinearModel& model, const BregmanGenerator& gen,
                        const Matrix& unlabeled, const PairwiseSet& pairs, const RiskConfig& cfg);

struct RaFitOptions {
    bool fit_intercept = false;
    /// Use gradient descent even when the closed form is available.
    bool force_iterative = false;
    SolverOptions solver;
};

/// Minimizes ra_empirical_risk. The squared generator uses the normal
/// equations (ridge 1e-8 when singular); other generators use gradient
/// descent from theta = 0 (intercept 1/2 when the KL domain requires it).
LinearModel ra_fit(const BregmanGenerator& gen, const Matrix& unlabeled, const PairwiseSet& pairs,
                   const RiskConfig& cfg, const RaFitOptions& options = {});

struct RaTwoStageResult {
    LinearModel model;
    RiskConfig config;
    RaVariances variances;
};

/// Fits with lambda = (w1 + w2) / 2, estimates the pair variances at that
/// model, switches to optimal_lambda and refits once. Keeps the first lambda
/// when both variances vanish.
RaTwoStageResult ra_fit_optimal_lambda(const BregmanGenerator& gen, const Matrix& unlabeled,
                                       const PairwiseSet& pairs, double w1, double w2,
                                       const RaFitOptions& options = {});

} // namespace uncoupled
