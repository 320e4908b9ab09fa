#pragma once

// Reference methods: supervised least squares on coupled data, and the naive
// ranking approach (pairwise ranker + quantile lookup of the test rank).

#include "uncoupled/core.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/optim.hpp"

#include <vector>

namespace uncoupled {

/// Ordinary least squares through the normal equations (ridge 1e-8 fallback).
LinearModel lr_fit(const Dataset& data, bool fit_intercept = false);

struct RankerModel {
    Vector theta;
    double reg_strength = 1e-4;

    double score(const Vector& x) const { return theta.dot(x); }
    Vector score(const Matrix& x) const { return x * theta; }
};

/// (1/n) sum max(0, 1 - (r(x+) - r(x-)))^2 + reg ||theta||^2.
double ranker_objective(const Vector& theta, const PairwiseSet& pairs, double reg);
Vector ranker_gradient(const Vector& theta, const PairwiseSet& pairs, double reg);

/// Linear squared-hinge pairwise ranker, gradient descent from theta = 0.
RankerModel ranker_fit(const PairwiseSet& pairs, double reg = 1e-4,
                       const SolverOptions& solver = {});

/// Fraction of comparisons the scorer orders wrongly (r(x+) - r(x-) < 0).
double ranking_loss(const Vector& theta, const PairwiseSet& pairs);

/// Quantile prediction from the test point's rank among unlabeled scores:
/// n' = 1 + #{r(x) > r(x_test)}, q = (n_U - n') / n_U clamped to
/// [1/(n_U+1), n_U/(n_U+1)], prediction F^-1(q).
class RankPredictor {
public:
    /// Scores are sorted once; the predictor is read-only afterwards.
    RankPredictor(std::vector<double> unlabeled_scores, DistributionPtr dist);

    double quantile_for_score(double score) const;
    double predict_score(double score) const;

private:
    std::vector<double> sorted_;
    DistributionPtr dist_;
};

double rank_predict(const RankerModel& ranker, const Matrix& unlabeled, DistributionPtr dist,
                    const Vector& x_test);
Vector rank_predict(const RankerModel& ranker, const Matrix& unlabeled, DistributionPtr dist,
                    const Matrix& x_test);

} // namespace uncoupled
