#pragma once

// Target-transformation estimator: regress the CDF-transformed target
// F_Y(Y), which is uniform on [0, 1], and map predictions back with F_Y^-1.

#include "uncoupled/core.hpp"
#include "uncoupled/distributions.hpp"
#include "uncoupled/optim.hpp"

namespace uncoupled {

struct TtConfig {
    double lambda = 0.5;
    /// Train on sigma(h) instead of F_Y(h); predictions are F_Y^-1(sigma(h)).
    bool use_logistic_surrogate = true;
    /// Evaluate the CDF risk with the empirical CDF of observed targets.
    bool use_empirical_cdf = false;
};

/// Logistic function, stable for large |t|.
double logistic(double t);

/// Empirical CDF-Bregman risk (constant E[phi(F(Y))] omitted). When
/// cfg.use_empirical_cdf is set, `ecdf` replaces dist.cdf and must be non-null.
double tt_cdf_risk(const LinearModel& model, const BregmanGenerator& gen,
                   const TargetDistribution& dist, const Matrix& unlabeled,
                   const PairwiseSet& pairs, const TtConfig& cfg = {},
                   const EmpiricalCdf* ecdf = nullptr);

/// CDF risk with F_Y(h) replaced by sigma(h); lambda = 1/2 gives the
/// training objective used by tt_fit.
double tt_surrogate_risk(const LinearModel& model, const BregmanGenerator& gen,
                         const Matrix& unlabeled, const PairwiseSet& pairs, double lambda = 0.5);

Vector tt_surrogate_gradient(const LinearModel& model, const BregmanGenerator& gen,
                             const Matrix& unlabeled, const PairwiseSet& pairs,
                             double lambda = 0.5);

struct TtFitOptions {
    bool fit_intercept = false;
    SolverOptions solver;
};

/// Multi-start descent from theta in {0, +0.1, -0.1} (all coordinates),
/// keeping the start with the lowest final risk. With
/// cfg.use_logistic_surrogate = false the exact CDF risk is minimized using
/// dist's density; that mode needs an analytic or KDE distribution.
LinearModel tt_fit(const BregmanGenerator& gen, const Matrix& unlabeled, const PairwiseSet& pairs,
                   const TtConfig& cfg = {}, const TargetDistribution* dist = nullptr,
                   const TtFitOptions& options = {});

/// F_Y^-1(sigma(h(x))) in surrogate mode, F_Y^-1(F_Y(h(x))) otherwise; the
/// probability is clamped to [1e-9, 1 - 1e-9] before inversion.
double tt_predict(const LinearModel& model, const TargetDistribution& dist,
                  const Vector& x, const TtConfig& cfg = {});
Vector tt_predict(const LinearModel& model, const TargetDistribution& dist, const Matrix& x,
                  const TtConfig& cfg = {});

} // namespace uncoupled
