#pragma once

// Target-distribution abstraction P_Y: analytic laws, Gaussian kernel
// density estimates and the empirical CDF.

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace uncoupled {

/// Marginal law of the target: density, CDF and quantile function.
///
/// inv_cdf rejects arguments outside (0, 1) with DomainError and clamps the
/// rest to [1e-9, 1 - 1e-9] so unbounded supports give finite quantiles.
class TargetDistribution {
public:
    virtual ~TargetDistribution() = default;

    virtual double pdf(double y) const = 0;
    virtual double cdf(double y) const = 0;
    virtual double inv_cdf(double u) const = 0;
    /// Bracket used for numeric inversion.
    virtual std::pair<double, double> support_bounds() const = 0;
};

using DistributionPtr = std::shared_ptr<const TargetDistribution>;

inline constexpr double kQuantileClamp = 1e-9;

/// Validates u in (0, 1) and clamps it to [kQuantileClamp, 1 - kQuantileClamp].
double clamp_probability(double u);

double standard_normal_cdf(double z);
double standard_normal_pdf(double z);
double standard_normal_quantile(double u);

DistributionPtr gaussian_distribution(double mean, double std);
DistributionPtr uniform_distribution(double a, double b);

struct KdeModel {
    std::vector<double> sample_points;
    double bandwidth = 1.0;

    /// Throws ParameterError unless bandwidth > 0 and the sample is nonempty and finite.
    void validate() const;
};

/// Silverman's rule 1.06 * sd * n^(-1/5).
double silverman_bandwidth(std::span<const double> targets);

/// 5-fold cross-validated log-likelihood of a Gaussian KDE with bandwidth h.
/// Folds are assigned by sorted rank modulo 5, so the score does not depend
/// on the order of `targets`.
double kde_cv_log_likelihood(std::span<const double> targets, double h, int folds = 5);

/// Picks the bandwidth maximizing the CV log-likelihood over `bandwidth_grid`
/// (default: 20 log-spaced values in [h_s/10, 10 h_s], h_s = Silverman).
KdeModel fit_kde(std::span<const double> targets, std::span<const double> bandwidth_grid = {});

DistributionPtr kde_distribution(KdeModel model);

/// Step function (1/n) #{y_i <= y}.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::span<const double> values);

    double operator()(double y) const { return eval(y); }
    double eval(double y) const;
    /// Generalized inverse: smallest sample value v with eval(v) >= u.
    double quantile(double u) const;

    const std::vector<double>& sorted_values() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

/// Exposes an empirical CDF through the TargetDistribution interface for
/// prediction. It has no density: pdf throws ParameterError.
DistributionPtr empirical_distribution(EmpiricalCdf ecdf);

/// sup_y |F_a(y) - F_b(y)| between two empirical CDFs.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// sup_y |F_hat(y) - F(y)| for a continuous reference distribution.
double ks_distance(const EmpiricalCdf& sample, const TargetDistribution& reference);

} // namespace uncoupled
