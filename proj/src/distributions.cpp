#include "uncoupled/distributions.hpp"

#include "uncoupled/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace uncoupled {

double clamp_probability(double u)
{
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("quantile argument must lie in (0, 1)");
    return std::clamp(u, kQuantileClamp, 1.0 - kQuantileClamp);
}

double standard_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double standard_normal_pdf(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double standard_normal_quantile(double u)
{
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

namespace {

class Gaussian final : public TargetDistribution {
public:
    Gaussian(double mean, double std) : mean_(mean), std_(std) {}

    double pdf(double y) const override { return standard_normal_pdf((y - mean_) / std_) / std_; }
    double cdf(double y) const override { return standard_normal_cdf((y - mean_) / std_); }
    double inv_cdf(double u) const override
    {
        return mean_ + std_ * standard_normal_quantile(clamp_probability(u));
    }
    std::pair<double, double> support_bounds() const override
    {
        return {mean_ - 10.0 * std_, mean_ + 10.0 * std_};
    }

private:
    double mean_;
    double std_;
};

class Uniform final : public TargetDistribution {
public:
    Uniform(double a, double b) : a_(a), b_(b) {}

    double pdf(double y) const override { return (y >= a_ && y <= b_) ? 1.0 / (b_ - a_) : 0.0; }
    double cdf(double y) const override { return std::clamp((y - a_) / (b_ - a_), 0.0, 1.0); }
    double inv_cdf(double u) const override { return a_ + clamp_probability(u) * (b_ - a_); }
    std::pair<double, double> support_bounds() const override { return {a_, b_}; }

private:
    double a_;
    double b_;
};

class Kde final : public TargetDistribution {
public:
    explicit Kde(KdeModel model) : model_(std::move(model))
    {
        model_.validate();
        const auto [lo, hi] = std::minmax_element(model_.sample_points.begin(),
                                                  model_.sample_points.end());
        low_ = *lo - 5.0 * model_.bandwidth;
        high_ = *hi + 5.0 * model_.bandwidth;
    }

    double pdf(double y) const override
    {
        const double h = model_.bandwidth;
        double s = 0.0;
        for (double p : model_.sample_points)
            s += standard_normal_pdf((y - p) / h);
        return s / (h * static_cast<double>(model_.sample_points.size()));
    }

    double cdf(double y) const override
    {
        const double h = model_.bandwidth;
        double s = 0.0;
        for (double p : model_.sample_points)
            s += standard_normal_cdf((y - p) / h);
        return s / static_cast<double>(model_.sample_points.size());
    }

    // Bisection on the padded sample range; the mixture CDF is monotone.
    double inv_cdf(double u) const override
    {
        u = clamp_probability(u);
        double lo = low_;
        double hi = high_;
        while (hi - lo > 1e-8) {
            const double mid = 0.5 * (lo + hi);
            if (cdf(mid) < u)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::pair<double, double> support_bounds() const override { return {low_, high_}; }

private:
    KdeModel model_;
    double low_ = 0.0;
    double high_ = 0.0;
};

class Empirical final : public TargetDistribution {
public:
    explicit Empirical(EmpiricalCdf ecdf) : ecdf_(std::move(ecdf)) {}

    double pdf(double) const override
    {
        throw ParameterError("an empirical CDF has no density; use the empirical Err objective");
    }
    double cdf(double y) const override { return ecdf_.eval(y); }
    double inv_cdf(double u) const override { return ecdf_.quantile(clamp_probability(u)); }
    std::pair<double, double> support_bounds() const override
    {
        return {ecdf_.sorted_values().front(), ecdf_.sorted_values().back()};
    }

private:
    EmpiricalCdf ecdf_;
};

} // namespace

DistributionPtr gaussian_distribution(double mean, double std)
{
    if (!(std > 0.0) || !std::isfinite(std) || !std::isfinite(mean))
        throw ParameterError("gaussian distribution needs a finite mean and std > 0");
    return std::make_shared<Gaussian>(mean, std);
}

DistributionPtr uniform_distribution(double a, double b)
{
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("uniform distribution needs finite a < b");
    return std::make_shared<Uniform>(a, b);
}

void KdeModel::validate() const
{
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw ParameterError("KDE bandwidth must be positive");
    if (sample_points.empty())
        throw ParameterError("KDE needs at least one sample point");
    for (double p : sample_points)
        if (!std::isfinite(p))
            throw ParameterError("KDE sample contains non-finite values");
}

double silverman_bandwidth(std::span<const double> targets)
{
    const auto n = static_cast<double>(targets.size());
    if (targets.size() < 2)
        throw ParameterError("Silverman bandwidth needs at least two values");
    const double mean = std::accumulate(targets.begin(), targets.end(), 0.0) / n;
    double ss = 0.0;
    for (double y : targets)
        ss += (y - mean) * (y - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return 1.06 * sd * std::pow(n, -0.2);
}

double kde_cv_log_likelihood(std::span<const double> targets, double h, int folds)
{
    if (!(h > 0.0))
        throw ParameterError("KDE bandwidth must be positive");
    std::vector<double> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double log_norm = std::log(h * std::sqrt(2.0 * std::numbers::pi));

    double total = 0.0;
    std::vector<double> terms;
    for (int fold = 0; fold < folds; ++fold) {
        std::size_t train_count = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (static_cast<int>(j % folds) != fold)
                ++train_count;
        if (train_count == 0)
            continue;
        for (std::size_t i = static_cast<std::size_t>(fold); i < n; i += folds) {
            terms.clear();
            double max_term = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                if (static_cast<int>(j % folds) == fold)
                    continue;
                const double z = (sorted[i] - sorted[j]) / h;
                terms.push_back(-0.5 * z * z);
                max_term = std::max(max_term, terms.back());
            }
            double s = 0.0;
            for (double t : terms)
                s += std::exp(t - max_term);
            total += max_term + std::log(s) - std::log(static_cast<double>(train_count)) - log_norm;
        }
    }
    return total;
}

KdeModel fit_kde(std::span<const double> targets, std::span<const double> bandwidth_grid)
{
    if (targets.size() < 5)
        throw ParameterError("fit_kde needs at least 5 target values");
    for (double y : targets)
        if (!std::isfinite(y))
            throw ParameterError("fit_kde: non-finite target value");

    // Sorting first makes every floating-point sum independent of input order.
    std::vector<double> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> grid(bandwidth_grid.begin(), bandwidth_grid.end());
    if (grid.empty()) {
        const double hs = silverman_bandwidth(sorted);
        if (!(hs > 0.0))
            throw ParameterError("fit_kde: targets are constant, no default bandwidth");
        constexpr int kGridSize = 20;
        for (int k = 0; k < kGridSize; ++k)
            grid.push_back(hs / 10.0 * std::pow(100.0, static_cast<double>(k) / (kGridSize - 1)));
    }
    for (double h : grid)
        if (!(h > 0.0) || !std::isfinite(h))
            throw ParameterError("fit_kde: bandwidths must be positive");

    double best_h = grid.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (double h : grid) {
        const double score = kde_cv_log_likelihood(sorted, h);
        if (score > best_score) {
            best_score = score;
            best_h = h;
        }
    }
    return KdeModel{std::move(sorted), best_h};
}

DistributionPtr kde_distribution(KdeModel model)
{
    return std::make_shared<Kde>(std::move(model));
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values) : sorted_(values.begin(), values.end())
{
    if (sorted_.empty())
        throw ParameterError("empirical CDF needs at least one value");
    for (double v : sorted_)
        if (!std::isfinite(v))
            throw ParameterError("empirical CDF: non-finite value");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::eval(double y) const
{
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), y) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double u) const
{
    const auto n = static_cast<double>(sorted_.size());
    auto k = static_cast<std::size_t>(std::ceil(u * n));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
}

DistributionPtr empirical_distribution(EmpiricalCdf ecdf)
{
    return std::make_shared<Empirical>(std::move(ecdf));
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b)
{
    const auto& x = a.sorted_values();
    const auto& y = b.sorted_values();
    const auto nx = static_cast<double>(x.size());
    const auto ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double sup = 0.0;
    while (i < x.size() || j < y.size()) {
        double v;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
            v = x[i];
        else
            v = y[j];
        while (i < x.size() && x[i] <= v)
            ++i;
        while (j < y.size() && y[j] <= v)
            ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return sup;
}

double ks_distance(const EmpiricalCdf& sample, const TargetDistribution& reference)
{
    const auto& v = sample.sorted_values();
    const auto n = static_cast<double>(v.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = reference.cdf(v[i]);
        sup = std::max({sup, std::abs(static_cast<double>(i + 1) / n - f),
                        std::abs(f - static_cast<double>(i) / n)});
    }
    return sup;
}

} // namespace uncoupled
