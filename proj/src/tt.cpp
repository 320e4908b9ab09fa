#include "uncoupled/tt.hpp"

#include "uncoupled/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace uncoupled {

double logistic(double t)
{
    if (t >= 0.0)
        return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

void require_same_dim(const LinearModel& model, const Matrix& unlabeled, const PairwiseSet& pairs)
{
    if (unlabeled.cols() != pairs.dim())
        throw ShapeError("unlabeled data and pairs differ in dimension");
    if (unlabeled.cols() != model.input_dim())
        throw ShapeError("model expects " + std::to_string(model.input_dim()) +
                         " features, data has " + std::to_string(unlabeled.cols()));
}

double checked(const BregmanGenerator& gen, double s)
{
    if (!gen.in_domain(s))
        throw DomainError("transformed score outside the " + std::string(gen.name()) +
                          " generator domain");
    return s;
}

// Value and derivative of the score-to-probability link.
struct Link {
    virtual ~Link() = default;
    virtual double value(double t) const = 0;
    virtual double derivative(double t) const = 0;
};

struct LogisticLink final : Link {
    double value(double t) const override { return logistic(t); }
    double derivative(double t) const override
    {
        const double s = logistic(t);
        return s * (1.0 - s);
    }
};

struct CdfLink final : Link {
    explicit CdfLink(const TargetDistribution& d) : dist(d) {}
    double value(double t) const override { return dist.cdf(t); }
    double derivative(double t) const override { return dist.pdf(t); }
    const TargetDistribution& dist;
};

template <class Transform>
double cdf_risk(const LinearModel& model, const BregmanGenerator& gen, const Matrix& unlabeled,
                const PairwiseSet& pairs, double lambda, const Transform& transform)
{
    require_same_dim(model, unlabeled, pairs);
    const Vector h = model.predict(unlabeled);
    const Vector hp = model.predict(pairs.winners());
    const Vector hm = model.predict(pairs.losers());

    double unl = 0.0;
    for (double v : h) {
        const double s = checked(gen, transform(v));
        unl += (lambda - s) * gen.phi_prime(s) + gen.phi(s);
    }
    double pair = 0.0;
    for (Eigen::Index i = 0; i < hp.size(); ++i) {
        const double sp = checked(gen, transform(hp(i)));
        const double sm = checked(gen, transform(hm(i)));
        pair += 0.5 * (1.0 - lambda) * gen.phi_prime(sp) - 0.5 * lambda * gen.phi_prime(sm);
    }
    return -unl / static_cast<double>(h.size()) - pair / static_cast<double>(hp.size());
}

Vector link_gradient(const LinearModel& model, const BregmanGenerator& gen, const Matrix& unlabeled,
                     const PairwiseSet& pairs, double lambda, const Link& link)
{
    require_same_dim(model, unlabeled, pairs);
    const auto n_u = static_cast<double>(unlabeled.rows());
    const auto n_r = static_cast<double>(pairs.rows());

    auto weights = [&](const Matrix& x, auto&& coefficient) {
        const Vector h = model.predict(x);
        Vector w(h.size());
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            const double s = checked(gen, link.value(h(i)));
            w(i) = coefficient(s) * gen.phi_second(s) * link.derivative(h(i));
        }
        return w;
    };
    // d/ds [(lambda - s) phi'(s) + phi(s)] = (lambda - s) phi''(s).
    const Vector wu = weights(unlabeled, [&](double s) { return -(lambda - s) / n_u; });
    const Vector wp = weights(pairs.winners(), [&](double) { return -0.5 * (1.0 - lambda) / n_r; });
    const Vector wm = weights(pairs.losers(), [&](double) { return 0.5 * lambda / n_r; });

    const Eigen::Index d = unlabeled.cols();
    Vector g(model.theta().size());
    g.head(d) = unlabeled.transpose() * wu + pairs.winners().transpose() * wp +
                pairs.losers().transpose() * wm;
    if (model.includes_intercept())
        g(d) = wu.sum() + wp.sum() + wm.sum();
    return g;
}

} // namespace

double tt_cdf_risk(const LinearModel& model, const BregmanGenerator& gen,
                   const TargetDistribution& dist, const Matrix& unlabeled,
                   const PairwiseSet& pairs, const TtConfig& cfg, const EmpiricalCdf* ecdf)
{
    if (cfg.use_empirical_cdf) {
        if (!ecdf)
            throw ParameterError("empirical-CDF mode needs an EmpiricalCdf");
        return cdf_risk(model, gen, unlabeled, pairs, cfg.lambda,
                        [&](double t) { return ecdf->eval(t); });
    }
    return cdf_risk(model, gen, unlabeled, pairs, cfg.lambda,
                    [&](double t) { return dist.cdf(t); });
}

double tt_surrogate_risk(const LinearModel& model, const BregmanGenerator& gen,
                         const Matrix& unlabeled, const PairwiseSet& pairs, double lambda)
{
    return cdf_risk(model, gen, unlabeled, pairs, lambda, logistic);
}

Vector tt_surrogate_gradient(const LinearModel& model, const BregmanGenerator& gen,
                             const Matrix& unlabeled, const PairwiseSet& pairs, double lambda)
{
    return link_gradient(model, gen, unlabeled, pairs, lambda, LogisticLink{});
}

LinearModel tt_fit(const BregmanGenerator& gen, const Matrix& unlabeled, const PairwiseSet& pairs,
                   const TtConfig& cfg, const TargetDistribution* dist,
                   const TtFitOptions& options)
{
    if (unlabeled.rows() < 1 || pairs.rows() < 1)
        throw ParameterError("tt_fit needs unlabeled data and at least one comparison");
    if (unlabeled.cols() != pairs.dim())
        throw ShapeError("unlabeled data and pairs differ in dimension");
    require_finite(unlabeled, "unlabeled data");
    if (!cfg.use_logistic_surrogate) {
        if (cfg.use_empirical_cdf)
            throw ParameterError("the empirical CDF is a step function; fit with the surrogate");
        if (!dist)
            throw ParameterError("exact CDF fitting needs a target distribution");
    }

    const LogisticLink logistic_link;
    std::unique_ptr<CdfLink> cdf_link;
    if (!cfg.use_logistic_surrogate)
        cdf_link = std::make_unique<CdfLink>(*dist);
    const Link& link = cfg.use_logistic_surrogate ? static_cast<const Link&>(logistic_link)
                                                  : static_cast<const Link&>(*cdf_link);

    const bool intercept = options.fit_intercept;
    Objective objective = [&](const Vector& theta, Vector* grad) {
        const LinearModel m(theta, intercept);
        try {
            const double v = cdf_risk(m, gen, unlabeled, pairs, cfg.lambda,
                                      [&](double t) { return link.value(t); });
            if (grad)
                *grad = link_gradient(m, gen, unlabeled, pairs, cfg.lambda, link);
            return v;
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    Vector scales = column_scales({&unlabeled, &pairs.winners(), &pairs.losers()});
    const Eigen::Index p = unlabeled.cols() + (intercept ? 1 : 0);
    if (intercept) {
        scales.conservativeResize(p);
        scales(p - 1) = 1.0;
    }

    Vector best;
    double best_value = std::numeric_limits<double>::infinity();
    for (double start : {0.0, 0.1, -0.1}) {
        const Vector theta0 = Vector::Constant(p, start);
        MinimizeResult r;
        try {
            r = minimize_scaled(objective, theta0, scales, options.solver);
        } catch (const DivergenceError&) {
            continue;
        }
        if (r.value < best_value) {
            best_value = r.value;
            best = r.x;
        }
    }
    if (best.size() == 0)
        throw DivergenceError("TT risk is non-finite from every starting point");
    return LinearModel(best, intercept);
}

double tt_predict(const LinearModel& model, const TargetDistribution& dist,
                  const Vector& x, const TtConfig& cfg)
{
    const double h = model.predict(x);
    const double u = cfg.use_logistic_surrogate ? logistic(h) : dist.cdf(h);
    return dist.inv_cdf(std::clamp(u, kQuantileClamp, 1.0 - kQuantileClamp));
}

Vector tt_predict(const LinearModel& model, const TargetDistribution& dist, const Matrix& x,
                  const TtConfig& cfg)
{
    const Vector h = model.predict(x);
    Vector out(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const double u = cfg.use_logistic_surrogate ? logistic(h(i)) : dist.cdf(h(i));
        out(i) = dist.inv_cdf(std::clamp(u, kQuantileClamp, 1.0 - kQuantileClamp));
    }
    return out;
}

} // namespace uncoupled
