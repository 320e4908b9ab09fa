#include "uncoupled/core.hpp"

#include "uncoupled/errors.hpp"

#include <cmath>
#include <string>

namespace uncoupled {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what)
{
    if (!m.allFinite())
        throw ParameterError(std::string(what) + " contains non-finite entries");
}

Dataset::Dataset(Matrix features, std::optional<Vector> targets,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)), targets_(std::move(targets)),
      feature_names_(std::move(feature_names))
{
    if (features_.rows() < 1 || features_.cols() < 1)
        throw ShapeError("dataset needs at least one row and one column");
    require_finite(features_, "feature matrix");
    if (targets_) {
        if (targets_->size() != features_.rows())
            throw ShapeError("target length " + std::to_string(targets_->size()) +
                             " does not match row count " + std::to_string(features_.rows()));
        require_finite(*targets_, "target vector");
    }
    if (!feature_names_.empty() &&
        static_cast<Eigen::Index>(feature_names_.size()) != features_.cols())
        throw ShapeError("feature_names length does not match column count");
}

const Vector& Dataset::targets() const
{
    if (!targets_)
        throw ParameterError("dataset has no targets");
    return *targets_;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const
{
    Matrix x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    std::optional<Vector> y;
    if (targets_)
        y = Vector(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x.row(i) = features_.row(rows[static_cast<std::size_t>(i)]);
        if (y)
            (*y)(i) = (*targets_)(rows[static_cast<std::size_t>(i)]);
    }
    return Dataset(std::move(x), std::move(y), feature_names_);
}

Dataset Dataset::unlabeled() const
{
    return Dataset(features_, std::nullopt, feature_names_);
}

PairwiseSet::PairwiseSet(Matrix winners, Matrix losers)
    : winners_(std::move(winners)), losers_(std::move(losers))
{
    if (winners_.rows() != losers_.rows() || winners_.cols() != losers_.cols())
        throw ShapeError("winners and losers must have identical shape");
    require_finite(winners_, "winner matrix");
    require_finite(losers_, "loser matrix");
}

BregmanGenerator BregmanGenerator::from_name(std::string_view name)
{
    if (name == "squared" || name == "l2")
        return squared();
    if (name == "kl" || name == "bernoulli-kl")
        return bernoulli_kl();
    throw ParameterError("unknown Bregman generator '" + std::string(name) + "'");
}

std::string_view BregmanGenerator::name() const
{
    return kind_ == Kind::Squared ? "squared" : "kl";
}

Interval BregmanGenerator::valid_domain() const
{
    if (kind_ == Kind::Squared)
        return {-INFINITY, INFINITY, true};
    return {0.0, 1.0, true};
}

// The KL generator is the negative binary entropy x log x + (1-x) log(1-x).
double BregmanGenerator::phi(double x) const
{
    if (kind_ == Kind::Squared)
        return x * x;
    return x * std::log(x) + (1.0 - x) * std::log1p(-x);
}

double BregmanGenerator::phi_prime(double x) const
{
    if (kind_ == Kind::Squared)
        return 2.0 * x;
    return std::log(x) - std::log1p(-x);
}

double BregmanGenerator::phi_second(double x) const
{
    if (kind_ == Kind::Squared)
        return 2.0;
    return 1.0 / (x * (1.0 - x));
}

double bregman_divergence(const BregmanGenerator& gen, double t, double z)
{
    if (!gen.in_domain(t) || !gen.in_domain(z))
        throw DomainError("Bregman divergence argument outside the " + std::string(gen.name()) +
                          " generator domain");
    if (t == z)
        return 0.0;
    const double d = gen.phi(t) - gen.phi(z) - (t - z) * gen.phi_prime(z);
    return d < 0.0 ? 0.0 : d;
}

LinearModel::LinearModel(Vector theta, bool includes_intercept)
    : theta_(std::move(theta)), includes_intercept_(includes_intercept)
{
    if (theta_.size() < (includes_intercept_ ? 2 : 1))
        throw ShapeError("model needs at least one feature weight");
    require_finite(theta_, "model weights");
}

LinearModel LinearModel::zeros(Eigen::Index d, bool includes_intercept)
{
    return LinearModel(Vector::Zero(d + (includes_intercept ? 1 : 0)), includes_intercept);
}

double LinearModel::predict(const Vector& x) const
{
    if (x.size() != input_dim())
        throw ShapeError("feature vector has length " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(input_dim()));
    double s = theta_.head(input_dim()).dot(x);
    if (includes_intercept_)
        s += theta_(theta_.size() - 1);
    return s;
}

Vector LinearModel::predict(const Matrix& rows) const
{
    if (rows.cols() != input_dim())
        throw ShapeError("feature matrix has " + std::to_string(rows.cols()) +
                         " columns, model expects " + std::to_string(input_dim()));
    Vector s = rows * theta_.head(input_dim());
    if (includes_intercept_)
        s.array() += theta_(theta_.size() - 1);
    return s;
}

Matrix with_intercept_column(const Matrix& x)
{
    Matrix out(x.rows(), x.cols() + 1);
    out.leftCols(x.cols()) = x;
    out.col(x.cols()).setOnes();
    return out;
}

} // namespace uncoupled
