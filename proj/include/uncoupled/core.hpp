#pragma once

// Domain types shared across the library: datasets, pairwise comparisons,
// Bregman generators and linear models.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uncoupled {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Feature matrix (n x d) with optional aligned targets.
///
/// The targets are only ever read by the supervised baseline and by the
/// evaluation code; the uncoupled estimators take features only.
class Dataset {
public:
    explicit Dataset(Matrix features, std::optional<Vector> targets = std::nullopt,
                     std::vector<std::string> feature_names = {});

    const Matrix& features() const { return features_; }
    bool has_targets() const { return targets_.has_value(); }
    /// Throws ParameterError when the dataset carries no targets.
    const Vector& targets() const;
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    Eigen::Index rows() const { return features_.rows(); }
    Eigen::Index dim() const { return features_.cols(); }

    /// Copy holding only the listed rows, in the listed order.
    Dataset subset(const std::vector<Eigen::Index>& rows) const;
    /// Same features, targets dropped.
    Dataset unlabeled() const;

private:
    Matrix features_;
    std::optional<Vector> targets_;
    std::vector<std::string> feature_names_;
};

/// Comparison outcomes: row i of winners had a target at least as large as
/// row i of losers.
class PairwiseSet {
public:
    PairwiseSet(Matrix winners, Matrix losers);

    const Matrix& winners() const { return winners_; }
    const Matrix& losers() const { return losers_; }
    Eigen::Index rows() const { return winners_.rows(); }
    Eigen::Index dim() const { return winners_.cols(); }

private:
    Matrix winners_;
    Matrix losers_;
};

struct Interval {
    double low;
    double high;
    bool open = true;

    bool contains(double x) const
    {
        return open ? (x > low && x < high) : (x >= low && x <= high);
    }
};

/// Convex generator phi of a Bregman divergence, with its first two
/// derivatives. Only the two generators below are provided.
class BregmanGenerator {
public:
    enum class Kind { Squared, BernoulliKl };

    static BregmanGenerator squared() { return BregmanGenerator(Kind::Squared); }
    static BregmanGenerator bernoulli_kl() { return BregmanGenerator(Kind::BernoulliKl); }
    /// "squared" or "kl".
    static BregmanGenerator from_name(std::string_view name);

    Kind kind() const { return kind_; }
    std::string_view name() const;
    Interval valid_domain() const;
    bool in_domain(double x) const { return valid_domain().contains(x); }

    double phi(double x) const;
    double phi_prime(double x) const;
    double phi_second(double x) const;

private:
    explicit BregmanGenerator(Kind kind) : kind_(kind) {}
    Kind kind_;
};

/// d_phi(t, z) = phi(t) - phi(z) - (t - z) phi'(z). Throws DomainError when
/// either argument lies outside the generator's domain.
double bregman_divergence(const BregmanGenerator& gen, double t, double z);

/// h(x) = theta . x, with a constant-1 feature appended when includes_intercept.
class LinearModel {
public:
    LinearModel() = default;
    explicit LinearModel(Vector theta, bool includes_intercept = false);

    /// All-zero model over d input features.
    static LinearModel zeros(Eigen::Index d, bool includes_intercept = false);

    const Vector& theta() const { return theta_; }
    bool includes_intercept() const { return includes_intercept_; }
    /// Number of input features expected by predict (excludes the intercept).
    Eigen::Index input_dim() const
    {
        return theta_.size() - (includes_intercept_ ? 1 : 0);
    }

    double predict(const Vector& x) const;
    Vector predict(const Matrix& rows) const;

private:
    Vector theta_;
    bool includes_intercept_ = false;
};

/// Free parameters of the risk-approximation estimator.
struct RiskConfig {
    double w1 = 0.5;
    double w2 = 0.0;
    double lambda = 0.25;
};

/// Appends a constant-1 column.
Matrix with_intercept_column(const Matrix& x);

/// Validates that every entry is finite; `what` names the offending object.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

} // namespace uncoupled
