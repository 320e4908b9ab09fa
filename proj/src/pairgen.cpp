#include "uncoupled/pairgen.hpp"

#include "uncoupled/errors.hpp"

#include <array>
#include <cmath>

namespace uncoupled {

namespace {

constexpr std::uint64_t kThetaStream = 0;
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kPairStream = 2;

} // namespace

Vector random_unit_vector(int dim, Rng& rng)
{
    std::normal_distribution<double> normal;
    Vector v(dim);
    do {
        for (int i = 0; i < dim; ++i)
            v(i) = normal(rng);
    } while (v.norm() == 0.0);
    return v / v.norm();
}

SyntheticSpec SyntheticSpec::random(int dim, double noise_std, std::uint64_t seed)
{
    if (dim < 1)
        throw ParameterError("synthetic dimension must be positive");
    Rng rng = make_rng(seed, {kThetaStream});
    SyntheticSpec spec{dim, noise_std, random_unit_vector(dim, rng), seed};
    spec.validate();
    return spec;
}

void SyntheticSpec::validate() const
{
    if (dim < 1 || theta_true.size() != dim)
        throw ShapeError("theta_true must have dim entries");
    if (std::abs(theta_true.norm() - 1.0) > 1e-9)
        throw ParameterError("theta_true must have unit norm");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
        throw ParameterError("noise_std must be nonnegative");
}

double SyntheticSpec::target_std() const
{
    return std::sqrt(1.0 + noise_std * noise_std);
}

Dataset generate_synthetic(const SyntheticSpec& spec, Eigen::Index n, Rng& rng)
{
    spec.validate();
    if (n < 1)
        throw ParameterError("sample size must be positive");
    std::normal_distribution<double> normal;
    Matrix x(n, spec.dim);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < spec.dim; ++j)
            x(i, j) = normal(rng);
        y(i) = x.row(i).dot(spec.theta_true);
        if (spec.noise_std > 0.0)
            y(i) += spec.noise_std * normal(rng);
    }
    return Dataset(std::move(x), std::move(y));
}

Dataset generate_synthetic(const SyntheticSpec& spec, Eigen::Index n)
{
    Rng rng = make_rng(spec.seed, {kDataStream});
    return generate_synthetic(spec, n, rng);
}

PairwiseSet make_pairwise(const Matrix& first_x, const Vector& first_y, const Matrix& second_x,
                          const Vector& second_y)
{
    const Eigen::Index n = first_x.rows();
    if (second_x.rows() != n || first_y.size() != n || second_y.size() != n ||
        first_x.cols() != second_x.cols())
        throw ShapeError("make_pairwise: inconsistent pair inputs");
    Matrix winners(n, first_x.cols());
    Matrix losers(n, first_x.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (first_y(i) >= second_y(i)) {
            winners.row(i) = first_x.row(i);
            losers.row(i) = second_x.row(i);
        } else {
            winners.row(i) = second_x.row(i);
            losers.row(i) = first_x.row(i);
        }
    }
    return PairwiseSet(std::move(winners), std::move(losers));
}

PairwiseSet sample_pairwise_from_spec(const SyntheticSpec& spec, Eigen::Index n_r, Rng& rng)
{
    if (n_r < 1)
        throw ParameterError("n_r must be positive");
    const Dataset first = generate_synthetic(spec, n_r, rng);
    const Dataset second = generate_synthetic(spec, n_r, rng);
    return make_pairwise(first.features(), first.targets(), second.features(), second.targets());
}

PairwiseSet sample_pairwise_from_spec(const SyntheticSpec& spec, Eigen::Index n_r)
{
    Rng rng = make_rng(spec.seed, {kPairStream});
    return sample_pairwise_from_spec(spec, n_r, rng);
}

PairwiseSet sample_pairwise_from_dataset(const Dataset& data, Eigen::Index n_r, Rng& rng)
{
    const Eigen::Index n = data.rows();
    if (n < 2)
        throw ParameterError("pair sampling needs at least two rows");
    if (n_r < 1)
        throw ParameterError("n_r must be positive");
    const Vector& y = data.targets();
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    Matrix ax(n_r, data.dim());
    Matrix bx(n_r, data.dim());
    Vector ay(n_r);
    Vector by(n_r);
    for (Eigen::Index k = 0; k < n_r; ++k) {
        const Eigen::Index i = pick(rng);
        Eigen::Index j = pick(rng);
        while (j == i)
            j = pick(rng);
        ax.row(k) = data.features().row(i);
        ay(k) = y(i);
        bx.row(k) = data.features().row(j);
        by(k) = y(j);
    }
    return make_pairwise(ax, ay, bx, by);
}

Dataset counterexample_sample(CounterexampleVariant variant, Eigen::Index n, std::uint64_t seed)
{
    if (n < 1)
        throw ParameterError("sample size must be positive");
    // Cells ordered (x half, y cell): x in [-1,0) then [0,1]; y in [0,1), [1,2), [3,4].
    // Every cell has unit area, so its mass equals its density.
    static constexpr std::array<double, 6> kBase{1.0 / 6, 1.0 / 6, 1.0 / 6,
                                                 1.0 / 6, 1.0 / 6, 1.0 / 6};
    static constexpr std::array<double, 6> kTilde{1.0 / 8,  1.0 / 4,  1.0 / 8,
                                                  5.0 / 24, 1.0 / 12, 5.0 / 24};
    static constexpr std::array<double, 3> kYLow{0.0, 1.0, 3.0};

    const auto& mass = variant == CounterexampleVariant::Base ? kBase : kTilde;
    Rng rng = make_rng(seed, {variant == CounterexampleVariant::Base ? 10u : 11u});
    std::discrete_distribution<int> cell(mass.begin(), mass.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix x(n, 1);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = cell(rng);
        const double x_low = c < 3 ? -1.0 : 0.0;
        x(i, 0) = x_low + unit(rng);
        y(i) = kYLow[static_cast<std::size_t>(c % 3)] + unit(rng);
    }
    return Dataset(std::move(x), std::move(y));
}

} // namespace uncoupled
