#pragma once

// Synthetic data generation, pairwise-comparison construction and the two
// indistinguishable joint distributions used by the impossibility check.

#include "uncoupled/core.hpp"
#include "uncoupled/rng.hpp"

#include <cstdint>

namespace uncoupled {

/// Linear-Gaussian generator: x ~ N(0, I_d), y = theta_true . x + eps,
/// eps ~ N(0, noise_std^2), with ||theta_true||_2 = 1.
struct SyntheticSpec {
    int dim = 5;
    double noise_std = 0.1;
    Vector theta_true;
    std::uint64_t seed = 0;

    /// Draws theta_true uniformly on the unit sphere from `seed`.
    static SyntheticSpec random(int dim, double noise_std, std::uint64_t seed);

    void validate() const;
    /// Standard deviation of the target marginal, sqrt(1 + noise_std^2).
    double target_std() const;
};

/// Uniform direction on the unit sphere in R^dim.
Vector random_unit_vector(int dim, Rng& rng);

/// Deterministic given spec.seed.
Dataset generate_synthetic(const SyntheticSpec& spec, Eigen::Index n);
Dataset generate_synthetic(const SyntheticSpec& spec, Eigen::Index n, Rng& rng);

/// Row i compares (first_x.row(i), first_y(i)) with (second_x.row(i), second_y(i)).
/// The first point wins when first_y >= second_y (ties go to the first argument).
PairwiseSet make_pairwise(const Matrix& first_x, const Vector& first_y, const Matrix& second_x,
                          const Vector& second_y);

/// Draws 2 * n_r fresh labelled points and compares them. Independent of
/// generate_synthetic(spec, ...) for the same seed.
PairwiseSet sample_pairwise_from_spec(const SyntheticSpec& spec, Eigen::Index n_r);
PairwiseSet sample_pairwise_from_spec(const SyntheticSpec& spec, Eigen::Index n_r, Rng& rng);

/// Pairs built from uniformly sampled row pairs (i != j) of a labelled dataset.
PairwiseSet sample_pairwise_from_dataset(const Dataset& data, Eigen::Index n_r, Rng& rng);

enum class CounterexampleVariant { Base, Tilde };

/// Samples (x, y) with x in [-1, 1], y in [0, 2] U [3, 4]. Base: density 1/6
/// on the support. Tilde: piecewise density with the same X, Y and pairwise
/// marginals but conditional means 7/4 (x < 0) and 23/12 (x >= 0).
Dataset counterexample_sample(CounterexampleVariant variant, Eigen::Index n, std::uint64_t seed);

} // namespace uncoupled
