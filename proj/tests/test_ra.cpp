#include "generators.hpp"

#include "uncoupled/errors.hpp"
#include "uncoupled/ra.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace uncoupled;

namespace {

Matrix column(std::initializer_list<double> v)
{
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v)
        m(i++, 0) = x;
    return m;
}

PairwiseSet uniform_coupled_pairs(Eigen::Index n, Rng& rng)
{
    const Matrix a = testgen::uniform_matrix(n, 1, rng, 0, 1);
    const Matrix b = testgen::uniform_matrix(n, 1, rng, 0, 1);
    return PairwiseSet(a.cwiseMax(b), a.cwiseMin(b));
}

// Grid sum of f(y) dy |y - 2 w1 F - 2 w2 (1 - F)| written out for uniform[a, b].
double uniform_grid_oracle(double a, double b, double w1, double w2, int n_split = 1000)
{
    const double lo = a + 0.01 * (b - a), hi = a + 0.99 * (b - a);
    const double dy = (hi - lo) / n_split;
    double s = 0.0;
    for (int i = 0; i <= n_split; ++i) {
        const double y = lo + i * dy;
        const double f = (y - a) / (b - a);
        s += dy / (b - a) * std::abs(y - 2 * w1 * f - 2 * w2 * (1 - f));
    }
    return s;
}

} // namespace

TEST_CASE("Err vanishes at (b/2, a/2) for uniform targets")
{
    CHECK(err_objective(*uniform_distribution(0, 1), 0.5, 0.0) <= 1e-9);
    CHECK(err_objective(*uniform_distribution(0, 2), 1.0, 0.0) <= 1e-9);
    CHECK(err_objective(*uniform_distribution(-1, 3), 1.5, -0.5) <= 1e-9);
}

TEST_CASE("Err grid value against independent oracles")
{
    const double v = err_objective(*uniform_distribution(0, 1), 0.0, 0.0);
    CHECK(v == doctest::Approx(uniform_grid_oracle(0, 1, 0, 0)).epsilon(1e-12));
    // The grid sum approximates the truncated integral of y over [0.01, 0.99].
    CHECK(std::abs(v - (0.99 * 0.99 - 0.01 * 0.01) / 2) < 1e-3);
    CHECK(std::abs(v - 0.48995) < 1e-3);

    auto rng = testgen::rng_for(2, 50);
    for (int t = 0; t < 20; ++t) {
        const double a = testgen::uniform_real(-3, 1, rng);
        const double b = a + testgen::uniform_real(0.5, 4, rng);
        const double w1 = testgen::uniform_real(-2, 2, rng), w2 = testgen::uniform_real(-2, 2, rng);
        CHECK(err_objective(*uniform_distribution(a, b), w1, w2) ==
              doctest::Approx(uniform_grid_oracle(a, b, w1, w2)).epsilon(1e-10));
    }
}

TEST_CASE("Err rejects a degenerate quantile range")
{
    RaTuning t;
    t.quantile_lo = 0.6;
    t.quantile_hi = 0.4;
    CHECK_THROWS_AS(err_objective(*uniform_distribution(0, 1), 0, 0, t), ParameterError);
    const auto point = empirical_distribution(EmpiricalCdf(std::vector<double>{2, 2, 2}));
    CHECK_THROWS_AS(err_objective(*point, 0, 0), ParameterError);
}

TEST_CASE("empirical Err")
{
    const std::vector<double> two{0, 1};
    CHECK(err_objective_empirical(two, 0, 0) == doctest::Approx(0.5));
    // All targets equal c: F_hat = 1, so each term is |c - 2 w1|.
    const std::vector<double> same(5, 3.0);
    CHECK(err_objective_empirical(same, 1.5, -7.0) == doctest::Approx(0.0));
    CHECK(err_objective_empirical(same, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(err_objective_empirical(std::vector<double>{}, 0, 0), ParameterError);

    auto rng = testgen::rng_for(3, 50);
    const Vector s = testgen::normal_vector(40, rng);
    std::vector<double> a(s.begin(), s.end()), b = a;
    std::shuffle(b.begin(), b.end(), rng);
    CHECK(err_objective_empirical(a, 0.3, -0.2) == err_objective_empirical(b, 0.3, -0.2));
}

TEST_CASE("tune_weights recovers the uniform minimizer")
{
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.0, 2.0}, std::pair{-1.0, 3.0}}) {
        const RiskConfig c = tune_weights(*uniform_distribution(a, b));
        CHECK(std::abs(c.w1 - b / 2) <= 0.02);
        CHECK(std::abs(c.w2 - a / 2) <= 0.02);
        CHECK(std::abs(c.lambda - (a + b) / 4) <= 0.02);
        CHECK(c.lambda == doctest::Approx((c.w1 + c.w2) / 2));
    }
    const RiskConfig u = tune_weights(*uniform_distribution(0, 1));
    CHECK(err_objective(*uniform_distribution(0, 1), u.w1, u.w2) <= 1e-3);
}

TEST_CASE("tune_weights on a symmetric target")
{
    const auto g = gaussian_distribution(0, 1);
    const RiskConfig c = tune_weights(*g);
    CHECK(std::abs(c.w1 + c.w2) <= 0.02);

    // Dense scan along the antisymmetric line w2 = -w1.
    double best_w = 0.0, best_v = 1e300;
    for (int i = 0; i <= 4000; ++i) {
        const double w = 2.0 * i / 4000.0;
        const double v = err_objective(*g, w, -w);
        if (v < best_v) {
            best_v = v;
            best_w = w;
        }
    }
    CHECK(std::abs(c.w1 - best_w) <= 0.02);
    CHECK(err_objective(*g, c.w1, c.w2) <= best_v + 1e-4);
}

TEST_CASE("tune_weights is deterministic and order-free on samples")
{
    auto rng = testgen::rng_for(4, 50);
    const Vector s = testgen::normal_vector(300, rng);
    std::vector<double> a(s.begin(), s.end()), b = a;
    std::shuffle(b.begin(), b.end(), rng);
    const RiskConfig ca = tune_weights_empirical(a), cb = tune_weights_empirical(b);
    CHECK(ca.w1 == cb.w1);
    CHECK(ca.w2 == cb.w2);
    const RiskConfig k1 = tune_weights(*kde_distribution(fit_kde(a)));
    const RiskConfig k2 = tune_weights(*kde_distribution(fit_kde(b)));
    CHECK(k1.w1 == k2.w1);
    CHECK(k1.w2 == k2.w2);

    // Uniform sample: close to (b/2, a/2) as well.
    const Matrix u = testgen::uniform_matrix(5000, 1, rng, 0, 2);
    const std::vector<double> uv(u.data(), u.data() + u.size());
    const RiskConfig cu = tune_weights_empirical(uv);
    CHECK(std::abs(cu.w1 - 1.0) < 0.05);
    CHECK(std::abs(cu.w2) < 0.05);
}

TEST_CASE("optimal lambda")
{
    CHECK(optimal_lambda(0.3, 0.2, {2.0, 2.0}) == doctest::Approx(0.5));
    CHECK(optimal_lambda(1.0, 0.0, {0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(optimal_lambda(0.5, 0.0, {1.0, 1.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(optimal_lambda(1.0, 0.0, {0.0, 0.0}), DegenerateVarianceError);
}

TEST_CASE("variance estimation")
{
    const auto sq = BregmanGenerator::squared();
    const PairwiseSet p(column({1, 2, 4}), column({0, 0, 1}));
    const RaVariances zero = estimate_variances(LinearModel::zeros(1), sq, p);
    CHECK(zero.sigma2_plus == 0.0);
    CHECK(zero.sigma2_minus == 0.0);

    // phi'(h) = 2x on winners {1, 2, 4}: values {2, 4, 8}, mean 14/3.
    const RaVariances v = estimate_variances(LinearModel(Vector::Ones(1)), sq, p);
    CHECK(v.sigma2_plus == doctest::Approx(28.0 / 3.0));
    CHECK(v.sigma2_minus == doctest::Approx(4.0 / 3.0));

    const PairwiseSet same(column({1, 5, 2}), column({1, 5, 2}));
    const RaVariances s = estimate_variances(LinearModel(Vector::Ones(1)), sq, same);
    CHECK(s.sigma2_plus == s.sigma2_minus);

    CHECK_THROWS_AS(estimate_variances(LinearModel::zeros(1), sq, PairwiseSet(column({1}), column({0}))),
                    ParameterError);
}

TEST_CASE("RA empirical risk hand instances")
{
    const auto sq = BregmanGenerator::squared();
    const Matrix unl = column({1, 2});
    const PairwiseSet one(column({2}), column({1}));
    CHECK(ra_empirical_risk(LinearModel(Vector::Ones(1)), sq, unl, one, {0.5, 0.0, 0.0}) ==
          doctest::Approx(0.5));
    CHECK(ra_empirical_risk(LinearModel::zeros(1), sq, unl, one, {0.7, -0.3, 0.0}) == 0.0);
    CHECK_THROWS_AS(ra_empirical_risk(LinearModel(Vector::Ones(2)), sq, unl, one, {}), ShapeError);
}

TEST_CASE("lambda cancels when unlabeled rows equal the pair rows")
{
    auto rng = testgen::rng_for(5, 50);
    for (const auto& gen : {BregmanGenerator::squared(), BregmanGenerator::bernoulli_kl()}) {
        for (int t = 0; t < 10; ++t) {
            const Matrix x = testgen::uniform_matrix(30, 2, rng, 0.1, 0.4);
            const PairwiseSet pairs(x, x);
            const LinearModel h(testgen::uniform_matrix(2, 1, rng, 0.2, 0.9).col(0));
            const double w1 = testgen::uniform_real(-1, 1, rng), w2 = testgen::uniform_real(-1, 1, rng);
            const double r0 = ra_empirical_risk(h, gen, x, pairs, {w1, w2, -2.0});
            const double r1 = ra_empirical_risk(h, gen, x, pairs, {w1, w2, 3.0});
            CHECK(r0 == doctest::Approx(r1).epsilon(1e-12));
        }
    }
}

TEST_CASE("RA gradient matches finite differences")
{
    auto rng = testgen::rng_for(6, 50);
    for (int t = 0; t < 50; ++t) {
        const int d = testgen::uniform_int(1, 5, rng);
        const Matrix unl = testgen::normal_matrix(40, d, rng);
        const PairwiseSet pairs = testgen::random_pairs(25, d, rng);
        const RiskConfig cfg{testgen::uniform_real(-1, 1, rng), testgen::uniform_real(-1, 1, rng),
                             testgen::uniform_real(-1, 1, rng)};
        const auto sq = BregmanGenerator::squared();
        const Vector theta = testgen::normal_vector(d, rng);
        const auto f = [&](const Vector& th) {
            return ra_empirical_risk(LinearModel(th), sq, unl, pairs, cfg);
        };
        const Vector g = ra_risk_gradient(LinearModel(theta), sq, unl, pairs, cfg);
        CHECK(testgen::rel_err(g, testgen::central_difference(f, theta)) < 1e-5);
    }
    // KL generator: features and weights keep h inside (0, 1).
    for (int t = 0; t < 50; ++t) {
        const int d = testgen::uniform_int(1, 4, rng);
        const Matrix unl = testgen::uniform_matrix(40, d, rng, 0, 1);
        const PairwiseSet pairs(testgen::uniform_matrix(20, d, rng, 0, 1),
                                testgen::uniform_matrix(20, d, rng, 0, 1));
        const RiskConfig cfg{0.5, 0.1, 0.3};
        const auto kl = BregmanGenerator::bernoulli_kl();
        Vector theta = testgen::uniform_matrix(d + 1, 1, rng, -0.2 / d, 0.2 / d).col(0);
        theta(d) = 0.5;
        const auto f = [&](const Vector& th) {
            return ra_empirical_risk(LinearModel(th, true), kl, unl, pairs, cfg);
        };
        const Vector g = ra_risk_gradient(LinearModel(theta, true), kl, unl, pairs, cfg);
        CHECK(testgen::rel_err(g, testgen::central_difference(f, theta, 1e-7)) < 1e-5);
    }
}

TEST_CASE("squared RA risk is convex along segments")
{
    auto rng = testgen::rng_for(7, 50);
    const auto sq = BregmanGenerator::squared();
    for (int t = 0; t < 100; ++t) {
        const Matrix unl = testgen::normal_matrix(30, 3, rng);
        const PairwiseSet pairs = testgen::random_pairs(20, 3, rng);
        const RiskConfig cfg{testgen::uniform_real(-1, 1, rng), testgen::uniform_real(-1, 1, rng),
                             testgen::uniform_real(-1, 1, rng)};
        const Vector a = testgen::normal_vector(3, rng, 3), b = testgen::normal_vector(3, rng, 3);
        const auto r = [&](const Vector& th) {
            return ra_empirical_risk(LinearModel(th), sq, unl, pairs, cfg);
        };
        CHECK(r(0.5 * (a + b)) <= 0.5 * (r(a) + r(b)) + 1e-12);
    }
}

TEST_CASE("RA closed form matches gradient descent")
{
    auto rng = testgen::rng_for(8, 50);
    const auto sq = BregmanGenerator::squared();
    for (int t = 0; t < 20; ++t) {
        const int d = testgen::uniform_int(1, 5, rng);
        const Matrix unl = testgen::normal_matrix(200, d, rng);
        const PairwiseSet pairs = testgen::random_pairs(80, d, rng);
        const RiskConfig cfg{0.6, -0.4, 0.1};
        RaFitOptions gd;
        gd.force_iterative = true;
        const LinearModel closed = ra_fit(sq, unl, pairs, cfg);
        const LinearModel iter = ra_fit(sq, unl, pairs, cfg, gd);
        CHECK((closed.theta() - iter.theta()).lpNorm<Eigen::Infinity>() < 1e-5);
    }
}

TEST_CASE("RA with null pair weights returns zero")
{
    auto rng = testgen::rng_for(9, 50);
    const Matrix unl = testgen::normal_matrix(50, 3, rng);
    const PairwiseSet pairs = testgen::random_pairs(10, 3, rng);
    const LinearModel m = ra_fit(BregmanGenerator::squared(), unl, pairs, {0.0, 0.0, 0.0});
    CHECK(m.theta().isZero(1e-12));
}

TEST_CASE("RA recovers the identity under uniform coupling")
{
    auto rng = testgen::rng_for(10, 50);
    const Matrix unl = testgen::uniform_matrix(100000, 1, rng, 0, 1);
    const PairwiseSet pairs = uniform_coupled_pairs(100000, rng);
    const LinearModel m = ra_fit(BregmanGenerator::squared(), unl, pairs, {0.5, 0.0, 0.0});
    CHECK(std::abs(m.theta()(0) - 1.0) < 0.05);
}

TEST_CASE("RA risk is unbiased and lambda-invariant under uniform coupling")
{
    // Independent oracle: R(h) = E[(theta X - X)^2] = (theta - 1)^2 / 3 for X ~ U[0, 1].
    const double theta = 2.0;
    const auto sq = BregmanGenerator::squared();
    const LinearModel h(Vector::Constant(1, theta));
    auto rng = testgen::rng_for(11, 50);
    std::vector<double> risk, gap;
    for (int s = 0; s < 1000; ++s) {
        const Matrix unl = testgen::uniform_matrix(500, 1, rng, 0, 1);
        const PairwiseSet pairs = uniform_coupled_pairs(500, rng);
        const double r0 = ra_empirical_risk(h, sq, unl, pairs, {0.5, 0.0, 0.0});
        risk.push_back(r0 + 1.0 / 3.0);
        gap.push_back(r0 - ra_empirical_risk(h, sq, unl, pairs, {0.5, 0.0, 0.7}));
    }
    const auto mean_se = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v)
            m += x / v.size();
        double ss = 0.0;
        for (double x : v)
            ss += (x - m) * (x - m);
        return std::pair{m, std::sqrt(ss / (v.size() - 1) / v.size())};
    };
    const auto [m, se] = mean_se(risk);
    CHECK(std::abs(m - (theta - 1) * (theta - 1) / 3.0) <= 3 * se);
    const auto [g, gse] = mean_se(gap);
    CHECK(std::abs(g) <= 3 * gse);
}

TEST_CASE("two-stage lambda")
{
    auto rng = testgen::rng_for(12, 50);
    const Matrix unl = testgen::uniform_matrix(2000, 1, rng, 0, 1);
    const PairwiseSet pairs = uniform_coupled_pairs(500, rng);
    const auto sq = BregmanGenerator::squared();
    const RaTwoStageResult r = ra_fit_optimal_lambda(sq, unl, pairs, 0.5, 0.0);
    const RaVariances v = estimate_variances(ra_fit(sq, unl, pairs, {0.5, 0.0, 0.25}), sq, pairs);
    CHECK(r.config.lambda == doctest::Approx(optimal_lambda(0.5, 0.0, v)));
    CHECK(r.model.theta().allFinite());
}

TEST_CASE("KL generator fit stays inside the domain")
{
    auto rng = testgen::rng_for(13, 50);
    const Matrix unl = testgen::uniform_matrix(300, 2, rng, -1, 1);
    const PairwiseSet pairs(testgen::uniform_matrix(100, 2, rng, 0, 1),
                            testgen::uniform_matrix(100, 2, rng, -1, 0));
    RaFitOptions opts;
    opts.fit_intercept = true;
    const auto kl = BregmanGenerator::bernoulli_kl();
    const RiskConfig cfg{0.5, 0.0, 0.25};
    const LinearModel m = ra_fit(kl, unl, pairs, cfg, opts);
    const Vector h = m.predict(unl);
    CHECK(h.minCoeff() > 0.0);
    CHECK(h.maxCoeff() < 1.0);
    CHECK(ra_empirical_risk(m, kl, unl, pairs, cfg) <=
          ra_empirical_risk(LinearModel(Vector((Vector(3) << 0, 0, 0.5).finished()), true), kl, unl,
                            pairs, cfg));
}
