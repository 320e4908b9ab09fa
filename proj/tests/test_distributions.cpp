#include "generators.hpp"

#include "uncoupled/distributions.hpp"
#include "uncoupled/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace uncoupled;

namespace {

void check_distribution_contract(const TargetDistribution& d, double lo, double hi)
{
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double y = lo + (hi - lo) * i / 10000.0;
        const double c = d.cdf(y);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c >= prev);
        CHECK(d.pdf(y) >= 0.0);
        prev = c;
    }
    for (int i = 1; i < 999; i += 7) {
        const double u = i / 1000.0;
        CHECK(std::abs(d.cdf(d.inv_cdf(u)) - u) < 1e-6);
    }
}

double integrate(const TargetDistribution& d, double lo, double hi, int steps = 20000)
{
    // Composite Simpson rule.
    const double h = (hi - lo) / steps;
    double s = d.pdf(lo) + d.pdf(hi);
    for (int i = 1; i < steps; ++i)
        s += d.pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("standard normal values")
{
    const auto g = gaussian_distribution(0.0, 1.0);
    CHECK(g->cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g->pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(g->pdf(0.0) == doctest::Approx(0.39894).epsilon(1e-5));
    CHECK(std::abs(g->inv_cdf(g->cdf(1.3)) - 1.3) < 1e-6);
    // Tabulated quantiles.
    CHECK(std::abs(g->inv_cdf(0.975) - 1.959963984540054) < 1e-9);
    CHECK(std::abs(g->inv_cdf(0.8413447460685429) - 1.0) < 1e-9);
    check_distribution_contract(*g, -6, 6);
}

TEST_CASE("gaussian location and scale")
{
    const auto g = gaussian_distribution(2.0, 3.0);
    CHECK(g->cdf(2.0) == doctest::Approx(0.5));
    CHECK(g->pdf(5.0) == doctest::Approx(standard_normal_pdf(1.0) / 3.0));
    CHECK(g->inv_cdf(standard_normal_cdf(1.0)) == doctest::Approx(5.0));
    CHECK_THROWS_AS(gaussian_distribution(0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(gaussian_distribution(0.0, -1.0), ParameterError);
    CHECK_THROWS_AS(g->inv_cdf(0.0), DomainError);
    CHECK_THROWS_AS(g->inv_cdf(1.5), DomainError);
}

TEST_CASE("uniform distribution")
{
    const auto u = uniform_distribution(0.0, 1.0);
    CHECK(u->cdf(0.3) == doctest::Approx(0.3));
    CHECK(u->cdf(-1.0) == 0.0);
    CHECK(u->cdf(2.0) == 1.0);
    CHECK(u->pdf(0.5) == 1.0);
    CHECK(u->pdf(-0.5) == 0.0);
    CHECK(u->pdf(1.5) == 0.0);
    CHECK(uniform_distribution(0.0, 2.0)->inv_cdf(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(uniform_distribution(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(uniform_distribution(2.0, 1.0), ParameterError);
    check_distribution_contract(*uniform_distribution(-1, 3), -2, 4);
}

TEST_CASE("KDE single point and collapsed kernels")
{
    const auto single = kde_distribution(KdeModel{{0.0}, 1.0});
    CHECK(single->pdf(0.0) == doctest::Approx(0.39894).epsilon(1e-5));

    const auto triple = kde_distribution(KdeModel{{0.0, 0.0, 0.0}, 1.0});
    for (double y : {-2.0, -0.5, 0.0, 0.7, 1.9})
        CHECK(triple->cdf(y) == doctest::Approx(standard_normal_cdf(y)).epsilon(1e-12));

    for (double h : {0.1, 1.0, 7.0})
        CHECK(std::abs(kde_distribution(KdeModel{{-1.0, 1.0}, h})->cdf(0.0) - 0.5) < 1e-9);
}

TEST_CASE("KDE normalization and inverse")
{
    auto rng = testgen::rng_for(3);
    const Vector sample = testgen::normal_vector(200, rng, 2.0);
    const std::vector<double> values(sample.begin(), sample.end());
    const KdeModel model = fit_kde(values);
    CHECK(model.bandwidth > 0.0);
    const auto kde = kde_distribution(model);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn - 5 * model.bandwidth, hi = *mx + 5 * model.bandwidth;
    const double mass = integrate(*kde, lo, hi);
    CHECK(mass >= 0.999);
    CHECK(mass <= 1.001);
    for (double y = *mn; y <= *mx; y += 0.05)
        CHECK(std::abs(kde->inv_cdf(kde->cdf(y)) - y) < 1e-6);
    check_distribution_contract(*kde, lo, hi);
    CHECK_THROWS_AS(kde->inv_cdf(0.0), DomainError);
}

TEST_CASE("KDE bandwidth selection")
{
    const std::vector<double> few{1, 2, 3, 4};
    CHECK_THROWS_AS(fit_kde(few), ParameterError);
    const std::vector<double> flat(10, 3.0);
    CHECK_THROWS_AS(fit_kde(flat), ParameterError);
    const std::vector<double> ok{0.1, 0.5, 0.9, 1.4, 2.0, 2.2};
    const std::vector<double> bad_grid{0.5, -1.0};
    CHECK_THROWS_AS(fit_kde(ok, bad_grid), ParameterError);

    // The chosen bandwidth maximizes the CV likelihood over the grid.
    const std::vector<double> grid{0.05, 0.2, 0.5, 1.0, 3.0};
    const KdeModel m = fit_kde(ok, grid);
    for (double h : grid)
        CHECK(kde_cv_log_likelihood(ok, m.bandwidth) >= kde_cv_log_likelihood(ok, h));

    // Silverman's rule of thumb, computed independently.
    double mean = 0.0;
    for (double v : ok)
        mean += v / ok.size();
    double ss = 0.0;
    for (double v : ok)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (ok.size() - 1));
    CHECK(silverman_bandwidth(ok) == doctest::Approx(1.06 * sd * std::pow(6.0, -0.2)));
}

TEST_CASE("KDE fit is invariant to target order")
{
    auto rng = testgen::rng_for(4);
    const Vector sample = testgen::normal_vector(60, rng);
    std::vector<double> a(sample.begin(), sample.end());
    std::vector<double> b(a.rbegin(), a.rend());
    std::shuffle(b.begin(), b.end(), rng);
    const KdeModel ma = fit_kde(a), mb = fit_kde(b);
    CHECK(ma.bandwidth == mb.bandwidth);
    CHECK(kde_distribution(ma)->cdf(0.3) == kde_distribution(mb)->cdf(0.3));
}

TEST_CASE("empirical CDF evaluation")
{
    const std::vector<double> v{3, 1, 2};
    const EmpiricalCdf ecdf(v);
    CHECK(ecdf(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(ecdf(0.0) == 0.0);
    CHECK(ecdf(3.0) == 1.0);
    CHECK(ecdf.quantile(0.5) == 2.0);
    CHECK(ecdf.quantile(1.0 / 3.0) == 1.0);
    CHECK(ecdf.quantile(0.99) == 3.0);
    CHECK(ecdf.sorted_values() == std::vector<double>{1, 2, 3});
    CHECK_THROWS(EmpiricalCdf(std::vector<double>{}));

    const auto dist = empirical_distribution(ecdf);
    CHECK(dist->cdf(2.5) == doctest::Approx(2.0 / 3.0));
    CHECK(dist->inv_cdf(0.9) == 3.0);
}

TEST_CASE("empirical CDF is permutation invariant")
{
    auto rng = testgen::rng_for(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector s = testgen::normal_vector(50, rng);
        std::vector<double> a(s.begin(), s.end()), b = a;
        std::shuffle(b.begin(), b.end(), rng);
        const EmpiricalCdf ea(a), eb(b);
        for (double y = -3; y <= 3; y += 0.1)
            CHECK(ea(y) == eb(y));
    }
}

TEST_CASE("KS distance shrinks with sample size")
{
    const auto g = gaussian_distribution(0.0, 1.0);
    int better = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto rng = testgen::rng_for(static_cast<std::uint64_t>(trial), 6);
        const Vector small = testgen::normal_vector(100, rng);
        const Vector large = testgen::normal_vector(10000, rng);
        const double ks_small =
            ks_distance(EmpiricalCdf(std::vector<double>(small.begin(), small.end())), *g);
        const double ks_large =
            ks_distance(EmpiricalCdf(std::vector<double>(large.begin(), large.end())), *g);
        if (ks_large < ks_small)
            ++better;
    }
    CHECK(better >= 95);
}

TEST_CASE("two-sample KS distance")
{
    const EmpiricalCdf a(std::vector<double>{1, 2, 3, 4});
    const EmpiricalCdf b(std::vector<double>{1, 2, 3, 4});
    CHECK(ks_distance(a, b) == 0.0);
    const EmpiricalCdf c(std::vector<double>{5, 6});
    CHECK(ks_distance(a, c) == 1.0);
    const EmpiricalCdf d(std::vector<double>{2.5});
    CHECK(ks_distance(a, d) == doctest::Approx(0.5));
}

TEST_CASE("probability clamping")
{
    CHECK(clamp_probability(0.5) == 0.5);
    CHECK(clamp_probability(1e-15) == kQuantileClamp);
    CHECK(clamp_probability(1 - 1e-15) == 1 - kQuantileClamp);
    CHECK_THROWS_AS(clamp_probability(0.0), DomainError);
    CHECK_THROWS_AS(clamp_probability(1.0), DomainError);
    CHECK_THROWS_AS(clamp_probability(std::nan("")), DomainError);
}
