#include "generators.hpp"

#include "uncoupled/errors.hpp"
#include "uncoupled/optim.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace uncoupled;

namespace {

// f(x) = 0.5 x' A x - b' x with A = M'M + I.
struct Quadratic {
    Matrix a;
    Vector b;

    double operator()(const Vector& x, Vector* g) const
    {
        if (g)
            *g = a * x - b;
        return 0.5 * x.dot(a * x) - b.dot(x);
    }
};

} // namespace

TEST_CASE("gradient descent solves random quadratics")
{
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        auto rng = testgen::rng_for(trial, 40);
        const int d = testgen::uniform_int(1, 6, rng);
        const Matrix m = testgen::normal_matrix(d, d, rng);
        const Quadratic q{m.transpose() * m + Matrix::Identity(d, d), testgen::normal_vector(d, rng)};
        const Vector exact = q.a.ldlt().solve(q.b);
        SolverOptions opts;
        opts.precondition = false;
        const auto res = minimize_backtracking(std::cref(q), Vector::Zero(d), opts);
        CHECK(res.converged);
        CHECK((res.x - exact).lpNorm<Eigen::Infinity>() < 1e-6);
    }
}

TEST_CASE("scaled descent reaches the same minimizer")
{
    auto rng = testgen::rng_for(1, 41);
    Matrix a(2, 2);
    a << 1e4, 0, 0, 1e-2;
    Vector b(2);
    b << 1, 1;
    const Quadratic q{a, b};
    Vector scales(2);
    scales << 1e-2, 10;
    const auto res = minimize_scaled(std::cref(q), Vector::Zero(2), scales, {});
    CHECK(res.converged);
    CHECK(res.x(0) == doctest::Approx(1e-4).epsilon(1e-6));
    CHECK(res.x(1) == doctest::Approx(100).epsilon(1e-6));
}

TEST_CASE("non-finite start is a divergence")
{
    const Objective f = [](const Vector&, Vector* g) {
        if (g)
            g->setZero(1);
        return std::numeric_limits<double>::infinity();
    };
    CHECK_THROWS_AS(minimize_backtracking(f, Vector::Zero(1), {}), DivergenceError);
}

TEST_CASE("line search backs off infeasible regions")
{
    // -log(1 - x^2) is finite only on (-1, 1); the minimizer is 0.
    const Objective f = [](const Vector& x, Vector* g) {
        const double v = x(0);
        if (g)
            *g = Vector::Constant(1, 2 * v / (1 - v * v));
        return std::abs(v) < 1 ? -std::log(1 - v * v) : std::numeric_limits<double>::infinity();
    };
    const auto res = minimize_backtracking(f, Vector::Constant(1, 0.9), {});
    CHECK(std::abs(res.x(0)) < 1e-6);
}

TEST_CASE("iteration cap is honoured")
{
    const Quadratic q{Matrix::Identity(2, 2), Vector::Ones(2)};
    SolverOptions opts;
    opts.max_iterations = 0;
    const auto res = minimize_backtracking(std::cref(q), Vector::Zero(2), opts);
    CHECK(res.iterations == 0);
    CHECK_FALSE(res.converged);
}

TEST_CASE("column scales")
{
    Matrix a(2, 3), b(1, 3);
    a << 3, 0, 1, 3, 0, -1;
    b << 3, 0, 1;
    const Vector s = column_scales({&a, &b});
    CHECK(s(0) == doctest::Approx(1.0 / 3.0));
    CHECK(s(1) == 1.0);
    CHECK(s(2) == doctest::Approx(1.0));
}

TEST_CASE("ridge fallback for singular systems")
{
    Matrix a(2, 2);
    a << 1, 1, 1, 1;
    Vector b(2);
    b << 2, 2;
    const Vector x = solve_with_ridge(a, b);
    CHECK(x.allFinite());
    CHECK((a * x - b).norm() < 1e-6);

    const Vector zero = solve_with_ridge(Matrix::Zero(3, 3), Vector::Zero(3));
    CHECK(zero.isZero());

    Matrix spd(2, 2);
    spd << 4, 1, 1, 3;
    const Vector y = solve_with_ridge(spd, b);
    CHECK((spd * y - b).norm() < 1e-12);
}
