#include "uncoupled/optim.hpp"

#include "uncoupled/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uncoupled {

namespace {

constexpr double kStallRelative = 1e-14;
constexpr int kStallSteps = 5;

// Below this gradient norm the Armijo test can no longer be resolved in
// double precision, so the point is as converged as it can get.
bool at_noise_floor(double gradient_norm, double value)
{
    return gradient_norm <= 1e-5 * std::max(1.0, std::abs(value));
}

} // namespace

MinimizeResult minimize_backtracking(const Objective& f, Vector x0, const SolverOptions& options)
{
    MinimizeResult result;
    result.x = std::move(x0);
    Vector grad(result.x.size());
    result.value = f(result.x, &grad);
    if (!std::isfinite(result.value) || !grad.allFinite())
        throw DivergenceError("objective is not finite at the starting point");

    double step = options.initial_step;
    int stalled = 0;
    Vector trial(result.x.size());
    for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
        const double gnorm2 = grad.squaredNorm();
        if (std::sqrt(gnorm2) <= options.gradient_tolerance) {
            result.converged = true;
            return result;
        }
        double t = step;
        double trial_value = 0.0;
        bool accepted = false;
        while (t > 1e-30) {
            trial = result.x - t * grad;
            trial_value = f(trial, nullptr);
            if (std::isfinite(trial_value) &&
                trial_value <= result.value - options.armijo * t * gnorm2) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        // No representable decrease left along -grad. That counts as converged
        // when the gradient is already at the floating-point noise floor.
        if (!accepted) {
            result.converged = at_noise_floor(std::sqrt(gnorm2), result.value);
            return result;
        }
        const double previous = result.value;
        result.x = trial;
        result.value = f(result.x, &grad);
        if (!std::isfinite(result.value) || !grad.allFinite())
            throw DivergenceError("objective became non-finite during descent");
        step = 2.0 * t;
        // Decreases at the level of rounding noise are not progress.
        if (previous - result.value <= kStallRelative * std::max(1.0, std::abs(previous))) {
            if (++stalled >= kStallSteps) {
                ++result.iterations;
                result.converged = at_noise_floor(grad.norm(), result.value);
                return result;
            }
        } else {
            stalled = 0;
        }
    }
    result.converged = grad.norm() <= options.gradient_tolerance;
    return result;
}

MinimizeResult minimize_scaled(const Objective& f, const Vector& x0, const Vector& scales,
                               const SolverOptions& options)
{
    if (!options.precondition)
        return minimize_backtracking(f, x0, options);
    Objective scaled = [&](const Vector& u, Vector* grad) {
        const Vector x = scales.cwiseProduct(u);
        const double v = f(x, grad);
        if (grad)
            *grad = grad->cwiseProduct(scales);
        return v;
    };
    MinimizeResult r = minimize_backtracking(scaled, x0.cwiseQuotient(scales), options);
    r.x = scales.cwiseProduct(r.x);
    return r;
}

Vector column_scales(std::initializer_list<const Matrix*> blocks)
{
    Eigen::Index cols = -1;
    Vector sum_sq;
    double rows = 0.0;
    for (const Matrix* m : blocks) {
        if (cols < 0) {
            cols = m->cols();
            sum_sq = Vector::Zero(cols);
        }
        if (m->cols() != cols)
            throw ShapeError("column_scales: blocks differ in width");
        sum_sq += m->colwise().squaredNorm().transpose();
        rows += static_cast<double>(m->rows());
    }
    Vector scales(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double rms = rows > 0 ? std::sqrt(sum_sq(j) / rows) : 0.0;
        scales(j) = rms > 0.0 ? 1.0 / rms : 1.0;
    }
    return scales;
}

Vector solve_with_ridge(const Matrix& a, const Vector& b, double ridge)
{
    Eigen::LDLT<Matrix> ldlt(a);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-13) {
        Vector x = ldlt.solve(b);
        if (x.allFinite())
            return x;
    }
    const Matrix regularized = a + ridge * Matrix::Identity(a.rows(), a.cols());
    Eigen::LDLT<Matrix> ridge_ldlt(regularized);
    if (ridge_ldlt.info() != Eigen::Success)
        throw NumericError("normal equations are singular even after ridge regularization");
    Vector x = ridge_ldlt.solve(b);
    if (!x.allFinite())
        throw NumericError("normal equations are singular even after ridge regularization");
    return x;
}

} // namespace uncoupled
