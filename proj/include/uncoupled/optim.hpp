#pragma once

#include "uncoupled/core.hpp"

#include <functional>
#include <initializer_list>

namespace uncoupled {

/// Full-batch gradient descent with Armijo backtracking.
struct SolverOptions {
    int max_iterations = 10000;
    double gradient_tolerance = 1e-8;
    double armijo = 1e-4;
    double initial_step = 1.0;
    /// Run the descent in coordinates rescaled by the column RMS of the data.
    /// This is an exact reparametrization; the minimizer is unchanged.
    bool precondition = true;
};

struct MinimizeResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Returns f(x); fills *grad when it is non-null. Non-finite values mark
/// infeasible points and make the line search shrink.
using Objective = std::function<double(const Vector& x, Vector* grad)>;

/// Minimizes f from x0. Stops at ||grad|| <= tolerance, at the iteration cap,
/// or when the step underflows. Throws DivergenceError when f(x0) is not finite.
MinimizeResult minimize_backtracking(const Objective& f, Vector x0, const SolverOptions& options);

/// Runs `f` in coordinates u with x = scales .* u and maps the result back.
MinimizeResult minimize_scaled(const Objective& f, const Vector& x0, const Vector& scales,
                               const SolverOptions& options);

/// Inverse column RMS over the stacked matrices, 1 for all-zero columns.
Vector column_scales(std::initializer_list<const Matrix*> blocks);

/// Solves the symmetric positive semi-definite system a x = b, adding
/// ridge * I when a is singular. Throws NumericError if that still fails.
Vector solve_with_ridge(const Matrix& a, const Vector& b, double ridge = 1e-8);

} // namespace uncoupled
