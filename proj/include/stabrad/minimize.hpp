#pragma once

#include <cstddef>
#include <functional>

#include "stabrad/matrix_core.hpp"

namespace stabrad {

using Objective = std::function<double(const RealVector&)>;

struct MinimizeOptions {
    std::size_t max_iters = 200;
    double grad_tol = 1e-10;   ///< relative to 1 + |f|
    double step_tol = 1e-14;   ///< relative to 1 + ||x||
    double fd_step = 1e-6;     ///< central difference step, scaled by 1 + |x_i|
};

struct MinimizeResult {
    RealVector x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Central-difference gradient with per-coordinate step fd_step * (1 + |x_i|).
RealVector central_gradient(const Objective& f, const RealVector& x, double fd_step, std::size_t* evaluations = nullptr);

/// Quasi-Newton (BFGS, inverse-Hessian form) with Armijo backtracking and
/// finite-difference gradients. Non-finite objective values count as +inf.
MinimizeResult minimize_bfgs(const Objective& f, RealVector x0, const MinimizeOptions& options = {});

}  // namespace stabrad
