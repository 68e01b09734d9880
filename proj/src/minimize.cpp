#include "stabrad/minimize.hpp"

#include <cmath>
#include <limits>

namespace stabrad {

namespace {

double guarded(const Objective& f, const RealVector& x, std::size_t& evaluations) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

RealVector central_gradient(const Objective& f, const RealVector& x, double fd_step, std::size_t* evaluations) {
    RealVector g(x.size());
    RealVector probe = x;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = fd_step * (1.0 + std::abs(x(i)));
        probe(i) = x(i) + h;
        const double up = guarded(f, probe, count);
        probe(i) = x(i) - h;
        const double down = guarded(f, probe, count);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * h);
    }
    if (evaluations) *evaluations += count;
    return g;
}

MinimizeResult minimize_bfgs(const Objective& f, RealVector x0, const MinimizeOptions& options) {
    MinimizeResult out;
    const Eigen::Index n = x0.size();
    out.x = std::move(x0);
    out.value = guarded(f, out.x, out.evaluations);
    if (n == 0) {
        out.converged = true;
        return out;
    }

    RealMatrix H = RealMatrix::Identity(n, n);
    bool scaled = false;
    RealVector g = central_gradient(f, out.x, options.fd_step, &out.evaluations);

    for (; out.iterations < options.max_iters; ++out.iterations) {
        if (!g.allFinite()) break;
        if (g.norm() <= options.grad_tol * (1.0 + std::abs(out.value))) {
            out.converged = true;
            break;
        }
        RealVector d = -H * g;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            H.setIdentity();
            d = -g;
            slope = -g.squaredNorm();
        }

        double t = 1.0;
        RealVector trial = out.x + d;
        double f_trial = guarded(f, trial, out.evaluations);
        int halvings = 0;
        while (!(f_trial <= out.value + 1e-4 * t * slope) && halvings < 60) {
            t *= 0.5;
            trial = out.x + t * d;
            f_trial = guarded(f, trial, out.evaluations);
            ++halvings;
        }
        if (!(f_trial <= out.value + 1e-4 * t * slope)) {
            // no descent along a finite-difference direction: treat as stationary
            out.converged = true;
            break;
        }

        const RealVector s = trial - out.x;
        const RealVector g_new = central_gradient(f, trial, options.fd_step, &out.evaluations);
        const RealVector y = g_new - g;
        out.x = trial;
        out.value = f_trial;
        g = g_new;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                H *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const RealMatrix I = RealMatrix::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        if (s.norm() <= options.step_tol * (1.0 + out.x.norm())) {
            out.converged = true;
            ++out.iterations;
            break;
        }
    }
    return out;
}

}  // namespace stabrad
