#include "stabrad/sensitivity.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace stabrad {

bool SensitivityBundle::is_feasible(std::size_t k) const {
    return std::find(feasible.begin(), feasible.end(), k) != feasible.end();
}

double default_tol_feas(const RealMatrix& b, const RealMatrix& c) { return 1e-9 * (1.0 + b.norm() * c.norm()); }

SensitivityBundle build_sensitivities(const ProblemSpec& spec, const EigenSystem& eig, double tol_feas) {
    if (eig.order() != spec.n()) {
        throw DimensionError("eigensystem order " + std::to_string(eig.order()) + " does not match A");
    }
    if (tol_feas <= 0.0) tol_feas = default_tol_feas(spec.B, spec.C);

    const ComplexMatrix B = spec.B.cast<Complex>();
    const ComplexMatrix C = spec.C.cast<Complex>();
    // Row k of YB is y_k^* B; column k of CZ is C z_k.
    const ComplexMatrix YB = eig.left.adjoint() * B;
    const ComplexMatrix CZ = C * eig.right;

    SensitivityBundle bundle;
    bundle.mask = spec.S;
    bundle.tol_feas = tol_feas;
    bundle.entries.reserve(static_cast<std::size_t>(eig.order()));
    for (Eigen::Index k = 0; k < eig.order(); ++k) {
        EigenSensitivity e;
        e.lambda = eig.values(k);
        e.P = YB.row(k).transpose() * CZ.col(k).transpose();
        e.P_real = e.P.real();
        e.masked_norm = hadamard(spec.S, e.P_real).norm();
        e.condition = eig.condition.size() == eig.order() ? eig.condition(k) : 0.0;
        if (e.masked_norm > tol_feas) bundle.feasible.push_back(static_cast<std::size_t>(k));
        bundle.entries.push_back(std::move(e));
    }
    return bundle;
}

SensitivityBundle build_sensitivities(const ProblemSpec& spec, double simplicity_tol, double tol_feas) {
    return build_sensitivities(spec, eigensystem(spec.A, simplicity_tol), tol_feas);
}

RealVector linearized_real_parts(const SensitivityBundle& bundle, const RealMatrix& delta) {
    RealVector out(static_cast<Eigen::Index>(bundle.size()));
    for (std::size_t k = 0; k < bundle.size(); ++k) {
        const auto& e = bundle.entries[k];
        out(static_cast<Eigen::Index>(k)) = e.lambda.real() + hadamard(e.P_real, delta).sum();
    }
    return out;
}

LinearizedAbscissa linearized_abscissa(const SensitivityBundle& bundle, double beta) {
    if (beta < 0.0) throw NumericError("linearized_abscissa: beta must be nonnegative");
    LinearizedAbscissa best{-std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k < bundle.size(); ++k) {
        const auto& e = bundle.entries[k];
        const double value = e.lambda.real() + beta * e.masked_norm;
        if (value > best.value) best = {value, k};
    }
    return best;
}

Feasibility feasibility(const SensitivityBundle& bundle) {
    Feasibility out;
    out.flags.resize(bundle.size(), false);
    for (std::size_t k = 0; k < bundle.size(); ++k) {
        if (bundle.entries[k].masked_norm > bundle.tol_feas) {
            out.flags[k] = true;
            out.feasible.push_back(k);
        }
    }
    return out;
}

}  // namespace stabrad
