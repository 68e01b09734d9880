#pragma once

#include <vector>

#include "stabrad/matrix_core.hpp"
#include "stabrad/perturbation.hpp"

namespace stabrad {

/// First-order sensitivity of one eigenvalue to the entries of Delta.
struct EigenSensitivity {
    Complex lambda;
    ComplexMatrix P;          ///< d lambda / d Delta_ij, rank one
    RealMatrix P_real;        ///< Re(P)
    double masked_norm = 0.0; ///< ||S o Re(P)||
    double condition = 0.0;   ///< eigenvalue condition number, diagnostic only
};

struct SensitivityBundle {
    std::vector<EigenSensitivity> entries;
    SparsityMask mask;
    double tol_feas = 0.0;
    std::vector<std::size_t> feasible;  ///< indices k with masked_norm > tol_feas

    [[nodiscard]] std::size_t size() const { return entries.size(); }
    [[nodiscard]] bool is_feasible(std::size_t k) const;
};

/// 1e-9 * (1 + ||B|| ||C||).
double default_tol_feas(const RealMatrix& b, const RealMatrix& c);

/// P_k = (y_k^* B)^T (C z_k)^T for every eigenvalue. A non-positive tol_feas
/// selects the default.
SensitivityBundle build_sensitivities(const ProblemSpec& spec, const EigenSystem& eig, double tol_feas = 0.0);

/// Eigendecomposes spec.A and builds the bundle.
SensitivityBundle build_sensitivities(const ProblemSpec& spec, double simplicity_tol = 0.0,
                                      double tol_feas = 0.0);

/// lambda_k^r + sum_ij [P_k^r]_ij Delta_ij for every k.
RealVector linearized_real_parts(const SensitivityBundle& bundle, const RealMatrix& delta);

struct LinearizedAbscissa {
    double value = 0.0;
    std::size_t k = 0;
};

/// max_k lambda_k^r + beta ||S o P_k^r||; ties go to the smaller index.
LinearizedAbscissa linearized_abscissa(const SensitivityBundle& bundle, double beta);

struct Feasibility {
    std::vector<std::size_t> feasible;
    std::vector<bool> flags;

    [[nodiscard]] bool empty() const { return feasible.empty(); }
};

Feasibility feasibility(const SensitivityBundle& bundle);

}  // namespace stabrad
