#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "stabrad/matrix_core.hpp"

namespace stabrad {

enum class Method { LA, SLA };

enum class SRStatus { Feasible, Infeasible };

std::string_view to_string(Method m);
std::string_view to_string(SRStatus s);

/// Per-eigenvalue minimal perturbation of the linearized problem.
struct Candidate {
    std::size_t k = 0;
    double lambda_real = 0.0;
    double masked_norm = 0.0;
    double value = 0.0;  ///< -lambda_k^r / ||S o P_k^r||
    RealMatrix delta;
};

/// One accepted iteration of the successive-linear scheme.
struct SLAIteration {
    std::size_t k = 0;
    RealMatrix step;
    double beta = 0.0;             ///< radius actually used for this step
    double alpha = 0.0;            ///< spectral abscissa after the step
    double cumulative_norm = 0.0;  ///< ||sum of steps so far||
    std::size_t beta_growths = 0;  ///< repair: step radius enlarged
    std::size_t noise_repairs = 0; ///< repair: random structured nudge of A_j
    bool refined = false;          ///< final step shortened by bisection
};

struct SLATrace {
    std::vector<SLAIteration> iterations;
    double noise_norm = 0.0;  ///< total Frobenius norm of injected repair noise
};

struct SRReport {
    Method method = Method::LA;
    SRStatus status = SRStatus::Feasible;
    double value = 0.0;
    std::size_t argmin_k = 0;
    RealMatrix delta_star;
    std::vector<Candidate> per_k;
    std::optional<SLATrace> trace;
    double nominal_abscissa = 0.0;

    [[nodiscard]] bool feasible() const { return status == SRStatus::Feasible; }
};

}  // namespace stabrad
