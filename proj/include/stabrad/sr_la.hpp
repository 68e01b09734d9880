#pragma once

#include <vector>

#include "stabrad/perturbation.hpp"
#include "stabrad/report.hpp"
#include "stabrad/sensitivity.hpp"

namespace stabrad {

/// -lambda_k^r (S o P_k^r) / ||S o P_k^r||^2. Throws FeasibilityError for k outside K.
RealMatrix delta_k_star(const SensitivityBundle& bundle, std::size_t k);

/// Root of SA_k(beta) = lambda_k^r + 1^T (P_k^r o Delta_k(beta)) 1 where
/// Delta_k(beta) is the radius-beta maximizer. Found by bracketing and
/// regula falsi on the linearized model, independent of the closed form.
double sa_root(const SensitivityBundle& bundle, std::size_t k);

/// Candidates for every k in K, in index order.
std::vector<Candidate> la_candidates(const SensitivityBundle& bundle);

/// Closed-form linear-approximation stability radius of a bundle.
SRReport sr_la(const SensitivityBundle& bundle);

struct Tolerances {
    double simplicity_tol = 0.0;  ///< <= 0 selects the default
    double tol_feas = 0.0;        ///< <= 0 selects the default
};

SRReport sr_la(const ProblemSpec& spec, const Tolerances& tol = {});

}  // namespace stabrad
