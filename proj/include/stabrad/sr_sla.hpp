#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stabrad/perturbation.hpp"
#include "stabrad/report.hpp"
#include "stabrad/sensitivity.hpp"
#include "stabrad/sr_la.hpp"

namespace stabrad {

/// Settings of the successive-linear scheme. Unset optionals are resolved
/// from the nominal matrix by resolve().
struct SLAConfig {
    std::optional<double> beta;          ///< step radius; default 0.05 * max(1e-3, -alpha(A))
    double beta_growth = 1.5;            ///< multiplier when a step fails to raise the abscissa
    std::optional<double> repair_noise;  ///< default 1e-8 * ||A||
    std::size_t max_iters = 10000;
    bool refine_final = false;
    double refine_tol = 1e-8;            ///< |alpha| target of the final-step bisection
    std::uint64_t seed = 0;
    std::size_t max_beta_growths = 60;
    std::size_t max_noise_repairs = 30;
    Tolerances tol;

    /// Copy with beta and repair_noise filled in for nominal matrix a.
    [[nodiscard]] SLAConfig resolve(const RealMatrix& a) const;
    void check() const;
};

struct SLAStep {
    RealMatrix delta;
    std::size_t k = 0;
    double alpha = 0.0;                ///< true abscissa after the chosen step
    std::vector<double> candidate_alpha;  ///< per entry of the bundle's feasible set
};

/// Greedy step at radius beta: for each k in K take beta (S o P_k^r)/||S o P_k^r||
/// and keep the one with the largest true spectral abscissa of A + B Delta C.
/// Ties go to the smaller k. Throws FeasibilityError when K is empty.
SLAStep sla_step(const ProblemSpec& spec, const SensitivityBundle& bundle, double beta);

SLAStep sla_step(const ProblemSpec& spec, double beta, const Tolerances& tol = {});

/// Successive-linear-approximation stability radius.
///
/// Throws InfeasibleAtNominalError when no eigenvalue of A can be shifted and
/// NonTerminationError when max_iters or a repair budget is exhausted. A
/// nominal matrix that is already unstable yields value 0 with no iterations.
SRReport sr_sla(const ProblemSpec& spec, const SLAConfig& config = {});

struct SweepPoint {
    double gamma = 0.0;
    double alpha = 0.0;
};

/// alpha_sla(gamma) for every gamma of a sorted grid, from one SLA run that
/// continues until the cumulative perturbation norm exceeds the largest gamma.
/// For each gamma the last iterate whose cumulative norm is within gamma is used.
std::vector<SweepPoint> alpha_sla_sweep(const ProblemSpec& spec, const SLAConfig& config,
                                        const std::vector<double>& gamma_grid);

}  // namespace stabrad
