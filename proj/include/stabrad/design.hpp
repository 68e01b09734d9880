#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "stabrad/minimize.hpp"
#include "stabrad/perturbation.hpp"
#include "stabrad/report.hpp"
#include "stabrad/sr_sla.hpp"

namespace stabrad {

/// Exterior quadratic penalty with multi-start and a final Gauss-Newton
/// feasibility restoration.
struct SolverConfig {
    std::size_t restarts = 5;        ///< total starts: Delta_o = 0 plus restarts - 1 random points
    std::uint64_t seed = 0;
    std::size_t penalty_rounds = 5;
    double rho0 = 10.0;
    double rho_growth = 10.0;
    std::size_t inner_iters = 200;
    double fd_step = 1e-6;
    double constraint_tol = 1e-6;
    double start_scale = 0.1;        ///< random starts have norm start_scale * epsilon
    std::size_t restoration_iters = 30;
    SLAConfig sla;                   ///< constraint evaluator for SD_sla; refine_final is forced on
    Tolerances tol;

    void check() const;
};

enum class DesignStatus { Optimized, TargetAlreadyMet, NotConverged };

std::string_view to_string(DesignStatus s);

struct SolverDiagnostics {
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
    std::size_t converged_starts = 0;
    double final_penalty = 0.0;
    double max_violation = 0.0;
    bool converged = false;
};

struct DesignReport {
    Method method = Method::LA;
    DesignStatus status = DesignStatus::Optimized;
    double epsilon = 0.0;
    double initial_sr = 0.0;             ///< optimized approximation at Delta_o = 0
    RealMatrix delta_o_star;
    double norm = 0.0;
    std::optional<double> achieved_sr_la;   ///< empty when the feasible set is empty
    std::optional<double> achieved_sr_sla;  ///< empty when the SLA run fails
    RealMatrix redesigned;               ///< A + Bo Delta_o* Co
    SolverDiagnostics solver;
};

/// Minimum-norm Delta_o with SR_la(A + Bo Delta_o Co) >= epsilon, written as
/// one constraint per shiftable eigenvalue of the redesigned matrix.
DesignReport solve_sd_la(const ProblemSpec& spec, double epsilon, const SolverConfig& config = {});

/// Minimum-norm Delta_o with SR_sla(A + Bo Delta_o Co) >= epsilon.
DesignReport solve_sd_sla(const ProblemSpec& spec, double epsilon, const SolverConfig& config = {});

/// Per-eigenvalue LA candidates -lambda_k^r/||S o P_k^r|| of spec.A; shiftless
/// eigenvalues contribute nothing. Empty optional if the spectrum is not simple.
std::optional<std::vector<double>> la_constraint_values(const ProblemSpec& spec, const Tolerances& tol = {});

}  // namespace stabrad
