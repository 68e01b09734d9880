#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stabrad/perturbation.hpp"
#include "stabrad/sr_sla.hpp"

namespace stabrad {

inline constexpr std::size_t kMaxOracleFreeEntries = 4;
inline constexpr std::size_t kDefaultGridPoints = 41;
inline constexpr double kDefaultBisectTol = 1e-6;

/// max alpha(A + B Delta C) over sparse Delta with ||Delta|| <= gamma, by
/// exhaustive search: a cube grid of the free entries clipped to the ball,
/// plus points on the bounding sphere. Never below alpha(A).
double alpha_grid(const ProblemSpec& spec, double gamma, std::size_t points_per_axis = kDefaultGridPoints);

/// Reference stability radius: smallest gamma with alpha_grid(gamma) >= 0,
/// located by doubling then bisection.
double sr_oracle(const ProblemSpec& spec, std::size_t points_per_axis = kDefaultGridPoints,
                 double bisect_tol = kDefaultBisectTol);

struct SweepRow {
    double gamma = 0.0;
    std::optional<double> alpha_exact;
    double alpha_la = 0.0;
    double alpha_sla = 0.0;
    std::optional<double> e_la;
    std::optional<double> e_sla;
};

/// alpha_la(gamma) and alpha_sla(gamma) over a sorted grid; with
/// oracle_points set, also the grid-search abscissa and absolute errors.
std::vector<SweepRow> abscissa_sweep(const ProblemSpec& spec, const SLAConfig& config,
                                     const std::vector<double>& gamma_grid,
                                     std::optional<std::size_t> oracle_points = std::nullopt);

/// abscissa_sweep with the oracle columns always present.
std::vector<SweepRow> approximation_errors(const ProblemSpec& spec, const SLAConfig& config,
                                           const std::vector<double>& gamma_grid,
                                           std::size_t points_per_axis = kDefaultGridPoints);

/// n evenly spaced values from 0 to gamma_max inclusive.
std::vector<double> gamma_grid(double gamma_max, std::size_t steps);

}  // namespace stabrad
