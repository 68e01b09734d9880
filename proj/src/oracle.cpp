#include "stabrad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stabrad/errors.hpp"
#include "stabrad/sensitivity.hpp"

namespace stabrad {

namespace {

class GridSearch {
public:
    GridSearch(const ProblemSpec& spec, std::size_t points_per_axis) : spec_(spec), points_(points_per_axis) {
        const auto positions = spec.S.free_positions();
        if (positions.size() > kMaxOracleFreeEntries) {
            throw TooManyFreeEntriesError("grid oracle supports at most " + std::to_string(kMaxOracleFreeEntries) +
                                          " free entries, got " + std::to_string(positions.size()));
        }
        if (points_per_axis < 3) throw Error("grid oracle needs at least 3 points per axis");
        for (const auto& [i, j] : positions) directions_.push_back(spec.B.col(i) * spec.C.row(j));
    }

    double max_abscissa(double gamma) {
        if (!(gamma >= 0.0)) throw Error("gamma must be nonnegative");
        best_ = spectral_abscissa(spec_.A);
        const std::size_t f = directions_.size();
        if (f == 0 || gamma == 0.0) return best_;

        std::vector<double> x(f);
        std::vector<std::size_t> idx(f, 0);
        const double h = 2.0 * gamma / static_cast<double>(points_ - 1);
        const double limit = gamma * (1.0 + 1e-12);
        for (;;) {
            double norm2 = 0.0;
            bool on_surface = false;
            for (std::size_t q = 0; q < f; ++q) {
                x[q] = -gamma + h * static_cast<double>(idx[q]);
                norm2 += x[q] * x[q];
                on_surface = on_surface || idx[q] == 0 || idx[q] == points_ - 1;
            }
            const double norm = std::sqrt(norm2);
            if (norm <= limit) evaluate(x, 1.0);
            if (f >= 3 && on_surface && norm > 0.0) evaluate(x, gamma / norm);

            std::size_t q = 0;
            while (q < f && ++idx[q] == points_) idx[q++] = 0;
            if (q == f) break;
        }
        if (f == 2) {
            const std::size_t samples = 8 * points_;
            for (std::size_t s = 0; s < samples; ++s) {
                const double t = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
                x[0] = gamma * std::cos(t);
                x[1] = gamma * std::sin(t);
                evaluate(x, 1.0);
            }
        }
        return best_;
    }

private:
    void evaluate(const std::vector<double>& x, double scale) {
        RealMatrix a = spec_.A;
        for (std::size_t q = 0; q < x.size(); ++q) a.noalias() += (scale * x[q]) * directions_[q];
        best_ = std::max(best_, spectral_abscissa(a));
    }

    const ProblemSpec& spec_;
    std::size_t points_;
    std::vector<RealMatrix> directions_;
    double best_ = 0.0;
};

}  // namespace

double alpha_grid(const ProblemSpec& spec, double gamma, std::size_t points_per_axis) {
    GridSearch search(spec, points_per_axis);
    return search.max_abscissa(gamma);
}

double sr_oracle(const ProblemSpec& spec, std::size_t points_per_axis, double bisect_tol) {
    if (!(bisect_tol > 0.0)) throw Error("bisection tolerance must be positive");
    GridSearch search(spec, points_per_axis);
    const double alpha0 = spectral_abscissa(spec.A);
    if (alpha0 >= 0.0) return 0.0;

    double max_norm = 0.0;
    try {
        const auto bundle = build_sensitivities(spec);
        for (const auto& e : bundle.entries) max_norm = std::max(max_norm, e.masked_norm);
        if (max_norm <= bundle.tol_feas) max_norm = 0.0;
    } catch (const NumericError&) {
        max_norm = 0.0;
    }

    double lo = 0.0;
    double hi = max_norm > 0.0 ? -alpha0 / max_norm : -alpha0;
    while (search.max_abscissa(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw NoUpperBoundError("no destabilizing perturbation found below norm 1e6");
    }
    while (hi - lo > bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (search.max_abscissa(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<SweepRow> abscissa_sweep(const ProblemSpec& spec, const SLAConfig& config,
                                     const std::vector<double>& gamma_grid,
                                     std::optional<std::size_t> oracle_points) {
    const auto bundle = build_sensitivities(spec, config.tol.simplicity_tol, config.tol.tol_feas);
    const auto sla = alpha_sla_sweep(spec, config, gamma_grid);
    std::optional<GridSearch> search;
    if (oracle_points) search.emplace(spec, *oracle_points);

    std::vector<SweepRow> rows;
    rows.reserve(gamma_grid.size());
    for (std::size_t q = 0; q < gamma_grid.size(); ++q) {
        SweepRow row;
        row.gamma = gamma_grid[q];
        row.alpha_la = linearized_abscissa(bundle, row.gamma).value;
        row.alpha_sla = sla[q].alpha;
        if (search) {
            row.alpha_exact = search->max_abscissa(row.gamma);
            row.e_la = std::abs(*row.alpha_exact - row.alpha_la);
            row.e_sla = std::abs(*row.alpha_exact - row.alpha_sla);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<SweepRow> approximation_errors(const ProblemSpec& spec, const SLAConfig& config,
                                           const std::vector<double>& gamma_grid, std::size_t points_per_axis) {
    return abscissa_sweep(spec, config, gamma_grid, points_per_axis);
}

std::vector<double> gamma_grid(double gamma_max, std::size_t steps) {
    if (!(gamma_max >= 0.0)) throw Error("gamma_max must be nonnegative");
    if (steps < 1) throw Error("need at least one gamma step");
    std::vector<double> out(steps);
    if (steps == 1) {
        out[0] = gamma_max;
        return out;
    }
    for (std::size_t q = 0; q < steps; ++q) {
        out[q] = gamma_max * static_cast<double>(q) / static_cast<double>(steps - 1);
    }
    return out;
}

}  // namespace stabrad
