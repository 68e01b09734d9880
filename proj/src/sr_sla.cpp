#include "stabrad/sr_sla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

SLAConfig SLAConfig::resolve(const RealMatrix& a) const {
    SLAConfig out = *this;
    if (!out.beta) out.beta = 0.05 * std::max(1e-3, -spectral_abscissa(a));
    if (!out.repair_noise) out.repair_noise = 1e-8 * a.norm();
    return out;
}

void SLAConfig::check() const {
    if (beta && !(*beta > 0.0)) throw Error("SLA beta must be positive");
    if (!(beta_growth > 1.0)) throw Error("SLA beta_growth must exceed 1");
    if (repair_noise && !(*repair_noise >= 0.0)) throw Error("SLA repair_noise must be nonnegative");
    if (max_iters < 1) throw Error("SLA max_iters must be at least 1");
    if (!(refine_tol > 0.0)) throw Error("SLA refine_tol must be positive");
}

SLAStep sla_step(const ProblemSpec& spec, const SensitivityBundle& bundle, double beta) {
    if (bundle.feasible.empty()) {
        throw FeasibilityError("no eigenvalue can be shifted by the allowed perturbations");
    }
    SLAStep best;
    best.alpha = -std::numeric_limits<double>::infinity();
    best.candidate_alpha.reserve(bundle.feasible.size());
    for (std::size_t k : bundle.feasible) {
        const auto& e = bundle.entries[k];
        RealMatrix delta = (beta / e.masked_norm) * hadamard(bundle.mask, e.P_real);
        const double alpha = spectral_abscissa(apply_perturbation(spec, delta));
        best.candidate_alpha.push_back(alpha);
        if (alpha > best.alpha) {
            best.alpha = alpha;
            best.k = k;
            best.delta = std::move(delta);
        }
    }
    return best;
}

SLAStep sla_step(const ProblemSpec& spec, double beta, const Tolerances& tol) {
    return sla_step(spec, build_sensitivities(spec, tol.simplicity_tol, tol.tol_feas), beta);
}

namespace {

enum class StopRule { Unstable, NormBudget };

struct SLARun {
    RealMatrix sum;
    RealMatrix current;
    double alpha = 0.0;
    SLATrace trace;
};

class SLAEngine {
public:
    SLAEngine(const ProblemSpec& spec, const SLAConfig& config)
        : spec_(spec), config_(config.resolve(spec.A)), rng_(config.seed) {
        config_.check();
    }

    SLARun run(StopRule rule, double budget) {
        SLARun state;
        state.sum = RealMatrix::Zero(spec_.m(), spec_.p());
        state.current = spec_.A;
        state.alpha = spectral_abscissa(spec_.A);
        if (rule == StopRule::Unstable && state.alpha >= 0.0) return state;

        const auto nominal = build_sensitivities(spec_, config_.tol.simplicity_tol, config_.tol.tol_feas);
        if (nominal.feasible.empty()) {
            throw InfeasibleAtNominalError("empty feasible set: no eigenvalue of the nominal matrix can be shifted");
        }

        RealMatrix previous = state.current;

        while (keep_going(rule, budget, state)) {
            if (state.trace.iterations.size() >= config_.max_iters) {
                throw NonTerminationError("SLA exceeded " + std::to_string(config_.max_iters) + " iterations");
            }
            SLAIteration record;
            const auto bundle = usable_bundle(state, record);

            ProblemSpec at = with_nominal(spec_, state.current);
            double beta = *config_.beta;
            SLAStep step = sla_step(at, bundle, beta);
            while (!(step.alpha > state.alpha)) {
                if (++record.beta_growths > config_.max_beta_growths) {
                    throw NonTerminationError("SLA step failed to raise the spectral abscissa after " +
                                              std::to_string(config_.max_beta_growths) + " radius increases");
                }
                beta *= config_.beta_growth;
                step = sla_step(at, bundle, beta);
            }

            previous = state.current;
            state.current = state.current + spec_.B * step.delta * spec_.C;
            state.sum += step.delta;
            state.alpha = step.alpha;

            record.k = step.k;
            record.step = step.delta;
            record.beta = beta;
            record.alpha = step.alpha;
            record.cumulative_norm = state.sum.norm();
            state.trace.iterations.push_back(std::move(record));
        }

        if (rule == StopRule::Unstable && config_.refine_final && !state.trace.iterations.empty()) {
            refine_last(state, previous);
        }
        return state;
    }

    [[nodiscard]] const SLAConfig& config() const { return config_; }

private:
    static bool keep_going(StopRule rule, double budget, const SLARun& state) {
        if (rule == StopRule::Unstable) return state.alpha < 0.0;
        const double used = state.trace.iterations.empty() ? 0.0 : state.trace.iterations.back().cumulative_norm;
        return used <= budget;
    }

    // Bundle at the current iterate, nudging it with structured noise B N C
    // while the eigenvalues are not simple or none of them can be shifted.
    SensitivityBundle usable_bundle(SLARun& state, SLAIteration& record) {
        double scale = *config_.repair_noise;
        for (;;) {
            try {
                auto bundle = build_sensitivities(with_nominal(spec_, state.current), config_.tol.simplicity_tol,
                                                  config_.tol.tol_feas);
                if (!bundle.feasible.empty()) return bundle;
            } catch (const NumericError&) {
                // repeated or defective spectrum at the iterate; repaired below
            }
            if (record.noise_repairs >= config_.max_noise_repairs) {
                throw NonTerminationError("SLA could not restore feasibility after " +
                                          std::to_string(config_.max_noise_repairs) + " random repairs");
            }
            RealMatrix noise(spec_.m(), spec_.p());
            for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = normal_(rng_);
            const double norm = noise.norm();
            if (norm > 0.0) noise *= (scale > 0.0 ? scale : 1e-12) / norm;
            state.current += spec_.B * noise * spec_.C;
            state.alpha = spectral_abscissa(state.current);
            state.trace.noise_norm += noise.norm();
            ++record.noise_repairs;
            scale *= 2.0;
        }
    }

    // Shrinks the final step so the abscissa lands in [0, refine_tol].
    void refine_last(SLARun& state, const RealMatrix& previous) {
        auto& last = state.trace.iterations.back();
        const RealMatrix full_step = last.step;
        auto alpha_at = [&](double t) { return spectral_abscissa(previous + spec_.B * (t * full_step) * spec_.C); };

        double lo = 0.0;
        double hi = 1.0;
        double alpha_hi = state.alpha;
        for (int it = 0; it < 200 && alpha_hi > config_.refine_tol && hi - lo > 1e-17; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double a = alpha_at(mid);
            if (a >= 0.0) {
                hi = mid;
                alpha_hi = a;
            } else {
                lo = mid;
            }
        }
        const RealMatrix step = hi * full_step;
        state.sum += step - full_step;
        state.current = previous + spec_.B * step * spec_.C;
        state.alpha = alpha_hi;
        last.step = step;
        last.alpha = alpha_hi;
        last.cumulative_norm = state.sum.norm();
        last.refined = true;
    }

    const ProblemSpec& spec_;
    SLAConfig config_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

SRReport sr_sla(const ProblemSpec& spec, const SLAConfig& config) {
    SLAEngine engine(spec, config);
    auto run = engine.run(StopRule::Unstable, 0.0);

    SRReport report;
    report.method = Method::SLA;
    report.status = SRStatus::Feasible;
    report.nominal_abscissa = spectral_abscissa(spec.A);
    report.value = run.sum.norm();
    report.delta_star = std::move(run.sum);
    if (!run.trace.iterations.empty()) report.argmin_k = run.trace.iterations.back().k;
    report.trace = std::move(run.trace);
    return report;
}

std::vector<SweepPoint> alpha_sla_sweep(const ProblemSpec& spec, const SLAConfig& config,
                                        const std::vector<double>& gamma_grid) {
    if (gamma_grid.empty()) return {};
    for (std::size_t q = 0; q < gamma_grid.size(); ++q) {
        if (!(gamma_grid[q] >= 0.0)) throw Error("gamma values must be nonnegative");
        if (q > 0 && gamma_grid[q] < gamma_grid[q - 1]) throw Error("gamma grid must be sorted ascending");
    }

    // Without an explicit radius, steps are kept well below the gamma spacing
    // so that every grid value sees its own iterate.
    SLAConfig effective = config;
    if (!effective.beta) {
        double spacing = std::numeric_limits<double>::infinity();
        for (std::size_t q = 1; q < gamma_grid.size(); ++q) {
            const double gap = gamma_grid[q] - gamma_grid[q - 1];
            if (gap > 0.0) spacing = std::min(spacing, gap);
        }
        const double standard = *config.resolve(spec.A).beta;
        effective.beta = std::isfinite(spacing) ? std::min(standard, 0.1 * spacing) : standard;
    }

    SLAEngine engine(spec, effective);
    const auto run = engine.run(StopRule::NormBudget, gamma_grid.back() * (1.0 + 1e-12));
    const auto& iterations = run.trace.iterations;

    std::vector<SweepPoint> out;
    out.reserve(gamma_grid.size());
    std::size_t used = 0;
    RealMatrix partial = RealMatrix::Zero(spec.m(), spec.p());
    for (double gamma : gamma_grid) {
        const double budget = gamma * (1.0 + 1e-12);
        while (used < iterations.size() && iterations[used].cumulative_norm <= budget) {
            partial += iterations[used].step;
            ++used;
        }
        out.push_back({gamma, spectral_abscissa(apply_perturbation(spec, partial))});
    }
    return out;
}

}  // namespace stabrad
