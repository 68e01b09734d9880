#include "stabrad/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "stabrad/errors.hpp"
#include "stabrad/sensitivity.hpp"
#include "stabrad/sr_la.hpp"

namespace stabrad {

void SolverConfig::check() const {
    if (restarts < 1) throw Error("solver restarts must be at least 1");
    if (penalty_rounds < 1) throw Error("solver penalty_rounds must be at least 1");
    if (!(rho0 > 0.0) || !(rho_growth > 1.0)) throw Error("solver penalty schedule is invalid");
    if (!(fd_step > 0.0)) throw Error("solver fd_step must be positive");
    if (!(constraint_tol > 0.0)) throw Error("solver constraint_tol must be positive");
    sla.check();
}

std::string_view to_string(DesignStatus s) {
    switch (s) {
        case DesignStatus::Optimized: return "optimized";
        case DesignStatus::TargetAlreadyMet: return "target_already_met";
        case DesignStatus::NotConverged: return "not_converged";
    }
    return "unknown";
}

std::optional<std::vector<double>> la_constraint_values(const ProblemSpec& spec, const Tolerances& tol) {
    try {
        const auto bundle = build_sensitivities(spec, tol.simplicity_tol, tol.tol_feas);
        std::vector<double> out;
        for (const auto& c : la_candidates(bundle)) out.push_back(c.value);
        return out;
    } catch (const NumericError&) {
        return std::nullopt;
    }
}

namespace {

using ConstraintFn = std::function<std::optional<std::vector<double>>(const RealMatrix&)>;

std::optional<double> sla_value(const ProblemSpec& spec, const SLAConfig& config) {
    try {
        return sr_sla(spec, config).value;
    } catch (const InfeasibleAtNominalError&) {
        return std::numeric_limits<double>::infinity();
    } catch (const Error&) {
        return std::nullopt;
    }
}

class PenaltyDesign {
public:
    PenaltyDesign(const ProblemSpec& spec, double epsilon, const SolverConfig& config, ConstraintFn constraints)
        : spec_(spec), design_(resolve_design(spec)), epsilon_(epsilon), config_(config),
          constraints_(std::move(constraints)) {}

    [[nodiscard]] RealMatrix redesigned(const RealVector& x) const {
        return spec_.A + design_.Bo * design_.So.scatter(x) * design_.Co;
    }

    // Violations max(0, eps - c_k); empty optional when the constraint evaluator fails.
    [[nodiscard]] std::optional<std::vector<double>> values(const RealVector& x) const {
        return constraints_(redesigned(x));
    }

    [[nodiscard]] double max_violation(const RealVector& x) const {
        const auto c = values(x);
        if (!c) return std::numeric_limits<double>::infinity();
        double worst = 0.0;
        for (double v : *c) worst = std::max(worst, epsilon_ - v);
        return worst;
    }

    [[nodiscard]] double penalty(const RealVector& x, double rho) const {
        const auto c = values(x);
        if (!c) return std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (double v : *c) {
            const double gap = std::max(0.0, 1.0 - v / epsilon_);
            sum += gap * gap;
        }
        return x.squaredNorm() / (epsilon_ * epsilon_) + rho * sum;
    }

    struct Outcome {
        RealVector x;
        double violation = std::numeric_limits<double>::infinity();
        double final_penalty = 0.0;
        std::size_t iterations = 0;
        std::size_t evaluations = 0;
    };

    Outcome run(RealVector x) const {
        Outcome out;
        MinimizeOptions opts;
        opts.max_iters = config_.inner_iters;
        opts.fd_step = config_.fd_step;
        double rho = config_.rho0;
        for (std::size_t round = 0; round < config_.penalty_rounds; ++round) {
            const auto res = minimize_bfgs([&](const RealVector& v) { return penalty(v, rho); }, x, opts);
            x = res.x;
            out.final_penalty = rho;
            out.iterations += res.iterations;
            out.evaluations += res.evaluations;
            rho *= config_.rho_growth;
        }
        restore(x, out);
        out.violation = max_violation(x);
        out.x = std::move(x);
        return out;
    }

private:
    // Minimum-norm Gauss-Newton corrections onto the violated constraints.
    void restore(RealVector& x, Outcome& out) const {
        const double target = 0.01 * config_.constraint_tol;
        for (std::size_t it = 0; it < config_.restoration_iters; ++it) {
            const auto c = values(x);
            ++out.evaluations;
            if (!c) return;
            std::vector<std::size_t> active;
            for (std::size_t k = 0; k < c->size(); ++k) {
                if (epsilon_ - (*c)[k] > target) active.push_back(k);
            }
            if (active.empty()) return;

            const auto r = static_cast<Eigen::Index>(active.size());
            RealMatrix J(r, x.size());
            RealVector residual(r);
            for (Eigen::Index q = 0; q < r; ++q) residual(q) = epsilon_ - (*c)[active[static_cast<std::size_t>(q)]];
            RealVector probe = x;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double h = config_.fd_step * (1.0 + std::abs(x(i)));
                probe(i) = x(i) + h;
                const auto up = values(probe);
                probe(i) = x(i) - h;
                const auto down = values(probe);
                probe(i) = x(i);
                out.evaluations += 2;
                if (!up || !down || up->size() != c->size() || down->size() != c->size()) return;
                for (Eigen::Index q = 0; q < r; ++q) {
                    const auto k = active[static_cast<std::size_t>(q)];
                    J(q, i) = ((*up)[k] - (*down)[k]) / (2.0 * h);
                }
            }
            const RealVector step = J.completeOrthogonalDecomposition().solve(residual);
            if (!step.allFinite()) return;
            x += step;
        }
    }

    const ProblemSpec& spec_;
    DesignBlock design_;
    double epsilon_;
    const SolverConfig& config_;
    ConstraintFn constraints_;
};

DesignReport solve(const ProblemSpec& spec, double epsilon, const SolverConfig& config, Method method) {
    if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
    config.check();

    SLAConfig sla = config.sla;
    sla.refine_final = true;
    sla.refine_tol = std::min(sla.refine_tol, 1e-13);

    const ProblemSpec base = spec;
    ConstraintFn constraints;
    if (method == Method::LA) {
        constraints = [&base, &config](const RealMatrix& a) {
            return la_constraint_values(with_nominal(base, a), config.tol);
        };
    } else {
        constraints = [&base, sla](const RealMatrix& a) -> std::optional<std::vector<double>> {
            const auto v = sla_value(with_nominal(base, a), sla);
            if (!v) return std::nullopt;
            if (std::isinf(*v)) return std::vector<double>{};
            return std::vector<double>{*v};
        };
    }

    const DesignBlock block = resolve_design(spec);
    PenaltyDesign problem(spec, epsilon, config, constraints);
    const auto free = static_cast<Eigen::Index>(block.So.free_count());

    DesignReport report;
    report.method = method;
    report.epsilon = epsilon;
    report.solver.restarts = config.restarts;

    const RealVector zero = RealVector::Zero(free);
    {
        const auto c0 = problem.values(zero);
        double current = std::numeric_limits<double>::infinity();
        if (c0) {
            for (double v : *c0) current = std::min(current, v);
        }
        report.initial_sr = current;
    }

    RealVector best_x = zero;
    double best_violation = std::numeric_limits<double>::infinity();
    if (problem.max_violation(zero) <= 0.0) {
        report.status = DesignStatus::TargetAlreadyMet;
        best_violation = 0.0;
        report.solver.converged = true;
    } else {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        bool have_converged = false;
        for (std::size_t start = 0; start < config.restarts; ++start) {
            RealVector x0 = zero;
            if (start > 0) {
                for (Eigen::Index i = 0; i < free; ++i) x0(i) = normal(rng);
                const double norm = x0.norm();
                if (norm > 0.0) x0 *= config.start_scale * epsilon / norm;
            }
            const auto outcome = problem.run(x0);
            report.solver.iterations += outcome.iterations;
            report.solver.evaluations += outcome.evaluations;
            const bool ok = outcome.violation <= config.constraint_tol;
            if (ok) ++report.solver.converged_starts;
            const bool better = ok ? (!have_converged || outcome.x.norm() < best_x.norm())
                                   : (!have_converged && outcome.violation < best_violation);
            if (better) {
                best_x = outcome.x;
                best_violation = outcome.violation;
                report.solver.final_penalty = outcome.final_penalty;
                have_converged = have_converged || ok;
            }
        }
        report.solver.converged = have_converged;
        report.status = have_converged ? DesignStatus::Optimized : DesignStatus::NotConverged;
    }

    report.delta_o_star = block.So.scatter(best_x);
    report.norm = report.delta_o_star.norm();
    report.solver.max_violation = std::max(0.0, best_violation);
    report.redesigned = problem.redesigned(best_x);

    const ProblemSpec redesigned = with_nominal(spec, report.redesigned);
    try {
        const auto la = sr_la(redesigned, config.tol);
        if (la.feasible()) report.achieved_sr_la = la.value;
    } catch (const Error&) {
    }
    if (const auto v = sla_value(redesigned, sla); v && std::isfinite(*v)) report.achieved_sr_sla = *v;
    return report;
}

}  // namespace

DesignReport solve_sd_la(const ProblemSpec& spec, double epsilon, const SolverConfig& config) {
    return solve(spec, epsilon, config, Method::LA);
}

DesignReport solve_sd_sla(const ProblemSpec& spec, double epsilon, const SolverConfig& config) {
    return solve(spec, epsilon, config, Method::SLA);
}

}  // namespace stabrad
