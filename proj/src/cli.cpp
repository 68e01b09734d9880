#include "stabrad/cli.hpp"

#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "stabrad/design.hpp"
#include "stabrad/errors.hpp"
#include "stabrad/io.hpp"
#include "stabrad/oracle.hpp"
#include "stabrad/sensitivity.hpp"
#include "stabrad/sr_la.hpp"
#include "stabrad/sr_sla.hpp"

namespace stabrad {

namespace {

struct AnalyzeArgs {
    std::string problem;
    std::string method = "la";
    std::optional<double> beta;
    bool refine_final = false;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string trace;
};

struct SweepArgs {
    std::string problem;
    double gamma_max = 0.0;
    std::size_t steps = 21;
    bool oracle = false;
    std::optional<std::size_t> grid_points;
    std::optional<double> beta;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct DesignArgs {
    std::string problem;
    std::optional<double> epsilon;
    std::string method = "la";
    std::optional<std::size_t> restarts;
    std::optional<std::uint64_t> seed;
    std::optional<double> beta;
    std::string out;
};

struct OracleArgs {
    std::string problem;
    std::optional<std::size_t> grid_points;
    std::optional<double> bisect_tol;
};

void print_report(std::ostream& out, const SRReport& r) {
    out << "method: " << to_string(r.method) << "\n";
    out << "nominal abscissa: " << r.nominal_abscissa << "\n";
    if (!r.feasible()) {
        out << "status: infeasible (empty feasible set: no eigenvalue can be shifted)\n";
        return;
    }
    out << "stability radius: " << r.value << "\n";
    out << "argmin eigenvalue: " << r.argmin_k << "\n";
    for (const auto& c : r.per_k) {
        out << "  k=" << c.k << "  lambda_r=" << c.lambda_real << "  ||S o P_r||=" << c.masked_norm
            << "  candidate=" << c.value << "\n";
    }
    if (r.trace) out << "iterations: " << r.trace->iterations.size() << "\n";
}

int analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    auto doc = parse_problem(a.problem);
    if (a.beta) doc.sla.beta = a.beta;
    if (a.refine_final) doc.sla.refine_final = true;
    if (a.seed) doc.sla.seed = *a.seed;

    std::vector<SRReport> reports;
    bool infeasible = false;
    if (a.method == "la" || a.method == "both") {
        reports.push_back(sr_la(doc.spec, doc.sla.tol));
        infeasible = infeasible || !reports.back().feasible();
    }
    if (a.method == "sla" || a.method == "both") {
        try {
            reports.push_back(sr_sla(doc.spec, doc.sla));
        } catch (const InfeasibleAtNominalError&) {
            SRReport r;
            r.method = Method::SLA;
            r.status = SRStatus::Infeasible;
            r.nominal_abscissa = spectral_abscissa(doc.spec.A);
            r.delta_star = RealMatrix::Zero(doc.spec.m(), doc.spec.p());
            reports.push_back(std::move(r));
            infeasible = true;
        }
    }

    out << std::setprecision(12);
    out << "problem: " << doc.spec.name << "\n";
    for (const auto& r : reports) print_report(out, r);
    if (!a.out.empty()) write_file_atomic(a.out, sr_reports_json(doc, reports));
    if (!a.trace.empty()) {
        for (const auto& r : reports) {
            if (r.trace) write_file_atomic(a.trace, trace_csv(*r.trace));
        }
    }
    if (infeasible) {
        err << "infeasible: empty feasible set, no eigenvalue can be shifted by the allowed perturbations\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    auto doc = parse_problem(a.problem);
    if (a.beta) doc.sla.beta = a.beta;
    if (a.seed) doc.sla.seed = *a.seed;
    if (a.grid_points) doc.oracle.grid_points = *a.grid_points;
    const auto grid = gamma_grid(a.gamma_max, a.steps);
    std::optional<std::size_t> points;
    if (a.oracle) points = doc.oracle.grid_points;
    try {
        const auto rows = abscissa_sweep(doc.spec, doc.sla, grid, points);
        write_file_atomic(a.out, sweep_csv(rows));
        out << "wrote " << rows.size() << " rows to " << a.out << "\n";
    } catch (const InfeasibleAtNominalError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int design(const DesignArgs& a, std::ostream& out, std::ostream& err) {
    auto doc = parse_problem(a.problem);
    if (a.restarts) doc.solver.restarts = *a.restarts;
    if (a.seed) doc.solver.seed = *a.seed;
    if (a.beta) doc.solver.sla.beta = a.beta;
    std::optional<double> epsilon = a.epsilon;
    if (!epsilon && doc.spec.design) epsilon = doc.spec.design->epsilon;
    if (!epsilon) {
        err << "design: --epsilon is required when the problem file has no design.epsilon\n";
        return kExitUsage;
    }
    doc.solver.sla.tol = doc.sla.tol;
    const auto report = a.method == "sla" ? solve_sd_sla(doc.spec, *epsilon, doc.solver)
                                          : solve_sd_la(doc.spec, *epsilon, doc.solver);
    write_file_atomic(a.out, design_report_json(doc, report));

    out << std::setprecision(12);
    out << "problem: " << doc.spec.name << "\n";
    out << "method: " << to_string(report.method) << "\n";
    out << "status: " << to_string(report.status) << "\n";
    out << "epsilon: " << report.epsilon << "\n";
    out << "norm: " << report.norm << "\n";
    if (report.achieved_sr_la) out << "achieved SR_la: " << *report.achieved_sr_la << "\n";
    if (report.achieved_sr_sla) out << "achieved SR_sla: " << *report.achieved_sr_sla << "\n";
    if (report.status == DesignStatus::TargetAlreadyMet) {
        out << "target already met by the nominal system\n";
    }
    if (report.status == DesignStatus::NotConverged) {
        err << "not converged: no start reached the target within tolerance\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
    auto doc = parse_problem(a.problem);
    if (a.grid_points) doc.oracle.grid_points = *a.grid_points;
    if (a.bisect_tol) doc.oracle.bisect_tol = *a.bisect_tol;
    try {
        const double value = sr_oracle(doc.spec, doc.oracle.grid_points, doc.oracle.bisect_tol);
        out << std::setprecision(12) << "reference stability radius: " << value << "\n";
    } catch (const NoUpperBoundError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int normality(const std::string& problem, std::ostream& out) {
    const auto doc = parse_problem(problem);
    const auto bundle = build_sensitivities(doc.spec, doc.sla.tol.simplicity_tol, doc.sla.tol.tol_feas);
    out << std::setprecision(12);
    out << "problem: " << doc.spec.name << "\n";
    out << "normality gap: " << normality_gap(doc.spec.A) << "\n";
    for (std::size_t k = 0; k < bundle.size(); ++k) {
        const auto& e = bundle.entries[k];
        out << "k=" << k << "  lambda=" << e.lambda.real() << (e.lambda.imag() < 0 ? "-" : "+")
            << std::abs(e.lambda.imag()) << "j  ||P_r||=" << e.P_real.norm() << "  ||S o P_r||=" << e.masked_norm
            << "  cond=" << e.condition << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Approximate stability radii and robust redesign of structured LTI systems", "stabrad"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* an = app.add_subcommand("analyze", "Approximate stability radius (LA and/or SLA)");
    an->add_option("problem", analyze_args.problem, "Problem file")->required();
    an->add_option("--method", analyze_args.method, "la, sla or both")->check(CLI::IsMember({"la", "sla", "both"}));
    an->add_option("--beta", analyze_args.beta, "SLA step radius");
    an->add_flag("--refine-final", analyze_args.refine_final, "Bisect the last SLA step onto the boundary");
    an->add_option("--seed", analyze_args.seed, "Seed for SLA repairs");
    an->add_option("--out", analyze_args.out, "Write a JSON report");
    an->add_option("--trace", analyze_args.trace, "Write the SLA iteration trace as CSV");

    SweepArgs sweep_args;
    auto* sw = app.add_subcommand("sweep", "Spectral abscissa approximations over a range of perturbation norms");
    sw->add_option("problem", sweep_args.problem, "Problem file")->required();
    sw->add_option("--gamma-max", sweep_args.gamma_max, "Largest perturbation norm")->required()->check(CLI::NonNegativeNumber);
    sw->add_option("--steps", sweep_args.steps, "Number of gamma values")->check(CLI::PositiveNumber);
    sw->add_flag("--oracle", sweep_args.oracle, "Add grid-search abscissa and error columns");
    sw->add_option("--grid-points", sweep_args.grid_points, "Oracle grid points per axis");
    sw->add_option("--beta", sweep_args.beta, "SLA step radius");
    sw->add_option("--seed", sweep_args.seed, "Seed for SLA repairs");
    sw->add_option("--out", sweep_args.out, "CSV output")->required();

    DesignArgs design_args;
    auto* de = app.add_subcommand("design", "Minimum-norm redesign raising the approximate stability radius");
    de->add_option("problem", design_args.problem, "Problem file")->required();
    de->add_option("--epsilon", design_args.epsilon, "Target stability radius")->check(CLI::PositiveNumber);
    de->add_option("--method", design_args.method, "la or sla")->check(CLI::IsMember({"la", "sla"}));
    de->add_option("--restarts", design_args.restarts, "Number of starts")->check(CLI::PositiveNumber);
    de->add_option("--seed", design_args.seed, "Seed for random starts");
    de->add_option("--beta", design_args.beta, "SLA step radius used inside the SLA constraint");
    de->add_option("--out", design_args.out, "JSON output")->required();

    OracleArgs oracle_args;
    auto* orc = app.add_subcommand("oracle", "Reference stability radius by grid search and bisection");
    orc->add_option("problem", oracle_args.problem, "Problem file")->required();
    orc->add_option("--grid-points", oracle_args.grid_points, "Grid points per axis");
    orc->add_option("--bisect-tol", oracle_args.bisect_tol, "Bisection interval tolerance");

    std::string normality_problem;
    auto* no = app.add_subcommand("normality", "Normality gap and eigenvalue sensitivity norms");
    no->add_option("problem", normality_problem, "Problem file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (an->parsed()) return analyze(analyze_args, out, err);
        if (sw->parsed()) return sweep(sweep_args, out, err);
        if (de->parsed()) return design(design_args, out, err);
        if (orc->parsed()) return oracle(oracle_args, out, err);
        if (no->parsed()) return normality(normality_problem, out);
    } catch (const NonTerminationError& e) {
        err << "not converged: " << e.what() << "\n";
        return kExitNotConverged;
    } catch (const InfeasibleAtNominalError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace stabrad
