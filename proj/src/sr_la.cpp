#include "stabrad/sr_la.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

std::string_view to_string(Method m) { return m == Method::LA ? "LA" : "SLA"; }

std::string_view to_string(SRStatus s) { return s == SRStatus::Feasible ? "feasible" : "infeasible"; }

namespace {

const EigenSensitivity& feasible_entry(const SensitivityBundle& bundle, std::size_t k) {
    if (k >= bundle.size() || !bundle.is_feasible(k)) {
        throw FeasibilityError("eigenvalue " + std::to_string(k) + " cannot be shifted by the allowed perturbations");
    }
    return bundle.entries[k];
}

}  // namespace

RealMatrix delta_k_star(const SensitivityBundle& bundle, std::size_t k) {
    const auto& e = feasible_entry(bundle, k);
    return (-e.lambda.real() / (e.masked_norm * e.masked_norm)) * hadamard(bundle.mask, e.P_real);
}

double sa_root(const SensitivityBundle& bundle, std::size_t k) {
    const auto& e = feasible_entry(bundle, k);
    const RealMatrix direction = hadamard(bundle.mask, e.P_real) / e.masked_norm;
    auto sa = [&](double beta) { return e.lambda.real() + hadamard(e.P_real, beta * direction).sum(); };

    double lo = 0.0;
    double f_lo = sa(lo);
    if (f_lo >= 0.0) return 0.0;
    double hi = 1.0;
    double f_hi = sa(hi);
    while (f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = sa(hi);
        if (!std::isfinite(hi)) throw NumericError("sa_root: no sign change");
    }
    double root = hi;
    for (int it = 0; it < 200; ++it) {
        root = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        const double f = sa(root);
        if (f == 0.0 || std::abs(f) <= 1e-15 * std::abs(e.lambda.real())) break;
        if (f < 0.0) {
            lo = root;
            f_lo = f;
        } else {
            hi = root;
            f_hi = f;
        }
        if (hi - lo <= 1e-16 * hi) break;
    }
    return root;
}

std::vector<Candidate> la_candidates(const SensitivityBundle& bundle) {
    std::vector<Candidate> out;
    out.reserve(bundle.feasible.size());
    for (std::size_t k : bundle.feasible) {
        const auto& e = bundle.entries[k];
        out.push_back(Candidate{k, e.lambda.real(), e.masked_norm, -e.lambda.real() / e.masked_norm,
                                delta_k_star(bundle, k)});
    }
    return out;
}

SRReport sr_la(const SensitivityBundle& bundle) {
    SRReport report;
    report.method = Method::LA;
    report.per_k = la_candidates(bundle);
    report.nominal_abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& e : bundle.entries) report.nominal_abscissa = std::max(report.nominal_abscissa, e.lambda.real());

    if (report.per_k.empty()) {
        report.status = SRStatus::Infeasible;
        report.delta_star = RealMatrix::Zero(bundle.mask.rows(), bundle.mask.cols());
        return report;
    }
    std::size_t best = 0;
    for (std::size_t q = 1; q < report.per_k.size(); ++q) {
        if (report.per_k[q].value < report.per_k[best].value * (1.0 - 1e-12)) best = q;
    }
    report.status = SRStatus::Feasible;
    report.value = report.per_k[best].value;
    report.argmin_k = report.per_k[best].k;
    report.delta_star = report.per_k[best].delta;
    return report;
}

SRReport sr_la(const ProblemSpec& spec, const Tolerances& tol) {
    return sr_la(build_sensitivities(spec, tol.simplicity_tol, tol.tol_feas));
}

}  // namespace stabrad
