#include "stabrad/perturbation.hpp"

#include <string>

namespace stabrad {

namespace {

std::string shape(const RealMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

std::string join_messages(const std::vector<Violation>& violations) {
    std::string out = "invalid problem:";
    for (const auto& v : violations) out += " " + v.message + ";";
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_messages(violations)), violations_(std::move(violations)) {}

bool ValidationError::has(ViolationKind kind) const {
    for (const auto& v : violations_) {
        if (v.kind == kind) return true;
    }
    return false;
}

std::vector<Violation> check(const ProblemSpec& spec) {
    std::vector<Violation> out;
    auto dim = [&](std::string msg) { out.push_back({ViolationKind::DimensionMismatch, std::move(msg)}); };

    for (const auto& [m, label] : {std::pair{&spec.A, "A"}, {&spec.B, "B"}, {&spec.C, "C"}}) {
        if (m->size() == 0) {
            dim(std::string(label) + " is empty");
        } else if (!m->allFinite()) {
            out.push_back({ViolationKind::NonFinite, std::string(label) + " has non-finite entries"});
        }
    }
    if (!out.empty()) return out;

    const Eigen::Index n = spec.A.rows();
    if (spec.A.cols() != n) dim("A must be square, got " + shape(spec.A));
    if (spec.B.rows() != n) dim("B has " + std::to_string(spec.B.rows()) + " rows, expected " + std::to_string(n));
    if (spec.C.cols() != n) dim("C has " + std::to_string(spec.C.cols()) + " columns, expected " + std::to_string(n));
    if (spec.S.rows() != spec.B.cols() || spec.S.cols() != spec.C.rows()) {
        dim("S is " + std::to_string(spec.S.rows()) + "x" + std::to_string(spec.S.cols()) + ", expected " +
            std::to_string(spec.B.cols()) + "x" + std::to_string(spec.C.rows()));
    }

    if (spec.design) {
        const auto& d = *spec.design;
        if (d.Bo.rows() != n) dim("Bo has " + std::to_string(d.Bo.rows()) + " rows, expected " + std::to_string(n));
        if (d.Co.cols() != n) dim("Co has " + std::to_string(d.Co.cols()) + " columns, expected " + std::to_string(n));
        if (d.So.rows() != d.Bo.cols() || d.So.cols() != d.Co.rows()) {
            dim("So is " + std::to_string(d.So.rows()) + "x" + std::to_string(d.So.cols()) + ", expected " +
                std::to_string(d.Bo.cols()) + "x" + std::to_string(d.Co.rows()));
        }
        if (!d.Bo.allFinite() || !d.Co.allFinite()) {
            out.push_back({ViolationKind::NonFinite, "design block has non-finite entries"});
        }
        if (d.epsilon && !(*d.epsilon > 0.0)) {
            out.push_back({ViolationKind::InvalidEpsilon, "epsilon must be positive"});
        }
    }

    if (spec.A.rows() == spec.A.cols()) {
        const double alpha = spectral_abscissa(spec.A);
        if (!(alpha < 0.0)) {
            out.push_back({ViolationKind::UnstableNominal,
                           "nominal matrix is not stable (spectral abscissa " + std::to_string(alpha) + ")"});
        }
    }
    return out;
}

ProblemSpec validate(ProblemSpec spec) {
    auto violations = check(spec);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return spec;
}

RealMatrix apply_perturbation(const ProblemSpec& spec, const RealMatrix& delta) {
    if (delta.rows() != spec.B.cols() || delta.cols() != spec.C.rows()) {
        throw DimensionError("perturbation is " + shape(delta) + ", expected " + std::to_string(spec.B.cols()) +
                             "x" + std::to_string(spec.C.rows()));
    }
    return spec.A + spec.B * delta * spec.C;
}

RealMatrix project_sparsity(const RealMatrix& delta, const SparsityMask& mask) { return hadamard(mask, delta); }

DesignBlock resolve_design(const ProblemSpec& spec) {
    if (spec.design) return *spec.design;
    return DesignBlock{spec.B, spec.C, spec.S, std::nullopt};
}

ProblemSpec with_nominal(const ProblemSpec& spec, RealMatrix a) {
    ProblemSpec out = spec;
    out.A = std::move(a);
    return out;
}

}  // namespace stabrad
