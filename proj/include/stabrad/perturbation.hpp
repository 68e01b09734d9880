#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabrad/errors.hpp"
#include "stabrad/matrix_core.hpp"

namespace stabrad {

/// Structure through which an operator may modify the nominal matrix:
/// A + Bo * Delta_o * Co with So o Delta_o = Delta_o.
struct DesignBlock {
    RealMatrix Bo;
    RealMatrix Co;
    SparsityMask So;
    std::optional<double> epsilon;
};

/// A perturbed LTI system x' = (A + B Delta C) x with S^c o Delta = 0.
struct ProblemSpec {
    std::string name;
    RealMatrix A;
    RealMatrix B;
    RealMatrix C;
    SparsityMask S;
    std::optional<DesignBlock> design;

    [[nodiscard]] Eigen::Index n() const { return A.rows(); }
    [[nodiscard]] Eigen::Index m() const { return B.cols(); }
    [[nodiscard]] Eigen::Index p() const { return C.rows(); }
};

enum class ViolationKind { DimensionMismatch, UnstableNominal, NonFinite, InvalidEpsilon };

struct Violation {
    ViolationKind kind;
    std::string message;
};

/// Raised by validate(); carries every violation found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }
    [[nodiscard]] bool has(ViolationKind kind) const;

private:
    std::vector<Violation> violations_;
};

/// All violated invariants; empty when the spec is valid.
std::vector<Violation> check(const ProblemSpec& spec);

/// Returns the spec unchanged or throws ValidationError.
ProblemSpec validate(ProblemSpec spec);

/// A + B Delta C.
RealMatrix apply_perturbation(const ProblemSpec& spec, const RealMatrix& delta);

/// S o Delta.
RealMatrix project_sparsity(const RealMatrix& delta, const SparsityMask& mask);

/// The design structure, falling back to (B, C, S) when the spec has none.
DesignBlock resolve_design(const ProblemSpec& spec);

/// Copy of spec with A replaced; B, C, S and the design block are kept.
ProblemSpec with_nominal(const ProblemSpec& spec, RealMatrix a);

}  // namespace stabrad
