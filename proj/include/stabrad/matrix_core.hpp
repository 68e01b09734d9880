#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stabrad {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Throws DimensionError for empty matrices and NumericError for NaN/Inf entries.
void require_finite(const RealMatrix& m, std::string_view what);

void require_square(const RealMatrix& m, std::string_view what);

/// Binary mask selecting which entries of a perturbation may be nonzero.
class SparsityMask {
public:
    SparsityMask() = default;

    /// Every entry must be exactly 0 or 1.
    explicit SparsityMask(RealMatrix flags);

    static SparsityMask ones(Eigen::Index rows, Eigen::Index cols);
    static SparsityMask zeros(Eigen::Index rows, Eigen::Index cols);
    static SparsityMask identity(Eigen::Index rows, Eigen::Index cols);

    [[nodiscard]] Eigen::Index rows() const { return flags_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return flags_.cols(); }
    [[nodiscard]] const RealMatrix& matrix() const { return flags_; }
    [[nodiscard]] bool allows(Eigen::Index i, Eigen::Index j) const { return flags_(i, j) != 0.0; }

    [[nodiscard]] SparsityMask complement() const;

    /// Number of free entries.
    [[nodiscard]] std::size_t free_count() const;

    /// Free positions in row-major order.
    [[nodiscard]] std::vector<std::pair<Eigen::Index, Eigen::Index>> free_positions() const;

    /// Scatters a vector of free-entry values (row-major order) into a full matrix.
    [[nodiscard]] RealMatrix scatter(const RealVector& values) const;

    /// Inverse of scatter: picks the free entries of m in row-major order.
    [[nodiscard]] RealVector gather(const RealMatrix& m) const;

    friend bool operator==(const SparsityMask&, const SparsityMask&) = default;

private:
    RealMatrix flags_;
};

double frobenius_norm(const RealMatrix& m);
double frobenius_norm(const ComplexMatrix& m);

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);
RealMatrix hadamard(const SparsityMask& s, const RealMatrix& m);

/// Largest real part over the spectrum.
double spectral_abscissa(const RealMatrix& a);

/// Eigenvalues sorted by descending real part, ties by descending imaginary part.
ComplexVector sorted_eigenvalues(const RealMatrix& a);

/// Full eigendecomposition with biorthogonally normalized eigenvectors.
///
/// Column k of `right` is z_k and column k of `left` is y_k, scaled so that
/// y_k^* z_k = 1. The left matrix is the conjugate transpose of the inverse of
/// the right matrix.
struct EigenSystem {
    ComplexVector values;
    ComplexMatrix right;
    ComplexMatrix left;
    double separation = 0.0;
    /// Per-eigenvalue condition number ||y_k|| ||z_k||.
    RealVector condition;

    [[nodiscard]] Eigen::Index order() const { return values.size(); }
};

/// 1e-8 * max(1, ||A||).
double default_simplicity_tol(const RealMatrix& a);

/// Throws RepeatedEigenvalueError when two eigenvalues are within
/// simplicity_tol and DefectiveMatrixError when the eigenvector matrix is
/// singular. A non-positive tolerance selects the default.
EigenSystem eigensystem(const RealMatrix& a, double simplicity_tol = 0.0);

/// ||A^T A - A A^T||.
double normality_gap(const RealMatrix& a);

}  // namespace stabrad
