#include "stabrad/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stabrad/errors.hpp"

namespace stabrad {

namespace {

// Eigenvector matrices with reciprocal condition below this are treated as singular.
constexpr double kDefectiveRcond = 1e-14;

std::vector<Eigen::Index> descending_order(const ComplexVector& values) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Complex& x = values(a);
        const Complex& y = values(b);
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return order;
}

Eigen::EigenSolver<RealMatrix> solve(const RealMatrix& a, bool vectors) {
    require_square(a, "matrix");
    require_finite(a, "matrix");
    Eigen::EigenSolver<RealMatrix> solver(a, vectors);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigensolver failed to converge");
    }
    return solver;
}

}  // namespace

void require_finite(const RealMatrix& m, std::string_view what) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw DimensionError(std::string(what) + " must have at least one row and one column");
    }
    if (!m.allFinite()) {
        throw NumericError(std::string(what) + " contains non-finite entries");
    }
}

void require_square(const RealMatrix& m, std::string_view what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + " must be square, got " + std::to_string(m.rows()) +
                             "x" + std::to_string(m.cols()));
    }
}

SparsityMask::SparsityMask(RealMatrix flags) : flags_(std::move(flags)) {
    require_finite(flags_, "sparsity mask");
    for (Eigen::Index i = 0; i < flags_.rows(); ++i) {
        for (Eigen::Index j = 0; j < flags_.cols(); ++j) {
            const double v = flags_(i, j);
            if (v != 0.0 && v != 1.0) {
                throw NumericError("sparsity mask entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") is not 0 or 1");
            }
        }
    }
}

SparsityMask SparsityMask::ones(Eigen::Index rows, Eigen::Index cols) {
    return SparsityMask(RealMatrix::Ones(rows, cols));
}

SparsityMask SparsityMask::zeros(Eigen::Index rows, Eigen::Index cols) {
    return SparsityMask(RealMatrix::Zero(rows, cols));
}

SparsityMask SparsityMask::identity(Eigen::Index rows, Eigen::Index cols) {
    return SparsityMask(RealMatrix::Identity(rows, cols));
}

SparsityMask SparsityMask::complement() const {
    return SparsityMask(RealMatrix::Ones(rows(), cols()) - flags_);
}

std::size_t SparsityMask::free_count() const {
    return static_cast<std::size_t>((flags_.array() != 0.0).count());
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> SparsityMask::free_positions() const {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    for (Eigen::Index i = 0; i < rows(); ++i) {
        for (Eigen::Index j = 0; j < cols(); ++j) {
            if (allows(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

RealMatrix SparsityMask::scatter(const RealVector& values) const {
    const auto positions = free_positions();
    if (static_cast<std::size_t>(values.size()) != positions.size()) {
        throw DimensionError("expected " + std::to_string(positions.size()) + " free values, got " +
                             std::to_string(values.size()));
    }
    RealMatrix out = RealMatrix::Zero(rows(), cols());
    for (std::size_t q = 0; q < positions.size(); ++q) {
        out(positions[q].first, positions[q].second) = values(static_cast<Eigen::Index>(q));
    }
    return out;
}

RealVector SparsityMask::gather(const RealMatrix& m) const {
    if (m.rows() != rows() || m.cols() != cols()) {
        throw DimensionError("gather: shape does not match mask");
    }
    const auto positions = free_positions();
    RealVector out(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t q = 0; q < positions.size(); ++q) {
        out(static_cast<Eigen::Index>(q)) = m(positions[q].first, positions[q].second);
    }
    return out;
}

double frobenius_norm(const RealMatrix& m) { return m.norm(); }

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hadamard: shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
    return a.cwiseProduct(b);
}

RealMatrix hadamard(const SparsityMask& s, const RealMatrix& m) { return hadamard(s.matrix(), m); }

ComplexVector sorted_eigenvalues(const RealMatrix& a) {
    const auto solver = solve(a, false);
    const ComplexVector& raw = solver.eigenvalues();
    const auto order = descending_order(raw);
    ComplexVector out(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) out(static_cast<Eigen::Index>(k)) = raw(order[k]);
    return out;
}

double spectral_abscissa(const RealMatrix& a) {
    const auto solver = solve(a, false);
    return solver.eigenvalues().real().maxCoeff();
}

double default_simplicity_tol(const RealMatrix& a) { return 1e-8 * std::max(1.0, a.norm()); }

EigenSystem eigensystem(const RealMatrix& a, double simplicity_tol) {
    if (simplicity_tol <= 0.0) simplicity_tol = default_simplicity_tol(a);
    const auto solver = solve(a, true);
    const ComplexVector& raw_values = solver.eigenvalues();
    const ComplexMatrix raw_vectors = solver.eigenvectors();
    const Eigen::Index n = raw_values.size();

    const auto order = descending_order(raw_values);
    EigenSystem es;
    es.values.resize(n);
    es.right.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        es.values(k) = raw_values(order[static_cast<std::size_t>(k)]);
        es.right.col(k) = raw_vectors.col(order[static_cast<std::size_t>(k)]);
    }

    es.separation = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            es.separation = std::min(es.separation, std::abs(es.values(i) - es.values(j)));
        }
    }
    if (es.separation <= simplicity_tol) {
        throw RepeatedEigenvalueError("eigenvalues are not simple: minimum separation " +
                                      std::to_string(es.separation) + " <= tolerance " +
                                      std::to_string(simplicity_tol));
    }

    Eigen::PartialPivLU<ComplexMatrix> lu(es.right);
    if (!(lu.rcond() > kDefectiveRcond)) {
        throw DefectiveMatrixError("eigenvector matrix is numerically singular");
    }
    es.left = lu.inverse().adjoint();

    es.condition.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        es.condition(k) = es.left.col(k).norm() * es.right.col(k).norm();
    }
    return es;
}

double normality_gap(const RealMatrix& a) {
    require_square(a, "matrix");
    return (a.transpose() * a - a * a.transpose()).norm();
}

}  // namespace stabrad
