#pragma once

// Shared problem instances, random generators and independent oracles for tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "stabrad/matrix_core.hpp"
#include "stabrad/perturbation.hpp"

namespace stabrad::testing {

inline RealMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline ProblemSpec example1() {
    return ProblemSpec{"example1", mat({{-1, 0.5}, {-2, 0.2}}), mat({{0, 1}, {0, 1}}), mat({{0.4, 1}, {1, 1}}),
                       SparsityMask(mat({{1, 1}, {0, 0}})), std::nullopt};
}

inline ProblemSpec case1() {
    return ProblemSpec{"case1", mat({{-1.2, -0.3, -1}, {-0.3, -1.4, -1}, {-1, -1, -1.3}}),
                       mat({{0.4, 0.1}, {0.2, 0.3}, {0.4, 0.1}}), mat({{0.7, 0.3, 0.3}, {0.1, 0.3, 0.6}}),
                       SparsityMask::identity(2, 2), std::nullopt};
}

inline ProblemSpec case2() {
    return ProblemSpec{"case2", mat({{-3, -4, -7}, {-1, -9, -6}, {-1, -1, -9}}),
                       mat({{1.3, 1}, {1, 0.7}, {0.5, 1.4}}), mat({{1, 0.8, 1.3}, {1.5, 1.8, 0.8}}),
                       SparsityMask::identity(2, 2), std::nullopt};
}

inline ProblemSpec scalar_spec() {
    return ProblemSpec{"scalar", mat({{-1}}), mat({{1}}), mat({{1}}), SparsityMask::ones(1, 1), std::nullopt};
}

inline RealMatrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng);
    return m;
}

/// Random A shifted so that its abscissa lies in [-1, -0.1], with eigenvalue
/// separation at least min_sep.
inline RealMatrix random_stable(std::mt19937_64& rng, Eigen::Index n, double min_sep = 0.05) {
    std::uniform_real_distribution<double> margin(0.1, 1.0);
    for (;;) {
        RealMatrix a = gaussian(rng, n, n);
        const ComplexVector ev = a.eigenvalues();
        double sep = 1e300;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) sep = std::min(sep, std::abs(ev(i) - ev(j)));
        if (sep < min_sep) continue;
        const double alpha = ev.real().maxCoeff();
        a -= (alpha + margin(rng)) * RealMatrix::Identity(n, n);
        return a;
    }
}

inline ProblemSpec random_spec(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m, Eigen::Index p,
                               double min_sep = 0.05) {
    ProblemSpec spec;
    spec.name = "random";
    spec.A = random_stable(rng, n, min_sep);
    spec.B = gaussian(rng, n, m);
    spec.C = gaussian(rng, p, n);
    std::bernoulli_distribution coin(0.6);
    RealMatrix s(m, p);
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = coin(rng) ? 1.0 : 0.0;
    if (s.sum() == 0.0) s(0) = 1.0;
    spec.S = SparsityMask(s);
    return spec;
}

/// Characteristic polynomial coefficients c_0..c_n (c_n = 1) by Faddeev-LeVerrier.
inline std::vector<double> char_poly(const RealMatrix& a) {
    const Eigen::Index n = a.rows();
    std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    RealMatrix m = RealMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * RealMatrix::Identity(n, n);
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
    const std::size_t n = c.size() - 1;
    auto eval = [&](std::complex<double> z) {
        std::complex<double> v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
        return v;
    };
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<double>(i));
    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            const auto step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return z;
}

/// Index of the eigenvalue in `values` nearest to target.
inline Eigen::Index nearest(const ComplexVector& values, Complex target) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i)
        if (std::abs(values(i) - target) < std::abs(values(best) - target)) best = i;
    return best;
}

inline double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline std::string data_file(const std::string& name) { return std::string(STABRAD_DATA_DIR) + "/" + name; }

}  // namespace stabrad::testing
