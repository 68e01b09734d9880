#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "stabrad/sensitivity.hpp"
#include "support/fixtures.hpp"

using namespace stabrad;
using namespace stabrad::testing;

TEST_CASE("worked example sensitivities") {
    const auto bundle = build_sensitivities(example1());
    REQUIRE(bundle.size() == 2);
    const RealMatrix expected = mat({{0, 0}, {0.7, 1}});
    for (const auto& e : bundle.entries) {
        CHECK((e.P_real - expected).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK(hadamard(example1().S, e.P_real).isZero(1e-12));
    }
    CHECK(feasibility(bundle).empty());
}

TEST_CASE("unstructured sensitivities sum to the identity") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        ProblemSpec spec = random_spec(rng, 1 + t % 5, 1, 1);
        const auto n = spec.n();
        spec.B = RealMatrix::Identity(n, n);
        spec.C = RealMatrix::Identity(n, n);
        spec.S = SparsityMask::ones(n, n);
        const auto bundle = build_sensitivities(spec);
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (const auto& e : bundle.entries) {
            CHECK(std::abs(e.P.trace() - 1.0) <= 1e-10);
            sum += e.P;
        }
        CHECK((sum - ComplexMatrix::Identity(n, n)).norm() <= 1e-10);
    }
}

TEST_CASE("published sensitivity norms") {
    auto norms = [](const ProblemSpec& spec) {
        std::multiset<double> out;
        for (const auto& e : build_sensitivities(spec).entries) out.insert(e.P_real.norm());
        return std::vector<double>(out.begin(), out.end());
    };
    const auto n1 = norms(case1());
    CHECK(std::abs(n1[0] - 0.0399) <= 1e-3);
    CHECK(std::abs(n1[1] - 0.0666) <= 1e-3);
    CHECK(std::abs(n1[2] - 0.6063) <= 1e-3);
    const auto n2 = norms(case2());
    CHECK(std::abs(n2[0] - 0.7848) <= 1e-3);
    CHECK(std::abs(n2[1] - 1.9765) <= 1e-3);
    CHECK(std::abs(n2[2] - 8.3881) <= 1e-3);
}

TEST_CASE("sensitivity matrices are rank one") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        const auto spec = random_spec(rng, 2 + t % 4, 1 + t % 3, 1 + (t / 3) % 3);
        for (const auto& e : build_sensitivities(spec).entries) {
            Eigen::JacobiSVD<ComplexMatrix> svd(e.P);
            const auto& s = svd.singularValues();
            if (s.size() > 1) CHECK(s(1) <= 1e-10 * (s(0) + 1));
        }
    }
}

TEST_CASE("sensitivities do not depend on eigenvector scaling") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const auto spec = random_spec(rng, 4, 2, 3);
        const auto es = eigensystem(spec.A);
        EigenSystem scaled = es;
        for (Eigen::Index k = 0; k < es.order(); ++k) {
            Complex c(normal(rng), normal(rng));
            if (std::abs(c) < 0.1) c += 1.0;
            scaled.right.col(k) *= c;
            scaled.left.col(k) /= std::conj(c);
        }
        const auto a = build_sensitivities(spec, es);
        const auto b = build_sensitivities(spec, scaled);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK((a.entries[k].P - b.entries[k].P).norm() <= 1e-10 * (1 + a.entries[k].P.norm()));
        }
    }
}

TEST_CASE("conjugate eigenvalues share real sensitivities") {
    const auto bundle = build_sensitivities(example1());
    CHECK((bundle.entries[0].P_real - bundle.entries[1].P_real).norm() <= 1e-10);

    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        const auto spec = random_spec(rng, 5, 2, 2);
        const auto b = build_sensitivities(spec);
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t l = k + 1; l < b.size(); ++l) {
                if (std::abs(b.entries[k].lambda - std::conj(b.entries[l].lambda)) < 1e-9 &&
                    b.entries[k].lambda.imag() != 0.0) {
                    CHECK((b.entries[k].P_real - b.entries[l].P_real).norm() <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("finite-difference derivative of the eigenvalues") {
    std::mt19937_64 rng(31);
    const double h = 1e-6;
    for (int t = 0; t < 15; ++t) {
        const auto spec = random_spec(rng, 3, 2, 2, 0.2);
        const auto bundle = build_sensitivities(spec);
        const ComplexVector base = sorted_eigenvalues(spec.A);
        for (Eigen::Index i = 0; i < spec.m(); ++i) {
            for (Eigen::Index j = 0; j < spec.p(); ++j) {
                RealMatrix delta = RealMatrix::Zero(spec.m(), spec.p());
                delta(i, j) = h;
                const ComplexVector moved = sorted_eigenvalues(apply_perturbation(spec, delta));
                const RealVector linear = linearized_real_parts(bundle, delta);
                for (std::size_t k = 0; k < bundle.size(); ++k) {
                    const auto& e = bundle.entries[k];
                    const Complex after = moved(nearest(moved, e.lambda));
                    const double fd = (after - e.lambda).real() / h;
                    CHECK(std::abs(e.P_real(i, j) - fd) <= 1e-4 * (1 + std::abs(e.P(i, j))));
                    CHECK(std::abs((linear(static_cast<Eigen::Index>(k)) - e.lambda.real()) - h * e.P_real(i, j)) <=
                          1e-15 + 1e-12 * std::abs(h * e.P_real(i, j)));
                }
                (void)base;
            }
        }
    }
}

TEST_CASE("linearized real parts") {
    const auto bundle = build_sensitivities(case1());
    const RealVector zero = linearized_real_parts(bundle, RealMatrix::Zero(2, 2));
    for (std::size_t k = 0; k < bundle.size(); ++k) {
        CHECK(zero(static_cast<Eigen::Index>(k)) == bundle.entries[k].lambda.real());
    }
    CHECK_THROWS_AS(linearized_real_parts(bundle, RealMatrix::Zero(3, 2)), DimensionError);

    const auto ex = build_sensitivities(example1());
    const RealMatrix allowed = mat({{3.0, -7.5}, {0, 0}});
    const RealVector moved = linearized_real_parts(ex, allowed);
    CHECK(std::abs(moved(0) + 0.4) <= 1e-12);
    CHECK(std::abs(moved(1) + 0.4) <= 1e-12);
}

TEST_CASE("linearized abscissa") {
    const auto bundle = build_sensitivities(case1());
    CHECK(linearized_abscissa(bundle, 0.0).value == spectral_abscissa(case1().A));

    const auto ex = build_sensitivities(example1());
    for (double beta : {0.0, 0.5, 10.0}) CHECK(std::abs(linearized_abscissa(ex, beta).value + 0.4) <= 1e-9);

    // Maximize the linear model over the circle ||Delta|| = 0.5 by dense sampling.
    const double beta = 0.5;
    double sampled = -1e300;
    const int samples = 200000;
    for (int s = 0; s < samples; ++s) {
        const double t = 2.0 * M_PI * s / samples;
        const RealMatrix d = mat({{beta * std::cos(t), 0}, {0, beta * std::sin(t)}});
        sampled = std::max(sampled, linearized_real_parts(bundle, d).maxCoeff());
    }
    const double closed = linearized_abscissa(bundle, beta).value;
    CHECK(sampled <= closed + 1e-12);
    CHECK(closed - sampled <= 1e-9);
}

TEST_CASE("feasible set") {
    ProblemSpec spec = case1();
    spec.S = SparsityMask::ones(2, 2);
    const auto all = feasibility(build_sensitivities(spec));
    CHECK(all.feasible == std::vector<std::size_t>{0, 1, 2});

    spec.S = SparsityMask::zeros(2, 2);
    CHECK(feasibility(build_sensitivities(spec)).empty());
    CHECK(feasibility(build_sensitivities(example1())).empty());
}
