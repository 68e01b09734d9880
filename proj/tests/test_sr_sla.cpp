#include <doctest.h>

#include <cmath>
#include <random>

#include "stabrad/errors.hpp"
#include "stabrad/sr_sla.hpp"
#include "support/fixtures.hpp"

using namespace stabrad;
using namespace stabrad::testing;

TEST_CASE("config resolution and validation") {
    const auto r = SLAConfig{}.resolve(case1().A);
    CHECK(std::abs(*r.beta - 0.05 * -spectral_abscissa(case1().A)) <= 1e-15);
    CHECK(std::abs(*r.repair_noise - 1e-8 * case1().A.norm()) <= 1e-20);
    // Unstable nominal falls back to the 1e-3 floor.
    CHECK(*SLAConfig{}.resolve(mat({{1.0}})).beta == doctest::Approx(5e-5));

    SLAConfig bad;
    bad.beta = -1.0;
    CHECK_THROWS_AS(bad.check(), Error);
    bad = {};
    bad.beta_growth = 1.0;
    CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("scalar iteration") {
    SLAConfig cfg;
    cfg.beta = 0.1;
    const auto r = sr_sla(scalar_spec(), cfg);
    REQUIRE(r.trace);
    CHECK(r.value >= 1.0 - 1e-12);
    CHECK(r.value <= 1.1 + 1e-12);
    CHECK(r.trace->iterations.back().alpha >= 0.0);

    cfg.refine_final = true;
    const auto refined = sr_sla(scalar_spec(), cfg);
    CHECK(std::abs(refined.value - 1.0) <= 1e-8);
    CHECK(refined.trace->iterations.back().refined);
}

TEST_CASE("unstable nominal and empty feasible set") {
    ProblemSpec spec = scalar_spec();
    spec.A(0, 0) = 0.5;
    const auto r = sr_sla(spec);
    CHECK(r.value == 0.0);
    CHECK(r.trace->iterations.empty());
    CHECK_THROWS_AS(sr_sla(example1()), InfeasibleAtNominalError);
    CHECK_THROWS_AS(sla_step(example1(), 0.1), FeasibilityError);
}

TEST_CASE("iteration budget") {
    SLAConfig cfg;
    cfg.beta = 1e-4;
    cfg.max_iters = 10;
    CHECK_THROWS_AS(sr_sla(case1(), cfg), NonTerminationError);
}

TEST_CASE("greedy step matches exhaustive candidate evaluation") {
    const ProblemSpec spec = case2();
    const auto bundle = build_sensitivities(spec);
    for (double beta : {0.05, 0.3, 1.0}) {
        const auto step = sla_step(spec, bundle, beta);
        double best = -1e300;
        std::size_t best_k = 0;
        for (std::size_t k : bundle.feasible) {
            const auto& e = bundle.entries[k];
            const RealMatrix d = beta * hadamard(spec.S, e.P_real) / e.masked_norm;
            const double a = spectral_abscissa(apply_perturbation(spec, d));
            if (a > best) {
                best = a;
                best_k = k;
            }
        }
        CHECK(step.k == best_k);
        CHECK(std::abs(step.alpha - best) <= 1e-14 * (1 + std::abs(best)));
        CHECK(std::abs(step.delta.norm() - beta) <= 1e-14);
        CHECK(step.candidate_alpha.size() == bundle.feasible.size());
    }
}

TEST_CASE("published case radii") {
    const auto r1 = sr_sla(case1());
    CHECK(std::abs(r1.value - 0.88252) <= 2e-3);
    SLAConfig cfg;
    cfg.refine_final = true;
    const auto r2 = sr_sla(case2(), cfg);
    CHECK(std::abs(r2.value - 2.4257) <= 2e-3);
}

TEST_CASE("termination certificate and strict progress") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 15; ++t) {
        const auto spec = random_spec(rng, 2 + t % 3, 2, 2);
        SLAConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(t);
        SRReport r;
        try {
            r = sr_sla(spec, cfg);
        } catch (const InfeasibleAtNominalError&) {
            continue;
        }
        const auto& its = r.trace->iterations;
        REQUIRE_FALSE(its.empty());
        const double slack = 1e-6 * (1 + spec.A.norm());
        CHECK(spectral_abscissa(apply_perturbation(spec, r.delta_star)) >= -slack);
        CHECK(hadamard(spec.S.complement(), r.delta_star).isZero(0.0));

        RealMatrix before = RealMatrix::Zero(spec.m(), spec.p());
        for (std::size_t i = 0; i + 1 < its.size(); ++i) before += its[i].step;
        CHECK(spectral_abscissa(apply_perturbation(spec, before)) < slack);

        for (std::size_t i = 1; i < its.size(); ++i) {
            if (its[i].noise_repairs == 0) CHECK(its[i].alpha > its[i - 1].alpha);
        }
    }
}

TEST_CASE("symmetric matrices with full perturbations") {
    // For symmetric A and B = C = I the radius is -alpha(A) and each step
    // moves the top eigenvalue by beta.
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto n = 2 + t % 4;
        RealMatrix g = gaussian(rng, n, n);
        RealMatrix a = 0.5 * (g + g.transpose());
        a -= (spectral_abscissa(a) + 0.5) * RealMatrix::Identity(n, n);
        ProblemSpec spec{"sym", a, RealMatrix::Identity(n, n), RealMatrix::Identity(n, n), SparsityMask::ones(n, n),
                         std::nullopt};
        SLAConfig cfg;
        cfg.beta = 0.02;
        const auto r = sr_sla(spec, cfg);
        CHECK(r.value >= 0.5 * (1 - 1e-9));
        CHECK(r.value <= 0.5 + 2 * *cfg.beta);
    }
}

TEST_CASE("seeded runs are reproducible") {
    SLAConfig cfg;
    cfg.seed = 7;
    const auto a = sr_sla(case2(), cfg);
    const auto b = sr_sla(case2(), cfg);
    CHECK(a.value == b.value);
    CHECK(a.delta_star == b.delta_star);
    CHECK(a.trace->iterations.size() == b.trace->iterations.size());
}

TEST_CASE("sweep follows the cumulative iterates") {
    SLAConfig cfg;
    cfg.beta = 0.01;
    const std::vector<double> grid{0.0, 0.25, 0.5};
    const auto pts = alpha_sla_sweep(case1(), cfg, grid);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].alpha == spectral_abscissa(case1().A));
    CHECK(pts[1].alpha > pts[0].alpha);
    CHECK(pts[2].alpha > pts[1].alpha);

    CHECK_THROWS_AS(alpha_sla_sweep(case1(), cfg, {0.5, 0.25}), Error);
    CHECK_THROWS_AS(alpha_sla_sweep(case1(), cfg, {-0.1}), Error);
    CHECK(alpha_sla_sweep(case1(), cfg, {}).empty());
}
