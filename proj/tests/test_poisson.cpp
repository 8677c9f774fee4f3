#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loglap/errors.hpp"
#include "loglap/poisson.hpp"

using namespace loglap;

namespace {

std::vector<DecayRow> rows(const std::vector<double>& w) {
    std::vector<DecayRow> out;
    double t = 0.5;
    for (double v : w) {
        out.push_back({t, v, v, 1});
        t *= 0.5;
    }
    return out;
}

}  // namespace

TEST(Poisson, ConstantSourceGivesPositiveSolution) {
    QuadratureConfig q;
    const PoissonSolution s = solve_poisson(Domain::interval(0, 1), [](const Point&) { return 1.0; }, 256, q);
    EXPECT_GT(s.solution.minCoeff(), 0.0);
    EXPECT_LE(s.residual, 1e-10);
    EXPECT_TRUE(s.valid);
    EXPECT_TRUE(s.geometry_certified);
}

TEST(Poisson, ZeroSource) {
    QuadratureConfig q;
    const PoissonSolution s = solve_poisson(Domain::interval(0, 1), [](const Point&) { return 0.0; }, 32, q);
    EXPECT_EQ(s.solution.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Poisson, NotCoerciveOnLongInterval) {
    QuadratureConfig q;
    EXPECT_THROW(solve_poisson(Domain::interval(0, 4), [](const Point&) { return 1.0; }, 16, q), NotCoerciveError);
}

TEST(Poisson, LinearityAndComparison) {
    QuadratureConfig q;
    const AssembledForm f = assemble_log_potential(build_mesh(Domain::ball(2, 1.0), 5), q);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Eigen::VectorXd a(f.mass.size()), g(f.mass.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a[i] = U(rng);
        g[i] = a[i] + U(rng);
    }
    const Eigen::VectorXd ua = solve_poisson(f, a).solution, ug = solve_poisson(f, g).solution;
    EXPECT_LE((solve_poisson(f, 3.0 * a).solution - 3.0 * ua).cwiseAbs().maxCoeff(), 1e-12 * ua.cwiseAbs().maxCoeff());
    EXPECT_GE((ug - ua).minCoeff(), 0.0);
    EXPECT_GT(ua.minCoeff(), 0.0);
}

TEST(Poisson, CompactSourceStaysNonnegative) {
    QuadratureConfig q;
    const PoissonSolution s =
        solve_poisson(Domain::interval(0, 1), [](const Point& x) { return x[0] < 0.2 ? 1.0 : 0.0; }, 64, q);
    EXPECT_GT(s.solution.minCoeff(), 0.0);
}

TEST(Decay, ProfileOnUnitInterval) {
    QuadratureConfig q;
    const PoissonSolution s = solve_poisson(Domain::interval(0, 1), [](const Point&) { return 1.0; }, 256, q);
    const auto p = decay_profile(s, 0.4, {0.125, 0.0625, 0.03125});
    ASSERT_EQ(p.size(), 3u);
    for (const auto& r : p) EXPECT_NEAR(r.weighted, r.sup_abs * std::pow(-std::log(r.t), 0.4), 1e-15);
    EXPECT_EQ(decay_verdict(p), DecayVerdict::bounded);
    EXPECT_THROW(decay_profile(s, 0.6, {0.125}), DomainError);
    EXPECT_THROW(decay_profile(s, 0.4, {0.125, 0.001}), ValidationError);
    EXPECT_THROW(decay_profile(s, 0.4, {0.0625, 0.125}), ValidationError);
}

TEST(Decay, ConsistentUnderRefinement) {
    QuadratureConfig q;
    auto f = [](const Point&) { return 1.0; };
    const std::vector<double> shells{0.125, 0.0625, 0.03125};
    const auto a = decay_profile(solve_poisson(Domain::interval(0, 1), f, 256, q), 0.4, shells);
    const auto b = decay_profile(solve_poisson(Domain::interval(0, 1), f, 512, q), 0.4, shells);
    for (std::size_t k = 0; k < shells.size(); ++k) EXPECT_LT(std::abs(a[k].weighted / b[k].weighted - 1), 0.25);
}

TEST(Decay, Verdicts) {
    EXPECT_EQ(decay_verdict(rows({1.0, 1.0, 1.0, 1.0})), DecayVerdict::bounded);
    EXPECT_EQ(decay_verdict(rows({1.0, 1.5, 2.25, 3.375})), DecayVerdict::inconclusive);
    EXPECT_THROW(decay_verdict(rows({1.0, 1.0})), ValidationError);
    EXPECT_STREQ(decay_verdict_name(DecayVerdict::bounded), "bounded");
}

TEST(Decay, RasterMaskIsUncertified) {
    QuadratureConfig q;
    const Domain m = build_mesh(Domain::interval(0, 1), 32).as_domain();
    const PoissonSolution s = solve_poisson(m, [](const Point&) { return 1.0; }, 32, q);
    EXPECT_FALSE(s.geometry_certified);
}
