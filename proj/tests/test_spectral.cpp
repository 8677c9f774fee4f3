#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "loglap/errors.hpp"
#include "loglap/special.hpp"
#include "loglap/spectral.hpp"

using namespace loglap;

TEST(Gevp, TwoByTwo) {
    Eigen::MatrixXd A(2, 2);
    A << 2, -1, -1, 2;
    const SpectralResult r = solve_gevp(A, Eigen::VectorXd::Ones(2), 2);
    EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-14);
    EXPECT_NEAR(r.eigenvalues[1], 3.0, 1e-14);
    EXPECT_GT(r.eigenvectors(0, 0), 0.0);
    EXPECT_GT(r.eigenvectors(1, 0), 0.0);
}

TEST(Gevp, MassEqualsStiffness) {
    const Eigen::VectorXd M = Eigen::VectorXd::LinSpaced(5, 0.5, 2.5);
    const SpectralResult r = solve_gevp(Eigen::MatrixXd(M.asDiagonal()), M, 5);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(r.eigenvalues[k], 1.0, 1e-14);
    const Eigen::MatrixXd G = r.eigenvectors.transpose() * M.asDiagonal() * r.eigenvectors;
    EXPECT_LE((G - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gevp, Errors) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    EXPECT_THROW(solve_gevp(A, Eigen::Vector2d(1.0, 0.0), 1), ValidationError);
    EXPECT_THROW(solve_gevp(A, Eigen::Vector2d(1.0, 1.0), 3), ValidationError);
    EXPECT_THROW(solve_gevp(A, Eigen::Vector3d(1.0, 1.0, 1.0), 1), ValidationError);
}

TEST(LogSpectrum, UnitIntervalBracketAndPerron) {
    QuadratureConfig q;
    const SpectralResult r = eig_log(Domain::interval(0, 1), 128, 3, q);
    EXPECT_GT(r.eigenvalues[0], 0.0);
    EXPECT_LT(r.eigenvalues[0], std::log(M_PI * M_PI));
    EXPECT_GT(r.simplicity_margin(), 0.0);
    EXPECT_GT(r.eigenvectors.col(0).minCoeff(), 0.0);
    EXPECT_THROW(eig_log(Domain::interval(0, 1), 4, 5, q), ValidationError);
}

TEST(LogSpectrum, ScalingLaw) {
    // lambda(t Omega) = lambda(Omega) - 2 log t holds exactly for the scaled mesh
    QuadratureConfig q;
    const double a = lambda1_log(Domain::interval(0, 1), 32, q);
    const double b = lambda1_log(Domain::interval(0, 2), 16, q);
    EXPECT_NEAR(b, a - 2 * std::log(2.0), 1e-9);
}

TEST(LogSpectrum, ClassicalUpperBound) {
    QuadratureConfig q;
    for (double L : {1.0, 2.0, 3.0})
        EXPECT_LE(lambda1_log(Domain::interval(0, L), 64, q), std::log(std::pow(M_PI / L, 2)) + 1e-3) << L;
}

TEST(LogSpectrum, NoRandomVectorBeatsTheEigensolver) {
    QuadratureConfig q;
    const CellMesh m = build_mesh(Domain::ball(2, 1.0), 5);
    const AssembledForm f = assemble_log_potential(m, q);
    const double l1 = solve_gevp(f.stiffness, f.mass, 1).eigenvalues[0];
    std::mt19937_64 rng(0);
    std::normal_distribution<double> Z;
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd v(m.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Z(rng);
        EXPECT_GE(v.dot(f.stiffness * v) / v.dot(f.mass.cwiseProduct(v)), l1 - 1e-8);
    }
}

TEST(SDerivative, GapsShrink) {
    QuadratureConfig q;
    const SDerivativeStudy st = s_derivative_study(Domain::interval(0, 1), {0.1, 0.05, 0.02}, 64, q);
    ASSERT_EQ(st.rows.size(), 3u);
    EXPECT_LT(st.rows[2].gap, st.rows[1].gap);
    EXPECT_LT(st.rows[1].gap, st.rows[0].gap);
    ASSERT_EQ(st.richardson.size(), 2u);
    EXPECT_LT(std::abs(st.richardson.back() - st.lambda_log), st.rows.back().gap);
    EXPECT_THROW(s_derivative_study(Domain::interval(0, 1), {}, 16, q), ValidationError);
    EXPECT_THROW(s_derivative_study(Domain::interval(0, 1), {0.6}, 16, q), DomainError);
    EXPECT_THROW(s_derivative_study(Domain::interval(0, 1), {0.01, 0.1}, 16, q), ValidationError);
}

TEST(FaberKrahn, IntervalBeatsSplitIntervals) {
    QuadratureConfig q;
    const FaberKrahnTable t = faber_krahn_compare(
        {Domain::union_of({Domain::interval(0, 0.5), Domain::interval(2, 2.5)}), Domain::interval(0, 1)}, 64, q);
    EXPECT_EQ(t.minimizer, 1);
    EXPECT_TRUE(t.rows[1].is_ball);
    EXPECT_THROW(faber_krahn_compare({Domain::interval(0, 1), Domain::interval(0, 1.1)}, 16, q), ValidationError);
}

TEST(Classical, BallsAgainstBesselZeros) {
    const double j0 = boost::math::cyl_bessel_j_zero(0.0, 1);
    EXPECT_NEAR(*classical_lambda1(Domain::ball(2, 2.5)), j0 * j0 / 6.25, 1e-7);
    // N = 3: j_{1/2,1} = pi
    EXPECT_NEAR(*classical_lambda1(Domain::ball(3, 1.0)), M_PI * M_PI, 1e-6);
    EXPECT_NEAR(*classical_lambda1(Domain::box(2, {0, 0, 0}, {1, 2, 0})), M_PI * M_PI * 1.25, 1e-12);
    EXPECT_NEAR(*classical_lambda1(Domain::interval(0, 4)), M_PI * M_PI / 16, 1e-14);
    // finite differences converge at second order
    const double e1 = std::abs(radial_dirichlet_eigenvalue(2, 64) - j0 * j0);
    const double e2 = std::abs(radial_dirichlet_eigenvalue(2, 128) - j0 * j0);
    EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(MaxPrinciple, Classification) {
    QuadratureConfig q;
    const MPVerdict small = mp_classify(Domain::interval(0, 1), 32, q);
    EXPECT_EQ(small.verdict, Verdict::holds);
    EXPECT_TRUE(small.volume_certificate);
    EXPECT_TRUE(small.consistent);
    const MPVerdict big = mp_classify(Domain::interval(0, 4), 32, q, classical_lambda1(Domain::interval(0, 4)));
    EXPECT_EQ(big.verdict, Verdict::fails);
    EXPECT_TRUE(big.classical_certificate);
    EXPECT_FALSE(big.volume_certificate);
    EXPECT_STREQ(verdict_name(big.verdict), "fails");
}

TEST(MaxPrinciple, HCertificateImpliesPositiveEigenvalue) {
    QuadratureConfig q;
    for (double r : {0.3, 0.5, 0.8}) {
        const MPVerdict v = mp_classify(Domain::ball(2, r), 10, q);
        if (v.h_certificate) EXPECT_GT(v.lambda1, 0.0);
        EXPECT_TRUE(v.consistent);
    }
}

TEST(Hardy, PositiveAndStable) {
    QuadratureConfig q;
    const double a = hardy_quotient(Domain::interval(0, 1), 32, q).quotient;
    const double b = hardy_quotient(Domain::interval(0, 1), 64, q).quotient;
    EXPECT_GT(a, 0.0);
    EXPECT_LT(std::abs(b / a - 1), 0.1);
    const HardyResult d = hardy_quotient(Domain::ball(2, 1.0), 4, q);
    EXPECT_TRUE(std::isfinite(d.quotient));
    EXPECT_GT(d.quotient, 0.0);
}
