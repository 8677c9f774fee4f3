#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "loglap/errors.hpp"
#include "loglap/pointops.hpp"
#include "loglap/special.hpp"

using namespace loglap;

namespace {

// Radial Fourier oracle for the gaussian exp(-|x|^2 / (2 sigma^2)) with multiplier m(k).
template <class M>
double gauss_multiplier(int N, double sigma, double r, M m) {
    auto uhat = [&](double k) { return std::pow(2 * M_PI * sigma * sigma, N / 2.0) * std::exp(-0.5 * sigma * sigma * k * k); };
    std::function<double(double)> f;
    if (N == 1)
        f = [&](double k) { return m(k) * uhat(k) * std::cos(k * r) / M_PI; };
    else
        f = [&](double k) { return m(k) * uhat(k) * boost::math::cyl_bessel_j(0, k * r) * k / (2 * M_PI); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double cut = 12.0 / sigma;
    return ts.integrate(f, 0.0, 1.0) + ts.integrate(f, 1.0, cut);
}

}  // namespace

TEST(LogLaplacian, GaussianAgainstFourierOracle) {
    QuadratureConfig q;
    for (int N : {1, 2}) {
        const ScalarField u = make_gauss(N, 0.7);
        for (double r : {0.0, 0.4, 1.3}) {
            const double ref = gauss_multiplier(N, 0.7, r, [](double k) { return 2 * std::log(k); });
            EXPECT_NEAR(loglap_at(u, {r, 0, 0}, q), ref, 1e-7) << "N=" << N << " r=" << r;
        }
    }
}

TEST(FracLaplacian, GaussianAgainstFourierOracle) {
    QuadratureConfig q;
    for (double s : {0.1, 0.4, 0.75}) {
        const ScalarField u = make_gauss(1, 0.5);
        const double ref = gauss_multiplier(1, 0.5, 0.3, [s](double k) { return std::pow(k, 2 * s); });
        EXPECT_NEAR(fraclap_at(u, {0.3, 0, 0}, s, q), ref, 1e-7) << "s=" << s;
    }
}

TEST(DiffQuotient, ConvergesToLogLaplacian) {
    QuadratureConfig q;
    const ScalarField u = make_bump(2);
    const Point x{0.3, 0.2, 0};
    const double L = loglap_at(u, x, q);
    double prev = INFINITY;
    for (double s : {0.1, 0.01, 0.001}) {
        const double d = std::abs(diff_quotient_at(u, x, s, q) - L);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_NEAR(diff_quotient_at(u, x, 0.05, q), (fraclap_at(u, x, 0.05, q) - u(x)) / 0.05, 1e-6);
}

TEST(LogLaplacian, RegionalFormAgreesWithWholeSpace) {
    QuadratureConfig q;
    const ScalarField u = make_bump(1);
    const Domain region = Domain::interval(-1.5, 2.0);
    for (double x : {-0.5, 0.2, 1.2}) EXPECT_NEAR(loglap_at(u, {x, 0, 0}, q, &region), loglap_at(u, {x, 0, 0}, q), 1e-8);
    EXPECT_THROW(loglap_at(u, {3.0, 0, 0}, q, &region), DomainError);
}

TEST(LogLaplacian, LinearInTheField) {
    QuadratureConfig q;
    const ScalarField a = make_bump(1), b = make_gauss(1, 0.3);
    const ScalarField c = linear_combination(2.0, a, -0.5, b);
    const Point x{0.4, 0, 0};
    EXPECT_NEAR(loglap_at(c, x, q), 2.0 * loglap_at(a, x, q) - 0.5 * loglap_at(b, x, q), 1e-9);
}

TEST(LogLaplacian, DiniFieldEvaluates) {
    QuadratureConfig q;
    const ScalarField u = make_cosbell(1, 1.0);
    EXPECT_TRUE(std::isfinite(loglap_at(u, {0.5, 0, 0}, q)));
}

TEST(Fields, ParseSpecs) {
    EXPECT_EQ(parse_field("gauss:sigma=0.5", 2).dim, 2);
    EXPECT_THROW(parse_field("gauss:sigma=abc", 1), ParseError);
    EXPECT_THROW(parse_field("nope", 1), ParseError);
}

TEST(Fourier, MatchesPointwiseOnBump) {
    QuadratureConfig q;
    const ScalarField u = make_bump(1);
    const TorusGrid g = loglap_fourier_grid(sample_torus(u, 8.0, 256));
    for (double x : {0.0, 0.5, 1.5}) {
        const std::size_t idx = static_cast<std::size_t>(std::lround((x + 4.0) * 32.0));
        EXPECT_NEAR(g.samples[idx], loglap_at(u, {x, 0, 0}, q), 1e-3);
    }
    EXPECT_LT(g.imag_residue, 1e-10);
}

TEST(Fourier, TwoDimensionalGaussian) {
    QuadratureConfig q;
    const ScalarField u = make_gauss(2, 0.6);
    const TorusGrid g = loglap_fourier_grid(sample_torus(u, 16.0, 64));
    const std::size_t mid = 32 + 64 * 32;  // the origin
    EXPECT_NEAR(g.samples[mid], loglap_at(u, {}, q), 1e-3);
    EXPECT_THROW(sample_torus(u, 8.0, 100), DomainError);
}

TEST(Barrier, ProfileIsContinuous) {
    const Barrier b = make_barrier(0.25, 0.3);
    const double d = b.delta_tau;
    EXPECT_NEAR(g_value(b, d * (1 - 1e-9)), g_value(b, d * (1 + 1e-9)), 1e-8);
    EXPECT_NEAR(g_derivative(b, d * (1 - 1e-9)), g_derivative(b, d * (1 + 1e-9)), 1e-6);
    EXPECT_DOUBLE_EQ(barrier_value(b, {0.1, 0, 0}), 0.0);
    EXPECT_THROW(make_barrier(0.25, 0.6), DomainError);
    EXPECT_THROW(make_barrier(0.7, 0.3), DomainError);
}

TEST(Barrier, RatioIncreasesTowardTheSphere) {
    QuadratureConfig q;
    const BarrierReport r = barrier_check(make_barrier(0.25, 0.3), {1e-2, 1e-3, 1e-4}, q);
    EXPECT_TRUE(r.increasing);
    EXPECT_GT(r.rows.back().ratio, 0.0);
}

TEST(Ell, Values) {
    EXPECT_NEAR(ell(0.25), 1.0 / std::log(4.0), 1e-15);
    EXPECT_NEAR(ell(3.0), 1.0 / std::log(2.0), 1e-15);
    EXPECT_THROW(ell(0.0), DomainError);
}
