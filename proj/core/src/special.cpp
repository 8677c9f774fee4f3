#include "loglap/special.hpp"

#include <cmath>
#include <string>

#include "loglap/errors.hpp"

namespace loglap {

namespace {

void require_dim(int N) {
    if (N < 1) throw DomainError("dimension must be a positive integer, got " + std::to_string(N));
}

}  // namespace

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma requires x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli numbers B_2k / (2k)
    const double r = 1.0 / (x * x);
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double gamma_ln(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma_ln requires x > 0");
    return std::lgamma(x);
}

double sphere_area(int N) {
    require_dim(N);
    return 2.0 * std::exp(0.5 * N * std::log(M_PI) - gamma_ln(0.5 * N));
}

double ball_volume(int N) {
    require_dim(N);
    return sphere_area(N) / N;
}

double rho_N_closed_form(int N) {
    require_dim(N);
    double acc = 0.0;
    if (N % 2 == 1) {
        for (int k = 1; k <= (N - 1) / 2; ++k) acc += 2.0 / (2.0 * k - 1.0);
        return -2.0 * euler_gamma + acc;
    }
    for (int k = 1; k <= (N - 2) / 2; ++k) acc += 1.0 / k;
    return 2.0 * (std::log(2.0) - euler_gamma) + acc;
}

double kappa_N(int N, const QuadratureConfig& quad) {
    require_dim(N);
    if (N == 1) return 1.0;
    // radial reduction, then r = tan(theta): |S^{N-2}| int_0^{pi/2} sin^{N-2}(theta) dtheta
    const double area = N == 2 ? 2.0 : sphere_area(N - 1);
    auto f = [N](double t) { return std::pow(std::sin(t), N - 2); };
    return area * integrate(f, 0.0, 0.5 * M_PI, quad);
}

Constants base_constants(int N, const QuadratureConfig& quad) {
    require_dim(N);
    Constants c;
    c.dim = N;
    c.sphere_area = sphere_area(N);
    c.ball_volume = ball_volume(N);
    c.c_N = std::exp(gamma_ln(0.5 * N) - 0.5 * N * std::log(M_PI));
    c.rho_N = 2.0 * std::log(2.0) + digamma(0.5 * N) - euler_gamma;
    c.kappa_N = kappa_N(N, quad);
    return c;
}

FracConstants frac_constants(int N, double s) {
    require_dim(N);
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1), got " + std::to_string(s));
    FracConstants f;
    f.dim = N;
    f.s = s;
    const double log_d = 2.0 * s * std::log(2.0) - 0.5 * N * std::log(M_PI) + gamma_ln(0.5 * N + s) -
                         gamma_ln(1.0 - s);
    f.d_Ns = std::exp(log_d);
    f.c_Ns = s * f.d_Ns;
    return f;
}

double frac_log_ratio(int N, double s) {
    require_dim(N);
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1), got " + std::to_string(s));
    const double e = 2.0 * s * std::log(2.0) + gamma_ln(0.5 * N + s) - gamma_ln(0.5 * N) - gamma_ln(1.0 - s);
    return std::expm1(e) / s;
}

Thresholds thresholds(int N) {
    require_dim(N);
    Thresholds t;
    t.dim = N;
    t.r_N = 2.0 * std::exp(0.5 * (digamma(0.5 * N) - euler_gamma));
    t.r_NB = std::exp(digamma(0.25 * N)) / M_PI;
    t.volume_threshold = ball_volume(N) * std::pow(t.r_N, N);
    return t;
}

}  // namespace loglap
