#pragma once

#include "loglap/quadrature.hpp"

namespace loglap {

inline constexpr double euler_gamma = 0.5772156649015329;

double digamma(double x);
double gamma_ln(double x);

// |S^{N-1}| and |B_1| in R^N.
double sphere_area(int N);
double ball_volume(int N);

struct Constants {
    int dim = 0;
    double c_N = 0.0;
    double rho_N = 0.0;
    double kappa_N = 0.0;
    double sphere_area = 0.0;
    double ball_volume = 0.0;
};

struct FracConstants {
    int dim = 0;
    double s = 0.0;
    double c_Ns = 0.0;
    double d_Ns = 0.0;
};

struct Thresholds {
    int dim = 0;
    double r_N = 0.0;
    double r_NB = 0.0;
    double volume_threshold = 0.0;
};

// c_N = pi^{-N/2} Gamma(N/2), rho_N = 2 log 2 + psi(N/2) - gamma.
Constants base_constants(int N, const QuadratureConfig& quad = {});

// Finite-sum form of rho_N (harmonic sums over odd or even N).
double rho_N_closed_form(int N);

// Quadrature of int_{R^{N-1}} (1 + |z|^2)^{-N/2} dz; exactly 1 for N = 1.
double kappa_N(int N, const QuadratureConfig& quad = {});

FracConstants frac_constants(int N, double s);

// (d_N(s)/c_N - 1)/s evaluated without cancellation; tends to rho_N as s -> 0.
double frac_log_ratio(int N, double s);

Thresholds thresholds(int N);

}  // namespace loglap
