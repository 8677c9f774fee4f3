#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace loglap {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_depth = 40;
    int mc_samples = 0;  // fallback sampling count, unused by the deterministic paths
    std::uint64_t seed = 0;

    void validate() const;
};

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached and thread-safe; n in [1, 512].
const GaussRule& gauss_legendre(int n);

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Breakpoints inside (a, b) seed
// the initial partition. An interval is never bisected more than max_depth times.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth,
                        const std::vector<double>& breakpoints = {});

// Same as integrate_gk but throws QuadratureError when the error estimate exceeds abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& q, const std::vector<double>& breakpoints = {});

}  // namespace loglap
