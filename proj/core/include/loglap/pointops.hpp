#pragma once

#include <functional>
#include <string>
#include <vector>

#include "loglap/geometry.hpp"
#include "loglap/quadrature.hpp"

namespace loglap {

enum class Smoothness { smooth, dini, unknown };

struct ScalarField {
    int dim = 1;
    std::function<double(const Point&)> eval;
    double support_radius = 1.0;  // eval vanishes for |x| > support_radius
    Smoothness smoothness = Smoothness::smooth;
    // Radii |x| = r across which the field is not smooth; used as quadrature breakpoints.
    std::vector<double> singular_radii;
    std::string name;

    double operator()(const Point& x) const { return eval(x); }
};

// exp(-1/(1-|x|^2)) on the unit ball.
ScalarField make_bump(int dim);
ScalarField make_gauss(int dim, double sigma);
// (1 + cos(pi |x| / r)) / 2 on B_r.
ScalarField make_cosbell(int dim, double r);
// "bump" | "gauss:sigma=S" | "cosbell:r=R"
ScalarField parse_field(const std::string& spec, int dim);
ScalarField linear_combination(double a, const ScalarField& u, double b, const ScalarField& v);

// Whole-space integral representation, or the regional one with h_Omega when region is given.
double loglap_at(const ScalarField& u, const Point& x, const QuadratureConfig& quad,
                 const Domain* region = nullptr);
double fraclap_at(const ScalarField& u, const Point& x, double s, const QuadratureConfig& quad);
// ((-Delta)^s u(x) - u(x)) / s, evaluated in a cancellation-free form.
double diff_quotient_at(const ScalarField& u, const Point& x, double s, const QuadratureConfig& quad);

// Periodic samples on [-L/2, L/2)^N, x fastest.
struct TorusGrid {
    int dim = 1;
    double box_side = 1.0;
    int points_per_side = 8;
    std::vector<double> samples;
    double imag_residue = 0.0;  // set by transforms

    Point coordinate(std::size_t idx) const;
};

TorusGrid sample_torus(const ScalarField& u, double L, int n);

enum class ZeroMode {
    cell_average,  // mean of 2 log|xi| over the fundamental frequency cell
    regularized,   // lattice-regularized weight, exact for the nonperiodic integral up to moments
};

struct FourierOptions {
    ZeroMode zero_mode = ZeroMode::regularized;
    int moment_order = 3;  // 1-D only; number of even-moment corrections, 0 disables
};

double zero_mode_weight(int N, double L, ZeroMode mode);
// Constant C_N with sum' log|k D| G(kD) D^N + D^N (log D + C_N) G(0) ~ int log|xi| G.
double lattice_log_constant(int N);

TorusGrid loglap_fourier_grid(const TorusGrid& g, const FourierOptions& opts = {});

struct Barrier {
    int dim = 1;
    double R = 0.25;
    double tau = 0.3;
    double delta_tau = 0.0;
    double v = 0.0;
    double d = 0.0;
};

Barrier make_barrier(double R, double tau, int dim = 1);
double g_value(const Barrier& b, double r);
double g_derivative(const Barrier& b, double r);
double barrier_value(const Barrier& b, const Point& x);
ScalarField barrier_field(const Barrier& b);

struct BarrierRow {
    double rho;
    double loglap;
    double ratio;  // loglap / (-log rho)^{1 - tau}
};

struct BarrierReport {
    std::vector<BarrierRow> rows;
    double bound = 0.0;  // (1 - 2 tau) kappa_N c_N / (2 (1 - tau))
    bool increasing = false;
    bool positive = false;
    bool reaches_bound = false;
};

BarrierReport barrier_check(const Barrier& b, const std::vector<double>& rho_list,
                            const QuadratureConfig& quad);

// -1/log t on (0, 1/2], 1/log 2 beyond.
double ell(double t);

}  // namespace loglap
