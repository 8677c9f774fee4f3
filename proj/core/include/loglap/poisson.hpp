#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "loglap/assembly.hpp"
#include "loglap/geometry.hpp"
#include "loglap/pointops.hpp"

namespace loglap {

struct PoissonSolution {
    CellMesh mesh;
    Eigen::VectorXd rhs;       // f at cell centers
    Eigen::VectorXd solution;  // u per cell
    double residual = 0.0;     // ||A u - M f|| / ||M f||
    double lambda1 = 0.0;
    bool valid = false;
    bool geometry_certified = true;  // false for raster masks (no exterior-sphere check)
};

// Solves A u = M f for the log form with zero exterior data. Throws NotCoerciveError when
// lambda_1 <= 0.
PoissonSolution solve_poisson(const Domain& d, const std::function<double(const Point&)>& f, int cells_per_unit,
                              const QuadratureConfig& quad, const AssemblyOptions& opts = {});
PoissonSolution solve_poisson(const AssembledForm& form, const Eigen::VectorXd& rhs);

struct DecayRow {
    double t;
    double sup_abs;
    double weighted;  // sup_abs * (-log t)^tau
    int cells;
};

// Dyadic shells rho in [t_k, 2 t_k) with rho the distance of the cell center to the boundary.
std::vector<DecayRow> decay_profile(const PoissonSolution& sol, double tau, const std::vector<double>& shells);

enum class DecayVerdict { bounded, inconclusive };
const char* decay_verdict_name(DecayVerdict v);

// bounded when the last weighted value is at most 1.1 times the median of the earlier ones.
DecayVerdict decay_verdict(const std::vector<DecayRow>& profile);

}  // namespace loglap
