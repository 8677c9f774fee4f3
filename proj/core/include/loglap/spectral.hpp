#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "loglap/assembly.hpp"
#include "loglap/geometry.hpp"
#include "loglap/quadrature.hpp"

namespace loglap {

struct SpectralResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // M-orthonormal columns
    std::string domain;
    int cells_per_unit = 0;
    std::string kind;

    // lambda_2 - lambda_1, or 0 with a single eigenvalue.
    double simplicity_margin() const;
};

// k smallest eigenpairs of A x = lambda diag(M) x. Signs: xi_1 nonnegative, the others with
// their first significant component positive.
SpectralResult solve_gevp(const Eigen::MatrixXd& A, const Eigen::VectorXd& M, int k);

enum class LogRoute { potential, truncated };

SpectralResult eig_log(const Domain& d, int cells_per_unit, int k, const QuadratureConfig& quad,
                       LogRoute route = LogRoute::potential, const AssemblyOptions& opts = {});
double lambda1_log(const Domain& d, int cells_per_unit, const QuadratureConfig& quad,
                   LogRoute route = LogRoute::potential, const AssemblyOptions& opts = {});

struct SDerivativeRow {
    double s;
    double lambda_s;
    double quotient;       // (lambda_s - 1) / s
    double gap;            // |quotient - lambda_log|
    double eig_distance;   // ||u_s - xi_1|| in the discrete L2 norm
};

struct SDerivativeStudy {
    double lambda_log = 0.0;
    std::vector<SDerivativeRow> rows;
    // First-order extrapolation to s = 0 from consecutive rows.
    std::vector<double> richardson;
};

SDerivativeStudy s_derivative_study(const Domain& d, const std::vector<double>& s_list, int cells_per_unit,
                                    const QuadratureConfig& quad, const AssemblyOptions& opts = {});

struct FaberKrahnRow {
    std::string domain;
    double measure;
    double mesh_measure;
    double lambda1;
    // lambda1 shifted by the scaling law to the exact measure: lambda1 + (2/N) log(|Omega_h|/|Omega|)
    double lambda1_rescaled;
    bool is_ball;
};

struct FaberKrahnTable {
    std::vector<FaberKrahnRow> rows;
    int minimizer = -1;
    int minimizer_rescaled = -1;
};

FaberKrahnTable faber_krahn_compare(const std::vector<Domain>& domains, int cells_per_unit,
                                    const QuadratureConfig& quad, const AssemblyOptions& opts = {});

enum class Verdict { holds, fails, marginal };
const char* verdict_name(Verdict v);

struct MPVerdict {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Verdict verdict = Verdict::marginal;
    double margin = 0.0;  // |lambda1| / max(1, |lambda2|)

    bool h_certificate = false;  // min over cell centers of h_Omega + rho_N >= 0
    double h_min = 0.0;
    bool volume_certificate = false;  // |Omega| <= |B_{r_N}|
    double volume = 0.0;
    double volume_threshold = 0.0;
    std::optional<double> lambda1_classical;
    bool classical_certificate = false;  // log lambda1_classical < 0 forces failure
    bool consistent = true;              // no certificate contradicts the verdict
};

MPVerdict mp_classify(const Domain& d, int cells_per_unit, const QuadratureConfig& quad,
                      std::optional<double> lambda1_classical = std::nullopt, const AssemblyOptions& opts = {});

// First Dirichlet eigenvalue of -Laplace: closed form on boxes, radial finite differences with
// one Richardson step on balls. Empty for other domains.
std::optional<double> classical_lambda1(const Domain& d);
// Radial finite-difference value on the unit ball with n intervals (no extrapolation).
double radial_dirichlet_eigenvalue(int N, int n);

struct HardyResult {
    double quotient = 0.0;
    int cells = 0;
};

HardyResult hardy_quotient(const Domain& d, int cells_per_unit, const QuadratureConfig& quad,
                           const AssemblyOptions& opts = {});

}  // namespace loglap
