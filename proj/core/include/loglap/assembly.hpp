#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "loglap/geometry.hpp"
#include "loglap/quadrature.hpp"

namespace loglap {

enum class FormKind { log_truncated, log_potential, frac, interior_truncated };

const char* form_kind_name(FormKind k);

struct AssemblyOptions {
    int threads = 0;  // 0 picks std::thread::hardware_concurrency
};

struct AssembledForm {
    CellMesh mesh;
    Eigen::MatrixXd stiffness;  // A
    Eigen::VectorXd mass;       // diagonal of M, M_ii = |C_i|
    FormKind kind = FormKind::log_potential;
    double s = 0.0;
    QuadratureConfig quad;
};

// Pieces of int w_o(z) |z|^{-N-2s} dz for the lattice offset o, where
// w_o(z) = prod_d (h - |z_d - o_d h|)_+ is the overlap of a cell with its translate by o h.
enum class PairPart { full, truncated, tail };

double lattice_pair_integral(int dim, double h, const Index& offset, double s, PairPart part,
                             const QuadratureConfig& quad);

// int (h^N 1_{|z|<1} - w_0(z)) |z|^{-N} dz
double cell_self_log(int dim, double h, const QuadratureConfig& quad);
// int (h^N - w_0(z)) |z|^{-N-2s} dz, 0 < s < 1/2
double cell_self_frac(int dim, double h, double s, const QuadratureConfig& quad);
// int_{|z| >= 1} w_0(z) |z|^{-N} dz (zero unless the cell diameter exceeds 1)
double cell_self_tail(int dim, double h, const QuadratureConfig& quad);

// int_{C_i} int_{C_j} |x-y|^{-exponent}, exponent = N + 2s with s >= 0.
double pair_interaction(const CellMesh& mesh, int i, int j, double exponent, const QuadratureConfig& quad);

Eigen::VectorXd mass_matrix(const CellMesh& mesh);

// A = K - J + rho_N M with truncated interactions plus killing on the diagonal.
AssembledForm assemble_log_truncated(const CellMesh& mesh, const QuadratureConfig& quad,
                                     const AssemblyOptions& opts = {});
// A'_ij = -c_N p_ij, A'_ii = c_N sum_j p_ij + int_{C_i} (h + rho_N).
AssembledForm assemble_log_potential(const CellMesh& mesh, const QuadratureConfig& quad,
                                     const AssemblyOptions& opts = {});
AssembledForm assemble_frac(const CellMesh& mesh, double s, const QuadratureConfig& quad,
                            const AssemblyOptions& opts = {});
// Truncated interaction restricted to the mesh (zero row sums), mass set to M.
AssembledForm assemble_interior_truncated(const CellMesh& mesh, const QuadratureConfig& quad,
                                          const AssemblyOptions& opts = {});

// int_{C_i} h_{Omega_h}(x) dx for the discrete domain formed by the cells.
std::vector<double> cell_h_integrals(const CellMesh& mesh, const QuadratureConfig& quad,
                                     const AssemblyOptions& opts = {});
// int_{C_i} kappa_{Omega_h}(x) dx.
std::vector<double> cell_killing_integrals(const CellMesh& mesh, const QuadratureConfig& quad,
                                           const AssemblyOptions& opts = {});

void write_matrix_dump(const AssembledForm& f, std::ostream& os);

}  // namespace loglap
