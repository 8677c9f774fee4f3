#include "loglap/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "loglap/errors.hpp"
#include "loglap/spectral.hpp"

namespace loglap {

PoissonSolution solve_poisson(const AssembledForm& form, const Eigen::VectorXd& rhs) {
    const Eigen::Index n = form.mass.size();
    if (rhs.size() != n) throw ValidationError("right-hand side has the wrong length");
    PoissonSolution sol;
    sol.mesh = form.mesh;
    sol.rhs = rhs;
    sol.lambda1 = solve_gevp(form.stiffness, form.mass, 1).eigenvalues[0];
    sol.geometry_certified = form.mesh.domain.kind() != Domain::Kind::mask;
    if (!(sol.lambda1 > 0.0))
        throw NotCoerciveError("form not coercive on this domain (lambda_1 = " + std::to_string(sol.lambda1) + ")");
    Eigen::LLT<Eigen::MatrixXd> llt(form.stiffness);
    if (llt.info() != Eigen::Success) throw NotCoerciveError("form not coercive on this domain (Cholesky failed)");
    const Eigen::VectorXd b = form.mass.cwiseProduct(rhs);
    Eigen::VectorXd u = llt.solve(b);
    u += llt.solve(b - form.stiffness * u);
    sol.solution = u;
    const double nb = b.norm();
    sol.residual = nb > 0.0 ? (form.stiffness * u - b).norm() / nb : (form.stiffness * u).norm();
    sol.valid = true;
    return sol;
}

PoissonSolution solve_poisson(const Domain& d, const std::function<double(const Point&)>& f, int cells_per_unit,
                              const QuadratureConfig& quad, const AssemblyOptions& opts) {
    const CellMesh mesh = build_mesh(d, cells_per_unit);
    const AssembledForm form = assemble_log_potential(mesh, quad, opts);
    Eigen::VectorXd rhs(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) rhs[i] = f(mesh.cells[i].center);
    return solve_poisson(form, rhs);
}

std::vector<DecayRow> decay_profile(const PoissonSolution& sol, double tau, const std::vector<double>& shells) {
    if (!(tau > 0.0 && tau < 0.5)) throw DomainError("tau must lie in (0, 1/2)");
    if (shells.empty()) throw ValidationError("no shells given");
    const double finest = 2.0 * sol.mesh.h;
    for (std::size_t k = 0; k < shells.size(); ++k) {
        if (!(shells[k] > 0.0)) throw ValidationError("shell radii must be positive");
        if (k > 0 && !(shells[k] < shells[k - 1])) throw ValidationError("shells must be decreasing");
        if (shells[k] < finest * (1.0 - 1e-12))
            throw ValidationError("shell t = " + std::to_string(shells[k]) +
                                  " is below the mesh resolution; finest admissible t is " + std::to_string(finest));
    }
    std::vector<double> rho(sol.mesh.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = sol.mesh.domain.boundary_distance(sol.mesh.cells[i].center).dist;
    std::vector<DecayRow> out;
    for (double t : shells) {
        DecayRow row{t, 0.0, 0.0, 0};
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho[i] >= t && rho[i] < 2.0 * t) {
                row.sup_abs = std::max(row.sup_abs, std::abs(sol.solution[i]));
                ++row.cells;
            }
        if (row.cells == 0) throw ValidationError("shell t = " + std::to_string(t) + " contains no cell centers");
        row.weighted = row.sup_abs * std::pow(-std::log(t), tau);
        out.push_back(row);
    }
    return out;
}

const char* decay_verdict_name(DecayVerdict v) { return v == DecayVerdict::bounded ? "bounded" : "inconclusive"; }

DecayVerdict decay_verdict(const std::vector<DecayRow>& profile) {
    if (profile.size() < 3) throw ValidationError("decay verdict needs at least 3 shells");
    std::vector<double> prev;
    for (std::size_t k = 0; k + 1 < profile.size(); ++k) prev.push_back(profile[k].weighted);
    std::sort(prev.begin(), prev.end());
    const std::size_t m = prev.size();
    const double median = m % 2 ? prev[m / 2] : 0.5 * (prev[m / 2 - 1] + prev[m / 2]);
    return profile.back().weighted <= 1.1 * median ? DecayVerdict::bounded : DecayVerdict::inconclusive;
}

}  // namespace loglap
