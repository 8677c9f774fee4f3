#include "loglap/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "loglap/errors.hpp"
#include "loglap/special.hpp"

namespace loglap {

double SpectralResult::simplicity_margin() const {
    return eigenvalues.size() > 1 ? eigenvalues[1] - eigenvalues[0] : 0.0;
}

SpectralResult solve_gevp(const Eigen::MatrixXd& A, const Eigen::VectorXd& M, int k) {
    const Eigen::Index n = M.size();
    if (A.rows() != n || A.cols() != n) throw ValidationError("stiffness and mass sizes differ");
    if (n == 0) throw ValidationError("empty eigenproblem");
    if (k < 1 || k > n)
        throw ValidationError("requested " + std::to_string(k) + " eigenpairs but the problem has dimension " +
                              std::to_string(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(M[i] > 0.0)) throw ValidationError("mass entry " + std::to_string(i) + " is not positive");
    const Eigen::VectorXd is = M.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = is.asDiagonal() * A * is.asDiagonal();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");

    SpectralResult r;
    r.eigenvalues = es.eigenvalues().head(k);
    r.eigenvectors = is.asDiagonal() * es.eigenvectors().leftCols(k);
    for (int c = 0; c < k; ++c) {
        auto v = r.eigenvectors.col(c);
        double sign = 1.0;
        if (c == 0) {
            if (v.sum() < 0.0) sign = -1.0;
        } else {
            const double big = v.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < n; ++i)
                if (std::abs(v[i]) > 1e-8 * big) {
                    sign = v[i] > 0.0 ? 1.0 : -1.0;
                    break;
                }
        }
        v *= sign;
    }
    return r;
}

namespace {

AssembledForm assemble_log(const CellMesh& mesh, const QuadratureConfig& quad, LogRoute route,
                           const AssemblyOptions& opts) {
    return route == LogRoute::potential ? assemble_log_potential(mesh, quad, opts)
                                        : assemble_log_truncated(mesh, quad, opts);
}

SpectralResult solve_form(const AssembledForm& f, int k) {
    SpectralResult r = solve_gevp(f.stiffness, f.mass, k);
    r.domain = f.mesh.domain.describe();
    r.cells_per_unit = f.mesh.cells_per_unit;
    r.kind = form_kind_name(f.kind);
    return r;
}

double l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& M) {
    return std::sqrt((a - b).cwiseAbs2().dot(M));
}

}  // namespace

SpectralResult eig_log(const Domain& d, int cells_per_unit, int k, const QuadratureConfig& quad, LogRoute route,
                       const AssemblyOptions& opts) {
    const CellMesh mesh = build_mesh(d, cells_per_unit);
    if (k < 1 || k > static_cast<int>(mesh.size()))
        throw ValidationError("requested " + std::to_string(k) + " eigenpairs but the mesh has " +
                              std::to_string(mesh.size()) + " cells");
    return solve_form(assemble_log(mesh, quad, route, opts), k);
}

double lambda1_log(const Domain& d, int cells_per_unit, const QuadratureConfig& quad, LogRoute route,
                   const AssemblyOptions& opts) {
    return eig_log(d, cells_per_unit, 1, quad, route, opts).eigenvalues[0];
}

SDerivativeStudy s_derivative_study(const Domain& d, const std::vector<double>& s_list, int cells_per_unit,
                                    const QuadratureConfig& quad, const AssemblyOptions& opts) {
    if (s_list.empty()) throw ValidationError("s list is empty");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] > 0.0 && s_list[i] < 0.5)) throw DomainError("every s must lie in (0, 1/2)");
        if (i > 0 && !(s_list[i] < s_list[i - 1])) throw ValidationError("s list must be strictly descending");
    }
    const CellMesh mesh = build_mesh(d, cells_per_unit);
    const SpectralResult lg = solve_form(assemble_log_potential(mesh, quad, opts), 1);
    SDerivativeStudy out;
    out.lambda_log = lg.eigenvalues[0];
    for (double s : s_list) {
        const AssembledForm f = assemble_frac(mesh, s, quad, opts);
        const SpectralResult fr = solve_form(f, 1);
        SDerivativeRow row;
        row.s = s;
        row.lambda_s = fr.eigenvalues[0];
        row.quotient = (row.lambda_s - 1.0) / s;
        row.gap = std::abs(row.quotient - out.lambda_log);
        row.eig_distance = l2_distance(fr.eigenvectors.col(0), lg.eigenvectors.col(0), f.mass);
        out.rows.push_back(row);
    }
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        const auto &a = out.rows[i - 1], &b = out.rows[i];
        out.richardson.push_back((a.s * b.quotient - b.s * a.quotient) / (a.s - b.s));
    }
    return out;
}

FaberKrahnTable faber_krahn_compare(const std::vector<Domain>& domains, int cells_per_unit,
                                    const QuadratureConfig& quad, const AssemblyOptions& opts) {
    if (domains.empty()) throw ValidationError("no domains to compare");
    const double m0 = domains.front().measure();
    for (const Domain& d : domains) {
        if (d.dim() != domains.front().dim()) throw ValidationError("domains have different dimensions");
        if (std::abs(d.measure() - m0) > 1e-9 * std::max(1.0, m0))
            throw ValidationError("domain measures differ: " + std::to_string(m0) + " vs " +
                                  std::to_string(d.measure()));
    }
    FaberKrahnTable t;
    for (const Domain& d : domains) {
        const CellMesh mesh = build_mesh(d, cells_per_unit);
        FaberKrahnRow row;
        row.domain = d.describe();
        row.measure = d.measure();
        row.mesh_measure = mesh.measure();
        row.lambda1 = solve_form(assemble_log_potential(mesh, quad, opts), 1).eigenvalues[0];
        row.lambda1_rescaled = row.lambda1 + (2.0 / d.dim()) * std::log(row.mesh_measure / row.measure);
        row.is_ball = d.kind() == Domain::Kind::ball || d.kind() == Domain::Kind::interval;
        t.rows.push_back(row);
    }
    for (int i = 0; i < static_cast<int>(t.rows.size()); ++i) {
        if (t.minimizer < 0 || t.rows[i].lambda1 < t.rows[t.minimizer].lambda1) t.minimizer = i;
        if (t.minimizer_rescaled < 0 || t.rows[i].lambda1_rescaled < t.rows[t.minimizer_rescaled].lambda1_rescaled)
            t.minimizer_rescaled = i;
    }
    return t;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::marginal: return "marginal";
    }
    return "unknown";
}

double radial_dirichlet_eigenvalue(int N, int n) {
    if (N < 1 || N > 3) throw DomainError("dimension must be 1, 2 or 3");
    if (n < 4) throw DomainError("need at least 4 radial intervals");
    // nodes r_i = i h, i = 0..n-1 (u_n = 0); finite volumes with weights r^{N-1}
    const double h = 1.0 / n;
    auto flux = [&](double r) { return std::pow(r, N - 1); };
    Eigen::VectorXd w(n), diag(n), sub(n - 1);
    w[0] = std::pow(0.5 * h, N) / N;
    for (int i = 1; i < n; ++i) w[i] = flux(i * h) * h;
    for (int i = 0; i < n; ++i) {
        const double right = flux((i + 0.5) * h) / h;
        const double left = i > 0 ? flux((i - 0.5) * h) / h : 0.0;
        diag[i] = (left + right) / w[i];
        if (i + 1 < n) sub[i] = -right / std::sqrt(w[i] * w[i + 1]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

std::optional<double> classical_lambda1(const Domain& d) {
    switch (d.kind()) {
        case Domain::Kind::interval:
        case Domain::Kind::box: {
            double v = 0.0;
            for (int k = 0; k < d.dim(); ++k) {
                const double L = d.hi()[k] - d.lo()[k];
                v += (M_PI / L) * (M_PI / L);
            }
            return v;
        }
        case Domain::Kind::ball: {
            if (d.dim() == 1) return (M_PI / (2.0 * d.radius())) * (M_PI / (2.0 * d.radius()));
            const int n = 512;
            const double a = radial_dirichlet_eigenvalue(d.dim(), n);
            const double b = radial_dirichlet_eigenvalue(d.dim(), 2 * n);
            return (4.0 * b - a) / 3.0 / (d.radius() * d.radius());
        }
        case Domain::Kind::union_of: {
            std::optional<double> best;
            for (const Domain& p : d.parts()) {
                auto v = classical_lambda1(p);
                if (!v) return std::nullopt;
                if (!best || *v < *best) best = v;
            }
            return best;
        }
        case Domain::Kind::mask: return std::nullopt;
    }
    return std::nullopt;
}

MPVerdict mp_classify(const Domain& d, int cells_per_unit, const QuadratureConfig& quad,
                      std::optional<double> lambda1_classical, const AssemblyOptions& opts) {
    const CellMesh mesh = build_mesh(d, cells_per_unit);
    const int k = std::min<int>(2, static_cast<int>(mesh.size()));
    const SpectralResult r = solve_form(assemble_log_potential(mesh, quad, opts), k);
    const Constants c = base_constants(d.dim());
    const Thresholds th = thresholds(d.dim());

    MPVerdict v;
    v.lambda1 = r.eigenvalues[0];
    v.lambda2 = k > 1 ? r.eigenvalues[1] : v.lambda1;
    v.margin = std::abs(v.lambda1) / std::max(1.0, std::abs(v.lambda2));
    if (v.margin < 1e-3)
        v.verdict = Verdict::marginal;
    else
        v.verdict = v.lambda1 > 0.0 ? Verdict::holds : Verdict::fails;

    v.h_min = std::numeric_limits<double>::infinity();
    for (const Cell& cell : mesh.cells) v.h_min = std::min(v.h_min, h_omega(d, cell.center, quad) + c.rho_N);
    v.h_certificate = v.h_min >= 0.0;
    v.volume = d.measure();
    v.volume_threshold = th.volume_threshold;
    v.volume_certificate = v.volume <= v.volume_threshold;
    v.lambda1_classical = lambda1_classical;
    if (lambda1_classical) {
        if (!(*lambda1_classical > 0.0)) throw DomainError("classical eigenvalue must be positive");
        v.classical_certificate = std::log(*lambda1_classical) < 0.0;
    }
    const bool says_holds = v.h_certificate || v.volume_certificate;
    v.consistent = !(says_holds && v.verdict == Verdict::fails) && !(v.classical_certificate && v.verdict == Verdict::holds) &&
                   !(says_holds && v.classical_certificate);
    return v;
}

namespace {

// int over the cell of log(1/rho) with rho the distance to the boundary of the raster domain
double cell_log_weight(const Domain& dh, const Cell& cell, int N, double h, const QuadratureConfig& quad) {
    const double tol = std::max(quad.abs_tol, 1e-9) * std::pow(h, N);
    auto w = [&](const Point& x) {
        const double r = dh.boundary_distance(x).dist;
        return r > 0.0 ? -std::log(r) : 0.0;
    };
    const Point& c = cell.center;
    const double a = -0.5 * h, b = 0.5 * h;
    auto line = [&](Point p, int axis) {
        return integrate([&](double t) { p[axis] = c[axis] + t; return w(p); }, a, b,
                         QuadratureConfig{tol / h, quad.max_depth}, {0.0});
    };
    if (N == 1) return line(c, 0);
    if (N == 2)
        return integrate([&](double y) { return line(Point{c[0], c[1] + y, 0.0}, 0); }, a, b,
                         QuadratureConfig{tol, quad.max_depth}, {0.0});
    return integrate(
        [&](double z) {
            return integrate([&](double y) { return line(Point{c[0], c[1] + y, c[2] + z}, 0); }, a, b,
                             QuadratureConfig{tol / h, quad.max_depth}, {0.0});
        },
        a, b, QuadratureConfig{tol, quad.max_depth}, {0.0});
}

}  // namespace

HardyResult hardy_quotient(const Domain& d, int cells_per_unit, const QuadratureConfig& quad,
                           const AssemblyOptions& opts) {
    const CellMesh mesh = build_mesh(d, cells_per_unit);
    const AssembledForm B = assemble_interior_truncated(mesh, quad, opts);
    const Domain dh = mesh.as_domain();
    const std::size_t n = mesh.size();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) W(i, i) = cell_log_weight(dh, mesh.cells[i], mesh.dim, mesh.h, quad);
    Eigen::MatrixXd D = B.stiffness;
    D.diagonal() += B.mass;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(W, D, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw Error("Hardy eigenproblem did not converge");
    HardyResult r;
    r.quotient = es.eigenvalues()[n - 1];
    r.cells = static_cast<int>(n);
    return r;
}

}  // namespace loglap
