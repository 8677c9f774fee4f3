#include "loglap/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <thread>

#include "loglap/errors.hpp"
#include "loglap/special.hpp"

namespace loglap {

const char* form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::log_truncated: return "log_truncated";
        case FormKind::log_potential: return "log_potential";
        case FormKind::frac: return "frac";
        case FormKind::interior_truncated: return "interior_truncated";
    }
    return "unknown";
}

namespace {

struct Parts {
    double full = 0.0, trunc = 0.0, tail = 0.0;
};

Parts& operator+=(Parts& a, const Parts& b) {
    a.full += b.full;
    a.trunc += b.trunc;
    a.tail += b.tail;
    return a;
}

Parts scaled(const Parts& p, double w) { return {p.full * w, p.trunc * w, p.tail * w}; }

// int_ta^tb t^{p-1} dt
double power_integral(double ta, double tb, double p) {
    if (p == 0.0) return std::log(tb / ta);
    if (ta == 0.0) return std::pow(tb, p) / p;
    return std::pow(ta, p) * std::expm1(p * std::log(tb / ta)) / p;
}

// int_ta^tb (sum_m c_m t^m) t^{-1-2s} dt
double poly_integral(const double* c, int deg, double ta, double tb, double s) {
    if (tb <= ta) return 0.0;
    if (ta > 0.0 && tb < 2.0 * ta) {
        const GaussRule& r = gauss_legendre(10);
        const double mid = 0.5 * (ta + tb), hl = 0.5 * (tb - ta);
        double acc = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double t = mid + hl * r.x[i];
            double v = c[deg];
            for (int m = deg - 1; m >= 0; --m) v = v * t + c[m];
            acc += r.w[i] * v * std::pow(t, -1.0 - 2.0 * s);
        }
        return acc * hl;
    }
    double acc = 0.0;
    for (int m = 0; m <= deg; ++m)
        if (c[m] != 0.0) acc += c[m] * power_integral(ta, tb, m - 2.0 * s);
    return acc;
}

// Ray parts of w_o(t th) t^{-1-2s} for an offset o != 0.
Parts ray_offset(const Point& th, int N, const Index& o, double h, double s) {
    double T0 = 0.0, T1 = std::numeric_limits<double>::infinity();
    for (int d = 0; d < N; ++d) {
        if (std::abs(th[d]) < 1e-15) {
            if (o[d] != 0) return {};
            continue;
        }
        double a = (o[d] - 1) * h / th[d], b = (o[d] + 1) * h / th[d];
        if (a > b) std::swap(a, b);
        T0 = std::max(T0, a);
        T1 = std::min(T1, b);
    }
    if (!(T1 > T0)) return {};
    double bp[8];
    int nb = 0;
    bp[nb++] = T0;
    for (int d = 0; d < N; ++d)
        if (std::abs(th[d]) >= 1e-15) {
            const double t = o[d] * h / th[d];
            if (t > T0 && t < T1) bp[nb++] = t;
        }
    if (1.0 > T0 && 1.0 < T1) bp[nb++] = 1.0;
    bp[nb++] = T1;
    std::sort(bp, bp + nb);
    Parts out;
    for (int k = 0; k + 1 < nb; ++k) {
        const double ta = bp[k], tb = bp[k + 1];
        if (!(tb > ta)) continue;
        const double tm = 0.5 * (ta + tb);
        double c[4] = {1.0, 0.0, 0.0, 0.0};
        int deg = 0;
        for (int d = 0; d < N; ++d) {
            double alpha, beta;
            if (std::abs(th[d]) < 1e-15) {
                alpha = h;
                beta = 0.0;
            } else if (tm * th[d] < o[d] * h) {
                alpha = h * (1 - o[d]);
                beta = th[d];
            } else {
                alpha = h * (1 + o[d]);
                beta = -th[d];
            }
            for (int m = deg + 1; m >= 0; --m) c[m] = alpha * c[m] + (m > 0 ? beta * c[m - 1] : 0.0);
            ++deg;
        }
        const double v = poly_integral(c, deg, ta, tb, s);
        out.full += v;
        (tb <= 1.0 ? out.trunc : out.tail) += v;
    }
    return out;
}

// Coefficients of w_0(t th) = prod_d (h - |th_d| t) for t < tmax.
int self_poly(const Point& th, int N, double h, double* a, double& tmax) {
    double m = 0.0;
    for (int d = 0; d < N; ++d) m = std::max(m, std::abs(th[d]));
    tmax = h / m;
    a[0] = 1.0;
    a[1] = a[2] = a[3] = 0.0;
    for (int d = 0; d < N; ++d)
        for (int k = d + 1; k >= 0; --k) a[k] = h * a[k] - (k > 0 ? std::abs(th[d]) * a[k - 1] : 0.0);
    return N;
}

enum class SelfKind { log, frac, tail };

double ray_self(const Point& th, int N, double h, double s, SelfKind kind) {
    double a[4], tmax;
    const int deg = self_poly(th, N, h, a, tmax);
    const double hN = a[0];
    if (kind == SelfKind::frac) {
        double v = hN * std::pow(tmax, -2.0 * s) / (2.0 * s);
        for (int m = 1; m <= deg; ++m) v -= a[m] * std::pow(tmax, m - 2.0 * s) / (m - 2.0 * s);
        return v;
    }
    double tail = 0.0;
    if (tmax > 1.0) {
        tail = a[0] * std::log(tmax);
        for (int m = 1; m <= deg; ++m) tail += a[m] * (std::pow(tmax, m) - 1.0) / m;
    }
    if (kind == SelfKind::tail) return tail;
    const double top = std::min(1.0, tmax);
    double v = 0.0;
    for (int m = 1; m <= deg; ++m) v -= a[m] * std::pow(top, m) / m;
    if (tmax < 1.0) v += hN * std::log(1.0 / tmax);
    return v - tail;
}

void push_angle(std::vector<double>& v, double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    v.push_back(a);
}

// Angles where the 2-D ray integrand for offset o has kinks.
std::vector<double> kinks_2d(const Index& o, double h) {
    std::vector<double> out{0.0, 0.5 * M_PI, M_PI, 1.5 * M_PI};
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            const double x = (o[0] + a) * h, y = (o[1] + b) * h;
            if (x != 0.0 || y != 0.0) push_angle(out, std::atan2(y, x));
        }
    for (int a = -1; a <= 1; ++a) {
        for (int axis = 0; axis < 2; ++axis) {
            const double c = (o[axis] + a) * h;
            if (std::abs(c) >= 1.0) continue;
            const double q = std::sqrt(1.0 - c * c);
            if (axis == 0) {
                push_angle(out, std::atan2(q, c));
                push_angle(out, std::atan2(-q, c));
            } else {
                push_angle(out, std::atan2(c, q));
                push_angle(out, std::atan2(c, -q));
            }
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double v : out)
        if (uniq.empty() || v - uniq.back() > 1e-14) uniq.push_back(v);
    return uniq;
}

int angular_order(const QuadratureConfig& q) { return q.abs_tol < 1e-11 ? 40 : 24; }

template <class F>
void integrate_circle(const std::vector<double>& kinks, int n, F&& f) {
    const GaussRule& r = gauss_legendre(n);
    for (std::size_t k = 0; k < kinks.size(); ++k) {
        const double a = kinks[k];
        const double b = k + 1 < kinks.size() ? kinks[k + 1] : kinks[0] + 2.0 * M_PI;
        const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
        for (int i = 0; i < n; ++i) {
            const double t = mid + hl * r.x[i];
            f(Point{std::cos(t), std::sin(t), 0.0}, r.w[i] * hl);
        }
    }
}

Parts offset_parts(int N, double h, const Index& o, double s, const QuadratureConfig& quad) {
    if (N == 1) {
        Parts p = ray_offset({1, 0, 0}, 1, o, h, s);
        p += ray_offset({-1, 0, 0}, 1, o, h, s);
        return p;
    }
    if (N == 2) {
        Parts acc;
        integrate_circle(kinks_2d(o, h), angular_order(quad),
                         [&](const Point& th, double w) { acc += scaled(ray_offset(th, 2, o, h, s), w); });
        return acc;
    }
    const double tol = quad.abs_tol * std::pow(h, 3);
    Parts p;
    p.full = sphere_integral(3, [&](const Point& th) { return ray_offset(th, 3, o, h, s).full; }, tol, quad.max_depth);
    p.trunc = sphere_integral(3, [&](const Point& th) { return ray_offset(th, 3, o, h, s).trunc; }, tol, quad.max_depth);
    p.tail = p.full - p.trunc;
    return p;
}

double self_integral(int N, double h, double s, SelfKind kind, const QuadratureConfig& quad) {
    if (N == 1) return ray_self({1, 0, 0}, 1, h, s, kind) + ray_self({-1, 0, 0}, 1, h, s, kind);
    if (N == 2) {
        double acc = 0.0;
        integrate_circle(kinks_2d({0, 0, 0}, h), angular_order(quad),
                         [&](const Point& th, double w) { acc += w * ray_self(th, 2, h, s, kind); });
        return acc;
    }
    return sphere_integral(3, [&](const Point& th) { return ray_self(th, 3, h, s, kind); },
                           quad.abs_tol * std::pow(h, 3), quad.max_depth);
}

Index canonical(const Index& o, int N) {
    Index c{0, 0, 0};
    for (int d = 0; d < N; ++d) c[d] = std::abs(o[d]);
    std::sort(c.begin(), c.begin() + N);
    return c;
}

int resolve_threads(const AssemblyOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Offset integrals keyed by canonical offset; filled in a fixed order, so the values do not
// depend on the worker count.
class PairTable {
public:
    PairTable(int dim, double h, double s, const QuadratureConfig& quad) : dim_(dim), h_(h), s_(s), quad_(quad) {}

    void prepare(const std::vector<Index>& offsets, int threads) {
        std::vector<Index> keys;
        for (const Index& o : offsets) {
            Index c = canonical(o, dim_);
            if (c == Index{0, 0, 0}) continue;
            if (!table_.count(c)) keys.push_back(c);
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        std::vector<Parts> vals(keys.size());
        auto work = [&](int t, int T) {
            for (std::size_t i = t; i < keys.size(); i += T) vals[i] = offset_parts(dim_, h_, keys[i], s_, quad_);
        };
        const int T = std::max(1, std::min<int>(threads, static_cast<int>(keys.size())));
        if (T == 1) {
            work(0, 1);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < T; ++t) pool.emplace_back(work, t, T);
            for (auto& th : pool) th.join();
        }
        for (std::size_t i = 0; i < keys.size(); ++i) table_.emplace(keys[i], vals[i]);
    }

    const Parts& at(const Index& o) const {
        auto it = table_.find(canonical(o, dim_));
        if (it == table_.end()) throw Error("pair table lookup for an offset that was not prepared");
        return it->second;
    }

private:
    int dim_;
    double h_, s_;
    QuadratureConfig quad_;
    std::map<Index, Parts> table_;
};

Index diff(const Index& a, const Index& b) { return {b[0] - a[0], b[1] - a[1], b[2] - a[2]}; }

std::vector<Index> mesh_offsets(const CellMesh& m) {
    std::vector<Index> out;
    Index ext{0, 0, 0};
    for (int d = 0; d < m.dim; ++d) ext[d] = m.counts[d] - 1;
    // all canonical offsets realized by some pair; enumerating the lattice box is cheap
    for (int c = 0; c <= ext[2]; ++c)
        for (int b = 0; b <= ext[1]; ++b)
            for (int a = 0; a <= ext[0]; ++a) out.push_back({a, b, c});
    return out;
}

// Nonzero offsets with truncated interaction, i.e. cells closer than distance 1.
std::vector<Index> reach_offsets(int N, double h) {
    const int R = 1 + static_cast<int>(std::ceil(1.0 / h));
    std::vector<Index> out;
    const int R1 = N > 1 ? R : 0, R2 = N > 2 ? R : 0;
    for (int c = -R2; c <= R2; ++c)
        for (int b = -R1; b <= R1; ++b)
            for (int a = -R; a <= R; ++a) {
                if (a == 0 && b == 0 && c == 0) continue;
                double g = 0.0;
                for (int v : {a, b, c}) {
                    const double e = std::max(0, std::abs(v) - 1) * h;
                    g += e * e;
                }
                if (g < 1.0) out.push_back({a, b, c});
            }
    return out;
}

void require_mesh(const CellMesh& m) {
    if (m.cells.empty()) throw ValidationError("mesh is empty");
}

AssembledForm make_form(const CellMesh& mesh, FormKind kind, double s, const QuadratureConfig& quad) {
    AssembledForm f;
    f.mesh = mesh;
    f.kind = kind;
    f.s = s;
    f.quad = quad;
    f.mass = mass_matrix(mesh);
    f.stiffness = Eigen::MatrixXd::Zero(mesh.size(), mesh.size());
    return f;
}

std::vector<double> killing_sums(const CellMesh& mesh, const PairTable& table, const std::vector<Index>& reach) {
    std::vector<double> out(mesh.size(), 0.0);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const Index& a = mesh.cells[i].index;
        double acc = 0.0;
        for (const Index& o : reach)
            if (mesh.cell_at({a[0] + o[0], a[1] + o[1], a[2] + o[2]}) < 0) acc += table.at(o).trunc;
        out[i] = acc;
    }
    return out;
}

}  // namespace

double lattice_pair_integral(int dim, double h, const Index& offset, double s, PairPart part,
                             const QuadratureConfig& quad) {
    if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
    if (!(h > 0.0)) throw DomainError("cell side must be positive");
    if (s < 0.0) throw DomainError("exponent must be at least N");
    bool zero = true, touching = true;
    for (int d = 0; d < dim; ++d) {
        zero = zero && offset[d] == 0;
        touching = touching && std::abs(offset[d]) <= 1;
    }
    if (zero) throw DomainError("identical cells: the self interaction is handled by the row-sum identity");
    if (touching && s >= 0.5) throw DomainError("touching cells have a divergent interaction for s >= 1/2");
    const Parts p = offset_parts(dim, h, offset, s, quad);
    return part == PairPart::full ? p.full : (part == PairPart::truncated ? p.trunc : p.tail);
}

double cell_self_log(int dim, double h, const QuadratureConfig& quad) {
    if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
    return self_integral(dim, h, 0.0, SelfKind::log, quad);
}

double cell_self_frac(int dim, double h, double s, const QuadratureConfig& quad) {
    if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
    if (!(s > 0.0 && s < 0.5)) throw DomainError("piecewise constants need 0 < s < 1/2");
    return self_integral(dim, h, s, SelfKind::frac, quad);
}

double cell_self_tail(int dim, double h, const QuadratureConfig& quad) {
    if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
    return self_integral(dim, h, 0.0, SelfKind::tail, quad);
}

double pair_interaction(const CellMesh& mesh, int i, int j, double exponent, const QuadratureConfig& quad) {
    const int n = static_cast<int>(mesh.size());
    if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("cell index out of range");
    if (i == j) throw DomainError("identical cells: the self interaction is handled by the row-sum identity");
    const double s = 0.5 * (exponent - mesh.dim);
    return lattice_pair_integral(mesh.dim, mesh.h, diff(mesh.cells[i].index, mesh.cells[j].index), s, PairPart::full,
                                 quad);
}

Eigen::VectorXd mass_matrix(const CellMesh& mesh) {
    require_mesh(mesh);
    Eigen::VectorXd m(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) m[i] = mesh.volumes[i];
    return m;
}

AssembledForm assemble_log_truncated(const CellMesh& mesh, const QuadratureConfig& quad, const AssemblyOptions& opts) {
    require_mesh(mesh);
    quad.validate();
    const int N = mesh.dim;
    const Constants c = base_constants(N);
    PairTable table(N, mesh.h, 0.0, quad);
    const auto reach = reach_offsets(N, mesh.h);
    auto offs = mesh_offsets(mesh);
    offs.insert(offs.end(), reach.begin(), reach.end());
    table.prepare(offs, resolve_threads(opts));
    const std::vector<double> kill = killing_sums(mesh, table, reach);
    const double self_tail = cell_self_tail(N, mesh.h, quad);

    AssembledForm f = make_form(mesh, FormKind::log_truncated, 0.0, quad);
    Eigen::MatrixXd& A = f.stiffness;
    const std::size_t n = mesh.size();
    std::vector<double> rowsum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Parts& p = table.at(diff(mesh.cells[i].index, mesh.cells[j].index));
            const double k = c.c_N * p.trunc, jc = c.c_N * p.tail;
            A(i, j) = A(j, i) = -k - jc;
            rowsum[i] += k;
            rowsum[j] += k;
        }
    for (std::size_t i = 0; i < n; ++i)
        A(i, i) = rowsum[i] + c.c_N * kill[i] - c.c_N * self_tail + c.rho_N * f.mass[i];
    return f;
}

AssembledForm assemble_log_potential(const CellMesh& mesh, const QuadratureConfig& quad, const AssemblyOptions& opts) {
    require_mesh(mesh);
    quad.validate();
    const int N = mesh.dim;
    const Constants c = base_constants(N);
    PairTable table(N, mesh.h, 0.0, quad);
    table.prepare(mesh_offsets(mesh), resolve_threads(opts));
    const double H = cell_self_log(N, mesh.h, quad);

    AssembledForm f = make_form(mesh, FormKind::log_potential, 0.0, quad);
    Eigen::MatrixXd& A = f.stiffness;
    const std::size_t n = mesh.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            A(i, j) = A(j, i) = -c.c_N * table.at(diff(mesh.cells[i].index, mesh.cells[j].index)).full;
    // c_N sum_j p_ij + int_{C_i} h collapses to c_N H by the lattice identity
    for (std::size_t i = 0; i < n; ++i) A(i, i) = c.c_N * H + c.rho_N * f.mass[i];
    return f;
}

AssembledForm assemble_frac(const CellMesh& mesh, double s, const QuadratureConfig& quad, const AssemblyOptions& opts) {
    require_mesh(mesh);
    quad.validate();
    if (!(s > 0.0 && s < 0.5)) throw DomainError("fractional form on piecewise constants needs 0 < s < 1/2");
    const int N = mesh.dim;
    const double cs = frac_constants(N, s).c_Ns;
    PairTable table(N, mesh.h, s, quad);
    table.prepare(mesh_offsets(mesh), resolve_threads(opts));
    const double T = cell_self_frac(N, mesh.h, s, quad);

    AssembledForm f = make_form(mesh, FormKind::frac, s, quad);
    Eigen::MatrixXd& A = f.stiffness;
    const std::size_t n = mesh.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            A(i, j) = A(j, i) = -cs * table.at(diff(mesh.cells[i].index, mesh.cells[j].index)).full;
    for (std::size_t i = 0; i < n; ++i) A(i, i) = cs * T;
    return f;
}

AssembledForm assemble_interior_truncated(const CellMesh& mesh, const QuadratureConfig& quad,
                                          const AssemblyOptions& opts) {
    require_mesh(mesh);
    quad.validate();
    const int N = mesh.dim;
    const double cN = base_constants(N).c_N;
    PairTable table(N, mesh.h, 0.0, quad);
    table.prepare(mesh_offsets(mesh), resolve_threads(opts));
    AssembledForm f = make_form(mesh, FormKind::interior_truncated, 0.0, quad);
    Eigen::MatrixXd& A = f.stiffness;
    const std::size_t n = mesh.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = cN * table.at(diff(mesh.cells[i].index, mesh.cells[j].index)).trunc;
            A(i, j) = A(j, i) = -k;
            A(i, i) += k;
            A(j, j) += k;
        }
    return f;
}

std::vector<double> cell_h_integrals(const CellMesh& mesh, const QuadratureConfig& quad, const AssemblyOptions& opts) {
    require_mesh(mesh);
    const int N = mesh.dim;
    const double cN = base_constants(N).c_N;
    PairTable table(N, mesh.h, 0.0, quad);
    table.prepare(mesh_offsets(mesh), resolve_threads(opts));
    const double H = cell_self_log(N, mesh.h, quad);
    std::vector<double> out(mesh.size(), cN * H);
    for (std::size_t i = 0; i < mesh.size(); ++i)
        for (std::size_t j = 0; j < mesh.size(); ++j)
            if (i != j) out[i] -= cN * table.at(diff(mesh.cells[i].index, mesh.cells[j].index)).full;
    return out;
}

std::vector<double> cell_killing_integrals(const CellMesh& mesh, const QuadratureConfig& quad,
                                           const AssemblyOptions& opts) {
    require_mesh(mesh);
    const int N = mesh.dim;
    const double cN = base_constants(N).c_N;
    PairTable table(N, mesh.h, 0.0, quad);
    const auto reach = reach_offsets(N, mesh.h);
    table.prepare(reach, resolve_threads(opts));
    std::vector<double> out = killing_sums(mesh, table, reach);
    for (double& v : out) v *= cN;
    return out;
}

void write_matrix_dump(const AssembledForm& f, std::ostream& os) {
    os << "# kind=" << form_kind_name(f.kind) << " N=" << f.mesh.dim << " cells=" << f.mesh.size()
       << " cells_per_unit=" << f.mesh.cells_per_unit << " s=" << f.s << " abs_tol=" << f.quad.abs_tol
       << " max_depth=" << f.quad.max_depth << "\n";
    os << std::setprecision(17);
    const Eigen::Index n = f.stiffness.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) os << (j ? "," : "") << f.stiffness(i, j);
        os << "\n";
    }
    os << "# mass\n";
    for (Eigen::Index i = 0; i < n; ++i) os << (i ? "," : "") << f.mass[i];
    os << "\n";
}

}  // namespace loglap
