#include "loglap/pointops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

#include "loglap/errors.hpp"
#include "loglap/special.hpp"

namespace loglap {

namespace {

double norm(const Point& p, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += p[k] * p[k];
    return std::sqrt(s);
}

double dot(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
}

Point along(const Point& x, const Point& th, double t, int dim) {
    Point y{};
    for (int k = 0; k < dim; ++k) y[k] = x[k] + t * th[k];
    return y;
}

// Positive t with |x + t*th| = r.
void sphere_crossings(const Point& x, const Point& th, double r, int dim, std::vector<double>& out) {
    const double b = dot(x, th, dim);
    const double c = dot(x, x, dim) - r * r;
    const double disc = b * b - c;
    if (disc <= 0.0) return;
    const double sq = std::sqrt(disc);
    for (double t : {-b - sq, -b + sq})
        if (t > 0.0) out.push_back(t);
}

std::vector<double> field_radii(const ScalarField& u) {
    std::vector<double> r = u.singular_radii;
    r.push_back(u.support_radius);
    return r;
}

std::vector<double> ray_breaks(const ScalarField& u, const Point& x, const Point& th, int dim, double lo, double hi) {
    std::vector<double> out, raw;
    Point mth{};
    for (int k = 0; k < dim; ++k) mth[k] = -th[k];
    for (double r : field_radii(u)) {
        sphere_crossings(x, th, r, dim, raw);
        sphere_crossings(x, mth, r, dim, raw);
    }
    for (double t : raw)
        if (t > lo && t < hi) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

// Angles in [0, pi) where rays from x are tangent to the field's spheres (2-D).
std::vector<double> field_kinks(const ScalarField& u, const Point& x) {
    std::vector<double> out;
    if (u.dim != 2) return out;
    const double d = std::hypot(x[0], x[1]);
    const double c = std::atan2(-x[1], -x[0]);
    for (double r : field_radii(u)) {
        if (d <= r) continue;
        const double w = std::asin(r / d);
        for (double a : {c - w, c + w}) {
            a = std::fmod(a, M_PI);
            if (a < 0.0) a += M_PI;
            out.push_back(a);
        }
    }
    return out;
}

// Radius below which the symmetric difference is replaced by its quadratic Taylor model.
double core_radius(const ScalarField& u, const Point& x) {
    if (u.smoothness == Smoothness::unknown) return 0.0;
    double h0 = 1e-3;
    const double d = norm(x, u.dim);
    for (double r : u.singular_radii) h0 = std::min(h0, 0.25 * std::abs(d - r));
    return h0;
}

struct RadialPieces {
    double near;  // int_0^1 (2u(x) - u(x+t) - u(x-t)) t^{-1-2s} dt
    double far;   // int_1^inf (u(x+t) + u(x-t)) t^{-1-2s} dt
};

RadialPieces radial_pieces(const ScalarField& u, const Point& x, const Point& th, double s, double u0,
                           double h0, double tol, int depth) {
    const int N = u.dim;
    auto w = [s](double t) { return s == 0.0 ? 1.0 / t : std::pow(t, -1.0 - 2.0 * s); };
    auto sym = [&](double t) { return 2.0 * u0 - u(along(x, th, t, N)) - u(along(x, th, -t, N)); };
    QuadratureConfig q{tol, depth};
    RadialPieces p{0.0, 0.0};
    if (h0 > 0.0) {
        const double a = sym(h0) / (h0 * h0);
        p.near = a * std::pow(h0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    }
    p.near += integrate([&](double t) { return sym(t) * w(t); }, h0, 1.0, q, ray_breaks(u, x, th, N, h0, 1.0));
    const double T = norm(x, N) + u.support_radius;
    if (T > 1.0)
        p.far = integrate([&](double t) { return (u(along(x, th, t, N)) + u(along(x, th, -t, N))) * w(t); }, 1.0, T,
                          q, ray_breaks(u, x, th, N, 1.0, T));
    return p;
}

double half_sphere_measure(int N) { return 0.5 * sphere_area(N); }

// c * int over the half sphere of near - far (the whole-space singular part).
double whole_space_part(const ScalarField& u, const Point& x, double s, const QuadratureConfig& quad, double scale) {
    const int N = u.dim;
    const double u0 = u(x);
    const double h0 = core_radius(u, x);
    const double inner = quad.abs_tol / (4.0 * scale * half_sphere_measure(N));
    auto f = [&](const Point& th) {
        RadialPieces p = radial_pieces(u, x, th, s, u0, h0, inner, quad.max_depth);
        return p.near - p.far;
    };
    return scale * sphere_integral(N, f, quad.abs_tol / (2.0 * scale), quad.max_depth, field_kinks(u, x), true);
}

double regional_part(const ScalarField& u, const Point& x, const Domain& region, const QuadratureConfig& quad,
                     double cN) {
    const int N = u.dim;
    const double u0 = u(x);
    const double h0 = core_radius(u, x);
    const double inner = quad.abs_tol / (8.0 * cN * half_sphere_measure(N));
    const double T = norm(x, N) + u.support_radius;
    auto f = [&](const Point& th) {
        Point mth{};
        for (int k = 0; k < N; ++k) mth[k] = -th[k];
        const auto ip = region.ray_intervals(x, th);
        const auto im = region.ray_intervals(x, mth);
        const double m = std::min(ip.front().b, im.front().b);
        auto sym = [&](double t) { return 2.0 * u0 - u(along(x, th, t, N)) - u(along(x, th, -t, N)); };
        QuadratureConfig q{inner, quad.max_depth};
        double v = 0.0;
        double c0 = std::min(h0, 0.5 * m);
        if (c0 > 0.0) v += 0.5 * sym(c0);
        v += integrate([&](double t) { return sym(t) / t; }, c0, m, q, ray_breaks(u, x, th, N, c0, m));
        for (int side = 0; side < 2; ++side) {
            const auto& iv = side == 0 ? ip : im;
            const Point& e = side == 0 ? th : mth;
            const double top = std::max(T, iv.back().b);
            if (top <= m) continue;
            std::vector<double> bp = ray_breaks(u, x, e, N, m, top);
            for (const RayInterval& r : iv) {
                if (r.a > m && r.a < top) bp.push_back(r.a);
                if (r.b > m && r.b < top) bp.push_back(r.b);
            }
            std::sort(bp.begin(), bp.end());
            auto g = [&](double t) {
                const double uy = u(along(x, e, t, N));
                bool in = false;
                for (const RayInterval& r : iv)
                    if (t >= r.a && t <= r.b) {
                        in = true;
                        break;
                    }
                return (in ? (u0 - uy) : -uy) / t;
            };
            v += integrate(g, m, top, q, bp);
        }
        return v;
    };
    std::vector<double> kinks = field_kinks(u, x);
    for (double a : region.kink_angles(x)) kinks.push_back(std::fmod(a, M_PI));
    return cN * sphere_integral(N, f, quad.abs_tol / (2.0 * cN), quad.max_depth, kinks, true);
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Fields

ScalarField make_bump(int dim) {
    ScalarField f;
    f.dim = dim;
    f.support_radius = 1.0;
    f.name = "bump";
    f.eval = [dim](const Point& x) {
        const double r2 = dot(x, x, dim);
        return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    return f;
}

ScalarField make_gauss(int dim, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("gauss needs sigma > 0");
    ScalarField f;
    f.dim = dim;
    f.support_radius = 40.0 * sigma;  // exp(-800) underflows to zero
    std::ostringstream os;
    os << "gauss:sigma=" << sigma;
    f.name = os.str();
    const double R = f.support_radius;
    f.eval = [dim, sigma, R](const Point& x) {
        const double r2 = dot(x, x, dim);
        return r2 < R * R ? std::exp(-0.5 * r2 / (sigma * sigma)) : 0.0;
    };
    return f;
}

ScalarField make_cosbell(int dim, double r) {
    if (!(r > 0.0)) throw DomainError("cosbell needs r > 0");
    ScalarField f;
    f.dim = dim;
    f.support_radius = r;
    f.smoothness = Smoothness::dini;
    f.singular_radii = {r};
    std::ostringstream os;
    os << "cosbell:r=" << r;
    f.name = os.str();
    f.eval = [dim, r](const Point& x) {
        const double d = norm(x, dim);
        return d < r ? 0.5 * (1.0 + std::cos(M_PI * d / r)) : 0.0;
    };
    return f;
}

ScalarField parse_field(const std::string& spec, int dim) {
    if (dim < 1 || dim > 3) throw ValidationError("field dimension must be 1, 2 or 3");
    auto value_of = [&](const std::string& key) {
        const std::string pre = key + "=";
        const std::size_t c = spec.find(':');
        if (c == std::string::npos || spec.compare(c + 1, pre.size(), pre) != 0)
            throw ParseError("expected '" + spec.substr(0, c) + ":" + pre + "<value>'", c == std::string::npos ? spec.size() : c + 1);
        const std::string v = spec.substr(c + 1 + pre.size());
        std::size_t used = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &used);
        } catch (const std::exception&) {
            throw ParseError("invalid number '" + v + "'", c + 1 + pre.size());
        }
        if (used != v.size()) throw ParseError("trailing characters in '" + v + "'", c + 1 + pre.size() + used);
        return out;
    };
    if (spec == "bump") return make_bump(dim);
    if (spec.rfind("gauss:", 0) == 0) return make_gauss(dim, value_of("sigma"));
    if (spec.rfind("cosbell:", 0) == 0) return make_cosbell(dim, value_of("r"));
    throw ParseError("unknown field '" + spec + "'", 0);
}

ScalarField linear_combination(double a, const ScalarField& u, double b, const ScalarField& v) {
    if (u.dim != v.dim) throw ValidationError("fields must share a dimension");
    ScalarField f;
    f.dim = u.dim;
    f.support_radius = std::max(u.support_radius, v.support_radius);
    f.smoothness = (u.smoothness == Smoothness::smooth && v.smoothness == Smoothness::smooth)
                       ? Smoothness::smooth
                       : (u.smoothness == Smoothness::unknown || v.smoothness == Smoothness::unknown ? Smoothness::unknown
                                                                                                     : Smoothness::dini);
    f.singular_radii = u.singular_radii;
    f.singular_radii.insert(f.singular_radii.end(), v.singular_radii.begin(), v.singular_radii.end());
    f.singular_radii.push_back(u.support_radius);
    f.singular_radii.push_back(v.support_radius);
    f.name = "combination";
    auto ue = u.eval, ve = v.eval;
    f.eval = [a, b, ue, ve](const Point& x) { return a * ue(x) + b * ve(x); };
    return f;
}

// ---------------------------------------------------------------------------------------------
// Pointwise operators

double loglap_at(const ScalarField& u, const Point& x, const QuadratureConfig& quad, const Domain* region) {
    quad.validate();
    const int N = u.dim;
    const Constants c = base_constants(N);
    const double u0 = u(x);
    if (region) {
        if (region->dim() != N) throw ValidationError("region and field dimensions differ");
        if (!region->contains(x)) throw DomainError("evaluation point is not inside the region");
        const double h = h_omega(*region, x, QuadratureConfig{quad.abs_tol / 4.0, quad.max_depth});
        return regional_part(u, x, *region, quad, c.c_N) + (h + c.rho_N) * u0;
    }
    return whole_space_part(u, x, 0.0, quad, c.c_N) + c.rho_N * u0;
}

double fraclap_at(const ScalarField& u, const Point& x, double s, const QuadratureConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    quad.validate();
    const int N = u.dim;
    const double cs = frac_constants(N, s).c_Ns;
    return whole_space_part(u, x, s, quad, cs) + u(x) * cs * sphere_area(N) / (2.0 * s);
}

double diff_quotient_at(const ScalarField& u, const Point& x, double s, const QuadratureConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1) for the difference quotient");
    quad.validate();
    const int N = u.dim;
    const double d = frac_constants(N, s).d_Ns;
    return whole_space_part(u, x, s, quad, d) + frac_log_ratio(N, s) * u(x);
}

// ---------------------------------------------------------------------------------------------
// Torus route

Point TorusGrid::coordinate(std::size_t idx) const {
    Point p{};
    const double h = box_side / points_per_side;
    for (int k = 0; k < dim; ++k) {
        p[k] = -0.5 * box_side + static_cast<double>(idx % points_per_side) * h;
        idx /= points_per_side;
    }
    return p;
}

TorusGrid sample_torus(const ScalarField& u, double L, int n) {
    if (!(L > 0.0)) throw DomainError("torus side must be positive");
    if (n < 8 || (n & (n - 1)) != 0) throw DomainError("points per side must be a power of two >= 8");
    TorusGrid g;
    g.dim = u.dim;
    g.box_side = L;
    g.points_per_side = n;
    std::size_t total = 1;
    for (int k = 0; k < g.dim; ++k) total *= n;
    g.samples.resize(total);
    for (std::size_t i = 0; i < total; ++i) g.samples[i] = u(g.coordinate(i));
    return g;
}

double lattice_log_constant(int N) {
    if (N < 1 || N > 3) throw DomainError("lattice constant available for N in {1, 2, 3}");
    if (N == 1) return -std::log(2.0 * M_PI);
    static std::once_flag once[2];
    static double cache[2];
    std::call_once(once[N - 2], [N] {
        const double I = sphere_area(N) * std::pow(2.0, 0.5 * N - 1.0) * std::exp(gamma_ln(0.5 * N)) *
                         (std::log(2.0) + digamma(0.5 * N)) / 2.0;
        auto at = [&](double D) {
            const int K = static_cast<int>(std::ceil(9.0 / D));
            double sum = 0.0;
            const int K2 = N == 3 ? K : 0;
            for (int a = -K2; a <= K2; ++a)
                for (int b = -K; b <= K; ++b)
                    for (int c = -K; c <= K; ++c) {
                        const double r2 = (static_cast<double>(a) * a + static_cast<double>(b) * b + static_cast<double>(c) * c) * D * D;
                        if (r2 == 0.0 || r2 > 81.0) continue;
                        sum += 0.5 * std::log(r2) * std::exp(-0.5 * r2);
                    }
            return I / std::pow(D, N) - sum - std::log(D);
        };
        const double c1 = at(0.1), c2 = at(0.2);
        cache[N - 2] = c1 + (c1 - c2) / 3.0;
    });
    return cache[N - 2];
}

double zero_mode_weight(int N, double L, ZeroMode mode) {
    if (N < 1 || N > 3) throw DomainError("torus dimension must be 1, 2 or 3");
    if (!(L > 0.0)) throw DomainError("torus side must be positive");
    const double D = 2.0 * M_PI / L;
    if (mode == ZeroMode::regularized) return 2.0 * (std::log(D) + lattice_log_constant(N));
    // mean of log|eta| over [0,1]^N = -1/N + (1/2) * mean of log(1 + |a|^2) over [0,1]^{N-1}
    double tail = 0.0;
    if (N >= 2) {
        const GaussRule& r = gauss_legendre(40);
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            const double a = 0.5 * (r.x[i] + 1.0);
            if (N == 2) {
                tail += 0.5 * r.w[i] * std::log(1.0 + a * a);
                continue;
            }
            for (std::size_t j = 0; j < r.x.size(); ++j) {
                const double b = 0.5 * (r.x[j] + 1.0);
                tail += 0.25 * r.w[i] * r.w[j] * std::log(1.0 + a * a + b * b);
            }
        }
    }
    const double mean_log = -1.0 / N + 0.5 * tail;
    return 2.0 * (std::log(0.5 * D) + mean_log);
}

TorusGrid loglap_fourier_grid(const TorusGrid& g, const FourierOptions& opts) {
    const int n = g.points_per_side;
    if (g.dim < 1 || g.dim > 3) throw DomainError("torus dimension must be 1, 2 or 3");
    if (n < 8 || (n & (n - 1)) != 0) throw DomainError("points per side must be a power of two >= 8");
    if (!(g.box_side > 0.0)) throw DomainError("torus side must be positive");
    std::size_t total = 1;
    for (int k = 0; k < g.dim; ++k) total *= n;
    if (g.samples.size() != total) throw ValidationError("torus sample count does not match n^N");

    std::vector<std::complex<double>> buf(total);
    for (std::size_t i = 0; i < total; ++i) buf[i] = g.samples[i];
    int dims[3] = {n, n, n};
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd, bwd;
    {
        static std::mutex planner;
        std::lock_guard<std::mutex> lock(planner);
        fwd = fftw_plan_dft(g.dim, dims, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(g.dim, dims, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    const double D = 2.0 * M_PI / g.box_side;
    const double m0 = zero_mode_weight(g.dim, g.box_side, opts.zero_mode);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t idx = i;
        double k2 = 0.0;
        for (int k = 0; k < g.dim; ++k) {
            int m = static_cast<int>(idx % n);
            idx /= n;
            if (m >= n / 2) m -= n;
            k2 += static_cast<double>(m) * m;
        }
        const double mult = k2 == 0.0 ? m0 : std::log(k2 * D * D);
        buf[i] *= mult / static_cast<double>(total);
    }
    fftw_execute(bwd);
    {
        static std::mutex planner;
        std::lock_guard<std::mutex> lock(planner);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    TorusGrid out = g;
    double scale = 1.0, resid = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        out.samples[i] = buf[i].real();
        scale = std::max(scale, std::abs(buf[i].real()));
        resid = std::max(resid, std::abs(buf[i].imag()));
    }
    out.imag_residue = resid / scale;

    if (g.dim == 1 && opts.zero_mode == ZeroMode::regularized && opts.moment_order > 0) {
        // even-moment terms of the log-singular Riemann sum; zeta'(-2j) for j = 1..4
        static const double zeta_prime[4] = {-0.030448457058393270780, 0.0079838114502686242807,
                                             -0.0058997591435159374506, 0.0083161619856022473595};
        const int order = std::min(opts.moment_order, 4);
        const double L = g.box_side, hx = L / n;
        for (int i = 0; i < n; ++i) {
            const double x = g.coordinate(i)[0];
            double corr = 0.0, fact = 1.0;
            for (int j = 1; j <= order; ++j) {
                fact *= (2.0 * j - 1.0) * (2.0 * j);
                double mom = 0.0;
                for (int m = 0; m < n; ++m) mom += std::pow(x - g.coordinate(m)[0], 2 * j) * g.samples[m];
                mom *= hx;
                corr += zeta_prime[j - 1] * std::pow(D, 2 * j) * ((j % 2) ? -1.0 : 1.0) * mom / fact;
            }
            out.samples[i] += 4.0 * corr / L;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Barrier

Barrier make_barrier(double R, double tau, int dim) {
    if (!(tau > 0.0 && tau < 0.5)) throw DomainError("barrier needs tau in (0, 1/2)");
    if (!(R > 0.0 && R < 0.5)) throw DomainError("barrier needs R in (0, 1/2)");
    if (dim < 1 || dim > 3) throw DomainError("barrier dimension must be 1, 2 or 3");
    Barrier b;
    b.dim = dim;
    b.R = R;
    b.tau = tau;
    b.delta_tau = std::exp(-(tau + 1.0));
    b.v = std::pow(tau + 1.0, -tau);
    b.d = tau / (b.delta_tau * std::pow(tau + 1.0, tau + 1.0));
    return b;
}

double g_value(const Barrier& b, double r) {
    if (!(r > 0.0)) throw DomainError("g needs r > 0");
    if (r <= b.delta_tau) return std::pow(-std::log(r), -b.tau);
    const double e = r - b.delta_tau;
    return (b.v + b.d * e) * std::exp(-e * e);
}

double g_derivative(const Barrier& b, double r) {
    if (!(r > 0.0)) throw DomainError("g needs r > 0");
    if (r <= b.delta_tau) return b.tau * std::pow(-std::log(r), -b.tau - 1.0) / r;
    const double e = r - b.delta_tau;
    return (b.d - 2.0 * e * (b.v + b.d * e)) * std::exp(-e * e);
}

double barrier_value(const Barrier& b, const Point& x) {
    const double r = norm(x, b.dim);
    return r <= b.R ? 0.0 : g_value(b, r - b.R);
}

ScalarField barrier_field(const Barrier& b) {
    ScalarField f;
    f.dim = b.dim;
    f.support_radius = b.R + b.delta_tau + 30.0;
    f.smoothness = Smoothness::dini;
    f.singular_radii = {b.R, b.R + b.delta_tau};
    f.name = "barrier";
    const double top = f.support_radius;
    f.eval = [b, top](const Point& x) {
        const double r = norm(x, b.dim);
        return r >= top ? 0.0 : barrier_value(b, x);
    };
    return f;
}

BarrierReport barrier_check(const Barrier& b, const std::vector<double>& rho_list, const QuadratureConfig& quad) {
    if (!(b.tau > 0.0 && b.tau < 0.5)) throw DomainError("barrier needs tau in (0, 1/2)");
    if (rho_list.empty()) throw DomainError("barrier check needs at least one rho");
    for (double r : rho_list)
        if (!(r > 0.0 && r < b.delta_tau)) throw DomainError("every rho must lie in (0, delta_tau)");
    const Constants c = base_constants(b.dim, quad);
    BarrierReport rep;
    rep.bound = (1.0 - 2.0 * b.tau) * c.kappa_N * c.c_N / (2.0 * (1.0 - b.tau));
    const ScalarField V = barrier_field(b);
    std::vector<double> rhos = rho_list;
    std::sort(rhos.begin(), rhos.end(), std::greater<double>());
    for (double rho : rhos) {
        const Point x{b.R + rho, 0.0, 0.0};
        const double L = loglap_at(V, x, quad);
        rep.rows.push_back({rho, L, L / std::pow(-std::log(rho), 1.0 - b.tau)});
    }
    rep.increasing = true;
    rep.positive = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        rep.positive = rep.positive && rep.rows[i].ratio > 0.0;
        if (i > 0) rep.increasing = rep.increasing && rep.rows[i].ratio > rep.rows[i - 1].ratio;
    }
    rep.reaches_bound = rep.rows.back().ratio >= rep.bound;
    return rep;
}

double ell(double t) {
    if (!(t > 0.0)) throw DomainError("ell needs t > 0");
    return t <= 0.5 ? -1.0 / std::log(t) : 1.0 / std::log(2.0);
}

}  // namespace loglap
