#include "loglap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>

#include "loglap/errors.hpp"

namespace loglap {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw ValidationError("abs_tol must be positive");
    if (max_depth < 1) throw ValidationError("max_depth must be at least 1");
    if (mc_samples < 0) throw ValidationError("mc_samples must be nonnegative");
}

namespace {

GaussRule build_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.w[i] = w;
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = w;
    }
    return r;
}

// Kronrod 15 nodes (nonnegative half) and weights, Gauss 7 weights on odd positions.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    int depth;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[7];
    double rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    return {a, b, rk * hl, std::abs((rk - rg) * hl), depth};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw DomainError("Gauss-Legendre order must be in [1, 512]");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<GaussRule>(build_gauss(n))).first;
    return *it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(c + hl * r.x[i]);
    return s * hl;
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth, const std::vector<double>& breakpoints) {
    QuadResult res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::priority_queue<Segment> heap;
    std::vector<Segment> done;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        Segment s = gk15(f, pts[i], pts[i + 1], 0);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    const int max_intervals = 200000;
    int count = static_cast<int>(heap.size());
    while (err > abs_tol && !heap.empty() && count < max_intervals) {
        Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (s.depth >= max_depth || mid <= s.a || mid >= s.b) {
            done.push_back(s);
            continue;
        }
        Segment l = gk15(f, s.a, mid, s.depth + 1);
        Segment r = gk15(f, mid, s.b, s.depth + 1);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // resum to avoid drift from incremental updates
    total = 0.0;
    err = 0.0;
    for (const Segment& s : done) total += s.value, err += s.error;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = sign * total;
    res.error = err;
    res.intervals = count;
    res.converged = err <= abs_tol;
    return res;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& q,
                 const std::vector<double>& breakpoints) {
    QuadResult r = integrate_gk(f, a, b, q.abs_tol, q.max_depth, breakpoints);
    if (!r.converged)
        throw QuadratureError("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                              "] did not reach tolerance " + std::to_string(q.abs_tol) +
                              " (estimate " + std::to_string(r.error) + ")");
    return r.value;
}

}  // namespace loglap
