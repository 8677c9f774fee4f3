// Acceptance suite: one [PASS]/[FAIL] line per criterion. With an argument N only
// criterion N runs; the exit code is nonzero when any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loglap/assembly.hpp"
#include "loglap/geometry.hpp"
#include "loglap/pointops.hpp"
#include "loglap/poisson.hpp"
#include "loglap/special.hpp"
#include "loglap/spectral.hpp"

using namespace loglap;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " failed: " << what << ";";
        }
    }
};

const double kGamma = 0.57721566490153286061;

void c1_constants(Outcome& o) {
    const double pi = M_PI, g = kGamma;
    const double rNB[4] = {std::exp(-g - pi / 2) / (8 * pi), std::exp(-g) / (4 * pi), std::exp(-g + pi / 2) / (8 * pi),
                           std::exp(-g) / pi};
    const double rN[4] = {std::exp(-g), 2 * std::exp(-g), std::exp(1 - g), 2 * std::exp(0.5 - g)};
    double worst = 0.0;
    for (int N = 1; N <= 4; ++N) {
        const Thresholds t = thresholds(N);
        worst = std::max({worst, std::abs(t.r_N - rN[N - 1]), std::abs(t.r_NB - rNB[N - 1])});
    }
    o.require(worst <= 1e-10, "thresholds table");
    double rho_worst = 0.0;
    for (int N = 1; N <= 6; ++N) {
        // harmonic-sum forms: odd N, even N
        double ref;
        if (N % 2) {
            ref = -2 * g;
            for (int k = 1; k <= (N - 1) / 2; ++k) ref += 2.0 / (2 * k - 1);
        } else {
            ref = 2 * (std::log(2.0) - g);
            for (int k = 1; k <= (N - 2) / 2; ++k) ref += 1.0 / k;
        }
        rho_worst = std::max(rho_worst, std::abs(base_constants(N).rho_N - ref));
    }
    o.require(rho_worst <= 1e-10, "rho_N closed forms");
    o.detail << " max|r err|=" << worst << " max|rho err|=" << rho_worst;
}

void c2_kappa(Outcome& o) {
    double worst = 0.0;
    for (int N = 1; N <= 3; ++N) {
        const Constants c = base_constants(N);
        worst = std::max(worst, std::abs(c.c_N * kappa_N(N) - 1.0));
    }
    o.require(worst <= 1e-8, "c_N kappa_N = 1");
    o.detail << " max|c_N kappa_N - 1|=" << worst;
}

void c3_geometry(Outcome& o) {
    QuadratureConfig q;
    double worst = 0.0;
    for (int N = 1; N <= 2; ++N)
        for (double r : {0.5, 2.0}) worst = std::max(worst, std::abs(h_omega(Domain::ball(N, r), {}, q) - 2 * std::log(1 / r)));
    o.require(worst <= 1e-5, "h_Omega on balls");
    const double k = kappa_omega(Domain::interval(0, 1), {0.1, 0, 0}, q);
    o.require(std::abs(k - 2.4079456) <= 1e-6, "kappa_Omega((0,1), 0.1)");
    o.detail << " max|h err|=" << worst << " kappa=" << k;
}

void c4_representation(Outcome& o) {
    QuadratureConfig q;
    const ScalarField u = make_bump(1);
    const TorusGrid g = loglap_fourier_grid(sample_torus(u, 8.0, 256));
    double worst = 0.0;
    bool decreasing = true;
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.5}) {
        const double pt = loglap_at(u, {x, 0, 0}, q);
        const std::size_t idx = static_cast<std::size_t>(std::lround((x + 4.0) * 32.0));
        worst = std::max(worst, std::abs(pt - g.samples[idx]));
        double prev = INFINITY;
        for (double s : {1e-1, 1e-2, 1e-3}) {
            const double d = std::abs(diff_quotient_at(u, {x, 0, 0}, s, q) - pt);
            decreasing = decreasing && d < prev;
            prev = d;
        }
    }
    o.require(worst <= 1e-3, "pointwise vs Fourier");
    o.require(decreasing, "difference quotient convergence");
    o.detail << " max|pointwise - fourier|=" << worst;
}

void c5_routes(Outcome& o) {
    QuadratureConfig q;
    double worst = 0.0;
    for (const auto& [d, cpu] : std::vector<std::pair<Domain, int>>{{Domain::interval(0, 1), 32}, {Domain::ball(2, 1.0), 6}}) {
        const CellMesh m = build_mesh(d, cpu);
        const AssembledForm a = assemble_log_truncated(m, q), b = assemble_log_potential(m, q);
        worst = std::max(worst, (a.stiffness - b.stiffness).cwiseAbs().maxCoeff() / b.stiffness.cwiseAbs().maxCoeff());
    }
    o.require(worst <= 1e-6, "route equality");
    o.detail << " max relative entry gap=" << worst;
}

void c6_bracket(Outcome& o) {
    QuadratureConfig q;
    const CellMesh m = build_mesh(Domain::interval(0, 1), 256);
    const AssembledForm f = assemble_log_potential(m, q);
    const SpectralResult r = solve_gevp(f.stiffness, f.mass, 2);
    const double l1 = r.eigenvalues[0];
    o.require(l1 > 0 && l1 <= 2.2878789 + 1e-3, "0 < lambda_1(0,1) <= bound");
    const double l4 = lambda1_log(Domain::interval(0, 4), 128, q);
    o.require(l4 < 0, "lambda_1(0,4) < 0");
    o.require(r.eigenvectors.col(0).minCoeff() > 0, "xi_1 positive");
    const Eigen::MatrixXd G = r.eigenvectors.transpose() * f.mass.asDiagonal() * r.eigenvectors;
    const double orth = (G - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff();
    o.require(orth <= 1e-8, "M-orthonormality");
    const double a = lambda1_log(Domain::interval(0, 1), 64, q), b = lambda1_log(Domain::interval(0, 1), 128, q);
    o.require(a >= b && b >= l1, "refinement monotone");
    o.detail << " lambda1(0,1)=" << l1 << " lambda1(0,4)=" << l4 << " orth=" << orth << " 64/128/256: " << a << "/" << b
             << "/" << l1;
}

void c7_derivative(Outcome& o) {
    QuadratureConfig q;
    const SDerivativeStudy st = s_derivative_study(Domain::interval(0, 1), {0.1, 0.05, 0.02, 0.01}, 128, q);
    bool gaps = true, dists = true;
    for (std::size_t i = 1; i < st.rows.size(); ++i) {
        gaps = gaps && st.rows[i].gap < st.rows[i - 1].gap;
        dists = dists && st.rows[i].eig_distance < st.rows[i - 1].eig_distance;
    }
    o.require(gaps, "gap strictly decreasing");
    o.require(st.rows.back().gap <= 0.25 * st.rows.front().gap, "s=0.01 gap <= 25% of s=0.1 gap");
    o.require(dists, "eigenfunction distance decreasing");
    o.detail << " gaps:";
    for (const auto& r : st.rows) o.detail << " " << r.gap;
}

void c8_faber_krahn(Outcome& o) {
    QuadratureConfig q;
    const double margin = 5 * q.abs_tol;
    const FaberKrahnTable t1 = faber_krahn_compare(
        {Domain::interval(0, 1), Domain::union_of({Domain::interval(0, 0.5), Domain::interval(2, 2.5)})}, 128, q);
    o.require(t1.rows[0].lambda1 + margin < t1.rows[1].lambda1, "interval below two intervals");
    const FaberKrahnTable t2 =
        faber_krahn_compare({Domain::ball(2, 1 / std::sqrt(M_PI)), Domain::box(2, {0, 0, 0}, {1, 1, 0})}, 12, q);
    o.require(t2.rows[0].lambda1 + margin < t2.rows[1].lambda1, "disk below square");
    o.require(t2.rows[0].lambda1_rescaled + margin < t2.rows[1].lambda1_rescaled, "disk below square after measure rescaling");
    o.detail << " 1-D: " << t1.rows[0].lambda1 << " < " << t1.rows[1].lambda1 << "; 2-D: " << t2.rows[0].lambda1 << " < "
             << t2.rows[1].lambda1;
}

void c9_max_principle(Outcome& o) {
    QuadratureConfig q;
    const MPVerdict a = mp_classify(Domain::ball(2, 0.9 * thresholds(2).r_N), 8, q);
    o.require(a.verdict == Verdict::holds && a.volume_certificate && a.consistent, "small disk holds");
    const MPVerdict b = mp_classify(Domain::interval(0, 4), 128, q);
    o.require(b.verdict == Verdict::fails && b.consistent, "(0,4) fails");
    const Domain big = Domain::ball(2, 2.5);
    const MPVerdict c = mp_classify(big, 4, q, classical_lambda1(big));
    o.require(c.verdict == Verdict::fails && c.classical_certificate && c.consistent, "disk r=2.5 fails via classical bound");
    o.detail << " lambda1: " << a.lambda1 << ", " << b.lambda1 << ", " << c.lambda1;
}

void c10_positivity(Outcome& o) {
    QuadratureConfig q;
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> Z;
    double min_interior = INFINITY, min_all = INFINITY, worst_mod = -INFINITY;
    for (const auto& [d, cpu] : std::vector<std::pair<Domain, int>>{{Domain::interval(0, 1), 64}, {Domain::ball(2, 1.0), 6}}) {
        const CellMesh m = build_mesh(d, cpu);
        const AssembledForm f = assemble_log_potential(m, q);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd rhs(m.size());
            for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = U(rng);
            const PoissonSolution s = solve_poisson(f, rhs);
            min_all = std::min(min_all, s.solution.minCoeff());
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m.domain.boundary_distance(m.cells[i].center).dist > 2 * m.h) min_interior = std::min(min_interior, s.solution[i]);
        }
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd v(m.size());
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Z(rng);
            const Eigen::VectorXd a = v.cwiseAbs();
            worst_mod = std::max(worst_mod, a.dot(f.stiffness * a) - v.dot(f.stiffness * v));
        }
    }
    o.require(min_all >= 0 && min_interior > 0, "nonnegative solutions, positive inside");
    o.require(worst_mod <= 1e-12, "modulus inequality");
    o.detail << " min u=" << min_all << " max(|v|A|v| - vAv)=" << worst_mod;
}

void c11_decay(Outcome& o) {
    QuadratureConfig q;
    const PoissonSolution s = solve_poisson(Domain::interval(0, 1), [](const Point&) { return 1.0; }, 512, q);
    const auto prof = decay_profile(s, 0.4, {0.125, 0.0625, 0.03125, 0.015625});
    double lo = INFINITY, hi = 0;
    for (const auto& r : prof) {
        lo = std::min(lo, r.weighted);
        hi = std::max(hi, r.weighted);
    }
    o.require(hi / lo <= 2.0, "weighted max/min <= 2");
    o.require(decay_verdict(prof) == DecayVerdict::bounded, "verdict bounded");
    o.detail << " max/min=" << hi / lo;
}

void c12_hardy(Outcome& o) {
    QuadratureConfig q;
    const double a = hardy_quotient(Domain::interval(0, 1), 128, q).quotient;
    const double b = hardy_quotient(Domain::interval(0, 1), 256, q).quotient;
    o.require(a > 0 && b <= 1.1 * a, "growth <= 10%");
    o.detail << " 128: " << a << " 256: " << b << " growth=" << (b / a - 1);
}

void c13_barrier(Outcome& o) {
    QuadratureConfig q;
    const BarrierReport r = barrier_check(make_barrier(0.25, 0.3, 1), {1e-2, 1e-3}, q);
    o.require(r.increasing, "ratio increasing");
    o.require(r.positive, "ratio positive");
    o.detail << " ratios:";
    for (const auto& row : r.rows) o.detail << " rho=" << row.rho << ":" << row.ratio;
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "constants table", c1_constants},         {2, "kappa identity", c2_kappa},
        {3, "geometry exactness", c3_geometry},       {4, "representation cross-check", c4_representation},
        {5, "assembly route equality", c5_routes},    {6, "spectral bracket", c6_bracket},
        {7, "derivative relation", c7_derivative},    {8, "Faber-Krahn desk check", c8_faber_krahn},
        {9, "maximum-principle classification", c9_max_principle},
        {10, "discrete positivity", c10_positivity},  {11, "boundary decay", c11_decay},
        {12, "Hardy quotient", c12_hardy},            {13, "barrier diagnostic", c13_barrier},
    };
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const Criterion& c : all) {
        if (only && c.id != only) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
        failures += !o.pass;
    }
    return failures ? 1 : 0;
}
