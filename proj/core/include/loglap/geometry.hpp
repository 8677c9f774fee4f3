#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "loglap/quadrature.hpp"

namespace loglap {

// Coordinates beyond the domain dimension are ignored and kept at zero.
using Point = std::array<double, 3>;
using Index = std::array<int, 3>;

struct RayInterval {
    double a;
    double b;
};

struct BoundaryDistance {
    double dist;
    bool inside;
};

class Domain {
public:
    enum class Kind { interval, box, ball, union_of, mask };

    static Domain interval(double a, double b);
    static Domain box(int dim, const Point& lo, const Point& hi);
    static Domain ball(int dim, double r, const Point& center = {});
    static Domain union_of(std::vector<Domain> parts);
    // bits are stored with x fastest, then y, then z; 1 marks a cell inside.
    static Domain mask(int dim, const Point& origin, double spacing, const Index& counts,
                       std::vector<unsigned char> bits);
    static Domain load_mask(const std::string& path);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    double measure() const { return measure_; }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    const std::vector<Domain>& parts() const { return parts_; }
    double spacing() const { return spacing_; }
    const Index& counts() const { return counts_; }

    bool contains(const Point& x) const;
    BoundaryDistance boundary_distance(const Point& x) const;
    // Axis-aligned bounding box of the closure.
    void bounding_box(Point& lo, Point& hi) const;
    // Maximal parameter intervals [a, b] with t >= 0 on which x + t*dir lies in the closure,
    // sorted and merged. dir must be a unit vector.
    std::vector<RayInterval> ray_intervals(const Point& x, const Point& dir) const;
    // Directions (2-D angles in [0, 2pi)) at which ray quantities from x have kinks.
    std::vector<double> kink_angles(const Point& x) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::interval;
    int dim_ = 1;
    double measure_ = 0.0;
    Point lo_{}, hi_{}, center_{};
    double radius_ = 0.0;
    std::vector<Domain> parts_;
    double spacing_ = 0.0;
    Index counts_{1, 1, 1};
    std::shared_ptr<const std::vector<unsigned char>> bits_;

    bool mask_bit(const Index& i) const;
};

// Grammar: interval:a,b | box:dim=N,min=...,max=... | ball:dim=N,r=R[,center=...]
//          | union:<spec>;<spec>[;...] | mask:<path>
Domain parse_domain(const std::string& spec);

BoundaryDistance boundary_distance(const Domain& d, const Point& x);

struct Cell {
    Point center;
    Index index;  // lattice index relative to the mesh origin
};

struct CellMesh {
    Domain domain;
    int dim = 1;
    int cells_per_unit = 1;
    double h = 1.0;
    Point origin{};
    Index counts{1, 1, 1};
    std::vector<Cell> cells;
    std::vector<double> volumes;
    std::vector<std::pair<int, int>> adjacency;  // i < j, cells sharing at least a corner
    std::vector<int> lookup;                      // lattice slot -> cell id or -1

    std::size_t size() const { return cells.size(); }
    double measure() const;
    // Cell id at a lattice index, -1 when the slot is empty or outside the lattice.
    int cell_at(const Index& idx) const;
    // Union of the kept cells as a raster domain.
    Domain as_domain() const;
};

// Lattice anchored at the bounding-box minimum corner with h = 1/cells_per_unit;
// a cell is kept iff its center lies in the domain.
CellMesh build_mesh(const Domain& d, int cells_per_unit);

// Integral of f over S^{N-1} (N = 1: the two points +-1). With half set, only the upper
// half sphere (first nonzero coordinate of the last axis positive) is used.
double sphere_integral(int N, const std::function<double(const Point&)>& f, double abs_tol,
                       int max_depth, const std::vector<double>& kinks = {}, bool half = false);

double h_omega(const Domain& d, const Point& x, const QuadratureConfig& quad);
double kappa_omega(const Domain& d, const Point& x, const QuadratureConfig& quad);
double kappa_omega_frac(const Domain& d, const Point& x, double s, const QuadratureConfig& quad);
// c_N times the integral of |x-y|^{-N} over the part of the domain outside B_1(x).
double far_interaction(const Domain& d, const Point& x, const QuadratureConfig& quad);

struct SphereKernel {
    double h;       // meaningless when singular
    bool singular;  // t == 1
    double h0;      // |t - 1| * h, extrapolated at t = 1
};

SphereKernel sphere_kernel_h0(int N, double t, const QuadratureConfig& quad);

// Integral of |x-y|^{-N} over B_R(0) for |x| > R.
double ball_kernel_integral(int N, double R, const Point& x, const QuadratureConfig& quad);

}  // namespace loglap
