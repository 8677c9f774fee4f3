#include "loglap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "loglap/errors.hpp"
#include "loglap/special.hpp"

namespace loglap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int dim) {
    if (dim < 1 || dim > 3) throw ValidationError("dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

double norm(const Point& p, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += p[k] * p[k];
    return std::sqrt(s);
}

double dist_to_box(const Point& x, const Point& lo, const Point& hi, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double e = std::max({lo[k] - x[k], 0.0, x[k] - hi[k]});
        s += e * e;
    }
    return std::sqrt(s);
}

bool boxes_overlap(const Point& alo, const Point& ahi, const Point& blo, const Point& bhi, int dim) {
    for (int k = 0; k < dim; ++k)
        if (ahi[k] <= blo[k] || bhi[k] <= alo[k]) return false;
    return true;
}

// Slab clipping of x + t*dir against an axis-aligned box; returns false when empty.
bool clip_box(const Point& x, const Point& dir, const Point& lo, const Point& hi, int dim, double& t0,
              double& t1) {
    t0 = -kInf;
    t1 = kInf;
    for (int k = 0; k < dim; ++k) {
        if (std::abs(dir[k]) < 1e-300) {
            if (x[k] < lo[k] || x[k] > hi[k]) return false;
            continue;
        }
        double a = (lo[k] - x[k]) / dir[k];
        double b = (hi[k] - x[k]) / dir[k];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    return t1 > t0;
}

std::vector<RayInterval> merge(std::vector<RayInterval> v) {
    std::sort(v.begin(), v.end(), [](const RayInterval& p, const RayInterval& q) { return p.a < q.a; });
    std::vector<RayInterval> out;
    for (const RayInterval& r : v) {
        if (r.b <= r.a) continue;
        if (!out.empty() && r.a <= out.back().b)
            out.back().b = std::max(out.back().b, r.b);
        else
            out.push_back(r);
    }
    return out;
}

// "a,b,c" -> numbers; position is the offset of the first character in the full spec.
std::vector<double> parse_numbers(const std::vector<std::pair<std::string, std::size_t>>& toks) {
    std::vector<double> out;
    for (const auto& [t, pos] : toks) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw ParseError("expected a number, got '" + t + "'", pos);
        }
        if (used != t.size()) throw ParseError("trailing characters in number '" + t + "'", pos + used);
        out.push_back(v);
    }
    return out;
}

// Splits "k1=v,v,k2=v" into keyed lists; tokens without '=' extend the previous key.
std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::size_t>>>> parse_keyed(
    const std::string& body, std::size_t offset) {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::size_t>>>> out;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t end = body.find(',', start);
        if (end == std::string::npos) end = body.size();
        std::string tok = body.substr(start, end - start);
        const std::size_t pos = offset + start;
        if (tok.empty()) throw ParseError("empty field", pos);
        const std::size_t eq = tok.find('=');
        if (eq != std::string::npos) {
            if (eq == 0) throw ParseError("missing key before '='", pos);
            out.push_back({tok.substr(0, eq), {}});
            const std::string val = tok.substr(eq + 1);
            if (val.empty()) throw ParseError("missing value for '" + tok.substr(0, eq) + "'", pos + eq + 1);
            out.back().second.push_back({val, pos + eq + 1});
        } else {
            if (out.empty()) throw ParseError("expected key=value", pos);
            out.back().second.push_back({tok, pos});
        }
        start = end + 1;
    }
    return out;
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Domain parse_one(const std::string& spec, std::size_t offset, bool allow_union);

}  // namespace

// ---------------------------------------------------------------------------------------------
// Domain construction

Domain Domain::interval(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("interval endpoints must be finite");
    if (!(a < b)) throw ValidationError("interval requires a < b (zero or negative length)");
    Domain d;
    d.kind_ = Kind::interval;
    d.dim_ = 1;
    d.lo_ = {a, 0, 0};
    d.hi_ = {b, 0, 0};
    d.measure_ = b - a;
    return d;
}

Domain Domain::box(int dim, const Point& lo, const Point& hi) {
    require_dim(dim);
    Domain d;
    d.kind_ = Kind::box;
    d.dim_ = dim;
    d.measure_ = 1.0;
    for (int k = 0; k < dim; ++k) {
        if (!(lo[k] < hi[k])) throw ValidationError("box requires min < max on every axis (zero volume)");
        d.lo_[k] = lo[k];
        d.hi_[k] = hi[k];
        d.measure_ *= hi[k] - lo[k];
    }
    return d;
}

Domain Domain::ball(int dim, double r, const Point& center) {
    require_dim(dim);
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("ball radius must be positive");
    Domain d;
    d.kind_ = Kind::ball;
    d.dim_ = dim;
    d.radius_ = r;
    for (int k = 0; k < dim; ++k) {
        d.center_[k] = center[k];
        d.lo_[k] = center[k] - r;
        d.hi_[k] = center[k] + r;
    }
    d.measure_ = ball_volume(dim) * std::pow(r, dim);
    return d;
}

Domain Domain::union_of(std::vector<Domain> parts) {
    std::vector<Domain> flat;
    for (Domain& p : parts) {
        if (p.kind_ == Kind::union_of)
            for (const Domain& q : p.parts_) flat.push_back(q);
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty()) throw ValidationError("union needs at least one component");
    const int dim = flat.front().dim_;
    for (const Domain& p : flat)
        if (p.dim_ != dim) throw ValidationError("union components must share a dimension");
    for (std::size_t i = 0; i < flat.size(); ++i) {
        for (std::size_t j = i + 1; j < flat.size(); ++j) {
            const Domain& p = flat[i];
            const Domain& q = flat[j];
            if (!boxes_overlap(p.lo_, p.hi_, q.lo_, q.hi_, dim)) continue;
            bool disjoint = false;
            if (p.kind_ == Kind::ball && q.kind_ == Kind::ball) {
                Point c{};
                for (int k = 0; k < dim; ++k) c[k] = p.center_[k] - q.center_[k];
                disjoint = norm(c, dim) >= p.radius_ + q.radius_;
            } else if (p.kind_ == Kind::ball && q.kind_ != Kind::mask) {
                disjoint = dist_to_box(p.center_, q.lo_, q.hi_, dim) >= p.radius_;
            } else if (q.kind_ == Kind::ball && p.kind_ != Kind::mask) {
                disjoint = dist_to_box(q.center_, p.lo_, p.hi_, dim) >= q.radius_;
            }
            if (!disjoint) throw ValidationError("union components must be pairwise disjoint");
        }
    }
    Domain d;
    d.kind_ = Kind::union_of;
    d.dim_ = dim;
    d.lo_ = flat.front().lo_;
    d.hi_ = flat.front().hi_;
    for (const Domain& p : flat) {
        d.measure_ += p.measure_;
        for (int k = 0; k < dim; ++k) {
            d.lo_[k] = std::min(d.lo_[k], p.lo_[k]);
            d.hi_[k] = std::max(d.hi_[k], p.hi_[k]);
        }
    }
    d.parts_ = std::move(flat);
    return d;
}

Domain Domain::mask(int dim, const Point& origin, double spacing, const Index& counts,
                    std::vector<unsigned char> bits) {
    require_dim(dim);
    if (!(spacing > 0.0)) throw ValidationError("mask spacing must be positive");
    std::size_t total = 1;
    Index c{1, 1, 1};
    for (int k = 0; k < dim; ++k) {
        if (counts[k] < 1) throw ValidationError("mask needs at least one cell per axis");
        c[k] = counts[k];
        total *= static_cast<std::size_t>(counts[k]);
    }
    if (bits.size() != total) throw ValidationError("mask bitmap size does not match its counts");
    std::size_t on = 0;
    for (unsigned char& b : bits) {
        b = b ? 1 : 0;
        on += b;
    }
    if (on == 0) throw ValidationError("mask has zero volume");
    Domain d;
    d.kind_ = Kind::mask;
    d.dim_ = dim;
    d.spacing_ = spacing;
    d.counts_ = c;
    for (int k = 0; k < dim; ++k) {
        d.lo_[k] = origin[k];
        d.hi_[k] = origin[k] + spacing * c[k];
    }
    d.measure_ = static_cast<double>(on) * std::pow(spacing, dim);
    d.bits_ = std::make_shared<const std::vector<unsigned char>>(std::move(bits));
    return d;
}

Domain Domain::load_mask(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mask file '" + path + "'");
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string word;
    int dim = 0;
    Point origin{};
    double spacing = 0.0;
    if (!(hs >> word) || word != "dim" || !(hs >> dim)) throw ParseError("mask header must start with 'dim N'", 0);
    require_dim(dim);
    if (!(hs >> word) || word != "origin") throw ParseError("mask header missing 'origin'", 0);
    for (int k = 0; k < dim; ++k)
        if (!(hs >> origin[k])) throw ParseError("mask header origin needs " + std::to_string(dim) + " values", 0);
    if (!(hs >> word) || word != "spacing" || !(hs >> spacing)) throw ParseError("mask header missing 'spacing h'", 0);

    std::vector<std::vector<std::string>> slices(1);
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) {
            if (!slices.back().empty()) slices.emplace_back();
            continue;
        }
        for (char ch : line)
            if (ch != '0' && ch != '1') throw ParseError("mask rows may only contain 0 and 1 (line " + std::to_string(lineno) + ")", 0);
        slices.back().push_back(line);
    }
    if (slices.back().empty()) slices.pop_back();
    if (slices.empty()) throw ParseError("mask file has no rows", 0);
    const std::size_t nx = slices.front().front().size();
    const std::size_t ny = slices.front().size();
    for (const auto& sl : slices) {
        if (sl.size() != ny) throw ParseError("mask slices must have equal row counts", 0);
        for (const auto& r : sl)
            if (r.size() != nx) throw ParseError("mask rows must have equal length", 0);
    }
    if (dim == 1 && (ny != 1 || slices.size() != 1)) throw ParseError("1-D mask must be a single row", 0);
    if (dim == 2 && slices.size() != 1) throw ParseError("2-D mask must be a single slice", 0);
    Index counts{static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(slices.size())};
    std::vector<unsigned char> bits;
    bits.reserve(nx * ny * slices.size());
    for (const auto& sl : slices)
        for (const auto& r : sl)
            for (char ch : r) bits.push_back(ch == '1');
    return mask(dim, origin, spacing, counts, std::move(bits));
}

// ---------------------------------------------------------------------------------------------
// Queries

bool Domain::mask_bit(const Index& i) const {
    for (int k = 0; k < dim_; ++k)
        if (i[k] < 0 || i[k] >= counts_[k]) return false;
    const std::size_t id = static_cast<std::size_t>(i[0]) +
                           static_cast<std::size_t>(counts_[0]) * (i[1] + static_cast<std::size_t>(counts_[1]) * i[2]);
    return (*bits_)[id] != 0;
}

bool Domain::contains(const Point& x) const {
    switch (kind_) {
        case Kind::interval:
            return x[0] > lo_[0] && x[0] < hi_[0];
        case Kind::box:
            for (int k = 0; k < dim_; ++k)
                if (!(x[k] > lo_[k] && x[k] < hi_[k])) return false;
            return true;
        case Kind::ball: {
            Point y{};
            for (int k = 0; k < dim_; ++k) y[k] = x[k] - center_[k];
            return norm(y, dim_) < radius_;
        }
        case Kind::union_of:
            for (const Domain& p : parts_)
                if (p.contains(x)) return true;
            return false;
        case Kind::mask: {
            Index i{0, 0, 0};
            for (int k = 0; k < dim_; ++k) i[k] = static_cast<int>(std::floor((x[k] - lo_[k]) / spacing_));
            return mask_bit(i);
        }
    }
    return false;
}

BoundaryDistance Domain::boundary_distance(const Point& x) const {
    switch (kind_) {
        case Kind::interval:
        case Kind::box: {
            if (contains(x)) {
                double d = kInf;
                for (int k = 0; k < dim_; ++k) d = std::min({d, x[k] - lo_[k], hi_[k] - x[k]});
                return {d, true};
            }
            return {dist_to_box(x, lo_, hi_, dim_), false};
        }
        case Kind::ball: {
            Point y{};
            for (int k = 0; k < dim_; ++k) y[k] = x[k] - center_[k];
            const double r = norm(y, dim_);
            return {std::abs(radius_ - r), r < radius_};
        }
        case Kind::union_of: {
            double d = kInf;
            bool inside = false;
            for (const Domain& p : parts_) {
                BoundaryDistance b = p.boundary_distance(x);
                d = std::min(d, b.dist);
                inside = inside || b.inside;
            }
            return {d, inside};
        }
        case Kind::mask: {
            const bool inside = contains(x);
            Index c{0, 0, 0};
            for (int k = 0; k < dim_; ++k) c[k] = static_cast<int>(std::floor((x[k] - lo_[k]) / spacing_));
            // ring search over lattice slots of the opposite state; slots off the grid are outside
            int max_ring = 1;
            for (int k = 0; k < dim_; ++k) max_ring = std::max(max_ring, counts_[k] + std::abs(c[k]) + 2);
            double best = kInf;
            for (int ring = 0; ring <= max_ring; ++ring) {
                if ((ring - 1) * spacing_ >= best) break;
                const int rz = dim_ > 2 ? ring : 0, ry = dim_ > 1 ? ring : 0;
                for (int dz = -rz; dz <= rz; ++dz)
                    for (int dy = -ry; dy <= ry; ++dy)
                        for (int dx = -ring; dx <= ring; ++dx) {
                            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                            Index j{c[0] + dx, c[1] + dy, c[2] + dz};
                            if (mask_bit(j) == inside) continue;
                            Point lo{}, hi{};
                            for (int k = 0; k < dim_; ++k) {
                                lo[k] = lo_[k] + j[k] * spacing_;
                                hi[k] = lo[k] + spacing_;
                            }
                            best = std::min(best, dist_to_box(x, lo, hi, dim_));
                        }
            }
            return {best, inside};
        }
    }
    return {0.0, false};
}

void Domain::bounding_box(Point& lo, Point& hi) const {
    lo = lo_;
    hi = hi_;
}

std::vector<RayInterval> Domain::ray_intervals(const Point& x, const Point& dir) const {
    std::vector<RayInterval> out;
    switch (kind_) {
        case Kind::interval:
        case Kind::box: {
            double t0, t1;
            if (clip_box(x, dir, lo_, hi_, dim_, t0, t1) && t1 > 0.0) out.push_back({std::max(t0, 0.0), t1});
            return out;
        }
        case Kind::ball: {
            Point y{};
            for (int k = 0; k < dim_; ++k) y[k] = x[k] - center_[k];
            double b = 0.0, c = -radius_ * radius_;
            for (int k = 0; k < dim_; ++k) {
                b += dir[k] * y[k];
                c += y[k] * y[k];
            }
            const double disc = b * b - c;
            if (disc <= 0.0) return out;
            const double q = -(b + std::copysign(std::sqrt(disc), b));
            double t0 = q, t1 = (q != 0.0) ? c / q : 0.0;
            if (t0 > t1) std::swap(t0, t1);
            if (t1 > 0.0) out.push_back({std::max(t0, 0.0), t1});
            return out;
        }
        case Kind::union_of: {
            for (const Domain& p : parts_) {
                auto v = p.ray_intervals(x, dir);
                out.insert(out.end(), v.begin(), v.end());
            }
            return merge(std::move(out));
        }
        case Kind::mask: {
            double t0, t1;
            if (!clip_box(x, dir, lo_, hi_, dim_, t0, t1) || t1 <= 0.0) return out;
            double t = std::max(t0, 0.0);
            Index cell{0, 0, 0}, step{0, 0, 0};
            Point tmax{kInf, kInf, kInf}, tdelta{kInf, kInf, kInf};
            for (int k = 0; k < dim_; ++k) {
                const double p = x[k] + t * dir[k];
                int i = static_cast<int>(std::floor((p - lo_[k]) / spacing_));
                if (dir[k] < 0.0 && p - lo_[k] == i * spacing_) --i;  // entering through a face while moving down
                cell[k] = std::clamp(i, 0, counts_[k] - 1);
                if (dir[k] > 0.0) {
                    step[k] = 1;
                    tmax[k] = (lo_[k] + (cell[k] + 1) * spacing_ - x[k]) / dir[k];
                    tdelta[k] = spacing_ / dir[k];
                } else if (dir[k] < 0.0) {
                    step[k] = -1;
                    tmax[k] = (lo_[k] + cell[k] * spacing_ - x[k]) / dir[k];
                    tdelta[k] = -spacing_ / dir[k];
                }
            }
            while (t < t1) {
                int axis = 0;
                for (int k = 1; k < dim_; ++k)
                    if (tmax[k] < tmax[axis]) axis = k;
                const double tn = std::min(tmax[axis], t1);
                if (tn > t && mask_bit(cell)) {
                    if (!out.empty() && out.back().b >= t)
                        out.back().b = tn;
                    else
                        out.push_back({t, tn});
                }
                t = std::max(t, tn);
                if (tn >= t1) break;
                cell[axis] += step[axis];
                tmax[axis] += tdelta[axis];
                if (cell[axis] < 0 || cell[axis] >= counts_[axis]) break;
            }
            return out;
        }
    }
    return out;
}

std::vector<double> Domain::kink_angles(const Point& x) const {
    std::vector<double> out;
    if (dim_ != 2) return out;
    auto push = [&](double a) {
        a = std::fmod(a, 2.0 * M_PI);
        if (a < 0.0) a += 2.0 * M_PI;
        out.push_back(a);
    };
    switch (kind_) {
        case Kind::box:
            for (double cx : {lo_[0], hi_[0]})
                for (double cy : {lo_[1], hi_[1]})
                    if (cx != x[0] || cy != x[1]) push(std::atan2(cy - x[1], cx - x[0]));
            break;
        case Kind::ball: {
            const double dx = center_[0] - x[0], dy = center_[1] - x[1];
            const double d = std::hypot(dx, dy);
            if (d > radius_) {
                const double c = std::atan2(dy, dx), w = std::asin(radius_ / d);
                push(c - w);
                push(c + w);
            }
            break;
        }
        case Kind::union_of:
            for (const Domain& p : parts_) {
                auto v = p.kink_angles(x);
                out.insert(out.end(), v.begin(), v.end());
            }
            break;
        default:
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::interval:
            os << "interval:" << fmt_num(lo_[0]) << "," << fmt_num(hi_[0]);
            break;
        case Kind::box:
            os << "box:dim=" << dim_ << ",min=";
            for (int k = 0; k < dim_; ++k) os << (k ? "," : "") << fmt_num(lo_[k]);
            os << ",max=";
            for (int k = 0; k < dim_; ++k) os << (k ? "," : "") << fmt_num(hi_[k]);
            break;
        case Kind::ball:
            os << "ball:dim=" << dim_ << ",r=" << fmt_num(radius_) << ",center=";
            for (int k = 0; k < dim_; ++k) os << (k ? "," : "") << fmt_num(center_[k]);
            break;
        case Kind::union_of:
            os << "union:";
            for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? ";" : "") << parts_[i].describe();
            break;
        case Kind::mask:
            os << "mask(dim=" << dim_ << ",spacing=" << fmt_num(spacing_) << ",counts=" << counts_[0];
            for (int k = 1; k < dim_; ++k) os << "x" << counts_[k];
            os << ")";
            break;
    }
    return os.str();
}

BoundaryDistance boundary_distance(const Domain& d, const Point& x) { return d.boundary_distance(x); }

// ---------------------------------------------------------------------------------------------
// Parsing

namespace {

Domain parse_one(const std::string& spec, std::size_t offset, bool allow_union) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("expected '<shape>:<parameters>'", offset);
    const std::string shape = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    const std::size_t boff = offset + colon + 1;
    if (shape == "interval") {
        std::vector<std::pair<std::string, std::size_t>> toks;
        std::size_t start = 0;
        while (start <= body.size()) {
            std::size_t end = body.find(',', start);
            if (end == std::string::npos) end = body.size();
            toks.push_back({body.substr(start, end - start), boff + start});
            start = end + 1;
        }
        if (toks.size() != 2) throw ParseError("interval needs exactly two endpoints a,b", boff);
        auto v = parse_numbers(toks);
        return Domain::interval(v[0], v[1]);
    }
    if (shape == "box" || shape == "ball") {
        auto keyed = parse_keyed(body, boff);
        int dim = 0;
        bool have_dim = false;
        std::vector<double> mn, mx, center;
        double r = 0.0;
        bool have_r = false;
        for (auto& [key, vals] : keyed) {
            if (key == "dim") {
                if (vals.size() != 1) throw ParseError("dim takes one value", vals.front().second);
                double v = parse_numbers(vals)[0];
                if (v != std::floor(v)) throw ParseError("dim must be an integer", vals.front().second);
                dim = static_cast<int>(v);
                have_dim = true;
                if (dim < 1 || dim > 3) throw ParseError("dim must be 1, 2 or 3", vals.front().second);
            } else if (shape == "box" && key == "min") {
                mn = parse_numbers(vals);
            } else if (shape == "box" && key == "max") {
                mx = parse_numbers(vals);
            } else if (shape == "ball" && key == "r") {
                if (vals.size() != 1) throw ParseError("r takes one value", vals.front().second);
                r = parse_numbers(vals)[0];
                have_r = true;
            } else if (shape == "ball" && key == "center") {
                center = parse_numbers(vals);
            } else {
                throw ParseError("unknown key '" + key + "' for " + shape, boff);
            }
        }
        if (!have_dim) throw ParseError(shape + " needs dim=N", boff);
        if (shape == "box") {
            if (mn.size() != static_cast<std::size_t>(dim) || mx.size() != static_cast<std::size_t>(dim))
                throw ParseError("box min/max need " + std::to_string(dim) + " values each", boff);
            Point lo{}, hi{};
            for (int k = 0; k < dim; ++k) lo[k] = mn[k], hi[k] = mx[k];
            return Domain::box(dim, lo, hi);
        }
        if (!have_r) throw ParseError("ball needs r=R", boff);
        Point c{};
        if (!center.empty()) {
            if (center.size() != static_cast<std::size_t>(dim))
                throw ParseError("ball center needs " + std::to_string(dim) + " values", boff);
            for (int k = 0; k < dim; ++k) c[k] = center[k];
        }
        return Domain::ball(dim, r, c);
    }
    if (shape == "union") {
        if (!allow_union) throw ParseError("nested unions are not supported", offset);
        std::vector<Domain> parts;
        std::size_t start = 0;
        while (start <= body.size()) {
            std::size_t end = body.find(';', start);
            if (end == std::string::npos) end = body.size();
            parts.push_back(parse_one(body.substr(start, end - start), boff + start, false));
            start = end + 1;
        }
        return Domain::union_of(std::move(parts));
    }
    if (shape == "mask") {
        if (body.empty()) throw ParseError("mask needs a file path", boff);
        return Domain::load_mask(body);
    }
    throw ParseError("unknown shape '" + shape + "'", offset);
}

}  // namespace

Domain parse_domain(const std::string& spec) {
    if (spec.empty()) throw ParseError("empty domain spec", 0);
    return parse_one(spec, 0, true);
}

// ---------------------------------------------------------------------------------------------
// Meshes

double CellMesh::measure() const {
    double s = 0.0;
    for (double v : volumes) s += v;
    return s;
}

int CellMesh::cell_at(const Index& idx) const {
    for (int k = 0; k < dim; ++k)
        if (idx[k] < 0 || idx[k] >= counts[k]) return -1;
    const std::size_t slot = static_cast<std::size_t>(idx[0]) +
                             static_cast<std::size_t>(counts[0]) * (idx[1] + static_cast<std::size_t>(counts[1]) * idx[2]);
    return lookup[slot];
}

Domain CellMesh::as_domain() const {
    std::vector<unsigned char> bits(lookup.size());
    for (std::size_t i = 0; i < lookup.size(); ++i) bits[i] = lookup[i] >= 0;
    return Domain::mask(dim, origin, h, counts, std::move(bits));
}

CellMesh build_mesh(const Domain& d, int cells_per_unit) {
    if (cells_per_unit < 1) throw ValidationError("cells_per_unit must be at least 1");
    CellMesh m;
    m.domain = d;
    m.dim = d.dim();
    m.cells_per_unit = cells_per_unit;
    m.h = 1.0 / cells_per_unit;
    Point lo, hi;
    d.bounding_box(lo, hi);
    m.origin = lo;
    std::size_t total = 1;
    for (int k = 0; k < m.dim; ++k) {
        m.counts[k] = std::max(1, static_cast<int>(std::ceil((hi[k] - lo[k]) / m.h - 1e-9)));
        total *= static_cast<std::size_t>(m.counts[k]);
    }
    if (total > 50'000'000) throw ValidationError("mesh lattice too large");
    m.lookup.assign(total, -1);
    const double vol = std::pow(m.h, m.dim);
    for (int k2 = 0; k2 < m.counts[2]; ++k2)
        for (int k1 = 0; k1 < m.counts[1]; ++k1)
            for (int k0 = 0; k0 < m.counts[0]; ++k0) {
                Cell c;
                c.index = {k0, k1, k2};
                c.center = {0, 0, 0};
                for (int k = 0; k < m.dim; ++k) c.center[k] = m.origin[k] + (c.index[k] + 0.5) * m.h;
                if (!d.contains(c.center)) continue;
                const std::size_t slot = static_cast<std::size_t>(k0) +
                                         static_cast<std::size_t>(m.counts[0]) * (k1 + static_cast<std::size_t>(m.counts[1]) * k2);
                m.lookup[slot] = static_cast<int>(m.cells.size());
                m.cells.push_back(c);
                m.volumes.push_back(vol);
            }
    if (m.cells.empty()) throw ValidationError("mesh is empty: no cell center lies in the domain");
    const int r1 = m.dim > 1 ? 1 : 0, r2 = m.dim > 2 ? 1 : 0;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const Index& a = m.cells[i].index;
        for (int dz = -r2; dz <= r2; ++dz)
            for (int dy = -r1; dy <= r1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int j = m.cell_at({a[0] + dx, a[1] + dy, a[2] + dz});
                    if (j > static_cast<int>(i)) m.adjacency.push_back({static_cast<int>(i), j});
                }
    }
    std::sort(m.adjacency.begin(), m.adjacency.end());
    return m;
}

// ---------------------------------------------------------------------------------------------
// Kernel integrals

double sphere_integral(int N, const std::function<double(const Point&)>& f, double abs_tol, int max_depth,
                       const std::vector<double>& kinks, bool half) {
    require_dim(N);
    if (N == 1) return half ? f({1, 0, 0}) : f({1, 0, 0}) + f({-1, 0, 0});
    if (N == 2) {
        const double top = half ? M_PI : 2.0 * M_PI;
        std::vector<double> bp;
        for (double k : kinks) {
            double a = std::fmod(k, 2.0 * M_PI);
            if (a < 0) a += 2.0 * M_PI;
            if (a > 0.0 && a < top) bp.push_back(a);
        }
        auto g = [&](double t) { return f({std::cos(t), std::sin(t), 0.0}); };
        QuadResult r = integrate_gk(g, 0.0, top, abs_tol, max_depth, bp);
        if (!r.converged) throw QuadratureError("angular quadrature did not converge");
        return r.value;
    }
    // N = 3: z = cos(polar angle), azimuth phi
    const double zlo = half ? 0.0 : -1.0;
    const double inner_tol = abs_tol / 20.0;
    auto outer = [&](double z) {
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        auto g = [&](double phi) { return f({s * std::cos(phi), s * std::sin(phi), z}); };
        QuadResult r = integrate_gk(g, 0.0, 2.0 * M_PI, inner_tol, max_depth, {0.5 * M_PI, M_PI, 1.5 * M_PI});
        if (!r.converged) throw QuadratureError("azimuthal quadrature did not converge");
        return r.value;
    };
    QuadResult r = integrate_gk(outer, zlo, 1.0, 0.5 * abs_tol, max_depth, half ? std::vector<double>{} : std::vector<double>{0.0});
    if (!r.converged) throw QuadratureError("polar quadrature did not converge");
    return r.value;
}

namespace {

void require_inside(const Domain& d, const Point& x) {
    if (!d.contains(x)) throw DomainError("point is not inside the domain " + d.describe());
}

}  // namespace

double h_omega(const Domain& d, const Point& x, const QuadratureConfig& quad) {
    require_inside(d, x);
    const int N = d.dim();
    const double cN = base_constants(N).c_N;
    auto f = [&](const Point& th) {
        auto iv = d.ray_intervals(x, th);
        double v = 0.0;
        for (std::size_t k = 0; k < iv.size(); ++k)
            v -= (k == 0 && iv[k].a <= 0.0) ? std::log(iv[k].b) : std::log(iv[k].b / iv[k].a);
        return v;
    };
    return cN * sphere_integral(N, f, quad.abs_tol / cN, quad.max_depth, d.kink_angles(x));
}

double kappa_omega(const Domain& d, const Point& x, const QuadratureConfig& quad) {
    require_inside(d, x);
    const int N = d.dim();
    const double cN = base_constants(N).c_N;
    auto f = [&](const Point& th) {
        auto iv = d.ray_intervals(x, th);
        double v = 0.0;
        for (std::size_t k = 0; k < iv.size(); ++k) {
            const double a = iv[k].b;
            const double b = k + 1 < iv.size() ? iv[k + 1].a : kInf;
            if (a >= 1.0) break;
            v += std::log(std::min(b, 1.0) / a);
        }
        return v;
    };
    return cN * sphere_integral(N, f, quad.abs_tol / cN, quad.max_depth, d.kink_angles(x));
}

double kappa_omega_frac(const Domain& d, const Point& x, double s, const QuadratureConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    require_inside(d, x);
    const int N = d.dim();
    const double c = frac_constants(N, s).c_Ns;
    auto f = [&](const Point& th) {
        auto iv = d.ray_intervals(x, th);
        double v = 0.0;
        for (std::size_t k = 0; k < iv.size(); ++k) {
            const double a = iv[k].b;
            const double b = k + 1 < iv.size() ? iv[k + 1].a : kInf;
            v += (std::pow(a, -2.0 * s) - (b == kInf ? 0.0 : std::pow(b, -2.0 * s))) / (2.0 * s);
        }
        return v;
    };
    return c * sphere_integral(N, f, quad.abs_tol / c, quad.max_depth, d.kink_angles(x));
}

double far_interaction(const Domain& d, const Point& x, const QuadratureConfig& quad) {
    const int N = d.dim();
    const double cN = base_constants(N).c_N;
    auto f = [&](const Point& th) {
        double v = 0.0;
        for (const RayInterval& r : d.ray_intervals(x, th))
            if (r.b > 1.0) v += std::log(r.b / std::max(r.a, 1.0));
        return v;
    };
    return cN * sphere_integral(N, f, quad.abs_tol / cN, quad.max_depth, d.kink_angles(x));
}

namespace {

double sphere_kernel_h(int N, double t, const QuadratureConfig& quad, double tol) {
    const double area = N == 2 ? 2.0 : sphere_area(N - 1);
    auto f = [&](double th) {
        const double q = (t - 1.0) * (t - 1.0) + 2.0 * t * (1.0 - std::cos(th));
        return std::pow(q, -0.5 * N) * std::pow(std::sin(th), N - 2);
    };
    std::vector<double> bp;
    const double e = std::abs(1.0 - t);
    for (double m : {1.0, 4.0, 16.0, 64.0})
        if (m * e < M_PI) bp.push_back(m * e);
    QuadResult r = integrate_gk(f, 0.0, M_PI, tol / area, quad.max_depth, bp);
    if (!r.converged) throw QuadratureError("sphere kernel quadrature did not converge");
    return area * r.value;
}

}  // namespace

SphereKernel sphere_kernel_h0(int N, double t, const QuadratureConfig& quad) {
    if (N < 2 || N > 3) throw DomainError("sphere kernel needs N in {2, 3}");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("sphere kernel needs t >= 0");
    if (t != 1.0) {
        const double e = std::abs(t - 1.0);
        const double h = sphere_kernel_h(N, t, quad, quad.abs_tol / std::max(e, 1e-300));
        return {h, false, e * h};
    }
    // one-sided quadratic extrapolation from below
    const double eps = 1e-3;
    double v[3];
    for (int k = 0; k < 3; ++k) {
        const double tk = 1.0 - (k + 1) * eps;
        v[k] = (k + 1) * eps * sphere_kernel_h(N, tk, quad, quad.abs_tol / ((k + 1) * eps));
    }
    return {std::numeric_limits<double>::infinity(), true, 3.0 * v[0] - 3.0 * v[1] + v[2]};
}

double ball_kernel_integral(int N, double R, const Point& x, const QuadratureConfig& quad) {
    require_dim(N);
    if (!(R > 0.0)) throw DomainError("ball radius must be positive");
    const double d = norm(x, N);
    if (!(d > R)) throw DomainError("ball kernel integral needs |x| > R");
    if (N == 1) return std::log((d + R) / (d - R));
    const double area = N == 2 ? 2.0 : sphere_area(N - 1);
    // chord endpoints along directions at angle theta from -x/|x|; d sin(theta) = R sin(psi)
    auto f = [&](double psi) {
        const double sth = R * std::sin(psi) / d;
        const double cth = std::sqrt(std::max(0.0, 1.0 - sth * sth));
        const double half = R * std::cos(psi);
        const double b = d * cth + half;
        const double a = (d * d - R * R) / b;
        return std::log(b / a) * std::pow(sth, N - 2) * half / (d * cth);
    };
    return area * integrate(f, 0.0, 0.5 * M_PI, QuadratureConfig{quad.abs_tol / area, quad.max_depth});
}

}  // namespace loglap
