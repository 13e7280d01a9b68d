#include "wsc/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "wsc/parallel.hpp"
#include "wsc/rng.hpp"

namespace wsc {

namespace {

constexpr u64 kSampleBlock = 1 << 16;

// 99% two-sided Hoeffding half-width for a [0,1] mean over n samples
double hoeffding_halfwidth(u64 n) { return std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(n))); }

double sq(double v) { return v * v; }

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

}  // namespace

double ball_volume(int d, double r) {
    double unit = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    return unit * std::pow(r, d);
}

Region::Region(int dims) : d_(dims) {
    if (dims < 1) throw std::invalid_argument("region needs d >= 1");
    if (dims > 8) throw std::invalid_argument("region dimension capped at 8");
}

void Region::check_point(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != d_) throw DimensionMismatch("point dimension mismatch");
}

void Region::bounding_box(std::span<double> lo, std::span<double> hi) const {
    for (int i = 0; i < d_; ++i) {
        lo[i] = 0.0;
        hi[i] = 1.0;
    }
}

bool Region::slice_last(std::span<const double>, double&, double&) const { return false; }

MeasureEstimate Region::measure(u64 budget, u64 seed) const {
    return measure_monte_carlo(budget, seed);
}

MeasureEstimate Region::measure_monte_carlo(u64 budget, u64 seed) const {
    if (budget < 1) throw BudgetExceeded("measure: budget must be >= 1");
    u64 blocks = (budget + kSampleBlock - 1) / kSampleBlock;
    std::vector<u64> hits(blocks, 0);
    parallel_blocks(blocks, [&](u64 b) {
        Rng rng = block_rng(seed, b);
        u64 lo = b * kSampleBlock;
        u64 hi = std::min(budget, lo + kSampleBlock);
        std::vector<double> pt(d_);
        u64 h = 0;
        for (u64 i = lo; i < hi; ++i) {
            for (int j = 0; j < d_; ++j) pt[j] = rng.next_double();
            h += contains(pt);
        }
        hits[b] = h;
    });
    u64 total = 0;
    for (u64 h : hits) total += h;
    MeasureEstimate e;
    e.value = static_cast<double>(total) / static_cast<double>(budget);
    e.error_bound = hoeffding_halfwidth(budget);
    e.method = MeasureEstimate::Method::monte_carlo;
    e.sample_count = budget;
    e.seed = seed;
    return e;
}

MeasureEstimate Region::shell_measure(double eps, ShellSide side, u64 budget, u64 seed) const {
    return shell_monte_carlo(eps, side, budget, seed);
}

MeasureEstimate Region::shell_monte_carlo(double eps, ShellSide side, u64 budget, u64 seed) const {
    if (eps <= 0) throw std::invalid_argument("shell_measure: eps must be positive");
    if (!has_distance())
        throw std::runtime_error(
            "shell_measure: region kind has no distance oracle; cannot certify shells");
    if (budget < 1) throw BudgetExceeded("shell_measure: budget must be >= 1");
    u64 blocks = (budget + kSampleBlock - 1) / kSampleBlock;
    std::vector<u64> hits(blocks, 0);
    parallel_blocks(blocks, [&](u64 b) {
        Rng rng = block_rng(seed, b);
        u64 lo = b * kSampleBlock;
        u64 hi = std::min(budget, lo + kSampleBlock);
        std::vector<double> pt(d_);
        u64 h = 0;
        for (u64 i = lo; i < hi; ++i) {
            for (int j = 0; j < d_; ++j) pt[j] = rng.next_double();
            if (side == ShellSide::outer)
                h += !contains(pt) && near_region(pt, eps);
            else
                h += contains(pt) && near_complement(pt, eps);
        }
        hits[b] = h;
    });
    u64 total = 0;
    for (u64 h : hits) total += h;
    MeasureEstimate e;
    e.value = static_cast<double>(total) / static_cast<double>(budget);
    e.error_bound = hoeffding_halfwidth(budget);
    e.method = MeasureEstimate::Method::monte_carlo;
    e.sample_count = budget;
    e.seed = seed;
    return e;
}

WellShapedEstimate Region::wellshaped_constant(std::span<const double> eps_grid, u64 budget,
                                               u64 seed) const {
    if (eps_grid.empty()) throw std::invalid_argument("wellshaped_constant: empty eps grid");
    WellShapedEstimate out;
    for (double eps : eps_grid) {
        for (ShellSide side : {ShellSide::outer, ShellSide::inner}) {
            MeasureEstimate sh = shell_measure(eps, side, budget, seed);
            double ratio = (sh.value + sh.error_bound) / eps;
            out.rows.push_back({eps, side, sh, ratio});
            out.C = std::max(out.C, ratio);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// exact point-to-polytope distance via active-set projection
// ---------------------------------------------------------------------------

namespace geom {

namespace {

// projection of u onto {x : n_j·x = b_j, j in subset}; returns squared distance
// or nullopt when the Gram system is singular or the result is infeasible
std::optional<double> subset_projection_sq(std::span<const double> u,
                                           std::span<const Halfspace> cons,
                                           std::span<const int> subset,
                                           std::span<const double> margins) {
    int d = static_cast<int>(u.size());
    int s = static_cast<int>(subset.size());
    // Gram matrix G = N N^T and right-hand side g (margins)
    double G[8][9];
    for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
            double dot = 0;
            for (int i = 0; i < d; ++i)
                dot += cons[subset[a]].normal[i] * cons[subset[b]].normal[i];
            G[a][b] = dot;
        }
        G[a][s] = margins[subset[a]];
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < s; ++col) {
        int piv = col;
        for (int r = col + 1; r < s; ++r)
            if (std::fabs(G[r][col]) > std::fabs(G[piv][col])) piv = r;
        if (std::fabs(G[piv][col]) < 1e-10) return std::nullopt;
        if (piv != col)
            for (int cc = 0; cc <= s; ++cc) std::swap(G[piv][cc], G[col][cc]);
        for (int r = 0; r < s; ++r) {
            if (r == col) continue;
            double f = G[r][col] / G[col][col];
            for (int cc = col; cc <= s; ++cc) G[r][cc] -= f * G[col][cc];
        }
    }
    double lambda[8];
    for (int a = 0; a < s; ++a) lambda[a] = G[a][s] / G[a][a];
    // p = u - sum lambda_a n_a
    double p[8];
    for (int i = 0; i < d; ++i) {
        double v = u[i];
        for (int a = 0; a < s; ++a) v -= lambda[a] * cons[subset[a]].normal[i];
        p[i] = v;
    }
    // feasibility w.r.t. all constraints
    for (size_t j = 0; j < cons.size(); ++j) {
        double g = -cons[j].offset;
        for (int i = 0; i < d; ++i) g += cons[j].normal[i] * p[i];
        if (g > 1e-9) return std::nullopt;
    }
    double dist_sq = 0;
    for (int i = 0; i < d; ++i) dist_sq += sq(u[i] - p[i]);
    return dist_sq;
}

void enumerate_subsets(std::span<const int> candidates, int max_size, std::vector<int>& cur,
                       size_t start, const std::function<void(std::span<const int>)>& visit) {
    if (!cur.empty()) visit(cur);
    if (static_cast<int>(cur.size()) == max_size) return;
    for (size_t i = start; i < candidates.size(); ++i) {
        cur.push_back(candidates[i]);
        enumerate_subsets(candidates, max_size, cur, i + 1, visit);
        cur.pop_back();
    }
}

}  // namespace

bool dist_below(std::span<const double> u, std::span<const Halfspace> cons, double eps) {
    int d = static_cast<int>(u.size());
    std::vector<double> margins(cons.size());
    bool inside = true;
    double worst = -1e300;
    for (size_t j = 0; j < cons.size(); ++j) {
        double g = -cons[j].offset;
        for (int i = 0; i < d; ++i) g += cons[j].normal[i] * u[i];
        margins[j] = g;  // unit normals: margin is a distance
        if (g > 0) inside = false;
        worst = std::max(worst, g);
    }
    if (inside) return true;
    if (worst >= eps) return false;
    // every constraint active at the projection has |margin| < dist < eps
    std::vector<int> candidates;
    for (size_t j = 0; j < cons.size(); ++j)
        if (std::fabs(margins[j]) < eps) candidates.push_back(static_cast<int>(j));
    double best_sq = 1e300;
    std::vector<int> cur;
    enumerate_subsets(candidates, d, cur, 0, [&](std::span<const int> subset) {
        auto dsq = subset_projection_sq(u, cons, subset, margins);
        if (dsq && *dsq < best_sq) best_sq = *dsq;
    });
    return best_sq < eps * eps;
}

}  // namespace geom

// ---------------------------------------------------------------------------
// box
// ---------------------------------------------------------------------------

namespace {

class BoxRegion final : public Region {
  public:
    BoxRegion(std::vector<double> lo, std::vector<double> hi)
        : Region(static_cast<int>(lo.size())), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size()) throw std::invalid_argument("box: lo/hi size mismatch");
        for (int i = 0; i < d_; ++i)
            if (!(0.0 <= lo_[i] && lo_[i] <= hi_[i] && hi_[i] <= 1.0))
                throw std::invalid_argument("box must satisfy 0 <= lo <= hi <= 1");
    }

    std::string describe() const override {
        return "box lo=" + join(lo_) + " hi=" + join(hi_);
    }
    bool convex() const override { return true; }

    bool contains(std::span<const double> u) const override {
        check_point(u);
        for (int i = 0; i < d_; ++i)
            if (u[i] < lo_[i] || u[i] > hi_[i]) return false;
        return true;
    }

    MeasureEstimate measure(u64, u64) const override {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= hi_[i] - lo_[i];
        return MeasureEstimate::exact(v);
    }

    bool near_region(std::span<const double> u, double eps) const override {
        check_point(u);
        double dsq = 0;
        for (int i = 0; i < d_; ++i) {
            double def = std::max({0.0, lo_[i] - u[i], u[i] - hi_[i]});
            dsq += sq(def);
        }
        return dsq < eps * eps;
    }

    bool near_complement(std::span<const double> u, double eps) const override {
        check_point(u);
        if (!contains(u)) return true;
        // the complement within the cube lies beyond interior faces only;
        // distance is the smallest axis margin toward such a face
        double best = 1e300;
        for (int i = 0; i < d_; ++i) {
            if (lo_[i] > 0.0) best = std::min(best, u[i] - lo_[i]);
            if (hi_[i] < 1.0) best = std::min(best, hi_[i] - u[i]);
        }
        return best < eps;
    }

    MeasureEstimate shell_measure(double eps, ShellSide side, u64 budget,
                                  u64 seed) const override {
        if (eps <= 0) throw std::invalid_argument("shell_measure: eps must be positive");
        if (side == ShellSide::inner) {
            // exact: box minus the box shrunk by eps on every interior face
            double vol = 1.0, shrunk = 1.0;
            for (int i = 0; i < d_; ++i) {
                double side_len = hi_[i] - lo_[i];
                vol *= side_len;
                double s = side_len;
                if (lo_[i] > 0.0) s -= eps;
                if (hi_[i] < 1.0) s -= eps;
                shrunk *= std::max(0.0, s);
            }
            return MeasureEstimate::exact(vol - shrunk);
        }
        // outer: exact when at most one axis has interior faces and all other
        // axes span [0,1]; the dilation is then a plain strip inside the cube
        int interior_axes = 0, axis = -1;
        bool others_full = true;
        for (int i = 0; i < d_; ++i) {
            bool interior = lo_[i] > 0.0 || hi_[i] < 1.0;
            if (interior) {
                ++interior_axes;
                axis = i;
            }
        }
        if (interior_axes == 0) return MeasureEstimate::exact(0.0);
        if (interior_axes == 1) {
            for (int i = 0; i < d_; ++i)
                if (i != axis && (lo_[i] > 0.0 || hi_[i] < 1.0)) others_full = false;
            if (others_full) {
                double ext = (std::min(1.0, hi_[axis] + eps) - hi_[axis]) +
                             (lo_[axis] - std::max(0.0, lo_[axis] - eps));
                return MeasureEstimate::exact(ext);
            }
        }
        return shell_monte_carlo(eps, side, budget, seed);
    }

    void bounding_box(std::span<double> lo, std::span<double> hi) const override {
        for (int i = 0; i < d_; ++i) {
            lo[i] = lo_[i];
            hi[i] = hi_[i];
        }
    }

    bool slice_last(std::span<const double> prefix, double& lo, double& hi) const override {
        for (int i = 0; i < d_ - 1; ++i)
            if (prefix[i] < lo_[i] || prefix[i] > hi_[i]) {
                lo = 1.0;
                hi = 0.0;
                return true;
            }
        lo = lo_[d_ - 1];
        hi = hi_[d_ - 1];
        return true;
    }

  private:
    std::vector<double> lo_, hi_;
};

// ---------------------------------------------------------------------------
// ball
// ---------------------------------------------------------------------------

class BallRegion final : public Region {
  public:
    BallRegion(std::vector<double> center, double radius)
        : Region(static_cast<int>(center.size())), c_(std::move(center)), r_(radius) {
        if (r_ <= 0) throw std::invalid_argument("ball radius must be positive");
        for (int i = 0; i < d_; ++i)
            if (c_[i] - r_ < 0.0 || c_[i] + r_ > 1.0)
                throw std::invalid_argument("ball must lie inside [0,1]^d");
    }

    std::string describe() const override {
        std::ostringstream os;
        os << "ball center=" << join(c_) << " radius=" << r_;
        return os.str();
    }
    bool convex() const override { return true; }

    bool contains(std::span<const double> u) const override {
        check_point(u);
        return dist_sq(u) <= r_ * r_;
    }

    MeasureEstimate measure(u64, u64) const override {
        return MeasureEstimate::exact(ball_volume(d_, r_));
    }

    bool near_region(std::span<const double> u, double eps) const override {
        check_point(u);
        double rho = std::sqrt(dist_sq(u));
        return rho < r_ + eps;
    }

    bool near_complement(std::span<const double> u, double eps) const override {
        check_point(u);
        double rho = std::sqrt(dist_sq(u));
        if (rho > r_) return true;
        return r_ - rho < eps;
    }

    MeasureEstimate shell_measure(double eps, ShellSide side, u64 budget,
                                  u64 seed) const override {
        if (eps <= 0) throw std::invalid_argument("shell_measure: eps must be positive");
        if (side == ShellSide::inner) {
            double inner_r = std::max(0.0, r_ - eps);
            return MeasureEstimate::exact(ball_volume(d_, r_) - ball_volume(d_, inner_r));
        }
        bool dilated_inside = true;
        for (int i = 0; i < d_; ++i)
            if (c_[i] - (r_ + eps) < 0.0 || c_[i] + (r_ + eps) > 1.0) dilated_inside = false;
        if (dilated_inside)
            return MeasureEstimate::exact(ball_volume(d_, r_ + eps) - ball_volume(d_, r_));
        return shell_monte_carlo(eps, side, budget, seed);
    }

    void bounding_box(std::span<double> lo, std::span<double> hi) const override {
        for (int i = 0; i < d_; ++i) {
            lo[i] = c_[i] - r_;
            hi[i] = c_[i] + r_;
        }
    }

    bool slice_last(std::span<const double> prefix, double& lo, double& hi) const override {
        double rem = r_ * r_;
        for (int i = 0; i < d_ - 1; ++i) rem -= sq(prefix[i] - c_[i]);
        if (rem < 0) {
            lo = 1.0;
            hi = 0.0;
            return true;
        }
        double w = std::sqrt(rem);
        lo = std::max(0.0, c_[d_ - 1] - w);
        hi = std::min(1.0, c_[d_ - 1] + w);
        return true;
    }

  private:
    double dist_sq(std::span<const double> u) const {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += sq(u[i] - c_[i]);
        return s;
    }

    std::vector<double> c_;
    double r_;
};

// ---------------------------------------------------------------------------
// ellipsoid (axis-aligned)
// ---------------------------------------------------------------------------

class EllipsoidRegion final : public Region {
  public:
    EllipsoidRegion(std::vector<double> center, std::vector<double> axes)
        : Region(static_cast<int>(center.size())), c_(std::move(center)), a_(std::move(axes)) {
        if (a_.size() != c_.size()) throw std::invalid_argument("ellipsoid: center/axes mismatch");
        for (int i = 0; i < d_; ++i) {
            if (a_[i] <= 0) throw std::invalid_argument("ellipsoid semi-axes must be positive");
            if (c_[i] - a_[i] < 0.0 || c_[i] + a_[i] > 1.0)
                throw std::invalid_argument("ellipsoid must lie inside [0,1]^d");
        }
    }

    std::string describe() const override {
        return "ellipsoid center=" + join(c_) + " axes=" + join(a_);
    }
    bool convex() const override { return true; }

    bool contains(std::span<const double> u) const override {
        check_point(u);
        return level(u) <= 1.0;
    }

    MeasureEstimate measure(u64, u64) const override {
        double v = ball_volume(d_, 1.0);
        for (int i = 0; i < d_; ++i) v *= a_[i];
        return MeasureEstimate::exact(v);
    }

    bool near_region(std::span<const double> u, double eps) const override {
        check_point(u);
        if (level(u) <= 1.0) return true;
        return boundary_distance(u) < eps;
    }

    bool near_complement(std::span<const double> u, double eps) const override {
        check_point(u);
        if (level(u) > 1.0) return true;
        return boundary_distance(u) < eps;
    }

    void bounding_box(std::span<double> lo, std::span<double> hi) const override {
        for (int i = 0; i < d_; ++i) {
            lo[i] = c_[i] - a_[i];
            hi[i] = c_[i] + a_[i];
        }
    }

    bool slice_last(std::span<const double> prefix, double& lo, double& hi) const override {
        double rem = 1.0;
        for (int i = 0; i < d_ - 1; ++i) rem -= sq((prefix[i] - c_[i]) / a_[i]);
        if (rem < 0) {
            lo = 1.0;
            hi = 0.0;
            return true;
        }
        double w = a_[d_ - 1] * std::sqrt(rem);
        lo = std::max(0.0, c_[d_ - 1] - w);
        hi = std::min(1.0, c_[d_ - 1] + w);
        return true;
    }

  private:
    double level(std::span<const double> u) const {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += sq((u[i] - c_[i]) / a_[i]);
        return s;
    }

    // distance to the boundary via the Lagrange projection parameter; the
    // on-axis degeneracy is regularized by a 1e-14 nudge (immaterial at the
    // measure-estimation scales this feeds)
    double boundary_distance(std::span<const double> u) const {
        double y[8];
        double min_a_sq = 1e300;
        bool all_zero = true;
        for (int i = 0; i < d_; ++i) {
            y[i] = u[i] - c_[i];
            if (std::fabs(y[i]) < 1e-14) y[i] = 1e-14;
            else all_zero = false;
            min_a_sq = std::min(min_a_sq, a_[i] * a_[i]);
        }
        if (all_zero) return min_a_sq > 0 ? std::sqrt(min_a_sq) : 0.0;
        auto g = [&](double t) {
            double s = 0;
            for (int i = 0; i < d_; ++i) s += sq(a_[i] * y[i] / (a_[i] * a_[i] + t));
            return s;
        };
        double tlo, thi;
        if (level(u) > 1.0) {
            tlo = 0.0;
            thi = 1.0;
            while (g(thi) > 1.0) thi *= 2.0;
        } else {
            tlo = -min_a_sq * (1.0 - 1e-12);
            thi = 0.0;
        }
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (tlo + thi);
            if (g(mid) > 1.0)
                tlo = mid;
            else
                thi = mid;
        }
        double t = 0.5 * (tlo + thi);
        double dsq = 0;
        for (int i = 0; i < d_; ++i) {
            double xi = y[i] * a_[i] * a_[i] / (a_[i] * a_[i] + t);
            dsq += sq(y[i] - xi);
        }
        return std::sqrt(dsq);
    }

    std::vector<double> c_, a_;
};

// ---------------------------------------------------------------------------
// halfspace-intersection polytope (and simplex on top of it)
// ---------------------------------------------------------------------------

// shared implementation for regions of the form {x : A x <= b} ∩ [0,1]^d
class HalfspaceBacked : public Region {
  public:
    HalfspaceBacked(int dims, std::vector<Halfspace> user) : Region(dims) {
        for (auto& h : user) {
            if (static_cast<int>(h.normal.size()) != dims)
                throw std::invalid_argument("halfspace normal dimension mismatch");
            double norm = 0;
            for (double v : h.normal) norm += sq(v);
            norm = std::sqrt(norm);
            if (norm < 1e-12) throw std::invalid_argument("halfspace normal must be nonzero");
            for (double& v : h.normal) v /= norm;
            h.offset /= norm;
            user_.push_back(std::move(h));
        }
        // projections run against the polytope inside the ambient cube
        all_ = user_;
        for (int i = 0; i < dims; ++i) {
            Halfspace low{std::vector<double>(dims, 0.0), 0.0};
            low.normal[i] = -1.0;
            all_.push_back(low);
            Halfspace high{std::vector<double>(dims, 0.0), 1.0};
            high.normal[i] = 1.0;
            all_.push_back(high);
        }
    }

    bool convex() const override { return true; }

    bool contains(std::span<const double> u) const override {
        check_point(u);
        for (int i = 0; i < d_; ++i)
            if (u[i] < 0.0 || u[i] > 1.0) return false;
        for (const auto& h : user_) {
            double g = -h.offset;
            for (int i = 0; i < d_; ++i) g += h.normal[i] * u[i];
            if (g > 0.0) return false;
        }
        return true;
    }

    bool near_region(std::span<const double> u, double eps) const override {
        check_point(u);
        return geom::dist_below(u, all_, eps);
    }

    bool near_complement(std::span<const double> u, double eps) const override {
        check_point(u);
        if (!contains(u)) return true;
        // complement pieces lie beyond individual user halfspaces
        std::vector<Halfspace> flipped;
        flipped.reserve(2 * static_cast<size_t>(d_) + 1);
        for (size_t j = 0; j < user_.size(); ++j) {
            flipped.clear();
            for (int i = 0; i < d_; ++i) {
                Halfspace low{std::vector<double>(d_, 0.0), 0.0};
                low.normal[i] = -1.0;
                flipped.push_back(low);
                Halfspace high{std::vector<double>(d_, 0.0), 1.0};
                high.normal[i] = 1.0;
                flipped.push_back(high);
            }
            Halfspace rev = user_[j];
            for (double& v : rev.normal) v = -v;
            rev.offset = -rev.offset;
            flipped.push_back(rev);
            if (geom::dist_below(u, flipped, eps)) return true;
        }
        return false;
    }

    bool slice_last(std::span<const double> prefix, double& lo, double& hi) const override {
        lo = 0.0;
        hi = 1.0;
        for (const auto& h : user_) {
            double rest = -h.offset;
            for (int i = 0; i < d_ - 1; ++i) rest += h.normal[i] * prefix[i];
            double nd = h.normal[d_ - 1];
            if (std::fabs(nd) < 1e-15) {
                if (rest > 0) {
                    lo = 1.0;
                    hi = 0.0;
                    return true;
                }
                continue;
            }
            double bound = -rest / nd;
            if (nd > 0)
                hi = std::min(hi, bound);
            else
                lo = std::max(lo, bound);
        }
        return true;
    }

    const std::vector<Halfspace>& user_halfspaces() const { return user_; }

  protected:
    std::vector<Halfspace> user_;  // unit normals
    std::vector<Halfspace> all_;   // user + ambient cube faces
};

// exact area of {x in [0,1]^2 : A x <= b} by successive polygon clipping
double clipped_polygon_area(const std::vector<Halfspace>& user) {
    std::vector<std::array<double, 2>> poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (const auto& h : user) {
        std::vector<std::array<double, 2>> next;
        size_t n = poly.size();
        if (n == 0) break;
        for (size_t i = 0; i < n; ++i) {
            auto cur = poly[i];
            auto nxt = poly[(i + 1) % n];
            double gc = h.normal[0] * cur[0] + h.normal[1] * cur[1] - h.offset;
            double gn = h.normal[0] * nxt[0] + h.normal[1] * nxt[1] - h.offset;
            bool cin = gc <= 0, nin = gn <= 0;
            if (cin) next.push_back(cur);
            if (cin != nin) {
                double t = gc / (gc - gn);
                next.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
            }
        }
        poly = std::move(next);
    }
    double area2 = 0;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        auto& a = poly[i];
        auto& b = poly[(i + 1) % n];
        area2 += a[0] * b[1] - b[0] * a[1];
    }
    return std::fabs(area2) / 2.0;
}

class PolytopeRegion final : public HalfspaceBacked {
  public:
    PolytopeRegion(int dims, std::vector<Halfspace> halfspaces)
        : HalfspaceBacked(dims, std::move(halfspaces)) {}

    std::string describe() const override {
        std::ostringstream os;
        os << "polytope d=" << d_ << " halfspaces=";
        for (size_t j = 0; j < user_.size(); ++j) {
            if (j) os << ";";
            os << join(user_[j].normal) << "," << user_[j].offset;
        }
        return os.str();
    }

    MeasureEstimate measure(u64 budget, u64 seed) const override {
        if (d_ == 2) return MeasureEstimate::exact(clipped_polygon_area(user_));
        return measure_monte_carlo(budget, seed);
    }
};

class SimplexRegion final : public HalfspaceBacked {
  public:
    SimplexRegion(std::vector<std::vector<double>> vertices, std::vector<Halfspace> facets,
                  double volume)
        : HalfspaceBacked(static_cast<int>(vertices.size()) - 1, std::move(facets)),
          vertices_(std::move(vertices)),
          volume_(volume) {}

    std::string describe() const override {
        std::ostringstream os;
        os << "simplex vertices=";
        for (size_t i = 0; i < vertices_.size(); ++i) {
            if (i) os << ";";
            os << join(vertices_[i]);
        }
        return os.str();
    }

    MeasureEstimate measure(u64, u64) const override { return MeasureEstimate::exact(volume_); }

    void bounding_box(std::span<double> lo, std::span<double> hi) const override {
        for (int i = 0; i < d_; ++i) {
            lo[i] = 1.0;
            hi[i] = 0.0;
            for (const auto& v : vertices_) {
                lo[i] = std::min(lo[i], v[i]);
                hi[i] = std::max(hi[i], v[i]);
            }
        }
    }

  private:
    std::vector<std::vector<double>> vertices_;
    double volume_;
};

// ---------------------------------------------------------------------------
// oracle-backed region
// ---------------------------------------------------------------------------

class OracleRegion final : public Region {
  public:
    OracleRegion(int dims, std::function<bool(std::span<const double>)> member,
                 OracleOptions opts)
        : Region(dims), member_(std::move(member)), opts_(std::move(opts)) {}

    std::string describe() const override { return "oracle d=" + std::to_string(d_); }
    bool convex() const override { return opts_.convex; }
    bool has_distance() const override { return static_cast<bool>(opts_.signed_distance); }

    bool contains(std::span<const double> u) const override {
        check_point(u);
        for (int i = 0; i < d_; ++i)
            if (u[i] < 0.0 || u[i] > 1.0) return false;
        return member_(u);
    }

    bool near_region(std::span<const double> u, double eps) const override {
        check_point(u);
        if (contains(u)) return true;
        if (!opts_.signed_distance)
            throw std::runtime_error("oracle region without distance oracle: shells unavailable");
        return opts_.signed_distance(u) < eps;
    }

    bool near_complement(std::span<const double> u, double eps) const override {
        check_point(u);
        if (!contains(u)) return true;
        if (!opts_.signed_distance)
            throw std::runtime_error("oracle region without distance oracle: shells unavailable");
        return -opts_.signed_distance(u) < eps;
    }

    void bounding_box(std::span<double> lo, std::span<double> hi) const override {
        if (opts_.bbox_lo.size() == static_cast<size_t>(d_)) {
            for (int i = 0; i < d_; ++i) {
                lo[i] = opts_.bbox_lo[i];
                hi[i] = opts_.bbox_hi[i];
            }
        } else {
            Region::bounding_box(lo, hi);
        }
    }

  private:
    std::function<bool(std::span<const double>)> member_;
    OracleOptions opts_;
};

}  // namespace

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

RegionPtr make_box(std::vector<double> lo, std::vector<double> hi) {
    return std::make_shared<BoxRegion>(std::move(lo), std::move(hi));
}

RegionPtr make_full_cube(int dims) {
    return make_box(std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0));
}

RegionPtr make_ball(std::vector<double> center, double radius) {
    return std::make_shared<BallRegion>(std::move(center), radius);
}

RegionPtr make_ellipsoid(std::vector<double> center, std::vector<double> semi_axes) {
    return std::make_shared<EllipsoidRegion>(std::move(center), std::move(semi_axes));
}

RegionPtr make_polytope(int dims, std::vector<Halfspace> halfspaces) {
    return std::make_shared<PolytopeRegion>(dims, std::move(halfspaces));
}

RegionPtr make_simplex(std::vector<std::vector<double>> vertices) {
    if (vertices.empty()) throw std::invalid_argument("simplex needs d+1 vertices");
    int d = static_cast<int>(vertices[0].size());
    if (static_cast<int>(vertices.size()) != d + 1)
        throw std::invalid_argument("simplex needs exactly d+1 vertices");
    for (const auto& v : vertices) {
        if (static_cast<int>(v.size()) != d)
            throw std::invalid_argument("simplex vertex dimension mismatch");
        for (double coord : v)
            if (coord < 0.0 || coord > 1.0)
                throw std::invalid_argument("simplex must lie inside [0,1]^d");
    }
    // volume = |det(v_i - v_0)| / d!
    std::vector<std::vector<double>> mat(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) mat[i][j] = vertices[i + 1][j] - vertices[0][j];
    double det = 1.0;
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::fabs(mat[r][col]) > std::fabs(mat[piv][col])) piv = r;
        if (std::fabs(mat[piv][col]) < 1e-12)
            throw std::invalid_argument("simplex vertices are affinely dependent");
        if (piv != col) {
            std::swap(mat[piv], mat[col]);
            det = -det;
        }
        det *= mat[col][col];
        for (int r = col + 1; r < d; ++r) {
            double f = mat[r][col] / mat[col][col];
            for (int c = col; c < d; ++c) mat[r][c] -= f * mat[col][c];
        }
    }
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    double volume = std::fabs(det) / fact;

    // facet j omits vertex j; its inward halfspace keeps the omitted vertex inside
    std::vector<Halfspace> facets;
    for (int omit = 0; omit <= d; ++omit) {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i <= d; ++i)
            if (i != omit) pts.push_back(vertices[i]);
        // normal orthogonal to the facet's spanning vectors: nullspace by elimination
        std::vector<std::vector<double>> A(d - 1, std::vector<double>(d));
        for (int r = 0; r < d - 1; ++r)
            for (int c = 0; c < d; ++c) A[r][c] = pts[r + 1][c] - pts[0][c];
        std::vector<double> n(d, 0.0);
        // Gaussian elimination to row echelon, then back-substitute a kernel vector
        std::vector<int> pivot_col(d - 1, -1);
        int row = 0;
        for (int col = 0; col < d && row < d - 1; ++col) {
            int piv = row;
            for (int r = row + 1; r < d - 1; ++r)
                if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
            if (std::fabs(A[piv][col]) < 1e-12) continue;
            std::swap(A[piv], A[row]);
            for (int r = 0; r < d - 1; ++r) {
                if (r == row) continue;
                double f = A[r][col] / A[row][col];
                for (int c = col; c < d; ++c) A[r][c] -= f * A[row][c];
            }
            pivot_col[row] = col;
            ++row;
        }
        int free_col = -1;
        for (int col = 0; col < d; ++col) {
            bool is_pivot = false;
            for (int r = 0; r < row; ++r)
                if (pivot_col[r] == col) is_pivot = true;
            if (!is_pivot) {
                free_col = col;
                break;
            }
        }
        n[free_col] = 1.0;
        for (int r = row - 1; r >= 0; --r) {
            int pc = pivot_col[r];
            double s = 0;
            for (int c = pc + 1; c < d; ++c) s += A[r][c] * n[c];
            n[pc] = -s / A[r][pc];
        }
        double b = 0;
        for (int c = 0; c < d; ++c) b += n[c] * pts[0][c];
        double g_omit = -b;
        for (int c = 0; c < d; ++c) g_omit += n[c] * vertices[omit][c];
        if (g_omit > 0) {
            for (double& v : n) v = -v;
            b = -b;
        }
        facets.push_back({std::move(n), b});
    }
    return std::make_shared<SimplexRegion>(std::move(vertices), std::move(facets), volume);
}

RegionPtr make_oracle(int dims, std::function<bool(std::span<const double>)> member,
                      OracleOptions opts) {
    return std::make_shared<OracleRegion>(dims, std::move(member), std::move(opts));
}

}  // namespace wsc
