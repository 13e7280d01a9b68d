#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wsc/common.hpp"

namespace wsc {

enum class ShellSide { outer, inner };

struct MeasureEstimate {
    enum class Method { exact, monte_carlo };
    double value = 0.0;
    double error_bound = 0.0;  // 0 for exact; 99% Hoeffding half-width otherwise
    Method method = Method::exact;
    u64 sample_count = 0;
    u64 seed = 0;

    static MeasureEstimate exact(double v) { return {v, 0.0, Method::exact, 0, 0}; }
};

struct WellShapedEstimate {
    double C = 0.0;  // max over the grid and both sides of (shell + error)/eps
    struct Row {
        double eps;
        ShellSide side;
        MeasureEstimate shell;
        double ratio;  // (value + error_bound) / eps
    };
    std::vector<Row> rows;
};

// A subset of [0,1]^d given by membership, measure and boundary-shell oracles.
// Membership uses the closed-set convention (<= in all defining inequalities)
// and returns false outside [0,1]^d. Immutable and safe to share.
class Region {
  public:
    virtual ~Region() = default;

    int dims() const { return d_; }
    virtual std::string describe() const = 0;
    virtual bool convex() const = 0;

    virtual bool contains(std::span<const double> u) const = 0;

    // Exact closed form where the kind allows it, otherwise seeded monte-carlo.
    virtual MeasureEstimate measure(u64 budget, u64 seed) const;

    // dist(u, region) < eps. True whenever u is in the region. Exact decision
    // for analytic kinds; throws for oracle kinds without a distance oracle.
    virtual bool near_region(std::span<const double> u, double eps) const = 0;

    // dist(u, [0,1]^d \ region) < eps, distances within the ambient cube.
    // True whenever u is outside the region. An empty complement (the full
    // cube) makes every inner shell empty.
    virtual bool near_complement(std::span<const double> u, double eps) const = 0;

    virtual bool has_distance() const { return true; }

    // Axis-aligned bounding box; the default is the whole cube.
    virtual void bounding_box(std::span<double> lo, std::span<double> hi) const;

    // The set {t : (prefix, t) in region} as an interval, for convex analytic
    // kinds. Returns false when the kind cannot slice; an empty slice reports
    // true with lo > hi.
    virtual bool slice_last(std::span<const double> prefix, double& lo, double& hi) const;

    // mu(region_eps^+) or mu(region_eps^-); exact closed forms per kind where
    // available, else monte-carlo over the cube using the near_* indicators.
    virtual MeasureEstimate shell_measure(double eps, ShellSide side, u64 budget, u64 seed) const;

    // max over the grid and both sides of shell/eps including the error term
    WellShapedEstimate wellshaped_constant(std::span<const double> eps_grid, u64 budget,
                                           u64 seed) const;

  protected:
    explicit Region(int dims);
    void check_point(std::span<const double> u) const;

    // shared monte-carlo shell estimator
    MeasureEstimate shell_monte_carlo(double eps, ShellSide side, u64 budget, u64 seed) const;
    MeasureEstimate measure_monte_carlo(u64 budget, u64 seed) const;

    int d_;
};

using RegionPtr = std::shared_ptr<const Region>;

// kind constructors; every factory validates region ⊆ [0,1]^d where applicable
RegionPtr make_box(std::vector<double> lo, std::vector<double> hi);
RegionPtr make_full_cube(int dims);
RegionPtr make_ball(std::vector<double> center, double radius);
RegionPtr make_ellipsoid(std::vector<double> center, std::vector<double> semi_axes);
// halfspaces n·x <= b given as (normal, offset); the ambient cube is implicit
struct Halfspace {
    std::vector<double> normal;
    double offset;
};
RegionPtr make_polytope(int dims, std::vector<Halfspace> halfspaces);
RegionPtr make_simplex(std::vector<std::vector<double>> vertices);

struct OracleOptions {
    std::function<double(std::span<const double>)> signed_distance;  // >0 outside, <0 inside
    std::vector<double> bbox_lo, bbox_hi;
    bool convex = false;
};
RegionPtr make_oracle(int dims, std::function<bool(std::span<const double>)> member,
                      OracleOptions opts = {});

// Region spec text, e.g. "ball center=0.5,0.5 radius=0.3" (see README for the schema).
RegionPtr parse_region(std::string_view text);

// volume of the d-ball of radius r
double ball_volume(int d, double r);

// Exact point-to-polytope distance helpers (unit-normal halfspaces), exposed
// for the cover containment tests and for test oracles.
namespace geom {
// dist(u, {x : all n_j·x <= b_j}) < eps, with exact active-set projection
bool dist_below(std::span<const double> u, std::span<const Halfspace> constraints, double eps);
}  // namespace geom

}  // namespace wsc
