#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gvd/builder.hpp"
#include "gvd/oracle.hpp"

namespace gvd {

// Growth constants frozen from the calibration run `gvd_calibrate --count 100 --seed 1000`
// (observed maxima 3.63, 1.58, 1.25, 0.63, 0.94), with roughly 1.5x headroom.
struct CounterBounds {
    double per_site_K = 6.0;         // sum K <= C_K m
    double per_size_A = 2.5;         // sum A <= C_A (n + m)
    double per_size_I = 2.0;         // sum I <= C_I (n + m)
    double per_site_split = 1.0;     // splits <= C_S m
    double per_size_vertices = 1.5;  // diagram vertices <= C_V (n + m)
};

CounterBounds frozen_bounds();

// Distance from a point to the nearest diagram arc, backed by a uniform grid over flattened arcs.
class ArcProximity {
public:
    ArcProximity(const std::vector<DiagramArc>& arcs, double flatten_tol = 1e-9);
    bool within(Point x, double r) const;

private:
    std::vector<Segment> segs_;
    double cell_ = 1.0 / 64;
    std::unordered_map<std::int64_t, std::vector<int>> grid_;
    std::int64_t key(long i, long j) const { return (std::int64_t(i) << 32) ^ std::int64_t(std::uint32_t(j)); }
};

// Uniform points in the polygon: a triangle picked by area, then a uniform point in it.
std::vector<Point> sample_polygon(const PartitionTree& tree, int k, std::uint64_t seed);

struct Mismatch {
    Point x;
    int expected = -1, got = -1;
    double gap = 0;  // distance disagreement
    std::string what;
};

struct SampleReport {
    int drawn = 0;
    int excluded = 0;
    int checked = 0;
    int mismatches = 0;
    std::vector<Mismatch> details;  // first few
};

// Cell of every sample (located in the diagram) against the oracle's nearest site.
SampleReport verify_samples(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle, int k, std::uint64_t seed);
// Anchor and weighted distance of every sample's subcell against the oracle's shortest path.
SampleReport oracle_subcell_check(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle, int k, std::uint64_t seed);

struct StructuralReport {
    int m = 0, n = 0;
    int cells = 0;            // sites whose own position locates to their cell
    int v1 = 0, v3 = 0, breakpoints = 0;
    int components = 0, cycles = 0;
    int bad_degree3 = 0;      // not equidistant from three sites
    int bad_degree1 = 0;      // off the boundary or not equidistant from two sites
    int bad_breakpoints = 0;  // not equidistant from both sites
    int degree_anomalies = 0;
    bool vertex_relation = false;  // V1 = V3 + 2 (components - cycles)
    std::vector<std::string> counter_violations;
    bool ok() const;
};

StructuralReport structural_checks(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle,
                                   const CounterBounds& bounds = frozen_bounds());

}  // namespace gvd
