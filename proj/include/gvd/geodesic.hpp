#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gvd/geometry.hpp"
#include "gvd/polygon.hpp"

namespace gvd {

inline constexpr int kSiteAnchor = -1;

// An anchor u: polygon vertex id (or kSiteAnchor), its site, w(u) and a(u).
struct AnchorRecord {
    int vertex = kSiteAnchor;
    int site = -1;
    Point pos;
    double weight = 0.0;
    bool has_pred = false;
    int pred_vertex = kSiteAnchor;
    Point pred_pos;

    WeightedSource source() const { return {pos, weight}; }
    bool same_anchor(const AnchorRecord& o) const {
        return site == o.site && vertex == o.vertex && (vertex != kSiteAnchor || pos == o.pos);
    }
};

AnchorRecord site_anchor(int site, Point p);
AnchorRecord vertex_anchor(int site, int vertex, Point pos, double weight, const AnchorRecord& pred);

// Weighted source restricted to a cone of directions from its apex. Points of the
// cone see the apex through the interval the cone was built from.
struct ConeSource {
    AnchorRecord anchor;
    bool full = true;
    Point left, right;  // boundary directions, counterclockwise from left to right
    int tag = -1;

    bool admits(Point x, double eps = 1e-10) const;
    double value(Point x) const { return anchor.weight + dist(x, anchor.pos); }
};

ConeSource full_cone(const AnchorRecord& a, int tag = -1);
// Cone from the anchor through the interval [p, q].
ConeSource cone_through(const AnchorRecord& a, Point p, Point q, int tag = -1);

// min over admitting sources; +inf when none admits x.
double evaluate(std::span<const ConeSource> sources, Point x, int* which = nullptr);

struct EnvPiece {
    int src = -1;  // index into the source list
    double t0 = 0.0, t1 = 0.0;
};

// Lower envelope of cone sources along seg, parameterized by t in [0,1].
std::vector<EnvPiece> lower_envelope_on_segment(std::span<const ConeSource> sources, Segment seg);

// Sources in the triangle beyond seg induced by the envelope pieces on seg. Reflex endpoints of
// seg (given as vertex ids, -1 to skip) are added as full-visibility anchors.
std::vector<ConeSource> sources_beyond(std::span<const ConeSource> sources, std::span<const EnvPiece> pieces, Segment seg,
                                       const Polygon& poly, int va, int vb);

// Shortest path map of one point over the triangulation.
class PointSPM {
public:
    PointSPM(const PartitionTree& tree, int site, Point p, std::optional<int> target_tri = {});

    int site() const { return site_; }
    Point origin() const { return origin_; }
    const std::vector<ConeSource>& sources(int tri) const { return tri_sources_[std::size_t(tri)]; }
    bool visited(int tri) const { return !tri_sources_[std::size_t(tri)].empty(); }
    double distance_in(int tri, Point x) const;
    AnchorRecord anchor_in(int tri, Point x) const;
    double vertex_distance(int v) const { return vdist_[std::size_t(v)]; }
    const AnchorRecord& vertex_record(int v) const { return vrec_[std::size_t(v)]; }
    // Polygonal path from the origin to x (x located in tri).
    std::vector<Point> path_to(int tri, Point x) const;
    // SPM edges: segment from each reflex anchor along a(v)->v to the boundary.
    std::vector<Segment> spm_edges() const;
    std::vector<AnchorRecord> anchors() const;

private:
    const PartitionTree* tree_;
    int site_;
    Point origin_;
    std::vector<std::vector<ConeSource>> tri_sources_;
    std::vector<double> vdist_;
    std::vector<AnchorRecord> vrec_;
};

struct ShortestPathMap {
    int site = -1;
    std::vector<std::vector<ConeSource>> regions;  // per triangle
    std::vector<Segment> spm_edges;
};

class GeodesicEngine {
public:
    explicit GeodesicEngine(const PartitionTree& tree);

    const PartitionTree& tree() const { return *tree_; }
    const PointSPM& spm(int site) const { return spms_[std::size_t(site)]; }
    const std::vector<ConeSource>& sources(int site, int tri) const { return spms_[std::size_t(site)].sources(tri); }

    double site_distance(int site, Point x) const;
    double site_distance_in(int site, int tri, Point x) const { return spm(site).distance_in(tri, x); }
    AnchorRecord anchor_of(Point x, int site) const;
    double vertex_distance(int site, int v) const { return spm(site).vertex_distance(v); }

    std::vector<Point> shortest_path(Point p, Point q) const;
    double geodesic_distance(Point p, Point q) const;

    ShortestPathMap build_spm(int site) const;

private:
    const PartitionTree* tree_;
    std::vector<PointSPM> spms_;
};

double path_length(std::span<const Point> path);

// ---- bisector tracing ----

using SourceFn = std::function<std::vector<ConeSource>(int tri)>;

struct TracedArc {
    int tri = -1;
    AnchorRecord a, b;  // anchors on the two sides
    double t0 = 0, t1 = 0;
    Point p0, p1;
    BisectorCurve curve() const { return BisectorCurve(a.source(), b.source()); }
};

enum class TraceStop { Boundary, Watch, LeftRegion, Target, Stalled };

struct TraceResult {
    std::vector<TracedArc> arcs;
    TraceStop stop = TraceStop::Stalled;
    Point end;
    int end_tri = -1;
    int end_side_a = -1, end_side_b = -1;  // vertex ids of the side where the trace ended
    AnchorRecord watch_anchor;
};

struct TraceOptions {
    SourceFn side_a, side_b;
    SourceFn watch;                  // optional third group
    std::optional<int> confine_tri;  // stop on leaving this triangle
    std::optional<Point> target;     // stop when reaching this point
    int max_steps = 10000;
};

// Trace the curve where both sides are equally far, starting at start (in tri), heading
// initially along the direction hint.
TraceResult trace_boundary(const PartitionTree& tree, const TraceOptions& opt, int tri, Point start, Point direction_hint);

// Direction hint for leaving start along the bisector so that the point just ahead is farther from
// the excluded group than from the traced pair. Returns {} when neither direction works.
std::optional<Point> escape_direction(const PartitionTree& tree, const SourceFn& a, const SourceFn& b, const SourceFn& excluded,
                                      int tri, Point start);

// ---- Voronoi vertex primitives ----

struct VertexResult {
    Point position;
    int tri = -1;
    std::vector<TracedArc> arcs;
};

// Degree-3 vertex of three sites reached by following B(s1,s2) from start in direction hint.
std::optional<VertexResult> voronoi_vertex_deg3_from(const GeodesicEngine& eng, int s1, int s2, int s3, int tri, Point start,
                                                     Point hint);
// Degree-3 vertex of three sites anywhere in the polygon (searches the bisector of s1,s2).
std::optional<Point> voronoi_vertex_deg3(const GeodesicEngine& eng, int s1, int s2, int s3);
// Endpoint on the boundary of B(s1,s2) followed from start along hint.
std::optional<VertexResult> voronoi_vertex_deg1_from(const GeodesicEngine& eng, int s1, int s2, int tri, Point start, Point hint);
// Endpoint of B(s1,s2) on the boundary in the hinted direction (hint is a direction vector).
std::optional<Point> voronoi_vertex_deg1(const GeodesicEngine& eng, int s1, int s2, Point direction_hint);

// Arc chain along B(s,t) from one bisector point to another, switching anchors when the arc crosses
// the SPM edge of the next anchor in either list.
struct ArcChain {
    std::vector<TracedArc> arcs;
    std::vector<Point> breakpoints;
};
ArcChain trace_bisector_arcs(Point from, Point to, std::span<const AnchorRecord> anchors_s, std::span<const AnchorRecord> anchors_t);

}  // namespace gvd
