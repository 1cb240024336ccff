#include "gvd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace gvd {

CounterBounds frozen_bounds() { return {}; }

ArcProximity::ArcProximity(const std::vector<DiagramArc>& arcs, double flatten_tol) {
    for (const DiagramArc& a : arcs) {
        auto pts = a.polyline(flatten_tol);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs_.push_back({pts[i], pts[i + 1]});
    }
    for (std::size_t s = 0; s < segs_.size(); ++s) {
        const Segment& sg = segs_[s];
        long i0 = long(std::floor(std::min(sg.a.x, sg.b.x) / cell_)), i1 = long(std::floor(std::max(sg.a.x, sg.b.x) / cell_));
        long j0 = long(std::floor(std::min(sg.a.y, sg.b.y) / cell_)), j1 = long(std::floor(std::max(sg.a.y, sg.b.y) / cell_));
        for (long i = i0; i <= i1; ++i)
            for (long j = j0; j <= j1; ++j) grid_[key(i, j)].push_back(int(s));
    }
}

bool ArcProximity::within(Point x, double r) const {
    long i0 = long(std::floor((x.x - r) / cell_)), i1 = long(std::floor((x.x + r) / cell_));
    long j0 = long(std::floor((x.y - r) / cell_)), j1 = long(std::floor((x.y + r) / cell_));
    for (long i = i0; i <= i1; ++i)
        for (long j = j0; j <= j1; ++j) {
            auto it = grid_.find(key(i, j));
            if (it == grid_.end()) continue;
            for (int s : it->second)
                if (point_segment_distance(x, segs_[std::size_t(s)]) <= r) return true;
        }
    return false;
}

std::vector<Point> sample_polygon(const PartitionTree& tree, int k, std::uint64_t seed) {
    const Polygon& poly = tree.polygon();
    std::vector<double> areas;
    for (const TreeTriangle& t : tree.triangles())
        areas.push_back(std::abs(signed_area2(poly[t.v[0]], poly[t.v[1]], poly[t.v[2]])));
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(areas.begin(), areas.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(std::size_t(std::max(k, 0)));
    for (int i = 0; i < k; ++i) {
        const TreeTriangle& t = tree.triangle(pick(rng));
        double r1 = std::sqrt(u(rng)), r2 = u(rng);
        Point a = poly[t.v[0]], b = poly[t.v[1]], c = poly[t.v[2]];
        out.push_back((1 - r1) * a + r1 * (1 - r2) * b + r1 * r2 * c);
    }
    return out;
}

namespace {

constexpr std::size_t kDetailCap = 20;

void note(SampleReport& r, Mismatch m) {
    ++r.mismatches;
    if (r.details.size() < kDetailCap) r.details.push_back(std::move(m));
}

}  // namespace

SampleReport verify_samples(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle, int k, std::uint64_t seed) {
    SampleReport rep;
    ArcProximity near_edge(g.arcs);
    for (Point x : sample_polygon(tree, k, seed)) {
        ++rep.drawn;
        if (distance_to_boundary(tree.polygon(), x) < 1e-6 || near_edge.within(x, 1e-6)) {
            ++rep.excluded;
            continue;
        }
        ++rep.checked;
        auto want = oracle.nearest_site(x);
        auto got = g.locate(tree, x);
        if (got.site != want.site)
            note(rep, {x, want.site, got.site, got.site >= 0 ? oracle.site_distance(got.site, x) - want.distance : INFINITY, "cell"});
    }
    return rep;
}

SampleReport oracle_subcell_check(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle, int k,
                                  std::uint64_t seed) {
    SampleReport rep;
    ArcProximity near_edge(g.arcs);
    ArcProximity near_spm(g.spm_arcs);
    for (Point x : sample_polygon(tree, k, seed ^ 0x5bd1e995ULL)) {
        ++rep.drawn;
        // anchors are only defined away from cell and subcell boundaries
        if (distance_to_boundary(tree.polygon(), x) < 1e-6 || near_edge.within(x, 1e-6) || near_spm.within(x, 1e-6)) {
            ++rep.excluded;
            continue;
        }
        ++rep.checked;
        auto got = g.locate(tree, x);
        if (got.site < 0) {
            note(rep, {x, oracle.nearest_site(x).site, -1, INFINITY, "unlocated"});
            continue;
        }
        Point anchor;
        double d = oracle.site_distance(got.site, x, &anchor);
        double w = got.anchor.weight + dist(x, got.anchor.pos);
        if (dist(anchor, got.anchor.pos) > 1e-9 || std::abs(w - d) > 1e-7)
            note(rep, {x, got.site, got.site, w - d, "anchor"});
    }
    return rep;
}

bool StructuralReport::ok() const {
    return cells == m && vertex_relation && bad_degree3 == 0 && bad_degree1 == 0 && bad_breakpoints == 0 && degree_anomalies == 0 &&
           counter_violations.empty();
}

StructuralReport structural_checks(const Gvd& g, const PartitionTree& tree, const GeodesicOracle& oracle, const CounterBounds& b) {
    StructuralReport r;
    r.m = tree.sites().size();
    r.n = tree.polygon().size();
    for (int s = 0; s < r.m; ++s)
        if (g.locate(tree, tree.sites()[s]).site == s) ++r.cells;
    const Polygon& poly = tree.polygon();
    auto spread = [&](const std::vector<int>& sites, Point x) {
        double lo = INFINITY, hi = -INFINITY;
        for (int s : sites) {
            double d = oracle.site_distance(s, x);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        return hi - lo;
    };
    for (const GvdVertex& v : g.vertices) {
        switch (v.kind) {
        case VertexKind::Degree3:
            ++r.v3;
            if (v.sites.size() < 3 || spread(v.sites, v.position) > 1e-7) ++r.bad_degree3;
            break;
        case VertexKind::Degree1:
            ++r.v1;
            if (v.sites.size() < 2 || spread(v.sites, v.position) > 1e-7 || distance_to_boundary(poly, v.position) > 1e-7)
                ++r.bad_degree1;
            break;
        case VertexKind::Breakpoint:
            ++r.breakpoints;
            if (v.sites.size() < 2 || spread(v.sites, v.position) > 1e-7) ++r.bad_breakpoints;
            break;
        }
    }
    r.components = g.components;
    r.cycles = g.cycles;
    r.vertex_relation = r.v1 == r.v3 + 2 * (r.components - r.cycles);
    r.degree_anomalies = int(g.diagnostics.degree_anomalies);

    auto bound = [&](const char* name, double value, double limit) {
        if (value > limit + 1e-9)
            r.counter_violations.push_back(std::string(name) + " = " + std::to_string(value) + " exceeds " + std::to_string(limit));
    };
    double m = r.m, nm = r.n + r.m;
    bound("sum K", double(g.counters.K), b.per_site_K * m);
    bound("sum A", double(g.counters.A), b.per_size_A * nm);
    bound("sum I", double(g.counters.I), b.per_size_I * nm);
    bound("splits", double(g.diagnostics.split_ops), b.per_site_split * m);
    bound("vertices", double(g.vertices.size()), b.per_size_vertices * nm);
    return r;
}

}  // namespace gvd
