#pragma once

#include <memory>
#include <optional>
#include <tuple>
#include <random>

#include "gvd/builder.hpp"
#include "gvd/generate.hpp"
#include "gvd/geodesic.hpp"
#include "gvd/oracle.hpp"
#include "gvd/polygon.hpp"

namespace gvd::test {

inline const std::vector<Point> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
inline const std::vector<Point> kLShape{{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}};

struct World {
    PreparedInput in;
    PartitionTree tree;
    std::unique_ptr<GeodesicEngine> engine;
    std::unique_ptr<GeodesicOracle> oracle;
};

inline std::unique_ptr<World> make_world(const std::vector<Point>& poly, const std::vector<Point>& sites) {
    auto w = std::make_unique<World>();
    w->in = validate_and_normalize(poly, sites);
    w->tree = PartitionTree(w->in.polygon, triangulate(w->in.polygon), w->in.sites);
    w->engine = std::make_unique<GeodesicEngine>(w->tree);
    w->oracle = std::make_unique<GeodesicOracle>(w->in.polygon.vertices, w->in.sites.sites);
    return w;
}

inline Point sample_inside(const Polygon& poly, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    for (;;) {
        Point p{u(rng), u(rng)};
        if (point_in_polygon(poly, p) && distance_to_boundary(poly, p) > 1e-6) return p;
    }
}

// A full triangle (two children) holding a handful of sites, for comparing the two ways of
// cutting a wavefront at the triangle's far corner.
struct CutFixture {
    std::unique_ptr<Prepared> prep;
    int tri = -1;
};

inline std::optional<CutFixture> cut_fixture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const char* fam = seed % 2 ? "random" : "convex";
    int n = 8 + int(seed % 13);
    std::vector<Point> poly = generate_polygon(n, fam, seed);
    auto base = prepare(poly, generate_sites(poly, 1, seed));
    std::vector<int> full;
    for (std::size_t t = 0; t < base->tree.triangles().size(); ++t)
        if (base->tree.triangle(int(t)).children.size() == 2) full.push_back(int(t));
    if (full.empty()) return std::nullopt;
    int tri = full[std::size_t(rng() % full.size())];
    const TreeTriangle& T = base->tree.triangle(tri);
    const Polygon& pn = base->input.polygon;
    std::uniform_real_distribution<double> u(0.08, 0.92);
    std::vector<Point> raw;
    int k = 1 + int(rng() % 6);
    while (int(raw.size()) < k) {
        double a = u(rng), b = u(rng);
        if (a + b > 0.92) continue;
        Point x = pn[T.v[0]] + a * (pn[T.v[1]] - pn[T.v[0]]) + b * (pn[T.v[2]] - pn[T.v[0]]);
        raw.push_back(base->input.normalization.invert(x));
    }
    CutFixture f;
    f.prep = prepare(poly, raw, 1e-9, seed);
    f.tri = tri;
    for (int s = 0; s < f.prep->tree.sites().size(); ++s)
        if (f.prep->tree.site_triangle(s) != tri) return std::nullopt;
    return f;
}

// Wavelet sites and anchor lists along the wavefront; wavelet ids are not part of the shape.
using AnchorKey = std::tuple<int, int, double, double, double>;
inline std::vector<std::pair<int, std::vector<AnchorKey>>> shape_of(const Wavefront& wf) {
    std::vector<std::pair<int, std::vector<AnchorKey>>> out;
    for (const Wavelet& w : wf.wavelets) {
        std::vector<AnchorKey> as;
        for (const AnchorRecord& a : w.anchors) as.emplace_back(a.site, a.vertex, a.pos.x, a.pos.y, a.weight);
        out.emplace_back(w.site, std::move(as));
    }
    return out;
}

inline bool same_cut(const std::pair<Wavefront, Wavefront>& a, const std::pair<Wavefront, Wavefront>& b) {
    for (auto [x, y] : {std::pair{&a.first, &b.first}, std::pair{&a.second, &b.second}}) {
        if (x->eta.verts != y->eta.verts || shape_of(*x) != shape_of(*y)) return false;
        if (compare_pieces(wavefront_pieces(*x), wavefront_pieces(*y), 1e-12)) return false;
    }
    return true;
}

}  // namespace gvd::test
