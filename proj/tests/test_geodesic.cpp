#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace gvd;
using namespace gvd::test;
using Catch::Approx;

TEST_CASE("convex shortest path is straight") {
    auto w = make_world(kSquare, {{0.5, 0.5}});
    auto path = w->engine->shortest_path({0.1, 0.1}, {0.9, 0.9});
    CHECK(path.size() == 2);
    CHECK(path_length(path) == Approx(0.8 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(w->engine->shortest_path({0.3, 0.3}, {0.3, 0.3}).size() == 1);
}

TEST_CASE("L-shape path wraps the reflex corner") {
    auto w = make_world(kLShape, {{0.75, 0.25}});
    auto path = w->engine->shortest_path({0.75, 0.25}, {0.25, 0.75});
    REQUIRE(path.size() == 3);
    CHECK(dist(path[1], {0.5, 0.5}) < 1e-12);
    CHECK(path_length(path) == Approx(w->oracle->distance({0.75, 0.25}, {0.25, 0.75})).epsilon(1e-12));
    CHECK(path_length(path) == Approx(0.7071068).epsilon(1e-7));
    AnchorRecord a = w->engine->anchor_of({0.25, 0.75}, 0);
    CHECK(dist(a.pos, {0.5, 0.5}) < 1e-12);
    CHECK(a.weight == Approx(std::sqrt(0.125)).epsilon(1e-12));
    AnchorRecord self = w->engine->anchor_of({0.9, 0.1}, 0);
    CHECK(self.vertex == kSiteAnchor);
    CHECK(self.weight == 0);
}

TEST_CASE("outside points are rejected") {
    auto w = make_world(kLShape, {{0.75, 0.25}});
    CHECK_THROWS_AS(w->engine->shortest_path({0.75, 0.25}, {0.9, 0.9}), GvdError);
}

TEST_CASE("L-shape map has one edge from the reflex vertex") {
    auto w = make_world(kLShape, {{0.75, 0.25}});
    auto spm = w->engine->build_spm(0);
    REQUIRE(spm.spm_edges.size() == 1);
    const Segment& e = spm.spm_edges[0];
    CHECK(dist(e.a, {0.5, 0.5}) < 1e-12);
    Point d = unit(Point{0.5, 0.5} - Point{0.75, 0.25});
    CHECK(std::abs(cross(d, e.b - e.a)) < 1e-12);
    CHECK(dist(e.b, {0.0, 1.0}) < 1e-12);
}

TEST_CASE("convex map has no edges") {
    auto w = make_world(kSquare, {{0.3, 0.6}});
    CHECK(w->engine->build_spm(0).spm_edges.empty());
}

TEST_CASE("distances match the oracle on generated polygons") {
    std::mt19937_64 rng(3);
    for (const char* fam : {"convex", "comb", "spiral", "random"}) {
        for (int n : {8, 16, 32}) {
            Instance inst = generate_instance(n, 2, fam, 100 + n);
            auto w = make_world(inst.polygon, inst.sites);
            const Polygon& poly = w->in.polygon;
            for (int i = 0; i < 40; ++i) {
                Point p = sample_inside(poly, rng), q = sample_inside(poly, rng);
                double got = w->engine->geodesic_distance(p, q);
                double want = w->oracle->distance(p, q);
                INFO(fam << " n=" << n << " p=" << p.x << "," << p.y << " q=" << q.x << "," << q.y);
                CHECK(std::abs(got - want) <= 1e-9);
                for (int s = 0; s < 2; ++s) {
                    Point oa;
                    double od = w->oracle->site_distance(s, q, &oa);
                    CHECK(std::abs(w->engine->site_distance(s, q) - od) <= 1e-9);
                    CHECK(dist(w->engine->anchor_of(q, s).pos, oa) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("triangle inequality on geodesic distances") {
    std::mt19937_64 rng(5);
    Instance inst = generate_instance(24, 1, "random", 9);
    auto w = make_world(inst.polygon, inst.sites);
    for (int i = 0; i < 60; ++i) {
        Point p = sample_inside(w->in.polygon, rng), q = sample_inside(w->in.polygon, rng), r = sample_inside(w->in.polygon, rng);
        CHECK(w->engine->geodesic_distance(p, q) <= w->engine->geodesic_distance(p, r) + w->engine->geodesic_distance(r, q) + 1e-12);
    }
}

TEST_CASE("square circumcenter vertex") {
    auto w = make_world(kSquare, {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}});
    auto v = voronoi_vertex_deg3(*w->engine, 0, 1, 2);
    REQUIRE(v);
    CHECK(dist(*v, {0.5, 0.425}) < 1e-9);
    std::array<int, 3> perm{0, 1, 2};
    do {
        auto u = voronoi_vertex_deg3(*w->engine, perm[0], perm[1], perm[2]);
        REQUIRE(u);
        CHECK(dist(*u, *v) < 1e-7);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("collinear sites have no degree-3 vertex") {
    auto w = make_world(kSquare, {{0.2, 0.5}, {0.5, 0.5}, {0.8, 0.5}});
    CHECK_FALSE(voronoi_vertex_deg3(*w->engine, 0, 1, 2));
}

TEST_CASE("degree-1 endpoints of a straight bisector") {
    auto w = make_world(kSquare, {{0.3, 0.5}, {0.7, 0.5}});
    auto lo = voronoi_vertex_deg1(*w->engine, 0, 1, {0, -1});
    auto hi = voronoi_vertex_deg1(*w->engine, 0, 1, {0, 1});
    REQUIRE(lo);
    REQUIRE(hi);
    CHECK(dist(*lo, {0.5, 0}) < 1e-9);
    CHECK(dist(*hi, {0.5, 1}) < 1e-9);
}

TEST_CASE("degree-1 endpoints are oracle-equidistant") {
    auto sq = make_world(kSquare, {{0.3, 0.3}, {0.7, 0.5}});
    auto l = make_world(kLShape, {{0.75, 0.3}, {0.3, 0.75}});
    for (auto* w : {sq.get(), l.get()}) {
        for (Point h : {Point{1, 1}, Point{-1, -1}}) {
            auto v = voronoi_vertex_deg1(*w->engine, 0, 1, h);
            REQUIRE(v);
            CHECK(distance_to_boundary(w->in.polygon, *v) < 1e-9);
            CHECK(std::abs(w->oracle->site_distance(0, *v) - w->oracle->site_distance(1, *v)) < 1e-7);
        }
    }
}

TEST_CASE("degree-3 vertex in the L-shape is oracle-equidistant") {
    auto w = make_world(kLShape, {{0.8, 0.25}, {0.2, 0.7}, {0.15, 0.15}});
    auto v = voronoi_vertex_deg3(*w->engine, 0, 1, 2);
    REQUIRE(v);
    double d0 = w->oracle->site_distance(0, *v), d1 = w->oracle->site_distance(1, *v), d2 = w->oracle->site_distance(2, *v);
    CHECK(std::abs(d0 - d1) < 1e-7);
    CHECK(std::abs(d0 - d2) < 1e-7);
}

TEST_CASE("bisector arcs switch at breakpoints") {
    auto w = make_world(kLShape, {{0.75, 0.3}, {0.3, 0.75}});
    auto lo = voronoi_vertex_deg1(*w->engine, 0, 1, {-1, -1});
    auto hi = voronoi_vertex_deg1(*w->engine, 0, 1, {1, 1});
    REQUIRE(lo);
    REQUIRE(hi);
    std::vector<AnchorRecord> as{site_anchor(0, w->in.sites[0])};
    std::vector<AnchorRecord> bs{site_anchor(1, w->in.sites[1])};
    auto single = trace_bisector_arcs(*lo, *hi, as, bs);
    CHECK(single.breakpoints.empty());
    CHECK(single.arcs.size() == 1);
}
