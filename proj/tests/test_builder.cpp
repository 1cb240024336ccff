#include <catch_amalgamated.hpp>

#include "gvd/error.hpp"
#include "gvd/verify.hpp"
#include "support.hpp"

using namespace gvd;
using namespace gvd::test;

namespace {

struct Built {
    std::unique_ptr<Prepared> prep;
    Gvd g;
};

Built build(const std::vector<Point>& poly, const std::vector<Point>& sites, std::optional<double> jitter = {}, std::uint64_t seed = 0) {
    Built b;
    b.prep = prepare(poly, sites, jitter, seed);
    b.g = build_gvd(b.prep->tree, *b.prep->engine);
    return b;
}

std::vector<Point> of_kind(const Gvd& g, VertexKind k) {
    std::vector<Point> out;
    for (const GvdVertex& v : g.vertices)
        if (v.kind == k) out.push_back(v.position);
    return out;
}

bool has_point(const std::vector<Point>& ps, Point x, double tol) {
    return std::any_of(ps.begin(), ps.end(), [&](Point p) { return dist(p, x) <= tol; });
}

}  // namespace

TEST_CASE("three sites in the square meet at the circumcenter") {
    Built b = build(kSquare, {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}});
    auto d3 = of_kind(b.g, VertexKind::Degree3);
    REQUIRE(d3.size() == 1);
    CHECK(dist(d3[0], {0.5, 0.425}) < 1e-7);
    CHECK(b.g.count(VertexKind::Degree1) == 3);
    for (Point p : of_kind(b.g, VertexKind::Degree1)) CHECK(distance_to_boundary(b.prep->input.polygon, p) < 1e-9);
}

TEST_CASE("two symmetric sites are split by x = 0.5") {
    Built b = build(kSquare, {{0.3, 0.5}, {0.7, 0.5}});
    auto d1 = of_kind(b.g, VertexKind::Degree1);
    REQUIRE(d1.size() == 2);
    CHECK(has_point(d1, {0.5, 0.0}, 1e-7));
    CHECK(has_point(d1, {0.5, 1.0}, 1e-7));
    CHECK(b.g.count(VertexKind::Degree3) == 0);
    REQUIRE(b.g.edges.size() == 1);
    CHECK(b.g.locate(b.prep->tree, {0.1, 0.9}).site == 0);
    CHECK(b.g.locate(b.prep->tree, {0.9, 0.1}).site == 1);
}

TEST_CASE("one site has one cell and no edges") {
    Built b = build(kSquare, {{0.3, 0.4}});
    CHECK(b.g.edges.empty());
    CHECK(b.g.vertices.empty());
    CHECK(b.g.locate(b.prep->tree, {0.9, 0.9}).site == 0);
}

TEST_CASE("L-shape: cells wrap the reflex corner") {
    Built b = build(kLShape, {{0.75, 0.25}, {0.3, 0.8}, {0.2, 0.15}}, 1e-7, 3);
    GeodesicOracle o(b.prep->input.polygon.vertices, b.prep->input.sites.sites);
    SampleReport r = verify_samples(b.g, b.prep->tree, o, 3000, 11);
    CHECK(r.mismatches == 0);
    SampleReport sub = oracle_subcell_check(b.g, b.prep->tree, o, 3000, 11);
    CHECK(sub.mismatches == 0);
    CHECK(structural_checks(b.g, b.prep->tree, o).ok());
}

TEST_CASE("exact ties are degenerate without jitter") {
    std::vector<Point> sites{{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.8}};
    try {
        prepare(kLShape, sites);
        FAIL("tie not detected");
    } catch (const GvdError& e) {
        CHECK(e.exit_code() == 3);
    }
    auto p = prepare(kLShape, sites, 1e-6, 9);
    CHECK(p->jittered);
    for (int s = 0; s < 3; ++s) CHECK(dist(p->input.sites[s], sites[std::size_t(s)]) <= 1e-6 + 1e-15);
}

TEST_CASE("convex polygons give the clipped Euclidean diagram") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Instance inst = generate_instance(10 + int(seed), 6, "convex", seed);
        Built b = build(inst.polygon, inst.sites, 1e-7, seed);
        std::mt19937_64 rng(seed);
        const auto& sites = b.prep->input.sites.sites;
        ArcProximity near(b.g.arcs);
        for (int k = 0; k < 400; ++k) {
            Point x = sample_inside(b.prep->input.polygon, rng);
            if (near.within(x, 1e-6)) continue;
            int best = 0;
            for (std::size_t s = 1; s < sites.size(); ++s)
                if (dist(x, sites[s]) < dist(x, sites[std::size_t(best)])) best = int(s);
            auto loc = b.g.locate(b.prep->tree, x);
            CHECK(loc.site == best);
            CHECK(std::abs(loc.distance - dist(x, sites[std::size_t(best)])) < 1e-12);
        }
        CHECK(b.g.spm_arcs.empty());
        CHECK(b.g.count(VertexKind::Breakpoint) == 0);
    }
}

TEST_CASE("sweep cross-checks stay silent across the generated families") {
    for (const SuiteCase& c : standard_suite(32, 500)) {
        auto p = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        BuildOptions opt;
        opt.strict = false;
        Gvd g = build_gvd(p->tree, *p->engine, opt);
        INFO(c.family << " n=" << c.n << " m=" << c.m << " seed=" << c.seed);
        CHECK(g.diagnostics.check_failures == 0);
        CHECK(g.diagnostics.search_mismatches == 0);
        CHECK(g.diagnostics.merge_curve_mismatches == 0);
        CHECK(g.diagnostics.degree_anomalies == 0);
        CHECK(g.diagnostics.potential_processed <= g.diagnostics.potential_created);
        GeodesicOracle o(p->input.polygon.vertices, p->input.sites.sites);
        CHECK(verify_samples(g, p->tree, o, 300, c.seed).mismatches == 0);
    }
}

TEST_CASE("the diagram does not depend on the root triangle") {
    for (const SuiteCase& c : standard_suite(8, 900)) {
        if (c.m < 2) continue;
        auto p = prepare(c.instance.polygon, c.instance.sites, 1e-7, c.seed);
        Gvd g = build_gvd(p->tree, *p->engine);
        auto leaves = p->tree.leaf_candidates();
        PartitionTree other(p->input.polygon, triangulate(p->input.polygon), p->input.sites, leaves.back());
        REQUIRE(other.root() != p->tree.root());
        GeodesicEngine eng(other);
        Gvd h = build_gvd(other, eng);
        CHECK(g.vertices.size() == h.vertices.size());
        for (Point x : sample_polygon(p->tree, 400, c.seed)) {
            ArcProximity near(g.arcs);
            if (near.within(x, 1e-6)) continue;
            CHECK(g.locate(p->tree, x).site == h.locate(other, x).site);
        }
    }
}

TEST_CASE("SD keeps below-sites, SD' keeps above-sites") {
    auto inst = generate_instance(16, 4, "random", 77);
    auto p = prepare(inst.polygon, inst.sites, 1e-7, 77);
    BuildOptions opt;
    opt.keep_fragments = true;
    Gvd g = build_gvd(p->tree, *p->engine, opt);
    REQUIRE(g.sd.size() == p->tree.triangles().size());
    REQUIRE(g.sd_prime.size() == p->tree.triangles().size());
    for (const TreeTriangle& t : p->tree.triangles()) {
        int id = int(&t - p->tree.triangles().data());
        if (t.root_diag < 0) continue;
        const auto& below = p->tree.below(t.root_diag);
        for (const ConeSource& s : g.sd[std::size_t(id)].sources)
            CHECK(std::binary_search(below.begin(), below.end(), s.anchor.site));
        for (const ConeSource& s : g.sd_prime[std::size_t(id)].sources)
            CHECK_FALSE(std::binary_search(below.begin(), below.end(), s.anchor.site));
    }
}
