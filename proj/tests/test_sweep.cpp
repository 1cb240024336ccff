#include <catch_amalgamated.hpp>

#include "gvd/sweep.hpp"
#include "support.hpp"

using namespace gvd;
using namespace gvd::test;

namespace {

Wavefront corner_wavefront(SweepContext& ctx, int tri) {
    const TreeTriangle& T = ctx.tree.triangle(tri);
    return op_initiate(ctx, tri, {T.v1, T.v12, T.v2}, true, true);
}

std::vector<ConeSource> own_sources(const PartitionTree& tree, int tri) {
    std::vector<ConeSource> out;
    for (int s : tree.triangle(tri).sites) out.push_back(full_cone(site_anchor(s, tree.sites()[s]), s));
    return out;
}

}  // namespace

TEST_CASE("initiate follows the clipped Euclidean envelope") {
    int seen = 0;
    for (std::uint64_t seed = 1; seen < 20 && seed < 200; ++seed) {
        auto f = cut_fixture(seed);
        if (!f) continue;
        ++seen;
        SweepContext ctx(f->prep->tree, *f->prep->engine);
        Wavefront wf = corner_wavefront(ctx, f->tri);
        auto want = envelope_pieces(own_sources(ctx.tree, f->tri), wf.eta);
        auto got = wavefront_pieces(wf);
        INFO("seed " << seed);
        CHECK_FALSE(compare_pieces(got, want, 1e-9));
        CHECK_NOTHROW(check_against(ctx, wf, own_sources(ctx.tree, f->tri), "initiate"));
    }
    CHECK(seen == 20);
}

TEST_CASE("split and divide cut identically") {
    int seen = 0;
    for (std::uint64_t seed = 1; seen < 50 && seed < 400; ++seed) {
        auto f = cut_fixture(seed);
        if (!f) continue;
        ++seen;
        SweepContext ctx(f->prep->tree, *f->prep->engine);
        Wavefront wf = corner_wavefront(ctx, f->tri);
        auto s = op_split(ctx, wf);
        auto d0 = op_divide(ctx, wf, false);
        auto d1 = op_divide(ctx, wf, true);
        INFO("seed " << seed);
        CHECK(same_cut(s, d0));
        CHECK(same_cut(s, d1));
        CHECK(s.first.eta.verts.back() == s.second.eta.verts.front());
    }
    CHECK(seen == 50);
}

TEST_CASE("split searches, divide walks") {
    auto f = cut_fixture(3);
    for (std::uint64_t seed = 4; !f || f->prep->tree.sites().size() < 4; ++seed) f = cut_fixture(seed);
    SweepContext ctx(f->prep->tree, *f->prep->engine);
    Wavefront wf = corner_wavefront(ctx, f->tri);
    op_split(ctx, wf);
    CHECK(ctx.split_ops == 1);
    CHECK(ctx.search_probes > 0);
    long before = ctx.stats.A;
    op_divide(ctx, wf, true);
    CHECK(ctx.divide_ops == 1);
    CHECK(ctx.stats.A > before);
}

TEST_CASE("split_at and concat restore the wavefront") {
    int seen = 0;
    for (std::uint64_t seed = 1; seen < 10 && seed < 400; ++seed) {
        auto f = cut_fixture(seed);
        if (!f) continue;
        SweepContext ctx(f->prep->tree, *f->prep->engine);
        Wavefront wf = corner_wavefront(ctx, f->tri);
        if (wf.size() < 3) continue;
        ++seen;
        auto second = std::next(wf.wavelets.begin());
        auto seam = wf.edges.at(wf.wavelets.begin()->right_edge);
        auto [a, b] = split_at(wf, second->uid);
        CHECK(a.size() == 1);
        CHECK(b.size() == wf.size() - 1);
        Wavefront back = concat(a, b, seam);
        CHECK(shape_of(back) == shape_of(wf));
        CHECK(back.edges.size() == wf.edges.size());
        CHECK_FALSE(compare_pieces(wavefront_pieces(back), wavefront_pieces(wf), 1e-12));
    }
    CHECK(seen == 10);
}

TEST_CASE("reversing twice is the identity") {
    auto f = cut_fixture(5);
    for (std::uint64_t seed = 6; !f; ++seed) f = cut_fixture(seed);
    SweepContext ctx(f->prep->tree, *f->prep->engine);
    Wavefront wf = corner_wavefront(ctx, f->tri);
    Wavefront r = wf;
    r.reverse();
    CHECK(r.eta.verts.front() == wf.eta.verts.back());
    if (wf.size() > 1) CHECK(r.wavelets.front().site == wf.wavelets.back().site);
    r.reverse();
    CHECK(shape_of(r) == shape_of(wf));
    CHECK(r.eta.verts == wf.eta.verts);
}

TEST_CASE("edge updates are idempotent") {
    int seen = 0;
    for (std::uint64_t seed = 1; seen < 15 && seed < 400; ++seed) {
        auto f = cut_fixture(seed);
        if (!f) continue;
        SweepContext ctx(f->prep->tree, *f->prep->engine);
        Wavefront wf = corner_wavefront(ctx, f->tri);
        if (wf.edges.empty()) continue;
        ++seen;
        update_all_edges(wf, ctx.stats);
        auto edges = wf.edges;
        auto shape = shape_of(wf);
        long bp = ctx.stats.breakpoints;
        update_all_edges(wf, ctx.stats);
        CHECK(ctx.stats.breakpoints == bp);
        CHECK(shape_of(wf) == shape);
        for (const auto& [id, e] : wf.edges) {
            const IncompleteEdge& old = edges.at(id);
            CHECK(dist(e.last, old.last) == 0.0);
            CHECK(e.arcs.size() == old.arcs.size());
            CHECK(e.breakpoints.size() == old.breakpoints.size());
        }
        for (const auto& [id, e] : wf.edges) {
            EdgeTarget t;
            t.chain = &wf.eta;
            CHECK(update_incomplete_edge(wf, id, t, ctx.stats) == 0);
        }
    }
    CHECK(seen == 15);
}

TEST_CASE("event queues pop by key and drop stale entries") {
    auto f = cut_fixture(1);
    for (std::uint64_t seed = 2; !f || f->prep->tree.sites().size() < 3; ++seed) f = cut_fixture(seed);
    SweepContext ctx(f->prep->tree, *f->prep->engine);
    Wavefront wf = corner_wavefront(ctx, f->tri);
    REQUIRE(!wf.edges.empty());
    int live = wf.edges.begin()->first;
    EventQueues q;
    auto pv = [&](double key, int edge, double x) {
        PotentialVertex p;
        p.degree = 1;
        p.key = key;
        p.edge_a = edge;
        p.position = {x, 0};
        p.tri = 7;
        p.entry = 2;
        return p;
    };
    q.push(pv(0.3, live, 0.1));
    q.push(pv(0.1, live, 0.2));
    q.push(pv(0.05, -12345, 0.3));  // refers to an edge that no longer exists
    q.push(pv(0.1, live, 0.1));     // same key, smaller x first
    q.push(pv(0.2, live, 0.4));
    CHECK(q.pending(7, 2) == 5);
    CHECK(q.pending(7, 3) == 0);
    SweepStats st;
    std::vector<std::pair<double, double>> order;
    while (auto p = q.pop_valid(7, 2, wf, &st)) order.emplace_back(p->key, p->position.x);
    CHECK(order == std::vector<std::pair<double, double>>{{0.1, 0.1}, {0.1, 0.2}, {0.2, 0.4}, {0.3, 0.1}});
    CHECK(st.potential_stale == 1);
    CHECK(st.potential_processed == 4);
    CHECK(st.K == 4);
}

TEST_CASE("queue key is the perpendicular distance to the diagonal") {
    auto f = cut_fixture(2);
    for (std::uint64_t seed = 3; !f; ++seed) f = cut_fixture(seed);
    const PartitionTree& tree = f->prep->tree;
    const Diagonal& d = tree.diagonal(tree.triangle(f->tri).root_diag);
    Point a = tree.polygon()[d.v1], b = tree.polygon()[d.v2];
    Point mid = 0.5 * (a + b), nrm = unit(Point{-(b - a).y, (b - a).x});
    CHECK(std::abs(diagonal_key(tree, tree.triangle(f->tri).root_diag, mid + 0.25 * nrm) - 0.25) < 1e-12);
    CHECK(diagonal_key(tree, tree.triangle(f->tri).root_diag, a) < 1e-12);
}
