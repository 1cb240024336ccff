#include "gvd/builder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace gvd {

void CounterLedger::add(const std::string& op, const OpCounters& c) {
    OpTally& t = ops[op];
    ++t.calls;
    t.counters.K += c.K;
    t.counters.A += c.A;
    t.counters.I += c.I;
    K += c.K;
    A += c.A;
    I += c.I;
}

int Gvd::count(VertexKind k) const {
    return int(std::count_if(vertices.begin(), vertices.end(), [&](const GvdVertex& v) { return v.kind == k; }));
}

Gvd::Location Gvd::locate(const PartitionTree& tree, Point x) const {
    Location loc;
    int t = tree.locate(x);
    if (t < 0) return loc;
    const LocalDiagram& ld = triangles[std::size_t(t)];
    int w = -1;
    double v = ld.value(x, &w);
    if (w < 0) return loc;
    loc.site = ld.sources[std::size_t(w)].anchor.site;
    loc.anchor = ld.sources[std::size_t(w)].anchor;
    loc.distance = v;
    loc.tri = t;
    return loc;
}

namespace {

using Sources = std::vector<ConeSource>;

Sources joined(std::initializer_list<const Sources*> parts) {
    Sources out;
    for (const Sources* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

void orient_from(Wavefront& w, int first) {
    if (w.eta.verts.front() == first) return;
    if (w.eta.verts.back() != first) fail_internal("wavefront chain does not end at the expected vertex");
    if (w.empty()) w.eta = w.eta.reversed();
    else w.reverse();
}

struct Builder {
    const PartitionTree& tree;
    const GeodesicEngine& eng;
    const BuildOptions& opt;
    SweepContext ctx;
    CounterLedger ledger;
    std::vector<std::optional<Wavefront>> up, down, saved;
    std::vector<Sources> below, above, own;
    std::vector<bool> handled;

    Builder(const PartitionTree& t, const GeodesicEngine& e, const BuildOptions& o) : tree(t), eng(e), opt(o), ctx(t, e) {
        ctx.strict = o.strict;
        ctx.trace = o.trace;
        std::size_t nd = tree.diagonals().size(), nt = tree.triangles().size();
        up.resize(nd);
        down.resize(nd);
        saved.resize(nd);
        below.resize(nd);
        above.resize(nd);
        own.resize(nt);
        handled.assign(nt, false);
        for (std::size_t i = 0; i < nt; ++i)
            for (int s : tree.triangle(int(i)).sites) own[i].push_back(full_cone(site_anchor(s, tree.sites()[s]), s));
    }

    template <class F>
    auto run(const char* name, F&& f) {
        OpScope scope(ctx);
        auto r = f();
        ledger.add(name, scope.delta());
        return r;
    }

    Wavefront initiate(int t, std::vector<int> chain) {
        return run("initiate", [&] { return op_initiate(ctx, t, chain, true, true); });
    }

    Wavefront extend_or_empty(int d, int t, std::vector<int> far_if_empty) {
        if (up[std::size_t(d)] && !up[std::size_t(d)]->empty())
            return run("extend", [&] { return op_extend(ctx, *up[std::size_t(d)], t); });
        return empty_wavefront(tree, std::move(far_if_empty), t);
    }

    MergeInput merge_input(int t, Sources q, Sources qp) {
        MergeInput in;
        in.tri = t;
        in.tested_sites = tree.triangle(t).sites;
        in.q_sources = std::move(q);
        in.qp_sources = std::move(qp);
        return in;
    }

    int diag(int a, int b) const { return tree.diagonal_between(a, b); }

    void sd_triangle(int t) {
        const TreeTriangle& T = tree.triangle(t);
        int d = T.root_diag;
        int v1 = T.v1, v2 = T.v2, v12 = T.v12;
        int d1 = diag(v1, v12), d2 = diag(v2, v12);
        const Sources& S = own[std::size_t(t)];
        Wavefront result;
        if (d1 >= 0 && d2 >= 0) {
            Wavefront w0 = initiate(t, {v1, v2, v12});
            Wavefront e1 = extend_or_empty(d1, t, {v1, v2, v12});
            orient_from(e1, v1);
            const Sources& b1 = below[std::size_t(d1)];
            const Sources& b2 = below[std::size_t(d2)];
            Wavefront m1 = run("merge", [&] { return op_merge(ctx, w0, e1, merge_input(t, S, b1)); });
            orient_from(m1, v1);
            check_against(ctx, m1, joined({&S, &b1}), "merge of a triangle with its first child");
            auto [md, md2] = run("divide", [&] { return op_divide(ctx, m1, false); });
            saved[std::size_t(d2)] = md2;
            Wavefront e2 = extend_or_empty(d2, t, {v2, v1, v12});
            orient_from(e2, v2);
            auto [e2d, e2d1] = run("divide", [&] { return op_divide(ctx, e2, false); });
            Wavefront ins = run("insert", [&] { return op_insert(ctx, e2d1, t, T.sites); });
            check_against(ctx, ins, joined({&S, &b2}), "insert");
            saved[std::size_t(d1)] = ins;
            result = run("merge", [&] { return op_merge(ctx, md, e2d, merge_input(t, joined({&S, &b1}), b2)); });
            check_against(ctx, result, joined({&S, &b1, &b2}), "merge into the root diagonal");
        } else if (d1 >= 0 || d2 >= 0) {
            int dc = d1 >= 0 ? d1 : d2;
            int other = d1 >= 0 ? v1 : v2;
            Wavefront wd = initiate(t, {v1, v2});
            saved[std::size_t(dc)] = initiate(t, {v12, other});
            Wavefront ec = extend_or_empty(dc, t, {v1, v2});
            const Sources& bc = below[std::size_t(dc)];
            result = run("merge", [&] { return op_merge(ctx, wd, ec, merge_input(t, S, bc)); });
            check_against(ctx, result, joined({&S, &bc}), "merge of a triangle with its child");
        } else {
            result = initiate(t, {v1, v2});
            check_against(ctx, result, S, "initiate");
        }
        if (result.eta.segments() != 1) fail_internal("root diagonal wavefront has the wrong chain");
        below[std::size_t(d)] = sources_through(result, 0);
        up[std::size_t(d)] = std::move(result);
    }

    void mark_subtree(int d) {
        for (int t : tree.subtree(d)) handled[std::size_t(t)] = true;
    }

    void propagate(int d) {
        mark_subtree(d);
        Wavefront w = *down[std::size_t(d)];
        run("propagate", [&] {
            op_propagate(ctx, w, d, [&](int t, const Wavefront& wf) {
                int rd = tree.triangle(t).root_diag;
                above[std::size_t(rd)] = sources_through(wf, 0);
            });
            return 0;
        });
    }

    Wavefront join(int t, int dc, Wavefront upper, const Sources& lower_sources, const Sources& up_sources) {
        const TreeTriangle& T = tree.triangle(t);
        Wavefront lower = saved[std::size_t(dc)] ? *saved[std::size_t(dc)] : empty_wavefront(tree, upper.eta.verts, t);
        orient_from(lower, T.v12);
        MergeInput in;
        in.tri = t;
        in.tested_sites = T.sites;
        in.q_sources = lower_sources;
        in.qp_sources = up_sources;
        Wavefront out = run("join", [&] { return op_join(ctx, lower, upper, in); });
        check_against(ctx, out, joined({&lower_sources, &up_sources}), "join");
        return out;
    }

    void after_join(int dc, Wavefront w) {
        above[std::size_t(dc)] = sources_through(w, 0);
        down[std::size_t(dc)] = std::move(w);
        if (tree.below(dc).empty()) propagate(dc);
    }

    void sdp_triangle(int t) {
        const TreeTriangle& T = tree.triangle(t);
        int d = T.root_diag;
        int v1 = T.v1, v2 = T.v2, v12 = T.v12;
        int d1 = diag(v1, v12), d2 = diag(v2, v12);
        if (!down[std::size_t(d)]) fail_internal("missing wavefront above a diagonal");
        Wavefront e = run("extend", [&] { return op_extend(ctx, *down[std::size_t(d)], t); });
        const Sources& S = own[std::size_t(t)];
        const Sources& ab = above[std::size_t(d)];
        if (d1 >= 0 && d2 >= 0) {
            orient_from(e, v1);
            bool s1 = !tree.below(d1).empty(), s2 = !tree.below(d2).empty();
            std::pair<Wavefront, Wavefront> parts;
            if (s1 && s2) parts = run("split", [&] { return op_split(ctx, e); });
            else parts = run("divide", [&] { return op_divide(ctx, e, !s1); });
            Sources l1 = joined({&S, &below[std::size_t(d2)]});
            Sources l2 = joined({&S, &below[std::size_t(d1)]});
            Wavefront j1 = join(t, d1, std::move(parts.first), l1, ab);
            Wavefront j2 = join(t, d2, std::move(parts.second), l2, ab);
            after_join(d1, std::move(j1));
            after_join(d2, std::move(j2));
        } else if (d1 >= 0 || d2 >= 0) {
            int dc = d1 >= 0 ? d1 : d2;
            if (e.eta.segments() != 1) fail_internal("extend into a one-child triangle left two sides");
            Wavefront j = join(t, dc, std::move(e), S, ab);
            after_join(dc, std::move(j));
        }
    }

    void build_sd() {
        for (int t : tree.postorder()) {
            if (t == tree.root()) continue;
            sd_triangle(t);
        }
    }

    void build_sdp() {
        int r = tree.root();
        const TreeTriangle& R = tree.triangle(r);
        if (!R.children.empty()) {
            int dr = tree.triangle(R.children[0]).root_diag;
            const Diagonal& dg = tree.diagonal(dr);
            Wavefront w = initiate(r, {dg.v1, dg.v2});
            check_against(ctx, w, own[std::size_t(r)], "initiate at the root");
            above[std::size_t(dr)] = sources_through(w, 0);
            down[std::size_t(dr)] = std::move(w);
            if (tree.below(dr).empty()) propagate(dr);
        }
        handled[std::size_t(r)] = true;
        for (int t : tree.preorder()) {
            if (handled[std::size_t(t)]) continue;
            handled[std::size_t(t)] = true;
            sdp_triangle(t);
        }
    }

    Sources final_sources(int t) const {
        const TreeTriangle& T = tree.triangle(t);
        Sources s = own[std::size_t(t)];
        for (int c : T.children) {
            const Sources& b = below[std::size_t(tree.triangle(c).root_diag)];
            s.insert(s.end(), b.begin(), b.end());
        }
        if (T.root_diag >= 0) {
            const Sources& a = above[std::size_t(T.root_diag)];
            s.insert(s.end(), a.begin(), a.end());
        }
        return s;
    }

    Sources sd_sources(int t) const {
        const TreeTriangle& T = tree.triangle(t);
        Sources s = own[std::size_t(t)];
        for (int c : T.children) {
            const Sources& b = below[std::size_t(tree.triangle(c).root_diag)];
            s.insert(s.end(), b.begin(), b.end());
        }
        return s;
    }
};

// ---- assembling the global structure ----

struct NodeIndex {
    std::vector<Point> pts;
    std::map<std::pair<long, long>, std::vector<int>> grid;
    static constexpr double kCell = 1e-6;

    int find_or_add(Point p) {
        long gx = long(std::floor(p.x / kCell)), gy = long(std::floor(p.y / kCell));
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({gx + dx, gy + dy});
                if (it == grid.end()) continue;
                for (int i : it->second)
                    if (dist(pts[std::size_t(i)], p) < 1e-7) return i;
            }
        pts.push_back(p);
        grid[{gx, gy}].push_back(int(pts.size()) - 1);
        return int(pts.size()) - 1;
    }
};

bool same_pair(const DiagramArc& x, const DiagramArc& y) {
    return (x.a.same_anchor(y.a) && x.b.same_anchor(y.b)) || (x.a.same_anchor(y.b) && x.b.same_anchor(y.a));
}

void assemble(const PartitionTree& tree, Gvd& g) {
    {
        // arcs whose ends merge into one node carry no structure and would read as loops
        NodeIndex probe;
        for (LocalDiagram& ld : g.triangles)
            std::erase_if(ld.arcs, [&](const DiagramArc& a) { return probe.find_or_add(a.p0) == probe.find_or_add(a.p1); });
    }
    for (const LocalDiagram& ld : g.triangles) {
        g.arcs.insert(g.arcs.end(), ld.arcs.begin(), ld.arcs.end());
        g.spm_arcs.insert(g.spm_arcs.end(), ld.spm_arcs.begin(), ld.spm_arcs.end());
    }
    NodeIndex nodes;
    std::vector<std::array<int, 2>> ends(g.arcs.size());
    for (std::size_t i = 0; i < g.arcs.size(); ++i) {
        ends[i][0] = nodes.find_or_add(g.arcs[i].p0);
        ends[i][1] = nodes.find_or_add(g.arcs[i].p1);
    }
    std::size_t nn = nodes.pts.size();
    std::vector<std::vector<std::pair<int, int>>> inc(nn);  // (arc, end)
    for (std::size_t i = 0; i < g.arcs.size(); ++i)
        for (int e = 0; e < 2; ++e) inc[std::size_t(ends[i][std::size_t(e)])].push_back({int(i), e});

    const Polygon& poly = tree.polygon();
    // -1: pass-through, otherwise index into g.vertices
    std::vector<int> vid(nn, -1);
    std::vector<bool> structural(nn, false);
    for (std::size_t n = 0; n < nn; ++n) {
        Point x = nodes.pts[n];
        std::map<int, double> best;
        for (std::size_t t = 0; t < g.triangles.size(); ++t) {
            if (!tree.contains(int(t), x, 1e-9)) continue;
            for (const ConeSource& s : g.triangles[t].sources) {
                if (!s.admits(x, 1e-9)) continue;
                double v = s.value(x);
                auto it = best.find(s.anchor.site);
                if (it == best.end() || v < it->second) best[s.anchor.site] = v;
            }
        }
        double gmin = 1e300;
        for (auto& [s, v] : best) gmin = std::min(gmin, v);
        std::vector<int> tied;
        for (auto& [s, v] : best)
            if (v <= gmin + 1e-8) tied.push_back(s);
        int deg = int(inc[n].size());
        bool boundary = distance_to_boundary(poly, x) < 1e-9;
        GvdVertex v;
        v.position = x;
        v.degree = deg;
        v.sites = tied;
        if (boundary && deg == 1) {
            v.kind = VertexKind::Degree1;
        } else if (!boundary && tied.size() >= 3) {
            v.kind = VertexKind::Degree3;
            if (deg != 3) ++g.diagnostics.degree_anomalies;
        } else if (deg == 2) {
            const DiagramArc& a = g.arcs[std::size_t(inc[n][0].first)];
            const DiagramArc& b = g.arcs[std::size_t(inc[n][1].first)];
            if (same_pair(a, b)) continue;
            v.kind = VertexKind::Breakpoint;
        } else {
            ++g.diagnostics.degree_anomalies;
            v.kind = boundary ? VertexKind::Degree1 : VertexKind::Degree3;
        }
        vid[n] = int(g.vertices.size());
        structural[n] = v.kind != VertexKind::Breakpoint;
        g.vertices.push_back(v);
    }

    std::vector<bool> used(g.arcs.size(), false);
    auto walk = [&](int start_node, int arc, int end) {
        GvdEdge e;
        e.site_a = g.arcs[std::size_t(arc)].a.site;
        e.site_b = g.arcs[std::size_t(arc)].b.site;
        e.v0 = vid[std::size_t(start_node)];
        int node = start_node;
        for (int guard = 0; guard <= int(g.arcs.size()); ++guard) {
            used[std::size_t(arc)] = true;
            e.arcs.push_back(arc);
            node = ends[std::size_t(arc)][std::size_t(1 - end)];
            if (structural[std::size_t(node)] || inc[std::size_t(node)].size() != 2) break;
            auto [a2, e2] = inc[std::size_t(node)][0].first == arc ? inc[std::size_t(node)][1] : inc[std::size_t(node)][0];
            if (used[std::size_t(a2)]) break;
            arc = a2;
            end = e2;
        }
        e.v1 = structural[std::size_t(node)] ? vid[std::size_t(node)] : -1;
        g.edges.push_back(e);
    };
    for (std::size_t n = 0; n < nn; ++n) {
        if (!structural[n]) continue;
        for (auto [arc, end] : inc[n])
            if (!used[std::size_t(arc)]) walk(int(n), arc, end);
    }
    for (std::size_t i = 0; i < g.arcs.size(); ++i)
        if (!used[i]) walk(ends[i][0], int(i), 0);

    // structural graph: components and cycle rank
    std::vector<int> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int x) { return parent[std::size_t(x)] == x ? x : parent[std::size_t(x)] = root(parent[std::size_t(x)]); };
    int V = 0, E = 0;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        if (g.vertices[i].kind != VertexKind::Breakpoint) ++V;
    for (const GvdEdge& e : g.edges) {
        if (e.v0 < 0 || e.v1 < 0) continue;
        ++E;
        parent[std::size_t(root(e.v0))] = root(e.v1);
    }
    std::set<int> comps;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        if (g.vertices[i].kind != VertexKind::Breakpoint) comps.insert(root(int(i)));
    g.components = int(comps.size());
    g.cycles = E - V + g.components;
}

}  // namespace

Gvd build_gvd(const PartitionTree& tree, const GeodesicEngine& eng, const BuildOptions& opt) {
    Builder b(tree, eng, opt);
    b.build_sd();
    b.build_sdp();
    Gvd g;
    std::size_t nt = tree.triangles().size();
    for (std::size_t t = 0; t < nt; ++t) g.triangles.push_back(build_local_diagram(tree, int(t), b.final_sources(int(t))));
    if (opt.keep_fragments) {
        for (std::size_t t = 0; t < nt; ++t) {
            g.sd.push_back(build_local_diagram(tree, int(t), b.sd_sources(int(t))));
            int rd = tree.triangle(int(t)).root_diag;
            g.sd_prime.push_back(build_local_diagram(tree, int(t), rd >= 0 ? b.above[std::size_t(rd)] : Sources{}));
        }
    }
    assemble(tree, g);
    g.borders = b.ctx.borders;
    g.counters = b.ledger;
    BuildDiagnostics& d = g.diagnostics;
    d.check_failures = b.ctx.check_failures;
    d.near_ties = b.ctx.near_ties;
    d.search_mismatches = b.ctx.search_mismatches;
    d.insert_mismatches = b.ctx.insert_mismatches;
    d.merge_curve_mismatches = b.ctx.merge_curve_mismatches;
    d.potential_created = b.ctx.stats.potential_created;
    d.potential_processed = b.ctx.stats.potential_processed;
    d.potential_stale = b.ctx.stats.potential_stale;
    d.split_ops = b.ctx.split_ops;
    d.divide_ops = b.ctx.divide_ops;
    d.search_probes = b.ctx.search_probes;
    return g;
}

std::unique_ptr<Prepared> prepare(const std::vector<Point>& polygon, const std::vector<Point>& sites, std::optional<double> jitter,
                                  std::uint64_t seed) {
    auto p = std::make_unique<Prepared>();
    p->input = validate_and_normalize(polygon, sites);
    Triangulation tri = triangulate(p->input.polygon);
    auto passes = [&](const SiteSet& s) {
        PartitionTree t(p->input.polygon, tri, s);
        GeodesicEngine e(t);
        return check_vertex_ties(p->input.polygon, s, [&](int site, int v) { return e.vertex_distance(site, v); }).ok;
    };
    SiteSet s = enforce_general_position(p->input.polygon, p->input.sites,
                                          jitter ? std::optional<double>(*jitter / p->input.normalization.scale) : std::nullopt, seed, passes);
    p->jittered = s.sites != p->input.sites.sites;
    p->input.sites = s;
    p->tree = PartitionTree(p->input.polygon, tri, s);
    p->engine = std::make_unique<GeodesicEngine>(p->tree);
    return p;
}

}  // namespace gvd
