#include "gvd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sweep_detail.hpp"

namespace gvd {

using namespace detail;

Wavefront empty_wavefront(const PartitionTree& tree, std::vector<int> chain, int home_tri) {
    Wavefront w;
    w.eta = Chain::of(tree.polygon(), std::move(chain));
    w.home_tri = home_tri;
    return w;
}

void describe(const SweepContext& ctx, const Wavefront& wf) {
    if (!ctx.trace) return;
    std::string chain = "  chain";
    for (int v : wf.eta.verts) chain += " " + std::to_string(v);
    ctx.log(chain);
    for (const Wavelet& w : wf.wavelets) {
        std::string line = "  wavelet " + std::to_string(w.uid) + " site " + std::to_string(w.site) + ":";
        for (const AnchorRecord& a : w.anchors) line += " " + std::to_string(a.vertex) + "@" + std::to_string(a.weight);
        ctx.log(line);
    }
    for (const auto& [id, e] : wf.edges)
        ctx.log("  edge " + std::to_string(id) + " sites " + std::to_string(e.left_site) + "/" + std::to_string(e.right_site) + " at (" +
                std::to_string(e.last.x) + ", " + std::to_string(e.last.y) + ") heading (" + std::to_string(e.heading.x) + ", " +
                std::to_string(e.heading.y) + ")");
}

namespace {

// Distance implied by a piece list at chain parameter s; +inf where no piece covers s.
double piece_value(const Chain& eta, const std::vector<Piece>& pieces, double s) {
    double best = INFINITY;
    for (const Piece& p : pieces)
        if (p.s0 <= s && s <= p.s1) best = std::min(best, p.anchor.weight + dist(eta.at(s), p.anchor.pos));
    return best;
}

// Near-degenerate inputs can make the two piece lists differ on slivers where the competing
// anchors are equally far. Accept those when the implied distances agree everywhere.
bool same_distances(const Chain& eta, const std::vector<Piece>& got, const std::vector<Piece>& want, double tol) {
    std::vector<double> probes;
    const int dense = 256;
    for (int i = 0; i <= dense; ++i) probes.push_back(eta.length() * i / dense);
    for (const auto* list : {&got, &want})
        for (const Piece& p : *list) probes.push_back(0.5 * (p.s0 + p.s1));
    for (double s : probes) {
        double a = piece_value(eta, got, s), b = piece_value(eta, want, s);
        if (std::isinf(a) != std::isinf(b)) return false;
        if (!std::isinf(a) && std::abs(a - b) > tol) return false;
    }
    return true;
}

}  // namespace

void check_against(SweepContext& ctx, const Wavefront& wf, const std::vector<ConeSource>& reference, const std::string& what) {
    if (wf.eta.empty()) return;
    auto want = envelope_pieces(reference, wf.eta);
    std::vector<Piece> got = wf.empty() ? std::vector<Piece>{} : wavefront_pieces(wf);
    std::erase_if(want, [](const Piece& p) { return p.site < 0; });
    auto bad = compare_pieces(got, want);
    if (!bad) return;
    if (same_distances(wf.eta, got, want, 1e-9)) {
        ++ctx.near_ties;
        ctx.log(what + ": pieces differ only where distances tie: " + *bad);
        return;
    }
    ++ctx.check_failures;
    ctx.log(what + ": " + *bad);
    if (ctx.trace) {
        describe(ctx, wf);
        for (const ConeSource& c : reference)
            ctx.log("  source site " + std::to_string(c.anchor.site) + " vertex " + std::to_string(c.anchor.vertex) +
                    (c.full ? " full" : " cone"));
    }
    if (ctx.strict) fail_internal(what + ": wavefront disagrees with its sources (" + *bad + ")");
}

void ensure_endpoint_anchors(SweepContext& ctx, Wavefront& wf, bool front, bool back) {
    if (wf.empty() || wf.eta.empty()) return;
    const Polygon& poly = ctx.tree.polygon();
    auto make = [&](const AnchorRecord& u, int v) {
        return vertex_anchor(u.site, v, poly[v], u.weight + dist(u.pos, poly[v]), u);
    };
    if (front) {
        int v = wf.eta.verts.front();
        Wavelet& w = wf.wavelets.front();
        if (poly.reflex[std::size_t(v)] && w.anchors.front().vertex != v) insert_anchor_front(w, make(w.anchors.front(), v), &ctx.stats);
    }
    if (back) {
        int v = wf.eta.verts.back();
        Wavelet& w = wf.wavelets.back();
        if (poly.reflex[std::size_t(v)] && w.anchors.back().vertex != v) insert_anchor_back(w, make(w.anchors.back(), v), &ctx.stats);
    }
}

namespace {

SourceFn site_fn(const GeodesicEngine& eng, int s) {
    return [&eng, s](int tri) { return eng.sources(s, tri); };
}

// Vertices of the Euclidean diagram of the triangle's sites, clipped to the triangle.
long euclidean_vertex_count(const PartitionTree& tree, int tri) {
    const auto& ids = tree.triangle(tri).sites;
    const Polygon& poly = tree.polygon();
    const TreeTriangle& T = tree.triangle(tri);
    auto nearest_gap_ok = [&](Point x, std::initializer_list<int> own) {
        double d = dist(x, tree.sites()[*own.begin()]);
        for (int s : ids) {
            if (std::find(own.begin(), own.end(), s) != own.end()) continue;
            if (dist(x, tree.sites()[s]) < d - 1e-12) return false;
        }
        return true;
    };
    long n = 0;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            WeightedSource a{tree.sites()[ids[i]], 0}, b{tree.sites()[ids[j]], 0};
            for (std::size_t k = j + 1; k < ids.size(); ++k) {
                WeightedSource c{tree.sites()[ids[k]], 0};
                for (Point x : equidistant_points3(a, b, c))
                    if (tree.contains(tri, x) && nearest_gap_ok(x, {ids[i], ids[j], ids[k]})) ++n;
            }
            BisectorCurve bc(a, b);
            for (int e = 0; e < 3; ++e) {
                if (T.nbr[std::size_t(e)] >= 0) continue;
                Point p = poly[T.v[std::size_t(e)]], q = poly[T.v[std::size_t((e + 1) % 3)]];
                for (double t : bc.line_params(p, q)) {
                    Point x = bc.at(t);
                    double u = project_param(x, {p, q});
                    if (u >= 0 && u <= 1 && nearest_gap_ok(x, {ids[i], ids[j]})) ++n;
                }
            }
        }
    return n;
}

}  // namespace

Wavefront op_initiate(SweepContext& ctx, int tri, std::vector<int> chain, bool anchor_front, bool anchor_back) {
    Wavefront wf = empty_wavefront(ctx.tree, std::move(chain), tri);
    const auto& ids = ctx.tree.triangle(tri).sites;
    if (ids.empty()) return wf;
    std::vector<ConeSource> src;
    for (int s : ids) src.push_back(full_cone(site_anchor(s, ctx.tree.sites()[s]), s));
    std::vector<Piece> pieces = envelope_pieces(src, wf.eta);
    std::vector<int> seams;
    for (const Piece& p : pieces) {
        if (p.site < 0 || p.s1 - p.s0 <= 1e-12) continue;
        Wavelet w;
        w.uid = fresh_id();
        w.site = p.site;
        w.anchors.push_back(p.anchor);
        if (!wf.wavelets.empty()) {
            IncompleteEdge e;
            e.id = fresh_id();
            e.last = wf.eta.at(p.s0);
            e.heading = heading_into_unswept(ctx.tree, wf, wf.wavelets.back().anchors.back(), p.anchor, e.last);
            wf.wavelets.back().right_edge = e.id;
            wf.edges[e.id] = e;
            seams.push_back(e.id);
        }
        wf.wavelets.push_back(std::move(w));
    }
    wf.relink();
    ensure_endpoint_anchors(ctx, wf, anchor_front, anchor_back);
    ctx.stats.I += euclidean_vertex_count(ctx.tree, tri);
    for (int e : seams) generate_potential_vertices(ctx.eng, wf, e, ctx.queues, ctx.stats);
    ctx.log("initiate tri " + std::to_string(tri) + ": " + std::to_string(wf.size()) + " wavelets");
    return wf;
}

namespace {

int third_vertex(const TreeTriangle& T, int a, int b) {
    for (int v : T.v)
        if (v != a && v != b) return v;
    fail_internal("degenerate triangle");
}

void process_degree3(SweepContext& ctx, Wavefront& wf, const PotentialVertex& pv) {
    int a = pv.edge_a, b = pv.edge_b;
    if (wf.edges.at(a).right_uid != wf.edges.at(b).left_uid) std::swap(a, b);
    if (wf.edges.at(a).right_uid != wf.edges.at(b).left_uid) fail_internal("degree-3 event between non-adjacent edges");
    EdgeTarget tg;
    tg.point = pv.position;
    update_incomplete_edge(wf, a, tg, ctx.stats);
    update_incomplete_edge(wf, b, tg, ctx.stats);
    int lu = wf.edges.at(a).left_uid, mu = wf.edges.at(a).right_uid, ru = wf.edges.at(b).right_uid;
    auto L = wf.find(lu), M = wf.find(mu), R = wf.find(ru);
    int ls = L->site, ms = M->site, rs = R->site;
    const AnchorRecord la = L->anchors.back(), ra = R->anchors.front();
    if (!has_bisector(la, ra)) fail_internal("new edge between anchors without a bisector");
    IncompleteEdge e;
    e.id = fresh_id();
    e.has_fixed_vertex = true;
    e.fixed_vertex = pv.position;
    e.last = pv.position;
    auto h = escape_direction(ctx.tree, site_fn(ctx.eng, ls), site_fn(ctx.eng, rs), site_fn(ctx.eng, ms), pv.tri, pv.position);
    if (!h) {
        BisectorCurve c(la.source(), ra.source());
        Point tg2 = c.tangent(c.param_of(pv.position));
        double best = -1e300;
        for (double sgn : {1.0, -1.0}) {
            Point y = pv.position + 1e-6 * sgn * unit(tg2);
            double gap = ctx.eng.site_distance(ms, y) - weighted_value(la, y);
            if (gap > best) {
                best = gap;
                h = sgn * tg2;
            }
        }
    }
    e.heading = *h;
    wf.delete_wavelet(M);
    L->right_edge = e.id;
    wf.edges.erase(a);
    wf.edges.erase(b);
    wf.edges[e.id] = e;
    wf.relink();
    ctx.fixed_deg3.push_back(pv.position);
    ++ctx.stats.I;
    generate_potential_vertices(ctx.eng, wf, e.id, ctx.queues, ctx.stats);
}

void process_degree1(SweepContext& ctx, Wavefront& wf, const PotentialVertex& pv, int va, int apex, int vb) {
    const Polygon& poly = ctx.tree.polygon();
    Point v = pv.position;
    auto on_polygon_side = [&](int p, int q) {
        return ctx.tree.diagonal_between(p, q) < 0 && point_segment_distance(v, {poly[p], poly[q]}) < 1e-9;
    };
    const IncompleteEdge& e = wf.edges.at(pv.edge_a);
    bool front;
    if (on_polygon_side(va, apex)) front = true;
    else if (on_polygon_side(apex, vb)) front = false;
    else fail_internal("degree-1 event off the far polygon sides");
    int dying = front ? e.left_uid : e.right_uid;
    int end_uid = front ? wf.wavelets.front().uid : wf.wavelets.back().uid;
    if (dying != end_uid) fail_internal("degree-1 event away from the wavefront end");
    EdgeTarget tg;
    tg.point = v;
    update_incomplete_edge(wf, pv.edge_a, tg, ctx.stats);
    wf.delete_wavelet(wf.find(dying));
    wf.relink();
    ctx.fixed_deg1.push_back(v);
    ++ctx.stats.I;
}

// Removes what lies past the chain parameter `cut` (keep_front) or before it.
void trim_to(SweepContext& ctx, Wavefront& wf, double cut, bool keep_front) {
    auto pieces = wavefront_pieces(wf);
    auto spans = wavelet_spans(pieces);
    std::set<int> drop_wavelets;
    for (const WaveletSpan& sp : spans) {
        bool beyond = keep_front ? sp.lo >= cut - 1e-12 : sp.hi <= cut + 1e-12;
        if (beyond) drop_wavelets.insert(sp.uid);
    }
    if (int(drop_wavelets.size()) == wf.size()) fail_internal("extended wavefront lies entirely on a polygon side");
    if (!drop_wavelets.empty()) {
        ++ctx.check_failures;
        if (ctx.strict) fail_internal("wavelet reached a polygon side without a degree-1 event");
        for (int u : drop_wavelets) wf.delete_wavelet(wf.find(u));
        wf.relink();
        pieces = wavefront_pieces(wf);
    }
    // anchors of the extreme wavelet that live only past the cut
    Wavelet& w = keep_front ? wf.wavelets.back() : wf.wavelets.front();
    std::vector<const Piece*> mine;
    for (const Piece& p : pieces)
        if (p.wavelet_uid == w.uid) mine.push_back(&p);
    std::size_t k = 0;
    auto it = w.anchors.begin();
    std::vector<std::list<AnchorRecord>::iterator> drop;
    for (; it != w.anchors.end(); ++it, ++k) {
        const Piece& p = *mine[k];
        bool past = keep_front ? (p.s0 >= cut - 1e-12 && !(p.s0 <= cut + 1e-12 && p.s1 - p.s0 > 1e-12 && k == 0))
                               : (p.s1 <= cut + 1e-12 && !(p.s1 >= cut - 1e-12 && p.s1 - p.s0 > 1e-12 && k + 1 == mine.size()));
        if (past) drop.push_back(it);
    }
    if (drop.size() == w.anchors.size()) drop.pop_back();
    if (keep_front) {
        // keep the anchor that contains the cut: the last one starting before it
        std::size_t keep_upto = 0;
        for (std::size_t i = 0; i < mine.size(); ++i)
            if (mine[i]->s0 < cut - 1e-12 || i == 0) keep_upto = i;
        auto a = w.anchors.begin();
        std::advance(a, long(keep_upto + 1));
        while (a != w.anchors.end()) {
            a = w.anchors.erase(a);
            ++ctx.stats.A;
        }
    } else {
        std::size_t keep_from = mine.size() - 1;
        for (std::size_t i = mine.size(); i-- > 0;)
            if (mine[i]->s1 > cut + 1e-12 || i + 1 == mine.size()) keep_from = i;
        for (std::size_t i = 0; i < keep_from; ++i) {
            w.anchors.pop_front();
            ++ctx.stats.A;
        }
    }
}

}  // namespace

Wavefront op_extend(SweepContext& ctx, Wavefront wf, int tri) {
    const PartitionTree& tree = ctx.tree;
    if (wf.eta.segments() != 1) fail_internal("extend needs a wavefront over one diagonal");
    int va = wf.eta.verts[0], vb = wf.eta.verts[1];
    int apex = third_vertex(tree.triangle(tri), va, vb);
    int entry = tree.diagonal_between(va, vb);
    if (entry < 0) fail_internal("extend across a polygon side");
    if (wf.empty()) {
        bool d1 = tree.diagonal_between(va, apex) >= 0, d2 = tree.diagonal_between(apex, vb) >= 0;
        if (d1 && !d2) return empty_wavefront(tree, {va, apex}, tri);
        if (d2 && !d1) return empty_wavefront(tree, {apex, vb}, tri);
        return empty_wavefront(tree, {va, apex, vb}, tri);
    }
    ctx.log("extend into tri " + std::to_string(tri));
    describe(ctx, wf);
    update_all_edges(wf, ctx.stats);
    auto reference = sources_through(wf, 0);
    while (auto pv = ctx.queues.pop_valid(tri, entry, wf, &ctx.stats)) {
        ctx.log("extend tri " + std::to_string(tri) + ": degree-" + std::to_string(pv->degree) + " at (" +
                std::to_string(pv->position.x) + ", " + std::to_string(pv->position.y) + ")");
        if (pv->degree == 3) process_degree3(ctx, wf, *pv);
        else process_degree1(ctx, wf, *pv, va, apex, vb);
    }
    Chain far = Chain::of(tree.polygon(), {va, apex, vb});
    {
        EdgeTarget tg;
        tg.chain = &far;
        std::vector<int> ids;
        for (const auto& [id, e] : wf.edges) ids.push_back(id);
        for (int id : ids) update_incomplete_edge(wf, id, tg, ctx.stats);
    }
    wf.eta = far;
    wf.home_tri = tri;
    bool diag1 = tree.diagonal_between(va, apex) >= 0, diag2 = tree.diagonal_between(apex, vb) >= 0;
    if (diag1 && diag2) {
        check_against(ctx, wf, reference, "extend");
        return wf;
    }
    if (!diag1 && !diag2) {
        if (wf.size() > 1) {
            ++ctx.check_failures;
            if (ctx.strict) fail_internal("consumed triangle left several wavelets");
        }
        return empty_wavefront(tree, {va, apex, vb}, tri);
    }
    double sa = far.start_of(1);
    trim_to(ctx, wf, sa, diag1);
    if (diag1) {
        wf.eta = Chain::of(tree.polygon(), {va, apex});
        ensure_endpoint_anchors(ctx, wf, false, true);
    } else {
        wf.eta = Chain::of(tree.polygon(), {apex, vb});
        ensure_endpoint_anchors(ctx, wf, true, false);
    }
    check_against(ctx, wf, reference, "extend");
    return wf;
}

namespace {

std::pair<Wavefront, Wavefront> cut_at_middle(SweepContext& ctx, const Wavefront& wf, const std::vector<Piece>& pieces,
                                               std::size_t at) {
    const Polygon& poly = ctx.tree.polygon();
    int a = wf.eta.verts[0], v = wf.eta.verts[1], b = wf.eta.verts[2];
    const Piece& p = pieces[at];
    std::size_t k = 0;
    for (std::size_t i = 0; i < at; ++i)
        if (pieces[i].wavelet_uid == p.wavelet_uid) ++k;
    Wavefront A = empty_wavefront(ctx.tree, {a, v}, wf.home_tri);
    Wavefront B = empty_wavefront(ctx.tree, {v, b}, wf.home_tri);
    bool second = false;
    for (const Wavelet& w : wf.wavelets) {
        if (w.uid == p.wavelet_uid) {
            Wavelet wa = w, wb = w;
            wa.anchors.clear();
            wb.anchors.clear();
            std::size_t i = 0;
            for (const AnchorRecord& r : w.anchors) {
                if (i <= k) wa.anchors.push_back(r);
                if (i >= k) wb.anchors.push_back(r);
                ++i;
            }
            wa.right_edge = -1;
            wb.uid = fresh_id();
            A.wavelets.push_back(wa);
            B.wavelets.push_back(wb);
            second = true;
            continue;
        }
        (second ? B : A).wavelets.push_back(w);
    }
    A.edges = wf.edges;
    B.edges = wf.edges;
    A.relink();
    B.relink();
    if (poly.reflex[std::size_t(v)] && p.anchor.vertex != v) {
        AnchorRecord r = vertex_anchor(p.anchor.site, v, poly[v], p.anchor.weight + dist(p.anchor.pos, poly[v]), p.anchor);
        insert_anchor_back(A.wavelets.back(), r, &ctx.stats);
        insert_anchor_front(B.wavelets.front(), r, &ctx.stats);
    }
    return {std::move(A), std::move(B)};
}

bool contains_param(const Piece& p, double s) { return p.s0 <= s + 1e-12 && p.s1 >= s - 1e-12 && p.s1 - p.s0 > 1e-12; }

}  // namespace

std::pair<Wavefront, Wavefront> op_split(SweepContext& ctx, Wavefront wf) {
    if (wf.eta.segments() != 2) fail_internal("split needs a wavefront over two diagonals");
    ++ctx.split_ops;
    if (wf.empty())
        return {empty_wavefront(ctx.tree, {wf.eta.verts[0], wf.eta.verts[1]}, wf.home_tri),
                empty_wavefront(ctx.tree, {wf.eta.verts[1], wf.eta.verts[2]}, wf.home_tri)};
    update_all_edges(wf, ctx.stats);
    auto pieces = wavefront_pieces(wf);
    auto spans = wavelet_spans(pieces);
    double sv = wf.eta.start_of(1);
    int lo = 0, hi = int(spans.size()) - 1, w = -1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        ++ctx.search_probes;
        if (spans[std::size_t(mid)].hi < sv - 1e-12) lo = mid + 1;
        else if (spans[std::size_t(mid)].lo > sv + 1e-12) hi = mid - 1;
        else {
            w = mid;
            break;
        }
    }
    if (w < 0) fail_internal("split vertex not covered by the wavefront");
    const WaveletSpan& sp = spans[std::size_t(w)];
    std::vector<std::size_t> idx;
    for (std::size_t i = sp.first; i <= sp.last; ++i)
        if (pieces[i].s1 - pieces[i].s0 > 1e-12) idx.push_back(i);
    int a = 0, b = int(idx.size()) - 1;
    std::size_t at = sp.first;
    while (a <= b) {
        int mid = (a + b) / 2;
        ++ctx.search_probes;
        const Piece& p = pieces[idx[std::size_t(mid)]];
        if (p.s1 < sv - 1e-12) a = mid + 1;
        else if (p.s0 > sv + 1e-12) b = mid - 1;
        else {
            at = idx[std::size_t(mid)];
            break;
        }
    }
    return cut_at_middle(ctx, wf, pieces, at);
}

std::pair<Wavefront, Wavefront> op_divide(SweepContext& ctx, Wavefront wf, bool traverse_first) {
    if (wf.eta.segments() != 2) fail_internal("divide needs a wavefront over two diagonals");
    ++ctx.divide_ops;
    if (wf.empty())
        return {empty_wavefront(ctx.tree, {wf.eta.verts[0], wf.eta.verts[1]}, wf.home_tri),
                empty_wavefront(ctx.tree, {wf.eta.verts[1], wf.eta.verts[2]}, wf.home_tri)};
    update_all_edges(wf, ctx.stats);
    auto pieces = wavefront_pieces(wf);
    double sv = wf.eta.start_of(1);
    std::optional<std::size_t> at;
    if (traverse_first) {
        for (std::size_t i = 0; i < pieces.size() && !at; ++i) {
            ++ctx.stats.A;
            if (contains_param(pieces[i], sv)) at = i;
        }
    } else {
        for (std::size_t i = pieces.size(); i-- > 0 && !at;) {
            ++ctx.stats.A;
            if (contains_param(pieces[i], sv)) at = i;
        }
    }
    if (!at) fail_internal("divide vertex not covered by the wavefront");
    return cut_at_middle(ctx, wf, pieces, *at);
}

namespace {

// First root in [lo, hi] where the comparison between the site and the anchor flips toward `to_site`.
std::optional<double> flip(const Chain& eta, const AnchorRecord& u, Point site, double lo, double hi, bool to_site) {
    AnchorRecord s;
    s.pos = site;
    if (!has_bisector(u, s)) return std::nullopt;
    BisectorCurve c(u.source(), s.source());
    double delta = 1e-9 * std::max(eta.length(), 1e-12);
    auto hits = eta.curve_hits(c);
    for (const auto& h : hits) {
        if (h.s < lo - 1e-12 || h.s > hi + 1e-12) continue;
        Point y = eta.at(std::min(h.s + delta, eta.length()));
        bool site_closer = dist(y, site) < weighted_value(u, y);
        if (site_closer == to_site) return std::clamp(h.s, lo, hi);
    }
    return std::nullopt;
}

// Interval the site takes on the chain following the projection walk; nullopt when it loses at its projection.
std::optional<std::pair<double, double>> projection_walk(SweepContext& ctx, const Wavefront& wf, const std::vector<Piece>& pw,
                                                         Point site) {
    const Chain& eta = wf.eta;
    double xs = eta.project(site);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pw.size(); ++i)
        if (pw[i].s1 - pw[i].s0 > 1e-12) idx.push_back(i);
    if (idx.empty()) return std::make_pair(0.0, eta.length());
    int lo = 0, hi = int(idx.size()) - 1, at = -1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        ++ctx.search_probes;
        const Piece& p = pw[idx[std::size_t(mid)]];
        if (p.s1 < xs - 1e-12) lo = mid + 1;
        else if (p.s0 > xs + 1e-12) hi = mid - 1;
        else {
            at = mid;
            break;
        }
    }
    if (at < 0) return std::nullopt;
    auto ds = [&](double s) { return dist(eta.at(s), site); };
    auto wins = [&](const Piece& p, double s) { return p.site < 0 || ds(s) < weighted_value(p.anchor, eta.at(s)); };
    if (!wins(pw[idx[std::size_t(at)]], xs)) return std::nullopt;
    double a = 0, b = eta.length();
    for (int i = at;; --i) {
        const Piece& p = pw[idx[std::size_t(i)]];
        ++ctx.stats.A;
        double right = i == at ? xs : p.s1;
        if (wins(p, p.s0)) {
            if (i == 0) break;
            continue;
        }
        auto r = flip(eta, p.anchor, site, p.s0, right, true);
        a = r ? *r : p.s0;
        break;
    }
    for (int i = at;; ++i) {
        const Piece& p = pw[idx[std::size_t(i)]];
        ++ctx.stats.A;
        double left = i == at ? xs : p.s0;
        if (wins(p, p.s1)) {
            if (i + 1 == int(idx.size())) break;
            continue;
        }
        auto r = flip(eta, p.anchor, site, left, p.s1, false);
        b = r ? *r : p.s1;
        break;
    }
    return std::make_pair(a, b);
}

}  // namespace

Wavefront op_insert(SweepContext& ctx, Wavefront wf, int tri, const std::vector<int>& sites) {
    (void)tri;
    if (wf.eta.segments() != 1) fail_internal("insert needs a wavefront over one diagonal");
    update_all_edges(wf, ctx.stats);
    std::vector<int> fresh;
    for (int s : sites) {
        Wavefront ws = single_site_wavefront(ctx.tree, wf.eta, s, wf.home_tri);
        if (wf.empty()) {
            wf = ws;
            continue;
        }
        auto pw = wavefront_pieces(wf), ps = wavefront_pieces(ws);
        auto runs = alternation(wf.eta, pw, ps);
        std::vector<std::pair<double, double>> mine;
        for (const Run& r : runs)
            if (r.side == 1) mine.emplace_back(r.lo, r.hi);
        if (mine.size() > 1) fail_internal("inserted site splits into several intervals along the diagonal");
        auto predicted = projection_walk(ctx, wf, pw, ctx.tree.sites()[s]);
        bool agree = mine.empty() ? !predicted
                                  : predicted && std::abs(predicted->first - mine[0].first) < 1e-6 &&
                                        std::abs(predicted->second - mine[0].second) < 1e-6;
        if (!agree) {
            ++ctx.insert_mismatches;
            auto show = [](const std::optional<std::pair<double, double>>& r) {
                return r ? std::to_string(r->first) + ".." + std::to_string(r->second) : std::string("none");
            };
            ctx.log("insert: projection walk disagrees for site " + std::to_string(s) + ": walk " + show(predicted) + ", direct " +
                    show(mine.empty() ? std::nullopt : std::optional(mine[0])));
            describe(ctx, wf);
        }
        if (mine.empty()) continue;
        wf = splice_runs(ctx, wf, pw, ws, ps, runs, wf.home_tri, fresh);
    }
    ensure_endpoint_anchors(ctx, wf, true, true);
    for (int e : fresh)
        if (wf.edges.count(e)) generate_potential_vertices(ctx.eng, wf, e, ctx.queues, ctx.stats);
    return wf;
}

void op_propagate(SweepContext& ctx, Wavefront wf, int diag, const std::function<void(int, const Wavefront&)>& on_enter) {
    const PartitionTree& tree = ctx.tree;
    int tri = tree.diagonal(diag).lower;
    if (on_enter) on_enter(tri, wf);
    Wavefront out = op_extend(ctx, std::move(wf), tri);
    if (out.eta.segments() == 2) {
        auto [a, b] = op_divide(ctx, std::move(out), true);
        for (Wavefront* part : {&a, &b}) {
            int d = tree.diagonal_between(part->eta.verts[0], part->eta.verts[1]);
            if (d >= 0) op_propagate(ctx, std::move(*part), d, on_enter);
        }
        return;
    }
    if (out.eta.segments() == 1) {
        int d = tree.diagonal_between(out.eta.verts[0], out.eta.verts[1]);
        if (d >= 0) op_propagate(ctx, std::move(out), d, on_enter);
    }
}

}  // namespace gvd
