#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gvd/sweep.hpp"
#include "sweep_detail.hpp"

namespace gvd {

namespace detail {

bool has_bisector(const AnchorRecord& a, const AnchorRecord& b) {
    double d = dist(a.pos, b.pos);
    return d > 1e-14 && std::abs(a.weight - b.weight) < d * (1 - 1e-10);
}

double weighted_value(const AnchorRecord& a, Point x) { return a.weight + dist(a.pos, x); }

namespace {

const Piece* active_piece(const std::vector<Piece>& ps, double m) {
    for (const Piece& p : ps)
        if (p.site >= 0 && p.s1 > p.s0 && p.s0 <= m && m <= p.s1) return &p;
    return nullptr;
}

void push_run(std::vector<Run>& runs, int side, double lo, double hi) {
    if (!runs.empty() && runs.back().side == side) runs.back().hi = hi;
    else runs.push_back({side, lo, hi});
}

}  // namespace

std::vector<Run> alternation(const Chain& eta, const std::vector<Piece>& a, const std::vector<Piece>& b) {
    double L = eta.length();
    std::vector<double> cuts{0.0, L};
    for (const auto* ps : {&a, &b})
        for (const Piece& p : *ps) {
            cuts.push_back(p.s0);
            cuts.push_back(p.s1);
        }
    for (int i = 1; i < eta.segments(); ++i) cuts.push_back(eta.start_of(i));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> u;
    for (double c : cuts) {
        c = std::clamp(c, 0.0, L);
        if (u.empty() || c - u.back() > 1e-13) u.push_back(c);
    }
    std::vector<Run> runs;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        double e0 = u[i], e1 = u[i + 1];
        double mid = 0.5 * (e0 + e1);
        const Piece* pa = active_piece(a, mid);
        const Piece* pb = active_piece(b, mid);
        if (!pa && !pb) continue;
        if (!pa) {
            push_run(runs, 1, e0, e1);
            continue;
        }
        if (!pb) {
            push_run(runs, 0, e0, e1);
            continue;
        }
        std::vector<double> sub{e0, e1};
        if (has_bisector(pa->anchor, pb->anchor)) {
            BisectorCurve c(pa->anchor.source(), pb->anchor.source());
            for (const auto& h : eta.curve_hits(c))
                if (h.s > e0 + 1e-13 && h.s < e1 - 1e-13) sub.push_back(h.s);
        }
        std::sort(sub.begin(), sub.end());
        for (std::size_t k = 0; k + 1 < sub.size(); ++k) {
            Point x = eta.at(0.5 * (sub[k] + sub[k + 1]));
            int side = weighted_value(pa->anchor, x) <= weighted_value(pb->anchor, x) ? 0 : 1;
            push_run(runs, side, sub[k], sub[k + 1]);
        }
    }
    // absorb slivers left by roots that graze the chain
    for (bool changed = true; changed && runs.size() > 1;) {
        changed = false;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].hi - runs[i].lo >= 1e-10) continue;
            if (i > 0) runs[i - 1].hi = runs[i].hi;
            else runs[i + 1].lo = runs[i].lo;
            runs.erase(runs.begin() + long(i));
            std::vector<Run> merged;
            for (const Run& r : runs) push_run(merged, r.side, r.lo, r.hi);
            runs = merged;
            changed = true;
            break;
        }
    }
    return runs;
}

std::vector<WaveletSpan> wavelet_spans(const std::vector<Piece>& pieces) {
    std::vector<WaveletSpan> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        if (!out.empty() && out.back().uid == p.wavelet_uid) {
            out.back().hi = p.s1;
            out.back().last = i;
        } else {
            out.push_back({p.wavelet_uid, p.site, p.s0, p.s1, i, i});
        }
    }
    return out;
}

Wavefront single_site_wavefront(const PartitionTree& tree, const Chain& eta, int site, int home_tri) {
    Wavefront w;
    w.eta = eta;
    w.home_tri = home_tri;
    Wavelet wl;
    wl.uid = fresh_id();
    wl.site = site;
    wl.anchors.push_back(site_anchor(site, tree.sites()[site]));
    w.wavelets.push_back(wl);
    w.relink();
    return w;
}

Wavefront splice_runs(SweepContext& ctx, const Wavefront& a, const std::vector<Piece>& pa, const Wavefront& b,
                      const std::vector<Piece>& pb, const std::vector<Run>& runs, int home_tri, std::vector<int>& new_edges) {
    Wavefront out;
    out.eta = a.eta;
    out.home_tri = home_tri;
    double L = out.eta.length();
    std::set<int> used;
    std::vector<std::size_t> run_last;  // index of the last wavelet of each run in out
    for (const Run& r : runs) {
        const Wavefront& src = r.side ? b : a;
        const std::vector<Piece>& P = r.side ? pb : pa;
        auto keep = [&](const Piece& p) {
            double len = p.s1 - p.s0;
            if (len > 1e-12 && p.s1 > r.lo + 1e-12 && p.s0 < r.hi - 1e-12) return true;
            if (len <= 1e-12 && p.s0 > r.lo + 1e-12 && p.s0 < r.hi - 1e-12) return true;
            if (p.s1 <= 1e-12 && r.lo <= 1e-12) return true;
            if (p.s0 >= L - 1e-12 && r.hi >= L - 1e-12) return true;
            return false;
        };
        std::size_t before = out.wavelets.size();
        for (const WaveletSpan& sp : wavelet_spans(P)) {
            std::vector<AnchorRecord> anchors;
            for (std::size_t i = sp.first; i <= sp.last; ++i)
                if (keep(P[i])) anchors.push_back(P[i].anchor);
            if (anchors.empty()) continue;
            const Wavelet& w = *src.find(sp.uid);
            Wavelet c;
            c.site = w.site;
            c.uid = used.count(w.uid) ? fresh_id() : w.uid;
            used.insert(c.uid);
            c.anchors.assign(anchors.begin(), anchors.end());
            c.right_edge = w.right_edge;
            if (c.right_edge >= 0) out.edges[c.right_edge] = src.edges.at(c.right_edge);
            ctx.stats.A += long(w.anchors.size() - anchors.size());
            out.wavelets.push_back(std::move(c));
        }
        if (out.wavelets.size() == before) {
            run_last.push_back(std::size_t(-1));
            continue;
        }
        out.wavelets.back().right_edge = -1;
        run_last.push_back(out.wavelets.size() - 1);
    }
    // seams between consecutive nonempty runs
    std::vector<std::pair<std::size_t, double>> seams;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i)
        if (run_last[i] != std::size_t(-1) && run_last[i] + 1 < out.wavelets.size()) seams.push_back({run_last[i], runs[i].hi});
    std::vector<Wavelet*> order;
    for (auto& w : out.wavelets) order.push_back(&w);
    for (auto [idx, x] : seams) {
        Wavelet& l = *order[idx];
        Wavelet& r = *order[idx + 1];
        IncompleteEdge e;
        e.id = fresh_id();
        const AnchorRecord& la = l.anchors.back();
        const AnchorRecord& ra = r.anchors.front();
        if (!has_bisector(la, ra)) fail_internal("seam between anchors without a bisector");
        Point p = out.eta.at(x);
        BisectorCurve c(la.source(), ra.source());
        e.last = c.at(c.param_of(p));
        if (dist(e.last, p) > 1e-6) e.last = p;
        e.heading = heading_into_unswept(ctx.tree, out, la, ra, e.last);
        l.right_edge = e.id;
        out.edges[e.id] = e;
        new_edges.push_back(e.id);
    }
    out.relink();
    return out;
}

}  // namespace detail

using namespace detail;

namespace {

bool in_list(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Chain root after `from` where the site becomes closer than the anchor, inside [lo, hi].
std::optional<double> crossing_into_site(const Chain& eta, const AnchorRecord& u, Point site, double lo, double hi) {
    AnchorRecord s;
    s.pos = site;
    s.weight = 0;
    if (!has_bisector(u, s)) return std::nullopt;
    BisectorCurve c(u.source(), s.source());
    double delta = 1e-9 * std::max(eta.length(), 1e-12);
    for (const auto& h : eta.curve_hits(c)) {
        if (h.s < lo - 1e-12 || h.s > hi + 1e-12) continue;
        Point y = eta.at(std::min(h.s + delta, eta.length()));
        if (dist(y, site) < weighted_value(u, y)) return std::clamp(h.s, lo, hi);
    }
    return std::nullopt;
}

}  // namespace

std::optional<SearchHit> two_level_search(SweepContext& ctx, const Wavefront& wq, const std::vector<Piece>& pq, int s_uid,
                                          const Wavefront& /*wqp*/, const std::vector<Piece>& pqp, double from) {
    const Chain& eta = wq.eta;
    auto sspans = wavelet_spans(pq);
    auto sit = std::find_if(sspans.begin(), sspans.end(), [&](const WaveletSpan& s) { return s.uid == s_uid; });
    if (sit == sspans.end()) return std::nullopt;
    double y1 = sit->lo, y2 = sit->hi;
    Point spos = ctx.tree.sites()[sit->site];
    double xs = eta.project(spos);
    auto ds = [&](double z) { return dist(eta.at(z), spos); };
    auto closer_q = [&](double z, const Piece& p) { return weighted_value(p.anchor, eta.at(z)) < ds(z); };

    auto tspans = wavelet_spans(pqp);
    int lo = 0, hi = int(tspans.size()) - 1, found = -1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        ++ctx.search_probes;
        const WaveletSpan& q = tspans[std::size_t(mid)];
        double z1 = q.lo, z2 = q.hi;
        const Piece& first = pqp[q.first];
        const Piece& last = pqp[q.last];
        int dir;  // -1: t before q, +1: after, 0: t is q
        if (z2 <= y1) dir = 1;
        else if (z1 >= y2) dir = -1;
        else if (z1 <= y1 && z2 >= y2) dir = 0;
        else if (z1 < y1) dir = closer_q(z2, last) ? 1 : 0;
        else if (z2 > y2) dir = closer_q(z1, first) ? -1 : 0;
        else if (xs < z1) dir = -1;
        else if (xs > z2) {
            bool c1 = closer_q(z1, first), c2 = closer_q(z2, last);
            dir = c2 ? 1 : (!c1 && !c2 ? -1 : 0);
        } else dir = closer_q(z1, first) ? 0 : -1;
        if (dir == 0) {
            found = mid;
            break;
        }
        if (dir < 0) hi = mid - 1;
        else lo = mid + 1;
    }
    if (found < 0) return std::nullopt;
    const WaveletSpan& t = tspans[std::size_t(found)];
    std::vector<std::size_t> idx;
    for (std::size_t i = t.first; i <= t.last; ++i)
        if (pqp[i].s1 > pqp[i].s0) idx.push_back(i);
    int a = 0, b = int(idx.size()) - 1;
    while (a <= b) {
        int mid = (a + b) / 2;
        ++ctx.search_probes;
        const Piece& p = pqp[idx[std::size_t(mid)]];
        if (p.s0 > xs) {
            b = mid - 1;
            continue;
        }
        // compare only where the searched wavelet lives
        double z0 = std::max({p.s0, y1, from}), z1 = std::min(p.s1, y2);
        if (z1 < z0) {
            if (p.s1 < z0) a = mid + 1;
            else b = mid - 1;
            continue;
        }
        bool c0 = closer_q(z0, p), c1 = closer_q(z1, p);
        if (c0 && c1) {
            // the site can still win strictly inside the piece
            if (auto x = crossing_into_site(eta, p.anchor, spos, z0, z1); x && *x >= from - 1e-9)
                return SearchHit{t.uid, p.anchor, *x};
            a = mid + 1;
        } else if (!c0 && !c1) b = mid - 1;
        else if (!c0) b = mid - 1;
        else {
            auto x = crossing_into_site(eta, p.anchor, spos, z0, z1);
            if (!x || *x < from - 1e-9 || *x < y1 - 1e-9 || *x > y2 + 1e-9) return std::nullopt;
            return SearchHit{t.uid, p.anchor, *x};
        }
    }
    return std::nullopt;
}

namespace {

// Runs the search procedure for starting endpoints and compares it with the direct runs.
void locate_starts(SweepContext& ctx, const Wavefront& wq, const std::vector<Piece>& pq, const Wavefront& wqp,
                   const std::vector<Piece>& pqp, const std::vector<Run>& runs, const std::vector<int>& tested) {
    std::vector<double> expected;
    int initial = 0;
    for (const Run& r : runs) {
        if (r.side != 0 || r.lo <= 1e-9) continue;
        const Piece* p = active_piece(pq, std::min(r.lo + 1e-9, r.hi));
        if (p && in_list(tested, p->site)) expected.push_back(r.lo);
        else ++initial;
    }
    if (initial > 1) ctx.search_mismatches += initial - 1;
    double last_stop = !runs.empty() && runs[0].side == 0 ? runs[0].hi : 0.0;
    std::vector<double> found;
    for (const WaveletSpan& sp : wavelet_spans(pq)) {
        if (!in_list(tested, sp.site)) continue;
        if (sp.lo < last_stop - 1e-9 || sp.hi <= last_stop + 1e-12) continue;
        auto hit = two_level_search(ctx, wq, pq, sp.uid, wqp, pqp, last_stop);
        if (!hit) continue;
        found.push_back(hit->x);
        auto r = std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.side == 0 && std::abs(r.lo - hit->x) < 1e-6; });
        last_stop = r != runs.end() ? r->hi : hit->x;
    }
    auto matched = [](const std::vector<double>& xs, double x) {
        return std::any_of(xs.begin(), xs.end(), [&](double y) { return std::abs(x - y) < 1e-6; });
    };
    long bad = 0;
    for (double x : expected)
        if (!matched(found, x)) ++bad;
    for (double x : found)
        if (!matched(expected, x)) ++bad;
    if (bad && ctx.trace) {
        std::string line = "search: " + std::to_string(bad) + " starting endpoints disagree; expected";
        for (double x : expected) line += " " + std::to_string(x);
        line += "; found";
        for (double x : found) line += " " + std::to_string(x);
        ctx.log(line);
        for (const Run& r : runs) ctx.log("  run " + std::to_string(r.side) + " " + std::to_string(r.lo) + ".." + std::to_string(r.hi));
        for (const Piece& p : pq)
            ctx.log("  q " + std::to_string(p.site) + "/" + std::to_string(p.anchor.vertex) + " " + std::to_string(p.s0) + ".." + std::to_string(p.s1));
        for (const Piece& p : pqp)
            ctx.log("  q' " + std::to_string(p.site) + "/" + std::to_string(p.anchor.vertex) + " " + std::to_string(p.s0) + ".." + std::to_string(p.s1));
    }
    ctx.search_mismatches += bad;
}

void align(Wavefront& wq, Wavefront& wqp) {
    if (wq.eta.same_as(wqp.eta)) return;
    if (wq.eta.same_as(wqp.eta.reversed())) {
        wqp.reverse();
        return;
    }
    fail_internal("merging wavefronts over different chains");
}

void trace_curves(SweepContext& ctx, const MergeInput& in, const Chain& eta, const std::vector<Run>& runs) {
    if (in.tri < 0) return;
    const Polygon& poly = ctx.tree.polygon();
    const TreeTriangle& T = ctx.tree.triangle(in.tri);
    Point g = (1.0 / 3.0) * (poly[T.v[0]] + poly[T.v[1]] + poly[T.v[2]]);
    std::vector<double> xs;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) xs.push_back(runs[i].hi);
    std::vector<bool> reached(xs.size(), false);
    TraceOptions opt;
    int tri = in.tri;
    opt.side_a = [&](int t) { return t == tri ? in.q_sources : std::vector<ConeSource>{}; };
    opt.side_b = [&](int t) { return t == tri ? in.qp_sources : std::vector<ConeSource>{}; };
    opt.confine_tri = tri;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (reached[i]) continue;
        reached[i] = true;
        Point p = eta.at(xs[i]);
        TraceResult r = trace_boundary(ctx.tree, opt, tri, p, g - p);
        if (r.arcs.empty()) continue;
        MergeCurve mc;
        mc.tri = tri;
        mc.arcs = r.arcs;
        mc.start = p;
        mc.stop = r.end;
        mc.how = r.stop;
        ctx.stats.I += long(r.arcs.size());
        double s = eta.project(r.end);
        if (r.stop == TraceStop::LeftRegion && dist(eta.at(s), r.end) < 1e-9) {
            bool ok = false;
            for (std::size_t j = 0; j < xs.size(); ++j)
                if (j != i && std::abs(xs[j] - s) < 1e-6) {
                    reached[j] = true;
                    ok = true;
                }
            if (!ok) ++ctx.merge_curve_mismatches;
            if (!ok) ctx.log("merge curve from s=" + std::to_string(xs[i]) + " ends on the chain at s=" + std::to_string(s));
        } else if (r.stop == TraceStop::Stalled) {
            ++ctx.merge_curve_mismatches;
            ctx.log("merge curve from s=" + std::to_string(xs[i]) + " stalled at (" + std::to_string(r.end.x) + ", " +
                    std::to_string(r.end.y) + ")");
        }
        ctx.merge_curves.push_back(std::move(mc));
    }
}

Wavefront merge_core(SweepContext& ctx, Wavefront wq, Wavefront wqp, const MergeInput& in, bool join) {
    if (wq.empty() && wqp.empty()) return wq;
    if (wq.empty()) {
        wqp.home_tri = in.tri;
        return wqp;
    }
    if (wqp.empty()) {
        wq.home_tri = in.tri;
        return wq;
    }
    align(wq, wqp);
    update_all_edges(wq, ctx.stats);
    update_all_edges(wqp, ctx.stats);
    auto pq = wavefront_pieces(wq), pqp = wavefront_pieces(wqp);
    auto runs = alternation(wq.eta, pq, pqp);
    locate_starts(ctx, wq, pq, wqp, pqp, runs, in.tested_sites);
    const Chain& eta = wq.eta;
    if (join) {
        int diag = ctx.tree.diagonal_between(eta.verts.front(), eta.verts.back());
        double L = eta.length();
        for (const Run& r : runs) {
            if (r.side != 0) continue;
            std::vector<double> vs;
            if (r.lo > 1e-12) vs.push_back(r.lo);
            if (r.hi < L - 1e-12) vs.push_back(r.hi);
            for (const auto* ps : {&pq, &pqp})
                for (const Piece& p : *ps)
                    if (p.s1 > p.s0 && p.s0 > r.lo + 1e-12 && p.s0 < r.hi - 1e-12) vs.push_back(p.s0);
            std::sort(vs.begin(), vs.end());
            vs.erase(std::unique(vs.begin(), vs.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), vs.end());
            for (double v : vs) ctx.borders.push_back({diag, eta.at(v)});
            ctx.stats.I += long(vs.size());
        }
    } else if (in.trace_curves) {
        trace_curves(ctx, in, eta, runs);
    }
    std::vector<int> fresh;
    Wavefront out = splice_runs(ctx, wq, pq, wqp, pqp, runs, in.tri, fresh);
    ensure_endpoint_anchors(ctx, out, true, true);
    for (int e : fresh)
        if (out.edges.count(e)) generate_potential_vertices(ctx.eng, out, e, ctx.queues, ctx.stats);
    return out;
}

}  // namespace

Wavefront op_merge(SweepContext& ctx, Wavefront wq, Wavefront wqp, const MergeInput& in) {
    return merge_core(ctx, std::move(wq), std::move(wqp), in, false);
}

Wavefront op_join(SweepContext& ctx, Wavefront lower, Wavefront upper, const MergeInput& in) {
    return merge_core(ctx, std::move(lower), std::move(upper), in, true);
}

}  // namespace gvd
