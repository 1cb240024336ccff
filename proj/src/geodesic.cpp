#include "gvd/geodesic.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace gvd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AnchorRecord site_anchor(int site, Point p) {
    AnchorRecord a;
    a.vertex = kSiteAnchor;
    a.site = site;
    a.pos = p;
    a.weight = 0.0;
    return a;
}

AnchorRecord vertex_anchor(int site, int vertex, Point pos, double weight, const AnchorRecord& pred) {
    AnchorRecord a;
    a.vertex = vertex;
    a.site = site;
    a.pos = pos;
    a.weight = weight;
    a.has_pred = true;
    a.pred_vertex = pred.vertex;
    a.pred_pos = pred.pos;
    return a;
}

bool ConeSource::admits(Point x, double eps) const {
    if (full) return true;
    Point v = x - anchor.pos;
    double lv = norm(v);
    if (lv < 1e-14) return true;
    double ll = norm(left), lr = norm(right);
    if (dot(v, (1.0 / ll) * left + (1.0 / lr) * right) < 0) return false;
    return cross(left, v) >= -eps * ll * lv && cross(v, right) >= -eps * lr * lv;
}

ConeSource full_cone(const AnchorRecord& a, int tag) {
    ConeSource c;
    c.anchor = a;
    c.full = true;
    c.tag = tag;
    return c;
}

ConeSource cone_through(const AnchorRecord& a, Point p, Point q, int tag) {
    ConeSource c;
    c.anchor = a;
    c.tag = tag;
    double len = dist(p, q);
    double off = len > 0 ? std::abs(cross(q - p, a.pos - p)) / len : dist(a.pos, p);
    if (off <= 1e-12) {
        // apex on the interval: the far side is fully visible; elsewhere on the line only the ray is
        if (point_segment_distance(a.pos, {p, q}) <= 1e-12) {
            c.full = true;
            return c;
        }
        c.full = false;
        c.left = c.right = unit((dist(a.pos, p) < dist(a.pos, q) ? p : q) - a.pos);
        return c;
    }
    c.full = false;
    c.left = p - a.pos;
    c.right = q - a.pos;
    if (cross(c.left, c.right) < 0) std::swap(c.left, c.right);
    return c;
}

double evaluate(std::span<const ConeSource> sources, Point x, int* which) {
    double best = kInf;
    int arg = -1;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!sources[i].admits(x)) continue;
        double v = sources[i].value(x);
        // on exact ties prefer the deeper anchor, i.e. the last bend of a path grazing a vertex
        bool deeper = arg >= 0 && sources[i].anchor.weight > sources[std::size_t(arg)].anchor.weight;
        if (v < best - 1e-13 || (v <= best + 1e-13 && (arg < 0 || deeper))) {
            best = std::min(best, v);
            arg = int(i);
        }
    }
    if (which) *which = arg;
    return best;
}

static void cone_interval(const ConeSource& s, Segment seg, double& lo, double& hi) {
    lo = 0.0;
    hi = 1.0;
    if (s.full) return;
    Point u = s.anchor.pos;
    Point d = seg.b - seg.a;
    double scale = dist(seg.a, u) + dist(seg.b, u);
    auto clip = [&](Point dir, double sgn) {
        // sgn * cross(dir, P(t) - u) >= -tol
        double alpha = sgn * cross(dir, seg.a - u);
        double beta = sgn * cross(dir, d);
        double tol = 1e-12 * norm(dir) * scale;
        if (std::abs(beta) < 1e-300) {
            if (alpha < -tol) hi = -1.0;
            return;
        }
        double t = (-tol - alpha) / beta;
        if (beta > 0) lo = std::max(lo, t);
        else hi = std::min(hi, t);
    };
    clip(s.left, 1.0);
    clip(s.right, -1.0);
}

std::vector<EnvPiece> lower_envelope_on_segment(std::span<const ConeSource> sources, Segment seg) {
    std::size_t k = sources.size();
    std::vector<double> lo(k), hi(k);
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t i = 0; i < k; ++i) {
        cone_interval(sources[i], seg, lo[i], hi[i]);
        if (hi[i] >= lo[i]) {
            if (lo[i] > 0 && lo[i] < 1) ts.push_back(lo[i]);
            if (hi[i] > 0 && hi[i] < 1) ts.push_back(hi[i]);
        }
    }
    double seg_len = dist(seg.a, seg.b);
    for (std::size_t i = 0; i < k; ++i) {
        if (hi[i] < lo[i]) continue;
        for (std::size_t j = i + 1; j < k; ++j) {
            if (hi[j] < lo[j] || hi[i] < lo[j] || hi[j] < lo[i]) continue;
            const AnchorRecord& a = sources[i].anchor;
            const AnchorRecord& b = sources[j].anchor;
            double dd = dist(a.pos, b.pos);
            if (dd <= 1e-14) continue;
            double gap = std::abs(a.weight - b.weight);
            if (gap < dd * (1 - 1e-10)) {
                BisectorCurve c(a.source(), b.source());
                for (double t : c.line_params(seg.a, seg.b)) {
                    double s = project_param(c.at(t), seg);
                    if (s > 0 && s < 1) ts.push_back(s);
                }
            } else if (seg_len > 0) {
                // equal only along the ray through both anchors
                Point dir = b.pos - a.pos;
                double denom = cross(seg.b - seg.a, dir);
                if (std::abs(denom) > 1e-300) {
                    double s = cross(a.pos - seg.a, dir) / denom;
                    if (s > 0 && s < 1) ts.push_back(s);
                }
            }
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> uniq;
    for (double t : ts)
        if (uniq.empty() || t - uniq.back() > 1e-13) uniq.push_back(t);
    if (uniq.back() < 1.0) uniq.back() = 1.0;

    std::vector<EnvPiece> out;
    for (std::size_t q = 0; q + 1 < uniq.size(); ++q) {
        double ta = uniq[q], tb = uniq[q + 1];
        double tm = 0.5 * (ta + tb);
        Point pm = lerp(seg.a, seg.b, tm);
        int arg = -1;
        double best = kInf;
        for (std::size_t i = 0; i < k; ++i) {
            if (tm < lo[i] || tm > hi[i]) continue;
            double v = sources[i].value(pm);
            if (v < best - 1e-15) {
                best = v;
                arg = int(i);
            }
        }
        if (!out.empty() && out.back().src == arg) out.back().t1 = tb;
        else out.push_back({arg, ta, tb});
    }
    return out;
}

std::vector<ConeSource> sources_beyond(std::span<const ConeSource> sources, std::span<const EnvPiece> pieces, Segment seg,
                                       const Polygon& poly, int va, int vb) {
    std::vector<ConeSource> out;
    auto has_full = [&](const AnchorRecord& a) {
        for (const ConeSource& c : out)
            if (c.full && c.anchor.same_anchor(a)) return true;
        return false;
    };
    for (const EnvPiece& pc : pieces) {
        if (pc.src < 0) continue;
        const ConeSource& s = sources[std::size_t(pc.src)];
        bool at_corner = point_segment_distance(s.anchor.pos, seg) <= 1e-12;
        ConeSource c = at_corner ? full_cone(s.anchor, s.tag)
                                 : cone_through(s.anchor, lerp(seg.a, seg.b, pc.t0), lerp(seg.a, seg.b, pc.t1), s.tag);
        if (c.full && has_full(c.anchor)) continue;
        out.push_back(c);
    }
    auto add_corner = [&](int v, const EnvPiece* pc, Point at) {
        if (v < 0 || !pc || pc->src < 0 || !poly.reflex[std::size_t(v)]) return;
        const ConeSource& s = sources[std::size_t(pc->src)];
        for (const ConeSource& c : out)
            if (c.anchor.vertex == v && c.anchor.site == s.anchor.site) return;
        double w = s.value(at);
        out.push_back(full_cone(vertex_anchor(s.anchor.site, v, at, w, s.anchor), s.tag));
    };
    if (!pieces.empty()) {
        add_corner(va, &pieces.front(), seg.a);
        add_corner(vb, &pieces.back(), seg.b);
    }
    return out;
}

// ---- PointSPM ----

PointSPM::PointSPM(const PartitionTree& tree, int site, Point p, std::optional<int> target_tri)
    : tree_(&tree), site_(site), origin_(p) {
    const Polygon& poly = tree.polygon();
    int nt = int(tree.triangles().size());
    tri_sources_.assign(std::size_t(nt), {});
    vdist_.assign(std::size_t(poly.size()), kInf);
    vrec_.assign(std::size_t(poly.size()), AnchorRecord{});
    int t0 = tree.locate(p);
    if (t0 < 0) fail_input("point outside polygon");

    std::vector<bool> allowed(std::size_t(nt), true);
    if (target_tri) {
        std::vector<int> par(std::size_t(nt), -2);
        std::deque<int> q{t0};
        par[std::size_t(t0)] = -1;
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            for (int o : tree.triangle(t).nbr)
                if (o >= 0 && par[std::size_t(o)] == -2) {
                    par[std::size_t(o)] = t;
                    q.push_back(o);
                }
        }
        allowed.assign(std::size_t(nt), false);
        for (int t = *target_tri; t >= 0; t = par[std::size_t(t)]) allowed[std::size_t(t)] = true;
    }

    tri_sources_[std::size_t(t0)] = {full_cone(site_anchor(site, p))};
    std::deque<int> queue{t0};
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        const TreeTriangle& tr = tree.triangle(t);
        for (int i = 0; i < 3; ++i) {
            int o = tr.nbr[std::size_t(i)];
            if (o < 0 || !allowed[std::size_t(o)] || !tri_sources_[std::size_t(o)].empty()) continue;
            int va = tr.v[std::size_t(i)], vb = tr.v[std::size_t((i + 1) % 3)];
            Segment seg{poly[va], poly[vb]};
            auto pieces = lower_envelope_on_segment(tri_sources_[std::size_t(t)], seg);
            tri_sources_[std::size_t(o)] = sources_beyond(tri_sources_[std::size_t(t)], pieces, seg, poly, va, vb);
            queue.push_back(o);
        }
    }
    for (int t = 0; t < nt; ++t) {
        if (tri_sources_[std::size_t(t)].empty()) continue;
        for (int c : tree.triangle(t).v) {
            int w = -1;
            double val = evaluate(tri_sources_[std::size_t(t)], poly[c], &w);
            if (w >= 0 && val < vdist_[std::size_t(c)]) {
                vdist_[std::size_t(c)] = val;
                const AnchorRecord& win = tri_sources_[std::size_t(t)][std::size_t(w)].anchor;
                vrec_[std::size_t(c)] = win.vertex == c ? win : vertex_anchor(site, c, poly[c], val, win);
            }
        }
    }
}

double PointSPM::distance_in(int tri, Point x) const {
    const auto& src = tri_sources_[std::size_t(tri)];
    double v = evaluate(src, x);
    if (v < kInf) return v;
    double best = kInf;
    for (const ConeSource& s : src)
        if (s.admits(x, 1e-6)) best = std::min(best, s.value(x));
    return best;
}

AnchorRecord PointSPM::anchor_in(int tri, Point x) const {
    const auto& src = tri_sources_[std::size_t(tri)];
    int w = -1;
    evaluate(src, x, &w);
    if (w < 0) {
        double best = kInf;
        for (std::size_t i = 0; i < src.size(); ++i)
            if (src[i].admits(x, 1e-6) && src[i].value(x) < best) {
                best = src[i].value(x);
                w = int(i);
            }
    }
    if (w < 0) fail_internal("point not covered by its shortest path map");
    return src[std::size_t(w)].anchor;
}

std::vector<Point> PointSPM::path_to(int tri, Point x) const {
    std::vector<Point> rev{x};
    AnchorRecord cur = anchor_in(tri, x);
    for (int guard = 0; guard <= tree_->polygon().size() + 2; ++guard) {
        if (dist(cur.pos, rev.back()) > 0) rev.push_back(cur.pos);
        if (!cur.has_pred) break;
        if (cur.pred_vertex == kSiteAnchor) {
            if (dist(origin_, rev.back()) > 0) rev.push_back(origin_);
            break;
        }
        cur = vrec_[std::size_t(cur.pred_vertex)];
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

std::vector<AnchorRecord> PointSPM::anchors() const {
    std::vector<AnchorRecord> out{site_anchor(site_, origin_)};
    const Polygon& poly = tree_->polygon();
    for (int v = 0; v < poly.size(); ++v) {
        const AnchorRecord& r = vrec_[std::size_t(v)];
        if (r.has_pred && poly.reflex[std::size_t(v)] && vdist_[std::size_t(v)] < kInf) out.push_back(r);
    }
    return out;
}

static std::optional<Point> shoot_ray(const Polygon& poly, int from_vertex, Point origin, Point dir) {
    double best = kInf;
    for (int i = 0; i < poly.size(); ++i) {
        int j = poly.next(i);
        if (i == from_vertex || j == from_vertex) continue;
        Point a = poly[i], b = poly[j];
        Point e = b - a;
        double den = cross(dir, e);
        if (std::abs(den) < 1e-300) continue;
        double t = cross(a - origin, e) / den;
        double s = cross(a - origin, dir) / den;
        if (t > 1e-12 && s >= -1e-12 && s <= 1 + 1e-12) best = std::min(best, t);
    }
    if (best == kInf) return std::nullopt;
    return origin + best * dir;
}

static bool direction_enters_interior(const Polygon& poly, int v, Point d) {
    Point a = poly[poly.prev(v)] - poly[v], b = poly[poly.next(v)] - poly[v];
    if (poly.reflex[std::size_t(v)]) return !(cross(a, d) > 0 && cross(d, b) > 0);
    return cross(b, d) > 0 && cross(d, a) > 0;
}

std::vector<Segment> PointSPM::spm_edges() const {
    std::vector<Segment> out;
    const Polygon& poly = tree_->polygon();
    for (int v = 0; v < poly.size(); ++v) {
        const AnchorRecord& r = vrec_[std::size_t(v)];
        if (!poly.reflex[std::size_t(v)] || !r.has_pred || r.vertex != v) continue;
        Point d = unit(poly[v] - r.pred_pos);
        if (!direction_enters_interior(poly, v, d)) continue;
        if (auto hit = shoot_ray(poly, v, poly[v], d)) out.push_back({poly[v], *hit});
    }
    return out;
}

// ---- GeodesicEngine ----

GeodesicEngine::GeodesicEngine(const PartitionTree& tree) : tree_(&tree) {
    for (int s = 0; s < tree.sites().size(); ++s) spms_.emplace_back(tree, s, tree.sites()[s]);
}

double GeodesicEngine::site_distance(int site, Point x) const {
    int t = tree_->locate(x);
    if (t < 0) fail_input("point outside polygon");
    return spm(site).distance_in(t, x);
}

AnchorRecord GeodesicEngine::anchor_of(Point x, int site) const {
    int t = tree_->locate(x);
    if (t < 0) fail_input("point outside polygon");
    return spm(site).anchor_in(t, x);
}

std::vector<Point> GeodesicEngine::shortest_path(Point p, Point q) const {
    if (p == q) {
        if (tree_->locate(p) < 0) fail_input("point outside polygon");
        return {p};
    }
    int tq = tree_->locate(q);
    if (tq < 0) fail_input("point outside polygon");
    PointSPM s(*tree_, -1, p, tq);
    return s.path_to(tq, q);
}

double path_length(std::span<const Point> path) {
    double l = 0;
    for (std::size_t i = 1; i < path.size(); ++i) l += dist(path[i - 1], path[i]);
    return l;
}

double GeodesicEngine::geodesic_distance(Point p, Point q) const {
    auto path = shortest_path(p, q);
    return path_length(path);
}

ShortestPathMap GeodesicEngine::build_spm(int site) const {
    ShortestPathMap m;
    m.site = site;
    const PointSPM& s = spm(site);
    for (std::size_t t = 0; t < tree_->triangles().size(); ++t) m.regions.push_back(s.sources(int(t)));
    m.spm_edges = s.spm_edges();
    return m;
}

// ---- tracing ----

namespace {

struct GroupMin {
    double value = kInf;
    int index = -1;
};

GroupMin group_min(const std::vector<ConeSource>& g, Point x) {
    GroupMin m;
    m.value = evaluate(g, x, &m.index);
    return m;
}

std::vector<int> near_min(const std::vector<ConeSource>& g, Point x, double tol) {
    double v = evaluate(g, x);
    std::vector<int> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i].admits(x, 1e-9) && g[i].value(x) <= v + tol) out.push_back(int(i));
    return out;
}

bool bisector_ok(const AnchorRecord& a, const AnchorRecord& b) {
    double d = dist(a.pos, b.pos);
    return d > 1e-14 && std::abs(a.weight - b.weight) < d * (1 - 1e-10);
}

void add_line_events(const BisectorCurve& c, Point p, Point dir, bool ray_only, std::vector<double>& out) {
    for (double t : c.line_params(p, p + dir)) {
        if (ray_only && dot(c.at(t) - p, dir) < -1e-12) continue;
        out.push_back(t);
    }
}

void add_source_events(const BisectorCurve& c, const ConeSource& s, std::vector<double>& out) {
    double d1 = dist(s.anchor.pos, c.first().position), d2 = dist(s.anchor.pos, c.second().position);
    if (d1 > 1e-14 && d2 > 1e-14) {
        for (double t : c.equal_params(s.anchor.source())) out.push_back(t);
    }
    if (!s.full) {
        add_line_events(c, s.anchor.pos, s.left, true, out);
        add_line_events(c, s.anchor.pos, s.right, true, out);
    }
}

int side_index_of(const PartitionTree& tree, int tri, Point p, double tol) {
    const TreeTriangle& tr = tree.triangle(tri);
    const Polygon& poly = tree.polygon();
    int best = -1;
    double bd = tol;
    for (int i = 0; i < 3; ++i) {
        Segment s{poly[tr.v[std::size_t(i)]], poly[tr.v[std::size_t((i + 1) % 3)]]};
        double d = point_segment_distance(p, s);
        if (d <= bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

TraceResult trace_boundary(const PartitionTree& tree, const TraceOptions& opt, int tri, Point start, Point direction_hint) {
    const Polygon& poly = tree.polygon();
    TraceResult res;
    int T = tri;
    Point x = start;
    Point prev_dir = direction_hint;
    auto load = [&](int t, std::vector<ConeSource>& A, std::vector<ConeSource>& B, std::vector<ConeSource>& R) {
        A = opt.side_a(t);
        B = opt.side_b(t);
        R = opt.watch ? opt.watch(t) : std::vector<ConeSource>{};
    };
    std::vector<ConeSource> A, B, R;
    load(T, A, B, R);
    int switches = 0;

    for (int step = 0; step < opt.max_steps; ++step) {
        // pick the anchor pair that continues the curve
        std::vector<int> ca = near_min(A, x, 1e-9), cb = near_min(B, x, 1e-9);
        struct Choice {
            int ia = -1, ib = -1;
            double tx = 0;
            int dir = 1;
            double score = kInf;
            double far_score = kInf;
        } best;
        for (int ia : ca) {
            for (int ib : cb) {
                if (!bisector_ok(A[std::size_t(ia)].anchor, B[std::size_t(ib)].anchor)) continue;
                BisectorCurve c(A[std::size_t(ia)].anchor.source(), B[std::size_t(ib)].anchor.source());
                double tx = c.param_of(x);
                if (dist(c.at(tx), x) > 1e-7) continue;
                Point tg = c.tangent(tx);
                int dir = dot(tg, prev_dir) >= 0 ? 1 : -1;
                const ConeSource& sa = A[std::size_t(ia)];
                const ConeSource& sb = B[std::size_t(ib)];
                auto score_at = [&](double step) {
                    Point y = c.at(tx + dir * step / std::max(norm(tg), 1e-300));
                    GroupMin ga = group_min(A, y), gb = group_min(B, y);
                    double sc = sa.admits(y, 1e-9) ? std::max(0.0, sa.value(y) - ga.value) : 1.0;
                    return sc + (sb.admits(y, 1e-9) ? std::max(0.0, sb.value(y) - gb.value) : 1.0);
                };
                double score = score_at(1e-7);
                // anchors of one site tie to second order across their shared ray, so a longer probe breaks ties
                double far_score = score_at(1e-4);
                if (score < best.score - 1e-12 || (score <= best.score + 1e-12 && far_score < best.far_score))
                    best = {ia, ib, tx, dir, score, far_score};
            }
        }
        if (best.ia < 0) {
            res.stop = TraceStop::Stalled;
            res.end = x;
            res.end_tri = T;
            return res;
        }
        const ConeSource& sa = A[std::size_t(best.ia)];
        const ConeSource& sb = B[std::size_t(best.ib)];
        BisectorCurve c(sa.anchor.source(), sb.anchor.source());
        int dir = best.dir;
        double tx = best.tx;

        // leaving through a side we are standing on
        {
            Point tg = dir * c.tangent(tx);
            const TreeTriangle& tr = tree.triangle(T);
            bool moved = false;
            for (int i = 0; i < 3; ++i) {
                Point a = poly[tr.v[std::size_t(i)]], b = poly[tr.v[std::size_t((i + 1) % 3)]];
                if (point_segment_distance(x, {a, b}) > 1e-10) continue;
                Point outward = -1.0 * perp(b - a);  // triangle is ccw, interior on the left
                if (dot(tg, outward) <= 0) continue;
                int o = tr.nbr[std::size_t(i)];
                if (o < 0) {
                    res.stop = TraceStop::Boundary;
                    res.end = x;
                    res.end_tri = T;
                    res.end_side_a = tr.v[std::size_t(i)];
                    res.end_side_b = tr.v[std::size_t((i + 1) % 3)];
                    return res;
                }
                if (opt.confine_tri && *opt.confine_tri == T) {
                    res.stop = TraceStop::LeftRegion;
                    res.end = x;
                    res.end_tri = T;
                    res.end_side_a = tr.v[std::size_t(i)];
                    res.end_side_b = tr.v[std::size_t((i + 1) % 3)];
                    return res;
                }
                T = o;
                load(T, A, B, R);
                prev_dir = tg;
                moved = true;
                break;
            }
            if (moved) {
                if (++switches > 4 * (int(tree.triangles().size()) + 4)) fail_internal("trace oscillates between triangles");
                continue;
            }
        }

        std::vector<double> ev;
        {
            const TreeTriangle& tr = tree.triangle(T);
            for (int i = 0; i < 3; ++i) {
                Point a = poly[tr.v[std::size_t(i)]], b = poly[tr.v[std::size_t((i + 1) % 3)]];
                for (double t : c.line_params(a, b)) {
                    double s = project_param(c.at(t), {a, b});
                    if (s >= -1e-9 && s <= 1 + 1e-9) ev.push_back(t);
                }
            }
        }
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (int(i) == best.ia) {
                if (!sa.full) {
                    add_line_events(c, sa.anchor.pos, sa.left, true, ev);
                    add_line_events(c, sa.anchor.pos, sa.right, true, ev);
                }
                continue;
            }
            add_source_events(c, A[i], ev);
        }
        for (std::size_t i = 0; i < B.size(); ++i) {
            if (int(i) == best.ib) {
                if (!sb.full) {
                    add_line_events(c, sb.anchor.pos, sb.left, true, ev);
                    add_line_events(c, sb.anchor.pos, sb.right, true, ev);
                }
                continue;
            }
            add_source_events(c, B[i], ev);
        }
        for (const ConeSource& r : R) add_source_events(c, r, ev);
        double target_t = kInf;
        if (opt.target && std::abs(c.first().weight + dist(*opt.target, c.first().position) - c.second().weight -
                                   dist(*opt.target, c.second().position)) < 1e-8) {
            double tt = c.param_of(*opt.target);
            if (dist(c.at(tt), *opt.target) < 1e-8) {
                ev.push_back(tt);
                target_t = tt;
            }
        }
        double te = kInf;
        for (double t : ev) {
            double dt = dir * (t - tx);
            if (dt <= 0) continue;
            if (dist(c.at(t), x) <= 1e-12) continue;
            if (te == kInf || dir * (t - te) < 0) te = t;
        }
        if (te == kInf) {
            res.stop = TraceStop::Stalled;
            res.end = x;
            res.end_tri = T;
            return res;
        }
        Point pe = c.at(te);
        TracedArc arc;
        arc.tri = T;
        arc.a = sa.anchor;
        arc.b = sb.anchor;
        arc.t0 = tx;
        arc.t1 = te;
        arc.p0 = x;
        arc.p1 = pe;
        res.arcs.push_back(arc);

        if (!R.empty()) {
            int wr = -1;
            double vr = evaluate(R, pe, &wr);
            if (wr >= 0 && vr <= c.value_at(te) + 1e-11) {
                res.stop = TraceStop::Watch;
                res.end = pe;
                res.end_tri = T;
                res.watch_anchor = R[std::size_t(wr)].anchor;
                return res;
            }
        }
        if (target_t != kInf && te == target_t) {
            res.stop = TraceStop::Target;
            res.end = pe;
            res.end_tri = T;
            return res;
        }
        x = pe;
        prev_dir = dir * c.tangent(te);
        (void)side_index_of;
    }
    fail_internal("bisector trace exceeded its step guard");
}

std::optional<Point> escape_direction(const PartitionTree& tree, const SourceFn& a, const SourceFn& b, const SourceFn& excluded,
                                      int tri, Point start) {
    (void)tree;
    auto A = a(tri), B = b(tri), X = excluded(tri);
    GroupMin ga = group_min(A, start), gb = group_min(B, start);
    if (ga.index < 0 || gb.index < 0) return std::nullopt;
    const AnchorRecord& ua = A[std::size_t(ga.index)].anchor;
    const AnchorRecord& ub = B[std::size_t(gb.index)].anchor;
    if (!bisector_ok(ua, ub)) return std::nullopt;
    BisectorCurve c(ua.source(), ub.source());
    double t0 = c.param_of(start);
    Point tg = c.tangent(t0);
    double dl = 1e-6 / std::max(norm(tg), 1e-300);
    double best_gap = -kInf;
    std::optional<Point> out;
    for (int dir : {1, -1}) {
        Point y = c.at(t0 + dir * dl);
        double gx = evaluate(X, y);
        double gap = gx - c.value_at(t0 + dir * dl);
        if (gap > best_gap) {
            best_gap = gap;
            out = dir * tg;
        }
    }
    if (best_gap <= 0) return std::nullopt;
    return out;
}

static SourceFn site_sources(const GeodesicEngine& eng, int s) {
    return [&eng, s](int tri) { return eng.sources(s, tri); };
}

std::optional<VertexResult> voronoi_vertex_deg3_from(const GeodesicEngine& eng, int s1, int s2, int s3, int tri, Point start,
                                                     Point hint) {
    TraceOptions opt;
    opt.side_a = site_sources(eng, s1);
    opt.side_b = site_sources(eng, s2);
    opt.watch = site_sources(eng, s3);
    TraceResult r = trace_boundary(eng.tree(), opt, tri, start, hint);
    if (r.stop != TraceStop::Watch) return std::nullopt;
    return VertexResult{r.end, r.end_tri, std::move(r.arcs)};
}

std::optional<VertexResult> voronoi_vertex_deg1_from(const GeodesicEngine& eng, int s1, int s2, int tri, Point start, Point hint) {
    TraceOptions opt;
    opt.side_a = site_sources(eng, s1);
    opt.side_b = site_sources(eng, s2);
    TraceResult r = trace_boundary(eng.tree(), opt, tri, start, hint);
    if (r.stop != TraceStop::Boundary) return std::nullopt;
    return VertexResult{r.end, r.end_tri, std::move(r.arcs)};
}

// Midpoint of the shortest path between two sites lies on their bisector.
static std::pair<Point, Point> geodesic_midpoint(const GeodesicEngine& eng, int s1, int s2) {
    const auto& sites = eng.tree().sites();
    auto path = eng.shortest_path(sites[s1], sites[s2]);
    double half = 0.5 * path_length(path);
    for (std::size_t i = 1; i < path.size(); ++i) {
        double l = dist(path[i - 1], path[i]);
        if (half <= l || i + 1 == path.size()) {
            Point m = lerp(path[i - 1], path[i], l > 0 ? half / l : 0.0);
            return {m, path[i] - path[i - 1]};
        }
        half -= l;
    }
    return {sites[s1], {1, 0}};
}

std::optional<Point> voronoi_vertex_deg3(const GeodesicEngine& eng, int s1, int s2, int s3) {
    auto [m, along] = geodesic_midpoint(eng, s1, s2);
    int tri = eng.tree().locate(m);
    if (tri < 0) return std::nullopt;
    for (Point hint : {perp(along), -1.0 * perp(along)}) {
        if (auto v = voronoi_vertex_deg3_from(eng, s1, s2, s3, tri, m, hint)) return v->position;
    }
    return std::nullopt;
}

std::optional<Point> voronoi_vertex_deg1(const GeodesicEngine& eng, int s1, int s2, Point direction_hint) {
    auto [m, along] = geodesic_midpoint(eng, s1, s2);
    int tri = eng.tree().locate(m);
    if (tri < 0) return std::nullopt;
    Point h = perp(along);
    if (dot(h, direction_hint) < 0) h = -1.0 * h;
    if (auto v = voronoi_vertex_deg1_from(eng, s1, s2, tri, m, h)) return v->position;
    return std::nullopt;
}

ArcChain trace_bisector_arcs(Point from, Point to, std::span<const AnchorRecord> anchors_s, std::span<const AnchorRecord> anchors_t) {
    if (anchors_s.empty() || anchors_t.empty()) fail_internal("empty anchor list for bisector trace");
    ArcChain out;
    std::size_t i = 0, j = 0;
    Point x = from;
    Point prev_dir = to - from;
    for (int guard = 0; guard < int(anchors_s.size() + anchors_t.size()) + 4; ++guard) {
        const AnchorRecord& a = anchors_s[i];
        const AnchorRecord& b = anchors_t[j];
        if (!bisector_ok(a, b)) fail_internal("anchor pair without bisector");
        BisectorCurve c(a.source(), b.source());
        double tx = c.param_of(x);
        int dir = dot(c.tangent(tx), prev_dir) >= 0 ? 1 : -1;
        double best = kInf;
        int which = -1;  // 0: reach target, 1: next s anchor, 2: next t anchor
        auto consider = [&](double t, int w) {
            double dt = dir * (t - tx);
            if (dt <= 0 || dist(c.at(t), x) <= 1e-12) return;
            if (best == kInf || dir * (t - best) < 0) {
                best = t;
                which = w;
            }
        };
        double tt = c.param_of(to);
        if (dist(c.at(tt), to) < 1e-7) consider(tt, 0);
        if (i + 1 < anchors_s.size()) {
            const AnchorRecord& n = anchors_s[i + 1];
            Point d = n.pos - a.pos;
            std::vector<double> ev;
            add_line_events(c, n.pos, d, true, ev);
            for (double t : ev) consider(t, 1);
        }
        if (j + 1 < anchors_t.size()) {
            const AnchorRecord& n = anchors_t[j + 1];
            Point d = n.pos - b.pos;
            std::vector<double> ev;
            add_line_events(c, n.pos, d, true, ev);
            for (double t : ev) consider(t, 2);
        }
        if (which < 0) fail_internal("anchor lists do not bracket the bisector");
        TracedArc arc;
        arc.a = a;
        arc.b = b;
        arc.t0 = tx;
        arc.t1 = best;
        arc.p0 = x;
        arc.p1 = c.at(best);
        out.arcs.push_back(arc);
        if (which == 0) {
            out.arcs.back().p1 = to;
            return out;
        }
        x = arc.p1;
        out.breakpoints.push_back(x);
        prev_dir = dir * c.tangent(best);
        if (which == 1) ++i;
        else ++j;
    }
    fail_internal("anchor lists do not bracket the bisector");
}

}  // namespace gvd
