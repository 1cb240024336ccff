#include "gvd/wavefront.hpp"

#include <algorithm>
#include <limits>

namespace gvd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool pair_has_bisector(const AnchorRecord& a, const AnchorRecord& b) {
    double d = dist(a.pos, b.pos);
    return d > 1e-14 && std::abs(a.weight - b.weight) < d * (1 - 1e-10);
}

double value_at(const AnchorRecord& a, Point x) { return a.weight + dist(a.pos, x); }
}  // namespace

int fresh_id() {
    static int next = 0;
    return next++;
}

// ---- Chain ----

Chain Chain::of(const Polygon& poly, std::vector<int> verts) {
    Chain c;
    c.verts = std::move(verts);
    for (int v : c.verts) c.pts.push_back(poly[v]);
    return c;
}

double Chain::start_of(int i) const {
    double s = 0;
    for (int k = 0; k < i; ++k) s += dist(pts[std::size_t(k)], pts[std::size_t(k + 1)]);
    return s;
}

int Chain::segment_at(double s) const {
    int n = segments();
    for (int i = 0; i + 1 < n; ++i)
        if (s <= start_of(i + 1)) return i;
    return std::max(0, n - 1);
}

Point Chain::at(double s) const {
    int i = segment_at(s);
    double l = dist(pts[std::size_t(i)], pts[std::size_t(i + 1)]);
    double u = l > 0 ? std::clamp((s - start_of(i)) / l, 0.0, 1.0) : 0.0;
    return lerp(pts[std::size_t(i)], pts[std::size_t(i + 1)], u);
}

double Chain::project(Point p) const {
    double best = kInf, arg = 0;
    for (int i = 0; i < segments(); ++i) {
        Segment sg = segment(i);
        double u = std::clamp(project_param(p, sg), 0.0, 1.0);
        double d = dist(p, lerp(sg.a, sg.b, u));
        if (d < best) {
            best = d;
            arg = start_of(i) + u * dist(sg.a, sg.b);
        }
    }
    return arg;
}

Chain Chain::reversed() const {
    Chain c = *this;
    std::reverse(c.verts.begin(), c.verts.end());
    std::reverse(c.pts.begin(), c.pts.end());
    return c;
}

std::vector<Chain::Hit> Chain::curve_hits(const BisectorCurve& c) const {
    std::vector<Hit> out;
    for (int i = 0; i < segments(); ++i) {
        Segment sg = segment(i);
        double l = dist(sg.a, sg.b);
        for (double t : c.line_params(sg.a, sg.b)) {
            double u = project_param(c.at(t), sg);
            if (u < -1e-9 || u > 1 + 1e-9) continue;
            out.push_back({start_of(i) + std::clamp(u, 0.0, 1.0) * l, t});
        }
    }
    std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) { return a.s < b.s; });
    return out;
}

std::vector<Chain::Hit> Chain::ray_hits(Point origin, Point dir) const {
    std::vector<Hit> out;
    for (int i = 0; i < segments(); ++i) {
        Segment sg = segment(i);
        Point e = sg.b - sg.a;
        double den = cross(dir, e);
        if (std::abs(den) < 1e-300) continue;
        double r = cross(sg.a - origin, e) / den;
        double u = cross(sg.a - origin, dir) / den;
        if (r < -1e-12 || u < -1e-9 || u > 1 + 1e-9) continue;
        out.push_back({start_of(i) + std::clamp(u, 0.0, 1.0) * norm(e), r});
    }
    std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) { return a.s < b.s; });
    return out;
}

// ---- Wavefront structure ----

Wavefront::Wavefront() : id(fresh_id()) {}

Wavefront::Wavefront(const Wavefront& o)
    : id(o.id), eta(o.eta), home_tri(o.home_tri), wavelets(o.wavelets), edges(o.edges), front_polygonal(o.front_polygonal),
      back_polygonal(o.back_polygonal) {
    relink();
}

Wavefront& Wavefront::operator=(const Wavefront& o) {
    if (this == &o) return *this;
    id = o.id;
    eta = o.eta;
    home_tri = o.home_tri;
    wavelets = o.wavelets;
    edges = o.edges;
    front_polygonal = o.front_polygonal;
    back_polygonal = o.back_polygonal;
    relink();
    return *this;
}

Wavefront::Node Wavefront::find(int uid) {
    auto it = index_.find(uid);
    if (it == index_.end()) fail_internal("wavelet not in wavefront");
    return it->second;
}

Wavefront::CNode Wavefront::find(int uid) const {
    auto it = index_.find(uid);
    if (it == index_.end()) fail_internal("wavelet not in wavefront");
    return it->second;
}

std::vector<int> Wavefront::wavelets_of(int site) const {
    std::vector<int> out;
    auto [lo, hi] = site_index_.equal_range(site);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
}

Wavefront::Node Wavefront::insert_wavelet_at(Node pos, Wavelet w) {
    if (w.uid < 0) w.uid = fresh_id();
    if (w.anchors.empty()) fail_internal("wavelet without anchors");
    Node n = wavelets.insert(pos, std::move(w));
    index_[n->uid] = n;
    site_index_.emplace(n->site, n->uid);
    return n;
}

void Wavefront::delete_wavelet(Node n) {
    index_.erase(n->uid);
    auto [lo, hi] = site_index_.equal_range(n->site);
    for (auto it = lo; it != hi; ++it)
        if (it->second == n->uid) {
            site_index_.erase(it);
            break;
        }
    wavelets.erase(n);
}

void Wavefront::relink() {
    index_.clear();
    site_index_.clear();
    std::map<int, IncompleteEdge> kept;
    for (Node n = wavelets.begin(); n != wavelets.end(); ++n) {
        index_[n->uid] = n;
        site_index_.emplace(n->site, n->uid);
        Node nx = std::next(n);
        if (nx == wavelets.end()) {
            n->right_edge = -1;
            continue;
        }
        auto it = edges.find(n->right_edge);
        if (it == edges.end()) fail_internal("adjacent wavelets without a separating edge");
        IncompleteEdge e = it->second;
        e.left_uid = n->uid;
        e.right_uid = nx->uid;
        e.left_site = n->site;
        e.right_site = nx->site;
        kept[e.id] = e;
    }
    edges = std::move(kept);
}

int Wavefront::left_edge(CNode n) const {
    if (n == wavelets.begin()) return -1;
    return std::prev(n)->right_edge;
}

void Wavefront::reverse() {
    std::vector<int> seams;
    for (auto& w : wavelets)
        if (w.right_edge >= 0) seams.push_back(w.right_edge);
    wavelets.reverse();
    std::size_t k = 0;
    std::reverse(seams.begin(), seams.end());
    for (auto& w : wavelets) {
        w.anchors.reverse();
        w.right_edge = k < seams.size() ? seams[k] : -1;
        ++k;
    }
    if (!wavelets.empty()) wavelets.back().right_edge = -1;
    std::swap(front_polygonal, back_polygonal);
    eta = eta.reversed();
    relink();
}

std::pair<Wavefront, Wavefront> split_at(const Wavefront& wf, int uid_at) {
    Wavefront a, b;
    a.eta = b.eta = wf.eta;
    a.home_tri = b.home_tri = wf.home_tri;
    bool second = false;
    for (const Wavelet& w : wf.wavelets) {
        if (w.uid == uid_at) second = true;
        (second ? b : a).wavelets.push_back(w);
    }
    for (const auto& [id, e] : wf.edges) {
        a.edges[id] = e;
        b.edges[id] = e;
    }
    if (!a.wavelets.empty()) a.wavelets.back().right_edge = -1;
    a.front_polygonal = wf.front_polygonal;
    b.back_polygonal = wf.back_polygonal;
    a.back_polygonal = fresh_id();
    b.front_polygonal = fresh_id();
    a.relink();
    b.relink();
    return {std::move(a), std::move(b)};
}

Wavefront concat(Wavefront a, Wavefront b, std::optional<IncompleteEdge> seam) {
    if (a.empty()) {
        b.eta = a.eta.empty() ? b.eta : a.eta;
        return b;
    }
    if (b.empty()) return a;
    if (!a.eta.same_as(b.eta)) fail_internal("concatenating wavefronts over different chains");
    if (!seam) fail_internal("concatenation needs a seam edge");
    for (auto& w : b.wavelets)
        for (auto& x : a.wavelets)
            if (x.uid == w.uid) fail_internal("concatenating overlapping wavefronts");
    IncompleteEdge e = *seam;
    if (e.id < 0) e.id = fresh_id();
    a.wavelets.back().right_edge = e.id;
    a.edges[e.id] = e;
    for (auto& [id, be] : b.edges) a.edges[id] = be;
    a.wavelets.splice(a.wavelets.end(), b.wavelets);
    a.back_polygonal = b.back_polygonal;
    a.relink();
    return a;
}

void insert_anchor_front(Wavelet& w, const AnchorRecord& a, SweepStats* st) {
    w.anchors.push_front(a);
    if (st) ++st->anchors_inserted;
}

void insert_anchor_back(Wavelet& w, const AnchorRecord& a, SweepStats* st) {
    w.anchors.push_back(a);
    if (st) ++st->anchors_inserted;
}

void insert_anchor_after(Wavelet& w, std::list<AnchorRecord>::iterator pos, const AnchorRecord& a, SweepStats* st) {
    w.anchors.insert(std::next(pos), a);
    if (st) ++st->anchors_inserted;
}

void delete_anchor(Wavelet& w, std::list<AnchorRecord>::iterator pos, SweepStats* st) {
    w.anchors.erase(pos);
    if (st) ++st->anchors_deleted;
}

// ---- intervals ----

bool is_parent(const AnchorRecord& parent, const AnchorRecord& child) {
    return child.site == parent.site && child.has_pred && dist(child.pred_pos, parent.pos) < 1e-12 &&
           child.pred_vertex == parent.vertex;
}

std::optional<std::pair<Point, Point>> spm_boundary(const AnchorRecord& a, const AnchorRecord& b) {
    if (is_parent(a, b)) return std::make_pair(b.pos, b.pos - a.pos);
    if (is_parent(b, a)) return std::make_pair(a.pos, a.pos - b.pos);
    return std::nullopt;
}

namespace {

// First chain parameter >= from where the region of a gives way to b.
double boundary_on_chain(const Chain& eta, const AnchorRecord& a, const AnchorRecord& b, double from) {
    double L = eta.length();
    if (a.site == b.site) {
        if (auto ray = spm_boundary(a, b)) {
            // a hit at the ray origin only counts when the ray meets nothing further along
            std::optional<double> at_origin;
            for (const auto& h : eta.ray_hits(ray->first, ray->second)) {
                if (h.s < from - 1e-12) continue;
                if (h.t > 1e-12) return std::max(h.s, from);
                if (!at_origin) at_origin = std::max(h.s, from);
            }
            if (at_origin) return *at_origin;
            // the ray misses the rest of the chain: the earlier anchor keeps it unless it starts on it
            return dist(eta.at(from), ray->first) < 1e-12 ? from : L;
        }
    }
    auto f = [&](double s) {
        Point x = eta.at(s);
        return value_at(a, x) - value_at(b, x);
    };
    double delta = 1e-9 * std::max(L, 1e-12);
    if (pair_has_bisector(a, b)) {
        BisectorCurve c(a.source(), b.source());
        for (const auto& h : eta.curve_hits(c)) {
            if (h.s < from - 1e-12) continue;
            double s = std::max(h.s, from);
            if (s + delta >= L || f(s + delta) > 0) return s;
        }
    }
    double probe = std::min(L, from + delta);
    return f(probe) > 0 ? from : L;
}

}  // namespace

std::vector<Piece> wavefront_pieces(const Wavefront& wf) {
    std::vector<Piece> out;
    if (wf.empty() || wf.eta.empty()) return out;
    double L = wf.eta.length();
    double s = 0;
    const AnchorRecord* prev = nullptr;
    int seam_edge = -1;
    // The traced edge knows where a seam meets the chain; the bisector of the two anchors alone can
    // cross where one of them is hidden.
    auto seam_on_chain = [&](int id) -> std::optional<double> {
        auto it = wf.edges.find(id);
        if (it == wf.edges.end()) return std::nullopt;
        Point x = it->second.last;
        double t = wf.eta.project(x);
        if (dist(wf.eta.at(t), x) > 1e-9) return std::nullopt;
        return t;
    };
    for (const Wavelet& w : wf.wavelets) {
        bool first = true;
        for (const AnchorRecord& a : w.anchors) {
            if (prev) {
                std::optional<double> at = first ? seam_on_chain(seam_edge) : std::nullopt;
                double b = at ? *at : boundary_on_chain(wf.eta, *prev, a, s);
                b = std::clamp(b, s, L);
                out.back().s1 = b;
                s = b;
            }
            out.push_back({w.site, a, s, L, w.uid});
            prev = &a;
            first = false;
        }
        seam_edge = w.right_edge;
    }
    return out;
}

std::vector<ConeSource> sources_through(const Chain& eta, const std::vector<Piece>& pieces, int segment) {
    std::vector<ConeSource> out;
    double S0 = eta.start_of(segment), S1 = eta.start_of(segment + 1);
    Segment sg = eta.segment(segment);
    auto has_full = [&](const AnchorRecord& a) {
        for (const ConeSource& c : out)
            if (c.full && c.anchor.same_anchor(a)) return true;
        return false;
    };
    for (const Piece& p : pieces) {
        if (p.site < 0) continue;
        double lo = std::max(p.s0, S0), hi = std::min(p.s1, S1);
        if (hi < lo - 1e-12) continue;
        bool on_seg = point_segment_distance(p.anchor.pos, sg) <= 1e-12;
        ConeSource c;
        if (on_seg) c = full_cone(p.anchor, p.site);
        else if (hi - lo > 1e-12) c = cone_through(p.anchor, eta.at(lo), eta.at(hi), p.site);
        else continue;
        if (c.full && has_full(c.anchor)) continue;
        out.push_back(c);
    }
    return out;
}

std::vector<ConeSource> sources_through(const Wavefront& wf, int segment) {
    return sources_through(wf.eta, wavefront_pieces(wf), segment);
}

std::vector<Piece> envelope_pieces(const std::vector<ConeSource>& sources, const Chain& eta) {
    std::vector<Piece> out;
    for (int i = 0; i < eta.segments(); ++i) {
        Segment sg = eta.segment(i);
        double S0 = eta.start_of(i), l = dist(sg.a, sg.b);
        for (const EnvPiece& ep : lower_envelope_on_segment(sources, sg)) {
            Piece p;
            if (ep.src >= 0) {
                p.anchor = sources[std::size_t(ep.src)].anchor;
                p.site = p.anchor.site;
            }
            p.s0 = S0 + ep.t0 * l;
            p.s1 = S0 + ep.t1 * l;
            if (!out.empty() && out.back().site == p.site && (p.site < 0 || out.back().anchor.same_anchor(p.anchor)))
                out.back().s1 = p.s1;
            else out.push_back(p);
        }
    }
    return out;
}

std::optional<std::string> compare_pieces(const std::vector<Piece>& got, const std::vector<Piece>& want, double tol) {
    auto clean = [&](const std::vector<Piece>& in) {
        std::vector<Piece> out;
        for (const Piece& p : in) {
            if (p.s1 - p.s0 < tol) continue;
            if (!out.empty() && out.back().site == p.site && out.back().anchor.same_anchor(p.anchor)) out.back().s1 = p.s1;
            else out.push_back(p);
        }
        return out;
    };
    auto g = clean(got), w = clean(want);
    auto describe = [](const std::vector<Piece>& v) {
        std::string s;
        for (const Piece& p : v)
            s += "[" + std::to_string(p.site) + "/" + std::to_string(p.anchor.vertex) + " " + std::to_string(p.s0) + ".." +
                 std::to_string(p.s1) + "]";
        return s;
    };
    if (g.size() != w.size()) return "piece count " + describe(g) + " vs " + describe(w);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].site != w[i].site || !g[i].anchor.same_anchor(w[i].anchor)) return "anchor order " + describe(g) + " vs " + describe(w);
        if (i > 0 && std::abs(g[i].s0 - w[i].s0) > 1e-6) return "boundary " + describe(g) + " vs " + describe(w);
    }
    return std::nullopt;
}

// ---- incomplete edges ----

int update_incomplete_edge(Wavefront& wf, int edge_id, const EdgeTarget& target, SweepStats& st) {
    auto eit = wf.edges.find(edge_id);
    if (eit == wf.edges.end()) fail_internal("updating an edge that is not in the wavefront");
    IncompleteEdge& e = eit->second;
    auto L = wf.find(e.left_uid), R = wf.find(e.right_uid);
    if (target.chain && !target.point) {
        double s = target.chain->project(e.last);
        if (dist(target.chain->at(s), e.last) < 1e-9) return 0;
    }
    Point x = e.last;
    Point head = e.heading;
    int emitted = 0;
    int guard = int(L->anchors.size() + R->anchors.size()) + 4;
    for (int step = 0; step < guard; ++step) {
        if (step > 0 && target.chain && !target.point && dist(target.chain->at(target.chain->project(x)), x) < 1e-9) {
            // an anchor change landed on the target chain
            e.last = x;
            e.heading = head;
            return emitted;
        }
        const AnchorRecord& a = L->anchors.back();
        const AnchorRecord& b = R->anchors.front();
        if (!pair_has_bisector(a, b)) fail_internal("incomplete edge between anchors without a bisector");
        BisectorCurve c(a.source(), b.source());
        double tx = c.param_of(x);
        if (dist(c.at(tx), x) > 1e-6) fail_internal("edge frontier is off its bisector");
        int dir = dot(c.tangent(tx), head) >= 0 ? 1 : -1;
        double best = kInf;
        int which = -1;  // 0 target, 1 left anchor change, 2 right anchor change
        auto consider = [&](double t, int w) {
            if (dir * (t - tx) <= 0 || dist(c.at(t), x) <= 1e-12) return;
            if (best == kInf || dir * (t - best) < 0) {
                best = t;
                which = w;
            }
        };
        if (target.point) {
            double tt = c.param_of(*target.point);
            if (dist(c.at(tt), *target.point) < 1e-7) {
                if (dist(*target.point, x) <= 1e-12 || dir * (tt - tx) <= 0) {
                    if (step == 0) return 0;
                    e.last = x;
                    e.heading = head;
                    return emitted;
                }
                consider(tt, 0);
            }
        }
        if (target.chain) {
            for (const auto& h : target.chain->curve_hits(c)) consider(h.t, 0);
        }
        auto ray_events = [&](const AnchorRecord& cur, const AnchorRecord& nxt, int w) {
            auto ray = spm_boundary(cur, nxt);
            if (!ray) return;
            for (double t : c.line_params(ray->first, ray->first + ray->second)) {
                if (dot(c.at(t) - ray->first, ray->second) < -1e-12) continue;
                consider(t, w);
            }
        };
        if (L->anchors.size() >= 2) ray_events(a, *std::prev(L->anchors.end(), 2), 1);
        if (R->anchors.size() >= 2) ray_events(b, *std::next(R->anchors.begin()), 2);
        if (which < 0) {
            // the frontier already sits on the next anchor's ray: switch anchors in place
            auto on_ray = [&](const AnchorRecord& cur, const AnchorRecord& nxt) {
                auto ray = spm_boundary(cur, nxt);
                if (!ray) return false;
                Point d = ray->second, w = x - ray->first;
                return norm(w) <= 1e-9 || (dot(w, d) >= 0 && std::abs(cross(w, d)) <= 1e-9 * norm(d));
            };
            if (L->anchors.size() >= 2 && on_ray(a, *std::prev(L->anchors.end(), 2))) {
                delete_anchor(*L, std::prev(L->anchors.end()), &st);
                continue;
            }
            if (R->anchors.size() >= 2 && on_ray(b, *std::next(R->anchors.begin()))) {
                delete_anchor(*R, R->anchors.begin(), &st);
                continue;
            }
            fail_internal("incomplete edge has no target ahead");
        }
        TracedArc arc;
        arc.a = a;
        arc.b = b;
        arc.t0 = tx;
        arc.t1 = best;
        arc.p0 = x;
        arc.p1 = which == 0 && target.point ? *target.point : c.at(best);
        e.arcs.push_back(arc);
        x = arc.p1;
        head = dir * c.tangent(best);
        if (which == 0) {
            e.last = x;
            e.heading = head;
            return emitted;
        }
        e.breakpoints.push_back(x);
        ++emitted;
        ++st.breakpoints;
        ++st.I;
        if (which == 1) delete_anchor(*L, std::prev(L->anchors.end()), &st);
        else delete_anchor(*R, R->anchors.begin(), &st);
    }
    fail_internal("incomplete edge update exceeded its anchor budget");
}

void update_all_edges(Wavefront& wf, SweepStats& st) {
    std::vector<int> ids;
    for (const auto& [id, e] : wf.edges) ids.push_back(id);
    EdgeTarget tgt;
    tgt.chain = &wf.eta;
    for (int id : ids) update_incomplete_edge(wf, id, tgt, st);
}

Point heading_into_unswept(const PartitionTree& tree, const Wavefront& wf, const AnchorRecord& a, const AnchorRecord& b, Point x) {
    BisectorCurve c(a.source(), b.source());
    Point tg = c.tangent(c.param_of(x));
    const TreeTriangle& home = tree.triangle(wf.home_tri);
    const Polygon& poly = tree.polygon();
    Point g = (1.0 / 3.0) * (poly[home.v[0]] + poly[home.v[1]] + poly[home.v[2]]);
    Segment sg = wf.eta.segment(wf.eta.segment_at(wf.eta.project(x)));
    Point n = perp(sg.b - sg.a);
    if (dot(n, g - x) > 0) n = -1.0 * n;
    return dot(tg, n) >= 0 ? tg : -1.0 * tg;
}

// ---- potential vertices ----

bool EventQueues::Later::operator()(const PotentialVertex& a, const PotentialVertex& b) const {
    if (a.key != b.key) return a.key > b.key;
    if (a.position.x != b.position.x) return a.position.x > b.position.x;
    if (a.position.y != b.position.y) return a.position.y > b.position.y;
    return a.degree > b.degree;
}

void EventQueues::push(const PotentialVertex& pv) { q_[{pv.tri, pv.entry}].push(pv); }

bool EventQueues::is_valid(const PotentialVertex& pv, const Wavefront& wf) {
    auto ea = wf.edges.find(pv.edge_a);
    if (ea == wf.edges.end()) return false;
    if (pv.degree == 1) return true;
    auto eb = wf.edges.find(pv.edge_b);
    if (eb == wf.edges.end()) return false;
    return ea->second.right_uid == eb->second.left_uid || eb->second.right_uid == ea->second.left_uid;
}

std::optional<PotentialVertex> EventQueues::pop_valid(int tri, int entry, const Wavefront& wf, SweepStats* st) {
    auto it = q_.find({tri, entry});
    if (it == q_.end()) return std::nullopt;
    auto& q = it->second;
    while (!q.empty()) {
        PotentialVertex pv = q.top();
        q.pop();
        if (is_valid(pv, wf)) {
            if (st) {
                ++st->potential_processed;
                ++st->K;
            }
            return pv;
        }
        if (st) ++st->potential_stale;
    }
    return std::nullopt;
}

std::size_t EventQueues::pending(int tri, int entry) const {
    auto it = q_.find({tri, entry});
    return it == q_.end() ? 0 : it->second.size();
}

double diagonal_key(const PartitionTree& tree, int entry_diag, Point p) {
    const Diagonal& d = tree.diagonal(entry_diag);
    Point a = tree.polygon()[d.v1], b = tree.polygon()[d.v2];
    return std::abs(cross(b - a, p - a)) / dist(a, b);
}

namespace {

int trace_triangle(const PartitionTree& tree, Point x, Point heading) {
    int t = tree.locate(x + 1e-9 * unit(heading));
    return t >= 0 ? t : tree.locate(x);
}

}  // namespace

int generate_potential_vertices(const GeodesicEngine& eng, const Wavefront& wf, int edge_id, EventQueues& queues, SweepStats& st) {
    const PartitionTree& tree = eng.tree();
    const IncompleteEdge& e = wf.edges.at(edge_id);
    int made = 0;
    auto push = [&](int degree, std::array<int, 3> sites, Point pos, int tri, int ea, int eb) {
        int entry = tree.toward(tri, wf.home_tri);
        if (entry < 0) return;
        PotentialVertex pv;
        pv.degree = degree;
        pv.sites = sites;
        pv.position = pos;
        pv.tri = tri;
        pv.entry = entry;
        pv.key = diagonal_key(tree, entry, pos);
        pv.edge_a = ea;
        pv.edge_b = eb;
        queues.push(pv);
        ++st.potential_created;
        ++st.K;
        ++made;
    };
    int tri = trace_triangle(tree, e.last, e.heading);
    if (tri < 0) fail_internal("edge frontier outside the polygon");
    if (auto r = voronoi_vertex_deg1_from(eng, e.left_site, e.right_site, tri, e.last, e.heading))
        push(1, {e.left_site, e.right_site, -1}, r->position, r->tri, edge_id, -1);
    auto L = wf.find(e.left_uid), R = wf.find(e.right_uid);
    int le = wf.left_edge(L);
    if (le >= 0) {
        const IncompleteEdge& n = wf.edges.at(le);
        if (n.left_site != e.left_site && n.left_site != e.right_site)
            if (auto r = voronoi_vertex_deg3_from(eng, e.left_site, e.right_site, n.left_site, tri, e.last, e.heading))
                push(3, {n.left_site, e.left_site, e.right_site}, r->position, r->tri, le, edge_id);
    }
    int re = R->right_edge;
    if (re >= 0) {
        const IncompleteEdge& n = wf.edges.at(re);
        if (n.right_site != e.left_site && n.right_site != e.right_site)
            if (auto r = voronoi_vertex_deg3_from(eng, e.left_site, e.right_site, n.right_site, tri, e.last, e.heading))
                push(3, {e.left_site, e.right_site, n.right_site}, r->position, r->tri, edge_id, re);
    }
    return made;
}

}  // namespace gvd
