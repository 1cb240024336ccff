#include "gvd/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace gvd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GeodesicOracle::GeodesicOracle(std::vector<Point> polygon_ccw, std::vector<Point> sites)
    : poly_(std::move(polygon_ccw)), sites_(std::move(sites)) {
    int n = int(poly_.size());
    for (int i = 0; i < n; ++i) {
        Point a = poly_[std::size_t((i + n - 1) % n)], b = poly_[std::size_t(i)], c = poly_[std::size_t((i + 1) % n)];
        if (signed_area2(a, b, c) < 0) reflex_.push_back(i);
    }
    std::size_t r = reflex_.size();
    reflex_edges_.assign(r, std::vector<double>(r, kInf));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            Point a = poly_[std::size_t(reflex_[i])], b = poly_[std::size_t(reflex_[j])];
            if (visible(a, b)) reflex_edges_[i][j] = reflex_edges_[j][i] = dist(a, b);
        }
    for (Point s : sites_) site_trees_.push_back(shortest_tree(s));
}

bool GeodesicOracle::inside(Point p) const {
    std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (point_segment_distance(p, {poly_[i], poly_[(i + 1) % n]}) <= 1e-12) return true;
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Point a = poly_[i], b = poly_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

bool GeodesicOracle::visible(Point a, Point b) const {
    std::size_t n = poly_.size();
    std::vector<double> cuts{0.0, 1.0};
    Segment ab{a, b};
    double len = dist(a, b);
    if (len == 0) return inside(a);
    for (std::size_t i = 0; i < n; ++i) {
        Segment e{poly_[i], poly_[(i + 1) % n]};
        if (segments_cross_properly(ab, e)) return false;
        if (point_segment_distance(e.a, ab) <= 1e-12 * std::max(1.0, len)) cuts.push_back(project_param(e.a, ab));
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-14) continue;
        if (!inside(lerp(a, b, 0.5 * (cuts[i] + cuts[i + 1])))) return false;
    }
    return true;
}

GeodesicOracle::Tree GeodesicOracle::shortest_tree(Point src) const {
    std::size_t r = reflex_.size();
    Tree t;
    t.dist.assign(r, kInf);
    t.pred.assign(r, -1);
    std::vector<bool> done(r, false);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t i = 0; i < r; ++i) {
        Point v = poly_[std::size_t(reflex_[i])];
        if (visible(src, v)) {
            t.dist[i] = dist(src, v);
            pq.push({t.dist[i], i});
        }
    }
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (done[i] || d > t.dist[i]) continue;
        done[i] = true;
        for (std::size_t j = 0; j < r; ++j) {
            double w = reflex_edges_[i][j];
            if (w == kInf || done[j]) continue;
            if (d + w < t.dist[j]) {
                t.dist[j] = d + w;
                t.pred[j] = int(i);
                pq.push({t.dist[j], j});
            }
        }
    }
    return t;
}

double GeodesicOracle::query(const Tree& t, Point src, Point x, Point* anchor, double cutoff) const {
    // candidates by lower bound; the first visible one is the distance
    struct Cand {
        double lower;
        int reflex;  // -1 = the source itself
    };
    std::vector<Cand> cands;
    cands.reserve(reflex_.size() + 1);
    cands.push_back({dist(src, x), -1});
    for (std::size_t i = 0; i < reflex_.size(); ++i)
        if (t.dist[i] != kInf) cands.push_back({t.dist[i] + dist(poly_[std::size_t(reflex_[i])], x), int(i)});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.lower < b.lower; });
    auto sees = [&](const Cand& c) { return c.reflex < 0 ? visible(src, x) : sees_reflex(std::size_t(c.reflex), x); };
    double best = kInf;
    Point arg = src;
    double arg_weight = -1;
    for (const Cand& c : cands) {
        if (c.lower > best + 1e-13 || (best == kInf && c.lower > cutoff)) break;
        if (!sees(c)) continue;
        // among equal lengths the deeper anchor wins
        double w = c.reflex < 0 ? 0.0 : t.dist[std::size_t(c.reflex)];
        if (best == kInf) best = c.lower;
        if (w > arg_weight) {
            arg_weight = w;
            arg = c.reflex < 0 ? src : poly_[std::size_t(reflex_[std::size_t(c.reflex)])];
        }
    }
    if (anchor) *anchor = arg;
    return best;
}

bool GeodesicOracle::sees_reflex(std::size_t i, Point x) const {
    if (!(x == memo_point_)) {
        memo_point_ = x;
        memo_visible_.assign(reflex_.size(), -1);
    }
    signed char& v = memo_visible_[i];
    if (v < 0) v = visible(poly_[std::size_t(reflex_[i])], x) ? 1 : 0;
    return v == 1;
}

double GeodesicOracle::distance(Point p, Point q) const {
    if (!inside(p) || !inside(q)) fail_input("point outside polygon");
    if (p == q) return 0.0;
    return query(shortest_tree(p), p, q, nullptr);
}

std::vector<Point> GeodesicOracle::path(Point p, Point q) const {
    if (!inside(p) || !inside(q)) fail_input("point outside polygon");
    if (p == q) return {p};
    Tree t = shortest_tree(p);
    Point a;
    query(t, p, q, &a);
    std::vector<Point> rev{q};
    if (a != p) {
        auto it = std::find_if(reflex_.begin(), reflex_.end(), [&](int v) { return poly_[std::size_t(v)] == a; });
        for (int i = int(it - reflex_.begin()); i >= 0; i = t.pred[std::size_t(i)]) rev.push_back(poly_[std::size_t(reflex_[std::size_t(i)])]);
    }
    rev.push_back(p);
    std::reverse(rev.begin(), rev.end());
    return rev;
}

double GeodesicOracle::site_distance(int site, Point x, Point* anchor) const {
    return query(site_trees_[std::size_t(site)], sites_[std::size_t(site)], x, anchor);
}

GeodesicOracle::Nearest GeodesicOracle::nearest_site(Point x) const {
    std::vector<std::pair<double, int>> order;
    for (int s = 0; s < site_count(); ++s) order.push_back({dist(sites_[std::size_t(s)], x), s});
    std::sort(order.begin(), order.end());
    Nearest n;
    n.distance = kInf;
    for (auto [euclid, s] : order) {
        if (euclid > n.distance) break;
        double d = query(site_trees_[std::size_t(s)], sites_[std::size_t(s)], x, nullptr, n.distance);
        if (d < n.distance || (d == n.distance && s < n.site)) {
            n.distance = d;
            n.site = s;
        }
    }
    return n;
}

}  // namespace gvd
