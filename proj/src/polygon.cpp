#include "gvd/polygon.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <random>

namespace gvd {

static double polygon_area2(const std::vector<Point>& v) {
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return a;
}

bool point_in_polygon(const Polygon& poly, Point p) {
    bool inside = false;
    int n = poly.size();
    for (int i = 0, j = n - 1; i < n; j = i++) {
        Point a = poly[i], b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

double distance_to_boundary(const Polygon& poly, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.size(); ++i) best = std::min(best, point_segment_distance(p, poly.side(i)));
    return best;
}

PreparedInput validate_and_normalize(const std::vector<Point>& raw_polygon, const std::vector<Point>& raw_sites) {
    if (raw_polygon.size() < 3) fail_input("polygon needs at least 3 vertices");
    for (Point p : raw_polygon)
        if (!finite(p)) fail_input("polygon has a non-finite coordinate");
    for (Point p : raw_sites)
        if (!finite(p)) fail_input("site has a non-finite coordinate");

    double minx = raw_polygon[0].x, maxx = minx, miny = raw_polygon[0].y, maxy = miny;
    for (Point p : raw_polygon) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    Normalization norm{{minx, miny}, std::max(maxx - minx, maxy - miny)};
    if (!(norm.scale > 0)) fail_input("polygon has zero extent");

    PreparedInput out;
    out.normalization = norm;
    for (Point p : raw_polygon) out.polygon.vertices.push_back(norm.apply(p));
    if (polygon_area2(out.polygon.vertices) < 0) std::reverse(out.polygon.vertices.begin(), out.polygon.vertices.end());
    Polygon& poly = out.polygon;
    int n = poly.size();
    for (int i = 0; i < n; ++i) {
        if (dist(poly[i], poly[poly.next(i)]) <= 1e-12) fail_input("polygon has a repeated vertex");
        if (orient(poly[poly.prev(i)], poly[i], poly[poly.next(i)]) == 0) fail_input("polygon has a collinear vertex");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(poly.side(i), poly.side(j))) fail_input("polygon is not simple");
        }
    }
    poly.reflex.assign(std::size_t(n), false);
    for (int i = 0; i < n; ++i) poly.reflex[std::size_t(i)] = orient(poly[poly.prev(i)], poly[i], poly[poly.next(i)]) < 0;

    for (Point raw : raw_sites) {
        Point s = norm.apply(raw);
        if (!point_in_polygon(poly, s) || distance_to_boundary(poly, s) <= 1e-10) fail_input("site is not strictly inside the polygon");
        for (Point t : out.sites.sites)
            if (dist(s, t) <= 1e-12) fail_input("duplicate sites");
        out.sites.sites.push_back(s);
    }
    return out;
}

Triangulation triangulate(const Polygon& poly) {
    int n = poly.size();
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[std::size_t(i)] = i;
    std::vector<std::array<int, 3>> tris;

    auto is_ear = [&](std::size_t k) {
        std::size_t m = idx.size();
        int a = idx[(k + m - 1) % m], b = idx[k], c = idx[(k + 1) % m];
        if (orient(poly[a], poly[b], poly[c]) <= 0) return false;
        for (int v : idx) {
            if (v == a || v == b || v == c) continue;
            Point p = poly[v];
            if (orient(poly[a], poly[b], p) >= 0 && orient(poly[b], poly[c], p) >= 0 && orient(poly[c], poly[a], p) >= 0) return false;
        }
        return true;
    };
    auto quality = [&](std::size_t k) {
        std::size_t m = idx.size();
        Point a = poly[idx[(k + m - 1) % m]], b = poly[idx[k]], c = poly[idx[(k + 1) % m]];
        double area = std::abs(signed_area2(a, b, c));
        double l = std::max({dist(a, b), dist(b, c), dist(c, a)});
        return area / (l * l);
    };

    while (idx.size() > 3) {
        std::size_t best = idx.size();
        double best_q = -1;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (!is_ear(k)) continue;
            double q = quality(k);
            if (q > best_q) {
                best_q = q;
                best = k;
            }
        }
        if (best == idx.size()) fail_internal("ear clipping found no ear");
        std::size_t m = idx.size();
        tris.push_back({idx[(best + m - 1) % m], idx[best], idx[(best + 1) % m]});
        idx.erase(idx.begin() + std::ptrdiff_t(best));
    }
    tris.push_back({idx[0], idx[1], idx[2]});

    Triangulation out;
    std::map<std::pair<int, int>, std::vector<int>> by_edge;
    for (std::size_t t = 0; t < tris.size(); ++t) {
        Triangle tr;
        tr.v = tris[t];
        tr.nbr = {-1, -1, -1};
        out.triangles.push_back(tr);
        for (int i = 0; i < 3; ++i) {
            int a = tr.v[std::size_t(i)], b = tr.v[std::size_t((i + 1) % 3)];
            by_edge[{std::min(a, b), std::max(a, b)}].push_back(int(t));
        }
    }
    for (std::size_t t = 0; t < out.triangles.size(); ++t) {
        Triangle& tr = out.triangles[t];
        for (int i = 0; i < 3; ++i) {
            int a = tr.v[std::size_t(i)], b = tr.v[std::size_t((i + 1) % 3)];
            const auto& list = by_edge[{std::min(a, b), std::max(a, b)}];
            for (int o : list)
                if (o != int(t)) tr.nbr[std::size_t(i)] = o;
        }
    }
    return out;
}

PartitionTree::PartitionTree(const Polygon& poly, const Triangulation& tri, const SiteSet& sites, std::optional<int> forced_root)
    : poly_(poly), sites_(sites) {
    int nt = int(tri.triangles.size());
    tris_.resize(std::size_t(nt));
    for (int t = 0; t < nt; ++t) {
        tris_[std::size_t(t)].v = tri.triangles[std::size_t(t)].v;
        tris_[std::size_t(t)].nbr = tri.triangles[std::size_t(t)].nbr;
    }
    auto degree = [&](int t) {
        int c = 0;
        for (int o : tris_[std::size_t(t)].nbr) c += o >= 0;
        return c;
    };
    root_ = 0;
    if (forced_root) {
        root_ = *forced_root;
        if (root_ < 0 || root_ >= nt || degree(root_) > 1) fail_input("forced root must be a degree-1 triangle");
    } else {
        for (int t = 0; t < nt; ++t)
            if (degree(t) <= 1) {
                root_ = t;
                break;
            }
    }

    auto name_corners = [&](TreeTriangle& tr, int a, int b) {
        for (int i = 0; i < 3; ++i) {
            if (tr.v[std::size_t(i)] == a && tr.v[std::size_t((i + 1) % 3)] == b) {
                tr.v1 = a;
                tr.v2 = b;
                tr.v12 = tr.v[std::size_t((i + 2) % 3)];
                return;
            }
            if (tr.v[std::size_t(i)] == b && tr.v[std::size_t((i + 1) % 3)] == a) {
                tr.v1 = b;
                tr.v2 = a;
                tr.v12 = tr.v[std::size_t((i + 2) % 3)];
                return;
            }
        }
        fail_internal("diagonal not found in triangle");
    };

    depth_.assign(std::size_t(nt), 0);
    std::vector<int> order{root_};
    std::vector<bool> seen(std::size_t(nt), false);
    seen[std::size_t(root_)] = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
        int t = order[k];
        TreeTriangle& tr = tris_[std::size_t(t)];
        for (int i = 0; i < 3; ++i) {
            int o = tr.nbr[std::size_t(i)];
            if (o < 0 || seen[std::size_t(o)]) continue;
            seen[std::size_t(o)] = true;
            TreeTriangle& ch = tris_[std::size_t(o)];
            ch.parent = t;
            depth_[std::size_t(o)] = depth_[std::size_t(t)] + 1;
            tr.children.push_back(o);
            int a = tr.v[std::size_t(i)], b = tr.v[std::size_t((i + 1) % 3)];
            Diagonal dg;
            dg.lower = o;
            dg.upper = t;
            name_corners(ch, a, b);
            dg.v1 = ch.v1;
            dg.v2 = ch.v2;
            ch.root_diag = int(diags_.size());
            diags_.push_back(dg);
            order.push_back(o);
        }
    }
    {
        TreeTriangle& r = tris_[std::size_t(root_)];
        if (!r.children.empty()) {
            const Diagonal& dg = diags_[std::size_t(tris_[std::size_t(r.children[0])].root_diag)];
            name_corners(r, dg.v2, dg.v1);
        } else {
            r.v1 = r.v[0];
            r.v2 = r.v[1];
            r.v12 = r.v[2];
        }
    }

    pre_.clear();
    post_.clear();
    tin_.assign(std::size_t(nt), 0);
    tout_.assign(std::size_t(nt), 0);
    int clock = 0;
    std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
    pre_.push_back(root_);
    tin_[std::size_t(root_)] = clock++;
    while (!stack.empty()) {
        auto& [t, k] = stack.back();
        const auto& ch = tris_[std::size_t(t)].children;
        if (k < ch.size()) {
            int c = ch[k++];
            pre_.push_back(c);
            tin_[std::size_t(c)] = clock++;
            stack.push_back({c, 0});
        } else {
            tout_[std::size_t(t)] = clock++;
            post_.push_back(t);
            stack.pop_back();
        }
    }

    site_tri_.assign(std::size_t(sites_.size()), -1);
    for (int s = 0; s < sites_.size(); ++s) {
        int t = locate(sites_[s]);
        if (t < 0) fail_input("site could not be located in the triangulation");
        site_tri_[std::size_t(s)] = t;
        tris_[std::size_t(t)].sites.push_back(s);
    }

    below_.assign(diags_.size(), {});
    for (int t : post_) {
        const TreeTriangle& tr = tris_[std::size_t(t)];
        if (tr.root_diag < 0) continue;
        auto& acc = below_[std::size_t(tr.root_diag)];
        acc = tr.sites;
        for (int c : tr.children) {
            const auto& sub = below_[std::size_t(tris_[std::size_t(c)].root_diag)];
            acc.insert(acc.end(), sub.begin(), sub.end());
        }
        std::sort(acc.begin(), acc.end());
        diags_[std::size_t(tr.root_diag)].below_count = int(acc.size());
    }
}

int PartitionTree::diagonal_between(int a, int b) const {
    for (std::size_t d = 0; d < diags_.size(); ++d) {
        const Diagonal& dg = diags_[d];
        if ((dg.v1 == a && dg.v2 == b) || (dg.v1 == b && dg.v2 == a)) return int(d);
    }
    return -1;
}

int PartitionTree::across(int t, int a, int b) const {
    const TreeTriangle& tr = tris_[std::size_t(t)];
    for (int i = 0; i < 3; ++i) {
        int p = tr.v[std::size_t(i)], q = tr.v[std::size_t((i + 1) % 3)];
        if ((p == a && q == b) || (p == b && q == a)) return tr.nbr[std::size_t(i)];
    }
    return -1;
}

bool PartitionTree::contains(int t, Point p, double eps) const {
    const TreeTriangle& tr = tris_[std::size_t(t)];
    for (int i = 0; i < 3; ++i) {
        Point a = poly_[tr.v[std::size_t(i)]], b = poly_[tr.v[std::size_t((i + 1) % 3)]];
        double l = dist(a, b);
        if (signed_area2(a, b, p) < -eps * l) return false;
    }
    return true;
}

int PartitionTree::locate(Point p) const {
    // Walk the dual tree from the root; ties on a diagonal go to the deeper (lower) triangle.
    int best = -1;
    for (int t : pre_) {
        if (!contains(t, p)) continue;
        if (best < 0 || depth_[std::size_t(t)] > depth_[std::size_t(best)]) best = t;
    }
    return best;
}

std::vector<int> PartitionTree::above(int d) const {
    std::vector<int> out;
    const auto& b = below_[std::size_t(d)];
    for (int s = 0; s < sites_.size(); ++s)
        if (!std::binary_search(b.begin(), b.end(), s)) out.push_back(s);
    return out;
}

bool PartitionTree::is_below(int t, int d) const {
    int l = diags_[std::size_t(d)].lower;
    return tin_[std::size_t(l)] <= tin_[std::size_t(t)] && tout_[std::size_t(t)] <= tout_[std::size_t(l)];
}

int PartitionTree::toward(int from, int to) const {
    if (from == to) return -1;
    auto inside = [&](int a, int b) { return tin_[std::size_t(a)] <= tin_[std::size_t(b)] && tout_[std::size_t(b)] <= tout_[std::size_t(a)]; };
    if (inside(from, to)) {
        for (int c : tris_[std::size_t(from)].children)
            if (inside(c, to)) return tris_[std::size_t(c)].root_diag;
    }
    return tris_[std::size_t(from)].root_diag;
}

std::vector<int> PartitionTree::subtree(int d) const {
    std::vector<int> out;
    for (int t : pre_)
        if (is_below(t, d)) out.push_back(t);
    return out;
}

std::vector<int> PartitionTree::leaf_candidates() const {
    std::vector<int> out;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        int c = 0;
        for (int o : tris_[t].nbr) c += o >= 0;
        if (c <= 1) out.push_back(int(t));
    }
    return out;
}

GeneralPositionReport check_vertex_ties(const Polygon& poly, const SiteSet& sites, const SiteVertexDistance& dist_fn, double eps) {
    GeneralPositionReport rep;
    if (sites.size() < 2) return rep;
    for (int v = 0; v < poly.size(); ++v) {
        std::vector<std::pair<double, int>> ds;
        for (int s = 0; s < sites.size(); ++s) ds.push_back({dist_fn(s, v), s});
        std::sort(ds.begin(), ds.end());
        if (ds[1].first - ds[0].first <= eps) {
            rep.ok = false;
            rep.vertex = v;
            rep.site_a = ds[0].second;
            rep.site_b = ds[1].second;
            return rep;
        }
    }
    return rep;
}

SiteSet enforce_general_position(const Polygon& poly, const SiteSet& sites, std::optional<double> jitter, std::uint64_t seed,
                                 const std::function<bool(const SiteSet&)>& passes) {
    if (passes(sites)) return sites;
    if (!jitter || !(*jitter > 0)) fail_degenerate("sites violate general position (tie detected); rerun with --jitter");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        SiteSet moved = sites;
        for (Point& p : moved.sites) {
            for (int tries = 0; tries < 64; ++tries) {
                double r = *jitter * std::sqrt(uni(rng)), a = 2 * M_PI * uni(rng);
                Point q{p.x + r * std::cos(a), p.y + r * std::sin(a)};
                if (point_in_polygon(poly, q) && distance_to_boundary(poly, q) > 1e-10) {
                    p = q;
                    break;
                }
            }
        }
        if (passes(moved)) return moved;
    }
    fail_degenerate("jitter could not restore general position");
}

}  // namespace gvd
