#include "gvd/local_diagram.hpp"

#include <algorithm>
#include <cmath>

#include "gvd/wavefront.hpp"

namespace gvd {

namespace {

bool bisector_exists(const AnchorRecord& a, const AnchorRecord& b) {
    double d = dist(a.pos, b.pos);
    return d > 1e-14 && std::abs(a.weight - b.weight) < d * (1 - 1e-10);
}

Point ray_direction(const DiagramArc& arc) { return unit(arc.b.pos - arc.a.pos); }

// Parameters r >= 0 where the ray o + r d meets the line through p and q.
std::optional<double> ray_line(Point o, Point d, Point p, Point q) {
    Point e = q - p;
    double den = cross(d, e);
    if (std::abs(den) < 1e-300) return std::nullopt;
    double r = cross(p - o, e) / den;
    if (r < 0) return std::nullopt;
    return r;
}

}  // namespace

Point DiagramArc::at(double t) const {
    if (spm) return b.pos + t * ray_direction(*this);
    return BisectorCurve(a.source(), b.source()).at(t);
}

std::vector<Point> DiagramArc::polyline(double tol) const {
    if (spm) return {p0, p1};
    auto pts = flatten_arc(BisectorCurve(a.source(), b.source()), t0, t1, tol);
    if (pts.empty()) return {p0, p1};
    pts.front() = p0;
    pts.back() = p1;
    return pts;
}

LocalDiagram build_local_diagram(const PartitionTree& tree, int tri, std::vector<ConeSource> sources) {
    LocalDiagram ld;
    ld.tri = tri;
    for (ConeSource& s : sources) {
        bool dup = std::any_of(ld.sources.begin(), ld.sources.end(), [&](const ConeSource& o) {
            return o.full && s.full && o.anchor.same_anchor(s.anchor);
        });
        if (!dup) ld.sources.push_back(std::move(s));
    }
    const auto& S = ld.sources;
    const Polygon& poly = tree.polygon();
    const TreeTriangle& T = tree.triangle(tri);
    Point P[3] = {poly[T.v[0]], poly[T.v[1]], poly[T.v[2]]};
    auto beaten = [&](Point x, double v, std::size_t i, std::size_t j, double eps) {
        for (std::size_t k = 0; k < S.size(); ++k) {
            if (k == i || k == j) continue;
            if (S[k].admits(x, 1e-10) && S[k].value(x) < v - eps) return true;
        }
        return false;
    };

    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            const AnchorRecord& ai = S[i].anchor;
            const AnchorRecord& aj = S[j].anchor;
            if (ai.site == aj.site || !bisector_exists(ai, aj)) continue;
            BisectorCurve c(ai.source(), aj.source());
            std::vector<double> ts{c.lo, c.hi};
            auto add = [&](const std::vector<double>& v) { ts.insert(ts.end(), v.begin(), v.end()); };
            for (int e = 0; e < 3; ++e) add(c.line_params(P[e], P[(e + 1) % 3]));
            for (std::size_t k = 0; k < S.size(); ++k) {
                if (!S[k].full) {
                    add(c.line_params(S[k].anchor.pos, S[k].anchor.pos + S[k].left));
                    add(c.line_params(S[k].anchor.pos, S[k].anchor.pos + S[k].right));
                }
                if (k == i || k == j) continue;
                const AnchorRecord& ak = S[k].anchor;
                if ((ak.pos == ai.pos && ak.weight == ai.weight) || (ak.pos == aj.pos && ak.weight == aj.weight)) continue;
                add(c.equal_params(ak.source()));
            }
            std::erase_if(ts, [&](double t) { return !(t >= c.lo && t <= c.hi); });
            std::sort(ts.begin(), ts.end());
            bool open = false;
            for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                double ta = ts[k], tb = ts[k + 1];
                if (tb - ta < 1e-12) continue;
                double tm = 0.5 * (ta + tb);
                Point x = c.at(tm);
                bool keep = tree.contains(tri, x, 1e-12) && S[i].admits(x) && S[j].admits(x) && !beaten(x, c.value_at(tm), i, j, 1e-10);
                if (!keep) {
                    open = false;
                    continue;
                }
                if (open) {
                    ld.arcs.back().t1 = tb;
                    ld.arcs.back().p1 = c.at(tb);
                } else {
                    DiagramArc arc;
                    arc.tri = tri;
                    arc.a = ai;
                    arc.b = aj;
                    arc.t0 = ta;
                    arc.t1 = tb;
                    arc.p0 = c.at(ta);
                    arc.p1 = c.at(tb);
                    ld.arcs.push_back(arc);
                    open = true;
                }
            }
        }

    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < S.size(); ++j) {
            if (i == j || !is_parent(S[i].anchor, S[j].anchor)) continue;
            Point o = S[j].anchor.pos;
            Point d = unit(o - S[i].anchor.pos);
            double w = S[j].anchor.weight;
            std::vector<double> rs{0.0};
            for (int e = 0; e < 3; ++e) {
                Point p = P[e], q = P[(e + 1) % 3];
                Point ed = q - p;
                double den = cross(d, ed);
                if (std::abs(den) < 1e-300) continue;
                double r = cross(p - o, ed) / den, u = cross(p - o, d) / den;
                if (r >= 0 && u >= -1e-12 && u <= 1 + 1e-12) rs.push_back(r);
            }
            double rmax = *std::max_element(rs.begin(), rs.end());
            for (std::size_t k = 0; k < S.size(); ++k) {
                if (!S[k].full) {
                    for (Point dir : {S[k].left, S[k].right})
                        if (auto r = ray_line(o, d, S[k].anchor.pos, S[k].anchor.pos + dir)) rs.push_back(*r);
                }
                if (k == i || k == j) continue;
                Point ok = o - S[k].anchor.pos;
                double dw = w - S[k].anchor.weight;
                double den = 2 * (dot(d, ok) - dw);
                if (std::abs(den) > 1e-300) {
                    double r = (dw * dw - dot(ok, ok)) / den;
                    if (r > 0) rs.push_back(r);
                }
            }
            std::erase_if(rs, [&](double r) { return r > rmax; });
            std::sort(rs.begin(), rs.end());
            bool open = false;
            for (std::size_t k = 0; k + 1 < rs.size(); ++k) {
                double ra = rs[k], rb = rs[k + 1];
                if (rb - ra < 1e-12) continue;
                Point x = o + (0.5 * (ra + rb)) * d;
                double v = w + 0.5 * (ra + rb);
                bool keep = tree.contains(tri, x, 1e-12) && (S[i].admits(x, 1e-9) || S[j].admits(x, 1e-9)) &&
                            evaluate(S, x) >= v - 1e-9;
                if (!keep) {
                    open = false;
                    continue;
                }
                if (open) {
                    ld.spm_arcs.back().t1 = rb;
                    ld.spm_arcs.back().p1 = o + rb * d;
                } else {
                    DiagramArc arc;
                    arc.tri = tri;
                    arc.spm = true;
                    arc.a = S[i].anchor;
                    arc.b = S[j].anchor;
                    arc.t0 = ra;
                    arc.t1 = rb;
                    arc.p0 = o + ra * d;
                    arc.p1 = o + rb * d;
                    ld.spm_arcs.push_back(arc);
                    open = true;
                }
            }
        }

    // keep the sources that are nearest somewhere; every cone of an anchor on an arc counts
    std::vector<bool> keep(S.size(), false);
    for (const auto* list : {&ld.arcs, &ld.spm_arcs})
        for (const DiagramArc& arc : *list)
            for (std::size_t k = 0; k < S.size(); ++k)
                if (S[k].anchor.same_anchor(arc.a) || S[k].anchor.same_anchor(arc.b)) keep[k] = true;
    const int N = 8;
    for (int u = 0; u <= N; ++u)
        for (int v = 0; u + v <= N; ++v) {
            double a = (u + 0.5) / (N + 2), b = (v + 0.5) / (N + 2);
            Point x = P[0] + a * (P[1] - P[0]) + b * (P[2] - P[0]);
            int w = -1;
            evaluate(S, x, &w);
            if (w >= 0) keep[std::size_t(w)] = true;
        }
    std::vector<ConeSource> kept;
    for (std::size_t k = 0; k < S.size(); ++k)
        if (keep[k]) kept.push_back(S[k]);
    ld.sources = std::move(kept);
    return ld;
}

}  // namespace gvd
