#include "gvd/geometry.hpp"

#include <algorithm>
#include <functional>

namespace gvd {

double signed_area2(Point p, Point q, Point r) { return cross(q - p, r - p); }

int orient(Point p, Point q, Point r, double eps) {
    if (!finite(p) || !finite(q) || !finite(r)) fail_input("invalid geometry: non-finite coordinate");
    double det = signed_area2(p, q, r);
    double scale = std::max({dist(p, q), dist(p, r), dist(q, r)});
    if (std::abs(det) <= eps * scale * scale) return 0;
    return det > 0 ? 1 : -1;
}

static bool on_segment(Point p, Segment s) {
    return std::min(s.a.x, s.b.x) - 1e-15 <= p.x && p.x <= std::max(s.a.x, s.b.x) + 1e-15 &&
           std::min(s.a.y, s.b.y) - 1e-15 <= p.y && p.y <= std::max(s.a.y, s.b.y) + 1e-15;
}

bool segments_intersect(Segment s, Segment t) {
    int o1 = orient(s.a, s.b, t.a), o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a), o4 = orient(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
        if (o1 != 0 || o2 != 0) return true;
    }
    if (o1 == 0 && on_segment(t.a, s)) return true;
    if (o2 == 0 && on_segment(t.b, s)) return true;
    if (o3 == 0 && on_segment(s.a, t)) return true;
    if (o4 == 0 && on_segment(s.b, t)) return true;
    return false;
}

bool segments_cross_properly(Segment s, Segment t) {
    int o1 = orient(s.a, s.b, t.a), o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a), o4 = orient(t.a, t.b, s.b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

double project_param(Point p, Segment s) {
    Point d = s.b - s.a;
    double l2 = dot(d, d);
    return l2 > 0 ? dot(p - s.a, d) / l2 : 0.0;
}

double point_segment_distance(Point p, Segment s) {
    double t = std::clamp(project_param(p, s), 0.0, 1.0);
    return dist(p, lerp(s.a, s.b, t));
}

BisectorCurve::BisectorCurve(WeightedSource a, WeightedSource b) : a_(a), b_(b) {
    double len = dist(a.position, b.position);
    if (!(len > 0)) throw GvdError(ErrorKind::Degenerate, "degenerate sources: coincident positions");
    double gap = b.weight - a.weight;
    if (std::abs(gap) >= len) throw GvdError(ErrorKind::Degenerate, "empty bisector: weight gap exceeds distance");
    c_ = 0.5 * (a.position + b.position);
    e1_ = unit(b.position - a.position);
    e2_ = perp(e1_);
    half_focal_ = 0.5 * len;
    A_ = std::abs(gap) <= kTol.eps_distance ? 0.0 : 0.5 * gap;
    B_ = std::sqrt(std::max(0.0, half_focal_ * half_focal_ - A_ * A_));
    if (!(B_ > 0)) throw GvdError(ErrorKind::Degenerate, "empty bisector: weight gap equals distance");
}

Point BisectorCurve::at(double t) const { return c_ + (A_ * std::cosh(t)) * e1_ + (B_ * std::sinh(t)) * e2_; }

Point BisectorCurve::tangent(double t) const { return (A_ * std::sinh(t)) * e1_ + (B_ * std::cosh(t)) * e2_; }

double BisectorCurve::param_of(Point x) const { return std::asinh(dot(x - c_, e2_) / B_); }

std::vector<double> solve_exp_quadratic(double p, double q, double r) {
    // (p+q) u^2 + 2 r u + (p-q) = 0, u = e^t > 0
    std::vector<double> out;
    double a2 = p + q, b2 = 2 * r, c2 = p - q;
    double scale = std::max({std::abs(a2), std::abs(b2), std::abs(c2)});
    if (scale == 0) return out;
    auto push = [&](double u) {
        if (u > 0 && std::isfinite(u)) out.push_back(std::log(u));
    };
    if (std::abs(a2) <= 1e-14 * scale) {
        if (b2 != 0) push(-c2 / b2);
        return out;
    }
    double disc = b2 * b2 - 4 * a2 * c2;
    if (disc < 0) {
        if (disc > -1e-14 * scale * scale) disc = 0;
        else return out;
    }
    double sq = std::sqrt(disc);
    double qq = -0.5 * (b2 + (b2 >= 0 ? sq : -sq));
    if (qq != 0) {
        push(qq / a2);
        push(c2 / qq);
    } else {
        push(0.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> BisectorCurve::line_params(Point n, double k) const {
    return solve_exp_quadratic(A_ * dot(n, e1_), B_ * dot(n, e2_), dot(n, c_) - k);
}

std::vector<double> BisectorCurve::line_params(Point p, Point q) const {
    Point n = perp(q - p);
    return line_params(n, dot(n, p));
}

std::vector<double> BisectorCurve::equal_params(const WeightedSource& other) const {
    Point cu = c_ - other.position;
    double alpha = dot(cu, e1_), beta = dot(cu, e2_);
    double delta = a_.weight + A_ - other.weight;
    double P = 2 * A_ * alpha - 2 * delta * half_focal_;
    double Q = 2 * B_ * beta;
    double R = dot(cu, cu) - B_ * B_ - delta * delta;
    // P cosh + Q sinh + R = 0
    std::vector<double> ts = solve_exp_quadratic(P, Q, R);
    std::vector<double> out;
    for (double t : ts) {
        if (value_at(t) - other.weight >= -1e-9) out.push_back(t);
    }
    return out;
}

BisectorCurve weighted_bisector(const WeightedSource& u1, const WeightedSource& u2) {
    if (!finite(u1.position) || !finite(u2.position)) fail_input("invalid geometry: non-finite source");
    return BisectorCurve(u1, u2);
}

std::optional<Point> equidistant_point_on_segment(const WeightedSource& u1, const WeightedSource& u2, Segment seg) {
    if (!finite(seg.a) || !finite(seg.b)) fail_input("invalid geometry: non-finite segment");
    auto f = [&](double t) {
        Point y = lerp(seg.a, seg.b, t);
        return weighted_distance(y, u1) - weighted_distance(y, u2);
    };
    double fa = f(0.0), fb = f(1.0);
    if (fa == 0.0) return seg.a;
    if (fb == 0.0) return seg.b;
    if ((fa > 0) == (fb > 0)) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return lerp(seg.a, seg.b, mid);
        if ((fm > 0) == (fa > 0)) lo = mid;
        else hi = mid;
    }
    return lerp(seg.a, seg.b, 0.5 * (lo + hi));
}

std::vector<Point> flatten_arc(const BisectorCurve& curve, double t0, double t1, double tol) {
    Point p0 = curve.at(t0), p1 = curve.at(t1);
    if (t0 == t1) return {p0, p0};
    if (curve.kind() == CurveKind::Line) return {p0, p1};
    std::vector<Point> out{p0};
    std::function<void(double, Point, double, Point, int)> rec = [&](double ta, Point pa, double tb, Point pb, int depth) {
        double tm = 0.5 * (ta + tb);
        Point pm = curve.at(tm);
        double sag = point_segment_distance(pm, {pa, pb});
        double mid_gap = dist(pm, 0.5 * (pa + pb));
        if (depth < 40 && (sag > 0.25 * tol || mid_gap > 0.5 * tol)) {
            rec(ta, pa, tm, pm, depth + 1);
            rec(tm, pm, tb, pb, depth + 1);
        } else {
            out.push_back(pb);
        }
    };
    rec(t0, p0, t1, p1, 0);
    out.back() = p1;
    return out;
}

std::vector<Point> equidistant_points3(const WeightedSource& a, const WeightedSource& b, const WeightedSource& c) {
    auto try_pair = [](const WeightedSource& p, const WeightedSource& q, const WeightedSource& r) -> std::optional<std::vector<Point>> {
        double len = dist(p.position, q.position);
        if (!(len > 0) || std::abs(p.weight - q.weight) >= len * (1 - 1e-12)) return std::nullopt;
        BisectorCurve cur(p, q);
        std::vector<Point> pts;
        for (double t : cur.equal_params(r)) pts.push_back(cur.at(t));
        return pts;
    };
    if (auto r = try_pair(a, b, c)) return *r;
    if (auto r = try_pair(a, c, b)) return *r;
    if (auto r = try_pair(b, c, a)) return *r;
    return {};
}

}  // namespace gvd
