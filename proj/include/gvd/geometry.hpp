#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gvd/error.hpp"

namespace gvd {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp(Point a) { return {-a.y, a.x}; }
inline Point unit(Point a) {
    double l = norm(a);
    return l > 0 ? Point{a.x / l, a.y / l} : Point{0, 0};
}
inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }
inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Tolerances {
    double eps_predicate = 1e-12;
    double eps_distance = 1e-9;
    double eps_flatten = 1e-4;
};

inline constexpr Tolerances kTol{};

struct Segment {
    Point a;
    Point b;
};

// Sign of twice the signed area of pqr, zero within a relative tolerance.
int orient(Point p, Point q, Point r, double eps = kTol.eps_predicate);
double signed_area2(Point p, Point q, Point r);

// Closed segments: true when they share at least one point.
bool segments_intersect(Segment s, Segment t);
// Proper crossing: interiors cross at a single point.
bool segments_cross_properly(Segment s, Segment t);
double point_segment_distance(Point p, Segment s);
// Parameter along s of the projection of p, unclamped.
double project_param(Point p, Segment s);

struct WeightedSource {
    Point position;
    double weight = 0.0;
};

inline double weighted_distance(Point x, const WeightedSource& u) { return dist(x, u.position) + u.weight; }

enum class CurveKind { Line, Hyperbola };

// Points x with |x-a| + wa = |x-b| + wb. Parameterized as
// x(t) = c + A cosh(t) e1 + B sinh(t) e2, which is a line when A == 0.
class BisectorCurve {
public:
    BisectorCurve(WeightedSource a, WeightedSource b);

    CurveKind kind() const { return A_ == 0.0 ? CurveKind::Line : CurveKind::Hyperbola; }
    const WeightedSource& first() const { return a_; }
    const WeightedSource& second() const { return b_; }
    Point at(double t) const;
    // Common weighted distance to both sources at parameter t.
    double value_at(double t) const { return a_.weight + A_ + half_focal_ * std::cosh(t); }
    double param_of(Point x) const;
    Point tangent(double t) const;

    // Parameters where the curve meets the line n.x = k.
    std::vector<double> line_params(Point n, double k) const;
    // Parameters where the curve meets the full line through p and q.
    std::vector<double> line_params(Point p, Point q) const;
    // Parameters where the third source has the same weighted distance.
    std::vector<double> equal_params(const WeightedSource& other) const;

    double lo = -40.0;
    double hi = 40.0;

private:
    WeightedSource a_, b_;
    Point c_, e1_, e2_;
    double A_ = 0, B_ = 0, half_focal_ = 0;
};

BisectorCurve weighted_bisector(const WeightedSource& u1, const WeightedSource& u2);

// Inverse of the map u -> (p+q)u^2 + 2ru + (p-q) restricted to positive u, as curve parameters.
std::vector<double> solve_exp_quadratic(double p, double q, double r);

std::optional<Point> equidistant_point_on_segment(const WeightedSource& u1, const WeightedSource& u2, Segment seg);

std::vector<Point> flatten_arc(const BisectorCurve& curve, double t0, double t1, double tol);

// Points equidistant (weighted) from three sources.
std::vector<Point> equidistant_points3(const WeightedSource& a, const WeightedSource& b, const WeightedSource& c);

}  // namespace gvd
