#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gvd/geometry.hpp"

namespace gvd {

struct Polygon {
    std::vector<Point> vertices;  // counterclockwise
    std::vector<bool> reflex;

    int size() const { return static_cast<int>(vertices.size()); }
    Point operator[](int i) const { return vertices[static_cast<std::size_t>(i)]; }
    int next(int i) const { return (i + 1) % size(); }
    int prev(int i) const { return (i + size() - 1) % size(); }
    Segment side(int i) const { return {vertices[std::size_t(i)], vertices[std::size_t(next(i))]}; }
    bool is_side(int a, int b) const { return next(a) == b || next(b) == a; }
};

struct SiteSet {
    std::vector<Point> sites;
    int size() const { return static_cast<int>(sites.size()); }
    Point operator[](int i) const { return sites[static_cast<std::size_t>(i)]; }
};

// Uniform scale + translation used to map raw input into the unit box.
struct Normalization {
    Point offset;
    double scale = 1.0;
    Point apply(Point p) const { return (1.0 / scale) * (p - offset); }
    Point invert(Point p) const { return scale * p + offset; }
};

struct PreparedInput {
    Polygon polygon;
    SiteSet sites;
    Normalization normalization;
};

PreparedInput validate_and_normalize(const std::vector<Point>& raw_polygon, const std::vector<Point>& raw_sites);

bool point_in_polygon(const Polygon& poly, Point p);
double distance_to_boundary(const Polygon& poly, Point p);

struct Triangle {
    std::array<int, 3> v{};    // counterclockwise corner vertex ids
    std::array<int, 3> nbr{};  // triangle across side (v[i], v[i+1]), -1 on a polygon side
};

struct Triangulation {
    std::vector<Triangle> triangles;
};

Triangulation triangulate(const Polygon& poly);

struct TreeTriangle {
    std::array<int, 3> v{};
    std::array<int, 3> nbr{};
    int parent = -1;
    int root_diag = -1;  // diagonal to the parent, -1 for the root
    std::vector<int> children;
    // Corners named after the root diagonal: d = v1v2, d1 = v1v12, d2 = v2v12.
    // (v1, v2, v12) is counterclockwise.
    int v1 = -1, v2 = -1, v12 = -1;
    std::vector<int> sites;  // sites located in this triangle
};

struct Diagonal {
    int v1 = -1, v2 = -1;  // same naming as the lower triangle
    int lower = -1;        // child side
    int upper = -1;        // parent side
    int below_count = 0;   // |S(d)|
};

class PartitionTree {
public:
    PartitionTree() = default;
    PartitionTree(const Polygon& poly, const Triangulation& tri, const SiteSet& sites, std::optional<int> forced_root = {});

    const Polygon& polygon() const { return poly_; }
    const SiteSet& sites() const { return sites_; }
    int root() const { return root_; }
    const std::vector<TreeTriangle>& triangles() const { return tris_; }
    const TreeTriangle& triangle(int t) const { return tris_[std::size_t(t)]; }
    const std::vector<Diagonal>& diagonals() const { return diags_; }
    const Diagonal& diagonal(int d) const { return diags_[std::size_t(d)]; }
    int site_triangle(int s) const { return site_tri_[std::size_t(s)]; }

    // Diagonal id spanned by two vertices, -1 for a polygon side or non-edge.
    int diagonal_between(int a, int b) const;
    // Triangle sharing side (a,b) with t, -1 if none.
    int across(int t, int a, int b) const;
    bool contains(int t, Point p, double eps = 1e-12) const;
    int locate(Point p) const;

    const std::vector<int>& postorder() const { return post_; }
    const std::vector<int>& preorder() const { return pre_; }
    // Sites below diagonal d, sorted.
    const std::vector<int>& below(int d) const { return below_[std::size_t(d)]; }
    // Sites above diagonal d, sorted.
    std::vector<int> above(int d) const;
    // Triangles of the subtree hanging below d.
    std::vector<int> subtree(int d) const;
    // True if triangle t lies below d.
    bool is_below(int t, int d) const;
    // Diagonal of `from` on the dual path toward `to`; -1 when from == to.
    int toward(int from, int to) const;
    int depth(int t) const { return depth_[std::size_t(t)]; }

    // Degree-1 triangles in index order.
    std::vector<int> leaf_candidates() const;

private:
    Polygon poly_;
    SiteSet sites_;
    std::vector<int> depth_;
    std::vector<TreeTriangle> tris_;
    std::vector<Diagonal> diags_;
    std::vector<int> site_tri_;
    std::vector<int> post_, pre_;
    std::vector<std::vector<int>> below_;
    std::vector<int> tin_, tout_;
    int root_ = -1;
};

// Geodesic distance from site to polygon vertex, supplied by the caller.
using SiteVertexDistance = std::function<double(int site, int vertex)>;

struct GeneralPositionReport {
    bool ok = true;
    int vertex = -1;
    int site_a = -1, site_b = -1;
};

GeneralPositionReport check_vertex_ties(const Polygon& poly, const SiteSet& sites, const SiteVertexDistance& dist_fn,
                                        double eps = kTol.eps_distance);

// Either returns the sites unchanged, a jittered copy that passes the checks, or throws a
// degenerate-configuration error. The check callback is rerun on every perturbed set.
SiteSet enforce_general_position(const Polygon& poly, const SiteSet& sites, std::optional<double> jitter, std::uint64_t seed,
                                 const std::function<bool(const SiteSet&)>& passes);

}  // namespace gvd
