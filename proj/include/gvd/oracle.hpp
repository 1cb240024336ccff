#pragma once

#include <cmath>
#include <vector>

#include "gvd/geometry.hpp"

namespace gvd {

// Brute-force geodesic ground truth via Dijkstra over the visibility graph of
// reflex vertices, sites and query points. Only uses geometry predicates.
class GeodesicOracle {
public:
    GeodesicOracle(std::vector<Point> polygon_ccw, std::vector<Point> sites);

    bool inside(Point p) const;  // closed polygon
    bool visible(Point a, Point b) const;

    double distance(Point p, Point q) const;
    // Shortest path p -> q as a point sequence.
    std::vector<Point> path(Point p, Point q) const;

    // Geodesic distance from a site to x, and the last vertex before x on that path.
    double site_distance(int site, Point x, Point* anchor = nullptr) const;
    struct Nearest {
        int site = -1;
        double distance = 0;
    };
    Nearest nearest_site(Point x) const;

    int site_count() const { return int(sites_.size()); }

private:
    struct Tree {
        std::vector<double> dist;  // per reflex vertex
        std::vector<int> pred;     // reflex index, -1 = source
    };
    Tree shortest_tree(Point src) const;
    // Returns inf without an anchor once every path is known to exceed cutoff.
    double query(const Tree& t, Point src, Point x, Point* anchor, double cutoff = INFINITY) const;
    bool sees_reflex(std::size_t i, Point x) const;

    std::vector<Point> poly_;
    std::vector<Point> sites_;
    std::vector<int> reflex_;  // vertex ids
    std::vector<std::vector<double>> reflex_edges_;
    std::vector<Tree> site_trees_;
    // reflex visibility from the most recent query point, shared by all sites
    // (-1 unknown). Makes the oracle unsafe to share across threads.
    mutable Point memo_point_{INFINITY, INFINITY};
    mutable std::vector<signed char> memo_visible_;
};

}  // namespace gvd
