#pragma once

#include <vector>

#include "gvd/geodesic.hpp"

namespace gvd {

// Piece of a bisector (different sites) or of an SPM edge (same site) inside one triangle.
struct DiagramArc {
    int tri = -1;
    AnchorRecord a, b;
    bool spm = false;
    // Voronoi arcs: curve parameters of the bisector of a and b. SPM arcs: distances along the ray.
    double t0 = 0, t1 = 0;
    Point p0, p1;

    Point at(double t) const;
    std::vector<Point> polyline(double tol) const;
};

// Diagram of labeled cone sources restricted to one triangle.
struct LocalDiagram {
    int tri = -1;
    std::vector<ConeSource> sources;   // one per subcell piece: sources that are nearest somewhere
    std::vector<DiagramArc> arcs;      // Voronoi arcs
    std::vector<DiagramArc> spm_arcs;  // subcell boundaries inside a cell

    double value(Point x, int* which = nullptr) const { return evaluate(sources, x, which); }
};

LocalDiagram build_local_diagram(const PartitionTree& tree, int tri, std::vector<ConeSource> sources);

}  // namespace gvd
