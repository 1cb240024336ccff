#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gvd/local_diagram.hpp"
#include "gvd/sweep.hpp"

namespace gvd {

struct BuildOptions {
    bool strict = true;
    bool keep_fragments = false;  // per-triangle diagrams of both subdivisions
    std::function<void(const std::string&)> trace;
};

struct OpTally {
    long calls = 0;
    OpCounters counters;
};

struct CounterLedger {
    long K = 0, A = 0, I = 0;
    std::map<std::string, OpTally> ops;
    void add(const std::string& op, const OpCounters& c);
};

struct BuildDiagnostics {
    long check_failures = 0;
    long near_ties = 0;
    long search_mismatches = 0;
    long insert_mismatches = 0;
    long merge_curve_mismatches = 0;
    long potential_created = 0, potential_processed = 0, potential_stale = 0;
    long split_ops = 0, divide_ops = 0, search_probes = 0;
    long degree_anomalies = 0;  // diagram nodes whose arc count does not match their kind
};

enum class VertexKind { Degree3, Degree1, Breakpoint };

struct GvdVertex {
    Point position;
    VertexKind kind = VertexKind::Degree3;
    int degree = 0;          // incident arcs
    std::vector<int> sites;  // equidistant sites
};

struct GvdEdge {
    int site_a = -1, site_b = -1;
    int v0 = -1, v1 = -1;   // structural vertices, -1 for a closed curve
    std::vector<int> arcs;  // into Gvd::arcs, in order
};

struct Gvd {
    std::vector<LocalDiagram> triangles;  // final diagram restricted to each triangle
    std::vector<DiagramArc> arcs;
    std::vector<DiagramArc> spm_arcs;
    std::vector<GvdVertex> vertices;
    std::vector<GvdEdge> edges;
    int components = 0;  // of the edge network
    int cycles = 0;      // independent cycles of the edge network
    std::vector<LocalDiagram> sd, sd_prime;  // when BuildOptions::keep_fragments
    std::vector<BorderVertex> borders;
    CounterLedger counters;
    BuildDiagnostics diagnostics;

    struct Location {
        int site = -1;
        AnchorRecord anchor;
        double distance = 0;
        int tri = -1;
    };
    Location locate(const PartitionTree& tree, Point x) const;
    int count(VertexKind k) const;
};

Gvd build_gvd(const PartitionTree& tree, const GeodesicEngine& eng, const BuildOptions& opt = {});

// Normalized input, partition tree and geodesic engine for one instance.
struct Prepared {
    PreparedInput input;
    PartitionTree tree;
    std::unique_ptr<GeodesicEngine> engine;
    bool jittered = false;
};

std::unique_ptr<Prepared> prepare(const std::vector<Point>& polygon, const std::vector<Point>& sites,
                                  std::optional<double> jitter = {}, std::uint64_t seed = 0);

}  // namespace gvd
