#pragma once

#include <array>
#include <list>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "gvd/geodesic.hpp"

namespace gvd {

// Polyline along one or two triangle sides, parameterized by arc length.
struct Chain {
    std::vector<int> verts;
    std::vector<Point> pts;

    static Chain of(const Polygon& poly, std::vector<int> verts);
    bool empty() const { return verts.size() < 2; }
    int segments() const { return empty() ? 0 : int(pts.size()) - 1; }
    Segment segment(int i) const { return {pts[std::size_t(i)], pts[std::size_t(i + 1)]}; }
    double start_of(int i) const;
    double length() const { return start_of(segments()); }
    Point at(double s) const;
    double project(Point p) const;
    int segment_at(double s) const;
    Chain reversed() const;
    bool same_as(const Chain& o) const { return verts == o.verts; }

    struct Hit {
        double s;  // chain parameter
        double t;  // curve (or ray) parameter
    };
    std::vector<Hit> curve_hits(const BisectorCurve& c) const;
    std::vector<Hit> ray_hits(Point origin, Point dir) const;
};

struct Wavelet {
    int uid = -1;
    int site = -1;
    std::list<AnchorRecord> anchors;  // ordered along the incomplete boundary
    int right_edge = -1;              // Voronoi edge to the next wavelet
};

struct IncompleteEdge {
    int id = -1;
    int left_site = -1, right_site = -1;
    int left_uid = -1, right_uid = -1;
    bool has_fixed_vertex = false;
    Point fixed_vertex;
    Point last;     // materialized up to here
    Point heading;  // travel direction at `last`, into the unswept area
    std::vector<TracedArc> arcs;
    std::vector<Point> breakpoints;
};

// One anchor's interval on the wavefront's chain.
struct Piece {
    int site = -1;
    AnchorRecord anchor;
    double s0 = 0, s1 = 0;
    int wavelet_uid = -1;
};

int fresh_id();

// Counter registry shared by all operations of one build.
struct SweepStats {
    long potential_created = 0;
    long potential_processed = 0;
    long potential_stale = 0;
    long breakpoints = 0;
    long anchors_inserted = 0;
    long anchors_deleted = 0;
    // counters of the operation in progress
    long K = 0, A = 0, I = 0;
};

class Wavefront {
public:
    using Node = std::list<Wavelet>::iterator;
    using CNode = std::list<Wavelet>::const_iterator;

    int id = -1;
    Chain eta;
    int home_tri = -1;  // triangle on the swept side of eta
    std::list<Wavelet> wavelets;
    std::map<int, IncompleteEdge> edges;
    int front_polygonal = -1, back_polygonal = -1;

    Wavefront();
    Wavefront(const Wavefront& o);
    Wavefront& operator=(const Wavefront& o);
    Wavefront(Wavefront&&) = default;
    Wavefront& operator=(Wavefront&&) = default;

    bool empty() const { return wavelets.empty(); }
    int size() const { return int(wavelets.size()); }
    Node find(int uid);
    CNode find(int uid) const;
    std::vector<int> wavelets_of(int site) const;

    // Inserts before pos and returns the new node; edges are left to the caller.
    Node insert_wavelet_at(Node pos, Wavelet w);
    void delete_wavelet(Node n);

    // Repairs the index, edge endpoints and right_edge links after structural edits.
    // Seams without an edge get a fresh one positioned at `seam_points` order (caller fills geometry).
    void relink();
    int left_edge(CNode n) const;
    int right_edge(CNode n) const { return n->right_edge; }

    // Reverses the orientation along the chain.
    void reverse();

private:
    std::unordered_map<int, Node> index_;
    std::unordered_multimap<int, int> site_index_;
};

// Splits between `at` and its predecessor; the seam edge is dropped.
std::pair<Wavefront, Wavefront> split_at(const Wavefront& wf, int uid_at);
// Appends b to a; a new seam edge with the given geometry joins them when both are nonempty.
Wavefront concat(Wavefront a, Wavefront b, std::optional<IncompleteEdge> seam);

void insert_anchor_front(Wavelet& w, const AnchorRecord& a, SweepStats* st = nullptr);
void insert_anchor_back(Wavelet& w, const AnchorRecord& a, SweepStats* st = nullptr);
void insert_anchor_after(Wavelet& w, std::list<AnchorRecord>::iterator pos, const AnchorRecord& a, SweepStats* st = nullptr);
void delete_anchor(Wavelet& w, std::list<AnchorRecord>::iterator pos, SweepStats* st = nullptr);

// Anchor intervals on eta, derived from neighboring anchors (edges assumed updated to eta).
std::vector<Piece> wavefront_pieces(const Wavefront& wf);

// Sources the wavefront induces beyond one segment of its chain.
std::vector<ConeSource> sources_through(const Wavefront& wf, int segment);
// Same from explicit pieces.
std::vector<ConeSource> sources_through(const Chain& eta, const std::vector<Piece>& pieces, int segment);

// Envelope of sources along a chain as pieces.
std::vector<Piece> envelope_pieces(const std::vector<ConeSource>& sources, const Chain& eta);

// Compares two piece lists ignoring pieces shorter than tol; returns a reason on mismatch.
std::optional<std::string> compare_pieces(const std::vector<Piece>& got, const std::vector<Piece>& want, double tol = 1e-7);

// SPM boundary between two consecutive anchors of one site: ray origin and direction.
std::optional<std::pair<Point, Point>> spm_boundary(const AnchorRecord& a, const AnchorRecord& b);
bool is_parent(const AnchorRecord& parent, const AnchorRecord& child);

struct EdgeTarget {
    std::optional<Point> point;
    const Chain* chain = nullptr;
};

// Materializes the edge from its frontier up to the target, consuming anchors it passes.
// Returns the number of breakpoints emitted; no-op when the target is behind.
int update_incomplete_edge(Wavefront& wf, int edge_id, const EdgeTarget& target, SweepStats& st);
void update_all_edges(Wavefront& wf, SweepStats& st);

// Initial heading for an edge starting at x on eta: along the bisector into the side away from home.
Point heading_into_unswept(const PartitionTree& tree, const Wavefront& wf, const AnchorRecord& a, const AnchorRecord& b, Point x);

struct PotentialVertex {
    int degree = 1;
    std::array<int, 3> sites{-1, -1, -1};
    Point position;
    double key = 0;
    int edge_a = -1, edge_b = -1;
    int tri = -1, entry = -1;
};

class EventQueues {
public:
    void push(const PotentialVertex& pv);
    // Minimum-key live event of (tri, entry) for wf; stale entries are discarded.
    std::optional<PotentialVertex> pop_valid(int tri, int entry, const Wavefront& wf, SweepStats* st = nullptr);
    std::size_t pending(int tri, int entry) const;
    static bool is_valid(const PotentialVertex& pv, const Wavefront& wf);

private:
    struct Later {
        bool operator()(const PotentialVertex& a, const PotentialVertex& b) const;
    };
    std::map<std::pair<int, int>, std::priority_queue<PotentialVertex, std::vector<PotentialVertex>, Later>> q_;
};

double diagonal_key(const PartitionTree& tree, int entry_diag, Point p);

// Candidates for a fresh edge: its degree-1 endpoint and degree-3 meetings with both neighbors.
int generate_potential_vertices(const GeodesicEngine& eng, const Wavefront& wf, int edge_id, EventQueues& queues, SweepStats& st);

}  // namespace gvd
