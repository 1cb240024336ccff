#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gvd/wavefront.hpp"

namespace gvd {

struct OpCounters {
    long K = 0;  // potential vertices processed + created
    long A = 0;  // anchors visited
    long I = 0;  // diagram vertices created
};

struct BorderVertex {
    int diag = -1;
    Point position;
};

struct MergeCurve {
    int tri = -1;
    std::vector<TracedArc> arcs;
    Point start, stop;
    TraceStop how = TraceStop::Stalled;
};

struct SweepContext {
    SweepContext(const PartitionTree& t, const GeodesicEngine& e) : tree(t), eng(e) {}

    const PartitionTree& tree;
    const GeodesicEngine& eng;
    EventQueues queues;
    SweepStats stats;
    bool strict = true;  // throw on a failed cross-check instead of counting it
    std::function<void(const std::string&)> trace;

    long split_ops = 0, divide_ops = 0, search_probes = 0;
    long check_failures = 0;
    long near_ties = 0;  // piece lists differed only where distances agree
    long search_mismatches = 0;  // located starting endpoints vs direct alternation
    long insert_mismatches = 0;  // projection walk vs direct alternation
    long merge_curve_mismatches = 0;
    std::vector<Point> fixed_deg3, fixed_deg1;
    std::vector<BorderVertex> borders;
    std::vector<MergeCurve> merge_curves;

    void log(const std::string& s) const {
        if (trace) trace(s);
    }
};

class OpScope {
public:
    explicit OpScope(SweepContext& ctx) : ctx_(ctx), k_(ctx.stats.K), a_(ctx.stats.A), i_(ctx.stats.I) {}
    OpCounters delta() const { return {ctx_.stats.K - k_, ctx_.stats.A - a_, ctx_.stats.I - i_}; }

private:
    SweepContext& ctx_;
    long k_, a_, i_;
};

Wavefront empty_wavefront(const PartitionTree& tree, std::vector<int> chain, int home_tri);

// Compares the wavefront's intervals with the envelope of reference sources on its chain.
// Writes the chain and anchors to the trace callback.
void describe(const SweepContext& ctx, const Wavefront& wf);

void check_against(SweepContext& ctx, const Wavefront& wf, const std::vector<ConeSource>& reference, const std::string& what);

// Inserts reflex chain endpoints as first/last anchors when they are not anchors yet.
void ensure_endpoint_anchors(SweepContext& ctx, Wavefront& wf, bool front, bool back);

// Wavefront of the triangle's own sites over the chain; anchors at the requested ends.
Wavefront op_initiate(SweepContext& ctx, int tri, std::vector<int> chain, bool anchor_front, bool anchor_back);

// Sweeps a wavefront over one diagonal of tri across tri. The result lies on the diagonal
// sides opposite the entry; it is empty when both are polygon sides.
Wavefront op_extend(SweepContext& ctx, Wavefront wf, int tri);

struct SearchHit {
    int t_uid = -1;
    AnchorRecord anchor;
    double x = 0;  // chain parameter
};

// Locates the starting endpoint induced by wavelet s_uid of wq in wqp, at or after `from`.
std::optional<SearchHit> two_level_search(SweepContext& ctx, const Wavefront& wq, const std::vector<Piece>& pq, int s_uid,
                                          const Wavefront& wqp, const std::vector<Piece>& pqp, double from);

struct MergeInput {
    int tri = -1;
    std::vector<int> tested_sites;       // sites of tri with a wavelet in wq
    std::vector<ConeSource> q_sources;   // wq's sites in tri
    std::vector<ConeSource> qp_sources;  // wqp's sites in tri
    bool trace_curves = true;
};

// Merges two wavefronts over the same chain and traces the merge curves inside tri.
Wavefront op_merge(SweepContext& ctx, Wavefront wq, Wavefront wqp, const MergeInput& in);

// Joins a lower and an upper wavefront over one diagonal, recording the border on it.
// The chain must start at the vertex shared with the other lower diagonal.
Wavefront op_join(SweepContext& ctx, Wavefront lower, Wavefront upper, const MergeInput& in);

std::pair<Wavefront, Wavefront> op_split(SweepContext& ctx, Wavefront wf);
std::pair<Wavefront, Wavefront> op_divide(SweepContext& ctx, Wavefront wf, bool traverse_first);

// Inserts the triangle's sites into a wavefront over one side of tri.
Wavefront op_insert(SweepContext& ctx, Wavefront wf, int tri, const std::vector<int>& sites);

// Sweeps the wavefront through every triangle below diag. on_enter sees each wavefront before
// it is extended into the triangle.
void op_propagate(SweepContext& ctx, Wavefront wf, int diag, const std::function<void(int, const Wavefront&)>& on_enter);

}  // namespace gvd
