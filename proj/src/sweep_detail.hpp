#pragma once

#include <vector>

#include "gvd/sweep.hpp"

namespace gvd::detail {

struct Run {
    int side = 0;  // 0: first wavefront, 1: second
    double lo = 0, hi = 0;
};

bool has_bisector(const AnchorRecord& a, const AnchorRecord& b);
double weighted_value(const AnchorRecord& a, Point x);

// Where each of the two wavefronts is closer along the chain, as maximal runs.
std::vector<Run> alternation(const Chain& eta, const std::vector<Piece>& a, const std::vector<Piece>& b);

// Builds the wavefront made of the active parts; seam edges are appended to new_edges.
Wavefront splice_runs(SweepContext& ctx, const Wavefront& a, const std::vector<Piece>& pa, const Wavefront& b,
                      const std::vector<Piece>& pb, const std::vector<Run>& runs, int home_tri, std::vector<int>& new_edges);

Wavefront single_site_wavefront(const PartitionTree& tree, const Chain& eta, int site, int home_tri);

struct WaveletSpan {
    int uid = -1;
    int site = -1;
    double lo = 0, hi = 0;
    std::size_t first = 0, last = 0;  // piece index range [first, last]
};
std::vector<WaveletSpan> wavelet_spans(const std::vector<Piece>& pieces);

}  // namespace gvd::detail
