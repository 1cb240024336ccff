#pragma once

#include <string>

#include "gvd/builder.hpp"
#include "gvd/generate.hpp"

namespace gvd {

// Instance files: {"polygon": [[x,y],...], "sites": [[x,y],...], "seed": N, "jitter": R}.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);
Instance read_instance(const std::string& path);
void write_instance(const std::string& path, const Instance& inst);

// A diagram as stored on disk. Geometry lives in the normalized frame; `frame` maps it back to
// input coordinates (input = scale * stored + offset).
struct DiagramBundle {
    PreparedInput input;  // normalized polygon and (possibly jittered) sites
    PartitionTree tree;
    Gvd gvd;
    bool jittered = false;
};

struct WriteOptions {
    double flatten_tol = 1e-6;  // polylines stored next to each arc
};

std::string serialize_diagram(const PreparedInput& input, const PartitionTree& tree, const Gvd& g, bool jittered,
                              const WriteOptions& opt = {});
DiagramBundle parse_diagram(const std::string& text);
DiagramBundle read_diagram(const std::string& path);

// Per-triangle diagrams of one subdivision together with the border vertices.
std::string serialize_subdivision(const std::string& name, const PreparedInput& input, const std::vector<LocalDiagram>& parts,
                                  const std::vector<BorderVertex>& borders, const WriteOptions& opt = {});

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace gvd
