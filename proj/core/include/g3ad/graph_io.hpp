#pragma once

#include <string>

#include "g3ad/graph.hpp"

namespace g3ad {

struct LoadReport {
    int dropped_self_loops = 0;
    int duplicate_edges = 0;
};

/// Edge file: one "u<TAB>v" pair per line, 0-based, '#' comments and blank
/// lines ignored. Attribute file: headerless CSV of reals, row i = node i.
/// Edges are symmetrized and deduplicated; self-loop lines are dropped and
/// counted in the report.
Graph load_graph(const std::string& edge_path, const std::string& attr_path, LoadReport* report = nullptr);

void save_graph(const Graph& g, const std::string& edge_path, const std::string& attr_path);

/// One 0/1 integer per line, exactly n lines. Provenance left empty.
AnomalyGroundTruth load_labels(const std::string& path, int n);

void save_labels(const AnomalyGroundTruth& truth, const std::string& path);

}  // namespace g3ad
