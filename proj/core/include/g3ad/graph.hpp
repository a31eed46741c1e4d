#pragma once

#include <string>
#include <utility>
#include <vector>

#include "g3ad/matrix.hpp"

namespace g3ad {

/// Immutable attributed graph: symmetric binary adjacency with zero
/// diagonal plus a dense real attribute matrix. Safe to share across
/// threads once built.
class Graph {
public:
    Graph() = default;

    /// Builds from an undirected edge list; duplicates collapse, self-loops
    /// are rejected here (callers filter them first).
    static Graph build(Matrix attributes, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    int d() const { return d_; }
    const Matrix& adjacency() const { return adjacency_; }
    const Matrix& attributes() const { return attributes_; }
    const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
    const std::vector<std::vector<int>>& neighbor_lists() const { return neighbors_; }

    bool has_edge(int u, int v) const { return adjacency_(u, v) != 0.0; }
    int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }
    long edge_count() const;  // undirected edges

    std::vector<std::pair<int, int>> edge_list() const;  // u < v, sorted

private:
    int n_ = 0;
    int d_ = 0;
    Matrix adjacency_;
    Matrix attributes_;
    std::vector<std::vector<int>> neighbors_;
};

/// D^(-1/2) (A + I) D^(-1/2) with D the degree matrix of A + I.
/// Symmetric; an isolated node's row is all zeros except 1 on the diagonal.
Matrix normalized_adjacency(const Graph& g);

enum class AnomalyKind { Topological, Attributed };

struct AnomalyRecord {
    int node = -1;
    AnomalyKind kind = AnomalyKind::Topological;
    int clique_index = -1;   // topological: which planted clique
    int clique_size = -1;    // topological: p
    int donor = -1;          // attributed: node whose attributes were copied
    int candidates = -1;     // attributed: k
    double distance = 0.0;   // attributed: Euclidean distance to the donor
};

/// Binary node labels plus, for injected datasets, the record of how each
/// anomaly was planted. Evaluation-only; never visible to training.
struct AnomalyGroundTruth {
    std::vector<int> labels;
    std::vector<AnomalyRecord> provenance;

    int positives() const;
    void validate() const;  // labels 0/1, provenance nodes labeled 1
};

}  // namespace g3ad
