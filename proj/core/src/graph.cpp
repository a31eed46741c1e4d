#include "g3ad/graph.hpp"

#include <algorithm>
#include <cmath>

#include "g3ad/errors.hpp"

namespace g3ad {

Graph Graph::build(Matrix attributes, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    g.n_ = attributes.rows();
    g.d_ = attributes.cols();
    if (!attributes.all_finite()) throw FormatError("graph attributes contain non-finite values");
    g.attributes_ = std::move(attributes);
    g.adjacency_ = Matrix(g.n_, g.n_);
    g.neighbors_.assign(g.n_, {});
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= g.n_ || v >= g.n_)
            throw FormatError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for n=" +
                              std::to_string(g.n_));
        if (u == v) throw FormatError("self-loop at node " + std::to_string(u));
        g.adjacency_(u, v) = 1.0;
        g.adjacency_(v, u) = 1.0;
    }
    for (int i = 0; i < g.n_; ++i)
        for (int j = 0; j < g.n_; ++j)
            if (g.adjacency_(i, j) != 0.0) g.neighbors_[i].push_back(j);
    return g;
}

long Graph::edge_count() const {
    long deg_sum = 0;
    for (const auto& nb : neighbors_) deg_sum += static_cast<long>(nb.size());
    return deg_sum / 2;
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n_; ++u)
        for (int v : neighbors_[u])
            if (u < v) edges.emplace_back(u, v);
    return edges;
}

Matrix normalized_adjacency(const Graph& g) {
    const int n = g.n();
    Matrix out(n, n);
    std::vector<double> inv_sqrt_deg(n);
    for (int i = 0; i < n; ++i) inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)) + 1.0);
    for (int i = 0; i < n; ++i) {
        out(i, i) = inv_sqrt_deg[i] * inv_sqrt_deg[i];
        for (int j : g.neighbors(i)) out(i, j) = inv_sqrt_deg[i] * inv_sqrt_deg[j];
    }
    return out;
}

int AnomalyGroundTruth::positives() const {
    int k = 0;
    for (int y : labels) k += y;
    return k;
}

void AnomalyGroundTruth::validate() const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0 && labels[i] != 1)
            throw FormatError("label at node " + std::to_string(i) + " is not 0/1");
    for (const auto& rec : provenance) {
        if (rec.node < 0 || rec.node >= static_cast<int>(labels.size()) || labels[rec.node] != 1)
            throw FormatError("provenance entry references node " + std::to_string(rec.node) +
                              " which is not a labeled anomaly");
    }
}

}  // namespace g3ad
