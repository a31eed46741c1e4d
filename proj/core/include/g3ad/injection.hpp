#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "g3ad/graph.hpp"
#include "g3ad/rng.hpp"

namespace g3ad {

struct InjectionConfig {
    int clique_size = 15;        // p
    int num_cliques = 5;         // q
    int attr_candidates = 50;    // k
    int num_attr_anomalies = -1; // -1: match the topological count p*q
    std::uint64_t seed = 0;

    int resolved_attr_anomalies() const {
        return num_attr_anomalies < 0 ? clique_size * num_cliques : num_attr_anomalies;
    }
};

/// Plants q fully connected cliques of p nodes each, sampled without
/// replacement across all cliques. Existing edges are kept. Returns the
/// perturbed graph and the p*q clique members.
std::pair<Graph, std::vector<int>> inject_topological(const Graph& g, int clique_size, int num_cliques, Rng& rng);

/// For each of `count` target nodes (disjoint from `excluded` and from each
/// other), samples `candidates` other nodes and copies the attribute row of
/// the candidate at largest Euclidean distance onto the target.
struct AttributeSwap {
    int target;
    int donor;
    double distance;
};
std::pair<Graph, std::vector<AttributeSwap>> inject_attributed(const Graph& g, int count, int candidates, Rng& rng,
                                                               const std::vector<int>& excluded = {});

struct InjectionResult {
    Graph graph;
    AnomalyGroundTruth truth;
};

/// Full protocol: topological cliques first, then attribute swaps on
/// targets disjoint from the clique members. Labels and provenance cover
/// both classes.
InjectionResult inject_anomalies(const Graph& g, const InjectionConfig& cfg);

struct SynthParams {
    double intra_inter_ratio = 20.0;  // p_in / p_out
    double cluster_mean_sigma = 1.0;  // spread of per-cluster attribute means
    double noise_sigma = 0.3;         // per-node attribute noise
};

/// Planted-partition base graph: contiguous equal-size clusters, intra-
/// cluster edges much more likely than inter-cluster ones, Gaussian
/// attributes around a per-cluster mean. Deterministic given the rng seed.
Graph synth_base_graph(int n, int d, double avg_degree, int num_clusters, Rng& rng, const SynthParams& params = {});

/// JSON sidecar listing each anomaly's type and injection parameters.
void write_provenance_json(const AnomalyGroundTruth& truth, const InjectionConfig& cfg, const std::string& path);

}  // namespace g3ad
