#include "g3ad/injection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

double row_distance(const Matrix& attrs, int a, int b) {
    double s = 0;
    for (int j = 0; j < attrs.cols(); ++j) {
        const double diff = attrs(a, j) - attrs(b, j);
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace

std::pair<Graph, std::vector<int>> inject_topological(const Graph& g, int clique_size, int num_cliques, Rng& rng) {
    if (clique_size < 2) throw ConfigError("inject_topological: clique size must be >= 2");
    if (num_cliques < 0) throw ConfigError("inject_topological: number of cliques must be >= 0");
    const long wanted = static_cast<long>(clique_size) * num_cliques;
    if (wanted > g.n())
        throw ConfigError("inject_topological: " + std::to_string(wanted) + " clique members exceed " +
                          std::to_string(g.n()) + " nodes");
    if (num_cliques == 0) return {g, {}};

    const std::vector<int> members = rng.sample_without_replacement(g.n(), static_cast<int>(wanted));
    auto edges = g.edge_list();
    for (int c = 0; c < num_cliques; ++c) {
        const int* clique = members.data() + static_cast<size_t>(c) * clique_size;
        for (int i = 0; i < clique_size; ++i)
            for (int j = i + 1; j < clique_size; ++j)
                if (!g.has_edge(clique[i], clique[j]))
                    edges.emplace_back(std::min(clique[i], clique[j]), std::max(clique[i], clique[j]));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {Graph::build(g.attributes(), edges), members};
}

std::pair<Graph, std::vector<AttributeSwap>> inject_attributed(const Graph& g, int count, int candidates, Rng& rng,
                                                               const std::vector<int>& excluded) {
    if (count < 0) throw ConfigError("inject_attributed: count must be >= 0");
    if (candidates < 1) throw ConfigError("inject_attributed: candidate set must be non-empty");
    if (candidates > g.n() - 1)
        throw ConfigError("inject_attributed: " + std::to_string(candidates) + " candidates exceed " +
                          std::to_string(g.n() - 1) + " other nodes");
    if (count + candidates > g.n())
        throw ConfigError("inject_attributed: count " + std::to_string(count) + " + candidates " +
                          std::to_string(candidates) + " exceed the node population " + std::to_string(g.n()));

    std::vector<char> is_excluded(g.n(), 0);
    for (int v : excluded) is_excluded[v] = 1;
    std::vector<int> eligible;
    for (int v = 0; v < g.n(); ++v)
        if (!is_excluded[v]) eligible.push_back(v);
    if (count > static_cast<int>(eligible.size()))
        throw ConfigError("inject_attributed: only " + std::to_string(eligible.size()) +
                          " eligible targets for count " + std::to_string(count));

    Matrix attrs = g.attributes();
    std::vector<AttributeSwap> swaps;
    swaps.reserve(count);
    const std::vector<int> picks = rng.sample_without_replacement(static_cast<int>(eligible.size()), count);
    for (int pick : picks) {
        const int target = eligible[pick];
        // Sample k candidates from all nodes except the target.
        const std::vector<int> raw = rng.sample_without_replacement(g.n() - 1, candidates);
        int donor = -1;
        double best = -1.0;
        for (int r : raw) {
            const int cand = r >= target ? r + 1 : r;
            const double dist = row_distance(g.attributes(), cand, target);
            if (dist > best) {
                best = dist;
                donor = cand;
            }
        }
        for (int j = 0; j < attrs.cols(); ++j) attrs(target, j) = g.attributes()(donor, j);
        swaps.push_back({target, donor, best});
    }
    return {Graph::build(std::move(attrs), g.edge_list()), swaps};
}

InjectionResult inject_anomalies(const Graph& g, const InjectionConfig& cfg) {
    const int attr_count = cfg.resolved_attr_anomalies();
    const long total = static_cast<long>(cfg.clique_size) * cfg.num_cliques + attr_count;
    if (total >= g.n())
        throw ConfigError("inject_anomalies: " + std::to_string(total) + " anomalies do not leave any normal node");

    Rng rng(cfg.seed);
    auto [with_cliques, clique_members] = inject_topological(g, cfg.clique_size, cfg.num_cliques, rng);
    auto [perturbed, swaps] = inject_attributed(with_cliques, attr_count, cfg.attr_candidates, rng, clique_members);

    InjectionResult result;
    result.graph = std::move(perturbed);
    result.truth.labels.assign(g.n(), 0);
    for (size_t m = 0; m < clique_members.size(); ++m) {
        const int node = clique_members[m];
        result.truth.labels[node] = 1;
        AnomalyRecord rec;
        rec.node = node;
        rec.kind = AnomalyKind::Topological;
        rec.clique_index = static_cast<int>(m) / cfg.clique_size;
        rec.clique_size = cfg.clique_size;
        result.truth.provenance.push_back(rec);
    }
    for (const auto& swap : swaps) {
        result.truth.labels[swap.target] = 1;
        AnomalyRecord rec;
        rec.node = swap.target;
        rec.kind = AnomalyKind::Attributed;
        rec.donor = swap.donor;
        rec.candidates = cfg.attr_candidates;
        rec.distance = swap.distance;
        result.truth.provenance.push_back(rec);
    }
    result.truth.validate();
    return result;
}

Graph synth_base_graph(int n, int d, double avg_degree, int num_clusters, Rng& rng, const SynthParams& params) {
    if (n < 1 || d < 1) throw ConfigError("synth_base_graph: n and d must be >= 1");
    if (num_clusters < 1 || num_clusters > n) throw ConfigError("synth_base_graph: invalid cluster count");
    if (avg_degree < 0 || avg_degree > n - 1) throw ConfigError("synth_base_graph: infeasible average degree");

    // Contiguous clusters; the remainder spills into the last one.
    std::vector<int> cluster(n);
    const int base = n / num_clusters;
    for (int i = 0; i < n; ++i) cluster[i] = std::min(i / std::max(base, 1), num_clusters - 1);
    std::vector<int> cluster_size(num_clusters, 0);
    for (int c : cluster) ++cluster_size[c];

    // Expected degree for a node in an average-size cluster:
    //   p_in * (m - 1) + p_out * (n - m) = avg_degree, with p_in = ratio * p_out.
    const double m = static_cast<double>(n) / num_clusters;
    const double ratio = num_clusters > 1 ? params.intra_inter_ratio : 1.0;
    const double denom = ratio * (m - 1.0) + (n - m);
    double p_out = denom > 0 ? avg_degree / denom : 0.0;
    double p_in = ratio * p_out;
    if (p_in > 1.0) {
        // Saturate intra-cluster edges and put the remaining degree mass on
        // inter-cluster ones; the expected degree stays avg_degree.
        p_in = 1.0;
        p_out = n - m > 0 ? (avg_degree - (m - 1.0)) / (n - m) : 0.0;
        if (p_out < 0.0 || p_out > 1.0)
            throw ConfigError("synth_base_graph: infeasible degree for the cluster layout");
    }

    // Cluster attribute means first, then edges, then node noise: the draw
    // order is part of the format (same seed must mean the same graph).
    Matrix means(num_clusters, d);
    for (int c = 0; c < num_clusters; ++c)
        for (int j = 0; j < d; ++j) means(c, j) = params.cluster_mean_sigma * rng.normal();

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double p = cluster[i] == cluster[j] ? p_in : p_out;
            if (rng.uniform() < p) edges.emplace_back(i, j);
        }

    Matrix attrs(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) attrs(i, j) = means(cluster[i], j) + params.noise_sigma * rng.normal();

    return Graph::build(std::move(attrs), edges);
}

void write_provenance_json(const AnomalyGroundTruth& truth, const InjectionConfig& cfg, const std::string& path) {
    nlohmann::json doc;
    doc["config"] = {{"clique_size", cfg.clique_size},
                     {"num_cliques", cfg.num_cliques},
                     {"attr_candidates", cfg.attr_candidates},
                     {"num_attr_anomalies", cfg.resolved_attr_anomalies()},
                     {"seed", cfg.seed}};
    doc["num_anomalies"] = truth.positives();
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& rec : truth.provenance) {
        nlohmann::json e;
        e["node"] = rec.node;
        if (rec.kind == AnomalyKind::Topological) {
            e["type"] = "topological";
            e["clique_index"] = rec.clique_index;
            e["clique_size"] = rec.clique_size;
        } else {
            e["type"] = "attributed";
            e["donor"] = rec.donor;
            e["candidates"] = rec.candidates;
            e["distance"] = rec.distance;
        }
        entries.push_back(std::move(e));
    }
    doc["anomalies"] = std::move(entries);
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write provenance file " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace g3ad
