#include <doctest.h>

#include <set>

#include "g3ad/errors.hpp"
#include "g3ad/injection.hpp"
#include "support/gradcheck.hpp"
#include "support/test_util.hpp"

using namespace g3ad;

TEST_SUITE("injection") {

TEST_CASE("one 3-clique on an empty 5-node graph plants a triangle") {
    const Graph g = Graph::build(Matrix(5, 1), {});
    Rng rng(1);
    const auto [injected, anomalies] = inject_topological(g, 3, 1, rng);
    CHECK(anomalies.size() == 3);
    CHECK(injected.edge_count() == 3);  // C(3,2)
    for (int u : anomalies)
        for (int v : anomalies)
            if (u != v) CHECK(injected.has_edge(u, v));
}

TEST_CASE("zero cliques is a no-op") {
    const Graph g = Graph::build(Matrix(5, 1), {{0, 1}});
    Rng rng(2);
    const auto [injected, anomalies] = inject_topological(g, 3, 0, rng);
    CHECK(anomalies.empty());
    CHECK(injected.adjacency().max_abs_diff(g.adjacency()) == 0.0);
}

TEST_CASE("existing edges survive clique planting") {
    const Graph g = Graph::build(Matrix(6, 1), {{0, 5}, {1, 4}});
    Rng rng(3);
    const auto [injected, anomalies] = inject_topological(g, 4, 1, rng);
    CHECK(injected.has_edge(0, 5));
    CHECK(injected.has_edge(1, 4));
    // every clique pair adjacent
    for (int u : anomalies)
        for (int v : anomalies)
            if (u != v) CHECK(injected.has_edge(u, v));
}

TEST_CASE("clique members never repeat across cliques") {
    const Graph g = Graph::build(Matrix(30, 1), {});
    Rng rng(4);
    const auto [injected, anomalies] = inject_topological(g, 5, 4, rng);
    CHECK(anomalies.size() == 20);
    CHECK(std::set<int>(anomalies.begin(), anomalies.end()).size() == 20);
}

TEST_CASE("infeasible clique demand is rejected") {
    const Graph g = Graph::build(Matrix(5, 1), {});
    Rng rng(5);
    CHECK_THROWS_AS(inject_topological(g, 3, 2, rng), ConfigError);
}

TEST_CASE("attribute swap picks the farthest candidate") {
    Matrix attrs(3, 1);
    attrs(1, 0) = 1.0;
    attrs(2, 0) = 10.0;
    const Graph g = Graph::build(attrs, {});
    Rng rng(6);
    // exclude nodes 1 and 2 so node 0 is the only target; both others are candidates
    const auto [injected, swaps] = inject_attributed(g, 1, 2, rng, {1, 2});
    REQUIRE(swaps.size() == 1);
    CHECK(swaps[0].target == 0);
    CHECK(swaps[0].donor == 2);
    CHECK(swaps[0].distance == doctest::Approx(10.0));
    CHECK(injected.attributes()(0, 0) == 10.0);
}

TEST_CASE("identical attributes everywhere leave the target unchanged") {
    const Graph g = Graph::build(Matrix::filled(6, 2, 3.0), {});
    Rng rng(7);
    const auto [injected, swaps] = inject_attributed(g, 2, 3, rng);
    CHECK(injected.attributes().max_abs_diff(g.attributes()) == 0.0);
    CHECK(swaps.size() == 2);
}

TEST_CASE("swapped rows equal a pre-existing attribute row") {
    Rng seed_rng(8);
    const Graph g = synth_base_graph(40, 4, 4.0, 2, seed_rng);
    Rng rng(9);
    const auto [injected, swaps] = inject_attributed(g, 5, 10, rng);
    for (const auto& swap : swaps) {
        for (int j = 0; j < g.d(); ++j)
            CHECK(injected.attributes()(swap.target, j) == g.attributes()(swap.donor, j));
    }
}

TEST_CASE("candidate plus target demand beyond the population is rejected") {
    const Graph g = Graph::build(Matrix(5, 1), {});
    Rng rng(10);
    CHECK_THROWS_AS(inject_attributed(g, 2, 4, rng), ConfigError);
    CHECK_THROWS_AS(inject_attributed(g, 1, 5, rng), ConfigError);
}

TEST_CASE("combined protocol keeps the two anomaly sets disjoint") {
    Rng seed_rng(11);
    const Graph g = synth_base_graph(60, 3, 4.0, 3, seed_rng);
    InjectionConfig cfg;
    cfg.clique_size = 4;
    cfg.num_cliques = 2;
    cfg.attr_candidates = 10;
    cfg.num_attr_anomalies = 6;
    cfg.seed = 12;
    const InjectionResult result = inject_anomalies(g, cfg);
    CHECK(result.truth.positives() == 4 * 2 + 6);
    CHECK(result.truth.provenance.size() == 14);
    std::set<int> topo, attr;
    for (const auto& rec : result.truth.provenance)
        (rec.kind == AnomalyKind::Topological ? topo : attr).insert(rec.node);
    CHECK(topo.size() == 8);
    CHECK(attr.size() == 6);
    for (int node : attr) CHECK(topo.count(node) == 0);
}

TEST_CASE("attr anomaly count defaults to the topological count") {
    InjectionConfig cfg;
    cfg.clique_size = 3;
    cfg.num_cliques = 2;
    CHECK(cfg.resolved_attr_anomalies() == 6);
}

TEST_CASE("single-cluster synthesis collapses to a flat random graph") {
    Rng rng(13);
    const Graph g = synth_base_graph(50, 3, 6.0, 1, rng);
    CHECK(g.n() == 50);
    CHECK(g.d() == 3);
    CHECK(g.edge_count() > 0);
}

TEST_CASE("expected edge count tracks n * avg_degree / 2") {
    const int n = 120;
    const double avg_degree = 6.0;
    double total = 0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        total += static_cast<double>(synth_base_graph(n, 2, avg_degree, 4, rng).edge_count());
    }
    const double mean_edges = total / 20.0;
    const double expected = n * avg_degree / 2.0;
    CHECK(mean_edges > 0.8 * expected);
    CHECK(mean_edges < 1.2 * expected);
}

TEST_CASE("synthesis is deterministic per seed") {
    Rng a(21), b(21);
    const Graph ga = synth_base_graph(30, 3, 4.0, 3, a);
    const Graph gb = synth_base_graph(30, 3, 4.0, 3, b);
    CHECK(ga.adjacency().max_abs_diff(gb.adjacency()) == 0.0);
    CHECK(ga.attributes().max_abs_diff(gb.attributes()) == 0.0);
}

TEST_CASE("infeasible synthesis degree is rejected") {
    Rng rng(22);
    CHECK_THROWS_AS(synth_base_graph(10, 2, 20.0, 2, rng), ConfigError);  // beyond complete graph
    CHECK_THROWS_AS(synth_base_graph(10, 2, -1.0, 2, rng), ConfigError);
    // a dense demand inside a sparse cluster layout saturates intra edges
    // instead of failing
    const Graph g = synth_base_graph(20, 2, 9.0, 10, rng);
    CHECK(g.edge_count() > 0);
}

TEST_CASE("provenance sidecar lists every anomaly") {
    Rng seed_rng(23);
    const Graph g = synth_base_graph(40, 3, 4.0, 2, seed_rng);
    InjectionConfig cfg;
    cfg.clique_size = 3;
    cfg.num_cliques = 1;
    cfg.num_attr_anomalies = 2;
    cfg.attr_candidates = 5;
    const InjectionResult result = inject_anomalies(g, cfg);
    test_support::TempDir tmp;
    write_provenance_json(result.truth, cfg, tmp.file("prov.json"));
    const std::string text = test_support::read_file(tmp.file("prov.json"));
    CHECK(text.find("\"topological\"") != std::string::npos);
    CHECK(text.find("\"attributed\"") != std::string::npos);
    CHECK(text.find("\"num_anomalies\": 5") != std::string::npos);
}

}  // TEST_SUITE
