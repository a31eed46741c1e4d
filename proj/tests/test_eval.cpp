#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "g3ad/errors.hpp"
#include "g3ad/experiment.hpp"
#include "g3ad/injection.hpp"
#include "g3ad/metrics.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

using namespace g3ad;

TEST_SUITE("eval") {

TEST_CASE("perfect ranking scores auc 1") {
    const std::vector<double> s{0.9, 0.1};
    const std::vector<int> y{1, 0};
    CHECK(roc_auc(s, y) == 1.0);
}

TEST_CASE("all-tied scores give auc one half") {
    const std::vector<double> s{0.4, 0.4, 0.4, 0.4};
    const std::vector<int> y{1, 0, 1, 0};
    CHECK(roc_auc(s, y) == 0.5);
}

TEST_CASE("auc matches the pairwise oracle exactly on random cases") {
    Rng rng(1);
    for (int rep = 0; rep < 300; ++rep) {
        const test_support::MetricCase c = test_support::random_metric_case(rng);
        CHECK(roc_auc(c.scores, c.labels) == test_support::auc_pairwise_oracle(c.scores, c.labels));
    }
}

TEST_CASE("auc rejects single-class labels") {
    const std::vector<double> s{0.1, 0.2};
    CHECK_THROWS_AS(roc_auc(s, std::vector<int>{1, 1}), MetricError);
    CHECK_THROWS_AS(roc_auc(s, std::vector<int>{0, 0}), MetricError);
}

TEST_CASE("ap of a top-ranked positive is 1") {
    CHECK(average_precision(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
}

TEST_CASE("ap of a second-ranked positive is one half") {
    CHECK(average_precision(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}) == 0.5);
}

TEST_CASE("ap matches the ranking-walk oracle on random cases") {
    Rng rng(2);
    for (int rep = 0; rep < 300; ++rep) {
        const test_support::MetricCase c = test_support::random_metric_case(rng);
        CHECK(average_precision(c.scores, c.labels) ==
              doctest::Approx(test_support::ap_walk_oracle(c.scores, c.labels)).epsilon(1e-12));
    }
}

TEST_CASE("ap requires a positive") {
    CHECK_THROWS_AS(average_precision(std::vector<double>{0.5, 0.2}, std::vector<int>{0, 0}), MetricError);
}

TEST_CASE("metrics reject mismatched lengths and bad labels") {
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.5}, std::vector<int>{1, 0}), MetricError);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.5, 0.1}, std::vector<int>{1, 2}), MetricError);
}

TEST_CASE("reversing tie-free scores complements auc") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 3 + rng.uniform_int(30);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (int i = 0; i < n; ++i) {
            s[i] = rng.uniform() + i * 1e-9;  // tie-free
            y[i] = rng.uniform() < 0.4 ? 1 : 0;
        }
        y[0] = 1;
        y[1] = 0;
        std::vector<double> neg(n);
        for (int i = 0; i < n; ++i) neg[i] = -s[i];
        CHECK(roc_auc(s, y) + roc_auc(neg, y) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("metrics are invariant under strictly increasing transforms") {
    Rng rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const test_support::MetricCase c = test_support::random_metric_case(rng, 30);
        std::vector<double> mapped(c.scores.size());
        for (size_t i = 0; i < c.scores.size(); ++i) mapped[i] = std::exp(0.7 * c.scores[i]) + 3.0;
        CHECK(roc_auc(c.scores, c.labels) == roc_auc(mapped, c.labels));
        CHECK(average_precision(c.scores, c.labels) ==
              doctest::Approx(average_precision(mapped, c.labels)).epsilon(1e-12));
    }
}

namespace {

struct Bench {
    Graph graph;
    std::vector<int> labels;
};

Bench small_bench(std::uint64_t seed) {
    Rng rng(seed);
    const Graph base = synth_base_graph(24, 3, 4.0, 2, rng);
    InjectionConfig inj;
    inj.clique_size = 3;
    inj.num_cliques = 1;
    inj.num_attr_anomalies = 3;
    inj.attr_candidates = 5;
    inj.seed = seed + 1;
    InjectionResult res = inject_anomalies(base, inj);
    return {std::move(res.graph), res.truth.labels};
}

G3adConfig bench_config() {
    G3adConfig cfg;
    cfg.embed_dim = 4;
    return cfg;
}

TrainOptions bench_options(int epochs = 5) {
    TrainOptions opts;
    opts.epochs = epochs;
    opts.lr = 5e-3;
    return opts;
}

}  // namespace

TEST_CASE("single-seed protocol reports zero deviation") {
    const Bench b = small_bench(10);
    const ExperimentSummary s = run_protocol(b.graph, b.labels, bench_config(), bench_options(), {7});
    CHECK(s.runs.size() == 1);
    CHECK(s.auc_std == 0.0);
    CHECK(s.ap_std == 0.0);
    CHECK(s.auc_mean == s.runs[0].auc);
}

TEST_CASE("five-seed protocol aggregates the arithmetic mean") {
    const Bench b = small_bench(11);
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const ExperimentSummary s = run_protocol(b.graph, b.labels, bench_config(), bench_options(), seeds);
    REQUIRE(s.runs.size() == 5);
    double auc_sum = 0, ap_sum = 0;
    for (const auto& run : s.runs) {
        auc_sum += run.auc;
        ap_sum += run.ap;
        CHECK(run.auc >= 0.0);
        CHECK(run.auc <= 1.0);
        CHECK(run.ap >= 0.0);
        CHECK(run.ap <= 1.0);
    }
    CHECK(std::fabs(s.auc_mean - auc_sum / 5.0) < 1e-12);
    CHECK(std::fabs(s.ap_mean - ap_sum / 5.0) < 1e-12);
}

TEST_CASE("parallel seed runs reproduce the sequential results") {
    const Bench b = small_bench(12);
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    const ExperimentSummary par = run_protocol(b.graph, b.labels, bench_config(), bench_options(), seeds, 4);
    const ExperimentSummary seq = run_protocol(b.graph, b.labels, bench_config(), bench_options(), seeds, 1);
    for (size_t i = 0; i < seeds.size(); ++i) {
        CHECK(par.runs[i].auc == seq.runs[i].auc);
        CHECK(par.runs[i].ap == seq.runs[i].ap);
    }
}

TEST_CASE("protocol requires seeds and matching labels") {
    const Bench b = small_bench(13);
    CHECK_THROWS_AS(run_protocol(b.graph, b.labels, bench_config(), bench_options(), {}), ConfigError);
    std::vector<int> short_labels(b.labels.begin(), b.labels.end() - 1);
    CHECK_THROWS_AS(run_protocol(b.graph, short_labels, bench_config(), bench_options(), {1}), ConfigError);
}

TEST_CASE("ablation sweep yields the seven-variant table") {
    const Bench b = small_bench(14);
    const auto rows = sweep(b.graph, b.labels, bench_config(), bench_options(3), SweepAxis::Ablation, {1});
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].variant == "full");
    CHECK(rows[1].variant == "wo_ar");
    CHECK(rows[2].variant == "wo_tr");
    CHECK(rows[3].variant == "wo_ca");
    CHECK(rows[4].variant == "wo_ar_ca");
    CHECK(rows[5].variant == "wo_tr_ca");
    CHECK(rows[6].variant == "wo_ar_tr");
}

TEST_CASE("backbone sweep yields four variants") {
    const Bench b = small_bench(15);
    const auto rows = sweep(b.graph, b.labels, bench_config(), bench_options(3), SweepAxis::Backbone, {1});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].variant == "gcn");
    CHECK(rows[1].variant == "gat");
    CHECK(rows[2].variant == "sage");
    CHECK(rows[3].variant == "gin");
}

TEST_CASE("readout sweep yields four variants") {
    const Bench b = small_bench(16);
    const auto rows = sweep(b.graph, b.labels, bench_config(), bench_options(3), SweepAxis::Readout, {1});
    REQUIRE(rows.size() == 4);
    CHECK(rows[3].variant == "attention");
}

TEST_CASE("lambda grid tunes lambda1 first and then lambda2") {
    const Bench b = small_bench(17);
    const auto rows = sweep(b.graph, b.labels, bench_config(), bench_options(2), SweepAxis::LambdaGrid, {1});
    REQUIRE(rows.size() == 11);  // 6 lambda1 points + 5 lambda2 points
    CHECK(rows[0].variant == "lambda1=0.0");
    CHECK(rows[6].variant.find("lambda2=0.0") != std::string::npos);
}

TEST_CASE("unknown sweep axis is rejected") {
    CHECK_THROWS_AS(sweep_axis_from_string(""), ConfigError);
    CHECK_THROWS_AS(sweep_axis_from_string("nope"), ConfigError);
}

TEST_CASE("sweep tables render both formats") {
    const Bench b = small_bench(18);
    const auto rows = sweep(b.graph, b.labels, bench_config(), bench_options(2), SweepAxis::Backbone, {1});
    const std::string md = sweep_markdown(rows);
    CHECK(md.find("| variant | auc | ap |") != std::string::npos);
    CHECK(md.find("| gat |") != std::string::npos);
    const std::string csv = sweep_csv(rows);
    CHECK(csv.find("variant,auc_mean,auc_std,ap_mean,ap_std") != std::string::npos);
}

TEST_CASE("metrics json includes stds only for multi-run summaries") {
    const Bench b = small_bench(19);
    const ExperimentSummary one = run_protocol(b.graph, b.labels, bench_config(), bench_options(2), {1});
    CHECK(metrics_json(one).find("auc_std") == std::string::npos);
    const ExperimentSummary two = run_protocol(b.graph, b.labels, bench_config(), bench_options(2), {1, 2});
    CHECK(metrics_json(two).find("auc_std") != std::string::npos);
    CHECK(runs_csv(two).find("seed,auc,ap,wall_seconds") != std::string::npos);
}

}  // TEST_SUITE
