#include <benchmark/benchmark.h>

#include "g3ad/experiment.hpp"
#include "g3ad/injection.hpp"
#include "g3ad/metrics.hpp"
#include "g3ad/model.hpp"

using namespace g3ad;

namespace {

Matrix random_values(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1, 1);
    return m;
}

void BM_MatmulForward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(1);
    const Matrix a = random_values(n, n, rng);
    const Matrix b = random_values(n, 64, rng);
    for (auto _ : state) {
        Matrix out = matmul_values(a, b);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n * 64);
}
BENCHMARK(BM_MatmulForward)->Arg(128)->Arg(512);

void BM_MatmulBackward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(2);
    const Tensor a = parameter(random_values(n, n, rng));
    const Tensor b = parameter(random_values(n, 64, rng));
    for (auto _ : state) {
        backward(sum_all(matmul(a, b)));
        benchmark::DoNotOptimize(a->grad.data());
    }
}
BENCHMARK(BM_MatmulBackward)->Arg(128)->Arg(512);

void BM_GatLayerForward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(3);
    const Graph g = synth_base_graph(n, 32, 8.0, 5, rng);
    const GraphTensors gt = GraphTensors::build(g, true);
    const GatLayerParams p = make_gat_layer(32, 64, rng);
    for (auto _ : state) {
        Tensor h = gat_layer(p, gt.x, gt.agg);
        benchmark::DoNotOptimize(h->value.data());
    }
}
BENCHMARK(BM_GatLayerForward)->Arg(200)->Arg(500);

void BM_TrainEpoch(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(4);
    const Graph g = synth_base_graph(n, 32, 8.0, 5, rng);
    const G3adConfig cfg;
    ModelParams params = init_params(g.n(), g.d(), cfg, 5);
    const GraphTensors gt = GraphTensors::build(g, cfg.include_self);
    for (auto _ : state) {
        const ForwardArtifacts art = forward(g, gt, params, cfg, /*with_scores=*/false);
        backward(art.loss_total);
        benchmark::DoNotOptimize(art.losses.total);
    }
}
BENCHMARK(BM_TrainEpoch)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RocAuc(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(6);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        scores[i] = rng.uniform();
        labels[i] = rng.uniform() < 0.1 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    for (auto _ : state) benchmark::DoNotOptimize(roc_auc(scores, labels));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

void BM_NormalizedAdjacency(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(7);
    const Graph g = synth_base_graph(n, 4, 8.0, 5, rng);
    for (auto _ : state) {
        Matrix norm = normalized_adjacency(g);
        benchmark::DoNotOptimize(norm.data());
    }
}
BENCHMARK(BM_NormalizedAdjacency)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
