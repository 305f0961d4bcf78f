#include <benchmark/benchmark.h>

#include "zsl/aste.hpp"
#include "zsl/baselines.hpp"
#include "zsl/evaluation.hpp"
#include "zsl/fast_training.hpp"
#include "zsl/spass.hpp"
#include "zsl/synth.hpp"

namespace {

using namespace zsl;

SynthResult make_data(int k_seen, int per_class) {
    SynthConfig cfg;
    cfg.seed = 11;
    cfg.k_seen = k_seen;
    cfg.l_unseen = 5;
    cfg.per_class = per_class;
    cfg.p = 64;
    cfg.q = 32;
    cfg.noise_sigma = 0.3;
    cfg.shift_sigma = 0.5;
    return synth_generate(cfg);
}

void BM_SeenInstanceGradient(benchmark::State& state) {
    const SynthResult data = make_data(20, 2);
    const Matrix V = Matrix::Random(data.seen.dim(), data.A_s.dim());
    const Vector x = data.seen.features.row(0);
    const Vector y = one_hot(data.seen.labels[0], data.seen.num_classes);
    for (auto _ : state) {
        Matrix g = seen_instance_gradient(x, y, V, data.A_s.vectors, 0.1, data.seen.n());
        benchmark::DoNotOptimize(g.data());
    }
}
BENCHMARK(BM_SeenInstanceGradient);

void BM_SeenObjective(benchmark::State& state) {
    const SynthResult data = make_data(20, static_cast<int>(state.range(0)));
    const Matrix V = Matrix::Random(data.seen.dim(), data.A_s.dim());
    for (auto _ : state) {
        double obj = seen_objective(data.seen, data.A_s, V, 0.1);
        benchmark::DoNotOptimize(obj);
    }
    state.SetItemsProcessed(state.iterations() * data.seen.n());
}
BENCHMARK(BM_SeenObjective)->Arg(50)->Arg(500);

void BM_TrainAste(benchmark::State& state) {
    const SynthResult data = make_data(10, static_cast<int>(state.range(0)));
    TrainConfig cfg;
    cfg.eta_schedule = {0.01, 0.005};
    cfg.epochs_per_eta = 5;
    cfg.max_outer_iters = 3;
    for (auto _ : state) {
        AsteResult result = train_aste(data.seen, data.A_s, cfg, std::nullopt);
        benchmark::DoNotOptimize(result.model.V.data());
    }
}
BENCHMARK(BM_TrainAste)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TrainEszsl(benchmark::State& state) {
    const SynthResult data = make_data(20, static_cast<int>(state.range(0)));
    const RidgeConfig ridge;
    for (auto _ : state) {
        CompatibilityModel model = train_eszsl(data.seen, data.A_s, ridge);
        benchmark::DoNotOptimize(model.V.data());
    }
    state.SetItemsProcessed(state.iterations() * data.seen.n());
}
BENCHMARK(BM_TrainEszsl)->Arg(50)->Arg(2500)->Unit(benchmark::kMillisecond);

void BM_ClassVisualPatterns(benchmark::State& state) {
    const SynthResult data = make_data(20, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CondensedDataset condensed = class_visual_patterns(data.seen);
        benchmark::DoNotOptimize(condensed.data.features.data());
    }
    state.SetItemsProcessed(state.iterations() * data.seen.n());
}
BENCHMARK(BM_ClassVisualPatterns)->Arg(500)->Arg(2500);

void BM_PredictLabels(benchmark::State& state) {
    const SynthResult data = make_data(20, 500);
    CompatibilityModel model;
    model.V = Matrix::Random(data.unseen.dim(), data.A_t.dim());
    for (auto _ : state) {
        std::vector<int> labels = predict_labels(model, data.unseen, data.A_t);
        benchmark::DoNotOptimize(labels.data());
    }
    state.SetItemsProcessed(state.iterations() * data.unseen.n());
}
BENCHMARK(BM_PredictLabels);

void BM_SpassSelect(benchmark::State& state) {
    Vector losses(state.range(0));
    for (Eigen::Index i = 0; i < losses.size(); ++i)
        losses(i) = static_cast<double>((i * 2654435761u) % 1000) / 1000.0;
    for (auto _ : state) {
        std::vector<std::uint8_t> u = select(losses, 0.5, false);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() * losses.size());
}
BENCHMARK(BM_SpassSelect)->Arg(1000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
