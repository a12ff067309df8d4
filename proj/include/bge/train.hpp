#pragma once

#include <optional>
#include <vector>

#include "bge/dataset.hpp"
#include "bge/dualgraph.hpp"
#include "bge/encoder.hpp"
#include "bge/heads.hpp"

namespace bge {

struct TrainConfig {
    double lr = 1e-3;
    int epochs = 150;
    int batch = 64;  // 0 = full batch
    double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    double huber_delta = 0.1;
};

// What to build: a bare head on the raw window, or the encoder in front of it.
struct ModelSpec {
    HeadKind head_kind = HeadKind::Linear;
    bool informed = false;
    int hidden = 128;   // MLP head width
    EncoderConfig enc;  // used when informed
};

struct Model {
    bool informed = false;
    Scenario scenario;
    std::vector<ChannelStats> stats;
    DualGraph graph;      // empty when raw
    GraphRuntime rt;      // derived from graph when informed
    EncoderState enc;     // when informed
    HeadState head;
    size_t params() const;
};

// Prediction for one raw (unstandardized) window sample, channels x k_out in
// original units.
Mat predict(const Model& m, const Mat& sample, Exec exec);

struct TrainResult {
    Model model;
    std::vector<double> train_loss, val_loss;
    double best_val = 0.0;
    int best_epoch = -1;
};

// Minimizes Huber loss on the train split with Adam; keeps the parameter
// snapshot with the best validation loss. Deterministic per seed (and per
// thread count when exec == Parallel). Throws Error("diverged") on a
// non-finite loss.
TrainResult train_model(const ForecastDataset& ds, const Scenario& sc, const ModelSpec& spec,
                        const DualGraph* graph, const TrainConfig& cfg, uint64_t seed,
                        Exec exec);

struct Metrics {
    double mae = 0.0, mse = 0.0, sdtw = 0.0;
};

// Test-split metrics in original units; SDTW is the gamma=0.1 divergence,
// averaged over windows.
Metrics evaluate_model(const Model& m, const ForecastDataset& ds, const std::vector<int>& idx,
                       double sdtw_gamma = 0.1, bool sdtw_length_norm = false, Exec exec = Exec::Serial);

struct RunResult {
    uint64_t seed = 0;
    double val_loss = 0.0;
    Metrics test;
    size_t params = 0;
};

// n_runs independent trainings seeded base_seed + r. With exec == Parallel
// the runs themselves run in OpenMP workers (serial kernels inside), so the
// results do not depend on the thread count.
std::vector<RunResult> run_protocol(const ForecastDataset& ds, const Scenario& sc,
                                    const ModelSpec& spec, const DualGraph* graph,
                                    const TrainConfig& cfg, uint64_t base_seed, int n_runs,
                                    Exec exec, double sdtw_gamma = 0.1,
                                    bool sdtw_length_norm = false);

struct MeanStd {
    double mean = 0.0, stdev = 0.0;
};

struct RunAggregate {
    int runs = 0, kept = 0;
    MeanStd mae, mse, sdtw;
    size_t params = 0;
};

// Keep the `keep` runs with the best validation loss, report mean +/- std of
// the test metrics over them.
RunAggregate aggregate_best(const std::vector<RunResult>& results, int keep);

}  // namespace bge
