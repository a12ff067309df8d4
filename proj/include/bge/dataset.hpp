#pragma once

#include <string>
#include <vector>

#include "bge/sim.hpp"
#include "bge/tensor.hpp"

namespace bge {

// Non-overlapping fixed-length windows with a seeded 70/10/20 split.
struct ForecastDataset {
    int window = 600;
    double fs = 1.0;
    std::vector<std::string> channel_names;
    std::vector<Mat> samples;  // each window x D
    std::vector<int> train_idx, val_idx, test_idx;
    int channels() const { return samples.empty() ? 0 : samples[0].cols; }
};

ForecastDataset build_dataset(const SeriesTable& series, int window, int n_samples,
                              uint64_t seed);

// Forecast split of a window: first n_in points in, remaining k_out out.
struct Scenario {
    int n_in = 100, k_out = 500;
};
Scenario scenario_from_string(const std::string& s, int window);

struct ChannelStats {
    double mean = 0.0, stdev = 1.0;
};
// Per-channel statistics over the train-split windows.
std::vector<ChannelStats> train_stats(const ForecastDataset& ds);

// Channel-wise input (n_in x D) and target (k_out x D) slices, standardized
// with the given stats.
Mat window_input(const Mat& sample, const Scenario& sc, const std::vector<ChannelStats>& stats);
Mat window_target(const Mat& sample, const Scenario& sc, const std::vector<ChannelStats>& stats);
// Target transposed to channels x k_out in ORIGINAL units (metric reporting).
Mat window_target_raw(const Mat& sample, const Scenario& sc);

}  // namespace bge
