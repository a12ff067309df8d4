#include "bge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bge {

ForecastDataset build_dataset(const SeriesTable& series, int window, int n_samples,
                              uint64_t seed) {
    if (window < 2 || n_samples < 1)
        throw Error("bad-params", "window and sample count must be positive");
    const int available = series.data.rows / window;
    if (available < n_samples)
        throw Error("insufficient-data",
                    "need " + std::to_string(n_samples) + " non-overlapping windows of " +
                        std::to_string(window) + " points, the series only holds " +
                        std::to_string(available));
    ForecastDataset ds;
    ds.window = window;
    ds.fs = series.fs;
    ds.channel_names = series.names;
    for (int s = 0; s < n_samples; ++s) {
        Mat w(window, series.data.cols);
        for (int t = 0; t < window; ++t)
            for (int c = 0; c < series.data.cols; ++c)
                w.at(t, c) = series.data.at(s * window + t, c);
        ds.samples.push_back(std::move(w));
    }

    std::vector<int> order(n_samples);
    for (int i = 0; i < n_samples; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const int n_train = 7 * n_samples / 10;
    const int n_val = n_samples / 10;
    ds.train_idx.assign(order.begin(), order.begin() + n_train);
    ds.val_idx.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    ds.test_idx.assign(order.begin() + n_train + n_val, order.end());
    return ds;
}

Scenario scenario_from_string(const std::string& s, int window) {
    const auto dash = s.find('-');
    if (dash == std::string::npos)
        throw Error("bad-scenario", "scenario must look like 100-500");
    Scenario sc;
    try {
        sc.n_in = std::stoi(s.substr(0, dash));
        sc.k_out = std::stoi(s.substr(dash + 1));
    } catch (const std::exception&) {
        throw Error("bad-scenario", "scenario must look like 100-500");
    }
    if (sc.n_in < 2 || sc.k_out < 1 || sc.n_in + sc.k_out != window)
        throw Error("bad-scenario", "scenario must split the " + std::to_string(window) +
                                        "-point window (n_in + k_out = window)");
    return sc;
}

std::vector<ChannelStats> train_stats(const ForecastDataset& ds) {
    if (ds.train_idx.empty()) throw Error("missing-split", "dataset has no train split");
    const int d = ds.channels();
    std::vector<ChannelStats> stats(d);
    for (int c = 0; c < d; ++c) {
        double sum = 0.0, sq = 0.0;
        long n = 0;
        for (int idx : ds.train_idx) {
            const Mat& w = ds.samples[idx];
            for (int t = 0; t < w.rows; ++t) {
                sum += w.at(t, c);
                sq += w.at(t, c) * w.at(t, c);
                ++n;
            }
        }
        const double mean = sum / n;
        const double var = std::max(sq / n - mean * mean, 0.0);
        stats[c].mean = mean;
        stats[c].stdev = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    return stats;
}

Mat window_input(const Mat& sample, const Scenario& sc, const std::vector<ChannelStats>& stats) {
    Mat x(sc.n_in, sample.cols);
    for (int t = 0; t < sc.n_in; ++t)
        for (int c = 0; c < sample.cols; ++c)
            x.at(t, c) = (sample.at(t, c) - stats[c].mean) / stats[c].stdev;
    return x;
}

Mat window_target(const Mat& sample, const Scenario& sc, const std::vector<ChannelStats>& stats) {
    Mat y(sample.cols, sc.k_out);  // channels x k_out, matching head output
    for (int t = 0; t < sc.k_out; ++t)
        for (int c = 0; c < sample.cols; ++c)
            y.at(c, t) = (sample.at(sc.n_in + t, c) - stats[c].mean) / stats[c].stdev;
    return y;
}

Mat window_target_raw(const Mat& sample, const Scenario& sc) {
    Mat y(sample.cols, sc.k_out);
    for (int t = 0; t < sc.k_out; ++t)
        for (int c = 0; c < sample.cols; ++c) y.at(c, t) = sample.at(sc.n_in + t, c);
    return y;
}

}  // namespace bge
