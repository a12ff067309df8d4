#include "bge/train.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bge/metrics.hpp"

namespace bge {

size_t Model::params() const {
    size_t n = param_count(head);
    if (informed) n += param_count(enc);
    return n;
}

namespace {

// Forward pass on a standardized input window; returns channels x k_out.
Mat model_forward(const Model& m, const Mat& x_std, Exec exec, EncodeCache* enc_cache,
                  HeadCache* head_cache, Mat* head_in_out) {
    Mat head_in;
    if (m.informed) {
        const Mat hout = encode(m.rt, m.enc, x_std, exec, enc_cache);
        head_in = Mat(static_cast<int>(m.rt.observed.size()), m.enc.d0);
        for (size_t c = 0; c < m.rt.observed.size(); ++c)
            for (int j = 0; j < m.enc.d0; ++j)
                head_in.at(static_cast<int>(c), j) = hout.at(m.rt.observed[c], j);
    } else {
        head_in = Mat(x_std.cols, x_std.rows);  // channels x n_in
        for (int t = 0; t < x_std.rows; ++t)
            for (int c = 0; c < x_std.cols; ++c) head_in.at(c, t) = x_std.at(t, c);
    }
    if (head_in_out) *head_in_out = head_in;
    return head_forward(m.head, head_in, head_cache);
}

struct GradBag {
    EncoderState enc;
    HeadState head;
    double loss_sum = 0.0;
    int count = 0;
};

// Per-sample loss gradient accumulated into `bag`.
void accumulate_sample(const Model& m, const Mat& sample, const Scenario& sc,
                       const TrainConfig& cfg, GradBag& bag, Exec exec) {
    const Mat x = window_input(sample, sc, m.stats);
    const Mat y = window_target(sample, sc, m.stats);
    EncodeCache enc_cache;
    HeadCache head_cache;
    Mat head_in;
    const Mat pred = model_forward(m, x, exec, m.informed ? &enc_cache : nullptr, &head_cache,
                                   &head_in);
    bag.loss_sum += huber_loss(pred, y, cfg.huber_delta);
    bag.count += 1;
    const Mat dpred = huber_grad(pred, y, cfg.huber_delta);
    if (m.informed) {
        Mat din;
        head_backward(m.head, head_cache, dpred, bag.head, &din);
        Mat dhout(m.rt.n_nodes, m.enc.d0);
        for (size_t c = 0; c < m.rt.observed.size(); ++c)
            for (int j = 0; j < m.enc.d0; ++j)
                dhout.at(m.rt.observed[c], j) = din.at(static_cast<int>(c), j);
        encoder_backward(m.rt, m.enc, enc_cache, dhout, bag.enc, exec);
    } else {
        head_backward(m.head, head_cache, dpred, bag.head, nullptr);
    }
}

std::vector<ParamView> model_views(Model& m) {
    std::vector<ParamView> v = param_views(m.head);
    if (m.informed) {
        auto ev = param_views(m.enc);
        v.insert(v.end(), ev.begin(), ev.end());
    }
    return v;
}

std::vector<ParamView> bag_views(GradBag& bag, bool informed) {
    std::vector<ParamView> v = param_views(bag.head);
    if (informed) {
        auto ev = param_views(bag.enc);
        v.insert(v.end(), ev.begin(), ev.end());
    }
    return v;
}

class Adam {
public:
    Adam(const TrainConfig& cfg, size_t n) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

    void step(const std::vector<ParamView>& params, const std::vector<ParamView>& grads) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
        size_t off = 0;
        for (size_t g = 0; g < params.size(); ++g) {
            double* p = params[g].data;
            const double* d = grads[g].data;
            for (size_t i = 0; i < params[g].count; ++i, ++off) {
                m_[off] = cfg_.beta1 * m_[off] + (1.0 - cfg_.beta1) * d[i];
                v_[off] = cfg_.beta2 * v_[off] + (1.0 - cfg_.beta2) * d[i] * d[i];
                p[i] -= cfg_.lr * (m_[off] / bc1) / (std::sqrt(v_[off] / bc2) + cfg_.adam_eps);
            }
        }
    }

private:
    TrainConfig cfg_;
    int t_ = 0;
    std::vector<double> m_, v_;
};

double split_loss(const Model& m, const ForecastDataset& ds, const std::vector<int>& idx,
                  const Scenario& sc, double delta, Exec exec) {
    if (idx.empty()) return 0.0;
    double sum = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(+ : sum)
        for (size_t k = 0; k < idx.size(); ++k) {
            const Mat x = window_input(ds.samples[idx[k]], sc, m.stats);
            const Mat y = window_target(ds.samples[idx[k]], sc, m.stats);
            sum += huber_loss(model_forward(m, x, Exec::Serial, nullptr, nullptr, nullptr), y,
                              delta);
        }
    } else {
        for (size_t k = 0; k < idx.size(); ++k) {
            const Mat x = window_input(ds.samples[idx[k]], sc, m.stats);
            const Mat y = window_target(ds.samples[idx[k]], sc, m.stats);
            sum += huber_loss(model_forward(m, x, Exec::Serial, nullptr, nullptr, nullptr), y,
                              delta);
        }
    }
    return sum / static_cast<double>(idx.size());
}

}  // namespace

Mat predict(const Model& m, const Mat& sample, Exec exec) {
    const Mat x = window_input(sample, m.scenario, m.stats);
    Mat pred = model_forward(m, x, exec, nullptr, nullptr, nullptr);
    for (int c = 0; c < pred.rows; ++c)
        for (int t = 0; t < pred.cols; ++t)
            pred.at(c, t) = pred.at(c, t) * m.stats[c].stdev + m.stats[c].mean;
    return pred;
}

TrainResult train_model(const ForecastDataset& ds, const Scenario& sc, const ModelSpec& spec,
                        const DualGraph* graph, const TrainConfig& cfg, uint64_t seed,
                        Exec exec) {
    if (ds.train_idx.empty() || ds.val_idx.empty())
        throw Error("missing-split", "dataset needs train and validation splits");
    if (spec.informed && !graph)
        throw Error("bad-config", "informed model needs a compiled dual graph");

    TrainResult res;
    Model& m = res.model;
    m.informed = spec.informed;
    m.scenario = sc;
    m.stats = train_stats(ds);

    std::mt19937_64 rng(seed);
    int head_in_dim = sc.n_in;
    if (spec.informed) {
        m.graph = *graph;
        m.rt = make_runtime(m.graph);
        if (m.rt.observed.size() != static_cast<size_t>(ds.channels()))
            throw Error("bad-mapping", "dual graph observes " +
                                           std::to_string(m.rt.observed.size()) +
                                           " channels, dataset has " +
                                           std::to_string(ds.channels()));
        m.enc = init_encoder(m.graph, spec.enc, sc.n_in, rng);
        head_in_dim = m.enc.d0;
    }
    m.head = init_head(spec.head_kind, ds.channels(), head_in_dim, sc.k_out, spec.hidden, rng);

    auto views = model_views(m);
    size_t total = 0;
    for (const auto& v : views) total += v.count;
    Adam opt(cfg, total);

    const int n_train = static_cast<int>(ds.train_idx.size());
    const int batch = cfg.batch > 0 ? std::min(cfg.batch, n_train) : n_train;
    std::vector<int> order = ds.train_idx;

    const int max_threads = exec == Exec::Parallel ? omp_get_max_threads() : 1;
    std::vector<GradBag> bags(max_threads);
    for (auto& bag : bags) {
        if (m.informed) bag.enc = zeros_like(m.enc);
        bag.head = zeros_like(m.head);
    }

    Model best;
    res.best_val = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        int epoch_count = 0;
        for (int start = 0; start < n_train; start += batch) {
            const int stop = std::min(start + batch, n_train);
            const int count = stop - start;
            const int threads = std::min(max_threads, count);
            for (int t = 0; t < threads; ++t) {
                auto gv = bag_views(bags[t], m.informed);
                for (auto& v : gv) std::fill(v.data, v.data + v.count, 0.0);
                bags[t].loss_sum = 0.0;
                bags[t].count = 0;
            }
            // contiguous chunks per thread, reduced in thread order:
            // deterministic for a fixed thread count
            if (threads > 1) {
#pragma omp parallel num_threads(threads)
                {
                    const int t = omp_get_thread_num();
                    const int chunk_lo = start + t * count / threads;
                    const int chunk_hi = start + (t + 1) * count / threads;
                    for (int k = chunk_lo; k < chunk_hi; ++k)
                        accumulate_sample(m, ds.samples[order[k]], sc, cfg, bags[t],
                                          Exec::Serial);
                }
            } else {
                for (int k = start; k < stop; ++k)
                    accumulate_sample(m, ds.samples[order[k]], sc, cfg, bags[0], Exec::Serial);
            }
            for (int t = 1; t < threads; ++t) {
                auto dst = bag_views(bags[0], m.informed);
                auto src = bag_views(bags[t], m.informed);
                for (size_t g = 0; g < dst.size(); ++g)
                    for (size_t i = 0; i < dst[g].count; ++i) dst[g].data[i] += src[g].data[i];
                bags[0].loss_sum += bags[t].loss_sum;
                bags[0].count += bags[t].count;
            }
            auto gv = bag_views(bags[0], m.informed);
            const double inv = 1.0 / count;  // mean-reduced over the batch
            for (auto& v : gv)
                for (size_t i = 0; i < v.count; ++i) v.data[i] *= inv;
            epoch_loss += bags[0].loss_sum;
            epoch_count += bags[0].count;
            if (!std::isfinite(bags[0].loss_sum))
                throw Error("diverged", "non-finite training loss at epoch " +
                                            std::to_string(epoch) + "; lower the learning rate");
            opt.step(views, gv);
        }
        res.train_loss.push_back(epoch_loss / epoch_count);
        const double val = split_loss(m, ds, ds.val_idx, sc, cfg.huber_delta, exec);
        if (!std::isfinite(val))
            throw Error("diverged", "non-finite validation loss at epoch " +
                                        std::to_string(epoch));
        res.val_loss.push_back(val);
        if (val < res.best_val) {
            res.best_val = val;
            res.best_epoch = epoch;
            best = m;
        }
    }
    if (res.best_epoch >= 0) res.model = best;
    return res;
}

Metrics evaluate_model(const Model& m, const ForecastDataset& ds, const std::vector<int>& idx,
                       double sdtw_gamma, bool sdtw_length_norm, Exec exec) {
    if (idx.empty()) throw Error("missing-split", "no windows to evaluate");
    double abs_sum = 0.0, sq_sum = 0.0, sdtw_sum = 0.0;
    long n = 0;
    for (int k : idx) {
        const Mat pred = predict(m, ds.samples[k], exec);
        const Mat target = window_target_raw(ds.samples[k], m.scenario);
        for (size_t i = 0; i < pred.size(); ++i) {
            const double r = pred.a[i] - target.a[i];
            abs_sum += std::abs(r);
            sq_sum += r * r;
            ++n;
        }
        // series as time x channels for the warping distance
        Mat pt(pred.cols, pred.rows), tt(target.cols, target.rows);
        for (int c = 0; c < pred.rows; ++c)
            for (int t = 0; t < pred.cols; ++t) {
                pt.at(t, c) = pred.at(c, t);
                tt.at(t, c) = target.at(c, t);
            }
        sdtw_sum += soft_dtw_divergence(pt, tt, sdtw_gamma, sdtw_length_norm);
    }
    Metrics out;
    out.mae = abs_sum / n;
    out.mse = sq_sum / n;
    out.sdtw = sdtw_sum / idx.size();
    return out;
}

std::vector<RunResult> run_protocol(const ForecastDataset& ds, const Scenario& sc,
                                    const ModelSpec& spec, const DualGraph* graph,
                                    const TrainConfig& cfg, uint64_t base_seed, int n_runs,
                                    Exec exec, double sdtw_gamma, bool sdtw_length_norm) {
    std::vector<RunResult> results(n_runs);
    std::vector<std::string> errors(n_runs);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < n_runs; ++r) {
            try {
                TrainResult tr =
                    train_model(ds, sc, spec, graph, cfg, base_seed + r, Exec::Serial);
                results[r] = {base_seed + r, tr.best_val,
                              evaluate_model(tr.model, ds, ds.test_idx, sdtw_gamma,
                                             sdtw_length_norm, Exec::Serial),
                              tr.model.params()};
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        }
    } else {
        for (int r = 0; r < n_runs; ++r) {
            TrainResult tr = train_model(ds, sc, spec, graph, cfg, base_seed + r, Exec::Serial);
            results[r] = {base_seed + r, tr.best_val,
                          evaluate_model(tr.model, ds, ds.test_idx, sdtw_gamma, sdtw_length_norm,
                                         Exec::Serial),
                          tr.model.params()};
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error("run-failed", e);
    return results;
}

RunAggregate aggregate_best(const std::vector<RunResult>& results, int keep) {
    if (results.empty()) throw Error("no-runs", "nothing to aggregate");
    std::vector<RunResult> sorted = results;
    std::sort(sorted.begin(), sorted.end(),
              [](const RunResult& a, const RunResult& b) { return a.val_loss < b.val_loss; });
    const int k = std::min<int>(keep, static_cast<int>(sorted.size()));
    auto agg = [&](auto get) {
        MeanStd ms;
        for (int i = 0; i < k; ++i) ms.mean += get(sorted[i]);
        ms.mean /= k;
        for (int i = 0; i < k; ++i) {
            const double d = get(sorted[i]) - ms.mean;
            ms.stdev += d * d;
        }
        ms.stdev = k > 1 ? std::sqrt(ms.stdev / (k - 1)) : 0.0;
        return ms;
    };
    RunAggregate out;
    out.runs = static_cast<int>(results.size());
    out.kept = k;
    out.mae = agg([](const RunResult& r) { return r.test.mae; });
    out.mse = agg([](const RunResult& r) { return r.test.mse; });
    out.sdtw = agg([](const RunResult& r) { return r.test.sdtw; });
    out.params = sorted.empty() ? 0 : sorted[0].params;
    return out;
}

}  // namespace bge
