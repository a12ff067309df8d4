#pragma once

#include <random>
#include <string>
#include <vector>

#include "bge/dualgraph.hpp"
#include "bge/kernels.hpp"
#include "bge/spectral.hpp"
#include "bge/tensor.hpp"

namespace bge {

enum class SamplingPolicy { Lowest, SeededRandom };

struct EncoderConfig {
    int d0 = 0;      // scaler width; 0 means "use the input length"
    int layers = 3;  // >= 2 lets reversed-causality information propagate
    std::vector<int> modes_per_layer;  // empty = all modes; size 1 broadcasts
    double alpha_bgc = 0.5;            // alpha_skip = 1 - alpha_bgc
    SamplingPolicy policy = SamplingPolicy::Lowest;
    uint64_t sampling_seed = 0;
    double fs = 1.0;  // sampling frequency the operator diagonals refer to
};

// Edge topology and per-edge operator coefficients in kernel-friendly form.
struct GraphRuntime {
    EdgeList topo;
    std::vector<OpKind> kind;    // per edge
    std::vector<double> coeff;   // sign * alpha per edge
    std::vector<int> observed;   // channel index -> node index
    int n_nodes = 0;
};

GraphRuntime make_runtime(const DualGraph& g);

struct EncoderState {
    EncoderConfig cfg;
    int n_in = 0, n_nodes = 0, d0 = 0;

    Mat scaler_w;   // n_in x d0, shared across nodes
    Mat node_bias;  // n_nodes x d0, per-node channel embedding

    std::vector<ModeSelection> modes;    // per layer
    std::vector<std::vector<CMat>> phi;  // [layer][edge], d_l x d_l complex
    std::vector<Mat> w, wa;              // per layer, d0 x d0
    std::vector<Vec> b, ba;              // per layer, d0
};

// Phi starts as the edge operator's diagonal sampled at the layer's modes;
// scaler/W/B are uniform(-a, a) with a = fan_in^-1/2 (scaler near identity
// when d0 == n_in). Deterministic for a given rng state.
EncoderState init_encoder(const DualGraph& g, const EncoderConfig& cfg, int n_in,
                          std::mt19937_64& rng);

// Same shapes, all parameters zero; used as a gradient accumulator.
EncoderState zeros_like(const EncoderState& st);

struct ParamView {
    std::string name;
    double* data;
    size_t count;
};
// Stable-order flat views over all trainable tensors (complex ones as
// interleaved re/im doubles).
std::vector<ParamView> param_views(EncoderState& st);
size_t param_count(const EncoderState& st);

struct BgcCache {
    CMat spec_full;  // V x K
    CMat hs;         // V x d_l
    CMat agg;        // V x d_l
};

struct EncodeCache {
    Mat node_input;           // V x n_in
    std::vector<Mat> h;       // h[0..L]
    std::vector<Mat> bgc_out; // per layer
    std::vector<Mat> mix;     // alpha*bgc + (1-alpha)*h_{l-1}
    std::vector<Mat> z;       // pre-activation
    std::vector<BgcCache> bgc;
};

// One Bond Graph Convolution: sample modes of DFT(h), per-node aggregation
// through the edge FFNs, write the updated modes back, inverse DFT.
Mat bgc_forward(const GraphRuntime& g, const EncoderState& st, int layer, const Mat& h,
                Exec exec, BgcCache* cache = nullptr);

// Full Bond Graph Layer: relu((a*BGC(h) + (1-a)*h) W + B).
Mat bgl_forward(const GraphRuntime& g, const EncoderState& st, int layer, const Mat& h,
                Exec exec);

// Encoder output sum_l (h_l Wa_l + Ba_l) for an n_in x D input window.
Mat encode(const GraphRuntime& g, const EncoderState& st, const Mat& x_window, Exec exec,
           EncodeCache* cache = nullptr);

// Exact reverse-mode gradients for every parameter group, accumulated into
// `grads` (shaped via zeros_like).
void encoder_backward(const GraphRuntime& g, const EncoderState& st, const EncodeCache& cache,
                      const Mat& d_hout, EncoderState& grads, Exec exec);

}  // namespace bge
