#pragma once

#include <random>
#include <vector>

#include "bge/encoder.hpp"
#include "bge/tensor.hpp"

namespace bge {

enum class HeadKind { Linear, MLP };

// Channel-wise forecasting head: each channel owns an affine map (Linear) or
// affine-relu-affine stack (MLP) from its representation row to the horizon.
struct HeadState {
    HeadKind kind = HeadKind::Linear;
    int channels = 0, in_dim = 0, out_dim = 0, hidden = 0;
    std::vector<Mat> w1;
    std::vector<Vec> b1;
    std::vector<Mat> w2;  // MLP only
    std::vector<Vec> b2;
};

HeadState init_head(HeadKind kind, int channels, int in_dim, int out_dim, int hidden,
                    std::mt19937_64& rng);
HeadState zeros_like(const HeadState& st);
std::vector<ParamView> param_views(HeadState& st);
size_t param_count(const HeadState& st);

struct HeadCache {
    Mat input;  // channels x in_dim
    Mat z1;     // channels x hidden (MLP)
};

// in: channels x in_dim -> channels x out_dim
Mat head_forward(const HeadState& st, const Mat& in, HeadCache* cache = nullptr);
// Accumulates parameter gradients; when din != nullptr also writes the input
// cotangent (needed to reach the encoder).
void head_backward(const HeadState& st, const HeadCache& cache, const Mat& dout,
                   HeadState& grads, Mat* din);

}  // namespace bge
