#pragma once

#include <vector>

#include "bge/spectral.hpp"
#include "bge/tensor.hpp"

namespace bge {

// Execution policy for the hot kernels. Every parallel kernel has a serial
// reference twin with the identical arithmetic; tests assert they agree
// bitwise and bench/ compares their throughput. Batch-level loops pass
// Serial down to avoid nested parallelism.
enum class Exec { Serial, Parallel };

// Row-batched transforms (one row per graph node). in: R x N real,
// out: R x half_modes(N) complex, and the reverses/adjoints.
void dft_rows(const Mat& in, CMat& out, Exec exec);
void idft_rows(const CMat& in, int n_time, Mat& out, Exec exec);
void dft_adjoint_rows(const CMat& g, int n_time, Mat& out, Exec exec);
void idft_adjoint_rows(const Mat& g, CMat& out, Exec exec);

// Message-passing aggregation over sampled spectra. Edge e: src -> dst with a
// d x d complex matrix phi[e] (row-vector convention: out = h * phi).
// out_i = (sum_{e: src->i} hs_src * phi[e] + hs_i) / (indeg_i + 1).
struct EdgeList {
    std::vector<int> src, dst;              // per edge
    std::vector<std::vector<int>> in_edges;  // per node: edge indices entering it
    std::vector<std::vector<int>> out_edges; // per node: edge indices leaving it
    int n_nodes = 0;
    void build(int nodes, const std::vector<std::pair<int, int>>& pairs);
};

void bgc_aggregate(const CMat& hs, const EdgeList& g, const std::vector<CMat>& phi, CMat& out,
                   Exec exec);

// Reverse-mode of bgc_aggregate. v = cotangent of `out`; accumulates
// d(loss)/d(phi[e]) into gphi[e] and writes the cotangent of `hs`.
void bgc_aggregate_backward(const CMat& hs, const EdgeList& g, const std::vector<CMat>& phi,
                            const CMat& v, CMat& ghs, std::vector<CMat>& gphi, Exec exec);

}  // namespace bge
