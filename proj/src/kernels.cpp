#include "bge/kernels.hpp"

#include <omp.h>

namespace bge {

void EdgeList::build(int nodes, const std::vector<std::pair<int, int>>& pairs) {
    n_nodes = nodes;
    src.clear();
    dst.clear();
    in_edges.assign(nodes, {});
    out_edges.assign(nodes, {});
    for (size_t e = 0; e < pairs.size(); ++e) {
        src.push_back(pairs[e].first);
        dst.push_back(pairs[e].second);
        out_edges[pairs[e].first].push_back(static_cast<int>(e));
        in_edges[pairs[e].second].push_back(static_cast<int>(e));
    }
}

void dft_rows(const Mat& in, CMat& out, Exec exec) {
    const int k = half_modes(in.cols);
    if (out.rows != in.rows || out.cols != k) out = CMat(in.rows, k);
    if (exec == Exec::Serial) {
        for (int r = 0; r < in.rows; ++r) dft_row(in[r], in.cols, out[r]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int r = 0; r < in.rows; ++r) dft_row(in[r], in.cols, out[r]);
}

void idft_rows(const CMat& in, int n_time, Mat& out, Exec exec) {
    if (out.rows != in.rows || out.cols != n_time) out = Mat(in.rows, n_time);
    if (exec == Exec::Serial) {
        for (int r = 0; r < in.rows; ++r) idft_row(in[r], n_time, out[r]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int r = 0; r < in.rows; ++r) idft_row(in[r], n_time, out[r]);
}

void dft_adjoint_rows(const CMat& g, int n_time, Mat& out, Exec exec) {
    if (out.rows != g.rows || out.cols != n_time) out = Mat(g.rows, n_time);
    if (exec == Exec::Serial) {
        for (int r = 0; r < g.rows; ++r) dft_adjoint_row(g[r], n_time, out[r]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int r = 0; r < g.rows; ++r) dft_adjoint_row(g[r], n_time, out[r]);
}

void idft_adjoint_rows(const Mat& g, CMat& out, Exec exec) {
    const int k = half_modes(g.cols);
    if (out.rows != g.rows || out.cols != k) out = CMat(g.rows, k);
    if (exec == Exec::Serial) {
        for (int r = 0; r < g.rows; ++r) idft_adjoint_row(g[r], g.cols, out[r]);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int r = 0; r < g.rows; ++r) idft_adjoint_row(g[r], g.cols, out[r]);
}

namespace {

// out_row = h_row * m  (1 x d times d x d, complex)
inline void row_times_mat(const cplx* h, const CMat& m, cplx* out, int d) {
    for (int a = 0; a < d; ++a) {
        const cplx ha = h[a];
        if (ha == cplx{0.0, 0.0}) continue;
        const cplx* mr = m[a];
        for (int c = 0; c < d; ++c) out[c] += ha * mr[c];
    }
}

inline void aggregate_node(int i, const CMat& hs, const EdgeList& g,
                           const std::vector<CMat>& phi, CMat& out) {
    const int d = hs.cols;
    cplx* o = out[i];
    for (int c = 0; c < d; ++c) o[c] = hs[i][c];  // skip connection
    for (int e : g.in_edges[i]) row_times_mat(hs[g.src[e]], phi[e], o, d);
    const double inv = 1.0 / (1.0 + static_cast<double>(g.in_edges[i].size()));
    for (int c = 0; c < d; ++c) o[c] *= inv;
}

}  // namespace

void bgc_aggregate(const CMat& hs, const EdgeList& g, const std::vector<CMat>& phi, CMat& out,
                   Exec exec) {
    if (out.rows != hs.rows || out.cols != hs.cols) out = CMat(hs.rows, hs.cols);
    if (exec == Exec::Serial) {
        for (int i = 0; i < g.n_nodes; ++i) aggregate_node(i, hs, g, phi, out);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.n_nodes; ++i) aggregate_node(i, hs, g, phi, out);
}

namespace {

// ghs_j = v_j/c_j + sum_{e: j->i} (v_i/c_i) * phi[e]^H
inline void backward_node_input(int j, const CMat& hs, const EdgeList& g,
                                const std::vector<CMat>& phi, const CMat& v, CMat& ghs) {
    const int d = hs.cols;
    cplx* out = ghs[j];
    const double inv_self = 1.0 / (1.0 + static_cast<double>(g.in_edges[j].size()));
    for (int c = 0; c < d; ++c) out[c] = v[j][c] * inv_self;
    for (int e : g.out_edges[j]) {
        const int i = g.dst[e];
        const double inv = 1.0 / (1.0 + static_cast<double>(g.in_edges[i].size()));
        const cplx* vi = v[i];
        const CMat& m = phi[e];
        for (int a = 0; a < d; ++a) {
            cplx s{0.0, 0.0};
            const cplx* mr = m[a];
            for (int c = 0; c < d; ++c) s += vi[c] * std::conj(mr[c]);
            out[a] += s * inv;
        }
    }
}

// gphi[e]_{a,c} += conj(hs_src_a) * v_dst_c / c_dst
inline void backward_edge_phi(int e, const CMat& hs, const EdgeList& g, const CMat& v,
                              std::vector<CMat>& gphi) {
    const int d = hs.cols;
    const int i = g.dst[e];
    const double inv = 1.0 / (1.0 + static_cast<double>(g.in_edges[i].size()));
    const cplx* hj = hs[g.src[e]];
    const cplx* vi = v[i];
    CMat& gm = gphi[e];
    for (int a = 0; a < d; ++a) {
        const cplx hc = std::conj(hj[a]);
        cplx* gr = gm[a];
        for (int c = 0; c < d; ++c) gr[c] += hc * (vi[c] * inv);
    }
}

}  // namespace

void bgc_aggregate_backward(const CMat& hs, const EdgeList& g, const std::vector<CMat>& phi,
                            const CMat& v, CMat& ghs, std::vector<CMat>& gphi, Exec exec) {
    if (ghs.rows != hs.rows || ghs.cols != hs.cols) ghs = CMat(hs.rows, hs.cols);
    const int n_edges = static_cast<int>(g.src.size());
    if (exec == Exec::Serial) {
        for (int j = 0; j < g.n_nodes; ++j) backward_node_input(j, hs, g, phi, v, ghs);
        for (int e = 0; e < n_edges; ++e) backward_edge_phi(e, hs, g, v, gphi);
        return;
    }
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
        for (int j = 0; j < g.n_nodes; ++j) backward_node_input(j, hs, g, phi, v, ghs);
#pragma omp for schedule(static)
        for (int e = 0; e < n_edges; ++e) backward_edge_phi(e, hs, g, v, gphi);
    }
}

}  // namespace bge
