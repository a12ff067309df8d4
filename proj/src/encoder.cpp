#include "bge/encoder.hpp"

#include <algorithm>
#include <cmath>

namespace bge {

GraphRuntime make_runtime(const DualGraph& g) {
    GraphRuntime rt;
    rt.n_nodes = static_cast<int>(g.nodes.size());
    std::vector<std::pair<int, int>> pairs;
    for (const PhysEdge& e : g.edges) {
        pairs.emplace_back(e.src, e.dst);
        rt.kind.push_back(e.kind);
        rt.coeff.push_back(e.sign * e.alpha);
    }
    rt.topo.build(rt.n_nodes, pairs);
    rt.observed.assign(g.channels(), -1);
    for (size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].observed) {
            if (g.nodes[i].channel < 0 || g.nodes[i].channel >= static_cast<int>(rt.observed.size()))
                throw Error("bad-graph", "observed node with out-of-range channel");
            rt.observed[g.nodes[i].channel] = static_cast<int>(i);
        }
    for (int n : rt.observed)
        if (n < 0) throw Error("bad-graph", "channel without an observed node");
    return rt;
}

namespace {

void fill_uniform(std::mt19937_64& rng, double bound, double* data, size_t n) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (size_t i = 0; i < n; ++i) data[i] = u(rng);
}

}  // namespace

EncoderState init_encoder(const DualGraph& g, const EncoderConfig& cfg, int n_in,
                          std::mt19937_64& rng) {
    if (n_in < 2) throw Error("bad-config", "encoder needs an input length of at least 2");
    if (cfg.layers < 1) throw Error("bad-config", "encoder needs at least one layer");
    if (cfg.alpha_bgc < 0.0 || cfg.alpha_bgc > 1.0)
        throw Error("bad-config", "alpha_bgc must lie in [0, 1]");

    EncoderState st;
    st.cfg = cfg;
    st.n_in = n_in;
    st.n_nodes = static_cast<int>(g.nodes.size());
    st.d0 = cfg.d0 > 0 ? cfg.d0 : n_in;
    const int k = half_modes(st.d0);

    std::vector<int> d_l;
    if (cfg.modes_per_layer.empty())
        d_l.assign(cfg.layers, k);
    else if (cfg.modes_per_layer.size() == 1)
        d_l.assign(cfg.layers, cfg.modes_per_layer[0]);
    else if (static_cast<int>(cfg.modes_per_layer.size()) == cfg.layers)
        d_l = cfg.modes_per_layer;
    else
        throw Error("bad-config", "modes_per_layer must have 1 or `layers` entries");
    for (int d : d_l)
        if (d < 1 || d > k)
            throw Error("bad-config", "layer mode count " + std::to_string(d) +
                                          " exceeds the " + std::to_string(k) +
                                          " available modes");

    const double a_scaler = 1.0 / std::sqrt(static_cast<double>(n_in));
    st.scaler_w = Mat(n_in, st.d0);
    fill_uniform(rng, a_scaler, st.scaler_w.a.data(), st.scaler_w.size());
    if (st.d0 == n_in)
        for (int i = 0; i < n_in; ++i) st.scaler_w.at(i, i) += 1.0;  // near-identity
    st.node_bias = Mat(st.n_nodes, st.d0);
    fill_uniform(rng, a_scaler, st.node_bias.a.data(), st.node_bias.size());

    const double a_w = 1.0 / std::sqrt(static_cast<double>(st.d0));
    for (int l = 0; l < cfg.layers; ++l) {
        st.modes.push_back(cfg.policy == SamplingPolicy::Lowest
                               ? lowest_modes(d_l[l], k)
                               : random_modes(d_l[l], k, cfg.sampling_seed + l));
        st.w.emplace_back(st.d0, st.d0);
        fill_uniform(rng, a_w, st.w.back().a.data(), st.w.back().size());
        st.b.emplace_back(st.d0, 0.0);
        fill_uniform(rng, a_w, st.b.back().data(), st.b.back().size());
        st.wa.emplace_back(st.d0, st.d0);
        fill_uniform(rng, a_w, st.wa.back().a.data(), st.wa.back().size());
        st.ba.emplace_back(st.d0, 0.0);
        fill_uniform(rng, a_w, st.ba.back().data(), st.ba.back().size());
    }

    const GraphRuntime rt = make_runtime(g);
    for (int l = 0; l < cfg.layers; ++l) {
        const ModeSelection& sel = st.modes[l];
        std::vector<CMat> layer_phi;
        for (size_t e = 0; e < rt.kind.size(); ++e) {
            CMat m(sel.count(), sel.count());
            for (int d = 0; d < sel.count(); ++d)
                m[d][d] = operator_mode(rt.kind[e], rt.coeff[e], sel.indices[d], st.d0, cfg.fs);
            layer_phi.push_back(std::move(m));
        }
        st.phi.push_back(std::move(layer_phi));
    }
    return st;
}

EncoderState zeros_like(const EncoderState& st) {
    EncoderState z = st;
    z.scaler_w.zero();
    z.node_bias.zero();
    for (auto& m : z.w) m.zero();
    for (auto& m : z.wa) m.zero();
    for (auto& v : z.b) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : z.ba) std::fill(v.begin(), v.end(), 0.0);
    for (auto& layer : z.phi)
        for (auto& m : layer) m.zero();
    return z;
}

std::vector<ParamView> param_views(EncoderState& st) {
    std::vector<ParamView> out;
    out.push_back({"scaler_w", st.scaler_w.a.data(), st.scaler_w.size()});
    out.push_back({"node_bias", st.node_bias.a.data(), st.node_bias.size()});
    for (size_t l = 0; l < st.w.size(); ++l) {
        const std::string L = std::to_string(l + 1);
        out.push_back({"w" + L, st.w[l].a.data(), st.w[l].size()});
        out.push_back({"b" + L, st.b[l].data(), st.b[l].size()});
        out.push_back({"wa" + L, st.wa[l].a.data(), st.wa[l].size()});
        out.push_back({"ba" + L, st.ba[l].data(), st.ba[l].size()});
    }
    for (size_t l = 0; l < st.phi.size(); ++l)
        for (size_t e = 0; e < st.phi[l].size(); ++e)
            out.push_back({"phi" + std::to_string(l + 1) + "_e" + std::to_string(e),
                           reinterpret_cast<double*>(st.phi[l][e].a.data()),
                           st.phi[l][e].size() * 2});
    return out;
}

size_t param_count(const EncoderState& st) {
    size_t n = 0;
    for (const auto& v : param_views(const_cast<EncoderState&>(st))) n += v.count;
    return n;
}

Mat bgc_forward(const GraphRuntime& g, const EncoderState& st, int layer, const Mat& h,
                Exec exec, BgcCache* cache) {
    if (h.cols != st.d0 || h.rows != g.n_nodes)
        throw Error("shape-mismatch", "BGC input must be n_nodes x d0");
    BgcCache local;
    BgcCache& c = cache ? *cache : local;
    dft_rows(h, c.spec_full, exec);
    c.hs = sample(c.spec_full, st.modes[layer]);
    bgc_aggregate(c.hs, g.topo, st.phi[layer], c.agg, exec);
    const CMat padded = pad(c.spec_full, c.agg, st.modes[layer]);
    Mat out;
    idft_rows(padded, st.d0, out, exec);
    return out;
}

namespace {

// reverse of bgc_forward; adds the input cotangent into dh
void bgc_backward(const GraphRuntime& g, const EncoderState& st, int layer, const BgcCache& c,
                  const Mat& dt, EncoderState& grads, Mat& dh, Exec exec) {
    const ModeSelection& sel = st.modes[layer];
    CMat gpad;
    idft_adjoint_rows(dt, gpad, exec);

    // pad: selected columns came from agg, the rest from spec_full
    CMat v(gpad.rows, sel.count());
    for (int r = 0; r < gpad.rows; ++r)
        for (int i = 0; i < sel.count(); ++i) {
            v[r][i] = gpad[r][sel.indices[i]];
            gpad[r][sel.indices[i]] = {0.0, 0.0};
        }

    CMat ghs;
    bgc_aggregate_backward(c.hs, g.topo, st.phi[layer], v, ghs, grads.phi[layer], exec);

    for (int r = 0; r < gpad.rows; ++r)  // sample was a gather: scatter-add back
        for (int i = 0; i < sel.count(); ++i) gpad[r][sel.indices[i]] += ghs[r][i];

    Mat dx;
    dft_adjoint_rows(gpad, st.d0, dx, exec);
    for (size_t i = 0; i < dh.size(); ++i) dh.a[i] += dx.a[i];
}

}  // namespace

Mat bgl_forward(const GraphRuntime& g, const EncoderState& st, int layer, const Mat& h,
                Exec exec) {
    const Mat t = bgc_forward(g, st, layer, h, exec);
    const double a = st.cfg.alpha_bgc;
    Mat mix(h.rows, h.cols);
    for (size_t i = 0; i < mix.size(); ++i) mix.a[i] = a * t.a[i] + (1.0 - a) * h.a[i];
    Mat z;
    affine(mix, st.w[layer], st.b[layer], z);
    for (double& x : z.a) x = std::max(x, 0.0);
    return z;
}

Mat encode(const GraphRuntime& g, const EncoderState& st, const Mat& x_window, Exec exec,
           EncodeCache* cache) {
    if (x_window.rows != st.n_in || x_window.cols != static_cast<int>(g.observed.size()))
        throw Error("shape-mismatch",
                    "input window must be n_in x channels (" + std::to_string(st.n_in) + " x " +
                        std::to_string(g.observed.size()) + ")");
    EncodeCache local;
    EncodeCache& c = cache ? *cache : local;
    const int L = st.cfg.layers;
    const double a = st.cfg.alpha_bgc;

    c.node_input = Mat(g.n_nodes, st.n_in);
    for (size_t ch = 0; ch < g.observed.size(); ++ch) {
        double* row = c.node_input[g.observed[ch]];
        for (int t = 0; t < st.n_in; ++t) row[t] = x_window.at(t, static_cast<int>(ch));
    }

    c.h.assign(1, Mat());
    affine(c.node_input, st.scaler_w, {}, c.h[0]);
    for (int v = 0; v < g.n_nodes; ++v)
        for (int j = 0; j < st.d0; ++j) c.h[0].at(v, j) += st.node_bias.at(v, j);

    c.bgc.assign(L, BgcCache{});
    c.bgc_out.assign(L, Mat());
    c.mix.assign(L, Mat());
    c.z.assign(L, Mat());
    for (int l = 0; l < L; ++l) {
        c.bgc_out[l] = bgc_forward(g, st, l, c.h[l], exec, &c.bgc[l]);
        c.mix[l] = Mat(g.n_nodes, st.d0);
        for (size_t i = 0; i < c.mix[l].size(); ++i)
            c.mix[l].a[i] = a * c.bgc_out[l].a[i] + (1.0 - a) * c.h[l].a[i];
        affine(c.mix[l], st.w[l], st.b[l], c.z[l]);
        Mat hl = c.z[l];
        for (double& x : hl.a) x = std::max(x, 0.0);
        c.h.push_back(std::move(hl));
    }

    Mat out(g.n_nodes, st.d0);
    Mat proj;
    for (int l = 1; l <= L; ++l) {
        affine(c.h[l], st.wa[l - 1], st.ba[l - 1], proj);
        for (size_t i = 0; i < out.size(); ++i) out.a[i] += proj.a[i];
    }
    return out;
}

void encoder_backward(const GraphRuntime& g, const EncoderState& st, const EncodeCache& c,
                      const Mat& d_hout, EncoderState& grads, Exec exec) {
    const int L = st.cfg.layers;
    const double a = st.cfg.alpha_bgc;

    std::vector<Mat> dh(L + 1, Mat(g.n_nodes, st.d0));
    Mat tmp;
    for (int l = 1; l <= L; ++l) {
        affine_backward_params(c.h[l], d_hout, grads.wa[l - 1], grads.ba[l - 1]);
        affine_backward_input(d_hout, st.wa[l - 1], tmp);
        for (size_t i = 0; i < tmp.size(); ++i) dh[l].a[i] += tmp.a[i];
    }

    for (int l = L; l >= 1; --l) {
        Mat dz = dh[l];
        for (size_t i = 0; i < dz.size(); ++i)
            if (c.z[l - 1].a[i] <= 0.0) dz.a[i] = 0.0;
        affine_backward_params(c.mix[l - 1], dz, grads.w[l - 1], grads.b[l - 1]);
        Mat dmix;
        affine_backward_input(dz, st.w[l - 1], dmix);
        Mat dt(g.n_nodes, st.d0);
        for (size_t i = 0; i < dmix.size(); ++i) {
            dt.a[i] = a * dmix.a[i];
            dh[l - 1].a[i] += (1.0 - a) * dmix.a[i];
        }
        bgc_backward(g, st, l - 1, c.bgc[l - 1], dt, grads, dh[l - 1], exec);
    }

    for (int v = 0; v < g.n_nodes; ++v)
        for (int j = 0; j < st.d0; ++j) grads.node_bias.at(v, j) += dh[0].at(v, j);
    Vec none;
    affine_backward_params(c.node_input, dh[0], grads.scaler_w, none);
}

}  // namespace bge
