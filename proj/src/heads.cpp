#include "bge/heads.hpp"

#include <cmath>

namespace bge {

namespace {

void fill_uniform(std::mt19937_64& rng, double bound, double* data, size_t n) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (size_t i = 0; i < n; ++i) data[i] = u(rng);
}

}  // namespace

HeadState init_head(HeadKind kind, int channels, int in_dim, int out_dim, int hidden,
                    std::mt19937_64& rng) {
    if (channels < 1 || in_dim < 1 || out_dim < 1)
        throw Error("bad-config", "head needs positive channel/in/out sizes");
    if (kind == HeadKind::MLP && hidden < 1)
        throw Error("bad-config", "MLP head needs a positive hidden width");
    HeadState st;
    st.kind = kind;
    st.channels = channels;
    st.in_dim = in_dim;
    st.out_dim = out_dim;
    st.hidden = kind == HeadKind::MLP ? hidden : 0;
    const int first_out = kind == HeadKind::MLP ? hidden : out_dim;
    const double a1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (int c = 0; c < channels; ++c) {
        st.w1.emplace_back(in_dim, first_out);
        fill_uniform(rng, a1, st.w1.back().a.data(), st.w1.back().size());
        st.b1.emplace_back(first_out, 0.0);
        fill_uniform(rng, a1, st.b1.back().data(), st.b1.back().size());
        if (kind == HeadKind::MLP) {
            const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
            st.w2.emplace_back(hidden, out_dim);
            fill_uniform(rng, a2, st.w2.back().a.data(), st.w2.back().size());
            st.b2.emplace_back(out_dim, 0.0);
            fill_uniform(rng, a2, st.b2.back().data(), st.b2.back().size());
        }
    }
    return st;
}

HeadState zeros_like(const HeadState& st) {
    HeadState z = st;
    for (auto& m : z.w1) m.zero();
    for (auto& m : z.w2) m.zero();
    for (auto& v : z.b1) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : z.b2) std::fill(v.begin(), v.end(), 0.0);
    return z;
}

std::vector<ParamView> param_views(HeadState& st) {
    std::vector<ParamView> out;
    for (int c = 0; c < st.channels; ++c) {
        const std::string C = std::to_string(c);
        out.push_back({"head_w1_c" + C, st.w1[c].a.data(), st.w1[c].size()});
        out.push_back({"head_b1_c" + C, st.b1[c].data(), st.b1[c].size()});
        if (st.kind == HeadKind::MLP) {
            out.push_back({"head_w2_c" + C, st.w2[c].a.data(), st.w2[c].size()});
            out.push_back({"head_b2_c" + C, st.b2[c].data(), st.b2[c].size()});
        }
    }
    return out;
}

size_t param_count(const HeadState& st) {
    size_t n = 0;
    for (const auto& v : param_views(const_cast<HeadState&>(st))) n += v.count;
    return n;
}

Mat head_forward(const HeadState& st, const Mat& in, HeadCache* cache) {
    if (in.rows != st.channels || in.cols != st.in_dim)
        throw Error("shape-mismatch", "head input must be channels x in_dim");
    HeadCache local;
    HeadCache& c = cache ? *cache : local;
    c.input = in;
    Mat out(st.channels, st.out_dim);
    if (st.kind == HeadKind::MLP) c.z1 = Mat(st.channels, st.hidden);
    for (int ch = 0; ch < st.channels; ++ch) {
        const double* x = in[ch];
        if (st.kind == HeadKind::Linear) {
            double* o = out[ch];
            for (int j = 0; j < st.out_dim; ++j) o[j] = st.b1[ch][j];
            for (int k = 0; k < st.in_dim; ++k) {
                const double xv = x[k];
                const double* wk = st.w1[ch][k];
                for (int j = 0; j < st.out_dim; ++j) o[j] += xv * wk[j];
            }
        } else {
            double* z = c.z1[ch];
            for (int j = 0; j < st.hidden; ++j) z[j] = st.b1[ch][j];
            for (int k = 0; k < st.in_dim; ++k) {
                const double xv = x[k];
                const double* wk = st.w1[ch][k];
                for (int j = 0; j < st.hidden; ++j) z[j] += xv * wk[j];
            }
            double* o = out[ch];
            for (int j = 0; j < st.out_dim; ++j) o[j] = st.b2[ch][j];
            for (int k = 0; k < st.hidden; ++k) {
                const double act = std::max(z[k], 0.0);
                if (act == 0.0) continue;
                const double* wk = st.w2[ch][k];
                for (int j = 0; j < st.out_dim; ++j) o[j] += act * wk[j];
            }
        }
    }
    return out;
}

void head_backward(const HeadState& st, const HeadCache& c, const Mat& dout, HeadState& grads,
                   Mat* din) {
    if (din && (din->rows != st.channels || din->cols != st.in_dim))
        *din = Mat(st.channels, st.in_dim);
    for (int ch = 0; ch < st.channels; ++ch) {
        const double* dro = dout[ch];
        if (st.kind == HeadKind::Linear) {
            for (int j = 0; j < st.out_dim; ++j) grads.b1[ch][j] += dro[j];
            const double* x = c.input[ch];
            for (int k = 0; k < st.in_dim; ++k) {
                double* g = grads.w1[ch][k];
                for (int j = 0; j < st.out_dim; ++j) g[j] += x[k] * dro[j];
            }
            if (din) {
                double* dx = (*din)[ch];
                for (int k = 0; k < st.in_dim; ++k) {
                    const double* wk = st.w1[ch][k];
                    double s = 0.0;
                    for (int j = 0; j < st.out_dim; ++j) s += wk[j] * dro[j];
                    dx[k] = s;
                }
            }
        } else {
            const double* z = c.z1[ch];
            Vec dz(st.hidden, 0.0);
            for (int j = 0; j < st.out_dim; ++j) grads.b2[ch][j] += dro[j];
            for (int k = 0; k < st.hidden; ++k) {
                const double act = std::max(z[k], 0.0);
                double* g = grads.w2[ch][k];
                const double* wk = st.w2[ch][k];
                double s = 0.0;
                for (int j = 0; j < st.out_dim; ++j) {
                    g[j] += act * dro[j];
                    s += wk[j] * dro[j];
                }
                dz[k] = z[k] > 0.0 ? s : 0.0;
            }
            for (int j = 0; j < st.hidden; ++j) grads.b1[ch][j] += dz[j];
            const double* x = c.input[ch];
            for (int k = 0; k < st.in_dim; ++k) {
                double* g = grads.w1[ch][k];
                for (int j = 0; j < st.hidden; ++j) g[j] += x[k] * dz[j];
            }
            if (din) {
                double* dx = (*din)[ch];
                for (int k = 0; k < st.in_dim; ++k) {
                    const double* wk = st.w1[ch][k];
                    double s = 0.0;
                    for (int j = 0; j < st.hidden; ++j) s += wk[j] * dz[j];
                    dx[k] = s;
                }
            }
        }
    }
}

}  // namespace bge
