#include "bge/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace bge {

namespace {

// FFTW plans per length, created once under a lock; execution through the
// new-array interface is thread-safe. FFTW_UNALIGNED lifts the SIMD alignment
// requirement so plans run on arbitrary caller buffers.
struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> re(n);
    std::vector<cplx> sp(half_modes(n));
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(n, re.data(), reinterpret_cast<fftw_complex*>(sp.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(sp.data()), re.data(),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

thread_local std::vector<cplx> tl_spec_scratch;
thread_local std::vector<double> tl_real_scratch;

// Unnormalized Hermitian-extension inverse: out_n = sum over the full N-point
// spectrum implied by s, with im(s_0) and im(s_{N/2}) dropped.
void c2r_unscaled(const cplx* s, int n, double* out) {
    const int k = half_modes(n);
    tl_spec_scratch.assign(s, s + k);
    tl_spec_scratch[0] = {s[0].real(), 0.0};
    if (n % 2 == 0) tl_spec_scratch[k - 1] = {s[k - 1].real(), 0.0};
    fftw_execute_dft_c2r(plans_for(n).c2r,
                         reinterpret_cast<fftw_complex*>(tl_spec_scratch.data()), out);
}

}  // namespace

void dft_row(const double* x, int n, cplx* out) {
    if (n < 2) throw Error("bad-length", "DFT needs at least 2 samples");
    tl_real_scratch.assign(x, x + n);
    fftw_execute_dft_r2c(plans_for(n).r2c, tl_real_scratch.data(),
                         reinterpret_cast<fftw_complex*>(out));
}

void idft_row(const cplx* s, int n, double* out) {
    c2r_unscaled(s, n, out);
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) out[i] *= inv;
}

void dft_adjoint_row(const cplx* g, int n, double* out) {
    // transpose of dft_row: out = c2r_unscaled(g with middle modes halved)
    const int k = half_modes(n);
    std::vector<cplx> h(g, g + k);
    const int last_double = (n % 2 == 0) ? k - 2 : k - 1;
    for (int i = 1; i <= last_double; ++i) h[i] *= 0.5;
    c2r_unscaled(h.data(), n, out);
}

void idft_adjoint_row(const double* g, int n, cplx* out) {
    // transpose of idft_row: out_k = (w_k / N) * dft_row(g)_k
    dft_row(g, n, out);
    const int k = half_modes(n);
    const double inv = 1.0 / n;
    const int last_double = (n % 2 == 0) ? k - 2 : k - 1;
    out[0] *= inv;
    for (int i = 1; i <= last_double; ++i) out[i] *= 2.0 * inv;
    if (n % 2 == 0) out[k - 1] *= inv;
}

Spectrum dft(std::span<const double> x, double fs) {
    Spectrum s;
    s.n_time = static_cast<int>(x.size());
    s.fs = fs;
    s.values.resize(half_modes(s.n_time));
    dft_row(x.data(), s.n_time, s.values.data());
    return s;
}

std::vector<double> idft(const Spectrum& s) {
    std::vector<double> x(s.n_time);
    idft_row(s.values.data(), s.n_time, x.data());
    return x;
}

cplx operator_mode(OpKind kind, double coeff, int k, int n_time, double fs) {
    using std::numbers::pi;
    switch (kind) {
        case OpKind::Identity: return {coeff, 0.0};
        case OpKind::Integrate:
            if (k == 0) return {0.0, 0.0};
            // (1/(2 pi fs)) * N/(i k) = -i * N / (2 pi fs k)
            return {0.0, -coeff * n_time / (2.0 * pi * fs * k)};
        case OpKind::Derive: return {0.0, coeff * 2.0 * pi * fs * k / n_time};
    }
    return {0.0, 0.0};
}

FreqOperator make_operator(OpKind kind, double alpha, int n_time, double fs) {
    if (alpha == 0.0) throw Error("zero-coefficient", "operator coefficient must be nonzero");
    if (n_time < 2) throw Error("bad-length", "operator needs n_time >= 2");
    FreqOperator op;
    op.kind = kind;
    op.scale = alpha;
    op.n_time = n_time;
    op.fs = fs;
    op.diagonal.resize(half_modes(n_time));
    for (int k = 0; k < half_modes(n_time); ++k)
        op.diagonal[k] = operator_mode(kind, alpha, k, n_time, fs);
    return op;
}

Spectrum apply_operator(const FreqOperator& op, const Spectrum& s) {
    if (op.n_time != s.n_time)
        throw Error("shape-mismatch", "operator and spectrum lengths differ");
    Spectrum out = s;
    for (size_t k = 0; k < out.values.size(); ++k) out.values[k] *= op.diagonal[k];
    return out;
}

ModeSelection lowest_modes(int d, int available) {
    if (d < 1 || d > available)
        throw Error("bad-modes", "mode count " + std::to_string(d) + " outside 1.." +
                                     std::to_string(available));
    ModeSelection sel;
    sel.indices.resize(d);
    for (int i = 0; i < d; ++i) sel.indices[i] = i;
    return sel;
}

ModeSelection random_modes(int d, int available, uint64_t seed) {
    if (d < 1 || d > available)
        throw Error("bad-modes", "mode count " + std::to_string(d) + " outside 1.." +
                                     std::to_string(available));
    std::vector<int> all(available);
    for (int i = 0; i < available; ++i) all[i] = i;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < d; ++i) {
        std::uniform_int_distribution<int> pick(i, available - 1);
        std::swap(all[i], all[pick(rng)]);
    }
    ModeSelection sel;
    sel.indices.assign(all.begin(), all.begin() + d);
    std::sort(sel.indices.begin(), sel.indices.end());
    return sel;
}

CMat sample(const CMat& spec, const ModeSelection& sel) {
    for (int idx : sel.indices)
        if (idx < 0 || idx >= spec.cols)
            throw Error("mode-out-of-range",
                        "mode index " + std::to_string(idx) + " outside spectrum of width " +
                            std::to_string(spec.cols));
    CMat out(spec.rows, sel.count());
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < sel.count(); ++c) out[r][c] = spec[r][sel.indices[c]];
    return out;
}

CMat pad(const CMat& prev, const CMat& updated, const ModeSelection& sel) {
    if (updated.rows != prev.rows || updated.cols != sel.count())
        throw Error("shape-mismatch", "pad: updated matrix does not match selection");
    for (int idx : sel.indices)
        if (idx < 0 || idx >= prev.cols)
            throw Error("mode-out-of-range",
                        "mode index " + std::to_string(idx) + " outside spectrum of width " +
                            std::to_string(prev.cols));
    CMat out = prev;
    for (int r = 0; r < prev.rows; ++r)
        for (int c = 0; c < sel.count(); ++c) out[r][sel.indices[c]] = updated[r][c];
    return out;
}

}  // namespace bge
