#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace bge {

using cplx = std::complex<double>;

// Dense row-major matrix. Small sizes throughout (nodes x feature width),
// so plain loops beat any BLAS dispatch overhead here.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double* operator[](int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const double* operator[](int r) const { return a.data() + static_cast<size_t>(r) * cols; }
    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return a.size(); }
    void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

struct CMat {
    int rows = 0, cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, cplx{0.0, 0.0}) {}

    cplx* operator[](int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const cplx* operator[](int r) const { return a.data() + static_cast<size_t>(r) * cols; }
    cplx& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    cplx at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return a.size(); }
    void zero() { std::fill(a.begin(), a.end(), cplx{0.0, 0.0}); }
};

using Vec = std::vector<double>;

// out = x * w + b (x: n x k, w: k x m, b broadcast over rows; b may be empty)
inline void affine(const Mat& x, const Mat& w, const Vec& b, Mat& out) {
    assert(x.cols == w.rows);
    if (out.rows != x.rows || out.cols != w.cols) out = Mat(x.rows, w.cols);
    for (int r = 0; r < x.rows; ++r) {
        double* o = out[r];
        for (int c = 0; c < w.cols; ++c) o[c] = b.empty() ? 0.0 : b[c];
        const double* xr = x[r];
        for (int k = 0; k < x.cols; ++k) {
            const double xv = xr[k];
            if (xv == 0.0) continue;
            const double* wk = w[k];
            for (int c = 0; c < w.cols; ++c) o[c] += xv * wk[c];
        }
    }
}

// gw += x^T * d;  gb += column sums of d
inline void affine_backward_params(const Mat& x, const Mat& d, Mat& gw, Vec& gb) {
    assert(gw.rows == x.cols && gw.cols == d.cols);
    for (int r = 0; r < x.rows; ++r) {
        const double* xr = x[r];
        const double* dr = d[r];
        for (int k = 0; k < x.cols; ++k) {
            const double xv = xr[k];
            if (xv == 0.0) continue;
            double* g = gw[k];
            for (int c = 0; c < d.cols; ++c) g[c] += xv * dr[c];
        }
        if (!gb.empty())
            for (int c = 0; c < d.cols; ++c) gb[c] += dr[c];
    }
}

// dx = d * w^T
inline void affine_backward_input(const Mat& d, const Mat& w, Mat& dx) {
    assert(d.cols == w.cols);
    if (dx.rows != d.rows || dx.cols != w.rows) dx = Mat(d.rows, w.rows);
    for (int r = 0; r < d.rows; ++r) {
        const double* dr = d[r];
        double* o = dx[r];
        for (int k = 0; k < w.rows; ++k) {
            const double* wk = w[k];
            double s = 0.0;
            for (int c = 0; c < w.cols; ++c) s += dr[c] * wk[c];
            o[k] = s;
        }
    }
}

}  // namespace bge
