#include "bge/metrics.hpp"

#include <cmath>
#include <limits>

#include "bge/core.hpp"

namespace bge {

namespace {

void check_shapes(const Mat& pred, const Mat& target) {
    if (pred.rows != target.rows || pred.cols != target.cols)
        throw Error("shape-mismatch", "prediction and target shapes differ");
    if (pred.size() == 0) throw Error("empty-input", "empty series");
}

}  // namespace

double huber_loss(const Mat& pred, const Mat& target, double delta) {
    check_shapes(pred, target);
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double r = std::abs(pred.a[i] - target.a[i]);
        sum += r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
    }
    return sum / static_cast<double>(pred.size());
}

Mat huber_grad(const Mat& pred, const Mat& target, double delta) {
    check_shapes(pred, target);
    Mat g(pred.rows, pred.cols);
    const double inv = 1.0 / static_cast<double>(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) {
        const double r = pred.a[i] - target.a[i];
        g.a[i] = (std::abs(r) <= delta ? r : delta * (r > 0.0 ? 1.0 : -1.0)) * inv;
    }
    return g;
}

double mae(const Mat& pred, const Mat& target) {
    check_shapes(pred, target);
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred.a[i] - target.a[i]);
    return sum / static_cast<double>(pred.size());
}

double mse(const Mat& pred, const Mat& target) {
    check_shapes(pred, target);
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double r = pred.a[i] - target.a[i];
        sum += r * r;
    }
    return sum / static_cast<double>(pred.size());
}

namespace {

double softmin3(double a, double b, double c, double gamma) {
    const double m = std::min(a, std::min(b, c));
    if (!std::isfinite(m)) return m;
    const double s = std::exp(-(a - m) / gamma) + std::exp(-(b - m) / gamma) +
                     std::exp(-(c - m) / gamma);
    return m - gamma * std::log(s);
}

double point_cost(const Mat& a, int i, const Mat& b, int j) {
    double s = 0.0;
    for (int d = 0; d < a.cols; ++d) {
        const double r = a.at(i, d) - b.at(j, d);
        s += r * r;
    }
    return s;
}

}  // namespace

double soft_dtw(const Mat& a, const Mat& b, double gamma) {
    if (a.rows == 0 || b.rows == 0) throw Error("empty-input", "soft-DTW needs non-empty series");
    if (a.cols != b.cols) throw Error("shape-mismatch", "series dimensionalities differ");
    if (gamma <= 0.0) throw Error("bad-gamma", "gamma must be positive");
    const int n = a.rows, m = b.rows;
    const double inf = std::numeric_limits<double>::infinity();
    // r has a border of infinities except r(0,0) = 0
    Mat r(n + 1, m + 1);
    for (int j = 0; j <= m; ++j) r.at(0, j) = inf;
    for (int i = 0; i <= n; ++i) r.at(i, 0) = inf;
    r.at(0, 0) = 0.0;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= m; ++j)
            r.at(i, j) = point_cost(a, i - 1, b, j - 1) +
                         softmin3(r.at(i - 1, j), r.at(i, j - 1), r.at(i - 1, j - 1), gamma);
    return r.at(n, m);
}

double soft_dtw_divergence(const Mat& a, const Mat& b, double gamma, bool length_norm) {
    const double d =
        soft_dtw(a, b, gamma) - 0.5 * (soft_dtw(a, a, gamma) + soft_dtw(b, b, gamma));
    return length_norm ? d / static_cast<double>(a.rows + b.rows) : d;
}

}  // namespace bge
