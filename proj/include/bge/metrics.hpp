#pragma once

#include "bge/tensor.hpp"

namespace bge {

// Mean-reduced Huber loss: 0.5 r^2 for |r| <= delta, delta(|r| - delta/2)
// otherwise.
double huber_loss(const Mat& pred, const Mat& target, double delta);
// d(loss)/d(pred), same reduction.
Mat huber_grad(const Mat& pred, const Mat& target, double delta);

double mae(const Mat& pred, const Mat& target);
double mse(const Mat& pred, const Mat& target);

// Soft dynamic time warping between two multivariate series (rows = time,
// cols = dimensions), squared-Euclidean point cost, soft-min recursion.
double soft_dtw(const Mat& a, const Mat& b, double gamma);

// Divergence normalization sdtw(a,b) - (sdtw(a,a)+sdtw(b,b))/2; zero on
// identical series. length_norm additionally divides by (len(a)+len(b)).
double soft_dtw_divergence(const Mat& a, const Mat& b, double gamma, bool length_norm = false);

}  // namespace bge
