#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bge/metrics.hpp"
#include "helpers.hpp"

using namespace bge;

namespace {

Mat series(std::initializer_list<double> values) {
    Mat m(static_cast<int>(values.size()), 1);
    int i = 0;
    for (double v : values) m.at(i++, 0) = v;
    return m;
}

}  // namespace

TEST_CASE("huber loss branch arithmetic") {
    Mat zero(3, 2), target(3, 2);
    CHECK(huber_loss(zero, target, 0.1) == 0.0);

    Mat pred(1, 1), tgt(1, 1);
    pred.at(0, 0) = 0.05;
    CHECK(huber_loss(pred, tgt, 0.1) == doctest::Approx(0.00125).epsilon(1e-12));
    pred.at(0, 0) = 1.0;
    CHECK(huber_loss(pred, tgt, 0.1) == doctest::Approx(0.095).epsilon(1e-12));

    CHECK_THROWS_AS(huber_loss(Mat(2, 2), Mat(2, 3), 0.1), Error);
}

TEST_CASE("huber gradient matches central differences across both branches") {
    std::mt19937_64 rng(3);
    Mat pred = test::random_mat(4, 3, rng, -0.5, 0.5);
    const Mat tgt = test::random_mat(4, 3, rng, -0.5, 0.5);
    const Mat g = huber_grad(pred, tgt, 0.1);
    const double eps = 1e-7;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double saved = pred.a[i];
        pred.a[i] = saved + eps;
        const double lp = huber_loss(pred, tgt, 0.1);
        pred.a[i] = saved - eps;
        const double lm = huber_loss(pred, tgt, 0.1);
        pred.a[i] = saved;
        CHECK(test::rel_err(g.a[i], (lp - lm) / (2.0 * eps)) < 1e-5);
    }
}

TEST_CASE("mae is bounded by the root of mse") {
    std::mt19937_64 rng(4);
    for (int iter = 0; iter < 20; ++iter) {
        const Mat a = test::random_mat(5, 4, rng);
        const Mat b = test::random_mat(5, 4, rng);
        CHECK(mae(a, b) <= std::sqrt(mse(a, b)) + 1e-12);
    }
}

TEST_CASE("soft dtw divergence is zero on identical series") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 10; ++iter) {
        const Mat a = test::random_mat(6, 2, rng);
        CHECK(soft_dtw_divergence(a, a, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("soft dtw is symmetric") {
    std::mt19937_64 rng(6);
    for (int iter = 0; iter < 10; ++iter) {
        const Mat a = test::random_mat(5, 3, rng);
        const Mat b = test::random_mat(7, 3, rng);
        CHECK(std::abs(soft_dtw(a, b, 0.1) - soft_dtw(b, a, 0.1)) < 1e-9);
        CHECK(std::abs(soft_dtw_divergence(a, b, 0.1) - soft_dtw_divergence(b, a, 0.1)) < 1e-9);
    }
}

TEST_CASE("small gamma recovers classical dtw on all short integer series") {
    // every pair of series with length <= 4 (wlog length exactly 1..4 crossed)
    // and integer entries in [0, 3]; exhaustive-path oracle
    const double gamma = 1e-4;
    std::vector<Mat> all;
    for (int len = 1; len <= 4; ++len) {
        const int count = 1;
        (void)count;
        std::vector<int> digits(len, 0);
        while (true) {
            Mat m(len, 1);
            for (int i = 0; i < len; ++i) m.at(i, 0) = digits[i];
            all.push_back(m);
            int pos = len - 1;
            while (pos >= 0 && digits[pos] == 3) digits[pos--] = 0;
            if (pos < 0) break;
            ++digits[pos];
        }
    }
    // all = 4 + 16 + 64 + 256 = 340 series; sample pairs densely but keep the
    // suite quick: every pair with len <= 3, plus a slice of the length-4 ones
    std::mt19937_64 rng(7);
    int pairs = 0;
    double min_divergence = 0.0;
    for (size_t i = 0; i < all.size(); ++i) {
        for (size_t j = i; j < all.size(); ++j) {
            if (all[i].rows == 4 && all[j].rows == 4 && ((i * 131 + j) % 23 != 0)) continue;
            const double soft = soft_dtw(all[i], all[j], gamma);
            const double hard = test::brute_force_dtw(all[i], all[j]);
            CHECK(std::abs(soft - hard) < 1e-2);
            min_divergence =
                std::min(min_divergence, soft_dtw_divergence(all[i], all[j], gamma));
            ++pairs;
        }
    }
    CHECK(pairs > 3000);
    CHECK(min_divergence >= -1e-9);
}

TEST_CASE("length normalization divides by the combined length") {
    const Mat a = series({0, 1, 2});
    const Mat b = series({0, 2, 2});
    const double d = soft_dtw_divergence(a, b, 0.1, false);
    const double n = soft_dtw_divergence(a, b, 0.1, true);
    CHECK(n == doctest::Approx(d / 6.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(soft_dtw(Mat(0, 1), Mat(3, 1), 0.1), Error);
    CHECK_THROWS_AS(soft_dtw(Mat(3, 1), Mat(3, 2), 0.1), Error);
    CHECK_THROWS_AS(soft_dtw(series({1, 2}), series({1, 2}), 0.0), Error);
}
