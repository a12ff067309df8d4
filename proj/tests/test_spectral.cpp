#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "bge/kernels.hpp"
#include "bge/spectral.hpp"
#include "helpers.hpp"

using namespace bge;
using std::numbers::pi;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// real inner product treating a spectrum as interleaved re/im coordinates
double dot_spec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("constant signal is DC only") {
    const std::vector<double> x{1, 1, 1, 1};
    const Spectrum s = dft(x, 1.0);
    REQUIRE(s.modes() == 3);
    CHECK(std::abs(s.values[0] - cplx{4.0, 0.0}) < 1e-12);
    CHECK(std::abs(s.values[1]) < 1e-12);
    CHECK(std::abs(s.values[2]) < 1e-12);
    CHECK(max_abs_diff(idft(s), x) < 1e-12);
}

TEST_CASE("pure tone lands on a single mode") {
    const int n = 16;
    std::vector<double> x(n);
    for (int t = 0; t < n; ++t) x[t] = std::cos(2.0 * pi * t / n);
    const Spectrum s = dft(x, 1.0);
    for (int k = 0; k < s.modes(); ++k) {
        if (k == 1)
            CHECK(std::abs(s.values[k] - cplx{n / 2.0, 0.0}) < 1e-9);
        else
            CHECK(std::abs(s.values[k]) < 1e-9);
    }
    CHECK(max_abs_diff(idft(s), x) < 1e-12);
}

TEST_CASE("dft matches the direct-sum oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n : {2, 3, 4, 7, 12, 100, 101, 600}) {
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        const Spectrum s = dft(x, 1.0);
        CHECK(max_abs_diff(s.values, test::naive_dft(x)) < 1e-9);
        CHECK(max_abs_diff(idft(s), x) < 1e-9);
    }
}

TEST_CASE("idft handles arbitrary complex spectra like the oracle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {4, 5, 10, 33}) {
        std::vector<cplx> s(half_modes(n));
        for (auto& v : s) v = {u(rng), u(rng)};  // DC/Nyquist imag deliberately nonzero
        Spectrum sp;
        sp.values = s;
        sp.n_time = n;
        sp.fs = 1.0;
        CHECK(max_abs_diff(idft(sp), test::naive_idft(s, n)) < 1e-12);
    }
}

TEST_CASE("rejects signals shorter than 2 samples") {
    CHECK_THROWS_AS(dft(std::vector<double>{1.0}, 1.0), Error);
}

TEST_CASE("integration operator diagonal values") {
    const FreqOperator op = make_operator(OpKind::Integrate, 1.0, 4, 1.0);
    REQUIRE(op.diagonal.size() == 3);
    CHECK(std::abs(op.diagonal[0]) == 0.0);
    CHECK(op.diagonal[1].real() == 0.0);
    CHECK(op.diagonal[1].imag() == doctest::Approx(-4.0 / (2.0 * pi)).epsilon(1e-12));
    CHECK(op.diagonal[2].imag() == doctest::Approx(-4.0 / (4.0 * pi)).epsilon(1e-12));
}

TEST_CASE("derivation operator diagonal values") {
    const FreqOperator op = make_operator(OpKind::Derive, 1.0, 4, 1.0);
    REQUIRE(op.diagonal.size() == 3);
    CHECK(std::abs(op.diagonal[0]) == 0.0);
    CHECK(op.diagonal[1].real() == 0.0);
    CHECK(op.diagonal[1].imag() == doctest::Approx(pi / 2.0).epsilon(1e-12));
    CHECK(op.diagonal[2].imag() == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("derive after integrate is the identity off DC") {
    for (int n : {4, 9, 64, 600}) {
        const FreqOperator integ = make_operator(OpKind::Integrate, 1.0, n, 100.0);
        const FreqOperator deriv = make_operator(OpKind::Derive, 1.0, n, 100.0);
        for (int k = 1; k < half_modes(n); ++k)
            CHECK(std::abs(integ.diagonal[k] * deriv.diagonal[k] - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(integ.diagonal[0] * deriv.diagonal[0]) == 0.0);
    }
}

TEST_CASE("zero coefficient is rejected") {
    CHECK_THROWS_AS(make_operator(OpKind::Integrate, 0.0, 8, 1.0), Error);
}

TEST_CASE("operators are linear and scale with the coefficient") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 32;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    const FreqOperator op = make_operator(OpKind::Integrate, 2.5, n, 10.0);
    const Spectrum sx = dft(x, 10.0), sy = dft(y, 10.0);
    std::vector<double> xy(n);
    for (int i = 0; i < n; ++i) xy[i] = 3.0 * x[i] - 2.0 * y[i];
    const std::vector<double> lhs = idft(apply_operator(op, dft(xy, 10.0)));
    const std::vector<double> ax = idft(apply_operator(op, sx));
    const std::vector<double> ay = idft(apply_operator(op, sy));
    for (int i = 0; i < n; ++i)
        CHECK(lhs[i] == doctest::Approx(3.0 * ax[i] - 2.0 * ay[i]).epsilon(1e-9));

    const FreqOperator unit = make_operator(OpKind::Integrate, 1.0, n, 10.0);
    for (int k = 0; k < half_modes(n); ++k)
        CHECK(std::abs(op.diagonal[k] - 2.5 * unit.diagonal[k]) < 1e-12);
}

TEST_CASE("parseval identity") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {8, 17, 100}) {
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        const Spectrum s = dft(x, 1.0);
        double time_energy = 0.0;
        for (double v : x) time_energy += v * v;
        double freq_energy = std::norm(s.values[0]);
        const int last_double = (n % 2 == 0) ? s.modes() - 2 : s.modes() - 1;
        for (int k = 1; k <= last_double; ++k) freq_energy += 2.0 * std::norm(s.values[k]);
        if (n % 2 == 0) freq_energy += std::norm(s.values[s.modes() - 1]);
        CHECK(test::rel_err(freq_energy / n, time_energy) < 1e-9);
    }
}

TEST_CASE("spectral integration tracks the trapezoidal cumulative integral") {
    // band-limited signal (harmonics <= N/8), mean-removed comparison
    const int n = 256;
    const double fs = 64.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * pi);
    std::vector<double> f(n, 0.0);
    for (int h = 1; h <= n / 8; h += 3) {
        const double a = amp(rng), p = phase(rng);
        for (int t = 0; t < n; ++t) f[t] += a * std::cos(2.0 * pi * h * t / n + p);
    }
    const FreqOperator integ = make_operator(OpKind::Integrate, 1.0, n, fs);
    const std::vector<double> spectral = idft(apply_operator(integ, dft(f, fs)));

    std::vector<double> trap(n, 0.0);
    for (int t = 1; t < n; ++t) trap[t] = trap[t - 1] + 0.5 * (f[t - 1] + f[t]) / fs;
    double mean = 0.0;
    for (double v : trap) mean += v;
    mean /= n;

    double err2 = 0.0, sig2 = 0.0;
    for (int t = 0; t < n; ++t) {
        const double r = spectral[t] - (trap[t] - mean);
        err2 += r * r;
        sig2 += (trap[t] - mean) * (trap[t] - mean);
    }
    CHECK(std::sqrt(err2) < 0.02 * std::sqrt(sig2));
}

TEST_CASE("mode selection") {
    CHECK(lowest_modes(3, 5).indices == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(lowest_modes(6, 5), Error);
    CHECK_THROWS_AS(lowest_modes(0, 5), Error);
    const ModeSelection r1 = random_modes(4, 10, 99);
    const ModeSelection r2 = random_modes(4, 10, 99);
    CHECK(r1.indices == r2.indices);
    CHECK(std::is_sorted(r1.indices.begin(), r1.indices.end()));
    for (size_t i = 1; i < r1.indices.size(); ++i) CHECK(r1.indices[i] != r1.indices[i - 1]);
    CHECK(random_modes(10, 10, 1).indices == lowest_modes(10, 10).indices);
}

TEST_CASE("sample gathers columns, pad scatters them back") {
    std::mt19937_64 rng(8);
    CMat spec(3, 7);
    for (auto& v : spec.a)
        v = {std::uniform_real_distribution<double>(-1, 1)(rng),
             std::uniform_real_distribution<double>(-1, 1)(rng)};

    SUBCASE("all modes is the identity") {
        ModeSelection all = lowest_modes(7, 7);
        const CMat s = sample(spec, all);
        for (size_t i = 0; i < spec.size(); ++i) CHECK(s.a[i] == spec.a[i]);
        CMat updated = s;
        for (auto& v : updated.a) v *= 2.0;
        const CMat p = pad(spec, updated, all);
        for (size_t i = 0; i < spec.size(); ++i) CHECK(p.a[i] == updated.a[i]);
    }
    SUBCASE("DC-only selection on a constant-signal spectrum") {
        const std::vector<double> x{2, 2, 2, 2};
        const Spectrum s = dft(x, 1.0);
        CMat m(1, s.modes());
        for (int k = 0; k < s.modes(); ++k) m[0][k] = s.values[k];
        ModeSelection dc;
        dc.indices = {0};
        const CMat picked = sample(m, dc);
        CHECK(picked.cols == 1);
        CHECK(std::abs(picked[0][0] - cplx{8.0, 0.0}) < 1e-12);
    }
    SUBCASE("partial selection matches the index oracle") {
        ModeSelection sel;
        sel.indices = {1, 3, 6};
        const CMat s = sample(spec, sel);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) CHECK(s[r][c] == spec[r][sel.indices[c]]);
        CMat updated(3, 3);
        for (auto& v : updated.a) v = {1.0, -1.0};
        const CMat p = pad(spec, updated, sel);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 7; ++c) {
                const bool selected = c == 1 || c == 3 || c == 6;
                CHECK(p[r][c] == (selected ? cplx{1.0, -1.0} : spec[r][c]));
            }
    }
    SUBCASE("out-of-range and shape errors") {
        ModeSelection bad;
        bad.indices = {7};
        CHECK_THROWS_AS(sample(spec, bad), Error);
        ModeSelection sel;
        sel.indices = {0, 1};
        CMat wrong(3, 3);
        CHECK_THROWS_AS(pad(spec, wrong, sel), Error);
    }
}

TEST_CASE("transform adjoints satisfy the inner-product identity") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {4, 5, 12, 31}) {
        const int k = half_modes(n);
        std::vector<double> x(n), y(n);
        std::vector<cplx> g(k), s(k);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        for (auto& v : g) v = {u(rng), u(rng)};
        for (auto& v : s) v = {u(rng), u(rng)};

        // <dft(x), g> == <x, dft^T(g)>
        std::vector<cplx> fx(k);
        dft_row(x.data(), n, fx.data());
        std::vector<double> adj_g(n);
        dft_adjoint_row(g.data(), n, adj_g.data());
        CHECK(test::rel_err(dot_spec(fx, g), dot_vec(x, adj_g)) < 1e-9);

        // <idft(s), y> == <s, idft^T(y)>
        Spectrum sp;
        sp.values = s;
        sp.n_time = n;
        const std::vector<double> is = idft(sp);
        std::vector<cplx> adj_y(k);
        idft_adjoint_row(y.data(), n, adj_y.data());
        CHECK(test::rel_err(dot_vec(is, y), dot_spec(s, adj_y)) < 1e-9);
    }
}

TEST_CASE("row kernels agree between serial and parallel exactly") {
    std::mt19937_64 rng(10);
    const Mat in = test::random_mat(9, 100, rng);
    CMat spec_s, spec_p;
    dft_rows(in, spec_s, Exec::Serial);
    dft_rows(in, spec_p, Exec::Parallel);
    REQUIRE(spec_s.size() == spec_p.size());
    for (size_t i = 0; i < spec_s.size(); ++i) CHECK(spec_s.a[i] == spec_p.a[i]);

    Mat back_s, back_p;
    idft_rows(spec_s, 100, back_s, Exec::Serial);
    idft_rows(spec_s, 100, back_p, Exec::Parallel);
    for (size_t i = 0; i < back_s.size(); ++i) CHECK(back_s.a[i] == back_p.a[i]);

    Mat adj_s, adj_p;
    dft_adjoint_rows(spec_s, 100, adj_s, Exec::Serial);
    dft_adjoint_rows(spec_s, 100, adj_p, Exec::Parallel);
    for (size_t i = 0; i < adj_s.size(); ++i) CHECK(adj_s.a[i] == adj_p.a[i]);

    CMat ia_s, ia_p;
    idft_adjoint_rows(in, ia_s, Exec::Serial);
    idft_adjoint_rows(in, ia_p, Exec::Parallel);
    for (size_t i = 0; i < ia_s.size(); ++i) CHECK(ia_s.a[i] == ia_p.a[i]);
}
