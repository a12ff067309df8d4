#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bge/core.hpp"
#include "bge/tensor.hpp"

namespace bge::test {

// ---------------------------------------------------------------------------
// Bond graph corpus. dc_motor matches data/dc_motor.bgdsl; the synthetic
// graphs cover every component kind and both 2-port stroke patterns.
// ---------------------------------------------------------------------------

inline const char* dc_motor_dsl() {
    return R"(component SE 1
component J1 1
component R 1 coeff=5.0
component I 1 coeff=0.1
component GY 1 coeff=0.1
component J1 2
component I 2 coeff=0.01
component R 2 coeff=0.001
bond 1 SE1 -> J11 stroke=head
bond 2 J11 -> I1 stroke=head
bond 3 J11 -> R1 stroke=tail
bond 4 J11 -> GY1 stroke=tail
bond 5 GY1 -> J12 stroke=head
bond 6 J12 -> I2 stroke=head
bond 7 J12 -> R2 stroke=tail
)";
}

// flow source into a 0-junction with a capacitor (strong) and a resistor
inline const char* sf_j0_dsl() {
    return R"(component SF 1
component J0 1
component C 1 coeff=2.0
component R 1 coeff=0.5
bond 1 SF1 -> J01 stroke=tail
bond 2 J01 -> C1 stroke=tail
bond 3 J01 -> R1 stroke=head
)";
}

// transformer linking an effort-driven 1-junction to a 0-junction
inline const char* tf_chain_dsl() {
    return R"(component SE 1
component J1 1
component R 1 coeff=5.0
component TF 1 coeff=2.0
component J0 1
component C 1 coeff=0.5
component R 2 coeff=1.5
bond 1 SE1 -> J11 stroke=head
bond 2 J11 -> R1 stroke=head
bond 3 J11 -> TF1 stroke=tail
bond 4 TF1 -> J01 stroke=tail
bond 5 J01 -> C1 stroke=tail
bond 6 J01 -> R2 stroke=head
)";
}

// flow-source-driven gyrator stage into an inertial 1-junction
inline const char* sf_gy_dsl() {
    return R"(component SF 1
component J1 1
component R 1 coeff=2.0
component GY 1 coeff=0.5
component J1 2
component I 1 coeff=0.25
component R 2 coeff=1.0
bond 1 SF1 -> J11 stroke=tail
bond 2 J11 -> R1 stroke=tail
bond 3 J11 -> GY1 stroke=tail
bond 4 GY1 -> J12 stroke=head
bond 5 J12 -> I1 stroke=head
bond 6 J12 -> R2 stroke=tail
)";
}

// mixed sources with a junction-junction bond
inline const char* mixed_j0j1_dsl() {
    return R"(component SE 1
component J1 1
component I 1 coeff=0.3
component C 1 coeff=0.7
component J0 1
component SF 1
component R 1 coeff=4.0
bond 1 SE1 -> J11 stroke=head
bond 2 J11 -> I1 stroke=head
bond 3 J11 -> C1 stroke=tail
bond 4 J01 -> J11 stroke=head
bond 5 SF1 -> J01 stroke=tail
bond 6 J01 -> R1 stroke=tail
)";
}

inline std::vector<const char*> corpus() {
    return {dc_motor_dsl(), sf_j0_dsl(), tf_chain_dsl(), sf_gy_dsl(), mixed_j0j1_dsl()};
}

// ---------------------------------------------------------------------------
// Independent oracles (deliberately naive; no bge::spectral internals).
// ---------------------------------------------------------------------------

// O(N^2) direct-sum half-spectrum DFT.
inline std::vector<cplx> naive_dft(const std::vector<double>& x) {
    using std::numbers::pi;
    const int n = static_cast<int>(x.size());
    std::vector<cplx> out(n / 2 + 1);
    for (int k = 0; k < n / 2 + 1; ++k) {
        cplx s{0.0, 0.0};
        for (int t = 0; t < n; ++t) {
            const double ang = -2.0 * pi * k * t / n;
            s += x[t] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[k] = s;
    }
    return out;
}

// Hermitian-extension inverse with DC/Nyquist imaginary parts dropped.
inline std::vector<double> naive_idft(const std::vector<cplx>& half, int n) {
    using std::numbers::pi;
    std::vector<cplx> full(n);
    for (int k = 0; k < n; ++k) {
        if (k < static_cast<int>(half.size())) {
            cplx v = half[k];
            if (k == 0 || (n % 2 == 0 && k == n / 2)) v = {v.real(), 0.0};
            full[k] = v;
        } else {
            cplx v = half[n - k];
            if (n - k == 0 || (n % 2 == 0 && n - k == n / 2)) v = {v.real(), 0.0};
            full[k] = std::conj(v);
        }
    }
    std::vector<double> out(n);
    for (int t = 0; t < n; ++t) {
        cplx s{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            const double ang = 2.0 * pi * k * t / n;
            s += full[k] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[t] = s.real() / n;
    }
    return out;
}

// Exhaustive DTW over every monotone warping path (squared-Euclidean cost).
inline double brute_force_dtw(const Mat& a, const Mat& b) {
    const int n = a.rows, m = b.rows;
    auto cost = [&](int i, int j) {
        double s = 0.0;
        for (int d = 0; d < a.cols; ++d) {
            const double r = a.at(i, d) - b.at(j, d);
            s += r * r;
        }
        return s;
    };
    double best = 1e300;
    // recursive path enumeration
    struct Walker {
        int n, m;
        const decltype(cost)& c;
        double best = 1e300;
        void go(int i, int j, double acc) {
            acc += c(i, j);
            if (acc >= best) return;
            if (i == n - 1 && j == m - 1) {
                best = acc;
                return;
            }
            if (i + 1 < n) go(i + 1, j, acc);
            if (j + 1 < m) go(i, j + 1, acc);
            if (i + 1 < n && j + 1 < m) go(i + 1, j + 1, acc);
        }
    } w{n, m, cost};
    w.go(0, 0, 0.0);
    best = w.best;
    return best;
}

inline double rel_err(double got, double want) {
    const double denom = std::max({std::abs(got), std::abs(want), 1e-8});
    return std::abs(got - want) / denom;
}

inline Mat random_mat(int r, int c, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Mat m(r, c);
    for (auto& x : m.a) x = u(rng);
    return m;
}

}  // namespace bge::test
