#pragma once

#include <span>
#include <vector>

#include "bge/core.hpp"
#include "bge/ops.hpp"
#include "bge/tensor.hpp"

namespace bge {

// Half-spectrum of a real length-N signal: modes k = 0..floor(N/2).
inline int half_modes(int n_time) { return n_time / 2 + 1; }

struct Spectrum {
    std::vector<cplx> values;  // length half_modes(n_time)
    int n_time = 0;
    double fs = 1.0;
    int modes() const { return static_cast<int>(values.size()); }
};

// Forward DFT, unnormalized: S_k = sum_n x_n exp(-2*pi*i*k*n/N), k <= N/2.
Spectrum dft(std::span<const double> x, double fs);

// Inverse with Hermitian extension; output is real for any complex input
// (imaginary parts of the DC and Nyquist modes do not contribute).
std::vector<double> idft(const Spectrum& s);

// Row primitives shared by the batched kernels. `out` sizes: dft_row writes
// half_modes(n) entries; idft_row writes n entries.
void dft_row(const double* x, int n, cplx* out);
void idft_row(const cplx* s, int n, double* out);
// Transposes of the two maps above viewed as linear maps between real vectors
// (spectra as interleaved re/im); used by reverse-mode gradients.
void dft_adjoint_row(const cplx* g, int n, double* out);
void idft_adjoint_row(const double* g, int n, cplx* out);

// Diagonal value of coeff*op at mode k for length-n signals sampled at fs.
// Integrate: diag(0, (1/(2*pi*fs)) * N/(i*k)); Derive: diag(2*pi*fs * i*k/N).
cplx operator_mode(OpKind kind, double coeff, int k, int n_time, double fs);

struct FreqOperator {
    OpKind kind = OpKind::Identity;
    double scale = 1.0;
    int n_time = 0;
    double fs = 1.0;
    std::vector<cplx> diagonal;  // length half_modes(n_time)
};

FreqOperator make_operator(OpKind kind, double alpha, int n_time, double fs);

// Applies the operator to a spectrum (mode-wise multiply).
Spectrum apply_operator(const FreqOperator& op, const Spectrum& s);

// Strictly increasing subset of mode indices used by one layer.
struct ModeSelection {
    std::vector<int> indices;
    int count() const { return static_cast<int>(indices.size()); }
};

ModeSelection lowest_modes(int d, int available);
ModeSelection random_modes(int d, int available, uint64_t seed);

// Column gather: result is |V| x d.
CMat sample(const CMat& spec, const ModeSelection& sel);
// Copy of `prev` with the selected columns replaced by `updated`.
CMat pad(const CMat& prev, const CMat& updated, const ModeSelection& sel);

}  // namespace bge
