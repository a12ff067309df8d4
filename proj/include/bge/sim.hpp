#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bge/core.hpp"
#include "bge/tensor.hpp"

namespace bge {

// Two-domain DC motor: L1 di/dt = U - R1 i - Kphi w; J1 dw/dt = Kphi i - ff w.
struct MotorParams {
    double r1 = 5.0;     // ohm
    double l1 = 0.1;     // henry
    double kphi = 0.1;   // V s / rad
    double j1 = 0.01;    // kg m^2
    double ff = 0.001;   // N m s / rad
};

// Square source 0 -> amplitude. Frequency (log-uniform over
// [freq_min, freq_max]) and duty cycle are redrawn once per sweep_hold
// seconds and held in between; the whole signal is multiplied by a noise
// factor resampled every noise_period seconds exactly.
struct ExcitationSpec {
    double amplitude = 2.0;
    double freq_min = 0.05, freq_max = 2.0;  // Hz
    double duty_min = 0.2, duty_max = 0.8;
    double sweep_hold = 10.0;
    double noise_period = 10.0;
    double noise_min = 0.8, noise_max = 1.2;
};

struct SimResult {
    double fs = 0.0;
    Vec t, u, omega;
    Vec current;  // kept for energy audits; not part of the dataset channels
};

// Samples the excitation on the fs grid; switch times land on grid points so
// the voltage is constant within each integration step (zero-order hold:
// u[k] is the level held on [t_k, t_{k+1})).
Vec sample_excitation(const ExcitationSpec& exc, double fs, double duration, uint64_t seed);

// RK4 from rest at step 1/fs; deterministic per seed.
SimResult simulate(const MotorParams& p, const ExcitationSpec& exc, double fs, double duration,
                   uint64_t seed);

// Same integrator driven by an arbitrary (possibly smooth) voltage u(t),
// evaluated at the RK4 interior points.
SimResult simulate_voltage(const MotorParams& p, const std::function<double(double)>& u,
                           double fs, double duration);

// CSV with header "t,U,omega", one row per sample.
void write_sim_csv(const std::string& path, const SimResult& sim);

// Generic ingestion format: header "t,<name>,<name>,..."; equally spaced t.
struct SeriesTable {
    double fs = 0.0;
    std::vector<std::string> names;
    Mat data;  // T x D
};

SeriesTable read_series_csv(const std::string& path);
SeriesTable to_series(const SimResult& sim);

}  // namespace bge
