#include "bge/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace bge {

namespace {

void check_params(const MotorParams& p) {
    if (p.r1 <= 0 || p.l1 <= 0 || p.kphi <= 0 || p.j1 <= 0 || p.ff <= 0)
        throw Error("bad-params", "motor parameters must all be positive");
}

struct State {
    double i, w;
};

State deriv(const MotorParams& p, const State& x, double u) {
    return {(u - p.r1 * x.i - p.kphi * x.w) / p.l1, (p.kphi * x.i - p.ff * x.w) / p.j1};
}

State rk4_step(const MotorParams& p, const State& x, double h, double u0, double u_half,
               double u1) {
    const State k1 = deriv(p, x, u0);
    const State k2 = deriv(p, {x.i + 0.5 * h * k1.i, x.w + 0.5 * h * k1.w}, u_half);
    const State k3 = deriv(p, {x.i + 0.5 * h * k2.i, x.w + 0.5 * h * k2.w}, u_half);
    const State k4 = deriv(p, {x.i + h * k3.i, x.w + h * k3.w}, u1);
    return {x.i + h / 6.0 * (k1.i + 2 * k2.i + 2 * k3.i + k4.i),
            x.w + h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w)};
}

void check_finite(const State& x, int step) {
    if (!std::isfinite(x.i) || !std::isfinite(x.w))
        throw Error("diverged", "non-finite state at step " + std::to_string(step) +
                                    "; use a smaller step (higher fs)");
}

long sample_count(double fs, double duration) {
    if (fs <= 0 || duration <= 0) throw Error("bad-params", "fs and duration must be positive");
    return std::lround(duration * fs) + 1;
}

}  // namespace

Vec sample_excitation(const ExcitationSpec& exc, double fs, double duration, uint64_t seed) {
    if (exc.freq_min <= 0 || exc.freq_max < exc.freq_min)
        throw Error("bad-params", "excitation frequency range is invalid");
    const long n = sample_count(fs, duration);
    std::mt19937_64 sweep_rng(seed);
    std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> log_period(std::log(1.0 / exc.freq_max),
                                                      std::log(1.0 / exc.freq_min));
    std::uniform_real_distribution<double> duty(exc.duty_min, exc.duty_max);
    std::uniform_real_distribution<double> noise(exc.noise_min, exc.noise_max);

    Vec u(n);
    double seg_period = std::exp(log_period(sweep_rng)), seg_duty = duty(sweep_rng);
    double factor = noise(noise_rng);
    long sweep_block = 0, noise_block = 0;
    for (long k = 0; k < n; ++k) {
        const double t = k / fs;
        const long sblock = static_cast<long>(std::floor(t / exc.sweep_hold));
        while (sweep_block < sblock) {
            seg_period = std::exp(log_period(sweep_rng));
            seg_duty = duty(sweep_rng);
            ++sweep_block;
        }
        const long block = static_cast<long>(std::floor(t / exc.noise_period));
        while (noise_block < block) {
            factor = noise(noise_rng);
            ++noise_block;
        }
        // phase restarts at each sweep segment boundary
        const double phase = std::fmod(t - sblock * exc.sweep_hold, seg_period);
        const bool on = phase < seg_duty * seg_period;
        u[k] = on ? exc.amplitude * factor : 0.0;
    }
    return u;
}

SimResult simulate(const MotorParams& p, const ExcitationSpec& exc, double fs, double duration,
                   uint64_t seed) {
    check_params(p);
    const long n = sample_count(fs, duration);
    SimResult out;
    out.fs = fs;
    out.u = sample_excitation(exc, fs, duration, seed);
    out.t.resize(n);
    out.omega.resize(n);
    out.current.resize(n);
    const double h = 1.0 / fs;
    State x{0.0, 0.0};
    for (long k = 0; k < n; ++k) {
        out.t[k] = k / fs;
        out.current[k] = x.i;
        out.omega[k] = x.w;
        if (k + 1 < n) {
            // voltage is a zero-order hold: constant over the step
            x = rk4_step(p, x, h, out.u[k], out.u[k], out.u[k]);
            check_finite(x, static_cast<int>(k) + 1);
        }
    }
    return out;
}

SimResult simulate_voltage(const MotorParams& p, const std::function<double(double)>& u,
                           double fs, double duration) {
    check_params(p);
    const long n = sample_count(fs, duration);
    SimResult out;
    out.fs = fs;
    out.t.resize(n);
    out.u.resize(n);
    out.omega.resize(n);
    out.current.resize(n);
    const double h = 1.0 / fs;
    State x{0.0, 0.0};
    for (long k = 0; k < n; ++k) {
        const double t = k / fs;
        out.t[k] = t;
        out.u[k] = u(t);
        out.current[k] = x.i;
        out.omega[k] = x.w;
        if (k + 1 < n) {
            x = rk4_step(p, x, h, u(t), u(t + 0.5 * h), u(t + h));
            check_finite(x, static_cast<int>(k) + 1);
        }
    }
    return out;
}

void write_sim_csv(const std::string& path, const SimResult& sim) {
    std::ofstream f(path);
    if (!f) throw Error("io-error", "cannot open " + path + " for writing");
    f << "t,U,omega\n";
    char buf[128];
    for (size_t k = 0; k < sim.t.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", sim.t[k], sim.u[k], sim.omega[k]);
        f << buf;
    }
}

SeriesTable read_series_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("io-error", "cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw Error("bad-csv", path + ": empty file");
    SeriesTable tab;
    {
        std::istringstream hs(line);
        std::string cell;
        bool first = true;
        while (std::getline(hs, cell, ',')) {
            if (first && cell != "t")
                throw Error("bad-csv", path + ": first column must be 't'");
            if (!first) tab.names.push_back(cell);
            first = false;
        }
    }
    if (tab.names.empty()) throw Error("bad-csv", path + ": no data channels");
    std::vector<double> times;
    std::vector<Vec> rows;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        Vec row;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw Error("bad-csv", path + ":" + std::to_string(lineno) + ": bad number '" +
                                           cell + "'");
            }
        }
        if (row.size() != tab.names.size() + 1)
            throw Error("bad-csv", path + ":" + std::to_string(lineno) + ": expected " +
                                       std::to_string(tab.names.size() + 1) + " cells");
        times.push_back(row[0]);
        row.erase(row.begin());
        rows.push_back(std::move(row));
    }
    if (times.size() < 2) throw Error("bad-csv", path + ": need at least 2 samples");
    const double dt = times[1] - times[0];
    if (dt <= 0) throw Error("bad-csv", path + ": time must increase");
    for (size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - times[k - 1] - dt) > 1e-6 * std::max(1.0, std::abs(dt)))
            throw Error("bad-csv", path + ": samples must be equally spaced");
    tab.fs = 1.0 / dt;
    tab.data = Mat(static_cast<int>(rows.size()), static_cast<int>(tab.names.size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            tab.data.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return tab;
}

SeriesTable to_series(const SimResult& sim) {
    SeriesTable tab;
    tab.fs = sim.fs;
    tab.names = {"U", "omega"};
    tab.data = Mat(static_cast<int>(sim.t.size()), 2);
    for (size_t k = 0; k < sim.t.size(); ++k) {
        tab.data.at(static_cast<int>(k), 0) = sim.u[k];
        tab.data.at(static_cast<int>(k), 1) = sim.omega[k];
    }
    return tab;
}

}  // namespace bge
