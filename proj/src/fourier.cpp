#include "lceit/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lceit/errors.hpp"
#include "lceit/model.hpp"

namespace lceit {

namespace {

double uniform_step(std::span<const double> times) {
    if (times.size() < 2) throw DomainError("fourier_component: need at least two samples");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw DomainError("fourier_component: times must be increasing");
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if (std::abs(step - dt) > 1e-6 * dt) {
            throw DomainError("fourier_component: non-uniform sampling at index " + std::to_string(k));
        }
    }
    return dt;
}

template <class T>
cplx component(std::span<const T> samples, std::span<const double> times, double freq_mhz) {
    if (samples.size() != times.size()) throw DimensionError("fourier_component: samples/times length mismatch");
    const double dt = uniform_step(times);
    const double span = dt * static_cast<double>(times.size());
    if (freq_mhz != 0.0 && span * std::abs(freq_mhz) < 1.0 - 1e-9) {
        throw DomainError("fourier_component: window shorter than one period of the extraction frequency");
    }
    const double w = kTwoPi * freq_mhz;
    // Phase recurrence with periodic re-anchoring keeps the rotation exact to rounding.
    cplx acc{};
    const cplx step = std::polar(1.0, w * dt);
    cplx rot{};
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k % 256 == 0) {
            rot = std::polar(1.0, w * times[k]);
        }
        acc += cplx(samples[k]) * rot;
        rot *= step;
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace

cplx fourier_component(std::span<const cplx> samples, std::span<const double> times, double freq_mhz) {
    return component(samples, times, freq_mhz);
}

cplx fourier_component(std::span<const double> samples, std::span<const double> times, double freq_mhz) {
    return component(samples, times, freq_mhz);
}

WindowChoice analysis_window(std::span<const double> base_freqs_mhz, double min_window, double max_window) {
    std::vector<double> f;
    for (double v : base_freqs_mhz) {
        if (std::abs(v) > 1e-12) f.push_back(std::abs(v));
    }
    if (f.empty()) return {min_window, true};

    // Candidates are whole periods of the reference (lowest) frequency.
    const double ref = *std::min_element(f.begin(), f.end());
    const double period = 1.0 / ref;
    const auto max_k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(max_window / period + 1e-9)));
    double best_t = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= max_k; ++k) {
        const double t = static_cast<double>(k) * period;
        double err = 0.0;
        for (double x : f) err = std::max(err, std::abs(x * t - std::round(x * t)));
        if (err <= 1e-7) {
            const double reps = std::ceil(min_window / t - 1e-9);
            return {t * std::max(1.0, reps), true};
        }
        if (t >= min_window - 1e-12 && err < best_err) {
            best_err = err;
            best_t = t;
        }
    }
    if (best_t == 0.0) best_t = std::ceil(min_window / period - 1e-9) * period;
    return {best_t, false};
}

}  // namespace lceit
