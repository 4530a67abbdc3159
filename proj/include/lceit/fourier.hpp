#pragma once

#include <span>
#include <vector>

#include "lceit/operators.hpp"

namespace lceit {

/// (1/T) sum_k s_k exp(+i 2 pi f t_k) dt over uniformly spaced samples, T = N dt.
/// A pure exp(-i 2 pi f t) signal returns 1. freq in MHz, times in us.
/// Throws DomainError on non-uniform or too-short sampling.
cplx fourier_component(std::span<const cplx> samples, std::span<const double> times, double freq_mhz);

/// Same as fourier_component for real samples.
cplx fourier_component(std::span<const double> samples, std::span<const double> times, double freq_mhz);

/// Analysis window length (us) for a signal whose lines are integer combinations
/// of the given base frequencies (MHz). Candidates are whole periods of the lowest
/// base frequency up to max_window; the first one on which every base frequency
/// completes an integer number of cycles is returned (repeated to reach
/// min_window). Without an exact match the candidate >= min_window with the
/// smallest cycle mismatch is used and commensurate is false.
struct WindowChoice {
    double length;
    bool commensurate;
};
WindowChoice analysis_window(std::span<const double> base_freqs_mhz, double min_window, double max_window);

}  // namespace lceit
