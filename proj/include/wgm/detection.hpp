#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wgm/correlations.hpp"

namespace wgm {

/// Detector pair and acquisition settings for turning ideal correlation
/// densities into coincidence-count statistics.
struct DetectorModel {
  double jitter_sigma = 0.0;      // per-detector Gaussian timing jitter, s
  double efficiency = 1.0;        // per-channel detection efficiency
  double bin_width = 4e-12;       // coincidence histogram bin, s
  double acquisition_time = 1.0;  // s
  double background_rate = 0.0;   // accidental coincidences per bin per second
};

void validate(const DetectorModel& det);

/// Per-bin expected coincidence counts for each path configuration.
struct ExpectedCounts {
  std::vector<double> bin_edges;  // uniform, size = bins + 1
  std::array<std::vector<double>, 4> expected;

  double bin_center(size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  size_t bins() const { return expected[0].size(); }
};

/// Integer coincidence counts, one Poisson draw per bin.
struct CoincidenceHistogram {
  std::vector<double> bin_edges;
  std::array<std::vector<std::uint64_t>, 4> counts;

  double bin_center(size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  size_t bins() const { return counts[0].size(); }
};

/// Convolve each configuration trace with the coincidence response of two
/// independent detectors, a Gaussian of sigma = sqrt(2) * jitter_sigma.
/// Requires a uniform tau grid with spacing <= jitter_sigma/4.
CorrelationTrace convolve_response(const CorrelationTrace& trace,
                                   const DetectorModel& det);

/// Expected counts per bin: trace density integrated over the bin, times the
/// channel efficiencies and acquisition time (scaled by pair_rate_scale to
/// set absolute pair rates), plus the flat accidental background.
ExpectedCounts expected_counts(const CorrelationTrace& trace, const DetectorModel& det,
                               double pair_rate_scale);

/// Independent Poisson draw per bin; deterministic for a fixed seed.
CoincidenceHistogram sample_histogram(const ExpectedCounts& expected,
                                      std::uint64_t seed);

}  // namespace wgm
