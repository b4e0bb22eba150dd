#include "wgm/detection.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "wgm/errors.hpp"

namespace wgm {

void validate(const DetectorModel& det) {
  if (det.jitter_sigma < 0.0)
    throw ParameterError("detector: jitter_sigma must be non-negative");
  if (det.efficiency < 0.0 || det.efficiency > 1.0)
    throw ParameterError("detector: efficiency must lie in [0, 1]");
  if (!(det.bin_width > 0.0)) throw ParameterError("detector: bin_width must be positive");
  if (det.acquisition_time < 0.0)
    throw ParameterError("detector: acquisition_time must be non-negative");
  if (det.background_rate < 0.0)
    throw ParameterError("detector: background_rate must be non-negative");
}

namespace {

double grid_spacing(const std::vector<double>& tau, const char* who) {
  if (tau.size() < 2) throw ParameterError(std::string(who) + ": trace grid too small");
  const double dt = tau[1] - tau[0];
  for (size_t i = 1; i < tau.size(); ++i) {
    if (std::abs((tau[i] - tau[i - 1]) - dt) > 1e-6 * dt)
      throw ParameterError(std::string(who) + ": requires a uniform tau grid");
  }
  return dt;
}

}  // namespace

CorrelationTrace convolve_response(const CorrelationTrace& trace,
                                   const DetectorModel& det) {
  validate(det);
  if (det.jitter_sigma == 0.0) return trace;
  const double dt = grid_spacing(trace.tau, "convolve_response");
  if (dt > det.jitter_sigma / 4.0) {
    std::ostringstream msg;
    msg << "convolve_response: grid spacing " << dt
        << " s too coarse for jitter sigma " << det.jitter_sigma
        << " s; need spacing <= sigma/4";
    throw NumericalError(msg.str());
  }

  // Two independent detectors contribute in quadrature.
  const double sigma = det.jitter_sigma * std::sqrt(2.0);
  const int half = static_cast<int>(std::ceil(8.0 * sigma / dt));
  std::vector<double> kernel(2 * half + 1);
  double mass = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double x = k * dt / sigma;
    kernel[k + half] = std::exp(-0.5 * x * x);
    mass += kernel[k + half];
  }
  for (double& w : kernel) w /= mass;  // unit-mass discrete kernel

  CorrelationTrace out;
  out.tau = trace.tau;
  out.envelope.assign(trace.tau.size(), 0.0);
  const int n = static_cast<int>(trace.tau.size());
  for (size_t c = 0; c < 4; ++c) {
    out.values[c].assign(trace.tau.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int j = i - k;
        if (j < 0 || j >= n) continue;
        acc += kernel[k + half] * trace.values[c][j];
      }
      out.values[c][i] = acc;
      out.envelope[i] += acc;
    }
  }
  return out;
}

ExpectedCounts expected_counts(const CorrelationTrace& trace, const DetectorModel& det,
                               double pair_rate_scale) {
  validate(det);
  if (pair_rate_scale < 0.0)
    throw ParameterError("expected_counts: pair_rate_scale must be non-negative");
  const double dt = grid_spacing(trace.tau, "expected_counts");

  const double lo = trace.tau.front(), hi = trace.tau.back();
  const size_t bins = static_cast<size_t>(std::floor((hi - lo) / det.bin_width));
  if (bins == 0) throw ParameterError("expected_counts: bin width exceeds trace span");

  ExpectedCounts out;
  out.bin_edges.resize(bins + 1);
  for (size_t i = 0; i <= bins; ++i) out.bin_edges[i] = lo + det.bin_width * i;

  const double channel_factor = det.efficiency * det.efficiency *
                                det.acquisition_time * pair_rate_scale;
  const double background = det.background_rate * det.acquisition_time;
  for (size_t c = 0; c < 4; ++c) {
    out.expected[c].assign(bins, background);
    // Accumulate the trapezoid mass of each grid interval into the bin that
    // holds its midpoint.
    for (size_t i = 0; i + 1 < trace.tau.size(); ++i) {
      const double mid = 0.5 * (trace.tau[i] + trace.tau[i + 1]);
      if (mid < lo || mid >= lo + bins * det.bin_width) continue;
      const size_t bin = static_cast<size_t>((mid - lo) / det.bin_width);
      out.expected[c][bin] +=
          0.5 * (trace.values[c][i] + trace.values[c][i + 1]) * dt * channel_factor;
    }
  }
  return out;
}

CoincidenceHistogram sample_histogram(const ExpectedCounts& expected,
                                      std::uint64_t seed) {
  CoincidenceHistogram hist;
  hist.bin_edges = expected.bin_edges;
  std::mt19937_64 rng(seed);
  for (size_t c = 0; c < 4; ++c) {
    hist.counts[c].resize(expected.expected[c].size());
    for (size_t i = 0; i < hist.counts[c].size(); ++i) {
      const double mean = expected.expected[c][i];
      if (mean < 0.0) throw ParameterError("sample_histogram: negative expected count");
      if (mean == 0.0) {
        hist.counts[c][i] = 0;
        continue;
      }
      std::poisson_distribution<std::uint64_t> draw(mean);
      hist.counts[c][i] = draw(rng);
    }
  }
  return hist;
}

}  // namespace wgm
