#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "wgm/correlations.hpp"
#include "wgm/detection.hpp"

namespace wgm {

/// How analyzer-angle differences map onto signal-idler delay. Linear treats
/// the angle difference as an accumulated oscillation phase, tau =
/// (theta_a - theta_b)/beta_m; PaperLiteral uses the reciprocal form
/// tau = 1/(beta_m (theta_a - theta_b)). The branch rate beta_m is the idler
/// one when theta_a - theta_b < 0, the signal one otherwise.
enum class TauMapping { Linear, PaperLiteral };

/// Default fixed by comparing both mappings' CHSH values against the
/// measured reference of 2.80 on the bundled device; Linear wins.
inline constexpr TauMapping kDefaultMapping = TauMapping::Linear;

const char* to_string(TauMapping mapping);

struct AngleSettings {
  double theta1 = 0.0;
  double theta1p = 0.0;
  double theta2 = 0.0;
  double theta2p = 0.0;

  /// Primed settings at theta_n - pi/4.
  static AngleSettings paper_convention(double theta1, double theta2);
};

struct BellResult {
  double s_value = 0.0;
  std::array<double, 4> e_values{};  // E(t1,t2), E(t1,t2'), E(t1',t2), E(t1',t2')
  AngleSettings angles;
  double sigma_s = 0.0;
  TauMapping mapping = kDefaultMapping;
};

double tau_mapping(double theta_a, double theta_b, double beta_s, double beta_i,
                   TauMapping mapping);

/// Analytic Bell correlation from the closed-form pair correlations. The
/// decay envelope cancels in the ratio, leaving the oscillatory parts only.
class BellEvaluator {
 public:
  BellEvaluator(const DeviceParams& device, const PumpSteadyState& pump);

  /// E(tau) in [-1, 1].
  double correlation(double tau) const;
  double beta_s() const { return constants_.beta_s; }
  double beta_i() const { return constants_.beta_i; }

 private:
  DeviceConstants constants_;
  std::array<OscCoeffs, 4> pos_;  // per config, tau >= 0 branch
  std::array<OscCoeffs, 4> neg_;
};

/// E at a delay from sampled traces (nearest grid point).
double bell_correlation(const CorrelationTrace& trace, double tau);

/// E from histogram counts in a +-window_bins window around the mapped delay.
double bell_correlation(const CoincidenceHistogram& hist, double tau, int window_bins);

/// Noise-free CHSH parameter at the given settings.
BellResult chsh(const DeviceParams& device, const PumpSteadyState& pump,
                const AngleSettings& angles, TauMapping mapping = kDefaultMapping);

/// Maximize S over settings obeying the primed convention. S depends on the
/// settings only through theta1 - theta2, so the search is one-dimensional.
BellResult optimize_angles(const DeviceParams& device, const PumpSteadyState& pump,
                           TauMapping mapping = kDefaultMapping);

struct ErrorEstimateOptions {
  int n_sims = 2500;
  std::uint64_t seed = 1;
  int window_bins = 1;            // +-1 bin counting window around the mapped delay
  bool per_replicate_max = true;  // re-maximize S for every resampled data set
  TauMapping mapping = kDefaultMapping;
};

/// Poisson-resampling uncertainty of the Bell parameter. Each replicate
/// redraws every histogram bin and recomputes S (maximal or at fixed angles).
double estimate_error(const ExpectedCounts& expected, const DeviceParams& device,
                      const AngleSettings& angles, const ErrorEstimateOptions& options);

}  // namespace wgm
