#include "wgm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgm/errors.hpp"

namespace wgm {

double oscillation_splitting_hz(const std::vector<double>& tau,
                                const std::vector<double>& values,
                                double gamma_branch, bool positive_branch) {
  if (tau.size() != values.size() || tau.size() < 8)
    throw ParameterError("oscillation_splitting_hz: need a dense sampled trace");

  // Envelope-compensated branch samples; q(tau) = a + R cos(2 beta tau - psi).
  std::vector<double> t, q;
  t.reserve(tau.size());
  q.reserve(tau.size());
  for (size_t i = 0; i < tau.size(); ++i) {
    const bool in_branch = positive_branch ? tau[i] >= 0.0 : tau[i] <= 0.0;
    if (!in_branch) continue;
    t.push_back(tau[i]);
    q.push_back(values[i] * std::exp(gamma_branch * std::abs(tau[i])));
  }
  if (q.size() < 8)
    throw ParameterError("oscillation_splitting_hz: branch has too few samples");

  const auto [min_it, max_it] = std::minmax_element(q.begin(), q.end());
  const double mid = 0.5 * (*min_it + *max_it);
  const double swing = *max_it - *min_it;
  if (swing <= 1e-12 * std::abs(*max_it))
    throw NumericalError("oscillation_splitting_hz: no oscillation detected");

  // Linear-interpolated crossings of the midline; consecutive crossings are
  // half an oscillation period apart.
  std::vector<double> crossings;
  for (size_t i = 1; i < q.size(); ++i) {
    const double a = q[i - 1] - mid, b = q[i] - mid;
    if (a == 0.0) continue;
    if ((a < 0.0) != (b < 0.0)) {
      const double frac = a / (a - b);
      crossings.push_back(t[i - 1] + frac * (t[i] - t[i - 1]));
    }
  }
  if (crossings.size() < 2)
    throw NumericalError("oscillation_splitting_hz: need at least two midline crossings; widen the tau grid");

  const double mean_spacing =
      (crossings.back() - crossings.front()) / (crossings.size() - 1);
  // spacing = pi/(2 beta)  ->  splitting = 2 beta / 2 pi = 1/(2 spacing)
  return 1.0 / (2.0 * std::abs(mean_spacing));
}

double oscillation_splitting_hz(const CorrelationTrace& trace, PathConfig config,
                                double gamma_branch, bool positive_branch) {
  return oscillation_splitting_hz(trace.tau, trace.values[static_cast<size_t>(config)],
                                  gamma_branch, positive_branch);
}

double oscillation_contrast(const CorrelationTrace& trace, PathConfig config,
                            double gamma_ts, double span) {
  if (!(gamma_ts > 0.0))
    throw ParameterError("oscillation_contrast: gamma_ts must be positive");
  const double t_max = span / gamma_ts;
  const std::vector<double>& v = trace.values[static_cast<size_t>(config)];
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  size_t used = 0;
  for (size_t i = 0; i < trace.tau.size(); ++i) {
    if (trace.tau[i] < 0.0 || trace.tau[i] > t_max) continue;
    const double compensated = v[i] * std::exp(gamma_ts * trace.tau[i]);
    lo = std::min(lo, compensated);
    hi = std::max(hi, compensated);
    ++used;
  }
  if (used < 4)
    throw ParameterError("oscillation_contrast: window contains too few samples");
  if (hi <= 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

double zero_delay_fraction(const CorrelationTrace& trace, PathConfig config) {
  const std::vector<double>& v = trace.values[static_cast<size_t>(config)];
  if (v.empty()) throw ParameterError("zero_delay_fraction: empty trace");
  double peak = 0.0;
  size_t zero_index = 0;
  double best_abs = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < trace.tau.size(); ++i) {
    peak = std::max(peak, v[i]);
    if (std::abs(trace.tau[i]) < best_abs) {
      best_abs = std::abs(trace.tau[i]);
      zero_index = i;
    }
  }
  if (peak == 0.0) throw NumericalError("zero_delay_fraction: trace is identically zero");
  return v[zero_index] / peak;
}

}  // namespace wgm
