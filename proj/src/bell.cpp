#include "wgm/bell.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wgm/errors.hpp"

namespace wgm {

namespace {
constexpr double kTsirelson = 2.8284271247461903;  // 2 sqrt 2
}

const char* to_string(TauMapping mapping) {
  return mapping == TauMapping::Linear ? "linear" : "paper_literal";
}

AngleSettings AngleSettings::paper_convention(double theta1, double theta2) {
  AngleSettings a;
  a.theta1 = theta1;
  a.theta2 = theta2;
  a.theta1p = theta1 - constants::pi / 4.0;
  a.theta2p = theta2 - constants::pi / 4.0;
  return a;
}

double tau_mapping(double theta_a, double theta_b, double beta_s, double beta_i,
                   TauMapping mapping) {
  const double diff = theta_a - theta_b;
  const double beta = diff < 0.0 ? beta_i : beta_s;
  if (beta < 0.0) throw ParameterError("tau_mapping: branch beta must be non-negative");
  if (mapping == TauMapping::Linear) {
    // An uncoupled mode never accumulates oscillation phase; the delay
    // setting is immaterial, so pin it at zero.
    if (beta == 0.0) return 0.0;
    return diff / beta;
  }
  if (diff == 0.0 || beta == 0.0)
    throw ParameterError("tau_mapping: paper_literal mapping diverges at theta_a = theta_b");
  return 1.0 / (beta * diff);
}

BellEvaluator::BellEvaluator(const DeviceParams& device, const PumpSteadyState& pump)
    : constants_(device_constants(device)) {
  for (PathConfig config : kAllConfigs) {
    pos_[static_cast<size_t>(config)] = osc_coeffs(constants_, pump, config, true);
    neg_[static_cast<size_t>(config)] = osc_coeffs(constants_, pump, config, false);
  }
}

double BellEvaluator::correlation(double tau) const {
  const auto& branch = tau >= 0.0 ? pos_ : neg_;
  std::array<double, 4> q;
  for (size_t c = 0; c < 4; ++c) {
    const double phase = branch[c].beta * tau;
    q[c] = std::norm(branch[c].zeta * std::cos(phase) + branch[c].eta * std::sin(phase));
  }
  const double den = q[0] + q[1] + q[2] + q[3];
  if (!(den > 0.0)) throw NumericalError("bell correlation: vanishing denominator");
  return (q[0] + q[3] - q[1] - q[2]) / den;
}

double bell_correlation(const CorrelationTrace& trace, double tau) {
  if (trace.tau.empty()) throw ParameterError("bell_correlation: empty trace");
  const auto it = std::lower_bound(trace.tau.begin(), trace.tau.end(), tau);
  size_t i = std::min<size_t>(std::distance(trace.tau.begin(), it), trace.tau.size() - 1);
  if (i > 0 && std::abs(trace.tau[i - 1] - tau) < std::abs(trace.tau[i] - tau)) --i;
  const double den = trace.envelope[i];
  if (!(den > 0.0)) throw NumericalError("bell_correlation: vanishing envelope at tau");
  return (trace.values[0][i] + trace.values[3][i] - trace.values[1][i] -
          trace.values[2][i]) /
         den;
}

namespace {

// Window sums over histogram counts around the bin containing tau. Returns
// false when the delay falls outside the histogram or the window is empty.
template <typename Counts>
bool window_sums(const std::vector<double>& edges, const std::array<Counts, 4>& data,
                 double tau, int window_bins, std::array<double, 4>& sums) {
  if (edges.size() < 2) return false;
  const double lo = edges.front(), width = edges[1] - edges[0];
  const int bins = static_cast<int>(edges.size()) - 1;
  const int center = static_cast<int>(std::floor((tau - lo) / width));
  if (center < 0 || center >= bins) return false;
  sums = {0.0, 0.0, 0.0, 0.0};
  for (int b = center - window_bins; b <= center + window_bins; ++b) {
    if (b < 0 || b >= bins) continue;
    for (size_t c = 0; c < 4; ++c) sums[c] += static_cast<double>(data[c][b]);
  }
  return true;
}

double e_from_sums(const std::array<double, 4>& n) {
  const double total = n[0] + n[1] + n[2] + n[3];
  if (!(total > 0.0))
    throw NumericalError("bell_correlation: no counts in the delay window");
  return (n[0] + n[3] - n[1] - n[2]) / total;
}

double chsh_combine(const std::array<double, 4>& e) {
  return std::abs(e[0] - e[1]) + std::abs(e[2] + e[3]);
}

}  // namespace

double bell_correlation(const CoincidenceHistogram& hist, double tau, int window_bins) {
  std::array<double, 4> sums;
  if (!window_sums(hist.bin_edges, hist.counts, tau, window_bins, sums))
    throw ParameterError("bell_correlation: delay outside the histogram range");
  return e_from_sums(sums);
}

BellResult chsh(const DeviceParams& device, const PumpSteadyState& pump,
                const AngleSettings& angles, TauMapping mapping) {
  const BellEvaluator eval(device, pump);
  const double bs = eval.beta_s(), bi = eval.beta_i();
  BellResult result;
  result.angles = angles;
  result.mapping = mapping;
  result.e_values = {
      eval.correlation(tau_mapping(angles.theta1, angles.theta2, bs, bi, mapping)),
      eval.correlation(tau_mapping(angles.theta1, angles.theta2p, bs, bi, mapping)),
      eval.correlation(tau_mapping(angles.theta1p, angles.theta2, bs, bi, mapping)),
      eval.correlation(tau_mapping(angles.theta1p, angles.theta2p, bs, bi, mapping))};
  result.s_value = chsh_combine(result.e_values);
  if (result.s_value > kTsirelson + 1e-9)
    throw NumericalError("chsh: S exceeds the quantum bound, inputs are inconsistent");
  return result;
}

BellResult optimize_angles(const DeviceParams& device, const PumpSteadyState& pump,
                           TauMapping mapping) {
  // S depends on (theta1, theta2) only through x = theta1 - theta2: the four
  // delay arguments are x, x + pi/4, x - pi/4, x. Scan x, then refine.
  const auto s_at = [&](double x) {
    return chsh(device, pump, AngleSettings::paper_convention(x, 0.0), mapping).s_value;
  };

  const double x_min = -constants::two_pi, x_max = constants::two_pi;
  const size_t n_scan = 8192;
  double best_x = 0.0, best_s = -1.0;
  for (size_t i = 0; i <= n_scan; ++i) {
    const double x = x_min + (x_max - x_min) * static_cast<double>(i) / n_scan;
    if (mapping == TauMapping::PaperLiteral) {
      // skip the poles of the reciprocal mapping
      if (std::abs(x) < 1e-3 || std::abs(x - constants::pi / 4.0) < 1e-3 ||
          std::abs(x + constants::pi / 4.0) < 1e-3)
        continue;
    }
    const double s = s_at(x);
    if (s > best_s) {
      best_s = s;
      best_x = x;
    }
  }

  // Golden-section refinement around the best scan point.
  const double step = (x_max - x_min) / n_scan;
  double lo = best_x - step, hi = best_x + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = s_at(a), fb = s_at(b);
  for (int iter = 0; iter < 80; ++iter) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = s_at(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = s_at(a);
    }
  }
  const double x_opt = 0.5 * (lo + hi);
  BellResult result =
      chsh(device, pump, AngleSettings::paper_convention(x_opt, 0.0), mapping);
  if (result.s_value < best_s)
    result = chsh(device, pump, AngleSettings::paper_convention(best_x, 0.0), mapping);
  return result;
}

double estimate_error(const ExpectedCounts& expected, const DeviceParams& device,
                      const AngleSettings& angles, const ErrorEstimateOptions& options) {
  if (options.n_sims < 2)
    throw ParameterError("estimate_error: need at least 2 replicates");
  double total = 0.0;
  for (const auto& channel : expected.expected)
    for (double mean : channel) total += mean;
  if (!(total > 0.0))
    throw ParameterError("estimate_error: expected histogram carries no counts");

  const double bs = device.signal.beta, bi = device.idler.beta;
  const size_t bins = expected.bins();

  // Delay arguments to probe. Fixed angles need four; per-replicate
  // maximization scans x = theta1 - theta2 over a dense grid.
  std::vector<std::array<double, 4>> tau_sets;
  if (options.per_replicate_max) {
    const double tau_lo = expected.bin_edges.front();
    const double tau_hi = expected.bin_edges.back();
    const size_t n_scan = 720;
    for (size_t i = 0; i <= n_scan; ++i) {
      const double x = -constants::two_pi +
                       2.0 * constants::two_pi * static_cast<double>(i) / n_scan;
      if (options.mapping == TauMapping::PaperLiteral &&
          (std::abs(x) < 1e-3 || std::abs(x - constants::pi / 4.0) < 1e-3 ||
           std::abs(x + constants::pi / 4.0) < 1e-3))
        continue;
      // theta1 = x, theta2 = 0 under the primed convention gives the four
      // CHSH delay arguments at differences x, x + pi/4, x - pi/4, x.
      std::array<double, 4> taus;
      try {
        taus = {tau_mapping(x, 0.0, bs, bi, options.mapping),
                tau_mapping(x + constants::pi / 4.0, 0.0, bs, bi, options.mapping),
                tau_mapping(x - constants::pi / 4.0, 0.0, bs, bi, options.mapping),
                tau_mapping(x, 0.0, bs, bi, options.mapping)};
      } catch (const ParameterError&) {
        continue;
      }
      const bool in_range = std::all_of(taus.begin(), taus.end(), [&](double t) {
        return t >= tau_lo && t < tau_hi;
      });
      if (in_range) tau_sets.push_back(taus);
    }
  } else {
    tau_sets.push_back(
        {tau_mapping(angles.theta1, angles.theta2, bs, bi, options.mapping),
         tau_mapping(angles.theta1, angles.theta2p, bs, bi, options.mapping),
         tau_mapping(angles.theta1p, angles.theta2, bs, bi, options.mapping),
         tau_mapping(angles.theta1p, angles.theta2p, bs, bi, options.mapping)});
  }
  if (tau_sets.empty())
    throw ParameterError("estimate_error: no delay settings fall inside the histogram");

  std::vector<double> s_values;
  s_values.reserve(options.n_sims);
  std::array<std::vector<std::uint64_t>, 4> counts;
  for (auto& c : counts) c.resize(bins);

  for (int rep = 0; rep < options.n_sims; ++rep) {
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(rep)};
    std::mt19937_64 rng(seq);
    for (size_t c = 0; c < 4; ++c) {
      for (size_t i = 0; i < bins; ++i) {
        const double mean = expected.expected[c][i];
        if (mean <= 0.0) {
          counts[c][i] = 0;
          continue;
        }
        std::poisson_distribution<std::uint64_t> draw(mean);
        counts[c][i] = draw(rng);
      }
    }

    double best_s = 0.0;
    bool any = false;
    for (const auto& taus : tau_sets) {
      std::array<double, 4> e;
      bool valid = true;
      for (size_t k = 0; k < 4 && valid; ++k) {
        std::array<double, 4> sums;
        if (!window_sums(expected.bin_edges, counts, taus[k], options.window_bins,
                         sums) ||
            !(sums[0] + sums[1] + sums[2] + sums[3] > 0.0)) {
          valid = false;
          break;
        }
        e[k] = e_from_sums(sums);
      }
      if (!valid) continue;
      best_s = any ? std::max(best_s, chsh_combine(e)) : chsh_combine(e);
      any = true;
    }
    if (!any)
      throw NumericalError("estimate_error: replicate produced no usable delay windows");
    s_values.push_back(best_s);
  }

  double mean = 0.0;
  for (double s : s_values) mean += s;
  mean /= s_values.size();
  double var = 0.0;
  for (double s : s_values) var += (s - mean) * (s - mean);
  var /= (s_values.size() - 1);
  return std::sqrt(var);
}

}  // namespace wgm
