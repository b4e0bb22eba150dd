#include "wgm/bell.hpp"

#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "wgm/errors.hpp"

using namespace wgm;
using test::abs_close;
using test::rel_close;

namespace {

// Equal decay and coupling rates for every mode: E(tau) is then exactly
// cos(2 beta tau) for balanced pumps at phi = pi.
DeviceParams fully_symmetric_device() {
  DeviceParams device = paper_device();
  const double gamma0 = device.signal.gamma0;
  const double gamma_e = device.signal.gamma_e;
  const double beta = device.signal.beta;
  for (ModeParams* mode : {&device.pump, &device.signal, &device.idler}) {
    mode->gamma0 = gamma0;
    mode->gamma_e = gamma_e;
    mode->beta = beta;
    mode->phi_beta = 0.0;
  }
  return device;
}

CorrelationTrace flat_trace() {
  CorrelationTrace trace;
  trace.tau = {-1e-9, 0.0, 1e-9};
  for (auto& v : trace.values) v = {1.0, 2.0, 1.5};
  trace.envelope = {4.0, 8.0, 6.0};
  return trace;
}

}  // namespace

TEST_CASE("delay mapping") {
  const double bs = constants::two_pi * 0.555e9;
  const double bi = constants::two_pi * 0.485e9;

  CHECK(tau_mapping(0.7, 0.7, bs, bi, TauMapping::Linear) == 0.0);
  CHECK(rel_close(tau_mapping(bs * 1e-9, 0.0, bs, bi, TauMapping::Linear), 1e-9, 1e-14));
  // negative differences ride the idler branch
  CHECK(rel_close(tau_mapping(0.0, bi * 2e-9, bs, bi, TauMapping::Linear), -2e-9, 1e-14));
  CHECK(rel_close(tau_mapping(2.0, 0.0, bs, bi, TauMapping::PaperLiteral),
                  1.0 / (2.0 * bs), 1e-14));
  CHECK_THROWS_AS(tau_mapping(0.3, 0.3, bs, bi, TauMapping::PaperLiteral),
                  ParameterError);
}

TEST_CASE("bell correlation from traces") {
  SUBCASE("identical traces carry no correlation") {
    const CorrelationTrace trace = flat_trace();
    CHECK(abs_close(bell_correlation(trace, 0.0), 0.0, 1e-15));
  }
  SUBCASE("invariant under a uniform rescale") {
    CorrelationTrace trace = flat_trace();
    trace.values[0] = {3.0, 1.0, 0.4};
    trace.envelope = {6.0, 7.0, 4.4};
    const double e1 = bell_correlation(trace, 1e-9);
    for (auto& v : trace.values)
      for (double& x : v) x *= 12.5;
    for (double& x : trace.envelope) x *= 12.5;
    CHECK(rel_close(bell_correlation(trace, 1e-9), e1, 1e-14));
  }
  SUBCASE("balanced pumps at phi = pi are perfectly correlated at zero delay") {
    const DeviceParams device = fully_symmetric_device();
    const PumpSteadyState pump =
        PumpSteadyState::from_energies(1.0, 1.0, constants::pi);
    const BellEvaluator eval(device, pump);
    CHECK(abs_close(eval.correlation(0.0), 1.0, 1e-12));
    // and follows cos(2 beta tau) away from it
    for (double tau : {0.1e-9, 0.35e-9, -0.6e-9}) {
      const double beta = tau >= 0 ? eval.beta_s() : eval.beta_i();
      CHECK(abs_close(eval.correlation(tau), std::cos(2.0 * beta * tau), 1e-10));
    }
  }
  SUBCASE("envelope rescaling cancels") {
    const DeviceParams device = paper_device();
    const PumpSteadyState pump = PumpSteadyState::from_energies(1.7, 0.4, 0.9);
    const BellEvaluator eval(device, pump);
    const std::vector<double> tau = symmetric_tau_grid(device, 5.0, 4001);
    CorrelationTrace trace = correlation_trace(device, pump, tau);
    // multiply every config by the same positive tau-dependent factor
    for (size_t i = 0; i < tau.size(); ++i) {
      const double factor = 2.0 + std::sin(1e9 * tau[i]);
      for (auto& v : trace.values) v[i] *= factor;
      trace.envelope[i] *= factor;
    }
    for (size_t i : {size_t{0}, tau.size() / 3, tau.size() / 2, tau.size() - 2}) {
      CHECK(abs_close(bell_correlation(trace, tau[i]), eval.correlation(tau[i]), 1e-9));
    }
  }
}

TEST_CASE("chsh parameter") {
  SUBCASE("ideal settings reach the quantum bound on the symmetric device") {
    const DeviceParams device = fully_symmetric_device();
    const PumpSteadyState pump =
        PumpSteadyState::from_energies(1.0, 1.0, constants::pi);
    const BellResult result = chsh(
        device, pump, AngleSettings::paper_convention(constants::pi / 8.0, 0.0));
    CHECK(abs_close(result.e_values[0], 1.0 / std::sqrt(2.0), 1e-9));
    CHECK(abs_close(result.e_values[1], -1.0 / std::sqrt(2.0), 1e-9));
    CHECK(abs_close(result.e_values[2], 1.0 / std::sqrt(2.0), 1e-9));
    CHECK(abs_close(result.e_values[3], 1.0 / std::sqrt(2.0), 1e-9));
    CHECK(abs_close(result.s_value, 2.0 * std::sqrt(2.0), 1e-9));
  }
  SUBCASE("angle convention") {
    const AngleSettings a = AngleSettings::paper_convention(4.13, 0.0);
    CHECK(abs_close(a.theta1p, 4.13 - constants::pi / 4.0, 1e-15));
    CHECK(abs_close(a.theta2p, -constants::pi / 4.0, 1e-15));
  }
}

TEST_CASE("angle optimization") {
  SUBCASE("no violation without modal coupling oscillations") {
    DeviceParams device = paper_device();
    device.signal.beta = 0.0;
    device.idler.beta = 0.0;
    const PumpSteadyState pump = PumpSteadyState::from_energies(1.0, 0.2, 0.4);
    const BellResult result = optimize_angles(device, pump);
    CHECK(result.s_value <= 2.0 + 1e-9);
  }
  SUBCASE("optimized settings beat the fixed ones and respect the bound") {
    const DeviceParams device = paper_device();
    const PumpSteadyState pump =
        steady_state(device, test::paper_drive(device, -0.55 * device.pump.beta));
    const BellResult fixed =
        chsh(device, pump, AngleSettings::paper_convention(4.13, 0.0));
    const BellResult best = optimize_angles(device, pump);
    CHECK(best.s_value >= fixed.s_value - 1e-9);
    CHECK(best.s_value <= 2.0 * std::sqrt(2.0) + 1e-9);
    CHECK(best.s_value > 2.0);
  }
}

TEST_CASE("resampled error bars") {
  const DeviceParams device = paper_device();
  const PumpSteadyState pump =
      steady_state(device, test::paper_drive(device, -0.55 * device.pump.beta));
  const std::vector<double> tau = symmetric_tau_grid(device, 8.0, 8192);
  const CorrelationTrace trace = correlation_trace(device, pump, tau);

  DetectorModel det;
  det.bin_width = 4e-12;
  det.efficiency = 0.54;
  det.acquisition_time = 1800.0;
  const double scale =
      2000.0 / *std::max_element(trace.envelope.begin(), trace.envelope.end()) /
      (det.efficiency * det.efficiency * det.acquisition_time * 4e-12);
  const ExpectedCounts expected = expected_counts(trace, det, scale);

  // settings whose mapped delays stay inside the histogram span
  AngleSettings angles = AngleSettings::paper_convention(1.0, 0.0);

  SUBCASE("deterministic under the seed") {
    ErrorEstimateOptions opts;
    opts.n_sims = 60;
    opts.seed = 99;
    const double s1 = estimate_error(expected, device, angles, opts);
    const double s2 = estimate_error(expected, device, angles, opts);
    CHECK(s1 == s2);
    CHECK(s1 > 0.0);
    opts.seed = 100;
    CHECK(estimate_error(expected, device, angles, opts) != s1);
  }

  SUBCASE("fixed-angle mode and replicate count validation") {
    ErrorEstimateOptions opts;
    opts.n_sims = 40;
    opts.per_replicate_max = false;
    CHECK(estimate_error(expected, device, angles, opts) > 0.0);
    opts.n_sims = 1;
    CHECK_THROWS_AS(estimate_error(expected, device, angles, opts), ParameterError);
  }

  SUBCASE("empty histograms are rejected") {
    ExpectedCounts empty = expected;
    for (auto& channel : empty.expected)
      for (double& v : channel) v = 0.0;
    ErrorEstimateOptions opts;
    opts.n_sims = 10;
    CHECK_THROWS_AS(estimate_error(empty, device, angles, opts), ParameterError);
  }
}

TEST_CASE("bell correlation from histograms") {
  const DeviceParams device = paper_device();
  const PumpSteadyState pump =
      steady_state(device, test::paper_drive(device, -0.55 * device.pump.beta));
  const std::vector<double> tau = symmetric_tau_grid(device, 12.0, 16384);
  const CorrelationTrace trace = correlation_trace(device, pump, tau);
  const BellEvaluator eval(device, pump);

  DetectorModel det;
  det.bin_width = 4e-12;
  det.acquisition_time = 1.0;
  // peak bins around 1e6 counts
  const double scale =
      1e6 / (*std::max_element(trace.envelope.begin(), trace.envelope.end()) *
             det.bin_width);
  const ExpectedCounts expected = expected_counts(trace, det, scale);
  const CoincidenceHistogram hist = sample_histogram(expected, 7);

  for (double t : {-0.4e-9, 0.15e-9, 0.8e-9}) {
    CHECK(abs_close(bell_correlation(hist, t, 1), eval.correlation(t), 0.05));
  }
  CHECK_THROWS_AS(bell_correlation(hist, 1.0 /* way outside */, 1), ParameterError);
}
