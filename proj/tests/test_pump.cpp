#include "wgm/pump.hpp"

#include <complex>

#include "doctest.h"
#include "test_helpers.hpp"
#include "wgm/errors.hpp"

using namespace wgm;
using test::abs_close;
using test::rel_close;

TEST_CASE("steady state limits") {
  DeviceParams device = paper_device();
  const double gamma_t = device.pump.gamma_t();
  const double gamma_e = device.pump.gamma_e;

  SUBCASE("uncoupled Lorentzian on resonance") {
    device.pump.beta = 0.0;
    const PumpSteadyState ss = steady_state(device, PumpDrive{0.0, 2.0, 0.0});
    CHECK(std::abs(ss.a_pb) == 0.0);
    CHECK(rel_close(ss.f, 4.0 * gamma_e * 4.0 / (gamma_t * gamma_t), 1e-13));
  }
  SUBCASE("forward/backward energy ratio on resonance") {
    const PumpSteadyState ss = steady_state(device, PumpDrive{0.0, 1.0, 0.0});
    const double expected =
        (gamma_t / 2.0) * (gamma_t / 2.0) / (device.pump.beta * device.pump.beta);
    CHECK(rel_close(ss.f / ss.b, expected, 1e-12));
  }
  SUBCASE("intracavity energies peak near the doublet resonances") {
    // Dense-grid maximization on a strongly split pump.
    const DeviceParams strong = test::split_ratio_device(10.0);
    const double beta = strong.pump.beta;
    double best_f = 0.0, best_f_at = 0.0, best_b = 0.0, best_b_at = 0.0;
    for (int i = 0; i <= 60000; ++i) {
      const double delta = -3.0 * beta + 6.0 * beta * i / 60000.0;
      const PumpSteadyState ss = steady_state(strong, PumpDrive{delta, 1.0, 0.0});
      if (ss.f > best_f) {
        best_f = ss.f;
        best_f_at = delta;
      }
      if (ss.b > best_b) {
        best_b = ss.b;
        best_b_at = delta;
      }
    }
    CHECK(std::abs(std::abs(best_f_at) - beta) < 0.02 * beta);
    CHECK(std::abs(std::abs(best_b_at) - beta) < 0.02 * beta);
  }
}

TEST_CASE("steady state properties") {
  const DeviceParams device = paper_device();
  const double beta = device.pump.beta;

  SUBCASE("drive linearity") {
    const PumpDrive base{0.3 * beta, complexd(1.3, -0.4), complexd(0.2, 0.7)};
    const complexd k(0.7, -1.9);
    PumpDrive scaled = base;
    scaled.amp_f *= k;
    scaled.amp_b *= k;
    const PumpSteadyState a = steady_state(device, base);
    const PumpSteadyState b = steady_state(device, scaled);
    const bool amp_scales = std::abs(b.a_pf - k * a.a_pf) < 1e-12 * std::abs(b.a_pf);
    CHECK(amp_scales);
    CHECK(rel_close(b.f / b.b, a.f / a.b, 1e-12));
    CHECK(abs_close(wrap_angle(b.phi - a.phi), 0.0, 1e-10));
  }

  SUBCASE("mirror reciprocity under f<->b with conjugated coupling phase") {
    DeviceParams mirrored = device;
    mirrored.pump.phi_beta = -device.pump.phi_beta;
    const complexd amp(0.8, 0.33);
    const double delta = -0.6 * beta;
    const PumpSteadyState fwd = steady_state(device, PumpDrive{delta, amp, 0.0});
    const PumpSteadyState bwd = steady_state(mirrored, PumpDrive{delta, 0.0, amp});
    CHECK(std::abs(fwd.a_pf - bwd.a_pb) < 1e-12 * std::abs(fwd.a_pf));
    CHECK(std::abs(fwd.a_pb - bwd.a_pf) < 1e-12 * std::abs(fwd.a_pb));
  }

  SUBCASE("energies stay finite across the sweep") {
    for (int i = 0; i <= 2000; ++i) {
      const double delta = -2.0 * beta + 4.0 * beta * i / 2000.0;
      const PumpSteadyState ss = steady_state(device, PumpDrive{delta, 1.0, 0.0});
      CHECK(std::isfinite(ss.f + ss.b));
    }
  }

  SUBCASE("residual of the steady-state equations") {
    const complexd i_unit(0.0, 1.0);
    const PumpDrive drive{0.42 * beta, complexd(2.0, 1.0), complexd(-0.3, 0.9)};
    const PumpSteadyState ss = steady_state(device, drive);
    const complexd d(-device.pump.gamma_t() / 2.0, drive.detuning);
    const complexd bc = i_unit * beta * std::polar(1.0, device.pump.phi_beta);
    const complexd bc_conj = i_unit * beta * std::polar(1.0, -device.pump.phi_beta);
    const complexd root_ge = std::sqrt(device.pump.gamma_e);
    const complexd r1 = d * ss.a_pf + bc * ss.a_pb + i_unit * root_ge * drive.amp_f;
    const complexd r2 = d * ss.a_pb + bc_conj * ss.a_pf + i_unit * root_ge * drive.amp_b;
    const double scale = std::abs(d * ss.a_pf);
    CHECK(std::abs(r1) < 1e-12 * scale);
    CHECK(std::abs(r2) < 1e-12 * scale);
  }

  SUBCASE("singular drive of a lossless cavity") {
    DeviceParams lossless = device;
    lossless.pump.gamma0 = 0.0;
    lossless.pump.gamma_e = 0.0;
    CHECK_THROWS_AS(steady_state(lossless, PumpDrive{beta, 1.0, 0.0}), NumericalError);
    CHECK_NOTHROW(steady_state(lossless, PumpDrive{0.5 * beta, 1.0, 0.0}));
  }
}

TEST_CASE("transmission") {
  DeviceParams device = paper_device();
  const double gamma_t = device.pump.gamma_t();

  SUBCASE("far-detuned limit") {
    CHECK(transmission(device, 100.0 * gamma_t) > 0.99);
    CHECK(transmission(device, -100.0 * gamma_t) > 0.99);
  }
  SUBCASE("critical coupling of a single resonance") {
    device.pump.beta = 0.0;
    device.pump.gamma_e = device.pump.gamma0;
    CHECK(abs_close(transmission(device, 0.0), 0.0, 1e-12));
  }
  SUBCASE("doublet minima sit at +-beta for strong splitting") {
    const DeviceParams strong = test::split_ratio_device(50.0);
    const double beta = strong.pump.beta;
    // dense grid then parabolic refinement around each minimum
    for (double sign : {-1.0, 1.0}) {
      double best = 1e9, best_at = 0.0;
      for (int i = 0; i <= 40000; ++i) {
        const double delta = sign * beta * (0.5 + 1.0 * i / 40000.0);
        const double t = transmission(strong, delta);
        if (t < best) {
          best = t;
          best_at = delta;
        }
      }
      CHECK(std::abs(std::abs(best_at) - beta) < 0.01 * beta);
    }
  }
  SUBCASE("undefined without forward drive") {
    CHECK_THROWS_AS(transmission(device, PumpDrive{0.0, 0.0, 1.0}), ParameterError);
  }
}

TEST_CASE("phase behavior") {
  const DeviceParams device = paper_device();

  SUBCASE("on-resonance phase ratio identity") {
    const PumpSteadyState ss = steady_state(device, PumpDrive{0.0, 1.0, 0.0});
    const complexd i_unit(0.0, 1.0);
    const complexd expected =
        complexd(-device.pump.gamma_t() / 2.0, 0.0) /
        (-i_unit * device.pump.beta * std::polar(1.0, -device.pump.phi_beta));
    CHECK(abs_close(wrap_angle(std::arg(ss.a_pf / ss.a_pb) - std::arg(expected)), 0.0,
                    1e-12));
  }

  SUBCASE("pump relative phase swings by pi across a strongly split doublet") {
    const DeviceParams strong = test::split_ratio_device(10.0);
    const double beta = strong.pump.beta;
    std::vector<double> phi_p;
    for (int i = 0; i <= 4000; ++i) {
      const double delta = -3.0 * beta + 6.0 * beta * i / 4000.0;
      const PumpSteadyState ss = steady_state(strong, PumpDrive{delta, 1.0, 0.0});
      phi_p.push_back(std::arg(ss.a_pf) - std::arg(ss.a_pb));
    }
    const std::vector<double> unwrapped = unwrap_phases(phi_p);
    const auto [lo, hi] = std::minmax_element(unwrapped.begin(), unwrapped.end());
    CHECK(rel_close(*hi - *lo, constants::pi, 0.05));
  }

  SUBCASE("total variation of the pair phase phi meets the pi shift") {
    const DeviceParams strong = test::split_ratio_device(10.0);
    const double beta = strong.pump.beta;
    std::vector<double> grid;
    for (int i = 0; i <= 4000; ++i) grid.push_back(-3.0 * beta + 6.0 * beta * i / 4000.0);
    const auto [wrapped, unwrapped] = phase_sweep(strong, grid);
    const auto [lo, hi] = std::minmax_element(unwrapped.begin(), unwrapped.end());
    CHECK(*hi - *lo >= 0.95 * constants::pi);
  }

  SUBCASE("unwrapped phi is continuous across the measured lock points") {
    std::vector<double> grid;
    for (int i = 0; i <= 1300; ++i)
      grid.push_back(hz_to_rad(-0.21e9 + (0.44e9 + 0.21e9) * i / 1300.0));
    const auto [wrapped, unwrapped] = phase_sweep(device, grid);
    for (size_t i = 1; i < unwrapped.size(); ++i)
      CHECK(std::abs(unwrapped[i] - unwrapped[i - 1]) < 0.2);
  }

  SUBCASE("empty grid rejected") {
    CHECK_THROWS_AS(phase_sweep(device, {}), ParameterError);
  }
}
