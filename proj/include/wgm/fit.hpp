#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wgm/model.hpp"

namespace wgm {

/// Calibrated transmission sweep: detuning (rad/s, strictly increasing) and
/// normalized transmission samples.
struct SweepTrace {
  std::vector<double> detuning;
  std::vector<double> transmission;
};

struct DoubletParams {
  double gamma0 = 0.0;
  double gamma_e = 0.0;
  double beta = 0.0;
  double center_offset = 0.0;

  double gamma_t() const { return gamma0 + gamma_e; }
};

/// Rates from the quality-factor parameterization: Gamma = omega0/Q and
/// beta = omega0/(2 Q_beta).
DoubletParams params_from_qs(double omega0, double q0, double qe, double q_beta,
                             double center_offset = 0.0);

struct FitResult {
  double gamma0 = 0.0;
  double gamma_e = 0.0;
  double beta = 0.0;
  double center_offset = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  /// Set when an exchanged-loss (under vs over coupled) minimum ties within
  /// 1e-6 relative residual; `alternate` then holds the other branch.
  bool ambiguous = false;
  std::optional<DoubletParams> alternate;
  double alternate_residual_rms = 0.0;

  DoubletParams params() const { return {gamma0, gamma_e, beta, center_offset}; }
};

/// Symmetric coupled-mode doublet transmission,
/// T = |1 + Gamma_e d / (d^2 + beta^2)|^2 with d = i(D - center) - Gamma_t/2.
double doublet_model(const DoubletParams& params, double detuning);

/// Least-squares doublet fit: dip-finding initialization, derivative-free
/// simplex descent with five perturbed multi-starts plus the exchanged-loss
/// branch. Needs >= 50 samples spanning both dips.
FitResult fit_doublet(const SweepTrace& trace,
                      std::optional<DoubletParams> init = std::nullopt);

/// Generic Nelder-Mead minimizer used by the fitter.
struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, std::vector<double> step,
                          int max_iterations = 4000, double x_tolerance = 1e-10,
                          double f_tolerance = 1e-14);

}  // namespace wgm
