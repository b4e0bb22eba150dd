#include "wgm/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wgm/errors.hpp"

namespace wgm {

DoubletParams params_from_qs(double omega0, double q0, double qe, double q_beta,
                             double center_offset) {
  if (!(omega0 > 0.0) || !(q0 > 0.0) || !(qe > 0.0) || !(q_beta > 0.0))
    throw ParameterError("params_from_qs: omega0 and quality factors must be positive");
  return {omega0 / q0, omega0 / qe, omega0 / (2.0 * q_beta), center_offset};
}

double doublet_model(const DoubletParams& p, double detuning) {
  const double gamma_t = p.gamma_t();
  if (!(gamma_t > 0.0)) throw ParameterError("doublet_model: Gamma_t must be positive");
  const complexd d(-gamma_t / 2.0, detuning - p.center_offset);
  const complexd response = 1.0 + p.gamma_e * d / (d * d + p.beta * p.beta);
  return std::norm(response);
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, std::vector<double> step,
                          int max_iterations, double x_tolerance, double f_tolerance) {
  const size_t n = x0.size();
  if (step.size() != n) throw ParameterError("nelder_mead: step size mismatch");

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  std::vector<double> values(n + 1);
  for (size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

  SimplexResult result;
  std::vector<size_t> order(n + 1);
  std::vector<double> centroid(n), candidate(n);

  for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t best = order[0], worst = order[n], second_worst = order[n - 1];

    // Converged when the simplex has collapsed in both x and f.
    double x_spread = 0.0;
    for (size_t i = 0; i <= n; ++i)
      for (size_t k = 0; k < n; ++k) {
        const double scale = std::max({std::abs(simplex[best][k]), std::abs(step[k]), 1e-300});
        x_spread = std::max(x_spread, std::abs(simplex[i][k] - simplex[best][k]) / scale);
      }
    const double f_spread = values[worst] - values[best];
    if (x_spread < x_tolerance ||
        f_spread <= f_tolerance * (std::abs(values[best]) + 1e-30)) {
      result.converged = true;
      break;
    }

    for (size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (size_t i = 0; i <= n; ++i)
        if (i != worst) sum += simplex[i][k];
      centroid[k] = sum / n;
    }

    const auto blend = [&](double coeff) {
      for (size_t k = 0; k < n; ++k)
        candidate[k] = centroid[k] + coeff * (centroid[k] - simplex[worst][k]);
      return f(candidate);
    };

    const double reflected = blend(1.0);
    if (reflected < values[order[0]]) {
      const std::vector<double> reflected_x = candidate;
      const double expanded = blend(2.0);
      if (expanded < reflected) {
        simplex[worst] = candidate;
        values[worst] = expanded;
      } else {
        simplex[worst] = reflected_x;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = candidate;
      values[worst] = reflected;
      continue;
    }
    const double contracted = blend(reflected < values[worst] ? 0.5 : -0.5);
    if (contracted < std::min(reflected, values[worst])) {
      simplex[worst] = candidate;
      values[worst] = contracted;
      continue;
    }
    // Shrink towards the best vertex.
    for (size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (size_t k = 0; k < n; ++k)
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      values[i] = f(simplex[i]);
    }
  }

  const size_t best = static_cast<size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

namespace {

struct DipEstimate {
  double center = 0.0;
  double beta = 0.0;
  double gamma_t = 0.0;
  double gamma_e = 0.0;
};

DipEstimate initial_guess(const SweepTrace& trace) {
  const size_t n = trace.detuning.size();
  std::vector<double> sorted_t = trace.transmission;
  std::sort(sorted_t.begin(), sorted_t.end());
  const double baseline = sorted_t[static_cast<size_t>(0.9 * (n - 1))];
  const double t_min = sorted_t.front();
  if (baseline - t_min < 1e-3 * std::max(baseline, 1e-30))
    throw ParameterError("fit_doublet: trace is flat, no resonance found");

  const size_t dip1 =
      static_cast<size_t>(std::min_element(trace.transmission.begin(),
                                           trace.transmission.end()) -
                          trace.transmission.begin());
  const double half_level = 0.5 * (trace.transmission[dip1] + baseline);
  // Half-depth width of the first dip -> Gamma_t.
  size_t left = dip1, right = dip1;
  while (left > 0 && trace.transmission[left] < half_level) --left;
  while (right + 1 < n && trace.transmission[right] < half_level) ++right;
  double width = trace.detuning[right] - trace.detuning[left];
  const double span = trace.detuning.back() - trace.detuning.front();
  if (!(width > 0.0)) width = span / static_cast<double>(n);

  // Second dip outside a mask around the first.
  const double mask_lo = trace.detuning[dip1] - 1.5 * width;
  const double mask_hi = trace.detuning[dip1] + 1.5 * width;
  double t2 = baseline;
  size_t dip2 = dip1;
  for (size_t i = 0; i < n; ++i) {
    if (trace.detuning[i] >= mask_lo && trace.detuning[i] <= mask_hi) continue;
    if (trace.transmission[i] < t2) {
      t2 = trace.transmission[i];
      dip2 = i;
    }
  }

  DipEstimate est;
  est.gamma_t = width;
  const bool resolved_doublet =
      dip2 != dip1 && (baseline - t2) > 0.25 * (baseline - trace.transmission[dip1]);
  if (resolved_doublet) {
    est.center = 0.5 * (trace.detuning[dip1] + trace.detuning[dip2]);
    est.beta = 0.5 * std::abs(trace.detuning[dip1] - trace.detuning[dip2]);
  } else {
    est.center = trace.detuning[dip1];
    est.beta = 0.25 * width;
  }
  // Resolved doublet dip depth: T = (1 - Gamma_e/Gamma_t)^2.
  const double depth_root = std::sqrt(std::clamp(trace.transmission[dip1], 0.0, 1.0));
  est.gamma_e = est.gamma_t * (1.0 - depth_root);
  if (!(est.gamma_e > 0.0)) est.gamma_e = 0.5 * est.gamma_t;
  return est;
}

}  // namespace

FitResult fit_doublet(const SweepTrace& trace, std::optional<DoubletParams> init) {
  const size_t n = trace.detuning.size();
  if (n != trace.transmission.size())
    throw ParameterError("fit_doublet: detuning/transmission size mismatch");
  if (n < 50) throw ParameterError("fit_doublet: need at least 50 samples");
  for (size_t i = 1; i < n; ++i)
    if (!(trace.detuning[i] > trace.detuning[i - 1]))
      throw ParameterError("fit_doublet: detuning must be strictly increasing");
  for (double t : trace.transmission)
    if (!std::isfinite(t)) throw ParameterError("fit_doublet: non-finite transmission");

  // Rates are folded to |value| inside the objective so the simplex can roam.
  const auto objective = [&](const std::vector<double>& p) {
    const DoubletParams params{std::abs(p[0]), std::abs(p[1]), std::abs(p[2]), p[3]};
    if (!(params.gamma_t() > 0.0)) return 1e30;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = doublet_model(params, trace.detuning[i]) - trace.transmission[i];
      sum += r * r;
    }
    return sum / n;
  };

  DoubletParams guess;
  if (init) {
    guess = *init;
  } else {
    const DipEstimate est = initial_guess(trace);
    guess = {est.gamma_t - est.gamma_e, est.gamma_e, est.beta, est.center};
  }

  struct Start {
    double f0, fe, fb;
    bool swap;
  };
  const Start starts[] = {{1.0, 1.0, 1.0, false}, {0.5, 2.0, 1.0, false},
                          {2.0, 0.5, 1.0, false}, {1.4, 1.4, 0.85, false},
                          {0.7, 0.7, 1.15, false}, {1.0, 1.0, 1.0, true}};

  std::vector<std::pair<SimplexResult, DoubletParams>> finals;
  for (const Start& s : starts) {
    DoubletParams p0 = guess;
    if (s.swap) std::swap(p0.gamma0, p0.gamma_e);
    p0.gamma0 *= s.f0;
    p0.gamma_e *= s.fe;
    p0.beta *= s.fb;
    const double rate_scale = std::max(p0.gamma_t(), 1e-12);
    std::vector<double> x0{p0.gamma0, p0.gamma_e, p0.beta, p0.center_offset};
    std::vector<double> step{0.2 * rate_scale, 0.2 * rate_scale,
                             0.2 * std::max(p0.beta, 0.1 * rate_scale),
                             0.1 * rate_scale};
    SimplexResult r = nelder_mead(objective, x0, step, 4000, 1e-9, 1e-12);
    // Polish from the found point; also refreshes the convergence flag.
    std::vector<double> step2{1e-4 * rate_scale, 1e-4 * rate_scale,
                              1e-4 * rate_scale, 1e-4 * rate_scale};
    SimplexResult polished = nelder_mead(objective, r.x, step2, 2000, 1e-9, 1e-12);
    if (polished.value <= r.value) r = polished;
    finals.emplace_back(
        r, DoubletParams{std::abs(r.x[0]), std::abs(r.x[1]), std::abs(r.x[2]), r.x[3]});
  }

  size_t best = 0;
  for (size_t i = 1; i < finals.size(); ++i)
    if (finals[i].first.value < finals[best].first.value) best = i;

  FitResult out;
  const DoubletParams& bp = finals[best].second;
  out.gamma0 = bp.gamma0;
  out.gamma_e = bp.gamma_e;
  out.beta = bp.beta;
  out.center_offset = bp.center_offset;
  out.residual_rms = std::sqrt(finals[best].first.value);
  out.converged = finals[best].first.converged;

  // Exchanged-loss ambiguity: a distinct (gamma0, gamma_e) split whose
  // residual ties with the winner.
  const double best_rms = out.residual_rms;
  for (size_t i = 0; i < finals.size(); ++i) {
    if (i == best) continue;
    const double rms = std::sqrt(finals[i].first.value);
    const double tie_band = 1e-6 * std::max({best_rms, rms, 1e-30});
    const bool tie = std::abs(rms - best_rms) <= tie_band ||
                     (best_rms < 1e-12 && rms < 1e-12);
    const bool distinct =
        std::abs(finals[i].second.gamma_e - out.gamma_e) > 1e-3 * bp.gamma_t();
    if (tie && distinct) {
      out.ambiguous = true;
      out.alternate = finals[i].second;
      out.alternate_residual_rms = rms;
      break;
    }
  }
  return out;
}

}  // namespace wgm
