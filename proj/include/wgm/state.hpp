#pragma once

#include <array>

#include "wgm/model.hpp"
#include "wgm/pump.hpp"

namespace wgm {

/// Two-photon state over the traveling-wave path basis
/// {|f>s|f>i, |f>s|b>i, |b>s|f>i, |b>s|b>i}.
struct BiphotonState {
  complexd amp_ff = 0.0;
  complexd amp_fb = 0.0;
  complexd amp_bf = 0.0;
  complexd amp_bb = 0.0;

  double norm_sq() const;
  BiphotonState normalized() const;
  std::array<complexd, 4> amps() const { return {amp_ff, amp_fb, amp_bf, amp_bb}; }
};

/// Pair-created state: amplitudes proportional to the squared intracavity
/// pump fields, co-propagating components only.
BiphotonState initial_state(const PumpSteadyState& pump);

/// Closed-form unitary evolution under the counter-propagating coupling,
/// equal coupling rate beta for signal and idler, phi_beta = 0. On a
/// pair-created state (c_f, 0, 0, c_b) this gives
///   ff: c_f cos^2(bt) - c_b sin^2(bt)
///   bb: c_b cos^2(bt) - c_f sin^2(bt)
///   fb = bf: (i/2)(c_f + c_b) sin(2bt)
/// where the cross-term factor 1/2 is fixed by unitarity.
BiphotonState evolve_closed(const BiphotonState& state, double t, double beta);

/// Independent check: build the 4x4 two-photon Hamiltonian from the
/// single-mode coupling -(beta e^{i phi}|f><b| + h.c.) on the signal and
/// idler slots, exponentiate numerically, apply.
BiphotonState evolve_oracle(const BiphotonState& state, double t, double beta,
                            double phi_beta);

/// (P_ff, P_fb, P_bf, P_bb) of a normalized state.
std::array<double, 4> path_probabilities(const BiphotonState& state);

/// Traveling <-> standing wave basis change for the two-photon state. The
/// standing modes |-> and |+> are the lower/higher energy eigenstates of the
/// coupled mode pair: |-> = (|f> + e^{-i phi}|b>)/sqrt2, energy omega0 - beta.
struct BasisTransform {
  double phi_beta = 0.0;

  /// Single-mode map from (c_f, c_b) to (c_-, c_+) coefficients.
  std::array<complexd, 4> single_mode_matrix() const;
};

BiphotonState to_standing_basis(const BiphotonState& state, const BasisTransform& xf);
BiphotonState from_standing_basis(const BiphotonState& state, const BasisTransform& xf);

}  // namespace wgm
