// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sliding mode learning control: the surface, the conventional term and the
// online adaptation laws of the type-2 network. Every law is stepped with
// forward Euler at the control period.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "smlc/fuzzy.hpp"

namespace smlc {

/// Bits of the per-step clamp mask written to traces.
enum ClampFlag : std::uint32_t {
  kPremiseDenominator1 = 1u << 0,  // |e - c| hit denom_clamp
  kPremiseDenominator2 = 1u << 1,  // |e_dot - c| hit denom_clamp
  kConsequentDenominator = 1u << 2,
  kQDenominator = 1u << 3,
  kSigmaFloor = 1u << 4,
  kSigmaLimiter = 1u << 5,
  kDerivativePadding = 1u << 6,  // set by the simulator on startup steps
};

template <typename Scalar>
struct SMLCConfig {
  Scalar lambda{1};
  int n{2};
  Scalar gamma_k{0.1};
  Scalar gamma_alpha{0.1};
  Scalar chi{0.05};
  Scalar epsilon{0.001};
  Scalar denom_clamp{0.001};
  Scalar sigma_floor{1e-6};
  // Largest relative change of a width in one step; <= 0 turns it off.
  Scalar sigma_step_limit{0};

  void validate() const {
    if (!(lambda > 0 && gamma_k > 0 && gamma_alpha > 0 && chi > 0 && epsilon > 0 &&
          denom_clamp > 0 && sigma_floor > 0))
      throw InvalidParameter("controller constants must be strictly positive");
    if (n < 2) throw InvalidParameter("system order must be at least 2");
  }
};

template <typename Scalar>
struct ControllerState {
  MFBank<Scalar> bank;
  ConsequentSet<Scalar> cons;
  Scalar k{1};
  Scalar alpha{1};
};

/// Tracking error and its derivatives. `derivs` always carries at least
/// e, e_dot and e_ddot because the premise laws read e_ddot even for
/// second-order plants; only the first `order` entries enter the surface.
template <typename Scalar>
struct ErrorSignals {
  VectorX<Scalar> derivs;
  int order{2};

  ErrorSignals() = default;
  ErrorSignals(int n, Scalar e, Scalar e_dot, Scalar e_ddot)
      : derivs(VectorX<Scalar>::Zero(std::max(n, 3))), order(n) {
    derivs(0) = e;
    derivs(1) = e_dot;
    derivs(2) = e_ddot;
  }

  Scalar e() const { return derivs(0); }
  Scalar e_dot() const { return derivs(1); }
  Scalar e_ddot() const { return derivs(2); }
  auto surface_terms() const { return derivs.head(order); }
};

/// s = (d/dt + lambda)^(n-1) e, expanded; n is the vector length.
template <typename Derived>
typename Derived::Scalar sliding_surface(const Eigen::MatrixBase<Derived>& derivs,
                                         typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = derivs.size();
  Scalar s(0);
  Scalar binom(1);  // C(n-1, m)
  for (Eigen::Index m = 0; m < n; ++m) {
    s += binom * std::pow(lambda, static_cast<Scalar>(n - 1 - m)) * derivs(m);
    binom = binom * Scalar(n - 1 - m) / Scalar(m + 1);
  }
  return s;
}

template <typename Scalar>
Scalar sliding_surface(const ErrorSignals<Scalar>& err, Scalar lambda) {
  return sliding_surface(err.surface_terms(), lambda);
}

template <typename Scalar>
Scalar smoothed_sign(Scalar s, Scalar chi) {
  return s / (std::abs(s) + chi);
}

template <typename Scalar>
Scalar conventional_control(Scalar k, Scalar s, Scalar chi) {
  return k * smoothed_sign(s, chi);
}

template <typename Scalar>
Scalar update_gain(Scalar k, Scalar s, Scalar gamma_k, Scalar epsilon, Scalar dt) {
  if (std::abs(s) < epsilon) return k;
  return k + dt * gamma_k * std::abs(s) / Scalar(2);
}

template <typename Scalar>
Scalar update_learning_rate(Scalar alpha, Scalar s, Scalar gamma_alpha, Scalar epsilon, Scalar dt) {
  if (std::abs(s) < epsilon) return alpha;
  return alpha + dt * gamma_alpha * std::abs(s);
}

/// Pushes a small denominator out to +/-clamp, keeping its sign (0 goes to +clamp).
template <typename Scalar>
Scalar clamp_denominator(Scalar value, Scalar clamp, bool* fired = nullptr) {
  if (std::abs(value) >= clamp) return value;
  if (fired) *fired = true;
  return value < Scalar(0) ? -clamp : clamp;
}

namespace detail {

template <typename Scalar>
void step_gaussian(Scalar& center, Scalar& sigma, Scalar x, Scalar x_dot, Scalar alpha_sgn,
                   const SMLCConfig<Scalar>& cfg, Scalar dt, std::uint32_t& flags,
                   std::uint32_t denom_bit) {
  const Scalar diff = x - center;
  bool clamped = false;
  const Scalar den = clamp_denominator(diff, cfg.denom_clamp, &clamped);
  if (clamped) flags |= denom_bit;

  const Scalar ratio = sigma / den;
  Scalar sigma_dot = -sigma * (Scalar(1) + ratio * ratio) * alpha_sgn;
  if (cfg.sigma_step_limit > 0) {
    const Scalar cap = cfg.sigma_step_limit * sigma / dt;
    if (std::abs(sigma_dot) > cap) {
      sigma_dot = sigma_dot < 0 ? -cap : cap;
      flags |= kSigmaLimiter;
    }
  }

  center = center + dt * (x_dot + diff * alpha_sgn);
  sigma = sigma + dt * sigma_dot;
  if (!(sigma >= cfg.sigma_floor)) {
    sigma = cfg.sigma_floor;
    flags |= kSigmaFloor;
  }
}

}  // namespace detail

/// One Euler step of the eight center and width laws. Input 1 is driven by
/// (e, e_dot) and input 2 by (e_dot, e_ddot).
template <typename Scalar>
MFBank<Scalar> update_premise(const ControllerState<Scalar>& state, const ErrorSignals<Scalar>& err,
                              Scalar s, const SMLCConfig<Scalar>& cfg, Scalar dt,
                              std::uint32_t* flags = nullptr) {
  const Scalar alpha_sgn = state.alpha * smoothed_sign(s, cfg.chi);
  std::uint32_t fired = 0;
  MFBank<Scalar> next = state.bank;
  for (auto& mf : next.input1) {
    detail::step_gaussian(mf.lower_center, mf.lower_sigma, err.e(), err.e_dot(), alpha_sgn, cfg, dt,
                          fired, kPremiseDenominator1);
    detail::step_gaussian(mf.upper_center, mf.upper_sigma, err.e(), err.e_dot(), alpha_sgn, cfg, dt,
                          fired, kPremiseDenominator1);
  }
  for (auto& mf : next.input2) {
    detail::step_gaussian(mf.lower_center, mf.lower_sigma, err.e_dot(), err.e_ddot(), alpha_sgn,
                          cfg, dt, fired, kPremiseDenominator2);
    detail::step_gaussian(mf.upper_center, mf.upper_sigma, err.e_dot(), err.e_ddot(), alpha_sgn,
                          cfg, dt, fired, kPremiseDenominator2);
  }
  if (flags) *flags |= fired;
  return next;
}

template <typename Scalar>
VectorX<Scalar> update_consequents(const ControllerState<Scalar>& state,
                                   const FiringStrengths<Scalar>& fs, Scalar s,
                                   const SMLCConfig<Scalar>& cfg, Scalar dt,
                                   std::uint32_t* flags = nullptr) {
  const Scalar q = state.cons.q;
  const VectorX<Scalar> v = q * fs.lower_normalized + (Scalar(1) - q) * fs.upper_normalized;
  Scalar den = v.squaredNorm();
  if (den < cfg.denom_clamp) {
    den = cfg.denom_clamp;
    if (flags) *flags |= kConsequentDenominator;
  }
  const Scalar alpha_sgn = state.alpha * smoothed_sign(s, cfg.chi);
  return state.cons.f + dt * (v / den) * alpha_sgn;
}

/// q is deliberately left unbounded.
template <typename Scalar>
Scalar update_q(const ControllerState<Scalar>& state, const FiringStrengths<Scalar>& fs, Scalar s,
                const SMLCConfig<Scalar>& cfg, Scalar dt, std::uint32_t* flags = nullptr) {
  bool clamped = false;
  const Scalar den = clamp_denominator(
      state.cons.f.dot(fs.lower_normalized - fs.upper_normalized), cfg.denom_clamp, &clamped);
  if (clamped && flags) *flags |= kQDenominator;
  return state.cons.q + dt * state.alpha * smoothed_sign(s, cfg.chi) / den;
}

template <typename Scalar>
struct StepResult {
  Scalar u{0};
  Scalar u_c{0};
  Scalar u_n{0};
  Scalar s{0};
  ControllerState<Scalar> next;
  FiringStrengths<Scalar> firing;
  std::uint32_t flags{0};
  bool deadzone{false};
};

/// Emits u from the current parameters, then advances every adapted quantity.
template <typename Scalar>
StepResult<Scalar> control_step(const ControllerState<Scalar>& state, const ErrorSignals<Scalar>& err,
                                const SMLCConfig<Scalar>& cfg, Scalar dt) {
  StepResult<Scalar> out;
  out.s = sliding_surface(err, cfg.lambda);
  out.firing = firing_strengths(err.e(), err.e_dot(), state.bank);
  normalize(out.firing);
  out.u_n = t2_output(out.firing, state.cons);
  out.u_c = conventional_control(state.k, out.s, cfg.chi);
  out.u = out.u_c + out.u_n;

  out.next.bank = update_premise(state, err, out.s, cfg, dt, &out.flags);
  out.next.cons.f = update_consequents(state, out.firing, out.s, cfg, dt, &out.flags);
  out.next.cons.q = update_q(state, out.firing, out.s, cfg, dt, &out.flags);
  out.next.alpha = update_learning_rate(state.alpha, out.s, cfg.gamma_alpha, cfg.epsilon, dt);
  out.next.k = update_gain(state.k, out.s, cfg.gamma_k, cfg.epsilon, dt);
  out.deadzone = std::abs(out.s) < cfg.epsilon;
  return out;
}

/// Evenly spaced sets over [-range, range] with matching lower/upper centers,
/// lower width half the spacing, upper width one spacing, and zero consequents.
template <typename Scalar>
ControllerState<Scalar> initial_state(int sets1, int sets2, Scalar range1, Scalar range2, Scalar k0,
                                      Scalar alpha0, Scalar q0) {
  if (sets1 < 1 || sets2 < 1) throw InvalidParameter("need at least one fuzzy set per input");
  if (!(range1 > 0 && range2 > 0)) throw InvalidParameter("input range must be positive");
  auto layout = [](int count, Scalar range) {
    std::vector<Type2Gaussian<Scalar>> sets(static_cast<std::size_t>(count));
    const Scalar spacing = count > 1 ? Scalar(2) * range / Scalar(count - 1) : range;
    for (int i = 0; i < count; ++i) {
      const Scalar c = count > 1 ? -range + spacing * Scalar(i) : Scalar(0);
      sets[static_cast<std::size_t>(i)] = {c, c, Scalar(0.5) * spacing, spacing};
    }
    return sets;
  };
  ControllerState<Scalar> st;
  st.bank.input1 = layout(sets1, range1);
  st.bank.input2 = layout(sets2, range2);
  st.cons.f = VectorX<Scalar>::Zero(st.bank.rule_count());
  st.cons.q = q0;
  st.k = k0;
  st.alpha = alpha0;
  return st;
}

}  // namespace smlc
