// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Interval type-2 TSK inference with Gaussian membership functions.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "smlc/errors.hpp"

namespace smlc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Lower and upper Gaussian of one fuzzy set. The two halves evolve
/// independently, so no containment between them is assumed.
template <typename Scalar>
struct Type2Gaussian {
  Scalar lower_center{0};
  Scalar upper_center{0};
  Scalar lower_sigma{1};
  Scalar upper_sigma{1};
};

template <typename Scalar>
struct MFBank {
  std::vector<Type2Gaussian<Scalar>> input1;
  std::vector<Type2Gaussian<Scalar>> input2;

  Eigen::Index rule_count() const {
    return static_cast<Eigen::Index>(input1.size() * input2.size());
  }
};

template <typename Scalar>
struct FiringStrengths {
  VectorX<Scalar> lower;
  VectorX<Scalar> upper;
  VectorX<Scalar> lower_normalized;
  VectorX<Scalar> upper_normalized;
};

template <typename Scalar>
struct ConsequentSet {
  VectorX<Scalar> f;
  Scalar q{0.5};
};

/// Smallest raw firing sum that is still normalized.
inline constexpr double kFiringUnderflow = 1e-300;

template <typename Scalar>
Scalar eval_gaussian(Scalar x, Scalar center, Scalar sigma) {
  if (!(sigma > Scalar(0))) throw InvalidParameter("gaussian sigma must be positive");
  const Scalar z = (x - center) / sigma;
  return std::exp(-z * z);
}

/// Raw lower/upper rule strengths, row-major over (input1, input2).
template <typename Scalar>
FiringStrengths<Scalar> firing_strengths(Scalar e, Scalar e_dot, const MFBank<Scalar>& bank) {
  const auto I = static_cast<Eigen::Index>(bank.input1.size());
  const auto J = static_cast<Eigen::Index>(bank.input2.size());
  if (I == 0 || J == 0) throw InvalidParameter("membership bank is empty");

  VectorX<Scalar> lo1(I), up1(I), lo2(J), up2(J);
  for (Eigen::Index i = 0; i < I; ++i) {
    const auto& mf = bank.input1[static_cast<std::size_t>(i)];
    lo1(i) = eval_gaussian(e, mf.lower_center, mf.lower_sigma);
    up1(i) = eval_gaussian(e, mf.upper_center, mf.upper_sigma);
  }
  for (Eigen::Index j = 0; j < J; ++j) {
    const auto& mf = bank.input2[static_cast<std::size_t>(j)];
    lo2(j) = eval_gaussian(e_dot, mf.lower_center, mf.lower_sigma);
    up2(j) = eval_gaussian(e_dot, mf.upper_center, mf.upper_sigma);
  }

  FiringStrengths<Scalar> fs;
  fs.lower.resize(I * J);
  fs.upper.resize(I * J);
  for (Eigen::Index i = 0; i < I; ++i) {
    fs.lower.segment(i * J, J) = lo1(i) * lo2;
    fs.upper.segment(i * J, J) = up1(i) * up2;
  }
  return fs;
}

template <typename Derived>
VectorX<typename Derived::Scalar> normalize(const Eigen::MatrixBase<Derived>& raw) {
  using Scalar = typename Derived::Scalar;
  const Scalar total = raw.sum();
  if (!(total >= Scalar(kFiringUnderflow)))
    throw DegenerateFiring("firing strength sum underflowed");
  return raw / total;
}

/// Fills the normalized halves in place.
template <typename Scalar>
void normalize(FiringStrengths<Scalar>& fs) {
  fs.lower_normalized = normalize(fs.lower);
  fs.upper_normalized = normalize(fs.upper);
}

template <typename Scalar>
Scalar t2_output(const FiringStrengths<Scalar>& fs, const ConsequentSet<Scalar>& cons) {
  return cons.q * cons.f.dot(fs.lower_normalized) +
         (Scalar(1) - cons.q) * cons.f.dot(fs.upper_normalized);
}

}  // namespace smlc
