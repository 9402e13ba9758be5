/*
 * Copyright 2026 The cvrealign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cvrealign/channel.hpp"
#include "cvrealign/gaussian.hpp"
#include "cvrealign/quadratic.hpp"

namespace cvr {

/// Truncated two-mode density matrix ρ[k1][k2][m1][m2] = <k1 k2|ρ|m1 m2>,
/// indices 0..cutoff, stored row-major.
class FockTensor {
 public:
  FockTensor() = default;
  explicit FockTensor(int cutoff);

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }
  std::size_t size() const { return data_.size(); }

  double& at(int k1, int k2, int m1, int m2) { return data_[offset(k1, k2, m1, m2)]; }
  double at(int k1, int k2, int m1, int m2) const { return data_[offset(k1, k2, m1, m2)]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Σ ρ[a][b][a][b]
  double trace() const;
  void scale(double s);

  /// (k1 k2) x (m1 m2) matrix.
  Eigen::MatrixXd matrix() const;

  /// Copy restricted to indices 0..cutoff.
  FockTensor truncated(int cutoff) const;

 private:
  std::size_t offset(int k1, int k2, int m1, int m2) const {
    const std::size_t n = static_cast<std::size_t>(cutoff_) + 1;
    return ((static_cast<std::size_t>(k1) * n + k2) * n + m1) * n + m2;
  }

  int cutoff_ = 0;
  std::vector<double> data_;
};

inline constexpr double kMaxTaylorEntries = 1e8;

/// Raw Taylor coefficients c_k of exp(½ x A xᵀ + L x + c0) for every
/// multi-index k with k_i <= caps[i], row-major. Throws CapacityExceeded.
std::vector<double> taylor_coeffs(const QuadraticExponent& q, const std::vector<int>& caps);

/// Gaussian state with zero first moments.
FockTensor gaussian_fock(const SymmetricCCM& ccm, int cutoff);
/// Same for a dense CCM in the (a1†, a2†, a1, a2) basis.
FockTensor gaussian_fock(const Eigen::Matrix4d& ccm, int cutoff);

struct PhotonFock {
  FockTensor state;
  /// Trace before renormalization; the inverse of the normalization constant.
  double raw_trace = 0.0;
};

/// Applies a1^m a2^m (·) h.c. or its creation mirror and renormalizes.
/// Throws CutoffTooSmall or ZeroState.
PhotonFock apply_photon_ops(const FockTensor& f, PhotonOp op, int m);

/// Pure loss with transmissivity e^{-Γt} on both modes; requires nbar = 0.
FockTensor evolve_fock_pure_loss(const FockTensor& f, const ChannelParams& ch);

/// Thermal channel as pure loss (η = e^{-x}/G) followed by a
/// quantum-limited amplifier of gain G = 1 + nbar(1 - e^{-x}).
FockTensor evolve_fock_thermal(const FockTensor& f, const ChannelParams& ch);

/**
 * Evolved state of a derivative-dressed Gaussian kernel, built directly
 * from the evolved generating function: Fock elements are the Taylor
 * coefficients in (s, s') of the 12-variable exponent after the parameter
 * derivatives are taken. Renormalized to unit trace.
 */
PhotonFock joint_quadratic_fock(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                                const ChannelParams& ch, int cutoff);

struct RealignedNorms {
  double trace_norm = 0.0;
  /// Tr ρ^R = Σ ρ[a][a][b][b]
  double trace = 0.0;
  int blocks = 0;
};

/// Realigns R[(k1,m1)][(k2,m2)] = ρ[k1][k2][m1][m2] and sums its singular
/// values, one dense SVD per connected block of non-zeros.
RealignedNorms realign_and_trace_norm(const FockTensor& f);

struct FockMoments {
  double b1 = 0.0;
  double b2 = 0.0;
  /// -<a1 a2>, matching the sign convention of SymmetricCCM.
  double c1 = 0.0;
  double c2 = 0.0;
};

FockMoments extract_moments(const FockTensor& f);

/// Binary dump: "CVRO", u32 version, u32 cutoff, then row-major f64.
void save_fock(const FockTensor& f, const std::string& path);
FockTensor load_fock(const std::string& path);

}  // namespace cvr
