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

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "cvrealign/gaussian.hpp"
#include "cvrealign/quadratic.hpp"
#include "cvrealign/report.hpp"

namespace cvr {

/// Identical thermal amplitude-damping channel on both modes. Only the
/// product x = Γt enters, stored as `decay`.
struct ChannelParams {
  double decay = 0.0;
  double nbar = 0.0;

  /// Throws DomainError for negative inputs.
  static ChannelParams from_rate(double gamma, double t, double nbar);
  static ChannelParams from_decay(double decay, double nbar);
};

struct TmsvChannelScalars {
  double lambda = 0.0;
  double big_lambda = 0.0;  // λ e^{-x} / (1 - λ²)
  double n = 1.0;
  double q = 0.0;
};

/// Throws DomainError for λ outside (0, 1) or 2(N - Λ) <= 1.
TmsvChannelScalars tmsv_scalars(double lambda, const ChannelParams& ch);

/// γ_t = e^{-x} γ + (ñ + ½)(1 - e^{-x}) σ1⊗I.
SymmetricCCM evolve_ccm(const SymmetricCCM& ccm, const ChannelParams& ch);

/// (ε1, ε2, ξ1, ξ2, η1, η2, ζ1, ζ2)
using GenParams = std::array<double, 8>;

GenParams evolve_gen_params(const GenParams& p, const SymmetricCCM& ccm, const ChannelParams& ch);

enum class GenGroup { Eps = 0, Xi = 1, Eta = 2, Zeta = 3 };

/// 2x8 map picking one parameter pair out of the 8-vector.
Eigen::MatrixXd parameter_selector(GenGroup g);

/// Evolved parameter pairs as 2x8 linear maps of the original 8-vector.
struct EvolvedSelectors {
  Eigen::MatrixXd eps, xi, eta, zeta;
};

EvolvedSelectors evolved_selectors(const SymmetricCCM& ccm, const ChannelParams& ch);

/// Max-abs residual of the identity that defines the parameter map:
/// e^{-x/2}[β⁻¹(ε+η, ξ+ζ) + (ξ, η)] = β_t⁻¹(ε_t+η_t, ξ_t+ζ_t) + (ξ_t, η_t).
double gen_params_residual(const GenParams& p, const GenParams& pt, const SymmetricCCM& ccm,
                           const ChannelParams& ch);

/**
 * Quadratic form of ln P over the eight generating parameters for the
 * given β⁻¹ and the 2x8 maps that pick out ε, ξ, η, ζ from the parameter
 * vector: ln P = ½ p Q pᵀ with
 *   Q = -Uᵀ β⁻¹ U - (ZᵀH + HᵀZ) - (EᵀX + XᵀE) - (HᵀX + XᵀH),  U = [E+H; X+Z].
 */
Eigen::MatrixXd p_quadratic_form(const Eigen::Matrix4d& beta_inverse, const Eigen::MatrixXd& e,
                                 const Eigen::MatrixXd& x, const Eigen::MatrixXd& h,
                                 const Eigen::MatrixXd& z);

/// Plain-branch Tr ρ^R of the evolved state through the product of the
/// P, P_t⁻¹ and P_t^R exponents.
double evolved_trace_product(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                             const ChannelParams& ch);

/// Plain-branch Tr ρ^R of the evolved state through the single quadratic
/// form in v = (ε, -ζ, η, -ξ). Throws SingularMatrix when γ'' or γ_t'' is
/// singular.
double evolved_trace_quadratic(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                               const ChannelParams& ch);

/// Both branches, max reported; falls back to the product route when the
/// quadratic route is singular.
CriterionReport evolved_criterion_general(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                                          const ChannelParams& ch);

/// Closed forms for photon-added / subtracted two-mode squeezed vacuum.
CriterionReport evolved_photon_criterion_tmsv(double lambda, const ChannelParams& ch, PhotonOp op);

/// Second-moment test for the same states; entangled when value < 1.
CriterionReport second_moment_evolved(double lambda, const ChannelParams& ch, PhotonOp op);

struct CriticalTime {
  /// Γt* when found; 0 when the criterion fails already at Γt = 0.
  std::optional<double> decay;
  bool detected_initially = true;
  bool non_monotonic = false;
  int sign_changes = 0;
};

inline constexpr double kCriticalBracket = 50.0;
inline constexpr int kCriticalScan = 1000;

/// Smallest Γt in [0, 50] where the criterion stops detecting entanglement.
CriticalTime critical_time(const std::function<CriterionReport(double decay)>& criterion);

enum class TmsvCriterion { RealignSubtract, RealignAdd, SecondMomentSubtract, SecondMomentAdd };

/// Parses "realign-sub", "second-moment-add", ...; throws InvalidArgument.
TmsvCriterion parse_tmsv_criterion(const std::string& name);
const char* tmsv_criterion_name(TmsvCriterion c) noexcept;

CriterionReport evaluate_tmsv_criterion(TmsvCriterion c, double lambda, const ChannelParams& ch);

CriticalTime critical_time_tmsv(TmsvCriterion c, double lambda, double nbar);

}  // namespace cvr
