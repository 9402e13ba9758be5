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

#include "cvrealign/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "cvrealign/error.hpp"

namespace cvr {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 0) throw Error(ErrorCode::InvalidArgument, "cutoff must be non-negative");
  const double entries = std::pow(static_cast<double>(cutoff) + 1.0, 4);
  if (entries > kMaxTaylorEntries) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff << " needs " << entries << " tensor entries (limit " << kMaxTaylorEntries << ")";
    throw Error(ErrorCode::CapacityExceeded, msg.str());
  }
}

/// Row-major walk over the box 0..caps. For each index k the lead variable
/// i is its first non-zero slot and k' = k - e_i. With `normalized` the
/// table holds d_k = sqrt(k!) c_k:
///   d_k = (L_i d_k' + Σ_j A_ij sqrt(k'_j) d_{k'-e_j}) / sqrt(k_i)
/// otherwise raw coefficients with k_i in place of sqrt(k_i) and no sqrt(k'_j).
std::vector<double> coefficient_table(const Eigen::MatrixXd& a, const Eigen::VectorXd& l,
                                      const std::vector<int>& caps, bool normalized) {
  const int n = static_cast<int>(caps.size());
  if (a.rows() != n || a.cols() != n || l.size() != n)
    throw Error(ErrorCode::InvalidArgument, "taylor coefficients: dimension mismatch");
  double entries = 1.0;
  for (int c : caps) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "taylor coefficients: negative cap");
    entries *= c + 1.0;
  }
  if (entries > kMaxTaylorEntries) {
    std::ostringstream msg;
    msg << "coefficient table of " << entries << " entries exceeds the limit " << kMaxTaylorEntries;
    throw Error(ErrorCode::CapacityExceeded, msg.str());
  }
  std::vector<std::size_t> stride(n);
  std::size_t box = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = box;
    box *= static_cast<std::size_t>(caps[i] + 1);
  }
  int top = *std::max_element(caps.begin(), caps.end());
  std::vector<double> root(top + 2);
  for (int k = 0; k < static_cast<int>(root.size()); ++k) root[k] = std::sqrt(static_cast<double>(k));

  std::vector<double> t(box, 0.0);
  if (box == 0) return t;
  t[0] = 1.0;
  std::vector<int> cur(n, 0);
  for (std::size_t pos = 1; pos < box; ++pos) {
    for (int i = n - 1; i >= 0; --i) {
      if (++cur[i] <= caps[i]) break;
      cur[i] = 0;
    }
    int lead = 0;
    while (cur[lead] == 0) ++lead;
    const std::size_t prev = pos - stride[lead];
    const int ki = cur[lead];
    --cur[lead];
    double s = l[lead] * t[prev];
    for (int j = 0; j < n; ++j) {
      const double aij = a(lead, j);
      if (cur[j] > 0 && aij != 0.0) s += aij * (normalized ? root[cur[j]] : 1.0) * t[prev - stride[j]];
    }
    ++cur[lead];
    t[pos] = normalized ? s / root[ki] : s / ki;
  }
  return t;
}

Eigen::Matrix4d sigma3_identity() { return Eigen::Vector4d(1.0, 1.0, -1.0, -1.0).asDiagonal(); }

FockTensor fock_from_kernel(const Eigen::Matrix4d& a, double det_gamma_prime, int cutoff) {
  require_cutoff(cutoff);
  if (!(det_gamma_prime > 0.0)) throw Error(ErrorCode::DomainError, "det gamma' must be positive");
  FockTensor f(cutoff);
  f.data() = coefficient_table(a, Eigen::Vector4d::Zero(), std::vector<int>(4, cutoff), true);
  f.scale(1.0 / std::sqrt(det_gamma_prime));
  return f;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Applies ρ'_{k,m} = Σ_j w[k][m][j] ρ_{k+shift·j, m+shift·j} on one mode.
FockTensor apply_single_mode(const FockTensor& f, int mode, int shift,
                             const std::vector<std::vector<std::vector<double>>>& w) {
  const int n = f.dim();
  FockTensor out(f.cutoff());
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (std::size_t j = 0; j < w[k][m].size(); ++j) {
        const double c = w[k][m][j];
        if (c == 0.0) continue;
        const int ks = k + shift * static_cast<int>(j), ms = m + shift * static_cast<int>(j);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            if (mode == 0)
              out.at(k, a, m, b) += c * f.at(ks, a, ms, b);
            else
              out.at(a, k, b, m) += c * f.at(a, ks, b, ms);
          }
      }
  return out;
}

using WeightTable = std::vector<std::vector<std::vector<double>>>;

WeightTable loss_weights(int cutoff, double eta) {
  const int n = cutoff + 1;
  WeightTable w(n, std::vector<std::vector<double>>(n));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      const int jmax = cutoff - std::max(k, m);
      w[k][m].resize(jmax + 1);
      for (int j = 0; j <= jmax; ++j) {
        const double binom = std::exp(0.5 * (log_binomial(k + j, j) + log_binomial(m + j, j)));
        w[k][m][j] = binom * std::pow(eta, 0.5 * (k + m)) * std::pow(1.0 - eta, j);
      }
    }
  return w;
}

WeightTable amplifier_weights(int cutoff, double gain) {
  const int n = cutoff + 1;
  const double r = (gain - 1.0) / gain;
  WeightTable w(n, std::vector<std::vector<double>>(n));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      const int jmax = std::min(k, m);
      w[k][m].resize(jmax + 1);
      for (int j = 0; j <= jmax; ++j) {
        const double binom = std::exp(0.5 * (log_binomial(k, j) + log_binomial(m, j)));
        w[k][m][j] = binom * std::pow(r, j) * std::pow(gain, -0.5 * (k + m - 2 * j) - 1.0);
      }
    }
  return w;
}

FockTensor both_modes(const FockTensor& f, int shift, const WeightTable& w) {
  return apply_single_mode(apply_single_mode(f, 0, shift, w), 1, shift, w);
}

}  // namespace

FockTensor::FockTensor(int cutoff) : cutoff_(cutoff) {
  require_cutoff(cutoff);
  const std::size_t n = static_cast<std::size_t>(cutoff) + 1;
  data_.assign(n * n * n * n, 0.0);
}

double FockTensor::trace() const {
  double s = 0.0;
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b) s += at(a, b, a, b);
  return s;
}

void FockTensor::scale(double s) {
  for (double& v : data_) v *= s;
}

Eigen::MatrixXd FockTensor::matrix() const {
  const int n = dim(), n2 = n * n;
  Eigen::MatrixXd m(n2, n2);
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = 0; k2 < n; ++k2)
      for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) m(k1 * n + k2, m1 * n + m2) = at(k1, k2, m1, m2);
  return m;
}

FockTensor FockTensor::truncated(int cutoff) const {
  if (cutoff > cutoff_) throw Error(ErrorCode::InvalidArgument, "cannot truncate to a larger cutoff");
  FockTensor out(cutoff);
  for (int k1 = 0; k1 <= cutoff; ++k1)
    for (int k2 = 0; k2 <= cutoff; ++k2)
      for (int m1 = 0; m1 <= cutoff; ++m1)
        for (int m2 = 0; m2 <= cutoff; ++m2) out.at(k1, k2, m1, m2) = at(k1, k2, m1, m2);
  return out;
}

std::vector<double> taylor_coeffs(const QuadraticExponent& q, const std::vector<int>& caps) {
  std::vector<double> t = coefficient_table(q.A, q.L, caps, false);
  if (q.c0 != 0.0) {
    const double e = std::exp(q.c0);
    for (double& v : t) v *= e;
  }
  return t;
}

FockTensor gaussian_fock(const SymmetricCCM& ccm, int cutoff) {
  const Eigen::Matrix4d a = (SigmaBasisMatrix::sigma1_identity() + beta(ccm)).dense();
  return fock_from_kernel(a, gamma_prime(ccm).determinant(), cutoff);
}

FockTensor gaussian_fock(const Eigen::Matrix4d& ccm, int cutoff) {
  const Eigen::Matrix4d s1 = SigmaBasisMatrix::sigma1_identity().dense();
  const Eigen::Matrix4d gp = ccm + 0.5 * s1;
  const double det = gp.determinant();
  if (std::abs(det) < kSingularTol) throw Error(ErrorCode::SingularMatrix, "gamma' is singular");
  const Eigen::Matrix4d s3 = sigma3_identity();
  const Eigen::Matrix4d a = s1 + s3 * gp.inverse() * s3;
  return fock_from_kernel(0.5 * (a + a.transpose()), det, cutoff);
}

PhotonFock apply_photon_ops(const FockTensor& f, PhotonOp op, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "photon number must be positive");
  if (f.cutoff() < m + 2) {
    std::ostringstream msg;
    msg << "cutoff " << f.cutoff() << " is too small for " << m << " photon(s); need at least " << m + 2;
    throw Error(ErrorCode::CutoffTooSmall, msg.str());
  }
  const int n = f.dim();
  // Subtraction reads ρ[k+m] with weight sqrt((k+1)...(k+m)); addition
  // reads ρ[k-m] with weight sqrt(k(k-1)...(k-m+1)).
  std::vector<double> weight(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double p = 1.0;
    for (int r = 1; r <= m; ++r) p *= op == PhotonOp::Subtract ? k + r : k - r + 1;
    weight[k] = std::sqrt(std::max(p, 0.0));
  }
  const int shift = op == PhotonOp::Subtract ? m : -m;
  auto inside = [n](int k) { return k >= 0 && k < n; };
  PhotonFock out{FockTensor(f.cutoff()), 0.0};
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = 0; k2 < n; ++k2)
      for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
          const int a = k1 + shift, b = k2 + shift, c = m1 + shift, d = m2 + shift;
          if (!inside(a) || !inside(b) || !inside(c) || !inside(d)) continue;
          out.state.at(k1, k2, m1, m2) = weight[k1] * weight[k2] * weight[m1] * weight[m2] * f.at(a, b, c, d);
        }
  out.raw_trace = out.state.trace();
  if (!(out.raw_trace > 1e-300))
    throw Error(ErrorCode::ZeroState, std::string("photon ") + photon_op_name(op) + " gives the zero operator");
  out.state.scale(1.0 / out.raw_trace);
  return out;
}

FockTensor evolve_fock_pure_loss(const FockTensor& f, const ChannelParams& ch) {
  if (ch.nbar != 0.0) throw Error(ErrorCode::InvalidArgument, "pure-loss route requires nbar = 0");
  if (ch.decay == 0.0) return f;
  return both_modes(f, 1, loss_weights(f.cutoff(), std::exp(-ch.decay)));
}

FockTensor evolve_fock_thermal(const FockTensor& f, const ChannelParams& ch) {
  if (ch.decay == 0.0) return f;
  const double e = std::exp(-ch.decay);
  const double gain = 1.0 + ch.nbar * (1.0 - e);
  const FockTensor lossy = both_modes(f, 1, loss_weights(f.cutoff(), e / gain));
  if (gain == 1.0) return lossy;
  return both_modes(lossy, -1, amplifier_weights(f.cutoff(), gain));
}

PhotonFock joint_quadratic_fock(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                                const ChannelParams& ch, int cutoff) {
  require_cutoff(cutoff);
  const SymmetricCCM evolved = evolve_ccm(kernel, ch);
  const SigmaBasisMatrix gtp = gamma_prime(evolved);
  const Eigen::Matrix4d bt = beta(evolved).dense();
  const Eigen::Matrix4d binv = gamma_prime(kernel).sigma3_conjugated().dense();
  const EvolvedSelectors s = evolved_selectors(kernel, ch);

  const Eigen::MatrixXd e0 = parameter_selector(GenGroup::Eps), x0 = parameter_selector(GenGroup::Xi);
  const Eigen::MatrixXd h0 = parameter_selector(GenGroup::Eta), z0 = parameter_selector(GenGroup::Zeta);
  Eigen::MatrixXd xh(4, 8), shift(4, 8);
  xh << s.xi, s.eta;
  shift << s.eta + s.eps, s.xi + s.zeta;

  // Parameter-parameter block and the linear coupling u = Bᵀ S to the Fock
  // variables S = (s1, s2, s1', s2').
  const Eigen::MatrixXd cpp = p_quadratic_form(binv, e0, x0, h0, z0) -
                              p_quadratic_form(gtp.sigma3_conjugated().dense(), s.eps, s.xi, s.eta, s.zeta) +
                              (s.eta.transpose() * s.xi + s.xi.transpose() * s.eta) +
                              xh.transpose() * bt * xh;
  const Eigen::MatrixXd b = bt * xh + shift;

  // Polynomial moments: table over the derivative box, each entry a dense
  // polynomial in S of degree <= D per variable.
  const std::vector<int> idx(deriv.orders.begin(), deriv.orders.end());
  const int degree = deriv.total_order();
  const int pd = degree + 1, poly_size = pd * pd * pd * pd;
  std::vector<std::size_t> stride(8);
  std::size_t box = 1;
  for (int i = 7; i >= 0; --i) {
    stride[i] = box;
    box *= static_cast<std::size_t>(idx[i] + 1);
  }
  if (static_cast<double>(box) * poly_size > kMaxTaylorEntries)
    throw Error(ErrorCode::CapacityExceeded, "derivative order too large for the joint Fock builder");
  std::vector<double> table(box * poly_size, 0.0);
  auto poly = [&](std::size_t pos) { return table.data() + pos * poly_size; };
  const std::array<int, 4> pstride{pd * pd * pd, pd * pd, pd, 1};
  poly(0)[0] = 1.0;
  std::vector<int> cur(8, 0);
  for (std::size_t pos = 1; pos < box; ++pos) {
    for (int i = 7; i >= 0; --i) {
      if (++cur[i] <= idx[i]) break;
      cur[i] = 0;
    }
    int lead = 0;
    while (cur[lead] == 0) ++lead;
    const std::size_t prev = pos - stride[lead];
    --cur[lead];
    double* dst = poly(pos);
    const double* src = poly(prev);
    for (int a = 0; a < poly_size; ++a) {
      if (src[a] == 0.0) continue;
      int rem = a;
      for (int r = 0; r < 4; ++r) {
        const int ar = rem / pstride[r];
        rem %= pstride[r];
        if (b(r, lead) != 0.0 && ar + 1 < pd) dst[a + pstride[r]] += b(r, lead) * src[a];
      }
    }
    for (int j = 0; j < 8; ++j) {
      if (cur[j] == 0 || cpp(lead, j) == 0.0) continue;
      const double w = cpp(lead, j) * cur[j];
      const double* sj = poly(prev - stride[j]);
      for (int a = 0; a < poly_size; ++a) dst[a] += w * sj[a];
    }
    ++cur[lead];
  }

  const Eigen::Matrix4d ass = (SigmaBasisMatrix::sigma1_identity() + beta(evolved)).dense();
  const FockTensor d = fock_from_kernel(ass, gtp.determinant(), cutoff);

  const int n = cutoff + 1;
  std::vector<std::vector<double>> falling(n, std::vector<double>(pd, 0.0));
  for (int k = 0; k < n; ++k) {
    double p = 1.0;
    for (int a = 0; a < pd && a <= k; ++a) {
      falling[k][a] = std::sqrt(p);
      p *= k - a;
    }
  }
  PhotonFock out{FockTensor(cutoff), 0.0};
  const double* top = poly(box - 1);
  for (int a = 0; a < poly_size; ++a) {
    const double c = top[a];
    if (c == 0.0) continue;
    const int a1 = a / pstride[0], a2 = (a / pstride[1]) % pd, a3 = (a / pstride[2]) % pd, a4 = a % pd;
    for (int k1 = a1; k1 < n; ++k1)
      for (int k2 = a2; k2 < n; ++k2)
        for (int m1 = a3; m1 < n; ++m1) {
          const double w = c * falling[k1][a1] * falling[k2][a2] * falling[m1][a3];
          for (int m2 = a4; m2 < n; ++m2)
            out.state.at(k1, k2, m1, m2) += w * falling[m2][a4] * d.at(k1 - a1, k2 - a2, m1 - a3, m2 - a4);
        }
  }
  out.raw_trace = out.state.trace();
  if (out.raw_trace == 0.0) throw Error(ErrorCode::ZeroState, "derivative annihilates the state");
  out.state.scale(1.0 / out.raw_trace);
  return out;
}

RealignedNorms realign_and_trace_norm(const FockTensor& f) {
  const int n = f.dim();
  const int n2 = n * n;
  // Union-find over rows (0..n²-1) and columns (n²..2n²-1) of the realigned
  // matrix; each component is an independent block.
  std::vector<int> parent(2 * n2);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  RealignedNorms out;
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = 0; k2 < n; ++k2)
      for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2) {
          if (f.at(k1, k2, m1, m2) == 0.0) continue;
          const int r = find(k1 * n + m1), c = find(n2 + k2 * n + m2);
          if (r != c) parent[r] = c;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.trace += f.at(a, a, b, b);

  std::vector<std::vector<int>> rows(2 * n2), cols(2 * n2);
  for (int r = 0; r < n2; ++r) rows[find(r)].push_back(r);
  for (int c = 0; c < n2; ++c) cols[find(n2 + c)].push_back(c);
  for (int g = 0; g < 2 * n2; ++g) {
    if (rows[g].empty() || cols[g].empty()) continue;
    Eigen::MatrixXd block(rows[g].size(), cols[g].size());
    bool any = false;
    for (std::size_t i = 0; i < rows[g].size(); ++i)
      for (std::size_t j = 0; j < cols[g].size(); ++j) {
        const int r = rows[g][i], c = cols[g][j];
        const double v = f.at(r / n, c / n, r % n, c % n);
        block(i, j) = v;
        any = any || v != 0.0;
      }
    if (!any) continue;
    ++out.blocks;
    if (block.rows() == 1 || block.cols() == 1) {
      out.trace_norm += block.norm();
    } else {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(block);
      out.trace_norm += svd.singularValues().sum();
    }
  }
  return out;
}

FockMoments extract_moments(const FockTensor& f) {
  const int n = f.dim();
  FockMoments m;
  double n1 = 0.0, n2 = 0.0, pair = 0.0, hop = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double p = f.at(a, b, a, b);
      n1 += a * p;
      n2 += b * p;
      if (a >= 1 && b >= 1) pair += std::sqrt(static_cast<double>(a) * b) * f.at(a - 1, b - 1, a, b);
      if (a >= 1 && b + 1 < n) hop += std::sqrt(static_cast<double>(a) * (b + 1)) * f.at(a - 1, b + 1, a, b);
    }
  m.b1 = n1 + 0.5;
  m.b2 = n2 + 0.5;
  m.c1 = -pair;
  m.c2 = hop;
  return m;
}

namespace {
constexpr char kMagic[4] = {'C', 'V', 'R', 'O'};
constexpr std::uint32_t kFormatVersion = 1;
}  // namespace

void save_fock(const FockTensor& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  const std::uint32_t version = kFormatVersion, cutoff = static_cast<std::uint32_t>(f.cutoff());
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&cutoff), sizeof cutoff);
  os.write(reinterpret_cast<const char*>(f.data().data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

FockTensor load_fock(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  char magic[4];
  std::uint32_t version = 0, cutoff = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&cutoff), sizeof cutoff);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorCode::Io, "'" + path + "' is not a tensor dump");
  if (version != kFormatVersion) throw Error(ErrorCode::Io, "unsupported tensor dump version");
  FockTensor f(static_cast<int>(cutoff));
  is.read(reinterpret_cast<char*>(f.data().data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!is) throw Error(ErrorCode::Io, "'" + path + "' is truncated");
  return f;
}

}  // namespace cvr
