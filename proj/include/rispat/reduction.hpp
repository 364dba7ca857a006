// Copyright 2026 The rispat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISPAT_REDUCTION_HPP_
#define RISPAT_REDUCTION_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rispat/numerics.hpp"
#include "rispat/scenario.hpp"

namespace rispat {

/// Raised when the effective channel vanishes and no finite power meets the
/// SNR floor.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One alphabet index per unit.
struct PhaseVector {
  std::vector<int> indices;

  friend bool operator==(const PhaseVector&, const PhaseVector&) = default;
  friend auto operator<=>(const PhaseVector&, const PhaseVector&) = default;
};

inline void check_phase_vector(const std::vector<PhaseAlphabet>& alphabets,
                               const PhaseVector& v) {
  if (v.indices.size() != alphabets.size()) {
    throw std::invalid_argument("PhaseVector: length does not match unit count");
  }
  for (std::size_t n = 0; n < alphabets.size(); ++n) {
    if (v.indices[n] < 0 || v.indices[n] >= alphabets[n].size()) {
      throw std::invalid_argument("PhaseVector: index out of alphabet range");
    }
  }
}

inline std::vector<double> phases_of(const std::vector<PhaseAlphabet>& alphabets,
                                     const PhaseVector& v) {
  check_phase_vector(alphabets, v);
  std::vector<double> out(alphabets.size());
  for (std::size_t n = 0; n < alphabets.size(); ++n) {
    out[n] = alphabets[n][v.indices[n]];
  }
  return out;
}

/// Unimodular vector e^{j theta_n}.
inline CVec unimodular(const std::vector<PhaseAlphabet>& alphabets,
                       const PhaseVector& v) {
  const auto th = phases_of(alphabets, v);
  CVec out(th.size());
  for (std::size_t n = 0; n < th.size(); ++n) out(n) = std::polar(1.0, th[n]);
  return out;
}

/// Stacked factor T (MD x N) whose Gram matrix is sum_m c_m R_m^H R_m with
/// c_m = prod_{i != m} sigma_i^2. Block m is sqrt(c_m) reflect[m]^H.
struct QuadraticSurrogate {
  CMat t;
  std::vector<double> weights;  // c_m
};

inline std::vector<double> cross_noise_weights(const std::vector<double>& noise) {
  std::vector<double> c(noise.size(), 1.0);
  for (std::size_t m = 0; m < noise.size(); ++m) {
    for (std::size_t i = 0; i < noise.size(); ++i) {
      if (i != m) c[m] *= noise[i];
    }
  }
  return c;
}

inline double noise_product(const std::vector<double>& noise) {
  double p = 1.0;
  for (double s : noise) p *= s;
  return p;
}

inline QuadraticSurrogate build_surrogate(const ProblemInstance& inst) {
  inst.validate();
  QuadraticSurrogate out;
  out.weights = cross_noise_weights(inst.noise_mw);
  const int d = inst.antennas;
  out.t.resize(inst.rank(), inst.units());
  for (int m = 0; m < inst.users; ++m) {
    out.t.middleRows(m * d, d) = std::sqrt(out.weights[m]) * inst.reflect[m].adjoint();
  }
  return out;
}

/// ||T v||^2.
inline double surrogate_objective(const CMat& t, const CVec& v) {
  if (t.cols() != v.size()) {
    throw std::invalid_argument("surrogate_objective: dimension mismatch");
  }
  return (t * v).squaredNorm();
}

inline double surrogate_objective(const QuadraticSurrogate& s,
                                  const std::vector<PhaseAlphabet>& alphabets,
                                  const PhaseVector& v) {
  return surrogate_objective(s.t, unimodular(alphabets, v));
}

/// D x D matrix sum_m c_m g_m g_m^H with g_m = reflect[m]^H v.
inline CMat weighted_outer(const ProblemInstance& inst, const CVec& v) {
  const auto c = cross_noise_weights(inst.noise_mw);
  CMat acc = CMat::Zero(inst.antennas, inst.antennas);
  for (int m = 0; m < inst.users; ++m) {
    const CVec g = inst.reflect[m].adjoint() * v;
    acc += c[m] * g * g.adjoint();
  }
  return acc;
}

/// Largest eigenvalue of the weighted outer-product matrix. With one user it
/// has a single nonzero eigenvalue equal to the surrogate objective, which is
/// returned through the same arithmetic path.
inline double true_mu_max(const ProblemInstance& inst, const PhaseVector& v) {
  inst.validate();
  const CVec x = unimodular(inst.alphabets, v);
  if (inst.users == 1) return surrogate_objective(build_surrogate(inst).t, x);
  const CMat h = weighted_outer(inst, x);
  return std::max(0.0, hermitian_max_eig(h).value);
}

struct PowerLevel {
  double mw = 0.0;
  double dbm = 0.0;
};

inline PowerLevel power_for_mu(const ProblemInstance& inst, double mu_max) {
  if (!(mu_max > 0.0)) {
    throw InfeasibleError("min_power: effective channel is zero, SNR floor unreachable");
  }
  PowerLevel p;
  p.mw = inst.snr_floor * inst.users * noise_product(inst.noise_mw) / mu_max;
  p.dbm = mw_to_dbm(p.mw);
  return p;
}

/// Smallest transmit power meeting the average-SNR floor for this v.
inline PowerLevel min_power(const ProblemInstance& inst, const PhaseVector& v) {
  return power_for_mu(inst, true_mu_max(inst, v));
}

/// Precoder w = sqrt(P) q, q the unit principal eigenvector of the weighted
/// outer-product matrix and P = min_power(v), so the average-SNR constraint
/// holds with equality.
inline CVec recover_precoder(const ProblemInstance& inst, const PhaseVector& v) {
  inst.validate();
  const CVec x = unimodular(inst.alphabets, v);
  const CMat h = weighted_outer(inst, x);
  if (h.norm() == 0.0) {
    throw InfeasibleError("recover_precoder: weighted channel matrix is zero");
  }
  const EigenPair e = hermitian_max_eig(h);
  const PowerLevel p = power_for_mu(inst, true_mu_max(inst, v));
  return std::sqrt(p.mw) * e.vector;
}

struct SnrAudit {
  std::vector<double> per_user;
  double average = 0.0;
};

/// SNR_m = |v^H reflect[m] w|^2 / sigma_m^2.
inline SnrAudit achieved_snrs(const ProblemInstance& inst, const PhaseVector& v,
                              const CVec& w) {
  inst.validate();
  if (w.size() != inst.antennas) {
    throw std::invalid_argument("achieved_snrs: precoder length must be D");
  }
  const CVec x = unimodular(inst.alphabets, v);
  SnrAudit out;
  for (int m = 0; m < inst.users; ++m) {
    const cplx amp = x.dot(inst.reflect[m] * w);  // x^H (R w)
    out.per_user.push_back(std::norm(amp) / inst.noise_mw[m]);
    out.average += out.per_user.back();
  }
  out.average /= inst.users;
  return out;
}

/// Everything a solver reports about its best configuration.
struct SolveReport {
  std::string method;
  PhaseVector best;
  double objective = 0.0;  // surrogate ||T v||^2
  double mu_max = 0.0;
  PowerLevel power;
  CVec precoder;
  std::uint64_t systems = 0;          // intersection systems enumerated
  std::uint64_t systems_rejected = 0;  // no admissible auxiliary point
  std::uint64_t candidate_slots = 0;  // sum over systems of 2^L
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t degenerate_amplitudes = 0;
  std::uint64_t rim_systems = 0;  // zero-amplitude vertex systems (PAT)
  bool fell_back_to_exhaustive = false;
  double wall_ms = 0.0;
};

/// Fills the power-domain fields of a report from its best phase vector.
inline void finalize_report(const ProblemInstance& inst, const QuadraticSurrogate& s,
                            SolveReport& rep) {
  rep.objective = surrogate_objective(s, inst.alphabets, rep.best);
  rep.mu_max = true_mu_max(inst, rep.best);
  rep.power = power_for_mu(inst, rep.mu_max);
  rep.precoder = recover_precoder(inst, rep.best);
}

}  // namespace rispat

#endif  // RISPAT_REDUCTION_HPP_
