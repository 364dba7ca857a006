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

#ifndef RISPAT_SCENARIO_HPP_
#define RISPAT_SCENARIO_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rispat/numerics.hpp"

namespace rispat {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

/// Ordered set of phases one RIS unit can realize.
class PhaseAlphabet {
 public:
  explicit PhaseAlphabet(std::vector<double> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) {
      throw std::invalid_argument("PhaseAlphabet: at least one phase required");
    }
    for (std::size_t i = 0; i < phases_.size(); ++i) {
      const double p = phases_[i];
      if (!std::isfinite(p) || p < 0.0 || p >= kTwoPi) {
        throw std::invalid_argument("PhaseAlphabet: phase outside [0, 2pi)");
      }
      if (i > 0 && !(p > phases_[i - 1])) {
        throw std::invalid_argument(
            "PhaseAlphabet: phases must be strictly increasing");
      }
    }
  }

  int size() const { return static_cast<int>(phases_.size()); }
  double operator[](int i) const { return phases_[i]; }
  const std::vector<double>& phases() const { return phases_; }
  /// Single-phase units never change and take no part in the search.
  bool frozen() const { return phases_.size() == 1; }

  friend bool operator==(const PhaseAlphabet&, const PhaseAlphabet&) = default;

 private:
  std::vector<double> phases_;
};

/// Evenly spaced alphabet {0, 2pi/b, ...}.
inline PhaseAlphabet uniform_alphabet(int b) {
  if (b < 1) throw std::invalid_argument("uniform_alphabet: b must be >= 1");
  std::vector<double> p(b);
  for (int i = 0; i < b; ++i) p[i] = kTwoPi * i / b;
  return PhaseAlphabet(std::move(p));
}

/// Four-phase alphabet {0, k pi/20, k pi/10, 3k pi/20}; k = 10 is uniform 2-bit.
inline PhaseAlphabet parametric_alphabet(int k) {
  if (k < 1 || k > 10) {
    throw std::invalid_argument("parametric_alphabet: k must be in [1, 10]");
  }
  const double pi = std::numbers::pi;
  return PhaseAlphabet({0.0, k * pi / 20.0, k * pi / 10.0, 3.0 * k * pi / 20.0});
}

/// Alphabet n has sizes[n] phases drawn uniformly on [0, 2pi) and sorted.
inline std::vector<PhaseAlphabet> random_alphabets(const std::vector<int>& sizes,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<PhaseAlphabet> out;
  out.reserve(sizes.size());
  for (int b : sizes) {
    if (b < 1) throw std::invalid_argument("random_alphabets: b_n must be >= 1");
    std::vector<double> p;
    p.reserve(b);
    // Redraw on the (measure-zero) event of a duplicate.
    while (static_cast<int>(p.size()) < b) {
      const double x = wrap_angle(angle(rng));
      if (std::find(p.begin(), p.end(), x) == p.end()) p.push_back(x);
    }
    std::sort(p.begin(), p.end());
    out.emplace_back(std::move(p));
  }
  return out;
}

/// Sizes for a mix of 2-bit (4 phases) and 1-bit (2 phases) units: the first
/// round(ratio * N) units are 2-bit.
inline std::vector<int> two_bit_mix(int n, double ratio) {
  if (n < 1 || ratio < 0.0 || ratio > 1.0) {
    throw std::invalid_argument("two_bit_mix: need N >= 1 and ratio in [0, 1]");
  }
  const int four = static_cast<int>(std::lround(ratio * n));
  std::vector<int> sizes(n, 2);
  std::fill(sizes.begin(), sizes.begin() + four, 4);
  return sizes;
}

struct Polar {
  double r = 1.0;      // meters
  double theta = 0.0;  // polar angle, radians
  double phi = 0.0;    // azimuth, radians
};

struct RisPanel {
  std::vector<std::array<double, 3>> unit_positions;  // meters
  std::vector<Polar> antennas;  // one per AP antenna, relative to the panel
  std::vector<Polar> users;     // one per user, relative to the panel
};

struct RisGeometry {
  double wavelength = 0.1;  // meters
  double scatter_gain = 1.0;
  std::vector<RisPanel> panels;
};

/// Complete optimization input.
///
/// `reflect[m]` is the N x D cascaded channel diag(h_m^H) G of user m, so the
/// received amplitude for phase vector v and precoder w is v^H reflect[m] w.
struct ProblemInstance {
  int users = 1;     // M
  int antennas = 1;  // D
  std::vector<int> panel_sizes;
  std::vector<CMat> reflect;
  std::vector<double> noise_mw;  // sigma_m^2
  double channel_variance = 1.0;
  double snr_floor = 1.0;  // gamma, linear
  std::vector<PhaseAlphabet> alphabets;

  int units() const { return static_cast<int>(alphabets.size()); }
  int rank() const { return users * antennas; }

  void validate() const {
    if (users < 1 || antennas < 1) {
      throw std::invalid_argument("ProblemInstance: M and D must be >= 1");
    }
    const int n = units();
    if (n < 1) throw std::invalid_argument("ProblemInstance: no RIS units");
    if (static_cast<int>(reflect.size()) != users ||
        static_cast<int>(noise_mw.size()) != users) {
      throw std::invalid_argument(
          "ProblemInstance: need one channel and one noise power per user");
    }
    for (const CMat& r : reflect) {
      if (r.rows() != n || r.cols() != antennas) {
        throw std::invalid_argument("ProblemInstance: channel must be N x D");
      }
      if (!r.allFinite()) {
        throw std::invalid_argument("ProblemInstance: non-finite channel");
      }
    }
    for (double s : noise_mw) {
      if (!(s > 0.0)) {
        throw std::invalid_argument("ProblemInstance: noise power must be > 0");
      }
    }
    if (!(snr_floor > 0.0)) {
      throw std::invalid_argument("ProblemInstance: SNR floor must be > 0");
    }
    if (!panel_sizes.empty() &&
        std::accumulate(panel_sizes.begin(), panel_sizes.end(), 0) != n) {
      throw std::invalid_argument("ProblemInstance: panel sizes must sum to N");
    }
  }
};

/// i.i.d. CN(0, variance) cascaded channels. Returns reflect[m] for m < M.
inline std::vector<CMat> gen_iid_channels(int m_users, int d_antennas,
                                          const std::vector<int>& panel_sizes,
                                          double variance, std::uint64_t seed) {
  if (m_users < 1 || d_antennas < 1 || panel_sizes.empty()) {
    throw std::invalid_argument("gen_iid_channels: dimensions must be positive");
  }
  for (int nk : panel_sizes) {
    if (nk < 1) throw std::invalid_argument("gen_iid_channels: empty panel");
  }
  if (!(variance > 0.0)) {
    throw std::invalid_argument("gen_iid_channels: variance must be > 0");
  }
  const int n = std::accumulate(panel_sizes.begin(), panel_sizes.end(), 0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  auto draw = [&] {
    const double re = normal(rng);
    const double im = normal(rng);
    return cplx(re, im);
  };
  // G stacked over panels (N x D), then h_m^H per user (1 x N).
  CMat g(n, d_antennas);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < d_antennas; ++d) g(i, d) = draw();
  }
  std::vector<CMat> out;
  out.reserve(m_users);
  for (int m = 0; m < m_users; ++m) {
    CVec h_conj(n);
    for (int i = 0; i < n; ++i) h_conj(i) = draw();
    out.emplace_back(h_conj.asDiagonal() * g);
  }
  return out;
}

inline std::array<double, 3> direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

/// Deterministic far-field cascaded channels from panel geometry.
inline std::vector<CMat> gen_farfield_channels(const RisGeometry& geo, int m_users,
                                               int d_antennas) {
  if (!(geo.wavelength > 0.0)) {
    throw std::invalid_argument("gen_farfield_channels: wavelength must be > 0");
  }
  if (geo.panels.empty()) {
    throw std::invalid_argument("gen_farfield_channels: no panels");
  }
  int n = 0;
  for (const RisPanel& p : geo.panels) {
    if (p.unit_positions.empty()) {
      throw std::invalid_argument("gen_farfield_channels: empty panel");
    }
    if (static_cast<int>(p.antennas.size()) != d_antennas ||
        static_cast<int>(p.users.size()) != m_users) {
      throw std::invalid_argument(
          "gen_farfield_channels: each panel needs D antenna and M user coordinates");
    }
    for (const Polar& c : p.antennas) {
      if (!(c.r > 0.0)) {
        throw std::invalid_argument("gen_farfield_channels: nonpositive radius");
      }
    }
    for (const Polar& c : p.users) {
      if (!(c.r > 0.0)) {
        throw std::invalid_argument("gen_farfield_channels: nonpositive radius");
      }
    }
    n += static_cast<int>(p.unit_positions.size());
  }
  const double k = kTwoPi / geo.wavelength;
  auto steer = [k](const std::array<double, 3>& p, const Polar& c) {
    const auto u = direction(c.theta, c.phi);
    return std::polar(1.0, k * (p[0] * u[0] + p[1] * u[1] + p[2] * u[2]));
  };
  auto path = [k](const Polar& c) { return std::polar(1.0 / c.r, -k * c.r); };

  std::vector<CMat> out(m_users, CMat(n, d_antennas));
  int row = 0;
  for (const RisPanel& panel : geo.panels) {
    for (const auto& pos : panel.unit_positions) {
      for (int m = 0; m < m_users; ++m) {
        const cplx h = geo.scatter_gain * path(panel.users[m]) *
                       steer(pos, panel.users[m]);
        for (int d = 0; d < d_antennas; ++d) {
          const cplx g = steer(pos, panel.antennas[d]) * path(panel.antennas[d]);
          out[m](row, d) = h * g;
        }
      }
      ++row;
    }
  }
  return out;
}

/// The h^H entry of a single unit for one user, as used by gen_farfield_channels.
inline cplx farfield_user_gain(const RisGeometry& geo, const std::array<double, 3>& pos,
                               const Polar& user) {
  if (!(user.r > 0.0)) {
    throw std::invalid_argument("farfield_user_gain: nonpositive radius");
  }
  const double k = kTwoPi / geo.wavelength;
  const auto u = direction(user.theta, user.phi);
  return geo.scatter_gain * std::polar(1.0 / user.r, -k * user.r) *
         std::polar(1.0, k * (pos[0] * u[0] + pos[1] * u[1] + pos[2] * u[2]));
}

}  // namespace rispat

#endif  // RISPAT_SCENARIO_HPP_
