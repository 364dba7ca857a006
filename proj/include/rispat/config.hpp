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

// JSON scenario configuration. dBm/dB values exist only here; everything
// handed to the solvers is linear.

#ifndef RISPAT_CONFIG_HPP_
#define RISPAT_CONFIG_HPP_

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rispat/scenario.hpp"

namespace rispat {

using json = nlohmann::json;

/// Decorrelates seeds for independent streams (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class AlphabetKind { kRandom, kUniform, kParametric };

inline std::string to_string(AlphabetKind k) {
  switch (k) {
    case AlphabetKind::kRandom: return "random";
    case AlphabetKind::kUniform: return "uniform";
    case AlphabetKind::kParametric: return "parametric";
  }
  return "random";
}

inline AlphabetKind alphabet_kind_from(const std::string& s) {
  if (s == "random") return AlphabetKind::kRandom;
  if (s == "uniform") return AlphabetKind::kUniform;
  if (s == "parametric") return AlphabetKind::kParametric;
  throw std::invalid_argument("unknown alphabet kind: " + s);
}

struct ScenarioConfig {
  int users = 1;     // M
  int antennas = 1;  // D
  std::vector<int> panel_sizes{8};
  // Either explicit alphabet sizes b_n or a 2-bit/1-bit mixing ratio.
  std::vector<int> bit_profile;
  std::optional<double> two_bit_ratio = 0.5;
  AlphabetKind alphabet = AlphabetKind::kRandom;
  int parametric_k = 10;
  double gamma_dbm = 40.0;
  std::vector<double> noise_dbm{-50.0};
  double sigma0_sq = 1.0;
  std::string channel_model = "iid";
  std::optional<RisGeometry> geometry;
  std::uint64_t seed = 1;

  int units() const { return std::accumulate(panel_sizes.begin(), panel_sizes.end(), 0); }

  std::vector<int> alphabet_sizes() const {
    if (!bit_profile.empty()) {
      if (static_cast<int>(bit_profile.size()) != units()) {
        throw std::invalid_argument("bit_profile length must equal sum(n_k)");
      }
      return bit_profile;
    }
    return two_bit_mix(units(), two_bit_ratio.value_or(0.0));
  }
};

inline std::vector<PhaseAlphabet> make_alphabets(const ScenarioConfig& c,
                                                 std::uint64_t seed) {
  const auto sizes = c.alphabet_sizes();
  switch (c.alphabet) {
    case AlphabetKind::kRandom:
      return random_alphabets(sizes, seed);
    case AlphabetKind::kUniform: {
      std::vector<PhaseAlphabet> out;
      for (int b : sizes) out.push_back(uniform_alphabet(b));
      return out;
    }
    case AlphabetKind::kParametric:
      return std::vector<PhaseAlphabet>(sizes.size(), parametric_alphabet(c.parametric_k));
  }
  throw std::logic_error("unreachable");
}

/// Instance for one repetition; channel and alphabet streams derive from `seed`.
inline ProblemInstance make_instance(const ScenarioConfig& c, std::uint64_t seed) {
  ProblemInstance p;
  p.users = c.users;
  p.antennas = c.antennas;
  p.panel_sizes = c.panel_sizes;
  p.channel_variance = c.sigma0_sq;
  p.snr_floor = db_to_ratio(c.gamma_dbm);
  if (c.noise_dbm.size() == 1) {
    p.noise_mw.assign(c.users, dbm_to_mw(c.noise_dbm.front()));
  } else if (static_cast<int>(c.noise_dbm.size()) == c.users) {
    for (double n : c.noise_dbm) p.noise_mw.push_back(dbm_to_mw(n));
  } else {
    throw std::invalid_argument("noise_dbm must have 1 or M entries");
  }
  if (c.channel_model == "iid") {
    p.reflect = gen_iid_channels(c.users, c.antennas, c.panel_sizes, c.sigma0_sq,
                                 mix_seed(seed, 0));
  } else if (c.channel_model == "farfield") {
    if (!c.geometry) throw std::invalid_argument("farfield channel model needs geometry");
    p.reflect = gen_farfield_channels(*c.geometry, c.users, c.antennas);
    int n = 0;
    p.panel_sizes.clear();
    for (const auto& panel : c.geometry->panels) {
      p.panel_sizes.push_back(static_cast<int>(panel.unit_positions.size()));
      n += p.panel_sizes.back();
    }
    if (n != c.units()) throw std::invalid_argument("geometry unit count must equal sum(n_k)");
  } else {
    throw std::invalid_argument("unknown channel_model: " + c.channel_model);
  }
  p.alphabets = make_alphabets(c, mix_seed(seed, 1));
  p.validate();
  return p;
}

inline void to_json(json& j, const Polar& p) {
  j = json{{"r", p.r}, {"theta", p.theta}, {"phi", p.phi}};
}
inline void from_json(const json& j, Polar& p) {
  p.r = j.at("r").get<double>();
  p.theta = j.value("theta", 0.0);
  p.phi = j.value("phi", 0.0);
}

inline void to_json(json& j, const RisGeometry& g) {
  j = json{{"wavelength", g.wavelength}, {"scatter_gain", g.scatter_gain}, {"panels", json::array()}};
  for (const auto& p : g.panels) {
    j["panels"].push_back({{"units", p.unit_positions}, {"antennas", p.antennas}, {"users", p.users}});
  }
}
inline void from_json(const json& j, RisGeometry& g) {
  g.wavelength = j.at("wavelength").get<double>();
  g.scatter_gain = j.value("scatter_gain", 1.0);
  g.panels.clear();
  for (const auto& p : j.at("panels")) {
    RisPanel panel;
    panel.unit_positions = p.at("units").get<std::vector<std::array<double, 3>>>();
    panel.antennas = p.at("antennas").get<std::vector<Polar>>();
    panel.users = p.at("users").get<std::vector<Polar>>();
    g.panels.push_back(std::move(panel));
  }
}

inline void to_json(json& j, const ScenarioConfig& c) {
  j = json{{"M", c.users},
           {"D", c.antennas},
           {"K", c.panel_sizes.size()},
           {"n_k", c.panel_sizes},
           {"alphabet", to_string(c.alphabet)},
           {"gamma_dbm", c.gamma_dbm},
           {"noise_dbm", c.noise_dbm},
           {"sigma0_sq", c.sigma0_sq},
           {"channel_model", c.channel_model},
           {"seed", c.seed}};
  if (!c.bit_profile.empty()) j["bit_profile"] = c.bit_profile;
  else j["two_bit_ratio"] = c.two_bit_ratio.value_or(0.0);
  if (c.alphabet == AlphabetKind::kParametric) j["k"] = c.parametric_k;
  if (c.geometry) j["geometry"] = *c.geometry;
}

inline void from_json(const json& j, ScenarioConfig& c) {
  c = ScenarioConfig{};
  c.users = j.value("M", 1);
  c.antennas = j.value("D", 1);
  if (j.contains("n_k")) c.panel_sizes = j.at("n_k").get<std::vector<int>>();
  else if (j.contains("N")) c.panel_sizes = {j.at("N").get<int>()};
  if (j.contains("K") && j.at("K").get<std::size_t>() != c.panel_sizes.size()) {
    throw std::invalid_argument("K must equal the length of n_k");
  }
  if (j.contains("bit_profile")) {
    c.bit_profile = j.at("bit_profile").get<std::vector<int>>();
    c.two_bit_ratio.reset();
  } else if (j.contains("two_bit_ratio")) {
    c.two_bit_ratio = j.at("two_bit_ratio").get<double>();
  }
  c.alphabet = alphabet_kind_from(j.value("alphabet", std::string("random")));
  c.parametric_k = j.value("k", 10);
  c.gamma_dbm = j.value("gamma_dbm", 40.0);
  if (j.contains("noise_dbm")) {
    const auto& n = j.at("noise_dbm");
    c.noise_dbm = n.is_array() ? n.get<std::vector<double>>() : std::vector<double>{n.get<double>()};
  }
  c.sigma0_sq = j.value("sigma0_sq", 1.0);
  c.channel_model = j.value("channel_model", std::string("iid"));
  if (j.contains("geometry")) c.geometry = j.at("geometry").get<RisGeometry>();
  c.seed = j.value("seed", std::uint64_t{1});
  if (c.users < 1 || c.antennas < 1 || c.panel_sizes.empty()) {
    throw std::invalid_argument("scenario: M, D and n_k must be positive");
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace rispat

#endif  // RISPAT_CONFIG_HPP_
